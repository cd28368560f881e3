//! The ħ-truncated star product `f ⋆ g = Σ_n [f,g]_n ħ^n` on weight-graded series.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::bracket::{rc_bracket, WeightedForm};
use crate::numerics::{fmt_rational, int, Rational};
use crate::poly::{Poly, VarSet};
use crate::racah::{cmz_t_sum, ParamTriple, RacahError};
use crate::report::{indices, triple_strings, VerificationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StarError {
    #[error("truncation orders differ: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error(transparent)]
    Racah(#[from] RacahError),
}

/// Coefficients of `ħ^0 … ħ^N`, each split by weight. Zero forms are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarSeries {
    order: usize,
    coeffs: Vec<BTreeMap<Rational, Poly>>,
}

impl StarSeries {
    pub fn zero(order: usize) -> Self {
        StarSeries {
            order,
            coeffs: vec![BTreeMap::new(); order + 1],
        }
    }

    /// `f` placed at `ħ^0`.
    pub fn inject(f: &WeightedForm, order: usize) -> Self {
        let mut s = StarSeries::zero(order);
        s.add_at(0, &f.weight, &f.form, &int(1));
        s
    }

    /// The constant `1` of weight `0`.
    pub fn unit(order: usize) -> Self {
        StarSeries::inject(&WeightedForm::new(int(0), Poly::one(VarSet::z())), order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, hbar: usize) -> &BTreeMap<Rational, Poly> {
        &self.coeffs[hbar]
    }

    /// The single `ħ^0` component, if that is all the series holds.
    pub fn extract(&self) -> Option<WeightedForm> {
        if self.coeffs[1..].iter().any(|c| !c.is_empty()) || self.coeffs[0].len() != 1 {
            return None;
        }
        let (w, p) = self.coeffs[0].iter().next()?;
        Some(WeightedForm::new(w.clone(), p.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(BTreeMap::is_empty)
    }

    fn add_at(&mut self, hbar: usize, weight: &Rational, p: &Poly, c: &Rational) {
        if hbar > self.order || p.is_zero() || c.is_zero() {
            return;
        }
        let slot = self.coeffs[hbar]
            .entry(weight.clone())
            .or_insert_with(|| Poly::zero(VarSet::z()));
        slot.add_scaled(p, c);
        if slot.is_zero() {
            self.coeffs[hbar].remove(weight);
        }
    }

    pub fn add_scaled(&mut self, other: &StarSeries, c: &Rational) -> Result<(), StarError> {
        if self.order != other.order {
            return Err(StarError::TruncationMismatch(self.order, other.order));
        }
        for (h, comp) in other.coeffs.iter().enumerate() {
            for (w, p) in comp {
                self.add_at(h, w, p, c);
            }
        }
        Ok(())
    }

    pub fn sub(&self, other: &StarSeries) -> Result<StarSeries, StarError> {
        let mut out = self.clone();
        out.add_scaled(other, &int(-1))?;
        Ok(out)
    }
}

impl fmt::Display for StarSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (h, comp) in self.coeffs.iter().enumerate() {
            for (w, p) in comp {
                writeln!(f, "hbar^{h} weight {}: {p}", fmt_rational(w))?;
            }
        }
        Ok(())
    }
}

/// Bilinear product with per-pair coefficients `scale(λ1, λ2, n)` on `[·,·]_n`.
fn star_with<S>(a: &StarSeries, b: &StarSeries, scale: S) -> Result<StarSeries, StarError>
where
    S: Fn(&Rational, &Rational, usize) -> Result<Rational, StarError>,
{
    if a.order != b.order {
        return Err(StarError::TruncationMismatch(a.order, b.order));
    }
    let order = a.order;
    let mut out = StarSeries::zero(order);
    for (i, ca) in a.coeffs.iter().enumerate() {
        for (j, cb) in b.coeffs.iter().enumerate().take(order + 1 - i) {
            for (la, pa) in ca {
                for (lb, pb) in cb {
                    let fa = WeightedForm::new(la.clone(), pa.clone());
                    let fb = WeightedForm::new(lb.clone(), pb.clone());
                    for n in 0..=order - i - j {
                        let c = scale(la, lb, n)?;
                        if c.is_zero() {
                            continue;
                        }
                        let h = rc_bracket(&fa, &fb, n);
                        out.add_at(i + j + n, &h.weight, &h.form, &c);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `a ⋆ b`, truncated at the common order.
pub fn star(a: &StarSeries, b: &StarSeries) -> Result<StarSeries, StarError> {
    star_with(a, b, |_, _, _| Ok(int(1)))
}

/// `(f ⋆ g) ⋆ h − f ⋆ (g ⋆ h)`.
pub fn assoc_defect(
    f: &WeightedForm,
    g: &WeightedForm,
    h: &WeightedForm,
    order: usize,
) -> Result<StarSeries, StarError> {
    let (f, g, h) = (
        StarSeries::inject(f, order),
        StarSeries::inject(g, order),
        StarSeries::inject(h, order),
    );
    star(&star(&f, &g)?, &h)?.sub(&star(&f, &star(&g, &h)?)?)
}

/// The one-parameter deformation `Σ_n t_n^κ(λ1, λ2) [f,g]_n ħ^n`.
pub fn star_kappa(
    kappa: &Rational,
    a: &StarSeries,
    b: &StarSeries,
) -> Result<StarSeries, StarError> {
    star_with(a, b, |l1, l2, n| Ok(cmz_t_sum(kappa, l1, l2, n)?))
}

pub fn assoc_defect_kappa(
    kappa: &Rational,
    f: &WeightedForm,
    g: &WeightedForm,
    h: &WeightedForm,
    order: usize,
) -> Result<StarSeries, StarError> {
    let (f, g, h) = (
        StarSeries::inject(f, order),
        StarSeries::inject(g, order),
        StarSeries::inject(h, order),
    );
    let left = star_kappa(kappa, &star_kappa(kappa, &f, &g)?, &h)?;
    left.sub(&star_kappa(kappa, &f, &star_kappa(kappa, &g, &h)?)?)
}

fn monomial_triples(max_deg: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in 0..=max_deg {
        for b in 0..=max_deg {
            for c in 0..=max_deg {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn forms(params: &ParamTriple, m: [u32; 3]) -> [WeightedForm; 3] {
    [
        WeightedForm::monomial(params.lam1.clone(), m[0]),
        WeightedForm::monomial(params.lam2.clone(), m[1]),
        WeightedForm::monomial(params.lam3.clone(), m[2]),
    ]
}

/// Associativity on monomial triples for one weight triple.
pub fn verify_associativity(
    params: &ParamTriple,
    order: usize,
    max_deg: u32,
) -> Result<VerificationReport, StarError> {
    params.check_admissible()?;
    let sample = triple_strings(params);
    let mut report = VerificationReport::new("star_associativity");
    report.add_sample(sample.clone());
    let zero = StarSeries::zero(order);
    for m in monomial_triples(max_deg) {
        let [f, g, h] = forms(params, m);
        let d = assoc_defect(&f, &g, &h, order)?;
        let idx = indices(&[
            ("N", order),
            ("m1", m[0] as usize),
            ("m2", m[1] as usize),
            ("m3", m[2] as usize),
        ]);
        report.check(&sample, idx, &d, &zero);
    }
    Ok(report)
}

pub fn associativity_suite(
    samples: &[ParamTriple],
    order: usize,
    max_deg: u32,
) -> Result<VerificationReport, StarError> {
    let parts = samples
        .par_iter()
        .map(|s| verify_associativity(s, order, max_deg))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VerificationReport::merge_all(
        "star_associativity",
        false,
        parts,
    ))
}

/// κ-deformed associativity, report only; coefficient failures become notes.
pub fn kappa_associativity_report(
    params: &ParamTriple,
    kappa: &Rational,
    order: usize,
    max_deg: u32,
) -> VerificationReport {
    let mut report = VerificationReport::report_only("cmz_star_associativity");
    let mut sample = vec![fmt_rational(kappa)];
    sample.extend(triple_strings(params));
    report.add_sample(sample.clone());
    let zero = StarSeries::zero(order);
    for m in monomial_triples(max_deg) {
        let [f, g, h] = forms(params, m);
        match assoc_defect_kappa(kappa, &f, &g, &h, order) {
            Ok(d) => {
                let idx = indices(&[
                    ("N", order),
                    ("m1", m[0] as usize),
                    ("m2", m[1] as usize),
                    ("m3", m[2] as usize),
                ]);
                report.check_grouped(
                    &format!("κ={}", fmt_rational(kappa)),
                    &sample,
                    idx,
                    &d,
                    &zero,
                );
            }
            Err(e) => report.note(format!("κ={} λ=({params}): {e}", fmt_rational(kappa))),
        }
    }
    report
}
