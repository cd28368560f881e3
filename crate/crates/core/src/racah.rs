//! Transition coefficients between the two nested bracketings of three forms.
//!
//! `U(λ; n, k, p)` expresses `[[f1,f2]_k, f3]_{n−k}` in the right-nested
//! family `[f1,[f2,f3]_p]_{n−p}`; `Ũ` goes the other way. The module also
//! carries the generating polynomial of the `U` column sums and the
//! one-parameter `t_n^κ` coefficients of the deformed star products.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::numerics::{
    binom, binom_general, fmt_rational, int, is_nonpositive_integer, pochhammer, pow, rat, Rational,
};
use crate::poly::{Poly, Var};
use crate::specfun::{hyp_terminating_poly, racah_value, HypError, HypSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RacahError {
    #[error("inadmissible weights ({0}): {1} is a nonpositive integer")]
    Inadmissible(String, String),
    #[error("division by zero: {0} vanishes")]
    DivisionByZero(String),
    #[error("index out of range: n={n}, k={k}, p={p}")]
    IndexOutOfRange { n: usize, k: usize, p: usize },
    #[error(transparent)]
    Hypergeometric(#[from] HypError),
}

/// Three weights `(λ1, λ2, λ3)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamTriple {
    pub lam1: Rational,
    pub lam2: Rational,
    pub lam3: Rational,
}

impl ParamTriple {
    pub fn new(lam1: Rational, lam2: Rational, lam3: Rational) -> Self {
        ParamTriple { lam1, lam2, lam3 }
    }

    pub fn sum(&self) -> Rational {
        &self.lam1 + &self.lam2 + &self.lam3
    }

    /// `(λ3, λ2, λ1)`.
    pub fn reversed(&self) -> Self {
        ParamTriple::new(self.lam3.clone(), self.lam2.clone(), self.lam1.clone())
    }

    pub fn as_tuple(&self) -> (&Rational, &Rational, &Rational) {
        (&self.lam1, &self.lam2, &self.lam3)
    }

    pub fn to_vec(&self) -> Vec<Rational> {
        vec![self.lam1.clone(), self.lam2.clone(), self.lam3.clone()]
    }

    /// λ1, λ2, λ3, λ1+λ2, λ2+λ3 and λ1+λ2+λ3 all avoid `Z_{≤0}`.
    pub fn check_admissible(&self) -> Result<(), RacahError> {
        let checks = [
            ("λ1", self.lam1.clone()),
            ("λ2", self.lam2.clone()),
            ("λ3", self.lam3.clone()),
            ("λ1+λ2", &self.lam1 + &self.lam2),
            ("λ2+λ3", &self.lam2 + &self.lam3),
            ("λ1+λ2+λ3", self.sum()),
        ];
        for (name, value) in checks {
            if is_nonpositive_integer(&value) {
                return Err(RacahError::Inadmissible(
                    self.to_string(),
                    format!("{name} = {}", fmt_rational(&value)),
                ));
            }
        }
        Ok(())
    }

    pub fn is_admissible(&self) -> bool {
        self.check_admissible().is_ok()
    }
}

impl fmt::Display for ParamTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{}",
            fmt_rational(&self.lam1),
            fmt_rational(&self.lam2),
            fmt_rational(&self.lam3)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RacahQuery {
    pub n: usize,
    pub k: usize,
    pub p: usize,
}

impl RacahQuery {
    pub fn new(n: usize, k: usize, p: usize) -> Self {
        RacahQuery { n, k, p }
    }

    fn check(&self) -> Result<(), RacahError> {
        if self.k > self.n || self.p > self.n {
            return Err(RacahError::IndexOutOfRange {
                n: self.n,
                k: self.k,
                p: self.p,
            });
        }
        Ok(())
    }
}

fn nonzero(value: Rational, what: impl FnOnce() -> String) -> Result<Rational, RacahError> {
    if value.is_zero() {
        Err(RacahError::DivisionByZero(what()))
    } else {
        Ok(value)
    }
}

/// Normalizing prefactor shared by `U` and its generating polynomial, minus
/// the `k`-dependent part: `(λ1+λ2+λ3+n−1)_p / [(λ3)_p (λ2+λ3+p−1)_p (λ2+λ3+2p)_{n−p}]`.
fn column_factor(params: &ParamTriple, n: usize, p: usize) -> Result<Rational, RacahError> {
    let one = Rational::one();
    let (_, l2, l3) = params.as_tuple();
    let num = pochhammer(&(params.sum() + int(n as i64) - &one), p);
    let d1 = nonzero(pochhammer(l3, p), || format!("(λ3)_{p}"))?;
    let d2 = nonzero(pochhammer(&(l2 + l3 + int(p as i64) - &one), p), || {
        format!("(λ2+λ3+{p}-1)_{p}")
    })?;
    let d3 = nonzero(pochhammer(&(l2 + l3 + int(2 * p as i64)), n - p), || {
        format!("(λ2+λ3+{})_{}", 2 * p, n - p)
    })?;
    Ok(num / (d1 * d2 * d3))
}

/// `U^{λ1,λ2;k}_{λ3;n,p} = C(n,k) (λ2)_k (λ3)_{n−k} (λ1+λ2+λ3+n−1)_p
/// / [(λ3)_p (λ2+λ3+p−1)_p (λ2+λ3+2p)_{n−p}] · R_{p,k}`.
pub fn u_coefficient(params: &ParamTriple, q: RacahQuery) -> Result<Rational, RacahError> {
    params.check_admissible()?;
    q.check()?;
    let RacahQuery { n, k, p } = q;
    let (_, l2, l3) = params.as_tuple();
    let lead = binom(n, k) * pochhammer(l2, k) * pochhammer(l3, n - k);
    let r = racah_value(p, k, n, params.as_tuple())?;
    Ok(lead * column_factor(params, n, p)? * r)
}

/// `Ũ^{λ1,λ2;k}_{λ3;n,p}`, obtained as `U^{λ3,λ2;p}_{λ1;n,k}`.
pub fn u_reverse(params: &ParamTriple, q: RacahQuery) -> Result<Rational, RacahError> {
    u_coefficient(&params.reversed(), RacahQuery::new(q.n, q.p, q.k))
}

/// `Ũ` from its own closed form
/// `C(n,p) (λ2)_p (λ1)_{n−p} (λ1+λ2+λ3+n−1)_k / [(λ1)_k (λ1+λ2+k−1)_k (λ1+λ2+2k)_{n−k}] · R`.
///
/// `R` is the Racah value of the reversed triple at indices `(k, p)`, which is
/// `R_{p,k}` at the original weights. Reading it as `R_{k,p}` at the original
/// weights does not invert `U`.
pub fn u_reverse_closed(params: &ParamTriple, q: RacahQuery) -> Result<Rational, RacahError> {
    params.check_admissible()?;
    q.check()?;
    let RacahQuery { n, k, p } = q;
    let one = Rational::one();
    let (l1, l2, _) = params.as_tuple();
    let num = binom(n, p)
        * pochhammer(l2, p)
        * pochhammer(l1, n - p)
        * pochhammer(&(params.sum() + int(n as i64) - &one), k);
    let d1 = nonzero(pochhammer(l1, k), || format!("(λ1)_{k}"))?;
    let d2 = nonzero(pochhammer(&(l1 + l2 + int(k as i64) - &one), k), || {
        format!("(λ1+λ2+{k}-1)_{k}")
    })?;
    let d3 = nonzero(pochhammer(&(l1 + l2 + int(2 * k as i64)), n - k), || {
        format!("(λ1+λ2+{})_{}", 2 * k, n - k)
    })?;
    let r = racah_value(p, k, n, params.as_tuple())?;
    Ok(num / (d1 * d2 * d3) * r)
}

/// The `(n+1)×(n+1)` matrix with rows `k` and columns `p`.
pub fn u_matrix(params: &ParamTriple, n: usize) -> Result<Vec<Vec<Rational>>, RacahError> {
    (0..=n)
        .map(|k| {
            (0..=n)
                .map(|p| u_coefficient(params, RacahQuery::new(n, k, p)))
                .collect()
        })
        .collect()
}

/// `Ũ` arranged with rows `k` and columns `p`.
pub fn u_reverse_matrix(params: &ParamTriple, n: usize) -> Result<Vec<Vec<Rational>>, RacahError> {
    (0..=n)
        .map(|k| {
            (0..=n)
                .map(|p| u_reverse(params, RacahQuery::new(n, k, p)))
                .collect()
        })
        .collect()
}

/// `Σ_k U^{λ1,λ2;k}_{λ3;n,p} t^k` from the product of two terminating 2F1
/// polynomials and the column prefactor with `(λ3)_n` in front.
pub fn u_generating_poly(params: &ParamTriple, n: usize, p: usize) -> Result<Poly, RacahError> {
    params.check_admissible()?;
    RacahQuery::new(n, 0, p).check()?;
    let one = Rational::one();
    let (l1, l2, l3) = params.as_tuple();
    let nn = int(n as i64);
    let pp = int(p as i64);
    let first = HypSpec::new(
        vec![-pp.clone(), l1 + &nn - &pp],
        vec![params.sum() + &nn - &one],
    );
    let second = HypSpec::new(vec![&pp - &nn, &pp + l2], vec![-l3.clone() - &nn + &one]);
    let prefactor = pochhammer(l3, n) * column_factor(params, n, p)?;
    let a = hyp_terminating_poly(&first, Var::T)?;
    let b = hyp_terminating_poly(&second, Var::T)?;
    Ok((&a * &b).scale(&prefactor))
}

fn binom_nonzero(x: &Rational, k: usize, label: &str) -> Result<Rational, RacahError> {
    nonzero(binom_general(x, k), || {
        format!("binom({label} = {}, {k})", fmt_rational(x))
    })
}

/// `t_n^κ(λ1, λ2)` from the double-binomial sum over `r + s = n`.
pub fn cmz_t_sum(
    kappa: &Rational,
    lam1: &Rational,
    lam2: &Rational,
    n: usize,
) -> Result<Rational, RacahError> {
    let one = Rational::one();
    let nn = int(n as i64);
    let outer = binom_nonzero(&(-int(2) * lam2), n, "-2λ2")?;
    let mut total = Rational::zero();
    for r in 0..=n {
        let s = n - r;
        let num = binom_general(&-lam1.clone(), r)
            * binom_general(&(-lam1.clone() + kappa - &one), r)
            * binom_general(&(&nn + lam1 + lam2 - kappa), s)
            * binom_general(&(&nn + lam1 + lam2 - &one), s);
        let den = binom_nonzero(&(-int(2) * lam1), r, "-2λ1")?
            * binom_nonzero(
                &(int(2) * &nn + int(2) * lam1 + int(2) * lam2 - int(2)),
                s,
                "2n+2λ1+2λ2-2",
            )?;
        total += num / den;
    }
    Ok(total / outer)
}

/// `t_n^κ(λ1, λ2)` from the conjectured closed form
/// `(−1/4)^n Σ_j C(n,2j) C(−1/2,j) C(κ−3/2,j) C(1/2−κ,j) / [C(−λ1−1/2,j) C(−λ2−1/2,j) C(n+λ1+λ2−3/2,j)]`.
pub fn cmz_t_closed(
    kappa: &Rational,
    lam1: &Rational,
    lam2: &Rational,
    n: usize,
) -> Result<Rational, RacahError> {
    let half = rat(1, 2);
    let three_halves = rat(3, 2);
    let mut total = Rational::zero();
    for j in 0..=n / 2 {
        let num = binom(n, 2 * j)
            * binom_general(&-half.clone(), j)
            * binom_general(&(kappa - &three_halves), j)
            * binom_general(&(&half - kappa), j);
        let den = binom_nonzero(&(-lam1.clone() - &half), j, "-λ1-1/2")?
            * binom_nonzero(&(-lam2.clone() - &half), j, "-λ2-1/2")?
            * binom_nonzero(
                &(int(n as i64) + lam1 + lam2 - &three_halves),
                j,
                "n+λ1+λ2-3/2",
            )?;
        total += num / den;
    }
    Ok(pow(&rat(-1, 4), n) * total)
}

/// Both sides of the κ-family Racah relation
/// `Σ_k U t_k(λ1,λ2) t_{n−k}(λ1+λ2+2k, λ3)` and `t_p(λ2,λ3) t_{n−p}(λ1, λ2+λ3+2p)`.
pub fn cmz_racah_sides(
    kappa: &Rational,
    params: &ParamTriple,
    n: usize,
    p: usize,
) -> Result<(Rational, Rational), RacahError> {
    let (l1, l2, l3) = params.as_tuple();
    let mut lhs = Rational::zero();
    for k in 0..=n {
        let u = u_coefficient(params, RacahQuery::new(n, k, p))?;
        let inner = l1 + l2 + int(2 * k as i64);
        lhs += u * cmz_t_sum(kappa, l1, l2, k)? * cmz_t_sum(kappa, &inner, l3, n - k)?;
    }
    let outer = l2 + l3 + int(2 * p as i64);
    let rhs = cmz_t_sum(kappa, l2, l3, p)? * cmz_t_sum(kappa, l1, &outer, n - p)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones() -> ParamTriple {
        ParamTriple::new(int(1), int(1), int(1))
    }

    fn grid() -> Vec<ParamTriple> {
        let vals = [rat(1, 2), int(1), rat(7, 3)];
        let mut out = Vec::new();
        for a in &vals {
            for b in &vals {
                for c in &vals {
                    out.push(ParamTriple::new(a.clone(), b.clone(), c.clone()));
                }
            }
        }
        out
    }

    #[test]
    fn unit_weights_n1() {
        let m = u_matrix(&ones(), 1).unwrap();
        assert_eq!(
            m,
            vec![vec![rat(1, 2), rat(3, 2)], vec![rat(1, 2), rat(-1, 2)]]
        );
    }

    #[test]
    fn corner_entry_closed_form() {
        for params in grid() {
            let (_, l2, l3) = params.as_tuple();
            for n in 0..6 {
                let expected = pochhammer(l3, n) / pochhammer(&(l2 + l3), n);
                assert_eq!(
                    u_coefficient(&params, RacahQuery::new(n, 0, 0)).unwrap(),
                    expected
                );
            }
        }
    }

    #[test]
    fn worked_middle_value() {
        for params in grid() {
            let (l1, l2, l3) = params.as_tuple();
            let num = l1 * l2 + l2 * l3 - l3 * l1 + int(2) * l2 + l2 * l2;
            let den = (l2 + l3) * (l2 + l3 + int(2));
            assert_eq!(
                u_coefficient(&params, RacahQuery::new(2, 1, 1)).unwrap(),
                num / den
            );
        }
    }

    #[test]
    fn column_sums_are_one() {
        for params in grid() {
            for n in 0..=6 {
                for p in 0..=n {
                    let s: Rational = (0..=n)
                        .map(|k| u_coefficient(&params, RacahQuery::new(n, k, p)).unwrap())
                        .sum();
                    assert_eq!(s, int(1));
                }
            }
        }
    }

    #[test]
    fn generating_poly_matches_coefficients() {
        for params in grid() {
            for n in 0..=5 {
                for p in 0..=n {
                    let g = u_generating_poly(&params, n, p).unwrap();
                    for k in 0..=n {
                        assert_eq!(
                            g.coeff_univariate(k as u32),
                            u_coefficient(&params, RacahQuery::new(n, k, p)).unwrap()
                        );
                    }
                    assert!(g.degree_in(Var::T).unwrap_or(0) as usize <= n);
                }
            }
        }
        assert_eq!(
            u_generating_poly(&ones(), 0, 0).unwrap(),
            Poly::one(crate::poly::VarSet::single(Var::T))
        );
    }

    #[test]
    fn reverse_two_routes_agree() {
        for params in grid() {
            for n in 0..=5 {
                for k in 0..=n {
                    for p in 0..=n {
                        let q = RacahQuery::new(n, k, p);
                        assert_eq!(
                            u_reverse(&params, q).unwrap(),
                            u_reverse_closed(&params, q).unwrap()
                        );
                    }
                }
            }
            assert_eq!(
                u_reverse(&params, RacahQuery::new(0, 0, 0)).unwrap(),
                int(1)
            );
        }
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn reverse_is_inverse() {
        for params in grid() {
            for n in 0..=4 {
                let u = u_matrix(&params, n).unwrap();
                let ut = u_reverse_matrix(&params, n).unwrap();
                for p in 0..=n {
                    for q in 0..=n {
                        // Σ_k Ũ(k,p) U(k,q) = δ_pq
                        let s: Rational = (0..=n).map(|k| &ut[k][p] * &u[k][q]).sum();
                        assert_eq!(s, if p == q { int(1) } else { int(0) });
                    }
                }
            }
        }
    }

    #[test]
    fn admissibility_gate() {
        let bad = ParamTriple::new(int(1), int(-1), int(3));
        assert!(matches!(
            u_coefficient(&bad, RacahQuery::new(1, 0, 0)),
            Err(RacahError::Inadmissible(..))
        ));
        let bad = ParamTriple::new(rat(1, 2), rat(-1, 2), int(3));
        assert!(!bad.is_admissible());
        assert!(ParamTriple::new(rat(-1, 2), rat(3, 4), int(3)).is_admissible());
        assert!(matches!(
            u_coefficient(&ones(), RacahQuery::new(1, 2, 0)),
            Err(RacahError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn cmz_basics() {
        for (l1, l2) in [(int(1), int(1)), (rat(1, 2), rat(7, 3)), (int(3), int(2))] {
            for kappa in [rat(1, 2), rat(3, 2), rat(1, 3), int(2)] {
                assert_eq!(cmz_t_sum(&kappa, &l1, &l2, 0).unwrap(), int(1));
                assert_eq!(cmz_t_closed(&kappa, &l1, &l2, 0).unwrap(), int(1));
            }
            for n in 0..=6 {
                for kappa in [rat(1, 2), rat(3, 2)] {
                    assert_eq!(
                        cmz_t_sum(&kappa, &l1, &l2, n).unwrap(),
                        cmz_t_closed(&kappa, &l1, &l2, n).unwrap()
                    );
                }
            }
        }
        assert!(matches!(
            cmz_t_sum(&rat(1, 2), &int(1), &int(0), 2),
            Err(RacahError::DivisionByZero(_))
        ));
    }
}
