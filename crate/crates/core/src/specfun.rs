//! Terminating hypergeometric series, Jacobi polynomials and Racah values.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::numerics::{
    as_nonpositive_integer, binom_general, factorial, int, pochhammer, rat, sign, Rational,
};
use crate::poly::{Poly, Var, VarSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypError {
    #[error("no top parameter is a nonpositive integer; the series does not terminate")]
    NonTerminating,
    #[error(
        "bottom parameter {param} vanishes at index {index} before termination at {terminates_at}"
    )]
    BottomPole {
        param: String,
        index: usize,
        terminates_at: usize,
    },
}

/// Parameters of a `pFq` with at least one nonpositive-integer top entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypSpec {
    pub top: Vec<Rational>,
    pub bottom: Vec<Rational>,
}

impl HypSpec {
    pub fn new(top: Vec<Rational>, bottom: Vec<Rational>) -> Self {
        HypSpec { top, bottom }
    }

    /// Index `T` after which every term vanishes.
    pub fn termination(&self) -> Result<usize, HypError> {
        self.top
            .iter()
            .filter_map(as_nonpositive_integer)
            .min()
            .ok_or(HypError::NonTerminating)
    }

    /// Checks both invariants and returns `T`.
    ///
    /// The pole check is index-aware: a bottom entry `-n` is fine as long as
    /// the series stops before `(−n)_j` reaches zero.
    pub fn validate(&self) -> Result<usize, HypError> {
        let t = self.termination()?;
        for b in &self.bottom {
            if let Some(m) = as_nonpositive_integer(b) {
                // (b)_j = 0 first at j = m + 1, which reads the factor b + m
                if m < t {
                    return Err(HypError::BottomPole {
                        param: crate::numerics::fmt_rational(b),
                        index: m,
                        terminates_at: t,
                    });
                }
            }
        }
        Ok(t)
    }

    /// Term ratios for `j = 0..=T`, without the power of the argument.
    fn coefficients(&self) -> Result<Vec<Rational>, HypError> {
        let t = self.validate()?;
        let mut out = Vec::with_capacity(t + 1);
        let mut c = Rational::one();
        out.push(c.clone());
        for j in 0..t {
            let jr = int(j as i64);
            for a in &self.top {
                c *= a + &jr;
            }
            for b in &self.bottom {
                c /= b + &jr;
            }
            c /= int(j as i64 + 1);
            out.push(c.clone());
        }
        Ok(out)
    }
}

/// `Σ_{j=0}^{T} Π(top)_j / Π(bottom)_j · var^j / j!` as an exact polynomial in `var`.
pub fn hyp_terminating_poly(spec: &HypSpec, var: Var) -> Result<Poly, HypError> {
    Ok(Poly::from_coeffs(var, &spec.coefficients()?))
}

pub fn hyp_terminating_at_one(spec: &HypSpec) -> Result<Rational, HypError> {
    Ok(spec.coefficients()?.into_iter().sum())
}

/// Parameters `(α, β, ℓ)` of a Jacobi polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiParams {
    pub alpha: Rational,
    pub beta: Rational,
    pub ell: usize,
}

impl JacobiParams {
    pub fn new(alpha: Rational, beta: Rational, ell: usize) -> Self {
        JacobiParams { alpha, beta, ell }
    }

    /// `α, β ∉ Z_{<0}` and `α+β+1 ∉ Z_{<0}`: the family is then a basis of Pol(v).
    pub fn spans_basis(&self) -> bool {
        let neg_int = |x: &Rational| x.is_integer() && x < &Rational::zero();
        !neg_int(&self.alpha)
            && !neg_int(&self.beta)
            && !neg_int(&(&self.alpha + &self.beta + Rational::one()))
    }
}

/// Homogeneous Jacobi form `Σ_s (−1)^s C(ℓ+λ1−1, ℓ−s) C(ℓ+λ2−1, s) a^s b^{ℓ−s}`
/// with arbitrary polynomial slots `a`, `b`.
pub fn jacobi_form(ell: usize, lam1: &Rational, lam2: &Rational, a: &Poly, b: &Poly) -> Poly {
    let top1 = int(ell as i64) + lam1 - Rational::one();
    let top2 = int(ell as i64) + lam2 - Rational::one();
    let mut out = Poly::zero(a.vars().clone());
    let a_pows = powers(a, ell);
    let b_pows = powers(b, ell);
    for s in 0..=ell {
        let c = sign(s) * binom_general(&top1, ell - s) * binom_general(&top2, s);
        if c.is_zero() {
            continue;
        }
        out.add_scaled(&(&a_pows[s] * &b_pows[ell - s]), &c);
    }
    out
}

fn powers(p: &Poly, n: usize) -> Vec<Poly> {
    let mut v = vec![Poly::one(p.vars().clone())];
    for k in 1..=n {
        let next = &v[k - 1] * p;
        v.push(next);
    }
    v
}

/// `P_ℓ^{(α,β)}(v) = 2^{−ℓ} Σ_s (−1)^s C(ℓ+α, ℓ−s) C(ℓ+β, s) (1−v)^s (1+v)^{ℓ−s}`.
pub fn jacobi_poly(params: &JacobiParams) -> Poly {
    let vs = VarSet::single(Var::V);
    let one_minus = Poly::from_coeffs(Var::V, &[int(1), int(-1)]);
    let one_plus = Poly::from_coeffs(Var::V, &[int(1), int(1)]);
    // jacobi_form uses C(ℓ+λ−1, ·), so pass λ = α+1, β+1
    let lam1 = &params.alpha + Rational::one();
    let lam2 = &params.beta + Rational::one();
    let form = jacobi_form(params.ell, &lam1, &lam2, &one_minus, &one_plus);
    debug_assert_eq!(form.vars(), &vs);
    form.scale(&crate::numerics::pow(&rat(1, 2), params.ell))
}

/// The hypergeometric definition `(α+1)_ℓ/ℓ! · 2F1(−ℓ, 1+α+β+ℓ; α+1; (1−v)/2)`.
pub fn jacobi_poly_hypergeometric(params: &JacobiParams) -> Result<Poly, HypError> {
    let ell = int(params.ell as i64);
    let spec = HypSpec::new(
        vec![
            -ell.clone(),
            Rational::one() + &params.alpha + &params.beta + &ell,
        ],
        vec![&params.alpha + Rational::one()],
    );
    let in_t = hyp_terminating_poly(&spec, Var::T)?;
    let vs = VarSet::single(Var::V);
    let arg = Poly::from_coeffs(Var::V, &[rat(1, 2), rat(-1, 2)]);
    let mut b = std::collections::BTreeMap::new();
    b.insert(Var::T, arg);
    let in_v = in_t.subst(&b, &vs).expect("univariate substitution");
    let norm = pochhammer(&(&params.alpha + Rational::one()), params.ell) / factorial(params.ell);
    Ok(in_v.scale(&norm))
}

/// `P̃_ℓ^{(λ1−1,λ2−1)}(x, y)`, the homogeneous two-variable Jacobi polynomial.
pub fn jacobi_two_var(ell: usize, lam1: &Rational, lam2: &Rational) -> Poly {
    let vs = VarSet::xy();
    jacobi_form(
        ell,
        lam1,
        lam2,
        &Poly::var(&vs, Var::X),
        &Poly::var(&vs, Var::Y),
    )
}

/// `(1−v²) p'' + (β − α − (α+β+2) v) p'` on a polynomial in `v`.
///
/// With this sign `P_ℓ^{(α,β)}` has eigenvalue `−ℓ(ℓ+α+β+1)`.
pub fn jacobi_operator(alpha: &Rational, beta: &Rational, p: &Poly) -> Poly {
    jacobi_operator_in(alpha, beta, p, Var::V)
}

/// The Jacobi operator acting in variable `var` of a multivariate polynomial.
pub fn jacobi_operator_in(alpha: &Rational, beta: &Rational, p: &Poly, var: Var) -> Poly {
    let vs = p.vars().clone();
    let v = Poly::var(&vs, var);
    let one = Poly::one(vs.clone());
    let d1 = p.diff(var, 1).expect("variable present");
    let d2 = p.diff(var, 2).expect("variable present");
    let c2 = &one - &(&v * &v);
    let c1 = &Poly::constant(vs.clone(), beta - alpha) - &v.scale(&(alpha + beta + int(2)));
    &(&c2 * &d2) + &(&c1 * &d1)
}

/// Coefficients `c_j` with `p = Σ_j c_j P_j^{(α,β)}`, by back-substitution from
/// the top degree. `None` if the family is degenerate at some needed degree.
pub fn expand_in_jacobi_basis(
    p: &Poly,
    alpha: &Rational,
    beta: &Rational,
) -> Option<Vec<Rational>> {
    let deg = p.degree_in(Var::V).unwrap_or(0) as usize;
    let basis: Vec<Poly> = (0..=deg)
        .map(|l| jacobi_poly(&JacobiParams::new(alpha.clone(), beta.clone(), l)))
        .collect();
    let mut rest = p.clone();
    let mut coeffs = vec![Rational::zero(); deg + 1];
    for l in (0..=deg).rev() {
        let lead = basis[l].coeff_univariate(l as u32);
        if lead.is_zero() {
            return None;
        }
        let c = rest.coeff_univariate(l as u32) / lead;
        rest.add_scaled(&basis[l], &-c.clone());
        coeffs[l] = c;
    }
    rest.is_zero().then_some(coeffs)
}

/// Racah value `R_{p,k}`: the terminating 4F3
/// `(−p, p+λ2+λ3−1, −k, k+λ1+λ2−1; λ2, λ1+λ2+λ3+n−1, −n; 1)`.
pub fn racah_value(
    p: usize,
    k: usize,
    n: usize,
    lam: (&Rational, &Rational, &Rational),
) -> Result<Rational, HypError> {
    assert!(p <= n && k <= n, "racah indices must satisfy p, k <= n");
    let (l1, l2, l3) = lam;
    let one = Rational::one();
    let spec = HypSpec::new(
        vec![
            int(-(p as i64)),
            int(p as i64) + l2 + l3 - &one,
            int(-(k as i64)),
            int(k as i64) + l1 + l2 - &one,
        ],
        vec![
            l2.clone(),
            l1 + l2 + l3 + int(n as i64) - &one,
            int(-(n as i64)),
        ],
    );
    hyp_terminating_at_one(&spec)
}
