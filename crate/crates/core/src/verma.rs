//! sl2 Verma modules realized on polynomials, the Fischer pairing, and the
//! intertwiners `Φ_ℓ`, `Φ̃_ℓ` whose Fischer adjoints are Rankin–Cohen brackets.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::bracket::{rc_bracket, WeightedForm};
use crate::numerics::{fmt_rational, int, rat, Rational};
use crate::poly::{Poly, PolyError, Var, VarSet};
use crate::report::{indices, sample_strings, VerificationReport};
use crate::specfun::{
    expand_in_jacobi_basis, jacobi_form, jacobi_operator_in, jacobi_poly, jacobi_two_var,
    JacobiParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    H,
    E,
    F,
    /// `C = H²/4 + H/2 + FE`.
    C,
}

impl Generator {
    pub const SL2: [Generator; 3] = [Generator::H, Generator::E, Generator::F];

    pub fn parse(src: &str) -> Option<Generator> {
        match src.trim() {
            "H" | "h" => Some(Generator::H),
            "E" | "e" => Some(Generator::E),
            "F" | "f" => Some(Generator::F),
            "C" | "c" => Some(Generator::C),
            _ => None,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Generator::H => "H",
            Generator::E => "E",
            Generator::F => "F",
            Generator::C => "C",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleModel {
    /// `V_λ` on `Pol(x)`.
    Highest(Rational),
    /// `V*_λ` on `Pol(x)`.
    Lowest(Rational),
    /// `V*_λ1 ⊗ V*_λ2` on `Pol(x, y)`.
    TensorLowest(Rational, Rational),
    /// The same tensor product transported to `Pol(t, v)` by `Ψ`.
    TensorLowestTV(Rational, Rational),
}

impl ModuleModel {
    pub fn vars(&self) -> VarSet {
        match self {
            ModuleModel::Highest(_) | ModuleModel::Lowest(_) => VarSet::single(Var::X),
            ModuleModel::TensorLowest(..) => VarSet::xy(),
            ModuleModel::TensorLowestTV(..) => VarSet::tv(),
        }
    }
}

impl fmt::Display for ModuleModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleModel::Highest(l) => write!(f, "highest({})", fmt_rational(l)),
            ModuleModel::Lowest(l) => write!(f, "lowest({})", fmt_rational(l)),
            ModuleModel::TensorLowest(a, b) => {
                write!(f, "tensor({},{})", fmt_rational(a), fmt_rational(b))
            }
            ModuleModel::TensorLowestTV(a, b) => {
                write!(f, "tensor-tv({},{})", fmt_rational(a), fmt_rational(b))
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VermaError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("F-action leaves a term not divisible by t; the input is outside the image of Ψ")]
    NonPolynomialResult,
    #[error("expected a polynomial in at most one variable, got variables {0}")]
    NotUnivariate(VarSet),
}

/// A one-variable differential operator `Σ c_{ij} x^i ∂^j`, normal ordered.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiffOp {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl DiffOp {
    pub fn zero() -> Self {
        DiffOp::default()
    }

    /// `c x^i ∂^j`.
    pub fn term(c: Rational, i: u32, j: u32) -> Self {
        DiffOp::zero().plus(c, i, j)
    }

    pub fn plus(mut self, c: Rational, i: u32, j: u32) -> Self {
        let slot = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = DiffOp::zero();
        for (&(i, j), v) in &self.terms {
            out = out.plus(v * c, i, j);
        }
        out
    }

    /// Fischer adjoint: `(x^i ∂^j)† = x^j ∂^i`.
    pub fn adjoint(&self) -> Self {
        let mut out = DiffOp::zero();
        for (&(i, j), v) in &self.terms {
            out = out.plus(v.clone(), j, i);
        }
        out
    }

    /// Applies the operator in `var` of a polynomial over any variable set.
    pub fn apply_in(&self, var: Var, p: &Poly) -> Result<Poly, PolyError> {
        let vs = p.vars().clone();
        let x = Poly::var(&vs, var);
        let mut out = Poly::zero(vs);
        for (&(i, j), c) in &self.terms {
            let d = p.diff(var, j)?;
            if d.is_zero() {
                continue;
            }
            out.add_scaled(&(&x.pow(i) * &d), c);
        }
        Ok(out)
    }
}

/// `π_λ(g)` on `V_λ`: `H = −λ − 2x∂`, `E = −∂`, `F = x²∂ + λx`.
pub fn pi_highest(lam: &Rational, g: Generator) -> Option<DiffOp> {
    Some(match g {
        Generator::H => DiffOp::term(-lam.clone(), 0, 0).plus(int(-2), 1, 1),
        Generator::E => DiffOp::term(int(-1), 0, 1),
        Generator::F => DiffOp::term(int(1), 2, 1).plus(lam.clone(), 1, 0),
        Generator::C => return None,
    })
}

/// `π*_λ(g)` on `V*_λ`: `H = λ + 2x∂`, `E = x`, `F = −(x∂² + λ∂)`.
pub fn pi_lowest(lam: &Rational, g: Generator) -> Option<DiffOp> {
    Some(match g {
        Generator::H => DiffOp::term(lam.clone(), 0, 0).plus(int(2), 1, 1),
        Generator::E => DiffOp::term(int(1), 1, 0),
        Generator::F => DiffOp::term(int(-1), 1, 2).plus(-lam.clone(), 0, 1),
        Generator::C => return None,
    })
}

fn check_vars(p: &Poly, vs: &VarSet) -> Result<(), VermaError> {
    if p.vars() != vs {
        return Err(PolyError::VarsetMismatch(p.vars().clone(), vs.clone()).into());
    }
    Ok(())
}

/// The action of `g` on `p` in the given model.
pub fn act(model: &ModuleModel, g: Generator, p: &Poly) -> Result<Poly, VermaError> {
    check_vars(p, &model.vars())?;
    if g == Generator::C {
        let h = act(model, Generator::H, p)?;
        let hh = act(model, Generator::H, &h)?;
        let fe = act(model, Generator::F, &act(model, Generator::E, p)?)?;
        let mut out = hh.scale(&rat(1, 4));
        out.add_scaled(&h, &rat(1, 2));
        out.add_scaled(&fe, &int(1));
        return Ok(out);
    }
    let pi = |f: fn(&Rational, Generator) -> Option<DiffOp>, lam: &Rational| {
        f(lam, g).expect("sl2 generator")
    };
    match model {
        ModuleModel::Highest(l) => Ok(pi(pi_highest, l).apply_in(Var::X, p)?),
        ModuleModel::Lowest(l) => Ok(pi(pi_lowest, l).apply_in(Var::X, p)?),
        ModuleModel::TensorLowest(l1, l2) => {
            let a = pi(pi_lowest, l1).apply_in(Var::X, p)?;
            let b = pi(pi_lowest, l2).apply_in(Var::Y, p)?;
            Ok(&a + &b)
        }
        ModuleModel::TensorLowestTV(l1, l2) => act_tv(l1, l2, g, p),
    }
}

fn act_tv(l1: &Rational, l2: &Rational, g: Generator, p: &Poly) -> Result<Poly, VermaError> {
    let vs = VarSet::tv();
    let s = l1 + l2;
    let t = Poly::var(&vs, Var::T);
    match g {
        Generator::H => {
            let mut out = p.scale(&s);
            out.add_scaled(&(&t * &p.diff(Var::T, 1)?), &int(2));
            Ok(out)
        }
        Generator::E => Ok(&t * p),
        Generator::F => {
            let one = rat(1, 1);
            let jac = jacobi_operator_in(&(l1 - &one), &(l2 - &one), p, Var::V);
            let reduced = jac
                .div_var_power(Var::T, 1)
                .ok_or(VermaError::NonPolynomialResult)?;
            let mut out = &t * &p.diff(Var::T, 2)?;
            out.add_scaled(&p.diff(Var::T, 1)?, &s);
            out.add_scaled(&reduced, &one);
            Ok(-&out)
        }
        Generator::C => unreachable!("handled by act"),
    }
}

/// Casimir scalar on the `ℓ`-th summand of `V*_λ1 ⊗ V*_λ2`:
/// `(λ1+λ2)(λ1+λ2−2)/4 + ℓ(ℓ+λ1+λ2−1)`.
pub fn casimir_eigenvalue(l1: &Rational, l2: &Rational, ell: usize) -> Rational {
    let s = l1 + l2;
    let e = int(ell as i64);
    &s * (&s - int(2)) / int(4) + &e * (&e + &s - int(1))
}

/// `⟨p, q⟩_F`, summed over matching monomials.
pub fn fischer(p: &Poly, q: &Poly) -> Result<Rational, PolyError> {
    p.fischer(q)
}

/// `⟨p, q⟩_F = [p(∂) q](0)`, computed through derivatives.
pub fn fischer_by_derivatives(p: &Poly, q: &Poly) -> Result<Rational, PolyError> {
    Ok(p.apply_as_derivatives(q)?.constant_term())
}

/// `Ψ P(t, v) = P(t(1−v)/2, t(1+v)/2)`.
pub fn psi_map(p: &Poly) -> Result<Poly, PolyError> {
    let vs = VarSet::tv();
    let half_t = Poly::var(&vs, Var::T).scale(&rat(1, 2));
    let tv = &half_t * &Poly::var(&vs, Var::V);
    let mut b = BTreeMap::new();
    b.insert(Var::X, &half_t - &tv);
    b.insert(Var::Y, &half_t + &tv);
    p.subst(&b, &vs)
}

/// Substitutes `arg` for the single variable of `q` (a constant is allowed).
fn compose_univariate(q: &Poly, arg: &Poly) -> Result<Poly, VermaError> {
    match q.vars().vars() {
        [] => Ok(Poly::constant(arg.vars().clone(), q.constant_term())),
        [v] => {
            let mut b = BTreeMap::new();
            b.insert(*v, arg.clone());
            Ok(q.subst(&b, arg.vars())?)
        }
        _ => Err(VermaError::NotUnivariate(q.vars().clone())),
    }
}

/// `Φ_ℓ Q(t, v) = t^ℓ Q(t) P_ℓ^{(λ1−1, λ2−1)}(v)`.
pub fn intertwiner_phi(
    ell: usize,
    l1: &Rational,
    l2: &Rational,
    q: &Poly,
) -> Result<Poly, VermaError> {
    let vs = VarSet::tv();
    let one = rat(1, 1);
    let p = jacobi_poly(&JacobiParams::new(l1 - &one, l2 - &one, ell)).lift(&vs)?;
    let qt = compose_univariate(q, &Poly::var(&vs, Var::T))?;
    Ok(&(&Poly::var(&vs, Var::T).pow(ell as u32) * &qt) * &p)
}

/// `Φ̃_ℓ Q(x, y) = P̃_ℓ^{(λ1−1, λ2−1)}(x, y) Q(x+y)`.
pub fn intertwiner_phi_tilde(
    ell: usize,
    l1: &Rational,
    l2: &Rational,
    q: &Poly,
) -> Result<Poly, VermaError> {
    let vs = VarSet::xy();
    let sum = &Poly::var(&vs, Var::X) + &Poly::var(&vs, Var::Y);
    Ok(&jacobi_two_var(ell, l1, l2) * &compose_univariate(q, &sum)?)
}

/// `(Φ̃_ℓ)† P(z)`: apply `P̃_ℓ(∂x, ∂y)`, then restrict to the diagonal `x = y = z`.
pub fn adjoint_phi_tilde(
    ell: usize,
    l1: &Rational,
    l2: &Rational,
    p: &Poly,
) -> Result<Poly, VermaError> {
    check_vars(p, &VarSet::xy())?;
    let d = jacobi_two_var(ell, l1, l2).apply_as_derivatives(p)?;
    let vs = VarSet::z();
    let z = Poly::var(&vs, Var::Z);
    let mut b = BTreeMap::new();
    b.insert(Var::X, z.clone());
    b.insert(Var::Y, z);
    Ok(d.subst(&b, &vs)?)
}

/// `(Φ̃_ℓ ⊗ Id)` from `Pol(x, y)` to `Pol(x, y, z)`: the first slot is split
/// into `x, y` and the second slot becomes `z`.
pub fn phi_tilde_tensor_left(
    ell: usize,
    l1: &Rational,
    l2: &Rational,
    p: &Poly,
) -> Result<Poly, VermaError> {
    check_vars(p, &VarSet::xy())?;
    let vs = VarSet::xyz();
    let (x, y, z) = (
        Poly::var(&vs, Var::X),
        Poly::var(&vs, Var::Y),
        Poly::var(&vs, Var::Z),
    );
    let mut b = BTreeMap::new();
    b.insert(Var::X, &x + &y);
    b.insert(Var::Y, z);
    let moved = p.subst(&b, &vs)?;
    Ok(&jacobi_form(ell, l1, l2, &x, &y) * &moved)
}

/// `(Id ⊗ Φ̃_ℓ)` from `Pol(x, y)` to `Pol(x, y, z)`: the second slot is split
/// into `y, z`.
pub fn phi_tilde_tensor_right(
    ell: usize,
    l1: &Rational,
    l2: &Rational,
    p: &Poly,
) -> Result<Poly, VermaError> {
    check_vars(p, &VarSet::xy())?;
    let vs = VarSet::xyz();
    let (x, y, z) = (
        Poly::var(&vs, Var::X),
        Poly::var(&vs, Var::Y),
        Poly::var(&vs, Var::Z),
    );
    let mut b = BTreeMap::new();
    b.insert(Var::X, x);
    b.insert(Var::Y, &y + &z);
    let moved = p.subst(&b, &vs)?;
    Ok(&jacobi_form(ell, l1, l2, &y, &z) * &moved)
}

/// Adjoint of [`phi_tilde_tensor_left`], from `Pol(x, y, z)` to `Pol(x, y)`.
pub fn adjoint_tensor_left(
    ell: usize,
    l1: &Rational,
    l2: &Rational,
    p: &Poly,
) -> Result<Poly, VermaError> {
    check_vars(p, &VarSet::xyz())?;
    let vs = VarSet::xyz();
    let op = jacobi_form(
        ell,
        l1,
        l2,
        &Poly::var(&vs, Var::X),
        &Poly::var(&vs, Var::Y),
    );
    let d = op.apply_as_derivatives(p)?;
    let out = VarSet::xy();
    let mut b = BTreeMap::new();
    b.insert(Var::X, Poly::var(&out, Var::X));
    b.insert(Var::Y, Poly::var(&out, Var::X));
    b.insert(Var::Z, Poly::var(&out, Var::Y));
    Ok(d.subst(&b, &out)?)
}

/// Adjoint of [`phi_tilde_tensor_right`], from `Pol(x, y, z)` to `Pol(x, y)`.
pub fn adjoint_tensor_right(
    ell: usize,
    l1: &Rational,
    l2: &Rational,
    p: &Poly,
) -> Result<Poly, VermaError> {
    check_vars(p, &VarSet::xyz())?;
    let vs = VarSet::xyz();
    let op = jacobi_form(
        ell,
        l1,
        l2,
        &Poly::var(&vs, Var::Y),
        &Poly::var(&vs, Var::Z),
    );
    let d = op.apply_as_derivatives(p)?;
    let out = VarSet::xy();
    let mut b = BTreeMap::new();
    b.insert(Var::X, Poly::var(&out, Var::X));
    b.insert(Var::Y, Poly::var(&out, Var::Y));
    b.insert(Var::Z, Poly::var(&out, Var::Y));
    Ok(d.subst(&b, &out)?)
}

/// Splits `p(t, v)` as `Σ_j c_j(t) P_j^{(λ1−1, λ2−1)}(v)`; `None` when the
/// Jacobi family is degenerate at a needed degree.
pub fn jacobi_components(p: &Poly, l1: &Rational, l2: &Rational) -> Option<Vec<Poly>> {
    let tv = VarSet::tv();
    if p.vars() != &tv {
        return None;
    }
    let it = tv.index(Var::T)?;
    let iv = tv.index(Var::V)?;
    let one = rat(1, 1);
    let (alpha, beta) = (l1 - &one, l2 - &one);
    let mut slices: BTreeMap<u32, Vec<(Vec<u32>, Rational)>> = BTreeMap::new();
    for (e, c) in p.terms() {
        slices
            .entry(e[it])
            .or_default()
            .push((vec![e[iv]], c.clone()));
    }
    let mut comps: Vec<Poly> = Vec::new();
    for (te, terms) in slices {
        let in_v = Poly::from_terms(VarSet::single(Var::V), terms);
        let coeffs = expand_in_jacobi_basis(&in_v, &alpha, &beta)?;
        for (j, c) in coeffs.into_iter().enumerate() {
            if comps.len() <= j {
                comps.resize(j + 1, Poly::zero(VarSet::single(Var::T)));
            }
            comps[j].add_scaled(&Poly::power(Var::T, te, int(1)), &c);
        }
    }
    Some(comps)
}

fn one_var_basis(v: Var, max_deg: u32) -> impl Iterator<Item = Poly> {
    (0..=max_deg).map(move |d| Poly::power(v, d, int(1)))
}

/// `Φ̃_ℓ` commutes with `H, E, F` (ℓ ≤ `max_ell`, deg Q ≤ `max_deg`), and its
/// Fischer adjoint on `x^a y^b` (a+b ≤ 6, ℓ ≤ 4) is the bracket `[z^a, z^b]_ℓ`.
pub fn verify_intertwiners(
    l1: &Rational,
    l2: &Rational,
    max_ell: usize,
    max_deg: u32,
) -> Result<VerificationReport, VermaError> {
    let sample = sample_strings(&[l1.clone(), l2.clone()]);
    let mut report = VerificationReport::new("intertwiner");
    report.add_sample(sample.clone());
    let tensor = ModuleModel::TensorLowest(l1.clone(), l2.clone());
    for ell in 0..=max_ell {
        let target = ModuleModel::Lowest(l1 + l2 + int(2 * ell as i64));
        for q in one_var_basis(Var::X, max_deg) {
            let phi_q = intertwiner_phi_tilde(ell, l1, l2, &q)?;
            for (gi, g) in Generator::SL2.into_iter().enumerate() {
                let lhs = act(&tensor, g, &phi_q)?;
                let rhs = intertwiner_phi_tilde(ell, l1, l2, &act(&target, g, &q)?)?;
                let deg = q.total_degree().unwrap_or(0) as usize;
                report.check(
                    &sample,
                    indices(&[("ell", ell), ("gen", gi), ("deg", deg)]),
                    &lhs,
                    &rhs,
                );
            }
        }
    }
    let xy = VarSet::xy();
    for a in 0..=6u32 {
        for b in 0..=6 - a {
            let p = Poly::monomial(xy.clone(), vec![a, b], int(1));
            let f = WeightedForm::monomial(l1.clone(), a);
            let g = WeightedForm::monomial(l2.clone(), b);
            for ell in 0..=4 {
                let adj = adjoint_phi_tilde(ell, l1, l2, &p)?;
                let idx = indices(&[("ell", ell), ("a", a as usize), ("b", b as usize)]);
                report.check(&sample, idx.clone(), &adj, &rc_bracket(&f, &g, ell).form);
                if let Some(m) = (a + b).checked_sub(ell as u32) {
                    let q = Poly::power(Var::Z, m, int(1));
                    let lhs = fischer(&intertwiner_phi_tilde(ell, l1, l2, &q)?, &p)?;
                    let rhs = fischer(&q, &adj)?;
                    report.check_rational(&sample, idx, &lhs, &rhs);
                }
            }
        }
    }
    Ok(report)
}

/// The `(t, v)`-model Casimir acts on `t^ℓ Q(t) P_ℓ(v)` by `μ_ℓ`, and
/// `μ_0, …, μ_8` are pairwise distinct.
pub fn verify_casimir_spectrum(
    l1: &Rational,
    l2: &Rational,
    max_ell: usize,
    max_deg: u32,
) -> Result<VerificationReport, VermaError> {
    let sample = sample_strings(&[l1.clone(), l2.clone()]);
    let mut report = VerificationReport::new("casimir_spectrum");
    report.add_sample(sample.clone());
    let model = ModuleModel::TensorLowestTV(l1.clone(), l2.clone());
    for ell in 0..=max_ell {
        let mu = casimir_eigenvalue(l1, l2, ell);
        for q in one_var_basis(Var::T, max_deg) {
            let p = intertwiner_phi(ell, l1, l2, &q)?;
            let deg = q.total_degree().unwrap_or(0) as usize;
            report.check(
                &sample,
                indices(&[("ell", ell), ("deg", deg)]),
                &act(&model, Generator::C, &p)?,
                &p.scale(&mu),
            );
        }
    }
    let mus: Vec<Rational> = (0..=8).map(|e| casimir_eigenvalue(l1, l2, e)).collect();
    for i in 0..mus.len() {
        for j in 0..i {
            let distinct = mus[i] != mus[j];
            report.check(
                &sample,
                indices(&[("ell", i), ("other", j)]),
                &distinct,
                &true,
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lams() -> Vec<(Rational, Rational)> {
        vec![
            (int(1), int(1)),
            (rat(1, 2), rat(7, 3)),
            (rat(5, 2), rat(2, 3)),
            (int(3), rat(1, 2)),
        ]
    }

    fn basis(vs: &VarSet, max_deg: u32) -> Vec<Poly> {
        let n = vs.len();
        let mut out = Vec::new();
        let mut exps = vec![0u32; n];
        loop {
            if exps.iter().sum::<u32>() <= max_deg {
                out.push(Poly::monomial(vs.clone(), exps.clone(), int(1)));
            }
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                exps[i] += 1;
                if exps[i] <= max_deg {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }

    fn models(l1: &Rational, l2: &Rational) -> Vec<ModuleModel> {
        vec![
            ModuleModel::Highest(l1.clone()),
            ModuleModel::Lowest(l1.clone()),
            ModuleModel::TensorLowest(l1.clone(), l2.clone()),
        ]
    }

    /// Images of `Ψ` on the monomial grid, the natural domain of the `(t, v)` model.
    fn tv_inputs(max_deg: u32) -> Vec<Poly> {
        basis(&VarSet::xy(), max_deg)
            .iter()
            .map(|p| psi_map(p).unwrap())
            .collect()
    }

    fn inputs(model: &ModuleModel, max_deg: u32) -> Vec<Poly> {
        match model {
            ModuleModel::TensorLowestTV(..) => tv_inputs(max_deg),
            _ => basis(&model.vars(), max_deg),
        }
    }

    fn all_models(l1: &Rational, l2: &Rational) -> Vec<ModuleModel> {
        let mut m = models(l1, l2);
        m.push(ModuleModel::TensorLowestTV(l1.clone(), l2.clone()));
        m
    }

    #[test]
    fn examples() {
        let l = rat(7, 3);
        let c = Poly::constant(VarSet::single(Var::X), int(5));
        assert!(act(&ModuleModel::Highest(l.clone()), Generator::E, &c)
            .unwrap()
            .is_zero());
        for k in 0..6 {
            let xk = Poly::power(Var::X, k, int(1));
            let h = act(&ModuleModel::Lowest(l.clone()), Generator::H, &xk).unwrap();
            assert_eq!(h, xk.scale(&(&l + int(2 * k as i64))));
        }
        let wrong = Poly::one(VarSet::xy());
        assert!(act(&ModuleModel::Lowest(l), Generator::H, &wrong).is_err());
    }

    #[test]
    fn bracket_relations() {
        let (h, e, f) = (Generator::H, Generator::E, Generator::F);
        for (l1, l2) in lams() {
            for model in all_models(&l1, &l2) {
                for p in inputs(&model, 5) {
                    let a = |g, q: &Poly| act(&model, g, q).unwrap();
                    let he = &a(h, &a(e, &p)) - &a(e, &a(h, &p));
                    assert_eq!(he, a(e, &p).scale(&int(2)), "{model} [H,E]");
                    let hf = &a(h, &a(f, &p)) - &a(f, &a(h, &p));
                    assert_eq!(hf, a(f, &p).scale(&int(-2)), "{model} [H,F]");
                    let ef = &a(e, &a(f, &p)) - &a(f, &a(e, &p));
                    assert_eq!(ef, a(h, &p), "{model} [E,F]");
                }
            }
        }
    }

    #[test]
    fn casimir_is_central() {
        for (l1, l2) in lams() {
            for model in all_models(&l1, &l2) {
                for p in inputs(&model, 5) {
                    let c = act(&model, Generator::C, &p).unwrap();
                    for g in Generator::SL2 {
                        let cg = act(&model, Generator::C, &act(&model, g, &p).unwrap()).unwrap();
                        let gc = act(&model, g, &c).unwrap();
                        assert_eq!(cg, gc, "{model} C{g}");
                    }
                }
            }
        }
    }

    #[test]
    fn casimir_on_one_variable_models() {
        let l = rat(5, 3);
        let scalar = &l * (&l - int(2)) / int(4);
        for p in basis(&VarSet::single(Var::X), 5) {
            let c = act(&ModuleModel::Lowest(l.clone()), Generator::C, &p).unwrap();
            assert_eq!(c, p.scale(&scalar));
            let c = act(&ModuleModel::Highest(l.clone()), Generator::C, &p).unwrap();
            assert_eq!(c, p.scale(&scalar));
        }
    }

    #[test]
    fn casimir_in_tv_model_is_jacobi_operator() {
        for (l1, l2) in lams() {
            let model = ModuleModel::TensorLowestTV(l1.clone(), l2.clone());
            let s = &l1 + &l2;
            let one = rat(1, 1);
            for p in tv_inputs(4) {
                let c = act(&model, Generator::C, &p).unwrap();
                let mut expected = p.scale(&(&s * (&s - int(2)) / int(4)));
                expected.add_scaled(
                    &jacobi_operator_in(&(&l1 - &one), &(&l2 - &one), &p, Var::V),
                    &int(-1),
                );
                assert_eq!(c, expected);
            }
        }
    }

    #[test]
    fn tv_model_is_transported_tensor_model() {
        for (l1, l2) in lams() {
            let xy = ModuleModel::TensorLowest(l1.clone(), l2.clone());
            let tv = ModuleModel::TensorLowestTV(l1.clone(), l2.clone());
            for p in basis(&VarSet::xy(), 5) {
                for g in [Generator::H, Generator::E, Generator::F, Generator::C] {
                    let lhs = act(&tv, g, &psi_map(&p).unwrap()).unwrap();
                    let rhs = psi_map(&act(&xy, g, &p).unwrap()).unwrap();
                    assert_eq!(lhs, rhs, "g = {g}, p = {p}");
                }
            }
        }
    }

    #[test]
    fn f_action_outside_image_fails() {
        let model = ModuleModel::TensorLowestTV(int(1), int(2));
        let v = Poly::var(&VarSet::tv(), Var::V);
        assert_eq!(
            act(&model, Generator::F, &v),
            Err(VermaError::NonPolynomialResult)
        );
    }

    #[test]
    fn casimir_spectrum_on_summands() {
        for (l1, l2) in lams() {
            let model = ModuleModel::TensorLowestTV(l1.clone(), l2.clone());
            for ell in 0..=4 {
                let mu = casimir_eigenvalue(&l1, &l2, ell);
                let s = &l1 + &l2 + int(2 * ell as i64);
                assert_eq!(mu, &s * (&s - int(2)) / int(4));
                for q in basis(&VarSet::single(Var::T), 3) {
                    let p = intertwiner_phi(ell, &l1, &l2, &q).unwrap();
                    assert_eq!(act(&model, Generator::C, &p).unwrap(), p.scale(&mu));
                }
            }
            let mus: Vec<Rational> = (0..=8).map(|e| casimir_eigenvalue(&l1, &l2, e)).collect();
            for i in 0..mus.len() {
                for j in 0..i {
                    assert_ne!(mus[i], mus[j]);
                }
            }
        }
    }

    #[test]
    fn fischer_examples() {
        let x = VarSet::single(Var::X);
        for n in 0..6 {
            for m in 0..6 {
                let a = Poly::power(Var::X, n, int(1));
                let b = Poly::power(Var::X, m, int(1));
                let expected = if n == m {
                    crate::numerics::factorial(n as usize)
                } else {
                    int(0)
                };
                assert_eq!(fischer(&a, &b).unwrap(), expected);
            }
        }
        assert_eq!(
            fischer(&Poly::one(x.clone()), &Poly::one(x)).unwrap(),
            int(1)
        );
        let p = Poly::parse("x^2*y", &VarSet::xy()).unwrap();
        assert_eq!(fischer(&p, &p).unwrap(), int(2));
        let q = Poly::parse("3*x^2*y - x*y^3 + 1/2", &VarSet::xy()).unwrap();
        let r = Poly::parse("x^2*y + 2*x*y^3 + 4*y", &VarSet::xy()).unwrap();
        assert_eq!(
            fischer(&q, &r).unwrap(),
            fischer_by_derivatives(&q, &r).unwrap()
        );
    }

    #[test]
    fn diffop_adjoint_under_fischer() {
        let x = VarSet::single(Var::X);
        let op = DiffOp::term(rat(2, 3), 2, 1)
            .plus(int(-1), 0, 2)
            .plus(rat(1, 5), 3, 0);
        for p in basis(&x, 5) {
            for q in basis(&x, 5) {
                let lhs = fischer(&op.apply_in(Var::X, &p).unwrap(), &q).unwrap();
                let rhs = fischer(&p, &op.adjoint().apply_in(Var::X, &q).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn contragredient_duality() {
        let x = VarSet::single(Var::X);
        for (l, _) in lams() {
            for g in Generator::SL2 {
                let star = pi_lowest(&l, g).unwrap();
                let pi = pi_highest(&l, g).unwrap();
                assert_eq!(star, pi.adjoint().scale(&int(-1)));
                for p in basis(&x, 5) {
                    for q in basis(&x, 5) {
                        let a = fischer(&star.apply_in(Var::X, &p).unwrap(), &q).unwrap();
                        let b = fischer(&p, &pi.apply_in(Var::X, &q).unwrap()).unwrap();
                        assert!((a + b).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn psi_examples() {
        let xy = VarSet::xy();
        let t = Poly::var(&VarSet::tv(), Var::T);
        let sum = Poly::parse("x + y", &xy).unwrap();
        assert_eq!(psi_map(&sum).unwrap(), t);
        let tv = VarSet::tv();
        for n in 0..4 {
            for m in 0..4 {
                let mono = Poly::monomial(xy.clone(), vec![n, m], int(1));
                let expected = &(&t.scale(&rat(1, 2)).pow(n + m)
                    * &Poly::parse("1 - v", &tv).unwrap().pow(n))
                    * &Poly::parse("1 + v", &tv).unwrap().pow(m);
                assert_eq!(psi_map(&mono).unwrap(), expected);
            }
        }
        for (l1, l2) in lams() {
            for ell in 0..5 {
                let lhs = psi_map(&jacobi_two_var(ell, &l1, &l2)).unwrap();
                let rhs =
                    intertwiner_phi(ell, &l1, &l2, &Poly::one(VarSet::single(Var::T))).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn image_of_psi_decomposes() {
        for (l1, l2) in lams() {
            for p in basis(&VarSet::xy(), 6) {
                let image = psi_map(&p).unwrap();
                let comps = jacobi_components(&image, &l1, &l2).expect("basis");
                let mut rebuilt = Poly::zero(VarSet::tv());
                for (j, c) in comps.iter().enumerate() {
                    let q = c.div_var_power(Var::T, j as u32).expect("divisible by t^j");
                    rebuilt.add_scaled(&intertwiner_phi(j, &l1, &l2, &q).unwrap(), &int(1));
                }
                assert_eq!(rebuilt, image);
            }
        }
    }

    #[test]
    fn phi_tilde_intertwines() {
        let x = VarSet::single(Var::X);
        for (l1, l2) in lams() {
            let tensor = ModuleModel::TensorLowest(l1.clone(), l2.clone());
            for ell in 0..=3 {
                let target = ModuleModel::Lowest(&l1 + &l2 + int(2 * ell as i64));
                for q in basis(&x, 4) {
                    let phi_q = intertwiner_phi_tilde(ell, &l1, &l2, &q).unwrap();
                    assert!(phi_q.is_homogeneous(ell as u32 + q.total_degree().unwrap()));
                    for g in Generator::SL2 {
                        let lhs = act(&tensor, g, &phi_q).unwrap();
                        let rhs =
                            intertwiner_phi_tilde(ell, &l1, &l2, &act(&target, g, &q).unwrap())
                                .unwrap();
                        assert_eq!(lhs, rhs, "ell = {ell}, g = {g}");
                    }
                }
            }
        }
        let one = Poly::one(x);
        assert_eq!(
            intertwiner_phi_tilde(0, &int(1), &int(2), &one).unwrap(),
            Poly::one(VarSet::xy())
        );
    }

    #[test]
    fn adjoint_is_the_bracket() {
        let xy = VarSet::xy();
        for (l1, l2) in lams() {
            for a in 0..=6u32 {
                for b in 0..=6 - a {
                    let p = Poly::monomial(xy.clone(), vec![a, b], int(1));
                    let f = WeightedForm::monomial(l1.clone(), a);
                    let g = WeightedForm::monomial(l2.clone(), b);
                    for ell in 0..=4 {
                        let adj = adjoint_phi_tilde(ell, &l1, &l2, &p).unwrap();
                        assert_eq!(adj, rc_bracket(&f, &g, ell).form);
                        // Fischer adjointness against Φ̃_ℓ on z^m
                        let m = (a + b).checked_sub(ell as u32);
                        if let Some(m) = m {
                            let q = Poly::power(Var::Z, m, int(1));
                            let lhs =
                                fischer(&intertwiner_phi_tilde(ell, &l1, &l2, &q).unwrap(), &p)
                                    .unwrap();
                            assert_eq!(lhs, fischer(&q, &adj).unwrap());
                        }
                    }
                }
            }
        }
        let p = Poly::parse("x^2*y + 3*y^4", &xy).unwrap();
        assert_eq!(
            adjoint_phi_tilde(0, &int(1), &int(1), &p).unwrap(),
            Poly::parse("z^3 + 3*z^4", &VarSet::z()).unwrap()
        );
    }

    #[test]
    fn report_drivers() {
        let (l1, l2) = (rat(1, 2), rat(7, 3));
        assert!(verify_intertwiners(&l1, &l2, 2, 3).unwrap().passed());
        let r = verify_casimir_spectrum(&l1, &l2, 3, 2).unwrap();
        assert!(r.passed());
        assert_eq!(r.instances_checked, 4 * 3 + 36);
    }

    #[test]
    fn tensor_slot_adjoints() {
        let xy = VarSet::xy();
        let xyz = VarSet::xyz();
        let (l1, l2) = (rat(1, 2), rat(7, 3));
        for ell in 0..=2 {
            for p in basis(&xy, 3) {
                for q in basis(&xyz, 3 + ell as u32) {
                    let a =
                        fischer(&phi_tilde_tensor_left(ell, &l1, &l2, &p).unwrap(), &q).unwrap();
                    let b = fischer(&p, &adjoint_tensor_left(ell, &l1, &l2, &q).unwrap()).unwrap();
                    assert_eq!(a, b);
                    let a =
                        fischer(&phi_tilde_tensor_right(ell, &l1, &l2, &p).unwrap(), &q).unwrap();
                    let b = fischer(&p, &adjoint_tensor_right(ell, &l1, &l2, &q).unwrap()).unwrap();
                    assert_eq!(a, b);
                }
            }
        }
    }
}
