//! Rankin–Cohen brackets on weighted polynomials in `z`, and evaluation of
//! arbitrary bracket trees.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::numerics::{binom_general, int, sign, Rational};
use crate::poly::{Poly, Var, VarSet};

/// A polynomial in `z` carrying its weight λ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedForm {
    pub weight: Rational,
    pub form: Poly,
}

impl WeightedForm {
    pub fn new(weight: Rational, form: Poly) -> Self {
        assert_eq!(form.vars(), &VarSet::z(), "weighted forms live in Pol(z)");
        WeightedForm { weight, form }
    }

    /// `z^m` of weight `weight`.
    pub fn monomial(weight: Rational, m: u32) -> Self {
        WeightedForm::new(weight, Poly::power(Var::Z, m, int(1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        WeightedForm::new(self.weight.clone(), self.form.scale(c))
    }
}

impl fmt::Display for WeightedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "weight {}: {}",
            crate::numerics::fmt_rational(&self.weight),
            self.form
        )
    }
}

/// Coefficients `(−1)^s C(λ1+n−1, n−s) C(λ2+n−1, s)` for `s = 0..=n`.
pub fn bracket_coefficients(lam1: &Rational, lam2: &Rational, n: usize) -> Vec<Rational> {
    let nn = int(n as i64) - int(1);
    let top1 = lam1 + &nn;
    let top2 = lam2 + &nn;
    (0..=n)
        .map(|s| sign(s) * binom_general(&top1, n - s) * binom_general(&top2, s))
        .collect()
}

/// `[f, g]_n`, of weight `λ1 + λ2 + 2n`.
pub fn rc_bracket(f: &WeightedForm, g: &WeightedForm, n: usize) -> WeightedForm {
    let coeffs = bracket_coefficients(&f.weight, &g.weight, n);
    let mut out = Poly::zero(VarSet::z());
    for (s, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let df = f.form.diff(Var::Z, s as u32).expect("z present");
        if df.is_zero() {
            continue;
        }
        let dg = g.form.diff(Var::Z, (n - s) as u32).expect("z present");
        if dg.is_zero() {
            continue;
        }
        out.add_scaled(&(&df * &dg), c);
    }
    WeightedForm::new(&f.weight + &g.weight + int(2 * n as i64), out)
}

/// A bracketing of leaf slots: `f_i` or `[A, B]_n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BracketExpr {
    Leaf(usize),
    Node(Box<BracketExpr>, Box<BracketExpr>, usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BracketError {
    #[error("slot f{0} has no bound form")]
    UnboundSlot(usize),
    #[error("slot f{0} occurs more than once")]
    DuplicateSlot(usize),
}

impl BracketExpr {
    pub fn leaf(slot: usize) -> Self {
        BracketExpr::Leaf(slot)
    }

    pub fn node(left: BracketExpr, right: BracketExpr, order: usize) -> Self {
        BracketExpr::Node(Box::new(left), Box::new(right), order)
    }

    /// Leaf slots from left to right.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            BracketExpr::Leaf(i) => out.push(*i),
            BracketExpr::Node(l, r, _) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    pub fn total_order(&self) -> usize {
        match self {
            BracketExpr::Leaf(_) => 0,
            BracketExpr::Node(l, r, n) => l.total_order() + r.total_order() + n,
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            BracketExpr::Leaf(_) => 1,
            BracketExpr::Node(l, r, _) => l.leaf_count() + r.leaf_count(),
        }
    }

    pub fn check_distinct(&self) -> Result<(), BracketError> {
        let mut seen = BTreeSet::new();
        for s in self.leaves() {
            if !seen.insert(s) {
                return Err(BracketError::DuplicateSlot(s));
            }
        }
        Ok(())
    }

    /// Weight of the evaluated expression: leaf weights plus twice the orders.
    pub fn weight(&self, weights: &BTreeMap<usize, Rational>) -> Result<Rational, BracketError> {
        match self {
            BracketExpr::Leaf(i) => weights.get(i).cloned().ok_or(BracketError::UnboundSlot(*i)),
            BracketExpr::Node(l, r, n) => {
                Ok(l.weight(weights)? + r.weight(weights)? + int(2 * *n as i64))
            }
        }
    }
}

impl fmt::Display for BracketExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketExpr::Leaf(i) => write!(f, "f{i}"),
            BracketExpr::Node(l, r, n) => write!(f, "[{l},{r}]_{n}"),
        }
    }
}

/// Bottom-up evaluation with automatic weight bookkeeping.
pub fn eval_bracket_tree(
    expr: &BracketExpr,
    leaves: &BTreeMap<usize, WeightedForm>,
) -> Result<WeightedForm, BracketError> {
    match expr {
        BracketExpr::Leaf(i) => leaves.get(i).cloned().ok_or(BracketError::UnboundSlot(*i)),
        BracketExpr::Node(l, r, n) => {
            let a = eval_bracket_tree(l, leaves)?;
            let b = eval_bracket_tree(r, leaves)?;
            Ok(rc_bracket(&a, &b, *n))
        }
    }
}
