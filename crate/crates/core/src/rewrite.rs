//! Reduction of arbitrary bracketings to the right-nested, leaf-ordered basis.
//!
//! Three local moves drive the rewriting:
//! - antisymmetry on a pair of leaves `[a,b]_n → (−1)^n [b,a]_n` when `a > b`;
//! - left-to-right renesting `[[X,Y]_k,Z]_n → Σ_p U [X,[Y,Z]_p]_{n+k−p}`;
//! - adjacent transposition `[a,[b,R]_m]_n → Σ_p c_p [b,[a,R]_p]_{n+m−p}` for
//!   `a > b`, composed from `Ũ`, antisymmetry on the inner pair, then `U`.
//!
//! Renesting keeps the leaf order and lowers the left-nesting measure; the
//! other two remove one inversion, so every strategy terminates.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::bracket::{eval_bracket_tree, BracketError, BracketExpr, WeightedForm};
use crate::numerics::{fmt_rational, int, parse_rational, sign, Rational};
use crate::poly::{Poly, VarSet};
use crate::racah::{u_coefficient, u_reverse, ParamTriple, RacahError, RacahQuery};
use crate::report::{indices, sample_strings, VerificationReport};

/// Slot index to weight.
pub type WeightAssignment = BTreeMap<usize, Rational>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("rewriting {site} needs weights ({weights}): {reason}")]
    InadmissibleLocalWeights {
        site: String,
        weights: String,
        reason: String,
    },
    #[error(transparent)]
    Bracket(#[from] BracketError),
    #[error("division by zero in coefficient at {pos}")]
    DivisionByZero { pos: usize },
    #[error("slot l{0} has no weight")]
    UnboundWeight(usize),
}

type Result<T> = std::result::Result<T, RewriteError>;

fn syntax(pos: usize, msg: impl Into<String>) -> RewriteError {
    RewriteError::Syntax {
        pos,
        msg: msg.into(),
    }
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(self.pos, format!("expected `{}`", c as char)))
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(syntax(start, "expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn usize(&mut self) -> Result<usize> {
        let start = self.pos;
        self.digits()?
            .parse()
            .map_err(|_| syntax(start, "integer too large"))
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(syntax(self.pos, format!("unexpected `{}`", c as char))),
        }
    }
}

/// Parses `f<INT>` or `[expr,expr]_<INT>`.
pub fn parse_bracket(src: &str) -> Result<BracketExpr> {
    let mut c = Cursor::new(src);
    let e = parse_expr(&mut c)?;
    c.finish()?;
    Ok(e)
}

fn parse_expr(c: &mut Cursor) -> Result<BracketExpr> {
    match c.peek() {
        Some(b'f') => {
            c.pos += 1;
            Ok(BracketExpr::leaf(c.usize()?))
        }
        Some(b'[') => {
            c.pos += 1;
            let l = parse_expr(c)?;
            c.expect(b',')?;
            let r = parse_expr(c)?;
            c.expect(b']')?;
            c.expect(b'_')?;
            let n = c.usize()?;
            Ok(BracketExpr::node(l, r, n))
        }
        Some(ch) => Err(syntax(c.pos, format!("unexpected `{}`", ch as char))),
        None => Err(syntax(c.pos, "unexpected end of input")),
    }
}

/// `[l_1,[l_2,…,[l_D, l_{D+1}]_{k_1}…]_{k_{D−1}}]_{k_D}` with ascending leaves;
/// `orders` lists `k_1, …, k_D` from the innermost bracket outwards.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StandardTerm {
    pub leaves: Vec<usize>,
    pub orders: Vec<usize>,
}

impl StandardTerm {
    pub fn total_order(&self) -> usize {
        self.orders.iter().sum()
    }

    pub fn to_expr(&self) -> BracketExpr {
        let mut leaves = self.leaves.iter().rev();
        let mut acc = BracketExpr::leaf(*leaves.next().expect("at least one leaf"));
        for (leaf, &k) in leaves.zip(&self.orders) {
            acc = BracketExpr::node(BracketExpr::leaf(*leaf), acc, k);
        }
        acc
    }

    /// `Some` when `expr` is a right comb with strictly ascending leaves.
    pub fn from_expr(expr: &BracketExpr) -> Option<StandardTerm> {
        let mut leaves = Vec::new();
        let mut orders = Vec::new();
        let mut cur = expr;
        while let BracketExpr::Node(l, r, k) = cur {
            match **l {
                BracketExpr::Leaf(i) => leaves.push(i),
                _ => return None,
            }
            orders.push(*k);
            cur = r;
        }
        let BracketExpr::Leaf(last) = cur else {
            unreachable!()
        };
        leaves.push(*last);
        if leaves.windows(2).any(|w| w[0] >= w[1]) {
            return None;
        }
        orders.reverse();
        Some(StandardTerm { leaves, orders })
    }
}

impl fmt::Display for StandardTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ks: Vec<String> = self.orders.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", ks.join(","))
    }
}

/// Exact linear combination of standard terms without zero entries.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearCombo {
    terms: BTreeMap<StandardTerm, Rational>,
}

impl LinearCombo {
    pub fn new() -> Self {
        LinearCombo::default()
    }

    pub fn add(&mut self, t: StandardTerm, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(t.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn add_scaled(&mut self, other: &LinearCombo, c: &Rational) {
        for (t, v) in &other.terms {
            self.add(t.clone(), &(v * c));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn get(&self, t: &StandardTerm) -> Rational {
        self.terms.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&StandardTerm, &Rational)> {
        self.terms.iter()
    }

    /// Splits into components sharing leaf set and total order.
    pub fn components(&self) -> BTreeMap<(Vec<usize>, usize), LinearCombo> {
        let mut out: BTreeMap<(Vec<usize>, usize), LinearCombo> = BTreeMap::new();
        for (t, c) in &self.terms {
            out.entry((t.leaves.clone(), t.total_order()))
                .or_default()
                .add(t.clone(), c);
        }
        out
    }

    /// Evaluates `Σ c · term` on bound leaf forms.
    pub fn evaluate(&self, leaves: &BTreeMap<usize, WeightedForm>) -> Result<Poly> {
        let mut out = Poly::zero(VarSet::z());
        for (t, c) in &self.terms {
            out.add_scaled(&eval_bracket_tree(&t.to_expr(), leaves)?.form, c);
        }
        Ok(out)
    }
}

impl fmt::Display for LinearCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, c) in &self.terms {
            writeln!(f, "{}  {}", fmt_rational(c), t)?;
        }
        Ok(())
    }
}

/// Redex selection order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RedexOrder {
    #[default]
    LeftmostInnermost,
    RightmostInnermost,
}

type Path = Vec<bool>;

fn subtree<'a>(e: &'a BracketExpr, path: &[bool]) -> &'a BracketExpr {
    path.iter().fold(e, |cur, &right| match cur {
        BracketExpr::Node(l, r, _) => {
            if right {
                r
            } else {
                l
            }
        }
        BracketExpr::Leaf(_) => unreachable!("path leaves the tree"),
    })
}

fn replace(e: &BracketExpr, path: &[bool], with: BracketExpr) -> BracketExpr {
    match (path.split_first(), e) {
        (None, _) => with,
        (Some((&right, rest)), BracketExpr::Node(l, r, n)) => {
            if right {
                BracketExpr::node((**l).clone(), replace(r, rest, with), *n)
            } else {
                BracketExpr::node(replace(l, rest, with), (**r).clone(), *n)
            }
        }
        (Some(_), BracketExpr::Leaf(_)) => unreachable!("path leaves the tree"),
    }
}

fn first_leaf(e: &BracketExpr) -> Option<usize> {
    match e {
        BracketExpr::Leaf(i) => Some(*i),
        BracketExpr::Node(..) => None,
    }
}

fn is_redex(e: &BracketExpr) -> bool {
    let BracketExpr::Node(l, r, _) = e else {
        return false;
    };
    if !matches!(**l, BracketExpr::Leaf(_)) {
        return true;
    }
    let a = first_leaf(l).expect("leaf");
    match &**r {
        BracketExpr::Leaf(b) => a > *b,
        BracketExpr::Node(rl, _, _) => first_leaf(rl).is_some_and(|b| a > b),
    }
}

/// Post-order search; the first match has no redex below it.
fn find_redex(e: &BracketExpr, strategy: RedexOrder, path: &mut Path) -> Option<Path> {
    if let BracketExpr::Node(l, r, _) = e {
        let order = match strategy {
            RedexOrder::LeftmostInnermost => [(false, l), (true, r)],
            RedexOrder::RightmostInnermost => [(true, r), (false, l)],
        };
        for (dir, child) in order {
            path.push(dir);
            let hit = find_redex(child, strategy, path);
            path.pop();
            if hit.is_some() {
                return hit;
            }
        }
    }
    is_redex(e).then(|| path.clone())
}

struct Rewriter<'a> {
    weights: &'a WeightAssignment,
}

impl Rewriter<'_> {
    fn weight(&self, e: &BracketExpr) -> Result<Rational> {
        Ok(e.weight(self.weights)?)
    }

    fn triple(
        &self,
        site: &BracketExpr,
        a: &BracketExpr,
        b: &BracketExpr,
        c: &BracketExpr,
    ) -> Result<ParamTriple> {
        let t = ParamTriple::new(self.weight(a)?, self.weight(b)?, self.weight(c)?);
        t.check_admissible().map_err(|e| self.local(site, &t, e))?;
        Ok(t)
    }

    fn local(&self, site: &BracketExpr, t: &ParamTriple, e: RacahError) -> RewriteError {
        RewriteError::InadmissibleLocalWeights {
            site: site.to_string(),
            weights: t.to_string(),
            reason: e.to_string(),
        }
    }

    /// One move at the root of `e`.
    fn step(&self, e: &BracketExpr) -> Result<Vec<(BracketExpr, Rational)>> {
        let BracketExpr::Node(l, r, n) = e else {
            unreachable!("leaves are not redexes")
        };
        let n = *n;
        if let BracketExpr::Node(x, y, k) = &**l {
            let t = self.triple(e, x, y, r)?;
            let total = n + k;
            let mut out = Vec::with_capacity(total + 1);
            for p in 0..=total {
                let u = u_coefficient(&t, RacahQuery::new(total, *k, p))
                    .map_err(|err| self.local(e, &t, err))?;
                let inner = BracketExpr::node((**y).clone(), (**r).clone(), p);
                out.push((BracketExpr::node((**x).clone(), inner, total - p), u));
            }
            return Ok(out);
        }
        match &**r {
            BracketExpr::Leaf(_) => Ok(vec![(
                BracketExpr::node((**r).clone(), (**l).clone(), n),
                sign(n),
            )]),
            BracketExpr::Node(b, rest, m) => {
                let m = *m;
                let total = n + m;
                let t = self.triple(e, l, b, rest)?;
                let swapped = ParamTriple::new(t.lam2.clone(), t.lam1.clone(), t.lam3.clone());
                let ut: Vec<Rational> = (0..=total)
                    .map(|k| u_reverse(&t, RacahQuery::new(total, k, m)))
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|err| self.local(e, &t, err))?;
                let mut out = Vec::with_capacity(total + 1);
                for p in 0..=total {
                    let mut c = Rational::zero();
                    for (k, utk) in ut.iter().enumerate() {
                        if utk.is_zero() {
                            continue;
                        }
                        let u = u_coefficient(&swapped, RacahQuery::new(total, k, p))
                            .map_err(|err| self.local(e, &swapped, err))?;
                        c += utk * sign(k) * u;
                    }
                    let inner = BracketExpr::node((**l).clone(), (**rest).clone(), p);
                    out.push((BracketExpr::node((**b).clone(), inner, total - p), c));
                }
                Ok(out)
            }
        }
    }
}

/// Rewrites `expr` into the standard basis.
pub fn to_standard_with(
    expr: &BracketExpr,
    weights: &WeightAssignment,
    strategy: RedexOrder,
) -> Result<LinearCombo> {
    expr.check_distinct()?;
    expr.weight(weights)?;
    let rw = Rewriter { weights };
    let mut pending: BTreeMap<BracketExpr, Rational> = BTreeMap::new();
    pending.insert(expr.clone(), Rational::one());
    let mut done = LinearCombo::new();
    while let Some((tree, coeff)) = pending.pop_first() {
        let Some(path) = find_redex(&tree, strategy, &mut Vec::new()) else {
            let st = StandardTerm::from_expr(&tree).expect("irreducible trees are standard");
            done.add(st, &coeff);
            continue;
        };
        for (sub, c) in rw.step(subtree(&tree, &path))? {
            if c.is_zero() {
                continue;
            }
            let next = replace(&tree, &path, sub);
            let slot = pending.entry(next.clone()).or_insert_with(Rational::zero);
            *slot += &coeff * c;
            if slot.is_zero() {
                pending.remove(&next);
            }
        }
    }
    Ok(done)
}

pub fn to_standard(expr: &BracketExpr, weights: &WeightAssignment) -> Result<LinearCombo> {
    to_standard_with(expr, weights, RedexOrder::default())
}

/// Evaluates a coefficient expression: rationals, `l<INT>`, `+ − * /`, parentheses.
pub fn eval_coefficient(src: &str, weights: &WeightAssignment) -> Result<Rational> {
    let mut c = Cursor::new(src);
    let v = coeff_sum(&mut c, weights)?;
    c.finish()?;
    Ok(v)
}

fn coeff_sum(c: &mut Cursor, w: &WeightAssignment) -> Result<Rational> {
    let mut acc = coeff_product(c, w)?;
    loop {
        if c.eat(b'+') {
            acc += coeff_product(c, w)?;
        } else if c.eat(b'-') {
            acc -= coeff_product(c, w)?;
        } else {
            return Ok(acc);
        }
    }
}

fn coeff_product(c: &mut Cursor, w: &WeightAssignment) -> Result<Rational> {
    let mut acc = coeff_unary(c, w)?;
    loop {
        if c.eat(b'*') {
            acc *= coeff_unary(c, w)?;
        } else if c.peek() == Some(b'/') {
            let pos = c.pos;
            c.pos += 1;
            let d = coeff_unary(c, w)?;
            if d.is_zero() {
                return Err(RewriteError::DivisionByZero { pos });
            }
            acc /= d;
        } else {
            return Ok(acc);
        }
    }
}

fn coeff_unary(c: &mut Cursor, w: &WeightAssignment) -> Result<Rational> {
    if c.eat(b'-') {
        return Ok(-coeff_unary(c, w)?);
    }
    if c.eat(b'+') {
        return coeff_unary(c, w);
    }
    match c.peek() {
        Some(b'(') => {
            c.pos += 1;
            let v = coeff_sum(c, w)?;
            c.expect(b')')?;
            Ok(v)
        }
        Some(b'l') => {
            c.pos += 1;
            let slot = c.usize()?;
            w.get(&slot)
                .cloned()
                .ok_or(RewriteError::UnboundWeight(slot))
        }
        Some(ch) if ch.is_ascii_digit() => {
            let start = c.pos;
            let d = c.digits()?;
            parse_rational(d).map_err(|e| syntax(start, e.to_string()))
        }
        Some(ch) => Err(syntax(c.pos, format!("unexpected `{}`", ch as char))),
        None => Err(syntax(c.pos, "unexpected end of input")),
    }
}

/// One `coeff | expr` line of an identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityTerm {
    pub coeff: String,
    pub expr: BracketExpr,
}

/// Parses lines `coeff | expr`; blank lines and `#` comments are skipped.
pub fn parse_identity(src: &str) -> Result<Vec<IdentityTerm>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in src.lines() {
        let body = line.split('#').next().unwrap_or("").trim();
        if !body.is_empty() {
            let (coeff, expr) = body
                .split_once('|')
                .ok_or_else(|| syntax(offset, "expected `coeff | expr`"))?;
            let expr = parse_bracket(expr).map_err(|e| match e {
                RewriteError::Syntax { pos, msg } => syntax(offset + pos, msg),
                other => other,
            })?;
            out.push(IdentityTerm {
                coeff: coeff.trim().to_string(),
                expr,
            });
        }
        offset += line.len() + 1;
    }
    Ok(out)
}

/// `Σ coeff_i · to_standard(expr_i)`.
pub fn identity_combo(
    terms: &[IdentityTerm],
    weights: &WeightAssignment,
    strategy: RedexOrder,
) -> Result<LinearCombo> {
    let mut total = LinearCombo::new();
    for t in terms {
        let c = eval_coefficient(&t.coeff, weights)?;
        total.add_scaled(&to_standard_with(&t.expr, weights, strategy)?, &c);
    }
    Ok(total)
}

fn slots(terms: &[IdentityTerm]) -> Vec<usize> {
    let mut s: Vec<usize> = terms.iter().flat_map(|t| t.expr.leaves()).collect();
    s.sort_unstable();
    s.dedup();
    s
}

fn monomial_assignments(slots: &[usize], max_deg: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in slots {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max_deg).map(move |d| {
                    let mut w = v.clone();
                    w.push(d);
                    w
                })
            })
            .collect();
    }
    out
}

/// `Σ coeff_i · expr_i` evaluated directly on monomial leaves of degree ≤ `max_deg`.
pub fn identity_by_evaluation(
    terms: &[IdentityTerm],
    weights: &WeightAssignment,
    max_deg: u32,
) -> Result<Vec<(Vec<u32>, Poly)>> {
    let slots = slots(terms);
    let coeffs: Vec<Rational> = terms
        .iter()
        .map(|t| eval_coefficient(&t.coeff, weights))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for degs in monomial_assignments(&slots, max_deg) {
        let mut leaves = BTreeMap::new();
        for (s, d) in slots.iter().zip(&degs) {
            let w = weights
                .get(s)
                .cloned()
                .ok_or(BracketError::UnboundSlot(*s))?;
            leaves.insert(*s, WeightedForm::monomial(w, *d));
        }
        let mut sum = Poly::zero(VarSet::z());
        for (t, c) in terms.iter().zip(&coeffs) {
            sum.add_scaled(&eval_bracket_tree(&t.expr, &leaves)?.form, c);
        }
        out.push((degs, sum));
    }
    Ok(out)
}

fn weight_strings(w: &WeightAssignment) -> Vec<String> {
    sample_strings(&w.values().cloned().collect::<Vec<_>>())
}

/// Certifies `Σ coeff_i · expr_i = 0` by cancellation in the standard basis.
pub fn check_identity(
    terms: &[IdentityTerm],
    weights: &WeightAssignment,
) -> Result<VerificationReport> {
    let combo = identity_combo(terms, weights, RedexOrder::default())?;
    let sample = weight_strings(weights);
    let mut report = VerificationReport::new("rewrite");
    report.add_sample(sample.clone());
    report.check(&sample, indices(&[]), &combo, &LinearCombo::new());
    Ok(report)
}

/// Certifies the same identity by direct evaluation on monomials.
pub fn check_identity_by_evaluation(
    terms: &[IdentityTerm],
    weights: &WeightAssignment,
    max_deg: u32,
) -> Result<VerificationReport> {
    let sample = weight_strings(weights);
    let mut report = VerificationReport::new("rewrite_evaluation");
    report.add_sample(sample.clone());
    let zero = Poly::zero(VarSet::z());
    for (degs, value) in identity_by_evaluation(terms, weights, max_deg)? {
        let idx = degs
            .iter()
            .enumerate()
            .map(|(i, d)| (format!("m{}", i + 1), *d as i64))
            .collect();
        report.check(&sample, idx, &value, &zero);
    }
    Ok(report)
}

/// Binds weight vectors to the slots of the identity in ascending order.
pub fn assign(slots: &[usize], values: &[Rational]) -> WeightAssignment {
    slots.iter().copied().zip(values.iter().cloned()).collect()
}

/// Both certifications over a set of weight vectors; returns `(basis, evaluation)` reports.
pub fn check_identity_suite(
    id: &str,
    terms: &[IdentityTerm],
    samples: &[Vec<Rational>],
    max_deg: u32,
) -> Result<(VerificationReport, VerificationReport)> {
    let s = slots(terms);
    let parts: Vec<(VerificationReport, VerificationReport)> = samples
        .par_iter()
        .map(|v| {
            let w = assign(&s, v);
            Ok((
                check_identity(terms, &w)?,
                check_identity_by_evaluation(terms, &w, max_deg)?,
            ))
        })
        .collect::<Result<_>>()?;
    let (a, b): (Vec<_>, Vec<_>) = parts.into_iter().unzip();
    Ok((
        VerificationReport::merge_all(id, false, a),
        VerificationReport::merge_all(&format!("{id}_evaluation"), false, b),
    ))
}

/// The slots an identity refers to, ascending.
pub fn identity_slots(terms: &[IdentityTerm]) -> Vec<usize> {
    slots(terms)
}

/// The three classical identities in `coeff | expr` form.
pub const CYCLIC_IDENTITY: &str =
    "1 | [[f1,f2]_1,f3]_1\n1 | [[f2,f3]_1,f1]_1\n1 | [[f3,f1]_1,f2]_1";
pub const WEIGHTED_IDENTITY: &str =
    "l3 | [[f1,f2]_1,f3]_0\nl1 | [[f2,f3]_1,f1]_0\nl2 | [[f3,f1]_1,f2]_0";
pub const FOUR_FORM_IDENTITY: &str = "1 | [[[f1,f2]_0,f3]_0,f4]_1\n1 | [[[f2,f3]_0,f4]_0,f1]_1\n\
                                      1 | [[[f4,f3]_0,f1]_0,f2]_1\n1 | [[[f4,f1]_0,f2]_0,f3]_1";

/// Default weight of every slot when none is given.
pub fn unit_weights(slots: &[usize]) -> WeightAssignment {
    slots.iter().map(|s| (*s, int(1))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;
    use crate::report::Status;
    use proptest::prelude::*;

    fn w(vals: &[Rational]) -> WeightAssignment {
        vals.iter()
            .cloned()
            .enumerate()
            .map(|(i, v)| (i + 1, v))
            .collect()
    }

    fn mixed() -> WeightAssignment {
        w(&[rat(1, 2), int(1), rat(7, 3), rat(5, 4), rat(2, 3)])
    }

    #[test]
    fn parse_examples() {
        let e = parse_bracket("[[f1,f2]_1,f3]_1").unwrap();
        let l = BracketExpr::leaf;
        assert_eq!(
            e,
            BracketExpr::node(BracketExpr::node(l(1), l(2), 1), l(3), 1)
        );
        assert_eq!(parse_bracket(" f2 ").unwrap(), l(2));
        let comb = parse_bracket("[f1,[f2,[f3,f4]_0]_0]_1").unwrap();
        let st = StandardTerm::from_expr(&comb).unwrap();
        assert_eq!(st.orders, vec![0, 0, 1]);
        assert_eq!(st.to_expr(), comb);
        assert_eq!(e.to_string(), "[[f1,f2]_1,f3]_1");
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert_eq!(
            parse_bracket("[f1,f2]").unwrap_err(),
            syntax(7, "expected `_`")
        );
        assert!(matches!(
            parse_bracket("[f1;f2]_1"),
            Err(RewriteError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            parse_bracket("f1 f2"),
            Err(RewriteError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            parse_bracket(""),
            Err(RewriteError::Syntax { pos: 0, .. })
        ));
    }

    #[test]
    fn standard_round_trip() {
        let weights = mixed();
        for src in [
            "f3",
            "[f1,f2]_2",
            "[f1,[f2,f3]_1]_0",
            "[f1,[f2,[f4,f5]_2]_0]_1",
        ] {
            let e = parse_bracket(src).unwrap();
            let combo = to_standard(&e, &weights).unwrap();
            assert_eq!(combo.len(), 1);
            let st = StandardTerm::from_expr(&e).unwrap();
            assert_eq!(combo.get(&st), int(1));
        }
    }

    #[test]
    fn antisymmetry_sign() {
        let combo = to_standard(&parse_bracket("[f2,f1]_3").unwrap(), &mixed()).unwrap();
        let st = StandardTerm {
            leaves: vec![1, 2],
            orders: vec![3],
        };
        assert_eq!(combo.get(&st), int(-1));
        assert_eq!(combo.len(), 1);
    }

    #[test]
    fn left_nest_expands_with_u() {
        let weights = w(&[int(1), int(1), int(1)]);
        let combo = to_standard(&parse_bracket("[[f1,f2]_1,f3]_1").unwrap(), &weights).unwrap();
        let t = ParamTriple::new(int(1), int(1), int(1));
        for p in 0..=2 {
            let st = StandardTerm {
                leaves: vec![1, 2, 3],
                orders: vec![p, 2 - p],
            };
            assert_eq!(
                combo.get(&st),
                u_coefficient(&t, RacahQuery::new(2, 1, p)).unwrap()
            );
        }
    }

    #[test]
    fn outer_antisymmetry_sign_on_cyclic_term() {
        // [[f2,f3]_1,f1]_1 = −[f1,[f2,f3]_1]_1
        let combo = to_standard(&parse_bracket("[[f2,f3]_1,f1]_1").unwrap(), &mixed()).unwrap();
        assert_eq!(combo.len(), 1);
        assert_eq!(
            combo.get(&StandardTerm {
                leaves: vec![1, 2, 3],
                orders: vec![1, 1]
            }),
            int(-1)
        );
    }

    #[test]
    fn classical_identities_cancel() {
        for (src, size) in [
            (CYCLIC_IDENTITY, 3),
            (WEIGHTED_IDENTITY, 3),
            (FOUR_FORM_IDENTITY, 4),
        ] {
            let terms = parse_identity(src).unwrap();
            for weights in [
                w(&vec![int(1); size]),
                w(&mixed().values().take(size).cloned().collect::<Vec<_>>()),
            ] {
                let r = check_identity(&terms, &weights).unwrap();
                assert_eq!(r.status, Status::Pass, "{src}");
                let e = check_identity_by_evaluation(&terms, &weights, 2).unwrap();
                assert_eq!(e.status, Status::Pass, "{src}");
            }
        }
    }

    #[test]
    fn false_identity_is_rejected() {
        let terms = parse_identity("1 | [[f1,f2]_1,f3]_1\n1 | [[f2,f3]_1,f1]_1").unwrap();
        let r = check_identity(&terms, &mixed()).unwrap();
        assert_eq!(r.status, Status::Fail);
        let e = check_identity_by_evaluation(&terms, &mixed(), 2).unwrap();
        assert_eq!(e.status, Status::Fail);
    }

    #[test]
    fn coefficient_language() {
        let weights = mixed();
        assert_eq!(
            eval_coefficient("l1 + 2*l3 - (1/2)", &weights).unwrap(),
            rat(1, 2) + rat(14, 3) - rat(1, 2)
        );
        assert_eq!(eval_coefficient("-3/4", &weights).unwrap(), rat(-3, 4));
        assert_eq!(eval_coefficient("l2*(l1-1)", &weights).unwrap(), rat(-1, 2));
        assert!(matches!(
            eval_coefficient("l9", &weights),
            Err(RewriteError::UnboundWeight(9))
        ));
        assert!(matches!(
            eval_coefficient("1/(l2-1)", &weights),
            Err(RewriteError::DivisionByZero { pos: 1 })
        ));
        assert!(matches!(
            eval_coefficient("2 +", &weights),
            Err(RewriteError::Syntax { .. })
        ));
    }

    #[test]
    fn inadmissible_local_weights() {
        let weights = w(&[int(1), int(-1), int(1)]);
        let e = parse_bracket("[[f1,f2]_1,f3]_0").unwrap();
        assert!(matches!(
            to_standard(&e, &weights),
            Err(RewriteError::InadmissibleLocalWeights { .. })
        ));
        let dup = parse_bracket("[f1,f1]_0").unwrap();
        assert!(matches!(
            to_standard(&dup, &mixed()),
            Err(RewriteError::Bracket(BracketError::DuplicateSlot(1)))
        ));
    }

    fn arb_tree(slots: Vec<usize>, budget: usize) -> BoxedStrategy<BracketExpr> {
        if slots.len() == 1 {
            return Just(BracketExpr::leaf(slots[0])).boxed();
        }
        let len = slots.len();
        (1..len, 0..=budget)
            .prop_flat_map(move |(cut, k)| {
                let left = arb_tree(slots[..cut].to_vec(), budget - k);
                let right = arb_tree(slots[cut..].to_vec(), budget - k);
                (left, right, Just(k))
            })
            .prop_filter("total order bounded", move |(l, r, k)| {
                l.total_order() + r.total_order() + k <= budget
            })
            .prop_map(|(l, r, k)| BracketExpr::node(l, r, k))
            .boxed()
    }

    fn arb_expr() -> impl Strategy<Value = BracketExpr> {
        (2usize..=5)
            .prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
            .prop_flat_map(|slots| arb_tree(slots, 3))
    }

    fn leaf_forms(weights: &WeightAssignment, degs: &[u32]) -> BTreeMap<usize, WeightedForm> {
        weights
            .iter()
            .zip(degs)
            .map(|((s, w), d)| (*s, WeightedForm::monomial(w.clone(), *d)))
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn strategies_agree_and_preserve_meaning(e in arb_expr(), degs in proptest::collection::vec(0u32..=3, 5)) {
            let weights = mixed();
            let a = to_standard_with(&e, &weights, RedexOrder::LeftmostInnermost).unwrap();
            let b = to_standard_with(&e, &weights, RedexOrder::RightmostInnermost).unwrap();
            prop_assert_eq!(&a, &b);
            for t in a.iter().map(|(t, _)| t) {
                prop_assert_eq!(t.total_order(), e.total_order());
            }
            let used: WeightAssignment = weights.iter().filter(|(s, _)| e.leaves().contains(s))
                .map(|(s, w)| (*s, w.clone())).collect();
            let leaves = leaf_forms(&used, &degs);
            prop_assert_eq!(a.evaluate(&leaves).unwrap(), eval_bracket_tree(&e, &leaves).unwrap().form);
        }
    }
}
