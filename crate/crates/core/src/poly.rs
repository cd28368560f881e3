//! Sparse multivariate polynomials over [`Rational`].
//!
//! A [`Poly`] lives over an explicit [`VarSet`] drawn from `z, x, y, t, v`.
//! Terms are kept in a `BTreeMap` keyed by exponent vectors, with no zero
//! coefficients ever stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::numerics::{factorial, fmt_rational, parse_rational, pow, Rational};

/// Variable names, declared in canonical order `z < x < y < t < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Z,
    X,
    Y,
    T,
    V,
}

impl Var {
    pub const ALL: [Var; 5] = [Var::Z, Var::X, Var::Y, Var::T, Var::V];

    pub fn name(self) -> char {
        match self {
            Var::Z => 'z',
            Var::X => 'x',
            Var::Y => 'y',
            Var::T => 't',
            Var::V => 'v',
        }
    }

    pub fn from_name(c: char) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == c)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Ordered, duplicate-free set of variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VarSet(Vec<Var>);

impl VarSet {
    pub fn new(vars: impl IntoIterator<Item = Var>) -> Self {
        let mut v: Vec<Var> = vars.into_iter().collect();
        v.sort();
        v.dedup();
        VarSet(v)
    }

    pub fn empty() -> Self {
        VarSet(Vec::new())
    }

    pub fn z() -> Self {
        VarSet(vec![Var::Z])
    }

    pub fn xy() -> Self {
        VarSet(vec![Var::X, Var::Y])
    }

    pub fn xyz() -> Self {
        VarSet(vec![Var::Z, Var::X, Var::Y])
    }

    pub fn tv() -> Self {
        VarSet(vec![Var::T, Var::V])
    }

    pub fn single(v: Var) -> Self {
        VarSet(vec![v])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index(&self, v: Var) -> Option<usize> {
        self.0.iter().position(|&w| w == v)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.index(v).is_some()
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        VarSet::new(self.0.iter().chain(other.0.iter()).copied())
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable set mismatch: {0} vs {1}")]
    VarsetMismatch(VarSet, VarSet),
    #[error("variable `{0}` is not in {1}")]
    UnknownVariable(Var, VarSet),
    #[error("variable `{0}` has no binding")]
    UnboundVariable(Var),
    #[error("no value supplied for variable `{0}`")]
    MissingValue(Var),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    vars: VarSet,
    terms: BTreeMap<Exponents, Rational>,
}

impl Poly {
    pub fn zero(vars: VarSet) -> Self {
        Poly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: VarSet, c: Rational) -> Self {
        let mut p = Poly::zero(vars);
        let exps = vec![0; p.vars.len()];
        p.add_term(exps, c);
        p
    }

    pub fn one(vars: VarSet) -> Self {
        Poly::constant(vars, Rational::one())
    }

    /// The polynomial `v` over `vars`; panics if `v` is not in `vars`.
    pub fn var(vars: &VarSet, v: Var) -> Self {
        let idx = vars
            .index(v)
            .unwrap_or_else(|| panic!("variable {v} not in {vars}"));
        let mut exps = vec![0; vars.len()];
        exps[idx] = 1;
        Poly::monomial(vars.clone(), exps, Rational::one())
    }

    pub fn monomial(vars: VarSet, exps: Exponents, coeff: Rational) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut p = Poly::zero(vars);
        p.add_term(exps, coeff);
        p
    }

    /// `c * v^e` in the single-variable set `{v}`.
    pub fn power(v: Var, e: u32, coeff: Rational) -> Self {
        Poly::monomial(VarSet::single(v), vec![e], coeff)
    }

    /// Builds from `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms(
        vars: VarSet,
        terms: impl IntoIterator<Item = (Exponents, Rational)>,
    ) -> Self {
        let mut p = Poly::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    /// Univariate polynomial from dense coefficients, lowest degree first.
    pub fn from_coeffs(v: Var, coeffs: &[Rational]) -> Self {
        Poly::from_terms(
            VarSet::single(v),
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (vec![i as u32], c.clone())),
        )
    }

    fn add_term(&mut self, exps: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `v^e` for a univariate polynomial.
    pub fn coeff_univariate(&self, e: u32) -> Rational {
        debug_assert!(self.vars.len() <= 1);
        if self.vars.is_empty() {
            return if e == 0 {
                self.constant_term()
            } else {
                Rational::zero()
            };
        }
        self.coeff(&[e])
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.vars.len()])
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        let i = self.vars.index(v)?;
        self.terms.keys().map(|e| e[i]).max()
    }

    /// True when every term has total degree `d` (the zero polynomial counts).
    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    fn check_same(&self, other: &Poly) -> Result<(), PolyError> {
        if self.vars != other.vars {
            return Err(PolyError::VarsetMismatch(
                self.vars.clone(),
                other.vars.clone(),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_same(other)?;
        let mut out = Poly::zero(self.vars.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.vars.clone());
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// `self += c * other`, the workhorse of every linear combination here.
    pub fn add_scaled(&mut self, other: &Poly, c: &Rational) {
        assert_eq!(self.vars, other.vars, "variable set mismatch");
        if c.is_zero() {
            return;
        }
        for (e, a) in &other.terms {
            self.add_term(e.clone(), a * c);
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.vars.clone());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Iterated partial derivative `d^order / d var^order`.
    pub fn diff(&self, var: Var, order: u32) -> Result<Poly, PolyError> {
        let i = self
            .vars
            .index(var)
            .ok_or_else(|| PolyError::UnknownVariable(var, self.vars.clone()))?;
        Ok(self.diff_index(i, order))
    }

    fn diff_index(&self, i: usize, order: u32) -> Poly {
        if order == 0 {
            return self.clone();
        }
        let mut out = Poly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e[i] < order {
                continue;
            }
            let mut falling = Rational::one();
            for j in 0..order {
                falling *= Rational::from_integer((e[i] - j).into());
            }
            let mut ne = e.clone();
            ne[i] -= order;
            out.add_term(ne, c * falling);
        }
        out
    }

    /// Simultaneous substitution; every binding must live over `out_vars`.
    ///
    /// Variables that occur in some term must be bound; variables that are
    /// declared but never occur may be left unbound.
    pub fn subst(
        &self,
        bindings: &BTreeMap<Var, Poly>,
        out_vars: &VarSet,
    ) -> Result<Poly, PolyError> {
        for b in bindings.values() {
            if b.vars != *out_vars {
                return Err(PolyError::VarsetMismatch(b.vars.clone(), out_vars.clone()));
            }
        }
        // Cache powers of each bound polynomial.
        let mut powers: Vec<Vec<Poly>> = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.vars().iter().enumerate() {
            let maxe = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
            if maxe == 0 {
                powers.push(vec![Poly::one(out_vars.clone())]);
                continue;
            }
            let b = bindings.get(v).ok_or(PolyError::UnboundVariable(*v))?;
            let mut row = vec![Poly::one(out_vars.clone())];
            for k in 1..=maxe as usize {
                let next = &row[k - 1] * b;
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = Poly::zero(out_vars.clone());
        for (e, c) in &self.terms {
            let mut term = Poly::constant(out_vars.clone(), c.clone());
            for (i, &ei) in e.iter().enumerate() {
                if ei > 0 {
                    term = &term * &powers[i][ei as usize];
                }
            }
            out.add_scaled(&term, &Rational::one());
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over a superset of its variables.
    pub fn lift(&self, vars: &VarSet) -> Result<Poly, PolyError> {
        let mut map = Vec::with_capacity(self.vars.len());
        for v in self.vars.vars() {
            map.push(
                vars.index(*v)
                    .ok_or_else(|| PolyError::UnknownVariable(*v, vars.clone()))?,
            );
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let mut ne = vec![0; vars.len()];
            for (i, &ei) in e.iter().enumerate() {
                ne[map[i]] = ei;
            }
            (ne, c.clone())
        });
        Ok(Poly::from_terms(vars.clone(), terms))
    }

    /// Renames variables one-to-one into `out_vars`.
    pub fn rename(&self, renaming: &[(Var, Var)], out_vars: &VarSet) -> Result<Poly, PolyError> {
        let bindings: BTreeMap<Var, Poly> = renaming
            .iter()
            .map(|&(from, to)| {
                if !out_vars.contains(to) {
                    return Err(PolyError::UnknownVariable(to, out_vars.clone()));
                }
                Ok((from, Poly::var(out_vars, to)))
            })
            .collect::<Result<_, _>>()?;
        self.subst(&bindings, out_vars)
    }

    pub fn eval(&self, point: &BTreeMap<Var, Rational>) -> Result<Rational, PolyError> {
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &ei) in e.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                let v = self.vars.vars()[i];
                let x = point.get(&v).ok_or(PolyError::MissingValue(v))?;
                term *= pow(x, ei as usize);
            }
            total += term;
        }
        Ok(total)
    }

    /// Divides by `v^k` when every term carries at least that power.
    pub fn div_var_power(&self, v: Var, k: u32) -> Option<Poly> {
        let i = self.vars.index(v)?;
        if self.terms.keys().any(|e| e[i] < k) {
            return None;
        }
        Some(Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut ne = e.clone();
                    ne[i] -= k;
                    (ne, c.clone())
                })
                .collect(),
        })
    }

    /// Applies `self` as a constant-coefficient differential operator to `p`,
    /// replacing each variable by its partial derivative.
    pub fn apply_as_derivatives(&self, p: &Poly) -> Result<Poly, PolyError> {
        self.check_same(p)?;
        let mut out = Poly::zero(p.vars.clone());
        for (e, c) in &self.terms {
            let mut d = p.clone();
            for (i, &ei) in e.iter().enumerate() {
                d = d.diff_index(i, ei);
                if d.is_zero() {
                    break;
                }
            }
            out.add_scaled(&d, c);
        }
        Ok(out)
    }

    /// Fischer pairing computed term-by-term: monomials are orthogonal and
    /// `<x^a y^b, x^a y^b> = a! b!`.
    pub fn fischer(&self, other: &Poly) -> Result<Rational, PolyError> {
        self.check_same(other)?;
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            if let Some(d) = other.terms.get(e) {
                let mut w = c * d;
                for &ei in e {
                    w *= factorial(ei as usize);
                }
                total += w;
            }
        }
        Ok(total)
    }

    /// Terms in graded-lex order: higher total degree first, then
    /// lexicographically larger exponent vectors first.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &Rational)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        ts
    }

    pub fn parse(src: &str, vars: &VarSet) -> Result<Poly, PolyError> {
        let mut parser = Parser {
            src: src.as_bytes(),
            pos: 0,
            vars,
        };
        let p = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(p)
    }

    /// Parses over the set of variables that actually appear in `src`.
    pub fn parse_infer(src: &str) -> Result<Poly, PolyError> {
        let vars = VarSet::new(src.chars().filter_map(Var::from_name));
        Poly::parse(src, &vars)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            let is_const = e.iter().all(|&x| x == 0);
            if is_const || !abs.is_one() {
                factors.push(fmt_rational(&abs));
            }
            for (i, &ei) in e.iter().enumerate() {
                let name = self.vars.vars()[i].name();
                match ei {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{ei}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a VarSet,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> PolyError {
        PolyError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
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

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.factor()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                b'/' => {
                    self.pos += 1;
                    self.skip_ws();
                    let d = self.integer()?;
                    if d == 0 {
                        return Err(self.error("division by zero"));
                    }
                    acc = acc.scale(&Rational::new(1.into(), d.into()));
                }
                // implicit product: "2x", "x y", "(1-v)(1+v)"
                b'(' => acc = &acc * &self.factor()?,
                c if c.is_ascii_alphabetic() => acc = &acc * &self.factor()?,
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, PolyError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-&self.factor()?);
        }
        if self.peek() == Some(b'+') {
            self.pos += 1;
            return self.factor();
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e = u32::try_from(e).map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64, PolyError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("integer out of range"))
    }

    fn atom(&mut self) -> Result<Poly, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                // "p/q" literal; a slash is only legal between integers
                if self.pos < self.src.len() && self.src[self.pos] == b'/' {
                    self.pos += 1;
                    let dstart = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    if dstart == self.pos {
                        return Err(self.error("expected denominator"));
                    }
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let value = parse_rational(text).map_err(|e| self.error(&e.to_string()))?;
                Ok(Poly::constant(self.vars.clone(), value))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let v = Var::from_name(c as char)
                    .ok_or_else(|| self.error(&format!("unknown variable `{}`", c as char)))?;
                if !self.vars.contains(v) {
                    return Err(self.error(&format!("variable `{v}` not in {}", self.vars)));
                }
                self.pos += 1;
                Ok(Poly::var(self.vars, v))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rat};

    fn xy(src: &str) -> Poly {
        Poly::parse(src, &VarSet::xy()).unwrap()
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&xy("x+y") * &xy("x-y"), xy("x^2-y^2"));
        let p = xy("3*x*y + 1/2");
        assert_eq!(&p + &Poly::zero(VarSet::xy()), p);
        assert_eq!(xy("x/2").scale(&int(2)), xy("x"));
        assert_eq!(xy("1/2*x").scale(&int(2)), xy("x"));
        assert!(xy("x").try_add(&Poly::var(&VarSet::z(), Var::Z)).is_err());
    }

    #[test]
    fn diff_examples() {
        let z3 = Poly::power(Var::Z, 3, int(1));
        assert_eq!(z3.diff(Var::Z, 1).unwrap(), Poly::power(Var::Z, 2, int(3)));
        assert!(z3.diff(Var::Z, 4).unwrap().is_zero());
        assert_eq!(xy("x^2*y").diff(Var::X, 2).unwrap(), xy("2*y"));
        assert!(matches!(
            z3.diff(Var::X, 1),
            Err(PolyError::UnknownVariable(Var::X, _))
        ));
    }

    #[test]
    fn subst_examples() {
        let tv = VarSet::tv();
        let half = rat(1, 2);
        let mut b = BTreeMap::new();
        b.insert(Var::X, Poly::parse("t*(1-v)", &tv).unwrap().scale(&half));
        b.insert(Var::Y, Poly::parse("t*(1+v)", &tv).unwrap().scale(&half));
        let got = xy("x*y").subst(&b, &tv).unwrap();
        assert_eq!(got, Poly::parse("1/4*t^2 - 1/4*t^2*v^2", &tv).unwrap());

        let mut id = BTreeMap::new();
        id.insert(Var::X, xy("x"));
        id.insert(Var::Y, xy("y"));
        let p = xy("x^3 - 2*x*y + 5");
        assert_eq!(p.subst(&id, &VarSet::xy()).unwrap(), p);

        let zs = VarSet::z();
        let mut diag = BTreeMap::new();
        diag.insert(Var::X, Poly::var(&zs, Var::Z));
        diag.insert(Var::Y, Poly::var(&zs, Var::Z));
        assert_eq!(
            xy("x+y").subst(&diag, &zs).unwrap(),
            Poly::power(Var::Z, 1, int(2))
        );

        let mut partial = BTreeMap::new();
        partial.insert(Var::X, Poly::var(&zs, Var::Z));
        assert_eq!(
            xy("x+y").subst(&partial, &zs),
            Err(PolyError::UnboundVariable(Var::Y))
        );
    }

    #[test]
    fn eval_examples() {
        let mut pt = BTreeMap::new();
        pt.insert(Var::X, int(3));
        assert_eq!(
            Poly::parse("x^2", &VarSet::single(Var::X))
                .unwrap()
                .eval(&pt)
                .unwrap(),
            int(9)
        );
        assert_eq!(
            Poly::zero(VarSet::xy()).eval(&BTreeMap::new()).unwrap(),
            int(0)
        );
        let mut pt = BTreeMap::new();
        pt.insert(Var::X, rat(1, 2));
        pt.insert(Var::Y, rat(1, 3));
        assert_eq!(xy("x+y").eval(&pt).unwrap(), rat(5, 6));
        pt.remove(&Var::Y);
        assert_eq!(xy("x+y").eval(&pt), Err(PolyError::MissingValue(Var::Y)));
    }

    #[test]
    fn canonical_text() {
        assert_eq!(xy("1 + 3/2*x^2*y").to_string(), "3/2*x^2*y + 1");
        assert_eq!(xy("y - x").to_string(), "-x + y");
        assert_eq!(xy("x^2 + x*y + y^2 - 2").to_string(), "x^2 + x*y + y^2 - 2");
        assert_eq!(Poly::zero(VarSet::xy()).to_string(), "0");
        let p = xy("-1/3*x*y^2 + 7");
        assert_eq!(Poly::parse(&p.to_string(), &VarSet::xy()).unwrap(), p);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Poly::parse("x + q", &VarSet::xy()),
            Err(PolyError::Parse { .. })
        ));
        assert!(matches!(
            Poly::parse("z", &VarSet::xy()),
            Err(PolyError::Parse { .. })
        ));
        assert!(matches!(
            Poly::parse("(x", &VarSet::xy()),
            Err(PolyError::Parse { .. })
        ));
        assert!(matches!(
            Poly::parse("1/0", &VarSet::xy()),
            Err(PolyError::Parse { .. })
        ));
        assert_eq!(Poly::parse("2(x+1)", &VarSet::xy()).unwrap(), xy("2*x+2"));
    }

    #[test]
    fn fischer_monomials() {
        let vs = VarSet::xy();
        let m = |a, b| Poly::monomial(vs.clone(), vec![a, b], int(1));
        assert_eq!(m(2, 1).fischer(&m(2, 1)).unwrap(), int(2));
        assert_eq!(m(2, 1).fischer(&m(1, 2)).unwrap(), int(0));
        // agrees with [p(d) q](0)
        let p = xy("x^2*y - 3*y^3 + 1/2");
        let q = xy("5*x^2*y + y^3 - x + 4");
        let via_ops = p.apply_as_derivatives(&q).unwrap().constant_term();
        assert_eq!(p.fischer(&q).unwrap(), via_ops);
    }
}
