//! Exact rational scalars and the combinatorial primitives built on them.
//!
//! Every coefficient in this crate is a [`Rational`]; nothing in the
//! computation paths touches floating point.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always stored reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Builds `num/den` from machine integers.
///
/// Panics if `den` is zero.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"` (surrounding whitespace allowed).
pub fn parse_rational(src: &str) -> Result<Rational, ParseRationalError> {
    let s = src.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| ParseRationalError::Invalid(s.to_string()))?;
    let den = BigInt::from_str(den).map_err(|_| ParseRationalError::Invalid(s.to_string()))?;
    if den.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `"p/q"`, or `"p"` when the denominator is one.
pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Rising factorial `x (x+1) ... (x+m-1)`; the empty product for `m = 0`.
pub fn pochhammer(x: &Rational, m: usize) -> Rational {
    let mut acc = Rational::one();
    let mut term = x.clone();
    for _ in 0..m {
        acc *= &term;
        if acc.is_zero() {
            return acc;
        }
        term += Rational::one();
    }
    acc
}

pub fn factorial(k: usize) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= i;
    }
    Rational::from_integer(acc)
}

/// Generalized binomial `x choose k = (x-k+1)_k / k!`.
pub fn binom_general(x: &Rational, k: usize) -> Rational {
    let start = x - Rational::from_integer(BigInt::from(k)) + Rational::one();
    pochhammer(&start, k) / factorial(k)
}

/// Integer binomial as a rational, zero when `k > n`.
pub fn binom(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    binom_general(&Rational::from_integer(BigInt::from(n)), k)
}

/// `Some(m)` when `x` equals the integer `-m` with `m >= 0`.
pub fn as_nonpositive_integer(x: &Rational) -> Option<usize> {
    if !x.is_integer() || x.is_positive() {
        return None;
    }
    let m = -x.to_integer();
    usize::try_from(m).ok()
}

/// True when `x` is an integer `<= 0`.
pub fn is_nonpositive_integer(x: &Rational) -> bool {
    x.is_integer() && !x.is_positive()
}

pub fn pow(x: &Rational, e: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

pub fn sign(k: usize) -> Rational {
    if k.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&int(3), 0), int(1));
        // (1/2)(3/2)(5/2)
        assert_eq!(pochhammer(&rat(1, 2), 3), rat(15, 8));
        assert_eq!(pochhammer(&int(-2), 5), int(0));
        assert_eq!(pochhammer(&int(-2), 2), int(2));
    }

    #[test]
    fn pochhammer_splits() {
        for x in [rat(1, 2), rat(-7, 3), int(4), int(-3)] {
            for m in 0..7 {
                for k in 0..=m {
                    let shifted = &x + int(k as i64);
                    assert_eq!(
                        pochhammer(&x, m),
                        pochhammer(&x, k) * pochhammer(&shifted, m - k)
                    );
                }
            }
        }
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binom_general(&int(5), 2), int(10));
        assert_eq!(binom_general(&rat(7, 3), 0), int(1));
        assert_eq!(binom_general(&rat(1, 2), 2), rat(-1, 8));
        assert_eq!(binom(3, 5), int(0));
        for n in 0..10usize {
            let mut row = vec![1i64];
            for k in 1..=n {
                row.push(row[k - 1] * (n - k + 1) as i64 / k as i64);
            }
            for (k, v) in row.iter().enumerate() {
                assert_eq!(binom(n, k), int(*v));
            }
        }
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(factorial(0), int(1));
        assert_eq!(factorial(1), int(1));
        assert_eq!(factorial(5), int(120));
    }

    #[test]
    fn binomial_reflection() {
        for x in [rat(1, 2), rat(7, 3), int(3), rat(-5, 4)] {
            for k in 0..8 {
                assert_eq!(
                    binom_general(&-x.clone(), k),
                    sign(k) * pochhammer(&x, k) / factorial(k)
                );
            }
        }
    }

    /// Lagrange interpolation through m+1 points recovers a monic degree-m polynomial.
    #[test]
    fn pochhammer_is_monic_polynomial() {
        for m in 0..=6usize {
            let nodes: Vec<Rational> = (0..=m + 1).map(|i| rat(2 * i as i64 + 1, 3)).collect();
            let values: Vec<Rational> = nodes.iter().map(|x| pochhammer(x, m)).collect();
            // leading coefficient of the interpolant on the first m+1 nodes
            let mut lead = Rational::zero();
            for i in 0..=m {
                let mut denom = Rational::one();
                for j in 0..=m {
                    if i != j {
                        denom *= &nodes[i] - &nodes[j];
                    }
                }
                lead += &values[i] / denom;
            }
            assert_eq!(lead, int(1), "m = {m}");
            // the extra node lies on the same interpolant
            let x = &nodes[m + 1];
            let mut interp = Rational::zero();
            for i in 0..=m {
                let mut basis = Rational::one();
                for j in 0..=m {
                    if i != j {
                        basis *= (x - &nodes[j]) / (&nodes[i] - &nodes[j]);
                    }
                }
                interp += &values[i] * basis;
            }
            assert_eq!(interp, values[m + 1]);
        }
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" -4 ").unwrap(), int(-4));
        assert_eq!(parse_rational("2/-4").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(fmt_rational(&rat(-3, 2)), "-3/2");
        assert_eq!(fmt_rational(&int(7)), "7");
        let r = rat(6, -4);
        assert!(r.denom().is_positive());
        assert_eq!(r, rat(-3, 2));
    }

    #[test]
    fn nonpositive_integer_detection() {
        assert_eq!(as_nonpositive_integer(&int(-3)), Some(3));
        assert_eq!(as_nonpositive_integer(&int(0)), Some(0));
        assert_eq!(as_nonpositive_integer(&int(2)), None);
        assert_eq!(as_nonpositive_integer(&rat(-1, 2)), None);
    }
}
