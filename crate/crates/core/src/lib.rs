//! Exact Rankin–Cohen bracket calculus.
//!
//! Everything here is computed over arbitrary-precision rationals: the
//! brackets themselves, the Racah transition coefficients between the two
//! nestings of a triple bracket, the sl2 intertwiners whose Fischer adjoints
//! are the brackets, the truncated Eholzer star product, and a rewriter that
//! reduces any bracketing to the right-nested standard basis.

pub mod batch;
pub mod bracket;
pub mod config;
pub mod identities;
pub mod numerics;
pub mod poly;
pub mod racah;
pub mod report;
pub mod rewrite;
pub mod samples;
pub mod specfun;
pub mod star;
pub mod verma;

pub use bracket::{eval_bracket_tree, rc_bracket, BracketExpr, WeightedForm};
pub use numerics::{binom_general, factorial, pochhammer, Rational};
pub use poly::{Poly, Var, VarSet};
pub use racah::{u_coefficient, u_reverse, ParamTriple, RacahQuery};
