//! Default weight samples: a fixed grid plus seeded random positive rationals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numerics::{int, rat, Rational};
use crate::racah::ParamTriple;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_RANDOM_COUNT: usize = 20;

/// The 27 triples over `{1/2, 1, 7/3}`.
pub fn grid_samples() -> Vec<ParamTriple> {
    let vals = [rat(1, 2), int(1), rat(7, 3)];
    let mut out = Vec::with_capacity(27);
    for a in &vals {
        for b in &vals {
            for c in &vals {
                out.push(ParamTriple::new(a.clone(), b.clone(), c.clone()));
            }
        }
    }
    out
}

fn random_weight(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(1..=20), rng.gen_range(1..=20))
}

/// `count` admissible triples with numerators and denominators in `1..=20`.
pub fn random_samples(seed: u64, count: usize) -> Vec<ParamTriple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = ParamTriple::new(
            random_weight(&mut rng),
            random_weight(&mut rng),
            random_weight(&mut rng),
        );
        if p.is_admissible() {
            out.push(p);
        }
    }
    out
}

/// Grid first, then the seeded triples.
pub fn default_samples(seed: u64, count: usize) -> Vec<ParamTriple> {
    let mut out = grid_samples();
    out.extend(random_samples(seed, count));
    out
}
