#![allow(dead_code)]

use dodgson_core::{Polynomial, Rational, SymMatrix};
use rand::Rng;

/// Integer entries in `[-9, 9]`; each entry is forced to zero with
/// probability `zero_density`.
pub fn random_int_matrix(rng: &mut impl Rng, n: usize, zero_density: f64) -> SymMatrix {
    SymMatrix::from_fn(n, |_, _| {
        if rng.gen_bool(zero_density) {
            Polynomial::zero()
        } else {
            Polynomial::from(rng.gen_range(-9i64..=9))
        }
    })
}

/// Nonzero rational entries `p/q` with `1 <= |p| <= 9`, `1 <= q <= 4`.
pub fn random_nonzero_rational_matrix(rng: &mut impl Rng, n: usize) -> SymMatrix {
    SymMatrix::from_fn(n, |_, _| {
        let p = rng.gen_range(1i64..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let q = rng.gen_range(1i64..=4);
        Polynomial::constant(Rational::new(p, q).unwrap())
    })
}
