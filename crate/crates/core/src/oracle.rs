//! Independent determinant routines used to cross-check condensation.
//!
//! Nothing here calls into the condensation engine: Laplace expansion and
//! Bareiss elimination are separate algorithms, so agreement with the engine
//! is real evidence.

use crate::error::{Error, Result};
use crate::matrix::{contiguous_minor, SymMatrix, Window};
use crate::poly::Polynomial;
use crate::rational::Rational;

/// Largest dimension accepted by [`det_cofactor`].
pub const COFACTOR_CAP: usize = 8;

/// Determinant by first-row Laplace expansion. Works on symbolic entries.
pub fn det_cofactor(m: &SymMatrix) -> Result<Polynomial> {
    let n = m.n();
    if n > COFACTOR_CAP {
        return Err(Error::DimensionCap {
            n,
            cap: COFACTOR_CAP,
        });
    }
    let cols: Vec<usize> = (0..n).collect();
    Ok(expand(m, 0, &cols))
}

fn expand(m: &SymMatrix, row: usize, cols: &[usize]) -> Polynomial {
    match cols {
        [c] => m.get(row, *c).clone(),
        [a, b] => &(m.get(row, *a) * m.get(row + 1, *b)) - &(m.get(row, *b) * m.get(row + 1, *a)),
        _ => {
            let mut acc = Polynomial::zero();
            let mut rest = Vec::with_capacity(cols.len() - 1);
            for (k, &c) in cols.iter().enumerate() {
                let entry = m.get(row, c);
                if entry.is_zero() {
                    continue;
                }
                rest.clear();
                rest.extend(cols.iter().copied().filter(|&x| x != c));
                let term = entry * &expand(m, row + 1, &rest);
                acc = if k % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
            acc
        }
    }
}

/// Fraction-free (Bareiss) elimination on a constant matrix. A zero pivot
/// is replaced by the first nonzero entry below it, flipping the sign.
pub fn det_bareiss(m: &SymMatrix) -> Result<Rational> {
    let mut a = m.to_rationals()?;
    let n = a.len();
    let mut sign_flip = false;
    let mut prev = Rational::one();
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return Ok(Rational::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = t.checked_div(&prev)?;
            }
            a[i][k] = Rational::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if sign_flip { -d } else { d })
}

/// The (n-k)x(n-k) matrix of all contiguous (k+1)x(k+1) minors of `a`.
pub fn all_minors_level(a: &SymMatrix, k: usize) -> Result<SymMatrix> {
    let n = a.n();
    if k == 0 || k >= n {
        return Err(Error::LevelOutOfRange { k, n });
    }
    let size = n - k;
    let mut entries = Vec::with_capacity(size * size);
    for i in 1..=size {
        for j in 1..=size {
            entries.push(contiguous_minor(a, Window::new(i, j, k + 1))?);
        }
    }
    SymMatrix::new(size, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::poly::{Binding, VarId};
    use rand::{Rng, SeedableRng};

    fn random_matrix(rng: &mut impl Rng, n: usize) -> SymMatrix {
        SymMatrix::from_fn(n, |_, _| {
            let num = rng.gen_range(-9i64..=9);
            let den = rng.gen_range(1i64..=4);
            Polynomial::constant(Rational::new(num, den).unwrap())
        })
    }

    #[test]
    fn cofactor_examples() {
        assert_eq!(
            det_cofactor(&corpus::shift_resistant_4x4()).unwrap(),
            Polynomial::from(3)
        );
        let sym = corpus::zero_block_4x4_symbolic();
        let zero: Binding = (0..4).map(|v| (VarId(v), Rational::zero())).collect();
        assert_eq!(
            det_cofactor(&sym).unwrap().eval(&zero).unwrap(),
            Rational::from(16)
        );
        let upper =
            SymMatrix::from_ints([[2, 5, -1, 3], [0, -3, 4, 4], [0, 0, 7, 1], [0, 0, 0, 5]]);
        assert_eq!(det_cofactor(&upper).unwrap(), Polynomial::from(-210));
        let big = SymMatrix::identity(9);
        assert_eq!(
            det_cofactor(&big),
            Err(Error::DimensionCap { n: 9, cap: 8 })
        );
    }

    #[test]
    fn bareiss_examples() {
        assert_eq!(
            det_bareiss(&corpus::centre_zero_4x4()).unwrap(),
            Rational::from(213)
        );
        assert_eq!(
            det_bareiss(&corpus::matrix_a6()).unwrap(),
            Rational::from(2073)
        );
        let singular = SymMatrix::from_ints([[1, 2, 3], [4, 5, 6], [1, 2, 3]]);
        assert_eq!(det_bareiss(&singular).unwrap(), Rational::zero());
        let needs_swap = SymMatrix::from_ints([[0, 1], [1, 0]]);
        assert_eq!(det_bareiss(&needs_swap).unwrap(), Rational::from(-1));
        assert_eq!(
            det_bareiss(&corpus::zero_block_4x4_symbolic()),
            Err(Error::SymbolicEntry)
        );
    }

    #[test]
    fn minors_level_examples() {
        let a1 = corpus::matrix_a1();
        assert_eq!(
            all_minors_level(&a1, 1).unwrap(),
            corpus::shared_intermediate()
        );
        let full = all_minors_level(&a1, 3).unwrap();
        assert_eq!(full, SymMatrix::from_ints([[213]]));
        assert_eq!(
            all_minors_level(&a1, 4),
            Err(Error::LevelOutOfRange { k: 4, n: 4 })
        );
        assert_eq!(
            all_minors_level(&a1, 0),
            Err(Error::LevelOutOfRange { k: 0, n: 4 })
        );
    }

    #[test]
    fn cofactor_agrees_with_bareiss() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..150 {
            let n = rng.gen_range(1..=7);
            let m = random_matrix(&mut rng, n);
            let c = det_cofactor(&m).unwrap().constant_value().unwrap();
            assert_eq!(c, det_bareiss(&m).unwrap(), "{m:?}");
        }
    }

    #[test]
    fn row_scaling_and_transpose() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(1..=6);
            let m = random_matrix(&mut rng, n);
            let d = det_bareiss(&m).unwrap();
            assert_eq!(det_bareiss(&m.transpose()).unwrap(), d);
            let r = Rational::new(rng.gen_range(-5i64..=5), rng.gen_range(1i64..=3)).unwrap();
            let row = rng.gen_range(0..n);
            let scaled = SymMatrix::from_fn(n, |i, j| {
                if i == row {
                    m.get(i, j).scale(&r)
                } else {
                    m.get(i, j).clone()
                }
            });
            assert_eq!(det_bareiss(&scaled).unwrap(), &d * &r);
        }
    }
}
