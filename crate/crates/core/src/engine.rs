//! Dodgson condensation with exact interleaved division.
//!
//! Level `A^(m)` is the condensation of `A^(m+1)`; from `A^(n-2)` onwards
//! every entry is divided by the matching interior entry of `A^(m+2)`.
//! A level of size `k >= 3` therefore becomes a divisor two steps later,
//! and an identically-zero entry in its interior stops the run with
//! [`Error::DivisorZero`] as soon as that level is produced.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::oracle::all_minors_level;
use crate::poly::{Binding, Polynomial};
use crate::rational::Rational;
use crate::repair::RepairPlan;

/// Levels with at least this many entries are computed on the rayon pool.
const PARALLEL_MIN_ENTRIES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CondensationTrace {
    /// `A^(n)` down to `A^(1)`; only the last level when recording is off.
    pub levels: Vec<SymMatrix>,
    pub mult_count: u64,
    pub div_count: u64,
    pub repairs: Option<RepairPlan>,
}

impl CondensationTrace {
    /// The single entry of `A^(1)`.
    pub fn final_polynomial(&self) -> &Polynomial {
        self.levels
            .last()
            .expect("a finished trace has at least one level")
            .get(0, 0)
    }
}

/// `2 * sum_{m=1}^{n-1} m^2`: multiplications of an uninterrupted run.
pub fn predicted_mult_count(n: usize) -> u64 {
    let n = n as u64;
    2 * (1..n).map(|m| m * m).sum::<u64>()
}

/// Operations spent by a run that stopped on a zero divisor at `level`
/// (the check fires right after that level is produced).
pub fn partial_counts(n: usize, level: usize) -> (u64, u64) {
    let (n, level) = (n as u64, level as u64);
    let mults = 2 * (level..n).map(|m| m * m).sum::<u64>();
    let divs = (level..n.saturating_sub(1)).map(|m| m * m).sum::<u64>();
    (mults, divs)
}

fn build_level(
    size: usize,
    parallel: bool,
    f: impl Fn(usize, usize) -> Result<Polynomial> + Sync,
) -> Result<SymMatrix> {
    let entries: Result<Vec<Polynomial>> = if parallel && size * size >= PARALLEL_MIN_ENTRIES {
        (0..size * size)
            .into_par_iter()
            .map(|k| f(k / size, k % size))
            .collect()
    } else {
        (0..size * size).map(|k| f(k / size, k % size)).collect()
    };
    SymMatrix::new(size, entries?)
}

fn condense_with(cur: &SymMatrix, parallel: bool) -> Result<SymMatrix> {
    let n = cur.n();
    if n < 2 {
        return Err(Error::CannotCondense(n));
    }
    build_level(n - 1, parallel, |i, j| {
        Ok(&(cur.get(i, j) * cur.get(i + 1, j + 1)) - &(cur.get(i, j + 1) * cur.get(i + 1, j)))
    })
}

/// Matrix of all adjacent 2x2 determinants.
pub fn condense_once(cur: &SymMatrix) -> Result<SymMatrix> {
    condense_with(cur, false)
}

/// First identically-zero interior entry of `m`, 1-based in `m`'s coordinates.
fn first_interior_zero(m: &SymMatrix) -> Option<(usize, usize)> {
    let n = m.n();
    if n < 3 {
        return None;
    }
    (1..n - 1)
        .flat_map(|i| (1..n - 1).map(move |j| (i, j)))
        .find(|&(i, j)| m.get(i, j).is_zero())
        .map(|(i, j)| (i + 1, j + 1))
}

fn divide_with(raw: &SymMatrix, prev_prev: &SymMatrix, parallel: bool) -> Result<SymMatrix> {
    if prev_prev.n() != raw.n() + 2 {
        return Err(Error::DimensionMismatch(format!(
            "cannot divide a {0}x{0} level by the interior of a {1}x{1} level",
            raw.n(),
            prev_prev.n()
        )));
    }
    if let Some((row, col)) = first_interior_zero(prev_prev) {
        return Err(Error::DivisorZero {
            level: prev_prev.n(),
            row,
            col,
        });
    }
    build_level(raw.n(), parallel, |i, j| {
        raw.get(i, j).exact_div(prev_prev.get(i + 1, j + 1))
    })
}

/// Elementwise exact division of `raw` by `interior(prev_prev)`.
///
/// A zero divisor is reported at its position in `prev_prev` (1-based).
pub fn divide_by_interior(raw: &SymMatrix, prev_prev: &SymMatrix) -> Result<SymMatrix> {
    divide_with(raw, prev_prev, false)
}

/// Levels produced by one descent, plus operation counts.
#[derive(Clone, Debug)]
pub struct Descent {
    pub levels: Vec<SymMatrix>,
    pub mult_count: u64,
    pub div_count: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct Engine {
    /// Keep every level, not just the last one.
    pub record_levels: bool,
    pub parallel: bool,
}

impl Default for Engine {
    fn default() -> Self {
        Engine {
            record_levels: true,
            parallel: true,
        }
    }
}

impl Engine {
    pub fn new() -> Self {
        Self::default()
    }

    /// Condenses `a` down to a `stop x stop` level.
    ///
    /// Only interiors that will actually serve as divisors before reaching
    /// `stop` are checked for zeros.
    pub fn descend(&self, a: &SymMatrix, stop: usize) -> Result<Descent> {
        let n = a.n();
        if stop == 0 || stop > n {
            return Err(Error::LevelUnavailable(stop));
        }
        let check = |m: &SymMatrix| -> Result<()> {
            if m.n() >= 3 && m.n() - 2 >= stop {
                if let Some((row, col)) = first_interior_zero(m) {
                    return Err(Error::DivisorZero {
                        level: m.n(),
                        row,
                        col,
                    });
                }
            }
            Ok(())
        };

        let mut levels = Vec::new();
        let (mut mult_count, mut div_count) = (0u64, 0u64);
        check(a)?;
        let mut prev_prev: Option<SymMatrix> = None;
        let mut prev = a.clone();
        while prev.n() > stop {
            let k = prev.n() as u64;
            let raw = condense_with(&prev, self.parallel)?;
            mult_count += 2 * (k - 1) * (k - 1);
            let next = match &prev_prev {
                Some(pp) => {
                    let d = divide_with(&raw, pp, self.parallel)?;
                    div_count += (raw.n() * raw.n()) as u64;
                    d
                }
                None => raw,
            };
            check(&next)?;
            let old = std::mem::replace(&mut prev, next);
            if self.record_levels {
                levels.push(old.clone());
            }
            prev_prev = Some(old);
        }
        levels.push(prev);
        Ok(Descent {
            levels,
            mult_count,
            div_count,
        })
    }

    /// Full condensation to `A^(1)` without evaluating it.
    pub fn condense(&self, a: &SymMatrix) -> Result<CondensationTrace> {
        let d = self.descend(a, 1)?;
        Ok(CondensationTrace {
            levels: d.levels,
            mult_count: d.mult_count,
            div_count: d.div_count,
            repairs: None,
        })
    }

    /// Condenses `a` and evaluates `A^(1)` at `limit_point`.
    pub fn run(
        &self,
        a: &SymMatrix,
        limit_point: &Binding,
    ) -> Result<(Rational, CondensationTrace)> {
        if let Some(v) = a.vars().into_iter().find(|v| !limit_point.contains_key(v)) {
            return Err(Error::UnboundVariable(v));
        }
        let trace = self.condense(a)?;
        let value = trace.final_polynomial().eval(limit_point)?;
        Ok((value, trace))
    }
}

/// Checks that after `k` condensations every entry is the matching
/// contiguous `(k+1)x(k+1)` minor of `a`.
pub fn verify_minor_levels(a: &SymMatrix, k: usize) -> Result<bool> {
    let n = a.n();
    if k == 0 || k >= n {
        return Err(Error::LevelOutOfRange { k, n });
    }
    let engine = Engine {
        record_levels: false,
        parallel: true,
    };
    let level = match engine.descend(a, n - k) {
        Ok(mut d) => d.levels.pop().expect("descent ends with a level"),
        Err(Error::DivisorZero { .. }) => return Err(Error::LevelUnavailable(n - k)),
        Err(e) => return Err(e),
    };
    Ok(level == all_minors_level(a, k)?)
}
