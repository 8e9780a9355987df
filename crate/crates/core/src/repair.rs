//! Repairing interior zeros.
//!
//! A zero divisor at level `A^(n-k)` is, by the minor characterisation of
//! condensation levels, a vanishing contiguous `(k+1)x(k+1)` minor of the
//! original matrix. The symbolic strategies edit the ORIGINAL matrix so that
//! this minor becomes a nonzero polynomial, re-run the whole condensation,
//! and evaluate `A^(1)` at the limit point. Substituting a fresh variable
//! into an intermediate level instead is unsound in general and is only
//! offered as an experiment ([`intermediate_replace_unsound`]).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::{condense_once, divide_by_interior, partial_counts, CondensationTrace, Engine};
use crate::error::{Error, Result};
use crate::matrix::{Position, SymMatrix, Window};
use crate::oracle::{det_bareiss, det_cofactor};
use crate::poly::{Binding, Polynomial, VarAllocator, VarId};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "shift")]
    CyclicShift,
    #[serde(rename = "rowops")]
    RowOpClear,
    #[serde(rename = "perturb")]
    PerturbOriginal,
    #[serde(rename = "replace")]
    ReplaceEntry,
    #[serde(rename = "zeros")]
    ReplaceZeros,
    #[serde(rename = "intermediate-unsound")]
    IntermediateReplace,
}

impl Strategy {
    pub const ALL: [Strategy; 7] = [
        Strategy::Fail,
        Strategy::CyclicShift,
        Strategy::RowOpClear,
        Strategy::PerturbOriginal,
        Strategy::ReplaceEntry,
        Strategy::ReplaceZeros,
        Strategy::IntermediateReplace,
    ];

    /// Strategies that always return the true determinant when they succeed.
    pub const SOUND: [Strategy; 5] = [
        Strategy::CyclicShift,
        Strategy::RowOpClear,
        Strategy::PerturbOriginal,
        Strategy::ReplaceEntry,
        Strategy::ReplaceZeros,
    ];

    pub fn cli_name(self) -> &'static str {
        match self {
            Strategy::Fail => "fail",
            Strategy::CyclicShift => "shift",
            Strategy::RowOpClear => "rowops",
            Strategy::PerturbOriginal => "perturb",
            Strategy::ReplaceEntry => "replace",
            Strategy::ReplaceZeros => "zeros",
            Strategy::IntermediateReplace => "intermediate-unsound",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.cli_name() == s)
            .ok_or_else(|| format!("unknown strategy {s:?}"))
    }
}

/// One entry change. `level` is the size of the matrix that was edited:
/// `n` for the original, smaller for an intermediate level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edit {
    pub level: usize,
    pub position: Position,
    pub before: Polynomial,
    pub after: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairPlan {
    pub strategy: Strategy,
    pub edits: Vec<Edit>,
    /// Permutation parity correction; only `CyclicShift` can make it -1.
    pub sign: i8,
    pub limit_point: Binding,
    pub rounds: usize,
    /// `(row_shift, col_shift)` chosen by `CyclicShift`.
    pub shift: Option<(usize, usize)>,
}

impl RepairPlan {
    fn new(strategy: Strategy) -> Self {
        RepairPlan {
            strategy,
            edits: Vec::new(),
            sign: 1,
            limit_point: Binding::new(),
            rounds: 0,
            shift: None,
        }
    }

    fn record(
        &mut self,
        level: usize,
        position: Position,
        before: &Polynomial,
        after: &Polynomial,
    ) {
        self.edits.push(Edit {
            level,
            position,
            before: before.clone(),
            after: after.clone(),
        });
    }
}

/// Where a zero divisor showed up: the level's size and the 1-based
/// position inside that level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroReport {
    pub level: usize,
    pub position: Position,
}

impl ZeroReport {
    pub fn from_error(e: &Error) -> Option<ZeroReport> {
        match *e {
            Error::DivisorZero { level, row, col } => Some(ZeroReport {
                level,
                position: Position::new(row, col),
            }),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RepairOutcome {
    pub value: Rational,
    pub plan: RepairPlan,
    /// Trace of the final, successful run; counts include failed attempts.
    pub trace: CondensationTrace,
}

#[derive(Clone, Debug)]
pub struct UnsoundOutcome {
    pub value: Rational,
    /// `value` equals the Bareiss determinant.
    pub sound: bool,
    pub oracle: Rational,
    pub plan: RepairPlan,
    pub trace: CondensationTrace,
}

/// Identically-zero interior entries, 1-based, row-major.
pub fn find_interior_zeros(m: &SymMatrix) -> Vec<Position> {
    let n = m.n();
    if n < 3 {
        return Vec::new();
    }
    (2..n)
        .flat_map(|i| (2..n).map(move |j| Position::new(i, j)))
        .filter(|&p| m.at(p).is_zero())
        .collect()
}

/// The window of the original matrix whose minor is the zero entry.
///
/// A zero in the original matrix itself (`level == n`) maps to a 1x1 window.
pub fn trace_window(zero: ZeroReport, n: usize) -> Result<Window> {
    let inconsistent = Error::InconsistentLevel {
        level: zero.level,
        n,
    };
    if zero.level < 1 || zero.level > n {
        return Err(inconsistent);
    }
    let (i, j) = (zero.position.row, zero.position.col);
    if i < 1 || j < 1 || i > zero.level || j > zero.level {
        return Err(inconsistent);
    }
    let w = Window::new(i, j, n - zero.level + 1);
    if !w.fits(n) {
        return Err(inconsistent);
    }
    Ok(w)
}

/// Adds `fresh` to the entry at `pos`; the binding sends `fresh` to 0.
pub fn perturb_at(a: &SymMatrix, pos: Position, fresh: VarId) -> Result<(SymMatrix, Binding)> {
    if !Window::new(pos.row, pos.col, 1).fits(a.n()) {
        return Err(Error::WindowOutOfBounds {
            window: Window::new(pos.row, pos.col, 1),
            n: a.n(),
        });
    }
    let mut out = a.clone();
    out.set_at(pos, a.at(pos) + &Polynomial::var(fresh));
    Ok((out, [(fresh, Rational::zero())].into()))
}

/// Adds `fresh` to the top-left entry of the window.
pub fn perturb_original(a: &SymMatrix, w: Window, fresh: VarId) -> Result<(SymMatrix, Binding)> {
    if !w.fits(a.n()) {
        return Err(Error::WindowOutOfBounds {
            window: w,
            n: a.n(),
        });
    }
    perturb_at(a, w.top_left(), fresh)
}

/// Replaces every zero interior entry by a fresh variable (reading order),
/// each bound to 0.
pub fn replace_zeros_with_variables(
    a: &SymMatrix,
    vars: &mut VarAllocator,
) -> (SymMatrix, Binding) {
    let mut out = a.clone();
    let mut binding = Binding::new();
    for pos in find_interior_zeros(a) {
        let v = vars.fresh();
        out.set_at(pos, Polynomial::var(v));
        binding.insert(v, Rational::zero());
    }
    (out, binding)
}

/// Replaces a nonzero constant entry by `fresh`, bound to the old value.
pub fn replace_entry_symbolic(
    a: &SymMatrix,
    pos: Position,
    fresh: VarId,
) -> Result<(SymMatrix, Binding)> {
    if !Window::new(pos.row, pos.col, 1).fits(a.n()) {
        return Err(Error::WindowOutOfBounds {
            window: Window::new(pos.row, pos.col, 1),
            n: a.n(),
        });
    }
    let not_replaceable = |reason: &str| Error::EntryNotReplaceable {
        row: pos.row,
        col: pos.col,
        reason: reason.to_string(),
    };
    let value = a
        .at(pos)
        .constant_value()
        .ok_or_else(|| not_replaceable("entry is already symbolic"))?;
    if value.is_zero() {
        return Err(not_replaceable("entry is zero"));
    }
    let mut out = a.clone();
    out.set_at(pos, Polynomial::var(fresh));
    Ok((out, [(fresh, value)].into()))
}

/// Rotates rows by `row_shift` and columns by `col_shift`:
/// `out[i][j] = a[(i + r) mod n][(j + c) mod n]`.
///
/// The returned sign satisfies `det(out) = sign * det(a)`.
pub fn cyclic_shift(a: &SymMatrix, row_shift: usize, col_shift: usize) -> (SymMatrix, i8) {
    let n = a.n();
    let (r, c) = (row_shift % n, col_shift % n);
    let out = SymMatrix::from_fn(n, |i, j| a.get((i + r) % n, (j + c) % n).clone());
    // an n-cycle has parity (-1)^(n-1)
    let odd = (n - 1) % 2 == 1 && (r + c) % 2 == 1;
    (out, if odd { -1 } else { 1 })
}

/// Default round cap: `2 n^2`.
pub fn default_round_cap(n: usize) -> usize {
    2 * n * n
}

/// Cofactor of entry `(p, q)` (0-based) within `sub`.
fn window_cofactor(sub: &SymMatrix, p: usize, q: usize) -> Result<Polynomial> {
    det_cofactor(&sub.minor_matrix(p, q))
}

/// Entries to receive one fresh additive variable so that the window's
/// minor stops vanishing identically.
///
/// The top-left entry is used when its cofactor is nonzero; otherwise the
/// first entry (row-major) with a nonzero cofactor. If every cofactor
/// vanishes, the variable goes on the whole window diagonal, which makes
/// the minor a monic polynomial in it.
fn perturbation_targets(a: &SymMatrix, w: Window) -> Result<Vec<Position>> {
    if w.size == 1 {
        return Ok(vec![w.top_left()]);
    }
    let sub = a.submatrix(w)?;
    for pos in w.positions() {
        let (p, q) = (pos.row - w.row_start, pos.col - w.col_start);
        if !window_cofactor(&sub, p, q)?.is_zero() {
            return Ok(vec![pos]);
        }
    }
    Ok((0..w.size)
        .map(|d| Position::new(w.row_start + d, w.col_start + d))
        .collect())
}

/// Repair state shared by the symbolic strategies.
struct Repairer {
    current: SymMatrix,
    plan: RepairPlan,
    vars: VarAllocator,
    row_ops_left: usize,
}

impl Repairer {
    fn perturb(&mut self, w: Window) -> Result<()> {
        let v = self.vars.fresh();
        let x = Polynomial::var(v);
        let n = self.current.n();
        for pos in perturbation_targets(&self.current, w)? {
            let before = self.current.at(pos).clone();
            let after = &before + &x;
            self.plan.record(n, pos, &before, &after);
            self.current.set_at(pos, after);
        }
        self.plan.limit_point.insert(v, Rational::zero());
        Ok(())
    }

    fn replace_entry(&mut self, w: Window) -> Result<()> {
        let n = self.current.n();
        if w.size == 1 {
            // a zero original entry: the variable stands in for 0
            let pos = w.top_left();
            let v = self.vars.fresh();
            let after = Polynomial::var(v);
            self.plan
                .record(n, pos, &self.current.at(pos).clone(), &after);
            self.current.set_at(pos, after);
            self.plan.limit_point.insert(v, Rational::zero());
            return Ok(());
        }
        let sub = self.current.submatrix(w)?;
        for pos in w.positions() {
            let entry = self.current.at(pos);
            if !entry.is_constant() || entry.is_zero() {
                continue;
            }
            let (p, q) = (pos.row - w.row_start, pos.col - w.col_start);
            if window_cofactor(&sub, p, q)?.is_zero() {
                continue;
            }
            let v = self.vars.fresh();
            let (next, binding) = replace_entry_symbolic(&self.current, pos, v)?;
            self.plan.record(n, pos, self.current.at(pos), next.at(pos));
            self.current = next;
            self.plan.limit_point.extend(binding);
            return Ok(());
        }
        self.perturb(w)
    }

    fn replace_zeros(&mut self) -> bool {
        let zeros = find_interior_zeros(&self.current);
        if zeros.is_empty() {
            return false;
        }
        let n = self.current.n();
        let (next, binding) = replace_zeros_with_variables(&self.current, &mut self.vars);
        for pos in zeros {
            self.plan.record(n, pos, self.current.at(pos), next.at(pos));
        }
        self.current = next;
        self.plan.limit_point.extend(binding);
        true
    }

    /// Adds the row (or column) just outside the window into its nearest
    /// window row (column). Determinant-preserving.
    fn row_op(&mut self, w: Window) -> Result<bool> {
        if self.row_ops_left == 0 {
            return Ok(false);
        }
        let n = self.current.n();
        let last = w.row_start + w.size - 1;
        let last_col = w.col_start + w.size - 1;
        // (is_row, src, dst), 1-based
        let mut candidates = Vec::new();
        if w.row_start > 1 {
            candidates.push((true, w.row_start - 1, w.row_start));
        }
        if last < n {
            candidates.push((true, last + 1, last));
        }
        if w.col_start > 1 {
            candidates.push((false, w.col_start - 1, w.col_start));
        }
        if last_col < n {
            candidates.push((false, last_col + 1, last_col));
        }
        for (is_row, src, dst) in candidates {
            let mut next = self.current.clone();
            for k in 1..=n {
                let (d, s) = if is_row {
                    (Position::new(dst, k), Position::new(src, k))
                } else {
                    (Position::new(k, dst), Position::new(k, src))
                };
                next.set_at(d, self.current.at(d) + self.current.at(s));
            }
            if det_cofactor(&next.submatrix(w)?)?.is_zero() {
                continue;
            }
            for k in 1..=n {
                let d = if is_row {
                    Position::new(dst, k)
                } else {
                    Position::new(k, dst)
                };
                if self.current.at(d) != next.at(d) {
                    self.plan.record(n, d, self.current.at(d), next.at(d));
                }
            }
            self.current = next;
            self.row_ops_left -= 1;
            return Ok(true);
        }
        Ok(false)
    }
}

/// Runs condensation and repairs zero divisors with `strategy` until it
/// succeeds, restarting from the edited original matrix each round.
pub fn auto_repair(
    a: &SymMatrix,
    strategy: Strategy,
    max_rounds: Option<usize>,
) -> Result<RepairOutcome> {
    auto_repair_with(&Engine::default(), a, strategy, max_rounds)
}

pub fn auto_repair_with(
    engine: &Engine,
    a: &SymMatrix,
    strategy: Strategy,
    max_rounds: Option<usize>,
) -> Result<RepairOutcome> {
    if !a.is_constant() {
        return Err(Error::SymbolicEntry);
    }
    let n = a.n();
    let cap = max_rounds.unwrap_or_else(|| default_round_cap(n));
    match strategy {
        Strategy::CyclicShift => return shift_repair(engine, a, cap),
        Strategy::IntermediateReplace => {
            let out = intermediate_replace_unsound(a)?;
            return Ok(RepairOutcome {
                value: out.value,
                plan: out.plan,
                trace: out.trace,
            });
        }
        _ => {}
    }

    let mut rep = Repairer {
        current: a.clone(),
        plan: RepairPlan::new(strategy),
        vars: VarAllocator::new(),
        row_ops_left: if strategy == Strategy::RowOpClear {
            n
        } else {
            0
        },
    };
    let (mut extra_mults, mut extra_divs) = (0u64, 0u64);
    loop {
        let err = match engine.run(&rep.current, &rep.plan.limit_point) {
            Ok((value, mut trace)) => {
                trace.mult_count += extra_mults;
                trace.div_count += extra_divs;
                trace.repairs = Some(rep.plan.clone());
                return Ok(RepairOutcome {
                    value,
                    plan: rep.plan,
                    trace,
                });
            }
            Err(e) => e,
        };
        let Some(zero) = ZeroReport::from_error(&err) else {
            return Err(err);
        };
        if strategy == Strategy::Fail {
            return Err(err);
        }
        if rep.plan.rounds >= cap {
            return Err(Error::RoundsExhausted(rep.plan.rounds));
        }
        let (m, d) = partial_counts(n, zero.level);
        extra_mults += m;
        extra_divs += d;
        rep.plan.rounds += 1;

        let w = trace_window(zero, n)?;
        match strategy {
            Strategy::PerturbOriginal => rep.perturb(w)?,
            Strategy::ReplaceEntry => rep.replace_entry(w)?,
            Strategy::ReplaceZeros => {
                if !rep.replace_zeros() {
                    rep.perturb(w)?;
                }
            }
            Strategy::RowOpClear => {
                if !rep.row_op(w)? {
                    rep.perturb(w)?;
                }
            }
            Strategy::Fail | Strategy::CyclicShift | Strategy::IntermediateReplace => {
                unreachable!()
            }
        }
    }
}

/// Tries cyclic shifts in lexicographic order, skipping those whose first
/// interior still has a zero.
fn shift_repair(engine: &Engine, a: &SymMatrix, cap: usize) -> Result<RepairOutcome> {
    let n = a.n();
    let mut plan = RepairPlan::new(Strategy::CyclicShift);
    let (mut extra_mults, mut extra_divs) = (0u64, 0u64);
    let mut last_failure = String::from("every shift leaves an interior zero");
    for r in 0..n {
        for c in 0..n {
            let (shifted, sign) = cyclic_shift(a, r, c);
            if !find_interior_zeros(&shifted).is_empty() {
                continue;
            }
            match engine.run(&shifted, &Binding::new()) {
                Ok((value, mut trace)) => {
                    plan.sign = sign;
                    plan.shift = Some((r, c));
                    trace.mult_count += extra_mults;
                    trace.div_count += extra_divs;
                    trace.repairs = Some(plan.clone());
                    let value = if sign < 0 { -value } else { value };
                    return Ok(RepairOutcome { value, plan, trace });
                }
                Err(e) => {
                    let Some(zero) = ZeroReport::from_error(&e) else {
                        return Err(e);
                    };
                    let (m, d) = partial_counts(n, zero.level);
                    extra_mults += m;
                    extra_divs += d;
                    plan.rounds += 1;
                    if plan.rounds > cap {
                        return Err(Error::RoundsExhausted(cap));
                    }
                    last_failure = format!(
                        "shifts with a zero-free interior still hit a zero divisor (last at level {})",
                        zero.level
                    );
                }
            }
        }
    }
    Err(Error::StrategyInapplicable {
        strategy: Strategy::CyclicShift.to_string(),
        reason: last_failure,
    })
}

/// Replaces interior zeros of each condensation LEVEL (not of the original
/// matrix) by fresh variables, continues, and evaluates at 0.
///
/// Many matrices share one intermediate level, so the result generally
/// differs from the determinant; `sound` records whether it happened to
/// agree with the Bareiss oracle.
pub fn intermediate_replace_unsound(a: &SymMatrix) -> Result<UnsoundOutcome> {
    let oracle = det_bareiss(a)?;
    let mut plan = RepairPlan::new(Strategy::IntermediateReplace);
    let mut vars = VarAllocator::new();

    let mut patch = |m: &mut SymMatrix, plan: &mut RepairPlan| {
        for pos in find_interior_zeros(m) {
            let v = vars.fresh();
            let after = Polynomial::var(v);
            plan.record(m.n(), pos, m.at(pos), &after);
            m.set_at(pos, after);
            plan.limit_point.insert(v, Rational::zero());
            plan.rounds += 1;
        }
    };

    let mut first = a.clone();
    patch(&mut first, &mut plan);
    let mut levels = vec![first];
    let (mut mult_count, mut div_count) = (0u64, 0u64);
    while levels.last().is_some_and(|l| l.n() > 1) {
        let prev = levels.last().expect("nonempty");
        let k = prev.n() as u64;
        let raw = condense_once(prev)?;
        mult_count += 2 * (k - 1) * (k - 1);
        let mut next = if levels.len() >= 2 {
            div_count += (raw.n() * raw.n()) as u64;
            divide_by_interior(&raw, &levels[levels.len() - 2])?
        } else {
            raw
        };
        patch(&mut next, &mut plan);
        levels.push(next);
    }
    let trace = CondensationTrace {
        levels,
        mult_count,
        div_count,
        repairs: Some(plan.clone()),
    };
    let value = trace.final_polynomial().eval(&plan.limit_point)?;
    Ok(UnsoundOutcome {
        sound: value == oracle,
        value,
        oracle,
        plan,
        trace,
    })
}
