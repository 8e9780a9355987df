//! Machine-readable run report and its human summary.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::engine::predicted_mult_count;
use crate::error::Result;
use crate::matrix::SymMatrix;
use crate::oracle::det_bareiss;
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::repair::{auto_repair, intermediate_replace_unsound, RepairPlan, Strategy};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub input_digest: String,
    pub n: usize,
    pub strategy: Strategy,
    pub determinant: Rational,
    pub oracle_determinant: Option<Rational>,
    /// `None` when no oracle ran.
    #[serde(rename = "match")]
    pub matches: Option<bool>,
    pub mult_count: u64,
    pub div_count: u64,
    pub predicted_mult_count: u64,
    pub repair_plan: RepairPlan,
    pub final_polynomial: Polynomial,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<SymMatrix>>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReportOptions {
    /// Always run the Bareiss oracle.
    pub verify: bool,
    /// Include every condensation level.
    pub trace: bool,
}

impl Report {
    /// Runs `strategy` on `a` and collects everything into a report.
    ///
    /// `IntermediateReplace` always consults the oracle, since its whole
    /// point is the comparison.
    pub fn generate(
        a: &SymMatrix,
        strategy: Strategy,
        opts: ReportOptions,
        input_digest: String,
    ) -> Result<Report> {
        let (value, plan, trace, oracle) = if strategy == Strategy::IntermediateReplace {
            let out = intermediate_replace_unsound(a)?;
            (out.value, out.plan, out.trace, Some(out.oracle))
        } else {
            let out = auto_repair(a, strategy, None)?;
            let oracle = if opts.verify {
                Some(det_bareiss(a)?)
            } else {
                None
            };
            (out.value, out.plan, out.trace, oracle)
        };
        Ok(Report {
            input_digest,
            n: a.n(),
            strategy,
            matches: oracle.as_ref().map(|o| *o == value),
            oracle_determinant: oracle,
            determinant: value,
            mult_count: trace.mult_count,
            div_count: trace.div_count,
            predicted_mult_count: predicted_mult_count(a.n()),
            repair_plan: plan,
            final_polynomial: trace.final_polynomial().clone(),
            levels: opts.trace.then(|| trace.levels.clone()),
        })
    }

    /// 0 on success, 2 for the expected mismatch of intermediate
    /// replacement, 1 for a mismatch that indicates a bug.
    pub fn exit_code(&self) -> i32 {
        match self.matches {
            Some(false) if self.strategy == Strategy::IntermediateReplace => 2,
            Some(false) => 1,
            _ => 0,
        }
    }

    pub fn headline(&self) -> String {
        match (&self.oracle_determinant, self.matches) {
            (Some(o), Some(false)) => format!("det = {} (MISMATCH, oracle {o})", self.determinant),
            (Some(_), Some(true)) => format!("det = {} (verified)", self.determinant),
            _ => format!("det = {}", self.determinant),
        }
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let plan = &self.repair_plan;
        writeln!(s, "{}", self.headline()).unwrap();
        writeln!(s, "  n = {}, strategy = {}", self.n, self.strategy).unwrap();
        writeln!(
            s,
            "  multiplications = {} (uninterrupted run: {}), divisions = {}",
            self.mult_count, self.predicted_mult_count, self.div_count
        )
        .unwrap();
        writeln!(
            s,
            "  repair rounds = {}, edits = {}",
            plan.rounds,
            plan.edits.len()
        )
        .unwrap();
        for e in &plan.edits {
            writeln!(
                s,
                "    level {} at {}: {} -> {}",
                e.level, e.position, e.before, e.after
            )
            .unwrap();
        }
        if let Some((r, c)) = plan.shift {
            writeln!(s, "  cyclic shift = ({r}, {c}), sign = {}", plan.sign).unwrap();
        }
        if !plan.limit_point.is_empty() {
            let binds: Vec<String> = plan
                .limit_point
                .iter()
                .map(|(v, x)| format!("{v} -> {x}"))
                .collect();
            writeln!(s, "  limit point: {}", binds.join(", ")).unwrap();
        }
        writeln!(s, "  A^(1) = {}", self.final_polynomial).unwrap();
        if let Some(levels) = &self.levels {
            for l in levels {
                writeln!(s, "  level {}:", l.n()).unwrap();
                for line in l.to_string().lines() {
                    writeln!(s, "    {line}").unwrap();
                }
            }
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }
}
