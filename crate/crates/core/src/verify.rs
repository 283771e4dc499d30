//! Formula-versus-enumeration matrix over `n`, window width, kind and
//! quantity.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::formulas::{CountReport, Measure, Quantity};
use crate::neighborhood::Limits;
use crate::perm::OpKind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyPlan {
    pub n_max: usize,
    pub kinds: Vec<OpKind>,
    pub measures: Vec<Measure>,
}

impl VerifyPlan {
    /// Ball and reversible counts for both kinds; the pair search is opt-in.
    pub fn new(n_max: usize) -> Self {
        VerifyPlan {
            n_max,
            kinds: OpKind::ALL.to_vec(),
            measures: vec![Measure::Sout, Measure::Sin, Measure::Srev],
        }
    }

    /// Every `(quantity, n, k)` the plan covers.
    pub fn cases(&self) -> Vec<(Quantity, usize, Option<usize>)> {
        let mut cases = Vec::new();
        for &measure in &self.measures {
            for &kind in &self.kinds {
                let q = Quantity::new(measure, kind);
                for n in 1..=self.n_max {
                    if measure == Measure::Nmax {
                        if n >= 2 {
                            cases.push((q, n, None));
                        }
                        continue;
                    }
                    cases.push((q, n, None));
                    cases.extend((1..=n).map(|k| (q, n, Some(k))));
                }
            }
        }
        cases
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub n_max: usize,
    pub rows: Vec<CountReport>,
}

pub fn run_verification(plan: &VerifyPlan, limits: &Limits) -> Result<VerifyReport> {
    for &m in &plan.measures {
        match m {
            Measure::Nmax => Limits::check(limits.pairs, plan.n_max, "pairwise intersection search")?,
            _ => Limits::check(limits.ball, plan.n_max, "ball enumeration")?,
        }
    }
    let cases = plan.cases();
    let run = |&(q, n, k): &(Quantity, usize, Option<usize>)| CountReport::enumerated(q, n, k, limits);
    let rows = if limits.parallel {
        cases.par_iter().map(run).collect::<Result<Vec<_>>>()?
    } else {
        cases.iter().map(run).collect::<Result<Vec<_>>>()?
    };
    Ok(VerifyReport {
        n_max: plan.n_max,
        rows,
    })
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(CountReport::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CountReport> {
        self.rows.iter().filter(|r| !r.passed())
    }

    /// One row per (quantity, kind), one column per `n`; a cell passes when
    /// every window width at that `n` passes.
    pub fn matrix(&self) -> String {
        let mut keys: Vec<(Measure, OpKind)> = self.rows.iter().map(|r| (r.quantity, r.kind)).collect();
        keys.dedup();
        let mut out = format!("{:<14}", "quantity");
        for n in 1..=self.n_max {
            write!(out, " {:>5}", format!("n={n}")).unwrap();
        }
        out.push('\n');
        for (m, kind) in keys {
            write!(out, "{:<14}", format!("{m}/{kind}")).unwrap();
            for n in 1..=self.n_max {
                let mut cells = self
                    .rows
                    .iter()
                    .filter(|r| r.quantity == m && r.kind == kind && r.n == n)
                    .peekable();
                let cell = if cells.peek().is_none() {
                    "-"
                } else if cells.all(CountReport::passed) {
                    "PASS"
                } else {
                    "FAIL"
                };
                write!(out, " {cell:>5}").unwrap();
            }
            out.push('\n');
        }
        let failed = self.failures().count();
        writeln!(
            out,
            "{} checks, {} passed, {} failed: {}",
            self.rows.len(),
            self.rows.len() - failed,
            failed,
            if failed == 0 { "ALL PASS" } else { "FAIL" }
        )
        .unwrap();
        out
    }
}
