//! Plot-ready CSV tables.
//!
//! Every table starts with a fixed header and uses `\n` line endings. Floats
//! are written in Rust's shortest round-trip form, so the tables can be
//! re-aggregated without precision loss. Absent values are empty fields.

use std::fmt::Display;

use crate::experiment::{SweepSummary, TrialResult};
use crate::record::RunRecord;

pub const RUN_HEADER: &str = "generation,best_fitness,avg_fitness";
pub const SUMMARY_HEADER: &str = "engine,n,r,seed,generations,best,oracle,converged_at";
pub const FIG3_HEADER: &str = "n,engine,mean_generations,std_generations,converged_count";
pub const FIG4_HEADER: &str = "n,engine,mean_best,std_best";
pub const FIG5_HEADER: &str = "generation,engine,mean_avg_fitness";
pub const TRIALS_HEADER: &str =
    "n,engine,repeat,source,destination,topology_seed,engine_seed,generations,best,oracle,gap,converged_at,linked";

fn opt<T: Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Per-generation history of one run.
pub fn run_csv(run: &RunRecord) -> String {
    let mut out = format!("{RUN_HEADER}\n");
    for (g, (best, avg)) in run.best_per_gen.iter().zip(&run.avg_per_gen).enumerate() {
        out.push_str(&format!("{g},{best},{avg}\n"));
    }
    out
}

/// The one-line run summary (no header).
pub fn summary_line(result: &TrialResult, seed: u64) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        result.engine,
        result.n,
        result.radius,
        seed,
        result.run.generations_used,
        result.run.best_fitness,
        opt(result.oracle_cost),
        opt(result.run.converged_at),
    )
}

pub fn fig3_csv(summary: &SweepSummary) -> String {
    let mut out = format!("{FIG3_HEADER}\n");
    for r in &summary.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n, r.engine, r.mean_generations, r.std_generations, r.converged_count
        ));
    }
    out
}

pub fn fig4_csv(summary: &SweepSummary) -> String {
    let mut out = format!("{FIG4_HEADER}\n");
    for r in &summary.rows {
        out.push_str(&format!("{},{},{},{}\n", r.n, r.engine, r.mean_best, r.std_best));
    }
    out
}

/// Mean average-fitness curves of every engine at network size `n`.
pub fn fig5_csv(summary: &SweepSummary, n: usize) -> String {
    let mut out = format!("{FIG5_HEADER}\n");
    for r in summary.rows.iter().filter(|r| r.n == n) {
        for (g, v) in r.mean_avg_curve.iter().enumerate() {
            out.push_str(&format!("{g},{},{v}\n", r.engine));
        }
    }
    out
}

pub fn trials_csv(summary: &SweepSummary) -> String {
    let mut out = format!("{TRIALS_HEADER}\n");
    for t in &summary.trials {
        let r = &t.result;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.n,
            r.engine,
            t.repeat,
            r.source,
            r.destination,
            opt(r.topology_seed),
            r.engine_seed,
            r.run.generations_used,
            r.run.best_fitness,
            opt(r.oracle_cost),
            opt(r.oracle_gap),
            opt(r.run.converged_at),
            r.best_linked,
        ));
    }
    out
}
