//! Stable CSV and JSON renderings of regions, curves, plans and simulation
//! results. Receivers appear in canonical order (ascending `N`).

use std::fmt::Write as _;

use serde::Serialize;

use crate::config::{rational_to_decimal, AntennaConfig, ConfigSpec, DoFPoint, Rational};
use crate::curve::CurvePoint;
use crate::error::Result;
use crate::plan::{achieved_dof, decoding_rows, DecodingRow, SchemePlan};
use crate::region::DoFRegion;
use crate::sim::{MonteCarloSummary, SimOptions, TrialReport};

/// How rationals are written into CSV cells.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum NumberFormat {
    /// `num/den`, or a bare integer.
    #[default]
    Exact,
    /// Twelve fractional digits.
    Decimal,
}

impl NumberFormat {
    pub fn render(self, r: &Rational) -> String {
        match self {
            NumberFormat::Exact => r.to_string(),
            NumberFormat::Decimal => rational_to_decimal(r),
        }
    }
}

fn numbered(prefix: &str, k: usize) -> impl Iterator<Item = String> + '_ {
    (1..=k).map(move |i| format!("{prefix}{i}"))
}

/// `vertex,d1,...,dK,sum_dof`, one row per vertex.
pub fn vertex_csv(k: usize, vertices: &[DoFPoint], fmt: NumberFormat) -> String {
    let mut header = vec!["vertex".to_string()];
    header.extend(numbered("d", k));
    header.push("sum_dof".into());
    let mut out = header.join(",") + "\n";
    for (idx, v) in vertices.iter().enumerate() {
        let cells: Vec<String> = v.coords().iter().map(|c| fmt.render(c)).collect();
        let _ = writeln!(out, "{},{},{}", idx + 1, cells.join(","), fmt.render(&v.sum()));
    }
    out
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize") + "\n"
}

/// Compact `{"K":..,"halfspaces":[[[num,den],..],..]}` on one line.
pub fn region_json(region: &DoFRegion) -> String {
    serde_json::to_string(&region.to_json()).expect("report types serialize") + "\n"
}

/// `K,M_over_N,mode,sum_dof_over_N`.
pub fn curve_csv(points: &[CurvePoint], fmt: NumberFormat) -> String {
    let mut out = String::from("K,M_over_N,mode,sum_dof_over_N\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            p.k,
            fmt.render(&p.ratio),
            p.mode.tag(),
            fmt.render(&p.normalized)
        );
    }
    out
}

#[derive(Serialize)]
struct PlanReport<'a> {
    config: ConfigSpec,
    plan: &'a SchemePlan,
    achieved: String,
    sum_dof: String,
    decoding: Vec<DecodingRow>,
    order_k_len: u64,
    phase2_capacity: u64,
    feasible: bool,
}

/// Plan, achieved tuple and every decoding-condition slack, receivers numbered from 1.
pub fn plan_json(cfg: &AntennaConfig, plan: &SchemePlan) -> Result<String> {
    let achieved = achieved_dof(plan)?;
    let decoding: Vec<DecodingRow> = decoding_rows(cfg, plan)
        .into_iter()
        .map(|r| DecodingRow {
            receiver: r.receiver + 1,
            ..r
        })
        .collect();
    let report = PlanReport {
        config: cfg.to_spec(),
        plan,
        achieved: achieved.to_string(),
        sum_dof: achieved.sum().to_string(),
        feasible: decoding.iter().all(|r| r.slack >= 0) && plan.order_k_len() <= plan.phase2_capacity(),
        decoding,
        order_k_len: plan.order_k_len(),
        phase2_capacity: plan.phase2_capacity(),
    };
    Ok(pretty(&report))
}

fn sci(x: f64) -> String {
    format!("{x:.6e}")
}

/// `seed,residual_1,...,residual_K,rank_deficient_1,...,rank_deficient_K,success`.
/// Residuals are relative recovery errors; a rank-deficient receiver counts as failed.
pub fn trials_csv(k: usize, reports: &[TrialReport]) -> String {
    let mut header = vec!["seed".to_string()];
    header.extend(numbered("residual_", k));
    header.extend(numbered("rank_deficient_", k));
    header.push("success".into());
    let mut out = header.join(",") + "\n";
    for t in reports {
        let residuals: Vec<String> = t.receivers.iter().map(|r| sci(r.rel_error)).collect();
        let deficient: Vec<String> = t
            .receivers
            .iter()
            .map(|r| u8::from(r.rank < r.unknowns).to_string())
            .collect();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            t.seed,
            residuals.join(","),
            deficient.join(","),
            u8::from(t.success)
        );
    }
    out
}

#[derive(Serialize)]
struct SummaryReport<'a> {
    config: ConfigSpec,
    plan: &'a SchemePlan,
    base_seed: u64,
    options: &'a SimOptions,
    trials: usize,
    successes: usize,
    success: Option<f64>,
    worst_residual: String,
    receiver_successes: &'a [usize],
    receiver_rank_deficient: &'a [usize],
    achieved: String,
}

pub fn summary_json(
    cfg: &AntennaConfig,
    plan: &SchemePlan,
    base_seed: u64,
    opts: &SimOptions,
    summary: &MonteCarloSummary,
) -> String {
    let report = SummaryReport {
        config: cfg.to_spec(),
        plan,
        base_seed,
        options: opts,
        trials: summary.trials,
        successes: summary.successes,
        success: summary.success_fraction,
        worst_residual: sci(summary.worst_rel_error),
        receiver_successes: &summary.receiver_successes,
        receiver_rank_deficient: &summary.receiver_rank_deficient,
        achieved: summary.achieved.to_string(),
    };
    pretty(&report)
}
