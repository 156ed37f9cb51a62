use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::channel::{cn01, stream, NOISE_STREAM};
use super::decode::{receiver_decode, ReceiverReport};
use super::transmit::{
    build_order_k, phase2_observations, reconstruct_interference, run_phase1, run_phase2, Phase2Schedule,
};
use super::{CVector, ChannelRealization, SymbolLoad, Transcript};
use crate::config::{AntennaConfig, DoFPoint};
use crate::error::Result;
use crate::plan::{achieved_dof, check_decoding, SchemePlan};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimOptions {
    /// Maximum relative recovery error for a receiver to count as decoded.
    pub tolerance: f64,
    /// Standard deviation of complex AWGN added to every observation; zero
    /// keeps the link noiseless.
    pub noise_std: f64,
    /// Run plans that violate the decoding conditions. Phase II then sends
    /// only the first `B * T2` order-K entries.
    pub allow_infeasible: bool,
    pub schedule: Phase2Schedule,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            noise_std: 0.0,
            allow_infeasible: false,
            schedule: Phase2Schedule::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub seed: u64,
    pub receivers: Vec<ReceiverReport>,
    pub achieved: DoFPoint,
    pub success: bool,
    pub max_rel_error: f64,
}

fn add_noise<R: Rng>(v: &mut CVector, std: f64, rng: &mut R) {
    for c in v.iter_mut() {
        *c += cn01(rng) * std;
    }
}

/// Draw, phase I, reconstruction, order-K encoding, phase II, decoding at
/// every receiver.
pub fn run_trial(cfg: &AntennaConfig, plan: &SchemePlan, seed: u64, opts: &SimOptions) -> Result<TrialReport> {
    if !opts.allow_infeasible {
        check_decoding(cfg, plan)?;
    }
    let achieved = achieved_dof(plan)?;
    let channels = ChannelRealization::draw(cfg, plan, seed);
    let load = SymbolLoad::draw(plan, seed);

    let mut phase1 = run_phase1(cfg, plan, &channels, &load)?;
    let blocks = reconstruct_interference(cfg, plan, &channels, &load)?;
    let slices: Vec<&[Complex64]> = blocks.iter().map(|b| b.as_slice()).collect();
    let order_k = build_order_k(&slices)?;
    let mut phase2 = if opts.allow_infeasible {
        let sent = order_k.len().min(plan.phase2_capacity() as usize);
        phase2_observations(cfg, plan, &channels, &order_k[..sent], opts.schedule)
    } else {
        run_phase2(cfg, plan, &channels, &order_k, opts.schedule)?
    };

    if opts.noise_std > 0.0 {
        let mut rng = stream(seed, NOISE_STREAM);
        for v in phase1.iter_mut().flatten().chain(phase2.iter_mut()) {
            add_noise(v, opts.noise_std, &mut rng);
        }
    }

    let transcript = Transcript {
        phase1,
        blocks,
        order_k: DVector::from_vec(order_k),
        phase2,
    };
    let receivers: Vec<ReceiverReport> = (0..cfg.k())
        .map(|i| receiver_decode(i, cfg, plan, &channels, &transcript, &load, opts))
        .collect();
    let success = receivers.iter().all(|r| r.success);
    let max_rel_error = receivers.iter().map(|r| r.rel_error).fold(0.0, f64::max);
    Ok(TrialReport {
        seed,
        receivers,
        achieved,
        success,
        max_rel_error,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloSummary {
    pub trials: usize,
    pub successes: usize,
    /// `None` when no trial ran.
    pub success_fraction: Option<f64>,
    pub worst_rel_error: f64,
    /// Trials in which each receiver decoded.
    pub receiver_successes: Vec<usize>,
    /// Trials in which each receiver's stacked system lost column rank.
    pub receiver_rank_deficient: Vec<usize>,
    pub achieved: DoFPoint,
    #[serde(skip)]
    pub reports: Vec<TrialReport>,
}

/// Runs `trials` independent trials with seeds `base_seed, base_seed + 1, ...`.
pub fn monte_carlo(
    cfg: &AntennaConfig,
    plan: &SchemePlan,
    trials: usize,
    base_seed: u64,
    opts: &SimOptions,
) -> Result<MonteCarloSummary> {
    if !opts.allow_infeasible {
        check_decoding(cfg, plan)?;
    }
    let achieved = achieved_dof(plan)?;
    let seeds: Vec<u64> = (0..trials as u64).map(|t| base_seed.wrapping_add(t)).collect();
    let run = |&seed: &u64| run_trial(cfg, plan, seed, opts);
    #[cfg(feature = "parallel")]
    let reports: Vec<TrialReport> = {
        use rayon::prelude::*;
        seeds.par_iter().map(run).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let reports: Vec<TrialReport> = seeds.iter().map(run).collect::<Result<_>>()?;

    let k = cfg.k();
    let mut receiver_successes = vec![0; k];
    let mut receiver_rank_deficient = vec![0; k];
    for r in reports.iter().flat_map(|t| &t.receivers) {
        receiver_successes[r.receiver] += usize::from(r.success);
        receiver_rank_deficient[r.receiver] += usize::from(r.rank < r.unknowns);
    }
    let successes = reports.iter().filter(|t| t.success).count();
    Ok(MonteCarloSummary {
        trials,
        successes,
        success_fraction: (trials > 0).then(|| successes as f64 / trials as f64),
        worst_rel_error: reports.iter().map(|t| t.max_rel_error).fold(0.0, f64::max),
        receiver_successes,
        receiver_rank_deficient,
        achieved,
        reports,
    })
}
