use std::ops::Add;

use nalgebra::DVector;
use num_complex::Complex64;
use num_traits::Zero;

use super::{CMatrix, CVector, ChannelRealization, SymbolLoad};
use crate::config::AntennaConfig;
use crate::error::{Error, Result};
use crate::plan::{order_k_segments, slot_rows, SchemePlan};
use serde::{Deserialize, Serialize};

/// Everything observed or constructed during one run of the scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    /// `y_i^{Ph-I,j}`, indexed `[receiver][sub-phase]`, length `N_i T_j`.
    pub phase1: Vec<Vec<CVector>>,
    /// Truncated reconstructed blocks, unpadded, length `len_j`.
    pub blocks: Vec<CVector>,
    /// Concatenated pairwise sums of the padded blocks.
    pub order_k: CVector,
    /// Phase-II observations per receiver, length `N_i T2`.
    pub phase2: Vec<CVector>,
}

/// `H[:, :q] s`, the response of one slot to `q` symbols on the first `q` antennas.
pub(crate) fn observe(h: &CMatrix, q: usize, s: &[Complex64]) -> CVector {
    h.columns(0, q) * DVector::from_column_slice(s)
}

fn check_load(plan: &SchemePlan, load: &SymbolLoad) -> Result<()> {
    if load.blocks.len() != plan.k() {
        return Err(Error::DimensionMismatch {
            expected: plan.k(),
            got: load.blocks.len(),
        });
    }
    for (j, b) in load.blocks.iter().enumerate() {
        if b.len() != plan.symbols(j) {
            return Err(Error::DimensionMismatch {
                expected: plan.symbols(j),
                got: b.len(),
            });
        }
    }
    Ok(())
}

/// Phase I: sub-phase `j` sends `s_{-j}` for `T_j` slots, `Q_j` symbols per slot
/// on the first `Q_j` antennas. Returns `y_i^{Ph-I,j}` for every receiver.
pub fn run_phase1(
    cfg: &AntennaConfig,
    plan: &SchemePlan,
    channels: &ChannelRealization,
    load: &SymbolLoad,
) -> Result<Vec<Vec<CVector>>> {
    check_load(plan, load)?;
    Ok((0..cfg.k())
        .map(|i| {
            (0..plan.k())
                .map(|j| subphase_observation(plan, channels, load, i, j))
                .collect()
        })
        .collect())
}

fn subphase_observation(
    plan: &SchemePlan,
    channels: &ChannelRealization,
    load: &SymbolLoad,
    receiver: usize,
    j: usize,
) -> CVector {
    let q = plan.q[j] as usize;
    let start = plan.subphase_start(j);
    let parts: Vec<Complex64> = (0..plan.t[j] as usize)
        .flat_map(|tau| {
            let s = &load.blocks[j].as_slice()[tau * q..(tau + 1) * q];
            observe(channels.h(start + tau, receiver), q, s).data.as_vec().clone()
        })
        .collect();
    DVector::from_vec(parts)
}

/// Positions of block `j` inside receiver `j`'s own phase-I record: the first
/// `max(Q_j - N_ref, 0)` rows of every slot.
pub(crate) fn block_positions(cfg: &AntennaConfig, plan: &SchemePlan, j: usize) -> Vec<usize> {
    let rows = slot_rows(cfg, &plan.q)[j] as usize;
    let nj = cfg.n()[j] as usize;
    (0..plan.t[j] as usize)
        .flat_map(|tau| (0..rows.min(nj)).map(move |r| tau * nj + r))
        .collect()
}

/// Transmitter-side reconstruction of each receiver's view of its unwanted
/// message from delayed CSI, truncated to `len_j` entries.
pub fn reconstruct_interference(
    cfg: &AntennaConfig,
    plan: &SchemePlan,
    channels: &ChannelRealization,
    load: &SymbolLoad,
) -> Result<Vec<CVector>> {
    check_load(plan, load)?;
    Ok((0..plan.k())
        .map(|j| {
            let full = subphase_observation(plan, channels, load, j, j);
            let picked: Vec<Complex64> = block_positions(cfg, plan, j).iter().map(|&p| full[p]).collect();
            DVector::from_vec(picked)
        })
        .collect())
}

/// Pairwise sums of consecutive nonempty blocks, each pair zero-padded to
/// the longer block, concatenated in block order. With a single nonempty
/// block the vector is that block.
pub fn build_order_k<T: Copy + Zero + Add<Output = T>>(blocks: &[&[T]]) -> Result<Vec<T>> {
    if blocks.len() < 2 {
        return Err(Error::InvalidPlan(format!(
            "order-K vector needs at least 2 blocks, got {}",
            blocks.len()
        )));
    }
    let lens: Vec<u64> = blocks.iter().map(|b| b.len() as u64).collect();
    let at = |b: &[T], idx: usize| b.get(idx).copied().unwrap_or_else(T::zero);
    let mut out = Vec::new();
    for seg in order_k_segments(&lens) {
        for idx in 0..seg.len as usize {
            let second = seg.second.map_or_else(T::zero, |j| at(blocks[j], idx));
            out.push(at(blocks[seg.first], idx) + second);
        }
    }
    Ok(out)
}

/// How order-K entries are mapped onto the `B` phase-II antennas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase2Schedule {
    /// Entry `e` goes out in slot `e / B` on antenna `e % B`.
    RoundRobin,
    /// Entry `e` goes out in slot `e % T2` on antenna `e / T2`.
    #[default]
    Interleaved,
}

/// `(slot, antenna)` of every transmitted order-K entry; entries past the
/// `B * T2` capacity are dropped.
pub fn phase2_schedule(plan: &SchemePlan, schedule: Phase2Schedule, entries: usize) -> Vec<(usize, usize)> {
    let (b, t2) = (plan.b as usize, plan.t2 as usize);
    let sent = entries.min(b * t2);
    (0..sent)
        .map(|e| match schedule {
            Phase2Schedule::RoundRobin => (e / b, e % b),
            Phase2Schedule::Interleaved => (e % t2, e / t2),
        })
        .collect()
}

/// Phase II: order-K entries go out on the first `B` antennas over `T2`
/// slots, unused antenna positions carrying zero.
pub fn run_phase2(
    cfg: &AntennaConfig,
    plan: &SchemePlan,
    channels: &ChannelRealization,
    order_k: &[Complex64],
    schedule: Phase2Schedule,
) -> Result<Vec<CVector>> {
    let capacity = plan.phase2_capacity();
    if order_k.len() as u64 > capacity {
        return Err(Error::PhaseTwoBudget {
            needed: order_k.len() as u64,
            capacity,
        });
    }
    Ok(phase2_observations(cfg, plan, channels, order_k, schedule))
}

/// Transmit vectors of every phase-II slot.
pub(crate) fn phase2_slots(plan: &SchemePlan, order_k: &[Complex64], schedule: Phase2Schedule) -> Vec<Vec<Complex64>> {
    let mut slots = vec![vec![Complex64::zero(); plan.b as usize]; plan.t2 as usize];
    for (e, (tau, a)) in phase2_schedule(plan, schedule, order_k.len()).into_iter().enumerate() {
        slots[tau][a] = order_k[e];
    }
    slots
}

pub(crate) fn phase2_observations(
    cfg: &AntennaConfig,
    plan: &SchemePlan,
    channels: &ChannelRealization,
    order_k: &[Complex64],
    schedule: Phase2Schedule,
) -> Vec<CVector> {
    let base = plan.phase1_slots();
    let b = plan.b as usize;
    let slots = phase2_slots(plan, order_k, schedule);
    (0..cfg.k())
        .map(|i| {
            let parts: Vec<Complex64> = slots
                .iter()
                .enumerate()
                .flat_map(|(tau, x)| observe(channels.h(base + tau, i), b, x).data.as_vec().clone())
                .collect();
            DVector::from_vec(parts)
        })
        .collect()
}
