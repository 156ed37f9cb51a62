use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use super::transmit::{block_positions, phase2_schedule};
use super::SimOptions;
use super::{CMatrix, CVector, ChannelRealization, SymbolLoad, Transcript};
use crate::config::AntennaConfig;
use crate::plan::{order_k_segments, SchemePlan};

/// Singular values below this fraction of the largest count as zero.
pub const RANK_THRESHOLD: f64 = 1e-9;

/// Outcome of decoding at one receiver.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReceiverReport {
    /// Canonical receiver index (0-based).
    pub receiver: usize,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    /// `max |s_hat - s| / max |s|` over all wanted symbols.
    pub rel_error: f64,
    /// `|A s_hat - y| / |y|` of the stacked system.
    pub fit_residual: f64,
    pub success: bool,
    /// Recovered `s_{-j}` for every wanted message, `None` at the receiver's own index.
    #[serde(skip)]
    pub recovered: Vec<Option<CVector>>,
}

/// Linear map from all phase-I symbols to the order-K vector, split into the
/// part receiver `i` must solve for and the part it already knows.
struct OrderKMap {
    /// `x = coef * u + known`, one row per transmitted order-K entry.
    coef: CMatrix,
    known: CVector,
}

fn order_k_map(
    i: usize,
    cfg: &AntennaConfig,
    plan: &SchemePlan,
    channels: &ChannelRealization,
    transcript: &Transcript,
    offsets: &[Option<usize>],
    unknowns: usize,
) -> OrderKMap {
    let segments = order_k_segments(&plan.len);
    let total = segments.iter().map(|s| s.len as usize).sum::<usize>();
    let mut coef = DMatrix::zeros(total, unknowns);
    let mut known = CVector::zeros(total);

    let mut seg_start = 0;
    for seg in &segments {
        for j in std::iter::once(seg.first).chain(seg.second) {
            let nj = cfg.n()[j] as usize;
            let qj = plan.q[j] as usize;
            let start = plan.subphase_start(j);
            for (e, &p) in block_positions(cfg, plan, j).iter().enumerate() {
                let pos = seg_start + e;
                let (tau, row) = (p / nj, p % nj);
                match offsets[j] {
                    Some(off) => {
                        let h = channels.h(start + tau, j);
                        for c in 0..qj {
                            coef[(pos, off + tau * qj + c)] += h[(row, c)];
                        }
                    }
                    None => known[pos] += transcript.phase1[i][i][p],
                }
            }
        }
        seg_start += seg.len as usize;
    }
    OrderKMap { coef, known }
}

/// Joint linear decoding at receiver `i`: the unknowns are all `s_{-j}`,
/// `j != i`; the equations are the receiver's phase-I observations of those
/// sub-phases and its phase-II observations after removing the contribution
/// of its own (known) interference block.
pub fn receiver_decode(
    i: usize,
    cfg: &AntennaConfig,
    plan: &SchemePlan,
    channels: &ChannelRealization,
    transcript: &Transcript,
    truth: &SymbolLoad,
    opts: &SimOptions,
) -> ReceiverReport {
    let k = plan.k();
    let mut offsets = vec![None; k];
    let mut unknowns = 0;
    for (j, off) in offsets.iter_mut().enumerate() {
        if j != i {
            *off = Some(unknowns);
            unknowns += plan.symbols(j);
        }
    }

    let ni = cfg.n()[i] as usize;
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    let mut rhs: Vec<Complex64> = Vec::new();

    for j in (0..k).filter(|&j| j != i) {
        let (qj, off, start) = (plan.q[j] as usize, offsets[j].unwrap(), plan.subphase_start(j));
        for tau in 0..plan.t[j] as usize {
            let h = channels.h(start + tau, i);
            for r in 0..ni {
                let mut row = vec![Complex64::zero(); unknowns];
                for c in 0..qj {
                    row[off + tau * qj + c] = h[(r, c)];
                }
                rows.push(row);
                rhs.push(transcript.phase1[i][j][tau * ni + r]);
            }
        }
    }

    let map = order_k_map(i, cfg, plan, channels, transcript, &offsets, unknowns);
    let base = plan.phase1_slots();
    // phase-II slot -> (antenna, order-K entry)
    let mut per_slot: Vec<Vec<(usize, usize)>> = vec![Vec::new(); plan.t2 as usize];
    for (e, (tau, a)) in phase2_schedule(plan, opts.schedule, map.known.len())
        .into_iter()
        .enumerate()
    {
        per_slot[tau].push((a, e));
    }
    for (tau, entries) in per_slot.iter().enumerate() {
        let h = channels.h(base + tau, i);
        for r in 0..ni {
            let mut row = vec![Complex64::zero(); unknowns];
            let mut y = transcript.phase2[i][tau * ni + r];
            for &(a, e) in entries {
                y -= h[(r, a)] * map.known[e];
                for (u, slot) in row.iter_mut().enumerate() {
                    *slot += h[(r, a)] * map.coef[(e, u)];
                }
            }
            rows.push(row);
            rhs.push(y);
        }
    }

    let truth_vec: Vec<Complex64> = (0..k)
        .filter(|&j| j != i)
        .flat_map(|j| truth.blocks[j].iter().copied())
        .collect();
    let equations = rows.len();
    let mut report = ReceiverReport {
        receiver: i,
        unknowns,
        equations,
        rank: 0,
        rel_error: 0.0,
        fit_residual: 0.0,
        success: true,
        recovered: (0..k)
            .map(|j| (j != i).then(|| CVector::zeros(plan.symbols(j))))
            .collect(),
    };
    if unknowns == 0 {
        return report;
    }
    if equations == 0 {
        report.success = false;
        report.rel_error = f64::INFINITY;
        return report;
    }

    let a = DMatrix::from_fn(equations, unknowns, |r, c| rows[r][c]);
    let y = CVector::from_vec(rhs);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let eps = (smax * RANK_THRESHOLD).max(f64::MIN_POSITIVE);
    report.rank = svd.rank(eps);
    let solution = svd.solve(&y, eps).expect("U and V were computed");

    let scale = truth_vec.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let err = solution
        .iter()
        .zip(&truth_vec)
        .map(|(s, t)| (s - t).norm())
        .fold(0.0, f64::max);
    report.rel_error = if scale > 0.0 { err / scale } else { err };
    let ynorm = y.norm();
    let fit = (&a * &solution - &y).norm();
    report.fit_residual = if ynorm > 0.0 { fit / ynorm } else { fit };
    report.success = report.rank == unknowns && report.rel_error <= opts.tolerance;

    for (j, slot) in report.recovered.iter_mut().enumerate() {
        if let (Some(v), Some(off)) = (slot.as_mut(), offsets[j]) {
            v.copy_from(&solution.rows(off, plan.symbols(j)));
        }
    }
    report
}
