//! Scheme parameters for the two-phase delayed-CSIT transmission.
//!
//! Phase I sends message `W_{-j}` for `T_j` slots on `Q_j` antennas. Phase II
//! spends `T2` slots on `B` antennas delivering pairwise sums of the
//! reconstructed interference blocks. A plan is decodable when every
//! receiver's phase-I deficit is covered by its phase-II observations.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::config::{AntennaConfig, DoFPoint, Rational};
use crate::error::{Error, Result};
use crate::region::DoFRegion;

/// Integer parameters that fully determine one scheme run.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchemePlan {
    /// Phase-I transmit antennas per sub-phase.
    #[serde(rename = "Q")]
    pub q: Vec<u32>,
    /// Phase-I sub-phase durations.
    #[serde(rename = "T")]
    pub t: Vec<u32>,
    /// Phase-II duration.
    #[serde(rename = "T2")]
    pub t2: u32,
    /// Phase-II active antennas.
    #[serde(rename = "B")]
    pub b: u32,
    /// Retained entries of each reconstructed interference block.
    pub len: Vec<u64>,
    /// Total slots, `sum(T) + T2`.
    pub beta: u64,
}

/// User-supplied plan; `B` defaults to the phase-II antenna rule and `len`,
/// `beta` are always derived.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanSpec {
    #[serde(rename = "Q")]
    pub q: Vec<u32>,
    #[serde(rename = "T")]
    pub t: Vec<u32>,
    #[serde(rename = "T2")]
    pub t2: u32,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<u32>,
}

/// One row of the decoding conditions: receiver `receiver` lacks `deficit`
/// phase-I equations and phase II supplies `supply`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodingRow {
    pub receiver: usize,
    pub deficit: u64,
    pub supply: u64,
    pub slack: i64,
}

/// Phase-I antenna counts: `Q_1 = min{M, N_1+N_2}`, `Q_j = min{M, N_1+N_j}`.
pub fn antenna_counts(cfg: &AntennaConfig) -> Result<Vec<u32>> {
    let (m, n) = (cfg.m(), cfg.n());
    if !cfg.delayed_csit_useful() {
        return Err(Error::RegimeViolation { m, n2: n[1] });
    }
    Ok((0..cfg.k())
        .map(|j| {
            let partner = if j == 0 { n[1] } else { n[j] };
            m.min(n[0] + partner)
        })
        .collect())
}

/// Phase-II antennas: `B = N_p` for the largest `p` with `N_p <= M`.
pub fn phase2_antennas(cfg: &AntennaConfig) -> Result<u32> {
    cfg.n()
        .iter()
        .rev()
        .find(|&&n| n <= cfg.m())
        .copied()
        .ok_or(Error::PhaseTwoUndefined {
            m: cfg.m(),
            n1: cfg.n()[0],
        })
}

/// Per-slot retained rows of each reconstructed block: the deficit of the
/// smallest receiver that wants the message (`N_2` for message 1, `N_1` otherwise).
pub fn slot_rows(cfg: &AntennaConfig, q: &[u32]) -> Vec<u32> {
    let n = cfg.n();
    q.iter()
        .enumerate()
        .map(|(j, &qj)| {
            let weakest = if j == 0 { n[1] } else { n[0] };
            qj.saturating_sub(weakest)
        })
        .collect()
}

/// `len_1 = T_1 max(Q_1 - N_2, 0)`, `len_j = T_j max(Q_j - N_1, 0)`.
pub fn truncation_lengths(cfg: &AntennaConfig, q: &[u32], t: &[u32]) -> Vec<u64> {
    slot_rows(cfg, q)
        .iter()
        .zip(t)
        .map(|(&r, &tj)| u64::from(r) * u64::from(tj))
        .collect()
}

/// One segment of the order-K vector: the sum of two zero-padded blocks, or a
/// lone block when only one block is nonempty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub first: usize,
    pub second: Option<usize>,
    pub len: u64,
}

/// Segments pairing consecutive nonempty blocks. Empty blocks (sub-phases
/// with `T_j = 0`) are skipped so they cost no phase-II entries.
pub fn order_k_segments(len: &[u64]) -> Vec<Segment> {
    let nonempty: Vec<usize> = (0..len.len()).filter(|&j| len[j] > 0).collect();
    match nonempty.as_slice() {
        [] => Vec::new(),
        [j] => vec![Segment {
            first: *j,
            second: None,
            len: len[*j],
        }],
        many => many
            .windows(2)
            .map(|w| Segment {
                first: w[0],
                second: Some(w[1]),
                len: len[w[0]].max(len[w[1]]),
            })
            .collect(),
    }
}

impl SchemePlan {
    /// Validated plan with derived truncation lengths and total duration.
    pub fn new(cfg: &AntennaConfig, q: Vec<u32>, t: Vec<u32>, t2: u32, b: u32) -> Result<Self> {
        let k = cfg.k();
        if q.len() != k || t.len() != k {
            return Err(Error::InvalidPlan(format!(
                "Q and T need {k} entries, got {} and {}",
                q.len(),
                t.len()
            )));
        }
        let (m, n1) = (cfg.m(), cfg.n()[0]);
        for (j, (&qj, &tj)) in q.iter().zip(&t).enumerate() {
            if qj > m {
                return Err(Error::InvalidPlan(format!("Q{} = {qj} exceeds M = {m}", j + 1)));
            }
            if qj == 0 || (tj > 0 && qj <= n1) {
                return Err(Error::InvalidPlan(format!("Q{} = {qj} must exceed N1 = {n1}", j + 1)));
            }
        }
        if b == 0 || b > m {
            return Err(Error::InvalidPlan(format!("B = {b} must lie in 1..={m}")));
        }
        let len = truncation_lengths(cfg, &q, &t);
        let beta = t.iter().map(|&x| u64::from(x)).sum::<u64>() + u64::from(t2);
        Ok(Self { q, t, t2, b, len, beta })
    }

    pub fn from_spec(cfg: &AntennaConfig, spec: &PlanSpec) -> Result<Self> {
        let b = match spec.b {
            Some(b) => b,
            None => phase2_antennas(cfg)?,
        };
        Self::new(cfg, spec.q.clone(), spec.t.clone(), spec.t2, b)
    }

    pub fn k(&self) -> usize {
        self.q.len()
    }

    /// Number of symbols carried by `s_{-j}`.
    pub fn symbols(&self, j: usize) -> usize {
        self.q[j] as usize * self.t[j] as usize
    }

    /// First slot of sub-phase `j`.
    pub fn subphase_start(&self, j: usize) -> usize {
        self.t[..j].iter().map(|&x| x as usize).sum()
    }

    pub fn phase1_slots(&self) -> usize {
        self.subphase_start(self.k())
    }

    /// Entries of the order-K vector: `sum max(len_a, len_b)` over
    /// consecutive nonempty blocks.
    pub fn order_k_len(&self) -> u64 {
        order_k_segments(&self.len).iter().map(|s| s.len).sum()
    }

    pub fn phase2_capacity(&self) -> u64 {
        u64::from(self.b) * u64::from(self.t2)
    }

    /// Same plan with every duration multiplied by `factor`.
    pub fn scaled(&self, cfg: &AntennaConfig, factor: u32) -> Result<Self> {
        Self::new(
            cfg,
            self.q.clone(),
            self.t.iter().map(|&x| x * factor).collect(),
            self.t2 * factor,
            self.b,
        )
    }

    /// Plan with phase II shortened (or lengthened) to `t2` slots.
    pub fn with_t2(&self, t2: u32) -> Self {
        let mut p = self.clone();
        p.beta = p.beta - u64::from(p.t2) + u64::from(t2);
        p.t2 = t2;
        p
    }
}

/// Rows of the decoding conditions,
/// `sum_{i != j} T_i max(Q_i - N_j, 0) <= T2 N_j` for every receiver `j`.
pub fn decoding_rows(cfg: &AntennaConfig, plan: &SchemePlan) -> Vec<DecodingRow> {
    let n = cfg.n();
    (0..cfg.k())
        .map(|j| {
            let deficit: u64 = (0..plan.k())
                .filter(|&i| i != j)
                .map(|i| u64::from(plan.t[i]) * u64::from(plan.q[i].saturating_sub(n[j])))
                .sum();
            let supply = u64::from(plan.t2) * u64::from(n[j]);
            DecodingRow {
                receiver: j,
                deficit,
                supply,
                slack: supply as i64 - deficit as i64,
            }
        })
        .collect()
}

/// First violated decoding condition or phase-II budget, as an error.
pub fn check_decoding(cfg: &AntennaConfig, plan: &SchemePlan) -> Result<()> {
    if let Some(row) = decoding_rows(cfg, plan).into_iter().find(|r| r.slack < 0) {
        return Err(Error::DecodingViolation {
            receiver: row.receiver + 1,
            deficit: row.deficit,
            supply: row.supply,
        });
    }
    let needed = plan.order_k_len();
    if needed > plan.phase2_capacity() {
        return Err(Error::PhaseTwoBudget {
            needed,
            capacity: plan.phase2_capacity(),
        });
    }
    Ok(())
}

pub fn decoding_feasible(cfg: &AntennaConfig, plan: &SchemePlan) -> bool {
    check_decoding(cfg, plan).is_ok()
}

/// Achieved tuple `d_{-i} = T_i Q_i / beta`.
pub fn achieved_dof(plan: &SchemePlan) -> Result<DoFPoint> {
    if plan.beta == 0 {
        return Err(Error::EmptyPlan);
    }
    let beta = i64::try_from(plan.beta).map_err(|_| Error::InvalidPlan("beta too large".into()))?;
    DoFPoint::new(
        plan.q
            .iter()
            .zip(&plan.t)
            .map(|(&q, &t)| Rational::new(i64::from(q) * i64::from(t), beta))
            .collect(),
    )
}

/// Inverts the achieved-tuple map: `T_i / beta = d_{-i} / Q_i` and
/// `T2 / beta = 1 - sum_i d_{-i} / Q_i`, scaled by the least common
/// denominator to integers.
pub fn plan_for_target(cfg: &AntennaConfig, target: &DoFPoint) -> Result<SchemePlan> {
    let q = antenna_counts(cfg)?;
    let b = phase2_antennas(cfg)?;
    let region = DoFRegion::delayed_csit(cfg);
    if let Some((index, lhs)) = region.first_violation(target)? {
        return Err(Error::OutsideRegion {
            point: target.to_string(),
            index: index + 1,
            halfspace: region.halfspaces()[index].to_string(),
            lhs: lhs.to_string(),
        });
    }

    let mut fractions: Vec<Rational> = target
        .coords()
        .iter()
        .zip(&q)
        .map(|(d, &qj)| d / Rational::from_integer(i64::from(qj)))
        .collect();
    let phase2 = Rational::one() - fractions.iter().copied().sum::<Rational>();
    if phase2.is_negative() {
        return Err(Error::InvalidPlan(format!(
            "target needs more than all slots for phase I (phase-II share {phase2})"
        )));
    }
    fractions.push(phase2);

    let lcd = fractions.iter().fold(1i64, |l, f| l.lcm(f.denom()));
    let to_slots = |f: &Rational| -> Result<u32> {
        let v = (f * Rational::from_integer(lcd)).to_integer();
        u32::try_from(v).map_err(|_| Error::InvalidPlan(format!("slot count {v} out of range")))
    };
    let t = fractions[..cfg.k()].iter().map(to_slots).collect::<Result<Vec<_>>>()?;
    let t2 = to_slots(&fractions[cfg.k()])?;
    debug_assert!(!lcd.is_zero());

    let plan = SchemePlan::new(cfg, q, t, t2, b)?;
    check_decoding(cfg, &plan)?;
    Ok(plan)
}
