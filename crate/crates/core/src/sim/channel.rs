use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{CMatrix, CVector};
use crate::config::AntennaConfig;
use crate::plan::SchemePlan;

// Independent ChaCha streams per purpose, all keyed by the trial seed.
pub(crate) const CHANNEL_STREAM: u64 = 0;
pub(crate) const LOAD_STREAM: u64 = 1;
pub(crate) const NOISE_STREAM: u64 = 2;

pub(crate) fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Circularly-symmetric complex Gaussian with unit variance.
pub(crate) fn cn01<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Channel matrices `H_i[t]` (`N_i x M`) for every slot of a plan.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// Indexed `[slot][receiver]`.
    slots: Vec<Vec<CMatrix>>,
    seed: u64,
}

impl ChannelRealization {
    /// I.i.d. CN(0,1) entries; slots are drawn in order, receivers in
    /// canonical order, entries row-major.
    pub fn draw(cfg: &AntennaConfig, plan: &SchemePlan, seed: u64) -> Self {
        let mut rng = stream(seed, CHANNEL_STREAM);
        let m = cfg.m() as usize;
        let slots = (0..plan.beta)
            .map(|_| {
                cfg.n()
                    .iter()
                    .map(|&ni| DMatrix::from_row_iterator(ni as usize, m, (0..ni as usize * m).map(|_| cn01(&mut rng))))
                    .collect()
            })
            .collect();
        Self { slots, seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn num_slots(&self) -> usize {
        self.slots.len()
    }

    /// `H_i[t]`.
    pub fn h(&self, slot: usize, receiver: usize) -> &CMatrix {
        &self.slots[slot][receiver]
    }

    pub fn matrices(&self) -> impl Iterator<Item = &CMatrix> {
        self.slots.iter().flatten()
    }
}

/// Phase-I symbol vectors `s_{-j}`, each of length `Q_j T_j`, laid out slot by slot.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolLoad {
    pub blocks: Vec<CVector>,
}

impl SymbolLoad {
    pub fn draw(plan: &SchemePlan, seed: u64) -> Self {
        let mut rng = stream(seed, LOAD_STREAM);
        let blocks = (0..plan.k())
            .map(|j| DVector::from_iterator(plan.symbols(j), (0..plan.symbols(j)).map(|_| cn01(&mut rng))))
            .collect();
        Self { blocks }
    }

    pub fn zeros(plan: &SchemePlan) -> Self {
        Self {
            blocks: (0..plan.k()).map(|j| DVector::zeros(plan.symbols(j))).collect(),
        }
    }

    pub fn scaled(&self, alpha: Complex64) -> Self {
        Self {
            blocks: self.blocks.iter().map(|b| b * alpha).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (AntennaConfig, SchemePlan) {
        let cfg = AntennaConfig::new(2, &[1, 1, 1]).unwrap();
        let plan = SchemePlan::new(&cfg, vec![2, 2, 2], vec![1, 1, 1], 2, 1).unwrap();
        (cfg, plan)
    }

    #[test]
    fn reproducible() {
        let (cfg, plan) = setup();
        assert_eq!(
            ChannelRealization::draw(&cfg, &plan, 7),
            ChannelRealization::draw(&cfg, &plan, 7)
        );
        assert_eq!(SymbolLoad::draw(&plan, 7), SymbolLoad::draw(&plan, 7));
    }

    #[test]
    fn seeds_differ_everywhere() {
        let (cfg, plan) = setup();
        let a = ChannelRealization::draw(&cfg, &plan, 1);
        let b = ChannelRealization::draw(&cfg, &plan, 2);
        for (x, y) in a.matrices().zip(b.matrices()) {
            assert!(x.iter().zip(y.iter()).all(|(p, q)| p != q));
        }
    }

    #[test]
    fn shape_follows_plan() {
        let (cfg, plan) = setup();
        let ch = ChannelRealization::draw(&cfg, &plan, 3);
        assert_eq!(ch.num_slots(), 5);
        assert_eq!(ch.matrices().count(), 15);
        assert!(ch.matrices().all(|h| h.shape() == (1, 2)));

        let cfg = AntennaConfig::new(3, &[2, 1, 2]).unwrap();
        let plan = SchemePlan::new(&cfg, vec![3, 3, 3], vec![1, 1, 1], 2, 2).unwrap();
        let ch = ChannelRealization::draw(&cfg, &plan, 3);
        assert_eq!(ch.h(0, 0).shape(), (1, 3));
        assert_eq!(ch.h(4, 2).shape(), (2, 3));
    }

    #[test]
    fn load_lengths() {
        let (_, plan) = setup();
        let load = SymbolLoad::draw(&plan, 0);
        assert!(load.blocks.iter().all(|b| b.len() == 2));
    }
}
