//! Monte-Carlo execution of the two-phase scheme.
//!
//! A trial draws generic channels and symbols, runs phase I, reconstructs the
//! interference blocks from delayed CSI, sends their pairwise sums in phase
//! II and decodes at every receiver by a joint linear solve.

mod cancel;
mod channel;
mod decode;
mod transmit;
mod trial;

pub use cancel::backward_forward_cancel;
pub use channel::{ChannelRealization, SymbolLoad};
pub use decode::{receiver_decode, ReceiverReport};
pub use transmit::{
    build_order_k, phase2_schedule, reconstruct_interference, run_phase1, run_phase2, Phase2Schedule, Transcript,
};
pub use trial::{monte_carlo, run_trial, MonteCarloSummary, SimOptions, TrialReport};

use num_complex::Complex64;

pub type CVector = nalgebra::DVector<Complex64>;
pub type CMatrix = nalgebra::DMatrix<Complex64>;
