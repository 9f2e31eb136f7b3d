use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{cumulative, draw, run, StateVector};
use crate::error::{Error, Result};
use crate::ir::Circuit;

/// Per-macro-gate fidelity of the depolarize-on-failure model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    fidelity: f64,
}

impl NoiseParams {
    pub fn new(fidelity: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&fidelity) {
            return Err(Error::NoiseModel(format!(
                "fidelity {fidelity} outside [0, 1]"
            )));
        }
        Ok(NoiseParams { fidelity })
    }

    pub fn ideal() -> Self {
        NoiseParams { fidelity: 1.0 }
    }

    pub fn fidelity(&self) -> f64 {
        self.fidelity
    }
}

/// Reads a register index as a binary label; a `|2>` digit reads as `1`.
fn measured_label(state: &StateVector<f64>, index: usize) -> usize {
    state
        .digits_of(index)
        .iter()
        .fold(0, |acc, &d| (acc << 1) | usize::from(d > 0))
}

/// Trajectory sampler for one circuit and input.
///
/// The ideal final state is simulated once. Each trajectory then lets every
/// marked macro gate fail with probability `1 - F`; any failure makes the
/// measured label uniform over all `2^n` labels, otherwise the label is
/// drawn from the ideal state.
#[derive(Debug, Clone)]
pub struct TrajectorySampler {
    n: usize,
    macros: usize,
    fidelity: f64,
    cdf: Vec<f64>,
    labels: Vec<usize>,
}

impl TrajectorySampler {
    pub fn new(circuit: &Circuit, noise: NoiseParams, input: &[usize]) -> Result<Self> {
        let macros = circuit.macros().len();
        if macros == 0 && noise.fidelity < 1.0 {
            return Err(Error::NoiseModel(
                "circuit has no marked macro gates; F < 1 is undefined".into(),
            ));
        }
        let state = run::<f64>(circuit, input)?;
        let probs = state.probabilities();
        let (labels, probs): (Vec<usize>, Vec<f64>) = probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(i, &p)| (measured_label(&state, i), p))
            .unzip();
        Ok(TrajectorySampler {
            n: circuit.num_wires(),
            macros,
            fidelity: noise.fidelity,
            cdf: cumulative(&probs),
            labels,
        })
    }

    /// Probability that a trajectory takes the ideal branch, `F^k`.
    pub fn ideal_branch_probability(&self) -> f64 {
        self.fidelity.powi(self.macros as i32)
    }

    fn rng(seed: u64, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        rng
    }

    /// Outcome of trajectory `index` and whether it stayed ideal. Depends only
    /// on `(seed, index)`.
    pub fn trajectory(&self, seed: u64, index: u64) -> (usize, bool) {
        let mut rng = Self::rng(seed, index);
        let failed = (0..self.macros).any(|_| rng.gen::<f64>() >= self.fidelity);
        if failed {
            (rng.gen_range(0..1usize << self.n), false)
        } else {
            (self.labels[draw(&self.cdf, &mut rng)], true)
        }
    }

    /// Histogram over binary labels of `shots` trajectories. Parallel and
    /// deterministic in `seed`.
    pub fn counts(&self, shots: u64, seed: u64) -> Vec<u64> {
        let size = 1usize << self.n;
        (0..shots)
            .into_par_iter()
            .fold(
                || vec![0u64; size],
                |mut acc, i| {
                    acc[self.trajectory(seed, i).0] += 1;
                    acc
                },
            )
            .reduce(
                || vec![0u64; size],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    }

    /// Number of trajectories among `shots` that took the ideal branch.
    pub fn ideal_branch_count(&self, shots: u64, seed: u64) -> u64 {
        (0..shots)
            .into_par_iter()
            .filter(|&i| self.trajectory(seed, i).1)
            .count() as u64
    }
}

/// One noisy trajectory from a binary-digit input; returns the measured label.
pub fn run_noisy_trajectory(
    circuit: &Circuit,
    noise: NoiseParams,
    input: &[usize],
    seed: u64,
) -> Result<usize> {
    Ok(TrajectorySampler::new(circuit, noise, input)?
        .trajectory(seed, 0)
        .0)
}
