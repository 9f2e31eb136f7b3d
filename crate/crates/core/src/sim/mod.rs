//! Dense statevector simulation over mixed qubit/qutrit registers.

mod noise;
mod truth;

use std::collections::BTreeMap;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use noise::{run_noisy_trajectory, NoiseParams, TrajectorySampler};
pub use truth::TruthTable;

use crate::error::{Error, Result};
use crate::ir::{Circuit, GateKind};
use crate::scalar::Real;

/// Largest state the simulator will allocate.
pub const MAX_AMPLITUDES: usize = 1 << 24;

/// Size guard of [`unitary`] (full register dimension).
pub const UNITARY_LIMIT: usize = 1 << 12;

/// Dense amplitude vector. Index digits follow the register order with wire 0
/// as the most significant digit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    dims: Vec<usize>,
    strides: Vec<usize>,
    amps: Vec<Complex<T>>,
}

fn strides_of(dims: &[usize]) -> Result<(Vec<usize>, usize)> {
    if dims.is_empty() {
        return Err(Error::EmptyRegister);
    }
    let mut strides = vec![0; dims.len()];
    let mut acc = 1usize;
    for (i, &d) in dims.iter().enumerate().rev() {
        if d != 2 && d != 3 {
            return Err(Error::InvalidDimension { index: i, dim: d });
        }
        strides[i] = acc;
        acc = acc
            .checked_mul(d)
            .filter(|&s| s <= MAX_AMPLITUDES)
            .ok_or(Error::SizeGuard {
                size: usize::MAX,
                limit: MAX_AMPLITUDES,
            })?;
    }
    Ok((strides, acc))
}

/// Digits of a binary label over `n` wires (wire 0 most significant).
pub fn binary_digits(label: usize, n: usize) -> Vec<usize> {
    (0..n).map(|w| (label >> (n - 1 - w)) & 1).collect()
}

/// Inverse of [`binary_digits`]; `None` if any digit is not 0 or 1.
pub fn binary_label(digits: &[usize]) -> Option<usize> {
    digits.iter().try_fold(0usize, |acc, &d| match d {
        0 | 1 => Some((acc << 1) | d),
        _ => None,
    })
}

/// Parses a basis label such as `"0120"` into digits.
pub fn parse_basis_label(text: &str) -> Result<Vec<usize>> {
    text.chars()
        .map(|c| {
            c.to_digit(10)
                .map(|d| d as usize)
                .ok_or_else(|| Error::InvalidInput(format!("'{c}' in label \"{text}\"")))
        })
        .collect()
}

impl<T: Real> StateVector<T> {
    pub fn zero(dims: &[usize]) -> Result<Self> {
        Self::basis(dims, &vec![0; dims.len()])
    }

    /// Computational basis state `|digits>`.
    pub fn basis(dims: &[usize], digits: &[usize]) -> Result<Self> {
        let (strides, len) = strides_of(dims)?;
        if digits.len() != dims.len() {
            return Err(Error::InvalidInput(format!(
                "{} digits for a {}-wire register",
                digits.len(),
                dims.len()
            )));
        }
        let mut index = 0;
        for (w, (&d, &dim)) in digits.iter().zip(dims).enumerate() {
            if d >= dim {
                return Err(Error::InvalidInput(format!(
                    "digit {d} on dim-{dim} wire {w}"
                )));
            }
            index += d * strides[w];
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); len];
        amps[index] = Complex::new(T::one(), T::zero());
        Ok(StateVector {
            dims: dims.to_vec(),
            strides,
            amps,
        })
    }

    pub fn from_amplitudes(dims: &[usize], amps: Vec<Complex<T>>) -> Result<Self> {
        let (strides, len) = strides_of(dims)?;
        if amps.len() != len {
            return Err(Error::RegisterMismatch(format!(
                "{} amplitudes for a register of size {len}",
                amps.len()
            )));
        }
        Ok(StateVector {
            dims: dims.to_vec(),
            strides,
            amps,
        })
    }

    /// Uniform superposition over the binary subspace of `dims`.
    pub fn binary_uniform(dims: &[usize]) -> Result<Self> {
        let mut state = Self::zero(dims)?;
        let n = dims.len();
        let amp = T::one() / T::of_usize(1usize << n).sqrt();
        state.amps[0] = Complex::new(T::zero(), T::zero());
        for label in 0..1usize << n {
            let idx = state.index_of(&binary_digits(label, n));
            state.amps[idx] = Complex::new(amp, T::zero());
        }
        Ok(state)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.strides).map(|(d, s)| d * s).sum()
    }

    pub fn digits_of(&self, index: usize) -> Vec<usize> {
        self.strides
            .iter()
            .zip(&self.dims)
            .map(|(s, d)| (index / s) % d)
            .collect()
    }

    #[inline]
    fn digit(&self, index: usize, wire: usize) -> usize {
        (index / self.strides[wire]) % self.dims[wire]
    }

    pub fn amplitude(&self, digits: &[usize]) -> Complex<T> {
        self.amps[self.index_of(digits)]
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Probability over binary labels, plus the mass on states holding any `|2>`.
    pub fn binary_distribution(&self) -> (Vec<T>, T) {
        let n = self.dims.len();
        let mut dist = vec![T::zero(); 1 << n];
        let mut leak = T::zero();
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p == T::zero() {
                continue;
            }
            match binary_label(&self.digits_of(i)) {
                Some(l) => dist[l] += p,
                None => leak += p,
            }
        }
        (dist, leak)
    }

    /// Amplitudes on the binary subspace, indexed by binary label.
    pub fn binary_amplitudes(&self) -> Vec<Complex<T>> {
        let n = self.dims.len();
        (0..1usize << n)
            .map(|l| self.amps[self.index_of(&binary_digits(l, n))])
            .collect()
    }

    pub fn leakage(&self) -> T {
        self.binary_distribution().1
    }

    fn check_wires(&self, gate: &GateKind, wires: &[usize]) -> Result<()> {
        gate.check_arity(wires.len())?;
        for (i, &w) in wires.iter().enumerate() {
            if w >= self.dims.len() {
                return Err(Error::WireOutOfRange {
                    wire: w,
                    len: self.dims.len(),
                });
            }
            if wires[..i].contains(&w) {
                return Err(Error::DuplicateWire {
                    gate: gate.name(),
                    wire: w,
                });
            }
        }
        match *gate {
            GateKind::Swap1120 { .. } if self.dims[wires[0]] != 3 => Err(Error::NeedsQutrit {
                gate: gate.name(),
                wire: wires[0],
                dim: self.dims[wires[0]],
            }),
            GateKind::Phase { level, .. } if usize::from(level) >= self.dims[wires[0]] => {
                Err(Error::RegisterMismatch(format!(
                    "PHASE level {level} on dim-{} wire {}",
                    self.dims[wires[0]], wires[0]
                )))
            }
            _ => Ok(()),
        }
    }

    /// Applies one gate in place.
    pub fn apply(&mut self, gate: &GateKind, wires: &[usize]) -> Result<()> {
        self.check_wires(gate, wires)?;
        match *gate {
            GateKind::X => self.apply_x(wires[0]),
            GateKind::H => {
                let h = T::FRAC_1_SQRT_2();
                self.apply_real_2x2(wires[0], [[h, h], [h, -h]]);
            }
            GateKind::Ry(angle) => {
                let half = T::of(angle) / T::of(2.0);
                let (s, c) = half.sin_cos();
                self.apply_real_2x2(wires[0], [[c, -s], [s, c]]);
            }
            GateKind::Phase { level, angle } => {
                let w = wires[0];
                let phase = Complex::from_polar(T::one(), T::of(angle));
                let level = usize::from(level);
                for i in 0..self.amps.len() {
                    if self.digit(i, w) == level {
                        self.amps[i] = self.amps[i] * phase;
                    }
                }
            }
            GateKind::Cz => self
                .flip_sign_where(|sv, i| sv.digit(i, wires[0]) == 1 && sv.digit(i, wires[1]) == 1),
            GateKind::RefMcz => {
                self.flip_sign_where(|sv, i| wires.iter().all(|&w| sv.digit(i, w) == 1))
            }
            GateKind::Cnot => self.controlled_flip(&wires[..1], wires[1]),
            GateKind::RefMcx => {
                let (target, controls) = wires.split_last().expect("arity checked");
                self.controlled_flip(controls, *target);
            }
            GateKind::Swap1120 { theta } => self.apply_swap1120(wires[0], wires[1], theta),
        }
        Ok(())
    }

    fn apply_x(&mut self, w: usize) {
        let stride = self.strides[w];
        let block = stride * self.dims[w];
        for base in (0..self.amps.len()).step_by(block) {
            for lo in base..base + stride {
                self.amps.swap(lo, lo + stride);
            }
        }
    }

    fn apply_real_2x2(&mut self, w: usize, m: [[T; 2]; 2]) {
        let stride = self.strides[w];
        let block = stride * self.dims[w];
        for base in (0..self.amps.len()).step_by(block) {
            for i0 in base..base + stride {
                let i1 = i0 + stride;
                let (a0, a1) = (self.amps[i0], self.amps[i1]);
                self.amps[i0] = a0 * m[0][0] + a1 * m[0][1];
                self.amps[i1] = a0 * m[1][0] + a1 * m[1][1];
            }
        }
    }

    fn flip_sign_where(&mut self, pred: impl Fn(&Self, usize) -> bool) {
        for i in 0..self.amps.len() {
            if pred(self, i) {
                self.amps[i] = -self.amps[i];
            }
        }
    }

    /// Swaps target `|0>` and `|1>` when every control reads `|1>`.
    fn controlled_flip(&mut self, controls: &[usize], target: usize) {
        let stride = self.strides[target];
        for i in 0..self.amps.len() {
            if self.digit(i, target) == 0 && controls.iter().all(|&c| self.digit(i, c) == 1) {
                self.amps.swap(i, i + stride);
            }
        }
    }

    fn apply_swap1120(&mut self, child: usize, parent: usize, theta: f64) {
        let minus_i = Complex::new(T::zero(), -T::one());
        let theta = T::of(theta);
        // |1,1> -> -i e^{+i theta} |2,0>,  |2,0> -> -i e^{-i theta} |1,1>
        let to_20 = minus_i * Complex::from_polar(T::one(), theta);
        let to_11 = minus_i * Complex::from_polar(T::one(), -theta);
        let (sc, sp) = (self.strides[child], self.strides[parent]);
        for i in 0..self.amps.len() {
            if self.digit(i, child) == 1 && self.digit(i, parent) == 1 {
                let j = i + sc - sp;
                let (a11, a20) = (self.amps[i], self.amps[j]);
                self.amps[j] = to_20 * a11;
                self.amps[i] = to_11 * a20;
            }
        }
    }
}

/// Runs every op of `circuit` on `state`.
pub fn run_state<T: Real>(circuit: &Circuit, mut state: StateVector<T>) -> Result<StateVector<T>> {
    if state.dims() != circuit.dims().as_slice() {
        return Err(Error::RegisterMismatch(format!(
            "state dims {:?} vs circuit dims {:?}",
            state.dims(),
            circuit.dims()
        )));
    }
    for op in circuit.ops() {
        state.apply(&op.gate, &op.wires)?;
    }
    Ok(state)
}

/// Simulates `circuit` from the basis input `digits`.
pub fn run<T: Real>(circuit: &Circuit, digits: &[usize]) -> Result<StateVector<T>> {
    let state = StateVector::basis(&circuit.dims(), digits)?;
    run_state(circuit, state)
}

/// Full unitary over the whole register, `m[row][col]` with `col` the input
/// index. Guarded to registers of at most [`UNITARY_LIMIT`] states.
pub fn unitary<T: Real>(circuit: &Circuit) -> Result<Vec<Vec<Complex<T>>>> {
    let dims = circuit.dims();
    let (_, size) = strides_of(&dims)?;
    if size > UNITARY_LIMIT {
        return Err(Error::SizeGuard {
            size,
            limit: UNITARY_LIMIT,
        });
    }
    let probe = StateVector::<T>::zero(&dims)?;
    let columns = (0..size)
        .into_par_iter()
        .map(|col| run::<T>(circuit, &probe.digits_of(col)).map(|s| s.amps))
        .collect::<Result<Vec<_>>>()?;
    Ok(transpose(columns))
}

/// Unitary restricted to the binary subspace: `m[out][in]` over binary labels.
/// Guarded to at most [`UNITARY_LIMIT`] binary inputs.
pub fn binary_unitary<T: Real>(circuit: &Circuit) -> Result<Vec<Vec<Complex<T>>>> {
    let n = circuit.num_wires();
    let size = 1usize.checked_shl(n as u32).unwrap_or(usize::MAX);
    if n >= usize::BITS as usize || size > UNITARY_LIMIT {
        return Err(Error::SizeGuard {
            size,
            limit: UNITARY_LIMIT,
        });
    }
    let columns = (0..size)
        .into_par_iter()
        .map(|label| run::<T>(circuit, &binary_digits(label, n)).map(|s| s.binary_amplitudes()))
        .collect::<Result<Vec<_>>>()?;
    Ok(transpose(columns))
}

fn transpose<T: Copy>(columns: Vec<Vec<T>>) -> Vec<Vec<T>> {
    let rows = columns.first().map_or(0, Vec::len);
    (0..rows)
        .map(|r| columns.iter().map(|col| col[r]).collect())
        .collect()
}

/// Draws `shots` computational-basis outcomes (full register index) from
/// `|amplitude|^2`. Deterministic in `seed`.
pub fn sample<T: Real>(state: &StateVector<T>, shots: u64, seed: u64) -> BTreeMap<usize, u64> {
    let cdf = cumulative(&state.probabilities());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        *counts.entry(draw(&cdf, &mut rng)).or_insert(0) += 1;
    }
    counts
}

pub(crate) fn cumulative<T: Real>(probs: &[T]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|p| {
            acc += p.to_f64_lossy();
            acc
        })
        .collect()
}

pub(crate) fn draw<R: Rng>(cdf: &[f64], rng: &mut R) -> usize {
    let total = *cdf.last().expect("non-empty distribution");
    let r = rng.gen::<f64>() * total;
    cdf.partition_point(|&c| c <= r).min(cdf.len() - 1)
}
