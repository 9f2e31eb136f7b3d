//! Fidelity metrics, readout correction, T1 estimates and baseline
//! decompositions.

mod baseline;
mod spam;

pub use baseline::{
    comparison_table, comparison_tsv, nc_ancilla_decomposition, AncillaFormula, DecompositionRow,
    Growth, Measured, NcArrangement, NcDecomposition, Topology,
};
pub use spam::{spam_correct, ConfusionMatrix, SpamCorrection};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::ir::Circuit;
use crate::scalar::Real;
use crate::sim::{binary_unitary, run_state, StateVector, TruthTable};

/// `(1/2^n) sum_s P_exp[ideal(s)][s]`, where `ideal(s)` is the output the
/// deterministic table `ideal` assigns to input `s`.
pub fn truth_table_fidelity<T: Real>(exp: &TruthTable<T>, ideal: &TruthTable<T>) -> Result<T> {
    if exp.n != ideal.n || exp.size() != ideal.size() {
        return Err(Error::RegisterMismatch(format!(
            "truth tables over {} and {} qubits",
            exp.n, ideal.n
        )));
    }
    let tol = T::of(1e-9);
    for col in &ideal.columns {
        if col
            .iter()
            .any(|&p| p.abs() > tol && (p - T::one()).abs() > tol)
        {
            return Err(Error::InvalidInput(
                "ideal truth table must have 0/1 entries".into(),
            ));
        }
    }
    let perm = ideal
        .as_permutation(tol)
        .ok_or_else(|| Error::InvalidInput("ideal truth table is not a permutation".into()))?;
    let total: T = perm
        .iter()
        .enumerate()
        .map(|(s, &out)| exp.columns[s][out])
        .sum();
    Ok(total / T::of_usize(exp.size()))
}

/// Overlap of two circuits on the binary subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equivalence<T> {
    /// `|Tr(U1^dagger U2)| / 2^n`.
    pub overlap: T,
    pub equivalent: bool,
}

/// Compares the binary-subspace unitaries of two circuits up to global phase.
pub fn unitary_equiv<T: Real>(a: &Circuit, b: &Circuit, tol: T) -> Result<Equivalence<T>> {
    if a.num_wires() != b.num_wires() {
        return Err(Error::RegisterMismatch(format!(
            "{} vs {} wires",
            a.num_wires(),
            b.num_wires()
        )));
    }
    let (ua, ub) = (binary_unitary::<T>(a)?, binary_unitary::<T>(b)?);
    let trace: Complex<T> = ua
        .iter()
        .flatten()
        .zip(ub.iter().flatten())
        .map(|(x, y)| x.conj() * y)
        .sum();
    let overlap = trace.norm() / T::of_usize(ua.len());
    Ok(Equivalence {
        overlap,
        equivalent: overlap >= T::one() - tol,
    })
}

/// `|<psi_a|psi_b>|` for both circuits applied to the uniform binary
/// superposition. For circuits whose truth tables agree and are diagonal
/// permutations, this is one exactly when the relative phases agree.
pub fn probe_overlap<T: Real>(a: &Circuit, b: &Circuit) -> Result<T> {
    if a.num_wires() != b.num_wires() {
        return Err(Error::RegisterMismatch(format!(
            "{} vs {} wires",
            a.num_wires(),
            b.num_wires()
        )));
    }
    let sa = run_state(a, StateVector::<T>::binary_uniform(&a.dims())?)?;
    let sb = run_state(b, StateVector::<T>::binary_uniform(&b.dims())?)?;
    let inner: Complex<T> = sa
        .binary_amplitudes()
        .iter()
        .zip(sb.binary_amplitudes())
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(inner.norm())
}

/// A stretch of time during which some wires sit in `|1>`.
#[derive(Debug, Clone, PartialEq)]
pub struct T1Segment {
    /// Seconds.
    pub duration: f64,
    pub excited: Vec<bool>,
    /// Per-wire relaxation time in seconds.
    pub t1: Vec<f64>,
}

/// Product over segments and excited wires of `exp(-duration / T1)`.
pub fn t1_fidelity(segments: &[T1Segment]) -> Result<f64> {
    let mut log = 0.0;
    for (k, seg) in segments.iter().enumerate() {
        if !(seg.duration >= 0.0) || !seg.duration.is_finite() {
            return Err(Error::InvalidInput(format!(
                "segment {k}: duration {} must be finite and nonnegative",
                seg.duration
            )));
        }
        if seg.excited.len() != seg.t1.len() {
            return Err(Error::InvalidInput(format!(
                "segment {k}: {} excited flags for {} T1 values",
                seg.excited.len(),
                seg.t1.len()
            )));
        }
        for (j, (&on, &t1)) in seg.excited.iter().zip(&seg.t1).enumerate() {
            if !(t1 > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "segment {k}, wire {j}: T1 = {t1} must be positive"
                )));
            }
            if on {
                log -= seg.duration / t1;
            }
        }
    }
    Ok(log.exp())
}
