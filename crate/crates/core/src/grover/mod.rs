//! Grover search built from synthesized n-CZ gates.
//!
//! Solution labels are n-bit strings read left to right as wires `0..n`, the
//! same convention as simulator basis labels, so `"0100"` marks wire 1.

mod fit;

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use fit::{fit_fidelity, sample_curve, AspCurve, AspPoint, FitResult, FitWarning};

use crate::error::{Error, Result};
use crate::ir::{Circuit, ConnectivityGraph, GateKind};
use crate::sim::{binary_digits, NoiseParams, TrajectorySampler};
use crate::synth::synth_mcz_tree;

/// Parses a bit-string label; character `i` is wire `i`.
pub fn parse_label(text: &str, n: usize) -> Result<usize> {
    if text.len() != n || !text.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::InvalidInput(format!(
            "solution \"{text}\" is not a {n}-bit string"
        )));
    }
    Ok(usize::from_str_radix(text, 2).expect("validated binary string"))
}

pub fn format_label(label: usize, n: usize) -> String {
    format!("{label:0n$b}")
}

/// Child seed `k` of `seed`, independent of how many children are drawn.
pub fn derive_seed(seed: u64, k: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng.next_u64()
}

fn mcz_for(n: usize, graph: &ConnectivityGraph) -> Result<Circuit> {
    if graph.num_vertices() != n {
        return Err(Error::InvalidArgument(format!(
            "graph has {} vertices for {n} qubits",
            graph.num_vertices()
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument("Grover search needs n >= 2".into()));
    }
    Ok(synth_mcz_tree(graph)?.circuit)
}

fn layer(circuit: &mut Circuit, gate: GateKind) -> Result<()> {
    for w in 0..circuit.num_wires() {
        circuit.push(gate, &[w])?;
    }
    Ok(())
}

fn push_oracle(circuit: &mut Circuit, mcz: &Circuit, solutions: &[usize]) -> Result<()> {
    let n = circuit.num_wires();
    for &s in solutions {
        if s >> n != 0 {
            return Err(Error::InvalidInput(format!(
                "solution {s} exceeds {n} bits"
            )));
        }
        let zeros: Vec<usize> = binary_digits(s, n)
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 0)
            .map(|(w, _)| w)
            .collect();
        for &w in &zeros {
            circuit.push(GateKind::X, &[w])?;
        }
        circuit.append_macro(mcz)?;
        for &w in &zeros {
            circuit.push(GateKind::X, &[w])?;
        }
    }
    Ok(())
}

fn push_diffusion(circuit: &mut Circuit, mcz: &Circuit) -> Result<()> {
    layer(circuit, GateKind::Ry(-FRAC_PI_2))?;
    layer(circuit, GateKind::X)?;
    circuit.append_macro(mcz)?;
    layer(circuit, GateKind::X)?;
    layer(circuit, GateKind::Ry(FRAC_PI_2))
}

/// Phase oracle flipping the sign of every listed label (a label listed an
/// even number of times cancels out). One n-CZ per entry.
pub fn build_oracle(n: usize, solutions: &[usize], graph: &ConnectivityGraph) -> Result<Circuit> {
    if solutions.is_empty() {
        return Err(Error::InvalidArgument(
            "oracle needs at least one solution".into(),
        ));
    }
    let mcz = mcz_for(n, graph)?;
    let mut circuit = Circuit::new(&vec![2; n])?;
    push_oracle(&mut circuit, &mcz, solutions)?;
    Ok(circuit)
}

/// Inversion about the mean, `-(2|psi0><psi0| - I)`: `RY(-pi/2)` layer,
/// X-conjugated n-CZ, `RY(pi/2)` layer.
pub fn build_diffusion(n: usize, graph: &ConnectivityGraph) -> Result<Circuit> {
    let mcz = mcz_for(n, graph)?;
    let mut circuit = Circuit::new(&vec![2; n])?;
    push_diffusion(&mut circuit, &mcz)?;
    Ok(circuit)
}

/// Parameters of one search.
#[derive(Debug, Clone, PartialEq)]
pub struct GroverSpec {
    pub n: usize,
    pub solutions: Vec<usize>,
    pub cycles: usize,
    pub graph: ConnectivityGraph,
}

impl GroverSpec {
    /// Single-solution search on a chain.
    pub fn chain(n: usize, solution: usize, cycles: usize) -> Self {
        GroverSpec {
            n,
            solutions: vec![solution],
            cycles,
            graph: ConnectivityGraph::path(n),
        }
    }
}

/// `RY(pi/2)` on every wire, then `cycles` rounds of oracle and diffusion.
/// Every n-CZ instance is a marked macro gate.
pub fn grover_circuit(spec: &GroverSpec) -> Result<Circuit> {
    if spec.cycles == 0 {
        return Err(Error::InvalidArgument(
            "cycle count must be at least 1".into(),
        ));
    }
    if spec.solutions.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one solution is required".into(),
        ));
    }
    let mcz = mcz_for(spec.n, &spec.graph)?;
    let mut circuit = Circuit::new(&vec![2; spec.n])?;
    layer(&mut circuit, GateKind::Ry(FRAC_PI_2))?;
    for _ in 0..spec.cycles {
        push_oracle(&mut circuit, &mcz, &spec.solutions)?;
        push_diffusion(&mut circuit, &mcz)?;
    }
    Ok(circuit)
}

/// Success probability with per-n-CZ fidelity `f` over `cycles` rounds:
/// `F^{2M} sin^2((2M+1) asin(2^{-n/2})) + (1 - F^{2M}) / 2^n`.
pub fn asp_model(n: usize, cycles: usize, f: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::InvalidArgument(format!(
            "fidelity {f} outside [0, 1]"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(asp_model_unchecked(n, cycles, f))
}

pub(crate) fn asp_model_unchecked(n: usize, cycles: usize, f: f64) -> f64 {
    let size = (n as f64).exp2();
    let m = cycles as f64;
    let keep = f.powf(2.0 * m);
    let ideal = ((2.0 * m + 1.0) * size.sqrt().recip().asin()).sin().powi(2);
    keep * ideal + (1.0 - keep) / size
}

/// Result of a sampled search.
#[derive(Debug, Clone, PartialEq)]
pub struct GroverRun {
    /// Fraction of shots landing on any solution.
    pub asp: f64,
    /// One-sigma binomial standard error of `asp`.
    pub stderr: f64,
    pub shots: u64,
    /// Counts per binary outcome label.
    pub counts: Vec<u64>,
}

/// Samples `shots` measurements of the search; with `noise` each shot is a
/// trajectory of the depolarize-on-failure model.
pub fn run_grover(
    spec: &GroverSpec,
    noise: Option<NoiseParams>,
    shots: u64,
    seed: u64,
) -> Result<GroverRun> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let circuit = grover_circuit(spec)?;
    let sampler = TrajectorySampler::new(
        &circuit,
        noise.unwrap_or_else(NoiseParams::ideal),
        &vec![0; spec.n],
    )?;
    let counts = sampler.counts(shots, seed);
    let mut hit = vec![false; counts.len()];
    for &s in &spec.solutions {
        hit[s] = true;
    }
    let hits: u64 = counts
        .iter()
        .zip(&hit)
        .filter(|(_, &h)| h)
        .map(|(c, _)| c)
        .sum();
    let asp = hits as f64 / shots as f64;
    Ok(GroverRun {
        asp,
        stderr: (asp * (1.0 - asp) / shots as f64).sqrt(),
        shots,
        counts,
    })
}

/// Sampled ASP for `cycles = 1..=max_cycles`. Point `M` uses child seed `M`.
pub fn asp_curve(
    spec: &GroverSpec,
    max_cycles: usize,
    noise: Option<NoiseParams>,
    shots: u64,
    seed: u64,
) -> Result<AspCurve> {
    let points = (1..=max_cycles)
        .map(|m| {
            let spec = GroverSpec {
                cycles: m,
                ..spec.clone()
            };
            let run = run_grover(&spec, noise, shots, derive_seed(seed, m as u64))?;
            Ok(AspPoint {
                cycles: m,
                asp: run.asp,
                shots,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    AspCurve::new(points)
}

/// Output distribution for every single-solution encoding.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionMatrix {
    pub n: usize,
    /// `rows[j][k]`: probability of reading `k` with solution `j` encoded.
    pub rows: Vec<Vec<f64>>,
}

impl SolutionMatrix {
    /// Mean success probability over all encodings.
    pub fn average_asp(&self) -> f64 {
        let diag: f64 = self.rows.iter().enumerate().map(|(j, r)| r[j]).sum();
        diag / self.rows.len() as f64
    }

    pub fn to_tsv(&self) -> String {
        let n = self.n;
        let mut out = String::from("solution");
        for k in 0..self.rows.len() {
            let _ = write!(out, "\t{}", format_label(k, n));
        }
        out.push('\n');
        for (j, row) in self.rows.iter().enumerate() {
            out.push_str(&format_label(j, n));
            for p in row {
                let _ = write!(out, "\t{p:.6}");
            }
            out.push('\n');
        }
        out
    }
}

/// Runs every one of the `2^n` single-solution searches. Row `j` uses child
/// seed `j`.
pub fn solution_matrix(
    n: usize,
    cycles: usize,
    graph: &ConnectivityGraph,
    noise: Option<NoiseParams>,
    shots: u64,
    seed: u64,
) -> Result<SolutionMatrix> {
    let rows = (0..1usize << n)
        .map(|j| {
            let spec = GroverSpec {
                n,
                solutions: vec![j],
                cycles,
                graph: graph.clone(),
            };
            let run = run_grover(&spec, noise, shots, derive_seed(seed, j as u64))?;
            Ok(run
                .counts
                .iter()
                .map(|&c| c as f64 / shots as f64)
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SolutionMatrix { n, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(parse_label("0100", 4).unwrap(), 4);
        assert_eq!(format_label(4, 4), "0100");
        assert!(parse_label("012", 3).is_err());
        assert!(parse_label("01", 3).is_err());
    }

    #[test]
    fn model_examples() {
        assert!((asp_model(2, 1, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((asp_model(4, 1, 0.0).unwrap() - 0.0625).abs() < 1e-15);
        assert!((asp_model(4, 2, 0.844).unwrap() - 0.49).abs() < 5e-3);
        assert!(asp_model(4, 1, 1.1).is_err());
    }

    #[test]
    fn two_qubit_search_is_exact() {
        for s in 0..4 {
            let run = run_grover(&GroverSpec::chain(2, s, 1), None, 1000, 1).unwrap();
            assert_eq!(run.asp, 1.0);
        }
    }

    #[test]
    fn macro_count() {
        let c = grover_circuit(&GroverSpec::chain(4, 3, 3)).unwrap();
        assert_eq!(c.macros().len(), 6);
        assert!(grover_circuit(&GroverSpec::chain(4, 3, 0)).is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_eq!(derive_seed(7, 3), derive_seed(7, 3));
    }
}
