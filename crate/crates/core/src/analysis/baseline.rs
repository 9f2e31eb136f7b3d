use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ir::{Circuit, ConnectivityGraph, DepthMode, GateKind};
use crate::synth::{synth_mcz_chain, synth_mcz_tree};

/// How the ancilla-based baseline combines controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcArrangement {
    /// Pairwise reduction, logarithmic depth.
    Tree,
    /// One control at a time, as on a chain.
    Ladder,
}

/// Ancilla-based multi-controlled X built from 3-wire Toffolis.
///
/// Wires: controls `0..c`, ancillas `c..2c-2`, target `2c-2`.
#[derive(Debug, Clone, PartialEq)]
pub struct NcDecomposition {
    pub circuit: Circuit,
    pub controls: Vec<usize>,
    pub ancillas: Vec<usize>,
    pub target: usize,
}

/// Computes pairwise ANDs onto fresh ancillas, flips the target from the
/// last pair, then uncomputes. Uses `2c - 3` Toffolis and `c - 2` ancillas.
/// The Toffolis are reference `REF_MCX` units.
pub fn nc_ancilla_decomposition(c: usize, arrangement: NcArrangement) -> Result<NcDecomposition> {
    if c < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 controls, got {c}"
        )));
    }
    let controls: Vec<usize> = (0..c).collect();
    let ancillas: Vec<usize> = (c..2 * c - 2).collect();
    let target = 2 * c - 2;
    let mut compute = Vec::new();
    let mut fresh = ancillas.iter().copied();
    match arrangement {
        NcArrangement::Tree => {
            let mut queue: VecDeque<usize> = controls.iter().copied().collect();
            while queue.len() > 2 {
                let (x, y) = (queue.pop_front().unwrap(), queue.pop_front().unwrap());
                let a = fresh.next().expect("c - 2 ancillas suffice");
                compute.push([x, y, a]);
                queue.push_back(a);
            }
            let last = [queue[0], queue[1], target];
            finish(c, compute, last, controls, ancillas, target)
        }
        NcArrangement::Ladder => {
            let mut acc = controls[0];
            for &ctl in &controls[1..c - 1] {
                let a = fresh.next().expect("c - 2 ancillas suffice");
                compute.push([acc, ctl, a]);
                acc = a;
            }
            let last = [acc, controls[c - 1], target];
            finish(c, compute, last, controls, ancillas, target)
        }
    }
}

fn finish(
    c: usize,
    compute: Vec<[usize; 3]>,
    last: [usize; 3],
    controls: Vec<usize>,
    ancillas: Vec<usize>,
    target: usize,
) -> Result<NcDecomposition> {
    let mut circuit = Circuit::reference(&vec![2; 2 * c - 1])?;
    for t in compute.iter().chain([&last]).chain(compute.iter().rev()) {
        circuit.push(GateKind::RefMcx, t)?;
    }
    Ok(NcDecomposition {
        circuit,
        controls,
        ancillas,
        target,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    AllToAll,
    Chain,
}

/// Asymptotic class of a depth or size column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Growth {
    Log2,
    Log3,
    Linear,
    Quadratic,
}

impl Growth {
    pub fn label(&self) -> &'static str {
        match self {
            Growth::Log2 => "log2(n)",
            Growth::Log3 => "log3(n)",
            Growth::Linear => "n",
            Growth::Quadratic => "n^2",
        }
    }

    pub fn eval(&self, n: usize) -> f64 {
        let x = n as f64;
        match self {
            Growth::Log2 => x.log2(),
            Growth::Log3 => x.log(3.0),
            Growth::Linear => x,
            Growth::Quadratic => x * x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AncillaFormula {
    Zero,
    One,
    NMinus2,
}

impl AncillaFormula {
    pub fn label(&self) -> &'static str {
        match self {
            AncillaFormula::Zero => "0",
            AncillaFormula::One => "1",
            AncillaFormula::NMinus2 => "n-2",
        }
    }

    pub fn eval(&self, n: usize) -> usize {
        match self {
            AncillaFormula::Zero => 0,
            AncillaFormula::One => 1,
            AncillaFormula::NMinus2 => n.saturating_sub(2),
        }
    }
}

/// Counts taken from an actual synthesized circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Measured {
    pub depth: usize,
    pub size: usize,
    pub ancilla: usize,
}

/// One scheme of the comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionRow {
    pub scheme: &'static str,
    pub depth: Growth,
    pub size: Growth,
    pub constant: &'static str,
    pub ancilla: AncillaFormula,
    pub control: &'static str,
    pub measured: Option<Measured>,
}

const THIS_WORK_CONTROL: &str = "|11><20|+|20><11|";

fn row(
    scheme: &'static str,
    depth: Growth,
    size: Growth,
    constant: &'static str,
    ancilla: AncillaFormula,
    control: &'static str,
) -> DecompositionRow {
    DecompositionRow {
        scheme,
        depth,
        size,
        constant,
        ancilla,
        control,
        measured: None,
    }
}

/// Depth/size/ancilla rows for an `n`-qubit Toffoli under `topology`.
///
/// Rows for this work and for the ancilla baseline carry counts measured on
/// circuits built here: the QuAND n-CZ (on a chain, or on a heap-ordered
/// binary tree standing in for all-to-all coupling) and the Toffoli-unit
/// baseline with `n` controls.
pub fn comparison_table(n: usize, topology: Topology) -> Result<Vec<DecompositionRow>> {
    use AncillaFormula::*;
    use Growth::*;
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "table needs n >= 2, got {n}"
        )));
    }
    let mut rows = match topology {
        Topology::AllToAll => vec![
            row("Nielsen and Chuang", Log2, Linear, "12", NMinus2, "Qubits"),
            row(
                "He et al. (measurement)",
                Log2,
                Linear,
                "4",
                NMinus2,
                "Qubits",
            ),
            row("He et al.", Linear, Linear, "24", One, "Qubits"),
            row("Barenco et al.", Quadratic, Quadratic, "48", Zero, "Qubits"),
            row(
                "Gokhale et al.",
                Log3,
                Linear,
                "2",
                Zero,
                "Three-qutrit control",
            ),
            row(
                "Ralph et al.",
                Linear,
                Linear,
                "2",
                Zero,
                "n-level qudit control",
            ),
            row("This work", Log2, Linear, "2", Zero, THIS_WORK_CONTROL),
        ],
        Topology::Chain => vec![
            row(
                "Nielsen and Chuang",
                Linear,
                Linear,
                ">12",
                NMinus2,
                "Qubits",
            ),
            row(
                "He et al. (measurement)",
                Linear,
                Linear,
                ">4",
                NMinus2,
                "Qubits",
            ),
            row("Inada et al.", Linear, Linear, "2", Zero, "Qutrit control"),
            row("This work", Linear, Linear, "2", Zero, THIS_WORK_CONTROL),
        ],
    };
    let arrangement = match topology {
        Topology::AllToAll => NcArrangement::Tree,
        Topology::Chain => NcArrangement::Ladder,
    };
    let nc = nc_ancilla_decomposition(n, arrangement)?;
    rows[0].measured = Some(Measured {
        depth: nc.circuit.depth(DepthMode::MultiWireOnly),
        size: nc.circuit.gate_count().multi_wire,
        ancilla: nc.ancillas.len(),
    });
    let ours = match topology {
        Topology::AllToAll => synth_mcz_tree(&ConnectivityGraph::binary_tree(n)?)?,
        Topology::Chain => synth_mcz_chain(n, None)?,
    };
    let last = rows.len() - 1;
    rows[last].measured = Some(Measured {
        depth: ours.circuit.depth(DepthMode::MultiWireOnly),
        size: ours.circuit.gate_count().multi_wire,
        ancilla: 0,
    });
    Ok(rows)
}

/// Tab-separated rendering of [`comparison_table`] rows for one `n`.
pub fn comparison_tsv(n: usize, rows: &[DecompositionRow], header: bool) -> String {
    let mut out = String::new();
    if header {
        out.push_str(
            "n\tscheme\tdepth\tsize\tconstant\tancilla\tcontrol\tdepth_at_n\tsize_at_n\tancilla_at_n\tmeasured_depth\tmeasured_size\tmeasured_ancilla\n",
        );
    }
    for r in rows {
        let (md, ms, ma) = r
            .measured
            .map_or(("-".into(), "-".into(), "-".into()), |m| {
                (
                    m.depth.to_string(),
                    m.size.to_string(),
                    m.ancilla.to_string(),
                )
            });
        let _ = writeln!(
            out,
            "{n}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.3}\t{:.3}\t{}\t{md}\t{ms}\t{ma}",
            r.scheme,
            r.depth.label(),
            r.size.label(),
            r.constant,
            r.ancilla.label(),
            r.control,
            r.depth.eval(n),
            r.size.eval(n),
            r.ancilla.eval(n),
        );
    }
    out
}
