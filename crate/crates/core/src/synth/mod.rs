//! QuAND-based synthesis of multiply-controlled gates.
//!
//! A QuAND(child, parent) is `X` on the child followed by `SWAP1120` on
//! `(child, parent)`. On binary inputs the parent ends up holding the AND of
//! both bits while the child keeps the rest of the information in levels
//! `0`, `1` and `2`. An n-CZ is built by folding each subtree of a two-rooted
//! [`BranchingTree`] onto its root, applying CZ between the roots, and
//! undoing the fold with reverse QuANDs.

mod tree;

use std::f64::consts::PI;
use std::fmt::Write as _;

pub use tree::{build_branching_tree, build_branching_tree_within};

use crate::error::{Error, Result};
use crate::ir::{BranchingTree, Circuit, ConnectivityGraph, DepthMode, GateKind, Op};

/// One QuAND between a child (dim 3) and its parent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuandBlock {
    pub child: usize,
    pub parent: usize,
    pub theta: f64,
}

/// `X(child)` then `SWAP1120(theta)` on `(child, parent)`.
pub fn quand(child: usize, parent: usize, theta: f64) -> Vec<Op> {
    vec![
        Op::new(GateKind::X, [child]),
        Op::new(GateKind::Swap1120 { theta }, [child, parent]),
    ]
}

/// Inverse of [`quand`] on binary inputs: `SWAP1120(theta + pi)` then
/// `X(child)`.
pub fn reverse_quand(child: usize, parent: usize, theta: f64) -> Vec<Op> {
    vec![
        Op::new(GateKind::Swap1120 { theta: theta + PI }, [child, parent]),
        Op::new(GateKind::X, [child]),
    ]
}

/// Gate applied between the two halves of a synthesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetGate {
    /// Controlled-Z on the root edge.
    Z,
    /// Controlled-X from the control root onto the target.
    X,
}

/// Embedding schedule, centre gate and derived recovery.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisPlan {
    pub tree: BranchingTree,
    /// QuAND blocks per layer; blocks within a layer touch disjoint wires.
    pub embed_layers: Vec<Vec<QuandBlock>>,
    pub center: Op,
}

impl SynthesisPlan {
    pub fn embed_order(&self) -> Vec<QuandBlock> {
        self.embed_layers.iter().flatten().copied().collect()
    }

    /// The embedding reversed, each block with its phase shifted by pi.
    pub fn recovery_order(&self) -> Vec<QuandBlock> {
        self.embed_layers
            .iter()
            .rev()
            .flat_map(|layer| layer.iter().rev())
            .map(|b| QuandBlock {
                theta: b.theta + PI,
                ..*b
            })
            .collect()
    }

    /// Sidecar text: parentage, layers and statistics of `circuit`.
    pub fn to_text(&self, circuit: &Circuit) -> String {
        let t = &self.tree;
        let mut out = String::new();
        let _ = writeln!(out, "root_edge\t{}\t{}", t.root_edge.0, t.root_edge.1);
        let _ = writeln!(out, "height\t{}", t.height());
        out.push_str("# vertex\troot\tparent\tdepth\n");
        for v in 0..t.num_vertices() {
            let Some(root) = t.tree_of[v] else {
                let _ = writeln!(out, "{v}\t-\t-\t-");
                continue;
            };
            let parent = t.parent[v].map_or("-".to_string(), |p| p.to_string());
            let _ = writeln!(out, "{v}\t{root}\t{parent}\t{}", t.depth[v]);
        }
        out.push_str("# layer\tchild->parent ...\n");
        for (i, layer) in self.embed_layers.iter().enumerate() {
            let blocks: Vec<String> = layer
                .iter()
                .map(|b| format!("{}->{}", b.child, b.parent))
                .collect();
            let _ = writeln!(out, "embed{i}\t{}", blocks.join(" "));
        }
        let wires: Vec<String> = self.center.wires.iter().map(|w| w.to_string()).collect();
        let _ = writeln!(
            out,
            "center\t{}\t{}",
            self.center.gate.name(),
            wires.join(" ")
        );
        let counts = circuit.gate_count();
        let _ = writeln!(out, "multi_wire_gates\t{}", counts.multi_wire);
        let _ = writeln!(out, "single_wire_gates\t{}", counts.single_wire);
        let _ = writeln!(
            out,
            "depth_multi_wire\t{}",
            circuit.depth(DepthMode::MultiWireOnly)
        );
        let _ = writeln!(out, "depth_all\t{}", circuit.depth(DepthMode::AllGates));
        out
    }
}

/// A synthesized circuit with its plan. Ops `0..embed_end` form the
/// embedding half.
#[derive(Debug, Clone, PartialEq)]
pub struct Synthesis {
    pub circuit: Circuit,
    pub plan: SynthesisPlan,
    pub embed_end: usize,
}

impl Synthesis {
    /// The embedding half on its own.
    pub fn embedding(&self) -> Circuit {
        self.circuit.truncated(self.embed_end)
    }
}

/// Greedy layering of the QuAND blocks of `tree`.
///
/// A block (v, parent(v)) is ready once every child of `v` has been folded
/// in. Each parent takes its children strictly in ascending order, one per
/// layer.
pub fn schedule(tree: &BranchingTree) -> Vec<Vec<QuandBlock>> {
    let n = tree.num_vertices();
    let mut done = vec![false; n];
    let mut next_child = vec![0usize; n];
    let mut remaining = tree.non_roots().len();
    let mut layers = Vec::new();
    while remaining > 0 {
        let mut used = vec![false; n];
        let mut layer = Vec::new();
        let snapshot = done.clone();
        for p in 0..n {
            let Some(&c) = tree.children[p].get(next_child[p]) else {
                continue;
            };
            let ready = tree.children[c].iter().all(|&g| snapshot[g]);
            if ready && !used[p] && !used[c] {
                used[p] = true;
                used[c] = true;
                layer.push(QuandBlock {
                    child: c,
                    parent: p,
                    theta: 0.0,
                });
                next_child[p] += 1;
                done[c] = true;
                remaining -= 1;
            }
        }
        assert!(!layer.is_empty(), "tree schedule stalled");
        layers.push(layer);
    }
    layers
}

/// Assembles embedding, centre gate and recovery into a circuit over
/// `num_wires` wires. Non-root tree members become qutrits.
fn assemble(num_wires: usize, tree: BranchingTree, center: Op) -> Result<Synthesis> {
    let mut dims = vec![2; num_wires];
    for v in tree.non_roots() {
        dims[v] = 3;
    }
    let plan = SynthesisPlan {
        embed_layers: schedule(&tree),
        tree,
        center,
    };
    let mut circuit = Circuit::new(&dims)?;
    for b in plan.embed_order() {
        circuit.extend_ops(quand(b.child, b.parent, b.theta))?;
    }
    let embed_end = circuit.len();
    circuit.push_op(plan.center.clone())?;
    // recovery blocks already carry theta + pi; undo the shift for reverse_quand
    for b in plan.recovery_order() {
        circuit.extend_ops(reverse_quand(b.child, b.parent, b.theta - PI))?;
    }
    Ok(Synthesis {
        circuit,
        plan,
        embed_end,
    })
}

/// n-CZ over every vertex of `graph`.
pub fn synth_mcz_tree(graph: &ConnectivityGraph) -> Result<Synthesis> {
    synth_mcz_with_roots(graph, None)
}

/// n-CZ over every vertex of `graph` with an optional fixed root edge.
pub fn synth_mcz_with_roots(
    graph: &ConnectivityGraph,
    root_edge: Option<(usize, usize)>,
) -> Result<Synthesis> {
    let tree = build_branching_tree(graph, root_edge)?;
    mcz_from_tree(graph.num_vertices(), tree)
}

fn mcz_from_tree(num_wires: usize, tree: BranchingTree) -> Result<Synthesis> {
    let (u, v) = tree.root_edge;
    assemble(num_wires, tree, Op::new(GateKind::Cz, [u, v]))
}

/// n-CZ on a chain `0 - 1 - ... - n-1` split after the `k`-th wire (1-based),
/// so wires `k-1` and `k` are the roots. Defaults to `k = ceil(n / 2)`.
pub fn synth_mcz_chain(n: usize, k: Option<usize>) -> Result<Synthesis> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "chain n-CZ needs n >= 2, got {n}"
        )));
    }
    let k = k.unwrap_or(n.div_ceil(2));
    if !(1..n).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "split k = {k} outside 1..{n}"
        )));
    }
    let parent = (0..n)
        .map(|i| match i {
            i if i + 1 < k => Some(i + 1),
            i if i > k => Some(i - 1),
            _ => None,
        })
        .collect();
    let tree = BranchingTree::from_parents((k - 1, k), parent)?;
    mcz_from_tree(n, tree)
}

/// Multi-controlled `U` with `controls` and a single `target`; other wires
/// are idle.
///
/// For `U = Z` the controls and target are folded as one n-CZ over the
/// subgraph they induce. For `U = X` all controls fold onto one root adjacent
/// to `target` (the shallowest such tree, lowest root index on ties) and a
/// CNOT from that root drives the target.
pub fn synth_mcu(
    graph: &ConnectivityGraph,
    controls: &[usize],
    target: usize,
    gate: TargetGate,
) -> Result<Synthesis> {
    let n = graph.num_vertices();
    if controls.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one control is required".into(),
        ));
    }
    let mut members = vec![false; n];
    for &c in controls.iter().chain([&target]) {
        if c >= n {
            return Err(Error::WireOutOfRange { wire: c, len: n });
        }
        if std::mem::replace(&mut members[c], true) {
            return Err(Error::InvalidArgument(format!(
                "wire {c} listed twice among controls and target"
            )));
        }
    }
    match gate {
        TargetGate::Z => {
            let tree = build_branching_tree_within(graph, &members, None)?;
            mcz_from_tree(n, tree)
        }
        TargetGate::X => {
            members[target] = false;
            let mut best: Option<BranchingTree> = None;
            for r in graph.neighbors(target).filter(|&r| members[r]) {
                if let Some(t) = tree::single_tree(graph, &members, r, target) {
                    if best.as_ref().is_none_or(|b| t.height() < b.height()) {
                        best = Some(t);
                    }
                }
            }
            let tree = best.ok_or_else(|| {
                Error::Synthesis(format!(
                    "controls cannot be folded onto a neighbour of target {target}"
                ))
            })?;
            let root = tree.root_edge.0;
            assemble(n, tree, Op::new(GateKind::Cnot, [root, target]))
        }
    }
}

/// Generalized Toffoli: every other vertex controls `target`. Built as
/// `H(target)`, n-CZ, `H(target)`.
pub fn synth_toffoli(graph: &ConnectivityGraph, target: usize) -> Result<Synthesis> {
    let n = graph.num_vertices();
    if target >= n {
        return Err(Error::WireOutOfRange {
            wire: target,
            len: n,
        });
    }
    let mcz = synth_mcz_tree(graph)?;
    let mut circuit = Circuit::new(&mcz.circuit.dims())?;
    circuit.push(GateKind::H, &[target])?;
    circuit.append_circuit(&mcz.circuit)?;
    circuit.push(GateKind::H, &[target])?;
    Ok(Synthesis {
        circuit,
        plan: mcz.plan,
        embed_end: mcz.embed_end + 1,
    })
}

/// Generalized Fredkin: every other vertex controls a swap of the adjacent
/// pair `(t1, t2)`. Built as `CNOT(t2 -> t1)`, Toffoli onto `t2` (with `t1`
/// among its controls), `CNOT(t2 -> t1)`.
pub fn synth_fredkin(graph: &ConnectivityGraph, targets: (usize, usize)) -> Result<Synthesis> {
    let (t1, t2) = targets;
    if !graph.has_edge(t1, t2) {
        return Err(Error::Synthesis(format!(
            "fredkin targets ({t1}, {t2}) must be adjacent"
        )));
    }
    let toffoli = synth_toffoli(graph, t2)?;
    let mut circuit = Circuit::new(&toffoli.circuit.dims())?;
    circuit.push(GateKind::Cnot, &[t2, t1])?;
    circuit.append_circuit(&toffoli.circuit)?;
    circuit.push(GateKind::Cnot, &[t2, t1])?;
    Ok(Synthesis {
        circuit,
        plan: toffoli.plan,
        embed_end: toffoli.embed_end + 1,
    })
}
