//! Circuit intermediate representation.
//!
//! A [`Circuit`] is a register of wires, each of dimension 2 or 3, and an
//! ordered list of gate applications. Basis labels are read with wire 0 as the
//! most significant digit, so `|s_0 s_1 ... s_{n-1}>` lists wires left to right.

mod format;
mod graph;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

pub use format::{CircuitFile, OpRecord, WireRecord};
pub use graph::{BranchingTree, ConnectivityGraph};

use crate::error::{Error, Result};

/// A register position and its local dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Wire {
    pub id: usize,
    pub dim: usize,
}

/// Gate alphabet.
///
/// Single-qubit gates act on the `{|0>, |1>}` subspace of their wire and
/// leave `|2>` untouched on qutrit wires.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    X,
    H,
    /// Rotation about the Y axis by `angle` radians.
    Ry(f64),
    /// Multiplies the amplitude of `|level>` on the wire by `exp(i angle)`.
    Phase {
        level: u8,
        angle: f64,
    },
    /// Phase −1 on `|1,1>`.
    Cz,
    /// Wires are `(control, target)`.
    Cnot,
    /// Exchange of `|1,1>` and `|2,0>` on `(child, parent)`, with drive phase
    /// `theta`: `|1,1> -> -i e^{i theta} |2,0>`, `|2,0> -> -i e^{-i theta} |1,1>`.
    Swap1120 {
        theta: f64,
    },
    /// Reference multi-controlled X. Wires are `controls..., target`.
    RefMcx,
    /// Reference multi-controlled Z over all listed wires.
    RefMcz,
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::H => "H",
            GateKind::Ry(_) => "RY",
            GateKind::Phase { .. } => "PHASE",
            GateKind::Cz => "CZ",
            GateKind::Cnot => "CNOT",
            GateKind::Swap1120 { .. } => "SWAP1120",
            GateKind::RefMcx => "REF_MCX",
            GateKind::RefMcz => "REF_MCZ",
        }
    }

    pub fn is_reference(&self) -> bool {
        matches!(self, GateKind::RefMcx | GateKind::RefMcz)
    }

    pub(crate) fn check_arity(&self, got: usize) -> Result<()> {
        let (ok, expected) = match self {
            GateKind::X | GateKind::H | GateKind::Ry(_) | GateKind::Phase { .. } => (got == 1, "1"),
            GateKind::Cz | GateKind::Cnot | GateKind::Swap1120 { .. } => (got == 2, "2"),
            GateKind::RefMcx => (got >= 2, ">= 2"),
            GateKind::RefMcz => (got >= 1, ">= 1"),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Arity {
                gate: self.name(),
                expected,
                got,
            })
        }
    }
}

/// One gate application.
#[derive(Debug, Clone, PartialEq)]
pub struct Op {
    pub gate: GateKind,
    pub wires: Vec<usize>,
}

impl Op {
    pub fn new(gate: GateKind, wires: impl Into<Vec<usize>>) -> Self {
        Op {
            gate,
            wires: wires.into(),
        }
    }

    pub fn is_multi_wire(&self) -> bool {
        self.wires.len() > 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CircuitLabel {
    /// Built only from the native gate set; reference gates are rejected.
    #[default]
    Synthesized,
    Reference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepthMode {
    AllGates,
    MultiWireOnly,
}

/// Gate counts split by arity and by gate name.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GateCounts {
    pub multi_wire: usize,
    pub single_wire: usize,
    pub by_kind: BTreeMap<&'static str, usize>,
}

impl GateCounts {
    pub fn total(&self) -> usize {
        self.multi_wire + self.single_wire
    }
}

/// A gate circuit over a mixed-dimension register.
///
/// `macros` lists op-index ranges that form one synthesized macro gate (an
/// n-qubit CZ instance); the trajectory noise model attaches to them.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    wires: Vec<Wire>,
    ops: Vec<Op>,
    label: CircuitLabel,
    macros: Vec<Range<usize>>,
}

impl Circuit {
    /// Empty synthesized circuit over wires `0..dims.len()`.
    pub fn new(dims: &[usize]) -> Result<Self> {
        Self::with_label(dims, CircuitLabel::Synthesized)
    }

    pub fn reference(dims: &[usize]) -> Result<Self> {
        Self::with_label(dims, CircuitLabel::Reference)
    }

    pub fn with_label(dims: &[usize], label: CircuitLabel) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::EmptyRegister);
        }
        let wires = dims
            .iter()
            .enumerate()
            .map(|(id, &dim)| {
                if dim == 2 || dim == 3 {
                    Ok(Wire { id, dim })
                } else {
                    Err(Error::InvalidDimension { index: id, dim })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Circuit {
            wires,
            ops: Vec::new(),
            label,
            macros: Vec::new(),
        })
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn num_wires(&self) -> usize {
        self.wires.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.wires.iter().map(|w| w.dim).collect()
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn label(&self) -> CircuitLabel {
        self.label
    }

    pub fn macros(&self) -> &[Range<usize>] {
        &self.macros
    }

    /// Appends one gate after validating arity, wire range and dimension rules.
    pub fn push(&mut self, gate: GateKind, wires: &[usize]) -> Result<&mut Self> {
        self.validate(&gate, wires)?;
        self.ops.push(Op::new(gate, wires));
        Ok(self)
    }

    pub fn push_op(&mut self, op: Op) -> Result<&mut Self> {
        self.validate(&op.gate, &op.wires)?;
        self.ops.push(op);
        Ok(self)
    }

    pub fn extend_ops<I: IntoIterator<Item = Op>>(&mut self, ops: I) -> Result<&mut Self> {
        for op in ops {
            self.push_op(op)?;
        }
        Ok(self)
    }

    fn validate(&self, gate: &GateKind, wires: &[usize]) -> Result<()> {
        gate.check_arity(wires.len())?;
        if gate.is_reference() && self.label == CircuitLabel::Synthesized {
            return Err(Error::ReferenceInSynthesized { gate: gate.name() });
        }
        for (i, &w) in wires.iter().enumerate() {
            if w >= self.wires.len() {
                return Err(Error::WireOutOfRange {
                    wire: w,
                    len: self.wires.len(),
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
            GateKind::Swap1120 { theta } => {
                if !theta.is_finite() {
                    return Err(Error::NonFiniteParameter { gate: gate.name() });
                }
                let child = wires[0];
                if self.wires[child].dim != 3 {
                    return Err(Error::NeedsQutrit {
                        gate: gate.name(),
                        wire: child,
                        dim: self.wires[child].dim,
                    });
                }
            }
            GateKind::Phase { level, angle } => {
                if !angle.is_finite() {
                    return Err(Error::NonFiniteParameter { gate: gate.name() });
                }
                let dim = self.wires[wires[0]].dim;
                if usize::from(level) >= dim {
                    return Err(Error::InvalidArgument(format!(
                        "PHASE level {level} does not exist on dim-{dim} wire {}",
                        wires[0]
                    )));
                }
            }
            GateKind::Ry(angle) if !angle.is_finite() => {
                return Err(Error::NonFiniteParameter { gate: gate.name() });
            }
            _ => {}
        }
        Ok(())
    }

    /// Appends every op of `other`, promoting wire dimensions to the larger of
    /// the two registers. Macro spans of `other` are carried over.
    pub fn append_circuit(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.num_wires() != self.num_wires() {
            return Err(Error::RegisterMismatch(format!(
                "cannot append a {}-wire circuit to a {}-wire circuit",
                other.num_wires(),
                self.num_wires()
            )));
        }
        if self.label == CircuitLabel::Synthesized {
            if let Some(op) = other.ops.iter().find(|op| op.gate.is_reference()) {
                return Err(Error::ReferenceInSynthesized {
                    gate: op.gate.name(),
                });
            }
        }
        for (mine, theirs) in self.wires.iter_mut().zip(&other.wires) {
            mine.dim = mine.dim.max(theirs.dim);
        }
        let offset = self.ops.len();
        self.ops.extend(other.ops.iter().cloned());
        self.macros.extend(
            other
                .macros
                .iter()
                .map(|r| r.start + offset..r.end + offset),
        );
        Ok(self)
    }

    /// Appends `other` and records the appended ops as a single macro gate.
    pub fn append_macro(&mut self, other: &Circuit) -> Result<&mut Self> {
        let start = self.ops.len();
        self.append_circuit(other)?;
        // Inner macro marks of `other` are replaced by the enclosing span.
        self.macros.retain(|r| r.end <= start);
        let end = self.ops.len();
        self.macros.push(start..end);
        Ok(self)
    }

    /// Marks `range` (op indices) as one macro gate.
    pub fn mark_macro(&mut self, range: Range<usize>) -> Result<&mut Self> {
        if range.start > range.end || range.end > self.ops.len() {
            return Err(Error::InvalidArgument(format!(
                "macro span {range:?} outside 0..{}",
                self.ops.len()
            )));
        }
        self.macros.push(range);
        Ok(self)
    }

    /// Raises the dimension of `wire` to 3.
    pub fn promote_to_qutrit(&mut self, wire: usize) -> Result<&mut Self> {
        let len = self.wires.len();
        let w = self
            .wires
            .get_mut(wire)
            .ok_or(Error::WireOutOfRange { wire, len })?;
        w.dim = 3;
        Ok(self)
    }

    /// The first `len` ops as a new circuit (macro marks fully inside are kept).
    pub fn truncated(&self, len: usize) -> Circuit {
        let len = len.min(self.ops.len());
        Circuit {
            wires: self.wires.clone(),
            ops: self.ops[..len].to_vec(),
            label: self.label,
            macros: self
                .macros
                .iter()
                .filter(|r| r.end <= len)
                .cloned()
                .collect(),
        }
    }

    /// Greedy as-soon-as-possible layering. Returns op indices per layer.
    ///
    /// In [`DepthMode::MultiWireOnly`] single-wire ops are left out of the
    /// layering entirely.
    pub fn layers(&self, mode: DepthMode) -> Vec<Vec<usize>> {
        let mut frontier = vec![0usize; self.wires.len()];
        let mut layers: Vec<Vec<usize>> = Vec::new();
        for (idx, op) in self.ops.iter().enumerate() {
            if mode == DepthMode::MultiWireOnly && !op.is_multi_wire() {
                continue;
            }
            let layer = op.wires.iter().map(|&w| frontier[w]).max().unwrap_or(0);
            for &w in &op.wires {
                frontier[w] = layer + 1;
            }
            if layers.len() <= layer {
                layers.resize_with(layer + 1, Vec::new);
            }
            layers[layer].push(idx);
        }
        layers
    }

    pub fn depth(&self, mode: DepthMode) -> usize {
        self.layers(mode).len()
    }

    pub fn gate_count(&self) -> GateCounts {
        let mut counts = GateCounts::default();
        for op in &self.ops {
            if op.is_multi_wire() {
                counts.multi_wire += 1;
            } else {
                counts.single_wire += 1;
            }
            *counts.by_kind.entry(op.gate.name()).or_default() += 1;
        }
        counts
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.wires.iter().map(|w| w.dim.to_string()).collect();
        writeln!(f, "circuit [{}] ({:?})", dims.join(","), self.label)?;
        for op in &self.ops {
            let wires: Vec<String> = op.wires.iter().map(|w| w.to_string()).collect();
            match op.gate {
                GateKind::Ry(a) => writeln!(f, "  RY({a}) {}", wires.join(" "))?,
                GateKind::Phase { level, angle } => {
                    writeln!(f, "  PHASE[{level}]({angle}) {}", wires.join(" "))?
                }
                GateKind::Swap1120 { theta } => {
                    writeln!(f, "  SWAP1120({theta}) {}", wires.join(" "))?
                }
                g => writeln!(f, "  {} {}", g.name(), wires.join(" "))?,
            }
        }
        Ok(())
    }
}
