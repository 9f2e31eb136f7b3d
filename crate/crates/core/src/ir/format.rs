//! Circuit file format.
//!
//! ```json
//! {"wires": [{"id": 0, "dim": 3}, {"id": 1, "dim": 2}],
//!  "ops": [{"gate": "X", "wires": [0]},
//!          {"gate": "SWAP1120", "wires": [0, 1], "theta": 0.0}]}
//! ```
//!
//! Optional keys: `"angle"` (RY, PHASE), `"level"` (PHASE), top-level
//! `"label"` (`"synthesized"` or `"reference"`) and `"macros"` (list of
//! `[start, end)` op-index spans). Basis labels read wire 0 as the most
//! significant digit.

use serde::{Deserialize, Serialize};

use super::{Circuit, CircuitLabel, GateKind, Op};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WireRecord {
    pub id: usize,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpRecord {
    pub gate: String,
    pub wires: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitFile {
    pub wires: Vec<WireRecord>,
    pub ops: Vec<OpRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub macros: Vec<[usize; 2]>,
}

impl From<&Op> for OpRecord {
    fn from(op: &Op) -> Self {
        let mut rec = OpRecord {
            gate: op.gate.name().to_string(),
            wires: op.wires.clone(),
            theta: None,
            angle: None,
            level: None,
        };
        match op.gate {
            GateKind::Ry(a) => rec.angle = Some(a),
            GateKind::Phase { level, angle } => {
                rec.level = Some(level);
                rec.angle = Some(angle);
            }
            GateKind::Swap1120 { theta } => rec.theta = Some(theta),
            _ => {}
        }
        rec
    }
}

impl OpRecord {
    fn gate_kind(&self) -> Result<GateKind> {
        let need_angle = || {
            self.angle
                .ok_or_else(|| Error::Parse(format!("{} requires \"angle\"", self.gate)))
        };
        Ok(match self.gate.as_str() {
            "X" => GateKind::X,
            "H" => GateKind::H,
            "RY" => GateKind::Ry(need_angle()?),
            "PHASE" => GateKind::Phase {
                level: self
                    .level
                    .ok_or_else(|| Error::Parse("PHASE requires \"level\"".into()))?,
                angle: need_angle()?,
            },
            "CZ" => GateKind::Cz,
            "CNOT" => GateKind::Cnot,
            "SWAP1120" => GateKind::Swap1120 {
                theta: self.theta.unwrap_or(0.0),
            },
            "REF_MCX" => GateKind::RefMcx,
            "REF_MCZ" => GateKind::RefMcz,
            other => return Err(Error::Parse(format!("unknown gate \"{other}\""))),
        })
    }
}

impl Circuit {
    pub fn to_file(&self) -> CircuitFile {
        CircuitFile {
            wires: self
                .wires()
                .iter()
                .map(|w| WireRecord {
                    id: w.id,
                    dim: w.dim,
                })
                .collect(),
            ops: self.ops().iter().map(OpRecord::from).collect(),
            label: Some(
                match self.label() {
                    CircuitLabel::Synthesized => "synthesized",
                    CircuitLabel::Reference => "reference",
                }
                .to_string(),
            ),
            macros: self.macros().iter().map(|r| [r.start, r.end]).collect(),
        }
    }

    pub fn from_file(file: &CircuitFile) -> Result<Self> {
        let mut dims = vec![0; file.wires.len()];
        for w in &file.wires {
            if w.id >= dims.len() || dims[w.id] != 0 {
                return Err(Error::Parse(format!(
                    "wire ids must be unique and contiguous from 0 (saw id {})",
                    w.id
                )));
            }
            dims[w.id] = w.dim;
        }
        let label = match file.label.as_deref() {
            Some("synthesized") => CircuitLabel::Synthesized,
            Some("reference") => CircuitLabel::Reference,
            Some(other) => return Err(Error::Parse(format!("unknown label \"{other}\""))),
            None if file.ops.iter().any(|o| o.gate.starts_with("REF_")) => CircuitLabel::Reference,
            None => CircuitLabel::Synthesized,
        };
        let mut circuit = Circuit::with_label(&dims, label)?;
        for rec in &file.ops {
            circuit.push(rec.gate_kind()?, &rec.wires)?;
        }
        for &[start, end] in &file.macros {
            circuit.mark_macro(start..end)?;
        }
        Ok(circuit)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("circuit serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CircuitFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&file)
    }
}
