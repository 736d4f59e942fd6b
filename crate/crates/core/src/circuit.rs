//! Gate lists and their JSON / OpenQASM 3 serializations.
//!
//! Qubit `q` is string position `q` (leftmost character is qubit 0), which
//! is the most significant bit of a computational basis index.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    Cx {
        control: usize,
        target: usize,
    },
    Cz(usize, usize),
    S(usize),
    Sdg(usize),
    H(usize),
    /// `(1 + iσ_y)/√2`, equal to `ry(-π/2)`.
    Uy(usize),
    /// `(1 - iσ_y)/√2`, equal to `ry(π/2)`.
    Uydg(usize),
    Ry(usize, f64),
    Rz(usize, f64),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::Cx { .. } => "cx",
            Gate::Cz(..) => "cz",
            Gate::S(_) => "s",
            Gate::Sdg(_) => "sdg",
            Gate::H(_) => "h",
            Gate::Uy(_) => "uy",
            Gate::Uydg(_) => "uydg",
            Gate::Ry(..) => "ry",
            Gate::Rz(..) => "rz",
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Cx { control, target } => vec![control, target],
            Gate::Cz(a, b) => vec![a, b],
            Gate::S(q) | Gate::Sdg(q) | Gate::H(q) | Gate::Uy(q) | Gate::Uydg(q) => vec![q],
            Gate::Ry(q, _) | Gate::Rz(q, _) => vec![q],
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Ry(_, t) | Gate::Rz(_, t) => Some(t),
            _ => None,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cx { .. } | Gate::Cz(..))
    }
}

#[derive(Serialize, Deserialize)]
struct GateRecord {
    gate: String,
    q: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    theta: Option<f64>,
}

impl TryFrom<GateRecord> for Gate {
    type Error = Error;

    fn try_from(rec: GateRecord) -> Result<Gate> {
        let arity = |n: usize| -> Result<()> {
            if rec.q.len() != n {
                return Err(Error::Format(format!(
                    "gate {} expects {n} qubits, got {}",
                    rec.gate,
                    rec.q.len()
                )));
            }
            Ok(())
        };
        let angle = || {
            rec.theta
                .ok_or_else(|| Error::Format(format!("gate {} needs theta", rec.gate)))
        };
        let gate = match rec.gate.as_str() {
            "cx" => {
                arity(2)?;
                Gate::Cx {
                    control: rec.q[0],
                    target: rec.q[1],
                }
            }
            "cz" => {
                arity(2)?;
                Gate::Cz(rec.q[0], rec.q[1])
            }
            "s" => {
                arity(1)?;
                Gate::S(rec.q[0])
            }
            "sdg" => {
                arity(1)?;
                Gate::Sdg(rec.q[0])
            }
            "h" => {
                arity(1)?;
                Gate::H(rec.q[0])
            }
            "uy" => {
                arity(1)?;
                Gate::Uy(rec.q[0])
            }
            "uydg" => {
                arity(1)?;
                Gate::Uydg(rec.q[0])
            }
            "ry" => {
                arity(1)?;
                Gate::Ry(rec.q[0], angle()?)
            }
            "rz" => {
                arity(1)?;
                Gate::Rz(rec.q[0], angle()?)
            }
            other => return Err(Error::UnknownGate(other.to_string())),
        };
        Ok(gate)
    }
}

impl From<&Gate> for GateRecord {
    fn from(g: &Gate) -> Self {
        GateRecord {
            gate: g.name().to_string(),
            q: g.qubits(),
            theta: g.angle(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let qubits = gate.qubits();
        if let Some(&q) = qubits.iter().find(|&&q| q >= self.num_qubits) {
            return Err(Error::Precondition(format!(
                "gate {} on qubit {q} in a {}-qubit circuit",
                gate.name(),
                self.num_qubits
            )));
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(Error::Precondition(format!(
                "gate {} repeats qubit {}",
                gate.name(),
                qubits[0]
            )));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        for g in &other.gates {
            self.push(*g)?;
        }
        Ok(())
    }

    pub fn count(&self, name: &str) -> usize {
        self.gates.iter().filter(|g| g.name() == name).count()
    }

    /// Circuit depth with every gate taking one layer.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.num_qubits];
        for g in &self.gates {
            let qs = g.qubits();
            let next = qs.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            for q in qs {
                level[q] = next;
            }
        }
        level.into_iter().max().unwrap_or(0)
    }

    /// `[{"gate":"cx","q":[c,t]}, ...]` in emission order.
    pub fn to_json(&self) -> String {
        let records: Vec<GateRecord> = self.gates.iter().map(GateRecord::from).collect();
        serde_json::to_string(&records).expect("gate records serialize")
    }

    pub fn from_json(num_qubits: usize, text: &str) -> Result<Circuit> {
        let records: Vec<GateRecord> = serde_json::from_str(text)?;
        let mut circuit = Circuit::new(num_qubits);
        for rec in records {
            circuit.push(Gate::try_from(rec)?)?;
        }
        Ok(circuit)
    }

    /// OpenQASM 3 text. `uy` and `uydg` are lowered to `ry(-pi/2)` and
    /// `ry(pi/2)`, which are the same unitaries.
    pub fn to_qasm3(&self) -> String {
        let mut out = String::from("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n");
        let _ = writeln!(out, "qubit[{}] q;", self.num_qubits);
        for g in &self.gates {
            match *g {
                Gate::Cx { control, target } => {
                    let _ = writeln!(out, "cx q[{control}], q[{target}];");
                }
                Gate::Cz(a, b) => {
                    let _ = writeln!(out, "cz q[{a}], q[{b}];");
                }
                Gate::S(t) => {
                    let _ = writeln!(out, "s q[{t}];");
                }
                Gate::Sdg(t) => {
                    let _ = writeln!(out, "sdg q[{t}];");
                }
                Gate::H(t) => {
                    let _ = writeln!(out, "h q[{t}];");
                }
                Gate::Uy(t) => {
                    let _ = writeln!(out, "ry(-pi/2) q[{t}];");
                }
                Gate::Uydg(t) => {
                    let _ = writeln!(out, "ry(pi/2) q[{t}];");
                }
                Gate::Ry(t, theta) => {
                    let _ = writeln!(out, "ry({}) q[{t}];", float_literal(theta));
                }
                Gate::Rz(t, theta) => {
                    let _ = writeln!(out, "rz({}) q[{t}];", float_literal(theta));
                }
            }
        }
        out
    }
}

/// Float literal with 17 significant digits.
pub(crate) fn float_literal(x: f64) -> String {
    format!("{x:.16e}")
}
