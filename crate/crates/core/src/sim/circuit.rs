//! Gate set and circuit container.

use crate::error::{Error, Result};
use std::fmt::Write as _;

/// The fixed gate set. Phase-type gates are diagonal; `CPhase` applies its
/// phase when every listed qubit (controls and target alike) is one.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    Cnot {
        control: usize,
        target: usize,
    },
    Swap(usize, usize),
    Phase {
        target: usize,
        theta: f64,
    },
    CPhase {
        controls: Vec<usize>,
        target: usize,
        theta: f64,
    },
    /// Multi-controlled Z: sign flip when all listed qubits are one.
    Mcz(Vec<usize>),
}

impl Gate {
    /// All qubit indices the gate touches.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) | Gate::Phase { target: q, .. } => vec![*q],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Swap(a, b) => vec![*a, *b],
            Gate::CPhase {
                controls, target, ..
            } => {
                let mut qs = controls.clone();
                qs.push(*target);
                qs
            }
            Gate::Mcz(qs) => qs.clone(),
        }
    }

    /// The inverse gate (phases conjugate, everything else is an involution).
    pub fn inverse(&self) -> Gate {
        match self {
            Gate::Phase { target, theta } => Gate::Phase {
                target: *target,
                theta: -theta,
            },
            Gate::CPhase {
                controls,
                target,
                theta,
            } => Gate::CPhase {
                controls: controls.clone(),
                target: *target,
                theta: -theta,
            },
            other => other.clone(),
        }
    }

    /// One dump line: `GATE q0 [q1 ...] [theta]`.
    fn dump_line(&self) -> String {
        let mut line = String::new();
        match self {
            Gate::H(q) => write!(line, "H {q}").unwrap(),
            Gate::X(q) => write!(line, "X {q}").unwrap(),
            Gate::Z(q) => write!(line, "Z {q}").unwrap(),
            Gate::Cnot { control, target } => write!(line, "CNOT {control} {target}").unwrap(),
            Gate::Swap(a, b) => write!(line, "SWAP {a} {b}").unwrap(),
            Gate::Phase { target, theta } => write!(line, "PHASE {target} {theta}").unwrap(),
            Gate::CPhase {
                controls,
                target,
                theta,
            } => {
                line.push_str("CPHASE");
                for c in controls {
                    write!(line, " {c}").unwrap();
                }
                write!(line, " {target} {theta}").unwrap();
            }
            Gate::Mcz(qs) => {
                line.push_str("MCZ");
                for q in qs {
                    write!(line, " {q}").unwrap();
                }
            }
        }
        line
    }
}

/// An ordered gate program on a fixed number of qubits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(qubits: usize) -> Self {
        Self {
            qubits,
            gates: Vec::new(),
        }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
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

    /// Appends a gate after bounds-checking its qubit indices.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let qs = gate.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= self.qubits) {
            return Err(Error::invalid_input(format!(
                "gate qubit {q} out of range for {}-qubit circuit",
                self.qubits
            )));
        }
        match &gate {
            Gate::Cnot { control, target } if control == target => {
                return Err(Error::invalid_input(
                    "CNOT control equals target".to_string(),
                ));
            }
            Gate::Phase { theta, .. } | Gate::CPhase { theta, .. } if !theta.is_finite() => {
                return Err(Error::invalid_input("non-finite phase angle".to_string()));
            }
            _ => {}
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends every gate of `other` (same qubit count).
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.qubits != self.qubits {
            return Err(Error::invalid_input(format!(
                "cannot extend a {}-qubit circuit with a {}-qubit circuit",
                self.qubits, other.qubits
            )));
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    /// The exact gate-wise inverse: reversed order, each gate inverted.
    pub fn inverted(&self) -> Circuit {
        Circuit {
            qubits: self.qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Text dump, one `GATE q0 [q1 ...] [theta]` line per gate.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for gate in &self.gates {
            out.push_str(&gate.dump_line());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_rejects_out_of_range_and_degenerate_gates() {
        let mut c = Circuit::new(2);
        assert!(c.push(Gate::H(2)).is_err());
        assert!(c
            .push(Gate::Cnot {
                control: 1,
                target: 1
            })
            .is_err());
        assert!(c
            .push(Gate::Phase {
                target: 0,
                theta: f64::NAN
            })
            .is_err());
        assert!(c.push(Gate::H(1)).is_ok());
    }

    #[test]
    fn inverse_reverses_and_conjugates() {
        let mut c = Circuit::new(3);
        c.push(Gate::H(0)).unwrap();
        c.push(Gate::Phase {
            target: 1,
            theta: 0.5,
        })
        .unwrap();
        let inv = c.inverted();
        assert_eq!(
            inv.gates()[0],
            Gate::Phase {
                target: 1,
                theta: -0.5
            }
        );
        assert_eq!(inv.gates()[1], Gate::H(0));
    }

    #[test]
    fn dump_format_is_line_per_gate() {
        let mut c = Circuit::new(4);
        c.push(Gate::H(0)).unwrap();
        c.push(Gate::Cnot {
            control: 1,
            target: 0,
        })
        .unwrap();
        c.push(Gate::CPhase {
            controls: vec![0, 2],
            target: 3,
            theta: 0.25,
        })
        .unwrap();
        c.push(Gate::Mcz(vec![0, 1, 2])).unwrap();
        assert_eq!(c.dump(), "H 0\nCNOT 1 0\nCPHASE 0 2 3 0.25\nMCZ 0 1 2\n");
    }
}
