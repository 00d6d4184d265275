//! Dense statevector and gate application.

use super::circuit::{Circuit, Gate};
use super::RegisterLayout;
use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::FRAC_1_SQRT_2;
use std::io::Write;

/// Dense amplitude storage caps out at `2^26` complex doubles (1 GiB).
pub const QUBIT_CAP: usize = 26;

/// A pure state of `q` qubits as `2^q` complex amplitudes. Basis index bit
/// `j` is qubit `j`.
#[derive(Debug, Clone)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex64>,
}

/// One full-register measurement, split per the register layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    /// Sampled basis-state index.
    pub index: usize,
    /// Key bits, one per variable.
    pub key_bits: Vec<bool>,
    /// Two's-complement reading of the value register.
    pub value: i64,
}

impl StateVector {
    /// The all-zeros basis state |0...0>.
    pub fn zero_state(qubits: usize) -> Result<Self> {
        if qubits == 0 || qubits > QUBIT_CAP {
            return Err(Error::resource_limit(format!(
                "statevector supports 1..={QUBIT_CAP} qubits, got {qubits}"
            )));
        }
        let mut amps = vec![Complex64::ZERO; 1usize << qubits];
        amps[0] = Complex64::ONE;
        Ok(Self { qubits, amps })
    }

    /// A computational basis state from bits (bit `j` = qubit `j`).
    pub fn basis_state(qubits: usize, bits: &[bool]) -> Result<Self> {
        if bits.len() != qubits {
            return Err(Error::invalid_input(format!(
                "expected {qubits} bits, got {}",
                bits.len()
            )));
        }
        let mut state = Self::zero_state(qubits)?;
        let index = crate::bits::bits_to_index(bits);
        state.amps[0] = Complex64::ZERO;
        state.amps[index] = Complex64::ONE;
        Ok(state)
    }

    /// Builds a state from raw amplitudes (must have power-of-two length).
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() || amps.len() < 2 {
            return Err(Error::invalid_input(
                "amplitude count must be a power of two >= 2".to_string(),
            ));
        }
        let qubits = amps.len().trailing_zeros() as usize;
        Ok(Self { qubits, amps })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies one gate in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        let qs = gate.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= self.qubits) {
            return Err(Error::invalid_input(format!(
                "gate qubit {q} out of range for {}-qubit state",
                self.qubits
            )));
        }
        match gate {
            Gate::H(q) => {
                let mask = 1usize << q;
                for i in 0..self.amps.len() {
                    if i & mask == 0 {
                        let a = self.amps[i];
                        let b = self.amps[i | mask];
                        self.amps[i] = (a + b) * FRAC_1_SQRT_2;
                        self.amps[i | mask] = (a - b) * FRAC_1_SQRT_2;
                    }
                }
            }
            Gate::X(q) => {
                let mask = 1usize << q;
                for i in 0..self.amps.len() {
                    if i & mask == 0 {
                        self.amps.swap(i, i | mask);
                    }
                }
            }
            Gate::Z(q) => {
                let mask = 1usize << q;
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & mask != 0 {
                        *amp = -*amp;
                    }
                }
            }
            Gate::Cnot { control, target } => {
                let cmask = 1usize << control;
                let tmask = 1usize << target;
                for i in 0..self.amps.len() {
                    if i & cmask != 0 && i & tmask == 0 {
                        self.amps.swap(i, i | tmask);
                    }
                }
            }
            Gate::Swap(a, b) => {
                let amask = 1usize << a;
                let bmask = 1usize << b;
                for i in 0..self.amps.len() {
                    if i & amask != 0 && i & bmask == 0 {
                        self.amps.swap(i, i ^ amask ^ bmask);
                    }
                }
            }
            Gate::Phase { target, theta } => {
                let mask = 1usize << target;
                let factor = Complex64::from_polar(1.0, *theta);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & mask != 0 {
                        *amp *= factor;
                    }
                }
            }
            Gate::CPhase {
                controls,
                target,
                theta,
            } => {
                let mut mask = 1usize << target;
                for &c in controls {
                    mask |= 1usize << c;
                }
                let factor = Complex64::from_polar(1.0, *theta);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *amp *= factor;
                    }
                }
            }
            Gate::Mcz(qubits) => {
                let mut mask = 0usize;
                for &q in qubits {
                    mask |= 1usize << q;
                }
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
        }
        Ok(())
    }

    /// Applies every gate of a circuit in order.
    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.qubits() != self.qubits {
            return Err(Error::invalid_input(format!(
                "cannot apply a {}-qubit circuit to a {}-qubit state",
                circuit.qubits(),
                self.qubits
            )));
        }
        for gate in circuit.gates() {
            self.apply(gate)?;
        }
        Ok(())
    }

    /// Measurement probabilities per basis index.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Total probability of basis states where `predicate(index)` holds.
    pub fn probability_where(&self, predicate: impl Fn(usize) -> bool) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| predicate(*i))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Samples one basis index with probability `|amplitude|^2`.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let draw: f64 = rng.random::<f64>() * self.norm_sq();
        let mut acc = 0.0;
        for (i, amp) in self.amps.iter().enumerate() {
            acc += amp.norm_sqr();
            if draw < acc {
                return i;
            }
        }
        self.amps.len() - 1
    }

    /// Measures the whole register once and splits the readout per layout.
    pub fn measure_all<R: Rng + ?Sized>(self, layout: &RegisterLayout, rng: &mut R) -> Measurement {
        let index = self.sample_index(rng);
        Measurement {
            index,
            key_bits: layout.key_bits(index),
            value: layout.value_reading(index),
        }
    }

    /// CSV snapshot `index,re,im`, one row per basis state.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "index,re,im")?;
        for (i, amp) in self.amps.iter().enumerate() {
            writeln!(out, "{i},{},{}", amp.re, amp.im)?;
        }
        Ok(())
    }
}
