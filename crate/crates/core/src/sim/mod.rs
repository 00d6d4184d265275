//! Exact gate-level simulation of the GAS circuits: valid-codeword initial
//! state preparation, quantum-dictionary value encoding, oracle, diffusion,
//! and measurement.
//!
//! This is a logical-circuit simulator: dense complex-double amplitudes, a
//! fixed minimal gate set, no noise or connectivity constraints.

mod build;
mod circuit;
mod state;

pub use build::{
    dictionary_circuit, grover_operator, initial_state_circuit, inverse_qft_circuit, DictionaryMode,
};
pub use circuit::{Circuit, Gate};
pub use state::{Measurement, StateVector, QUBIT_CAP};

/// Key/value register split: one key qubit per binary variable, `m` value
/// qubits least-significant first (the last one is the sign).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    key_qubits: Vec<usize>,
    value_qubits: Vec<usize>,
}

impl RegisterLayout {
    /// Keys on qubits `0..n_key`, value on `n_key..n_key+m`.
    pub fn contiguous(n_key: usize, m: usize) -> Self {
        Self {
            key_qubits: (0..n_key).collect(),
            value_qubits: (n_key..n_key + m).collect(),
        }
    }

    pub fn key_qubits(&self) -> &[usize] {
        &self.key_qubits
    }

    pub fn value_qubits(&self) -> &[usize] {
        &self.value_qubits
    }

    pub fn num_qubits(&self) -> usize {
        self.key_qubits.len() + self.value_qubits.len()
    }

    /// The sign qubit: most significant bit of the value register.
    pub fn sign_qubit(&self) -> usize {
        *self.value_qubits.last().expect("empty value register")
    }

    /// Key bits of a basis index, one per variable.
    pub fn key_bits(&self, index: usize) -> Vec<bool> {
        self.key_qubits
            .iter()
            .map(|&q| (index >> q) & 1 == 1)
            .collect()
    }

    /// Signed two's-complement reading of the value register bits.
    pub fn value_reading(&self, index: usize) -> i64 {
        let m = self.value_qubits.len() as u32;
        let mut raw = 0i64;
        for (t, &q) in self.value_qubits.iter().enumerate() {
            raw |= (((index >> q) & 1) as i64) << t;
        }
        if raw >= 1i64 << (m - 1) {
            raw - (1i64 << m)
        } else {
            raw
        }
    }
}
