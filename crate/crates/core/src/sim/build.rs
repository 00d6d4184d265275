//! Builders for the GAS circuit components.

use super::circuit::{Circuit, Gate};
use super::RegisterLayout;
use crate::error::{Error, Result};
use crate::polar::PolarCode;
use crate::poly::{MultilinearPolynomial, QuantizedPolynomial};
use std::f64::consts::TAU;

/// How objective coefficients are turned into dictionary phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DictionaryMode {
    /// Coefficients quantized to integers at `2^scale_bits`; the value
    /// register reads exactly `E_q(x) - c_q` in two's complement.
    Integer,
    /// Real coefficients used directly as phase angles; the readout
    /// concentrates near the true value instead of being exact.
    RealAngle,
}

/// QFT gate sequence on `value_qubits` (bit `t` of the transformed integer
/// lives on `value_qubits[t]`).
fn qft_gates(value_qubits: &[usize]) -> Vec<Gate> {
    let m = value_qubits.len();
    // Work MSB-down, then restore bit order with swaps.
    let msb_first: Vec<usize> = value_qubits.iter().rev().copied().collect();
    let mut gates = Vec::new();
    for i in 0..m {
        gates.push(Gate::H(msb_first[i]));
        for k in 2..=(m - i) {
            gates.push(Gate::CPhase {
                controls: vec![msb_first[i + k - 1]],
                target: msb_first[i],
                theta: TAU / (1u64 << k) as f64,
            });
        }
    }
    for i in 0..m / 2 {
        gates.push(Gate::Swap(msb_first[i], msb_first[m - 1 - i]));
    }
    gates
}

/// Exact inverse QFT on `m` qubits (indices `0..m`, least significant first).
pub fn inverse_qft_circuit(m: usize) -> Result<Circuit> {
    if m < 1 {
        return Err(Error::invalid_parameter(
            "inverse QFT needs at least one qubit".to_string(),
        ));
    }
    let mut forward = Circuit::new(m);
    for gate in qft_gates(&(0..m).collect::<Vec<_>>()) {
        forward.push(gate)?;
    }
    Ok(forward.inverted())
}

/// Quantum-dictionary value encoding: after this circuit the value register
/// holds `(E(x) - threshold)` for every key basis state `|x>`, exactly in
/// integer mode and concentrated around it in real-angle mode.
///
/// Structure: Hadamards on the value register, one controlled phase of angle
/// `2*pi * a * 2^t / 2^m` per (term, value qubit) pair, uncontrolled phases
/// for the constant and `-threshold`, then the inverse QFT.
pub fn dictionary_circuit(
    poly: &MultilinearPolynomial,
    threshold: f64,
    scale_bits: u32,
    layout: &RegisterLayout,
    mode: DictionaryMode,
) -> Result<Circuit> {
    let m = layout.value_qubits().len() as u32;
    if m == 0 {
        return Err(Error::invalid_parameter(
            "dictionary needs a value register".to_string(),
        ));
    }
    if poly.num_vars() != layout.key_qubits().len() {
        return Err(Error::invalid_input(format!(
            "polynomial has {} variables but layout has {} key qubits",
            poly.num_vars(),
            layout.key_qubits().len()
        )));
    }

    let mut circuit = Circuit::new(layout.num_qubits());
    for &q in layout.value_qubits() {
        circuit.push(Gate::H(q))?;
    }

    match mode {
        DictionaryMode::Integer => {
            let qpoly = poly.quantize(scale_bits);
            let c_q = (threshold * (1u64 << scale_bits) as f64).round() as i64;
            check_register_fit(&qpoly, c_q, m)?;
            push_integer_phases(&mut circuit, &qpoly, c_q, layout)?;
        }
        DictionaryMode::RealAngle => {
            check_register_fit_real(poly, threshold, m)?;
            push_real_phases(&mut circuit, poly, threshold, layout)?;
        }
    }

    let mut inverse_qft = Circuit::new(layout.num_qubits());
    for gate in qft_gates(layout.value_qubits()) {
        inverse_qft.push(gate)?;
    }
    circuit.extend(&inverse_qft.inverted())?;
    Ok(circuit)
}

/// Interval-arithmetic overflow check for `E_q(x) - c_q` against `m` bits.
fn check_register_fit(qpoly: &QuantizedPolynomial, c_q: i64, m: u32) -> Result<()> {
    let (lo, hi) = qpoly.interval_bounds();
    let min = lo as i128 - c_q as i128;
    let max = hi as i128 - c_q as i128;
    let half = 1i128 << (m - 1);
    if min < -half || max >= half {
        return Err(Error::Overflow(format!(
            "shifted objective range [{min}, {max}] does not fit {m}-bit two's complement"
        )));
    }
    Ok(())
}

fn check_register_fit_real(poly: &MultilinearPolynomial, threshold: f64, m: u32) -> Result<()> {
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    for (vars, coeff) in poly.terms() {
        if vars.is_empty() {
            lo += coeff;
            hi += coeff;
        } else if coeff < 0.0 {
            lo += coeff;
        } else {
            hi += coeff;
        }
    }
    let half = (1u64 << (m - 1)) as f64;
    if lo - threshold < -half || hi - threshold >= half {
        return Err(Error::Overflow(format!(
            "shifted objective range [{}, {}] does not fit {m}-bit two's complement",
            lo - threshold,
            hi - threshold
        )));
    }
    Ok(())
}

fn push_integer_phases(
    circuit: &mut Circuit,
    qpoly: &QuantizedPolynomial,
    c_q: i64,
    layout: &RegisterLayout,
) -> Result<()> {
    let m = layout.value_qubits().len() as u32;
    let modulus = 1i64 << m;
    let angle = |coeff: i64, t: usize| {
        let reduced = ((coeff as i128) << t).rem_euclid(modulus as i128) as i64;
        TAU * reduced as f64 / modulus as f64
    };

    let constant = qpoly.constant_term() - c_q;
    for (t, &q) in layout.value_qubits().iter().enumerate() {
        let theta = angle(constant, t);
        if theta != 0.0 {
            circuit.push(Gate::Phase { target: q, theta })?;
        }
    }
    for (vars, coeff) in qpoly.terms() {
        if vars.is_empty() {
            continue;
        }
        let controls: Vec<usize> = vars.iter().map(|&v| layout.key_qubits()[v]).collect();
        for (t, &q) in layout.value_qubits().iter().enumerate() {
            let theta = angle(coeff, t);
            if theta != 0.0 {
                circuit.push(Gate::CPhase {
                    controls: controls.clone(),
                    target: q,
                    theta,
                })?;
            }
        }
    }
    Ok(())
}

fn push_real_phases(
    circuit: &mut Circuit,
    poly: &MultilinearPolynomial,
    threshold: f64,
    layout: &RegisterLayout,
) -> Result<()> {
    let m = layout.value_qubits().len() as u32;
    let modulus = (1u64 << m) as f64;

    let constant = poly.constant_term() - threshold;
    for (t, &q) in layout.value_qubits().iter().enumerate() {
        circuit.push(Gate::Phase {
            target: q,
            theta: TAU * constant * (1u64 << t) as f64 / modulus,
        })?;
    }
    for (vars, coeff) in poly.terms() {
        if vars.is_empty() {
            continue;
        }
        let controls: Vec<usize> = vars.iter().map(|&v| layout.key_qubits()[v]).collect();
        for (t, &q) in layout.value_qubits().iter().enumerate() {
            circuit.push(Gate::CPhase {
                controls: controls.clone(),
                target: q,
                theta: TAU * coeff * (1u64 << t) as f64 / modulus,
            })?;
        }
    }
    Ok(())
}

/// Initial-state preparation over valid (transformed) codewords.
///
/// Hadamards on the information positions of each level, the encoder CNOT
/// schedule per level, the interleaver as SWAP gates, then optionally the
/// per-symbol cumulative-XOR cascade (symbols are formed from interleaved
/// bits, so the bit transform acts after the interleaver). Key variable
/// `s*N + i` sits on qubit `s*N + i`; the circuit is sized to `total_qubits`
/// so a value register can share the register.
pub fn initial_state_circuit(
    code: &PolarCode,
    levels: usize,
    use_diff: bool,
    interleaver: &[usize],
    total_qubits: usize,
) -> Result<Circuit> {
    let n = code.n();
    let key_count = levels * n;
    if levels < 1 {
        return Err(Error::invalid_parameter(
            "at least one modulation level required".to_string(),
        ));
    }
    if total_qubits < key_count {
        return Err(Error::invalid_input(format!(
            "{key_count} key qubits do not fit in {total_qubits} total"
        )));
    }
    if !is_permutation(interleaver, key_count) {
        return Err(Error::invalid_input(format!(
            "interleaver must be a permutation of 0..{key_count}"
        )));
    }

    let mut circuit = Circuit::new(total_qubits);
    for level in 0..levels {
        for &info_pos in code.info_set() {
            circuit.push(Gate::H(level * n + info_pos))?;
        }
    }
    let schedule = code.cnot_schedule();
    for level in 0..levels {
        for &(control, target) in schedule.pairs() {
            circuit.push(Gate::Cnot {
                control: level * n + control,
                target: level * n + target,
            })?;
        }
    }
    for (a, b) in permutation_swaps(interleaver) {
        circuit.push(Gate::Swap(a, b))?;
    }
    if use_diff {
        for position in 0..n {
            for level in 1..levels {
                circuit.push(Gate::Cnot {
                    control: (level - 1) * n + position,
                    target: level * n + position,
                })?;
            }
        }
    }
    Ok(circuit)
}

fn is_permutation(perm: &[usize], len: usize) -> bool {
    if perm.len() != len {
        return false;
    }
    let mut seen = vec![false; len];
    for &p in perm {
        if p >= len || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

/// Transposition sequence realizing `out[j] = in[perm[j]]` on a register.
fn permutation_swaps(perm: &[usize]) -> Vec<(usize, usize)> {
    let mut swaps = Vec::new();
    let mut visited = vec![false; perm.len()];
    for start in 0..perm.len() {
        if visited[start] || perm[start] == start {
            visited[start] = true;
            continue;
        }
        let mut j = start;
        while !visited[j] {
            visited[j] = true;
            let next = perm[j];
            if next != start {
                swaps.push((j, next));
            }
            j = next;
        }
    }
    swaps
}

/// One Grover operator `G = A D A^H O` as a gate sequence (applied left to
/// right: oracle, inverse preparation, reflection about the all-zeros state,
/// preparation).
pub fn grover_operator(preparation: &Circuit, layout: &RegisterLayout) -> Result<Circuit> {
    let qubits = preparation.qubits();
    let mut circuit = Circuit::new(qubits);
    // Oracle: sign flip when the value register is negative.
    circuit.push(Gate::Z(layout.sign_qubit()))?;
    circuit.extend(&preparation.inverted())?;
    // Reflection about |0...0> over every qubit.
    for q in 0..qubits {
        circuit.push(Gate::X(q))?;
    }
    circuit.push(Gate::Mcz((0..qubits).collect()))?;
    for q in 0..qubits {
        circuit.push(Gate::X(q))?;
    }
    circuit.extend(preparation)?;
    Ok(circuit)
}
