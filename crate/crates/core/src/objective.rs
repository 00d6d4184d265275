//! Objective-function construction for ML decoding over binary variables.
//!
//! All objectives measure the squared Euclidean distance between the received
//! vector and a candidate symbol vector, expanded into multilinear form:
//!
//! - BPSK: full degree-1 form and the constant-free simplified form
//! - Gray-coded 2^M-PAM: the degree-M HUBO over raw codeword bits
//! - natural-labeled 2^M-PAM: the degree-2 QUBO over differentially
//!   transformed bits
//! - the conventional constraint-based QUBO baseline with encoder ancillas
//!
//! Multi-level variables are laid out as `x_{s,i} -> s*N + i` (level `s`,
//! symbol position `i`).

use crate::error::{Error, Result};
use crate::modem::ModulationScheme;
use crate::polar::PolarCode;
use crate::poly::MultilinearPolynomial;

/// Variable index of bit level `s` at symbol position `i` for code length `n`.
#[inline]
pub fn var_index(level: usize, position: usize, n: usize) -> usize {
    level * n + position
}

/// Full BPSK distance objective `sum_i |y_i - (1 - 2 x_i)|^2`:
/// constant `sum (y_i - 1)^2` plus linear coefficients `4 y_i`.
pub fn bpsk_full(y: &[f64]) -> MultilinearPolynomial {
    let mut poly = MultilinearPolynomial::zero(y.len());
    let constant: f64 = y.iter().map(|&v| (v - 1.0).powi(2)).sum();
    poly.add_term(&[], constant);
    for (i, &v) in y.iter().enumerate() {
        poly.add_term(&[i], 4.0 * v);
    }
    poly
}

/// Simplified BPSK objective `sum_i y_i x_i`; same minimizers as the full
/// form, every term first order.
pub fn bpsk_simplified(y: &[f64]) -> MultilinearPolynomial {
    let mut poly = MultilinearPolynomial::zero(y.len());
    for (i, &v) in y.iter().enumerate() {
        poly.add_term(&[i], v);
    }
    poly
}

/// Gray-label symbol coordinate as a polynomial in the level bits of symbol
/// `position`: degree M, built from the products `prod_{k<=j} (1 - 2 x_k)`.
fn gray_level_poly(
    modulation: &ModulationScheme,
    position: usize,
    n: usize,
    num_vars: usize,
) -> MultilinearPolynomial {
    let m = modulation.bits_per_symbol();
    let norm = modulation.scale().sqrt();
    let mut sum = MultilinearPolynomial::zero(num_vars);
    let mut prefix = MultilinearPolynomial::constant(num_vars, 1.0);
    for j in 0..m {
        // prefix *= (1 - 2 x_{j, position})
        let mut factor = MultilinearPolynomial::constant(num_vars, 1.0);
        factor.add_term(&[var_index(j, position, n)], -2.0);
        prefix = prefix.multiply(&factor);
        let weight = (1u64 << (m - j - 1)) as f64 * if j % 2 == 0 { 1.0 } else { -1.0 };
        let mut contribution = prefix.clone();
        contribution.scale(weight / norm);
        sum.add_assign(&contribution);
    }
    sum
}

/// Natural-label symbol coordinate as a degree-1 polynomial in the level bits
/// of symbol `position`.
fn natural_level_poly(
    modulation: &ModulationScheme,
    position: usize,
    n: usize,
    num_vars: usize,
) -> MultilinearPolynomial {
    let m = modulation.bits_per_symbol();
    let norm = modulation.scale().sqrt();
    let mut sum = MultilinearPolynomial::zero(num_vars);
    for j in 0..m {
        let weight = (1u64 << (m - j - 1)) as f64 * if j % 2 == 0 { 1.0 } else { -1.0 };
        sum.add_term(&[], weight / norm);
        sum.add_term(&[var_index(j, position, n)], -2.0 * weight / norm);
    }
    sum
}

/// Squared-distance objective `sum_i |y_i - s_i(x)|^2` for per-symbol level
/// polynomials produced by `level_poly`.
fn distance_objective(
    y: &[f64],
    num_vars: usize,
    level_poly: impl Fn(usize) -> MultilinearPolynomial,
) -> MultilinearPolynomial {
    let mut total = MultilinearPolynomial::zero(num_vars);
    for (i, &received) in y.iter().enumerate() {
        let level = level_poly(i);
        // (y - s)^2 = y^2 - 2 y s + s^2
        total.add_term(&[], received * received);
        let mut cross = level.clone();
        cross.scale(-2.0 * received);
        total.add_assign(&cross);
        total.add_assign(&level.multiply(&level));
    }
    total
}

/// Degree-M HUBO for Gray-coded 2^M-PAM over raw codeword bits
/// `x_{s,i} -> s*N + i`.
pub fn gray_hubo(y: &[f64], modulation: &ModulationScheme) -> MultilinearPolynomial {
    let n = y.len();
    let num_vars = modulation.bits_per_symbol() * n;
    distance_objective(y, num_vars, |i| gray_level_poly(modulation, i, n, num_vars))
}

/// Degree-2 QUBO for natural-labeled 2^M-PAM over the differentially
/// transformed bits, same variable layout as [`gray_hubo`].
pub fn natural_qubo(y: &[f64], modulation: &ModulationScheme) -> MultilinearPolynomial {
    let n = y.len();
    let num_vars = modulation.bits_per_symbol() * n;
    distance_objective(y, num_vars, |i| {
        natural_level_poly(modulation, i, n, num_vars)
    })
}

/// Penalty coefficients for the constraint-based baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyWeights {
    pub encoding: f64,
    pub frozen: f64,
    pub receiver: f64,
}

impl PenaltyWeights {
    /// The suggested weights `(1, 4, 2 - rate)` for a block of the given rate.
    pub fn suggested(rate: f64) -> Self {
        Self {
            encoding: 1.0,
            frozen: 4.0,
            receiver: 2.0 - rate,
        }
    }
}

/// Largest code length accepted by the constraint-based construction; sizes
/// beyond this are not brute-force verifiable.
pub const CONSTRAINT_QUBO_MAX_N: usize = 8;

/// The conventional constraint-based QUBO: encoding, frozen, and receiver
/// penalties over `N (log2 N + 1)` variables.
#[derive(Debug, Clone)]
pub struct ConstraintQubo {
    poly: MultilinearPolynomial,
    output_wires: Vec<usize>,
}

impl ConstraintQubo {
    pub fn polynomial(&self) -> &MultilinearPolynomial {
        &self.poly
    }

    /// Variable indices holding the codeword layer (encoder outputs).
    pub fn output_wires(&self) -> &[usize] {
        &self.output_wires
    }

    pub fn num_vars(&self) -> usize {
        self.poly.num_vars()
    }

    /// Codeword-layer bits of a full variable assignment.
    pub fn codeword_layer(&self, assignment: &[bool]) -> Vec<bool> {
        self.output_wires.iter().map(|&v| assignment[v]).collect()
    }
}

/// Builds the constraint-based QUBO for BPSK.
///
/// Variables `0..N` hold the encoder input layer; each XOR gate of the CNOT
/// schedule appends a sum and a carry ancilla constrained by
/// `(b_i + b_j - a_k - 2 a_{k+1})^2`. The frozen penalty `b_i` applies to
/// input-layer frozen positions, and the receiver penalty `y_i b_i` to the
/// final codeword layer.
pub fn constraint_qubo(
    code: &PolarCode,
    y: &[f64],
    weights: &PenaltyWeights,
) -> Result<ConstraintQubo> {
    let n = code.n();
    if n > CONSTRAINT_QUBO_MAX_N {
        return Err(Error::resource_limit(format!(
            "constraint QUBO supports N <= {CONSTRAINT_QUBO_MAX_N}, got {n}"
        )));
    }
    if y.len() != n {
        return Err(Error::invalid_input(format!(
            "expected {} received samples, got {}",
            n,
            y.len()
        )));
    }

    let schedule = code.cnot_schedule();
    let num_vars = n * (code.log_n() + 1);
    let mut poly = MultilinearPolynomial::zero(num_vars);

    // Wire map: current variable index per codeword position.
    let mut wire: Vec<usize> = (0..n).collect();
    let mut next_var = n;
    for &(control, target) in schedule.pairs() {
        let b_i = wire[target];
        let b_j = wire[control];
        let sum = next_var;
        let carry = next_var + 1;
        next_var += 2;
        add_xor_penalty(&mut poly, b_i, b_j, sum, carry, weights.encoding);
        wire[target] = sum;
    }
    debug_assert_eq!(next_var, num_vars);

    for &i in code.frozen_set() {
        poly.add_term(&[i], weights.frozen);
    }
    for (position, &received) in y.iter().enumerate() {
        poly.add_term(&[wire[position]], weights.receiver * received);
    }

    Ok(ConstraintQubo {
        poly,
        output_wires: wire,
    })
}

/// Expansion of `w * (b_i + b_j - a - 2c)^2` over binary variables.
fn add_xor_penalty(
    poly: &mut MultilinearPolynomial,
    b_i: usize,
    b_j: usize,
    sum: usize,
    carry: usize,
    w: f64,
) {
    poly.add_term(&[b_i], w);
    poly.add_term(&[b_j], w);
    poly.add_term(&[sum], w);
    poly.add_term(&[carry], 4.0 * w);
    poly.add_term(&[b_i, b_j], 2.0 * w);
    poly.add_term(&[b_i, sum], -2.0 * w);
    poly.add_term(&[b_j, sum], -2.0 * w);
    poly.add_term(&[b_i, carry], -4.0 * w);
    poly.add_term(&[b_j, carry], -4.0 * w);
    poly.add_term(&[sum, carry], 4.0 * w);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::Bits;
    use crate::modem::gray_to_binary;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;

    fn assignments(num_vars: usize) -> impl Iterator<Item = Vec<bool>> {
        (0..(1usize << num_vars)).map(move |i| (0..num_vars).map(|j| (i >> j) & 1 == 1).collect())
    }

    /// Literal distance oracle for the Gray objective.
    fn literal_gray_distance(y: &[f64], modulation: &ModulationScheme, x: &[bool]) -> f64 {
        let n = y.len();
        let m = modulation.bits_per_symbol();
        y.iter()
            .enumerate()
            .map(|(i, &received)| {
                let label: Bits = (0..m).map(|s| x[var_index(s, i, n)]).collect();
                (received - modulation.map_gray(&label).unwrap()).powi(2)
            })
            .sum()
    }

    fn literal_natural_distance(y: &[f64], modulation: &ModulationScheme, x: &[bool]) -> f64 {
        let n = y.len();
        let m = modulation.bits_per_symbol();
        y.iter()
            .enumerate()
            .map(|(i, &received)| {
                let label: Bits = (0..m).map(|s| x[var_index(s, i, n)]).collect();
                (received - modulation.map_natural(&label).unwrap()).powi(2)
            })
            .sum()
    }

    #[test]
    fn bpsk_full_is_zero_at_exact_match() {
        let poly = bpsk_full(&[1.0, 1.0, 1.0]);
        assert_eq!(poly.evaluate(&[false, false, false]).unwrap(), 0.0);
    }

    #[test]
    fn bpsk_full_matches_direct_expansion() {
        let poly = bpsk_full(&[0.5]);
        assert_abs_diff_eq!(poly.evaluate(&[true]).unwrap(), 2.25);
    }

    #[test]
    fn bpsk_full_matches_literal_distance() {
        let mut rng = StdRng::seed_from_u64(2);
        for _ in 0..20 {
            let y: Vec<f64> = (0..6).map(|_| rng.random_range(-2.0..2.0)).collect();
            let poly = bpsk_full(&y);
            assert_eq!(poly.degree(), 1);
            for x in assignments(6) {
                let literal: f64 = y
                    .iter()
                    .zip(&x)
                    .map(|(&v, &b)| (v - (1.0 - 2.0 * b as u8 as f64)).powi(2))
                    .sum();
                assert_abs_diff_eq!(poly.evaluate(&x).unwrap(), literal, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn bpsk_simplified_examples() {
        let poly = bpsk_simplified(&[0.8, -1.2]);
        assert_abs_diff_eq!(poly.evaluate(&[true, false]).unwrap(), 0.8);
        assert_eq!(poly.evaluate(&[false, false]).unwrap(), 0.0);
        assert_eq!(poly.constant_term(), 0.0);
        assert_eq!(poly.degree(), 1);
    }

    #[test]
    fn bpsk_simplified_shares_argmin_with_full_form() {
        let code = PolarCode::new(4, 2, &[0, 2]).unwrap();
        let codewords = code.enumerate_codewords().unwrap();
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..200 {
            let y: Vec<f64> = (0..4).map(|_| rng.random_range(-2.0..2.0)).collect();
            let full = bpsk_full(&y);
            let simplified = bpsk_simplified(&y);
            let argmin = |poly: &MultilinearPolynomial| {
                codewords
                    .iter()
                    .enumerate()
                    .min_by(|(_, a), (_, b)| {
                        poly.evaluate(a)
                            .unwrap()
                            .partial_cmp(&poly.evaluate(b).unwrap())
                            .unwrap()
                    })
                    .map(|(i, _)| i)
                    .unwrap()
            };
            assert_eq!(argmin(&full), argmin(&simplified));
        }
    }

    #[test]
    fn gray_hubo_reduces_to_bpsk_at_one_bit() {
        let y = [0.3, -0.7, 1.4];
        let hubo = gray_hubo(&y, &ModulationScheme::bpsk());
        let full = bpsk_full(&y);
        for x in assignments(3) {
            assert_abs_diff_eq!(
                hubo.evaluate(&x).unwrap(),
                full.evaluate(&x).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn gray_hubo_vanishes_on_exact_symbol() {
        // One 4-PAM symbol received exactly at the (0,1) level.
        let pam4 = ModulationScheme::pam(2).unwrap();
        let y = [3.0 / 5f64.sqrt()];
        let hubo = gray_hubo(&y, &pam4);
        assert_abs_diff_eq!(hubo.evaluate(&[false, true]).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn gray_hubo_matches_literal_distance_exhaustively() {
        let mut rng = StdRng::seed_from_u64(14);
        for (m, n) in [(2usize, 4usize), (3, 4), (4, 2), (2, 8)] {
            let modulation = ModulationScheme::pam(m).unwrap();
            let y: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let hubo = gray_hubo(&y, &modulation);
            assert!(hubo.degree() <= m);
            for x in assignments(m * n) {
                assert_abs_diff_eq!(
                    hubo.evaluate(&x).unwrap(),
                    literal_gray_distance(&y, &modulation, &x),
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn natural_qubo_matches_literal_distance_and_degree() {
        let mut rng = StdRng::seed_from_u64(15);
        for (m, n) in [(2usize, 4usize), (4, 4)] {
            let modulation = ModulationScheme::pam(m).unwrap();
            let y: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let qubo = natural_qubo(&y, &modulation);
            assert!(qubo.degree() <= 2);
            for x in assignments((m * n).min(12)) {
                let mut full = x.clone();
                full.resize(m * n, false);
                assert_abs_diff_eq!(
                    qubo.evaluate(&full).unwrap(),
                    literal_natural_distance(&y, &modulation, &full),
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn natural_qubo_equals_gray_hubo_under_bijection() {
        let mut rng = StdRng::seed_from_u64(16);
        for (m, n) in [(2usize, 4usize), (4, 4), (2, 8)] {
            let modulation = ModulationScheme::pam(m).unwrap();
            let y: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let hubo = gray_hubo(&y, &modulation);
            let qubo = natural_qubo(&y, &modulation);
            for x in assignments(m * n) {
                // Transform each symbol's Gray label to its natural label.
                let mut transformed = vec![false; m * n];
                for i in 0..n {
                    let label: Bits = (0..m).map(|s| x[var_index(s, i, n)]).collect();
                    for (s, &bit) in gray_to_binary(&label).iter().enumerate() {
                        transformed[var_index(s, i, n)] = bit;
                    }
                }
                assert_abs_diff_eq!(
                    hubo.evaluate(&x).unwrap(),
                    qubo.evaluate(&transformed).unwrap(),
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn natural_qubo_matches_bpsk_at_one_bit() {
        let y = [0.4, -1.1];
        let qubo = natural_qubo(&y, &ModulationScheme::bpsk());
        let full = bpsk_full(&y);
        for x in assignments(2) {
            assert_abs_diff_eq!(
                qubo.evaluate(&x).unwrap(),
                full.evaluate(&x).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn natural_qubo_term_count_is_quadratic() {
        let modulation = ModulationScheme::pam(4).unwrap();
        let y = [0.1, -0.2, 0.3, -0.4];
        let qubo = natural_qubo(&y, &modulation);
        // Per symbol: constant + M linear + C(M,2) pairs.
        assert!(qubo.num_terms() <= 4 * (1 + 4 + 6));
    }

    #[test]
    fn xor_penalty_matches_hand_values() {
        let mut poly = MultilinearPolynomial::zero(4);
        add_xor_penalty(&mut poly, 0, 1, 2, 3, 1.0);
        // C_E(1,1) with (sum, carry) = (0,1) is 0; with (0,0) it is 4.
        assert_abs_diff_eq!(
            poly.evaluate(&[true, true, false, true]).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            poly.evaluate(&[true, true, false, false]).unwrap(),
            4.0,
            epsilon = 1e-12
        );
        // Exhaustive: equals (b_i + b_j - a - 2c)^2.
        for x in assignments(4) {
            let direct = (x[0] as i8 + x[1] as i8 - x[2] as i8 - 2 * x[3] as i8).pow(2);
            assert_abs_diff_eq!(poly.evaluate(&x).unwrap(), direct as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn constraint_qubo_counts_variables() {
        let code = PolarCode::new(4, 2, &[0, 2]).unwrap();
        let qubo = constraint_qubo(&code, &[1.0; 4], &PenaltyWeights::suggested(0.5)).unwrap();
        assert_eq!(qubo.num_vars(), 4 * 3);
        let code2 = PolarCode::new(2, 1, &[0]).unwrap();
        let qubo2 = constraint_qubo(&code2, &[1.0; 2], &PenaltyWeights::suggested(0.5)).unwrap();
        assert_eq!(qubo2.num_vars(), 4);
    }

    #[test]
    fn constraint_qubo_rejects_large_codes() {
        let code = PolarCode::new(16, 8, &[0, 1, 2, 3, 4, 5, 6, 8]).unwrap();
        assert!(matches!(
            constraint_qubo(&code, &[0.0; 16], &PenaltyWeights::suggested(0.5)),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn suggested_weights_follow_rate() {
        let w = PenaltyWeights::suggested(0.5);
        assert_eq!((w.encoding, w.frozen, w.receiver), (1.0, 4.0, 1.5));
    }

    #[test]
    fn constraint_qubo_noiseless_minimizer_recovers_codeword() {
        // Brute force over all 2^12 assignments at N = 4.
        let code = PolarCode::new(4, 2, &[0, 2]).unwrap();
        let weights = PenaltyWeights::suggested(code.rate());
        for codeword in code.enumerate_codewords().unwrap() {
            let y: Vec<f64> = codeword
                .iter()
                .map(|&b| 1.0 - 2.0 * b as u8 as f64)
                .collect();
            let qubo = constraint_qubo(&code, &y, &weights).unwrap();
            let best = assignments(qubo.num_vars())
                .min_by(|a, b| {
                    qubo.polynomial()
                        .evaluate(a)
                        .unwrap()
                        .partial_cmp(&qubo.polynomial().evaluate(b).unwrap())
                        .unwrap()
                })
                .unwrap();
            assert_eq!(qubo.codeword_layer(&best), codeword);
        }
    }
}
