//! Polar code model: encoding, codeword enumeration, and the CNOT schedule
//! that mirrors the encoder inside a quantum circuit.
//!
//! The generator matrix is the pure Kronecker power of the 2x2 kernel
//! `[[1,0],[1,1]]` with no bit-reversal permutation, and frozen bits are
//! fixed to 0. Frozen sets are explicit inputs; no reliability-based code
//! construction is performed here.

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Hard cap on `K` for exhaustive codeword enumeration.
pub const ENUMERATION_CAP: usize = 24;

/// A polar code: length `N = 2^n`, `K` information bits, explicit frozen set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarCode {
    n: usize,
    k: usize,
    log_n: usize,
    frozen: Vec<usize>,
    info: Vec<usize>,
}

/// Ordered `(control, target)` CNOT pairs realizing the encoder on a qubit
/// register: applying `target ^= control` in order maps a basis state holding
/// `u` to one holding `u G_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnotSchedule {
    pairs: Vec<(usize, usize)>,
}

impl CnotSchedule {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

impl PolarCode {
    /// Builds a code from its length, dimension, and sorted frozen index set.
    pub fn new(n: usize, k: usize, frozen: &[usize]) -> Result<Self> {
        if !n.is_power_of_two() || n < 2 {
            return Err(Error::invalid_parameter(format!(
                "code length must be a power of two >= 2, got {n}"
            )));
        }
        let log_n = n.trailing_zeros() as usize;
        let mut frozen: Vec<usize> = frozen.to_vec();
        frozen.sort_unstable();
        frozen.dedup();
        if frozen.len() != n - k {
            return Err(Error::invalid_parameter(format!(
                "expected {} distinct frozen indices, got {}",
                n - k,
                frozen.len()
            )));
        }
        if frozen.iter().any(|&i| i >= n) {
            return Err(Error::invalid_parameter(
                "frozen index out of range".to_string(),
            ));
        }
        let mut is_frozen = vec![false; n];
        for &i in &frozen {
            is_frozen[i] = true;
        }
        let info: Vec<usize> = (0..n).filter(|&i| !is_frozen[i]).collect();
        Ok(Self {
            n,
            k,
            log_n,
            frozen,
            info,
        })
    }

    /// Codeword length `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Information length `K`.
    pub fn k(&self) -> usize {
        self.k
    }

    /// `log2(N)`.
    pub fn log_n(&self) -> usize {
        self.log_n
    }

    /// Sorted frozen index set.
    pub fn frozen_set(&self) -> &[usize] {
        &self.frozen
    }

    /// Sorted information index set.
    pub fn info_set(&self) -> &[usize] {
        &self.info
    }

    /// Code rate `K/N`.
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Places information bits on the info positions, zeros elsewhere.
    pub fn expand_info_bits(&self, info_bits: &[bool]) -> Result<Bits> {
        if info_bits.len() != self.k {
            return Err(Error::invalid_input(format!(
                "expected {} information bits, got {}",
                self.k,
                info_bits.len()
            )));
        }
        let mut u = vec![false; self.n];
        for (&pos, &bit) in self.info.iter().zip(info_bits) {
            u[pos] = bit;
        }
        Ok(u)
    }

    /// Extracts the information bits of an input vector `u`.
    pub fn extract_info_bits(&self, u: &[bool]) -> Result<Bits> {
        if u.len() != self.n {
            return Err(Error::invalid_input(format!(
                "expected length {}, got {}",
                self.n,
                u.len()
            )));
        }
        Ok(self.info.iter().map(|&pos| u[pos]).collect())
    }

    /// Encodes an input vector: `x = u G_N` over GF(2).
    ///
    /// Frozen positions of `u` must be zero.
    pub fn encode(&self, u: &[bool]) -> Result<Bits> {
        if u.len() != self.n {
            return Err(Error::invalid_input(format!(
                "expected length {}, got {}",
                self.n,
                u.len()
            )));
        }
        if let Some(&i) = self.frozen.iter().find(|&&i| u[i]) {
            return Err(Error::invalid_input(format!(
                "frozen bit at index {i} must be zero"
            )));
        }
        let mut x = u.to_vec();
        kernel_transform(&mut x);
        Ok(x)
    }

    /// Inverts a codeword: `u = x G_N` (the generator is involutive over GF(2)).
    pub fn invert(&self, x: &[bool]) -> Result<Bits> {
        if x.len() != self.n {
            return Err(Error::invalid_input(format!(
                "expected length {}, got {}",
                self.n,
                x.len()
            )));
        }
        let mut u = x.to_vec();
        kernel_transform(&mut u);
        Ok(u)
    }

    /// Enumerates all `2^K` codewords, ordered lexicographically by the
    /// information-bit pattern `(u_{A[0]}, ..., u_{A[K-1]})`.
    pub fn enumerate_codewords(&self) -> Result<Vec<Bits>> {
        if self.k > ENUMERATION_CAP {
            return Err(Error::resource_limit(format!(
                "enumeration of 2^{} codewords exceeds cap K <= {ENUMERATION_CAP}",
                self.k
            )));
        }
        let mut out = Vec::with_capacity(1usize << self.k);
        for pattern in 0..(1usize << self.k) {
            let info = self.info_pattern_bits(pattern);
            let u = self.expand_info_bits(&info)?;
            out.push(self.encode(&u)?);
        }
        Ok(out)
    }

    /// Information bits of enumeration `pattern`, `A[0]` most significant.
    pub fn info_pattern_bits(&self, pattern: usize) -> Bits {
        (0..self.k)
            .map(|j| (pattern >> (self.k - 1 - j)) & 1 == 1)
            .collect()
    }

    /// The CNOT `(control, target)` schedule mirroring the encoder: the
    /// standard recursive butterfly, `(N/2) log2 N` pairs, within-block XORs
    /// first.
    pub fn cnot_schedule(&self) -> CnotSchedule {
        let mut pairs = Vec::with_capacity(self.n / 2 * self.log_n);
        let mut step = 1;
        while step < self.n {
            for block in (0..self.n).step_by(2 * step) {
                for offset in 0..step {
                    let target = block + offset;
                    let control = block + offset + step;
                    pairs.push((control, target));
                }
            }
            step *= 2;
        }
        CnotSchedule { pairs }
    }
}

/// In-place butterfly for `x = u G_N` with `G_N` the Kronecker power of the
/// `[[1,0],[1,1]]` kernel.
fn kernel_transform(bits: &mut [bool]) {
    let n = bits.len();
    let mut step = 1;
    while step < n {
        for block in (0..n).step_by(2 * step) {
            for offset in 0..step {
                bits[block + offset] ^= bits[block + offset + step];
            }
        }
        step *= 2;
    }
}

/// The generator matrix `G_N` as dense rows: the n-th Kronecker power of
/// `[[1,0],[1,1]]` (lower triangular, unit diagonal).
pub fn generator_matrix(n: usize) -> Result<Vec<Vec<bool>>> {
    if n < 1 {
        return Err(Error::invalid_parameter(format!(
            "Kronecker power must be >= 1, got {n}"
        )));
    }
    let mut g = vec![vec![true]];
    for _ in 0..n {
        let size = g.len();
        let mut next = vec![vec![false; 2 * size]; 2 * size];
        for (i, row) in g.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                next[i][j] = v;
                next[i + size][j] = v;
                next[i + size][j + size] = v;
            }
        }
        g = next;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{bits_from_str, bits_to_string};
    use proptest::prelude::*;
    use rand::prelude::*;

    fn code_4_2() -> PolarCode {
        PolarCode::new(4, 2, &[0, 2]).unwrap()
    }

    /// Independent GF(2) row-vector times matrix product.
    fn matmul_gf2(u: &[bool], g: &[Vec<bool>]) -> Bits {
        let n = g.len();
        (0..n)
            .map(|j| (0..n).fold(false, |acc, i| acc ^ (u[i] & g[i][j])))
            .collect()
    }

    #[test]
    fn generator_matrix_order_one_is_the_kernel() {
        let g = generator_matrix(1).unwrap();
        assert_eq!(g, vec![vec![true, false], vec![true, true]]);
    }

    #[test]
    fn generator_matrix_order_two_matches_kronecker_square() {
        let g = generator_matrix(2).unwrap();
        let expected: Vec<Vec<bool>> = [[1, 0, 0, 0], [1, 1, 0, 0], [1, 0, 1, 0], [1, 1, 1, 1]]
            .iter()
            .map(|row| row.iter().map(|&b| b == 1).collect())
            .collect();
        assert_eq!(g, expected);
    }

    #[test]
    fn generator_matrix_is_involutive() {
        for n in 1..=4 {
            let g = generator_matrix(n).unwrap();
            let size = g.len();
            for i in 0..size {
                let row: Bits = (0..size).map(|j| i == j).collect();
                let gi = matmul_gf2(&row, &g);
                assert_eq!(matmul_gf2(&gi, &g), row, "G_N^2 != I at n={n} row {i}");
            }
        }
    }

    #[test]
    fn generator_matrix_rejects_zero_order() {
        assert!(matches!(
            generator_matrix(0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn encode_matches_spelled_out_examples() {
        let code = code_4_2();
        let zero = code.encode(&bits_from_str("0000").unwrap()).unwrap();
        assert_eq!(bits_to_string(&zero), "0000");
        let x = code.encode(&bits_from_str("0101").unwrap()).unwrap();
        assert_eq!(bits_to_string(&x), "0011");
        let x = code.encode(&bits_from_str("0100").unwrap()).unwrap();
        assert_eq!(bits_to_string(&x), "1100");
    }

    #[test]
    fn encode_agrees_with_matrix_product() {
        let mut rng = StdRng::seed_from_u64(1);
        for log_n in 1..=4 {
            let n = 1 << log_n;
            let g = generator_matrix(log_n).unwrap();
            let code = PolarCode::new(n, n, &[]).unwrap();
            for _ in 0..50 {
                let u: Bits = (0..n).map(|_| rng.random()).collect();
                assert_eq!(code.encode(&u).unwrap(), matmul_gf2(&u, &g));
            }
        }
    }

    #[test]
    fn encode_rejects_nonzero_frozen_bit() {
        let code = code_4_2();
        let err = code.encode(&bits_from_str("1000").unwrap()).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn encode_rejects_wrong_length() {
        let code = code_4_2();
        assert!(code.encode(&bits_from_str("010").unwrap()).is_err());
        assert!(code.invert(&bits_from_str("01011").unwrap()).is_err());
    }

    #[test]
    fn invert_matches_example_and_zero() {
        let code = code_4_2();
        let u = code.invert(&bits_from_str("0011").unwrap()).unwrap();
        assert_eq!(bits_to_string(&u), "0101");
        let z = code.invert(&bits_from_str("0000").unwrap()).unwrap();
        assert_eq!(bits_to_string(&z), "0000");
    }

    #[test]
    fn enumerate_small_codes() {
        let set: Vec<String> = code_4_2()
            .enumerate_codewords()
            .unwrap()
            .iter()
            .map(|c| bits_to_string(c))
            .collect();
        let mut sorted = set.clone();
        sorted.sort();
        assert_eq!(sorted, vec!["0000", "0011", "1100", "1111"]);

        let rep = PolarCode::new(2, 1, &[0]).unwrap();
        let words: Vec<String> = rep
            .enumerate_codewords()
            .unwrap()
            .iter()
            .map(|c| bits_to_string(c))
            .collect();
        assert_eq!(words, vec!["00", "11"]);
    }

    #[test]
    fn enumerate_is_lexicographic_and_duplicate_free() {
        let code = PolarCode::new(8, 4, &[0, 1, 2, 4]).unwrap();
        let words = code.enumerate_codewords().unwrap();
        assert_eq!(words.len(), 1 << code.k());
        let mut seen = std::collections::HashSet::new();
        for (pattern, word) in words.iter().enumerate() {
            assert!(seen.insert(word.clone()), "duplicate codeword");
            let info = code.info_pattern_bits(pattern);
            let u = code.expand_info_bits(&info).unwrap();
            assert_eq!(&code.encode(&u).unwrap(), word);
        }
    }

    #[test]
    fn enumerate_respects_cap() {
        let code = PolarCode::new(1 << 25, 1 << 25, &[]).unwrap();
        assert!(matches!(
            code.enumerate_codewords(),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn cnot_schedule_counts_and_depth_two_structure() {
        let code = code_4_2();
        let schedule = code.cnot_schedule();
        assert_eq!(schedule.len(), 4);
        // First stage touches disjoint qubit pairs, so depth 2 is realizable.
        let (a, b) = (schedule.pairs()[0], schedule.pairs()[1]);
        let first_stage: std::collections::HashSet<usize> =
            [a.0, a.1, b.0, b.1].into_iter().collect();
        assert_eq!(first_stage.len(), 4);

        let big = PolarCode::new(16, 8, &[0, 1, 2, 3, 4, 5, 6, 8]).unwrap();
        assert_eq!(big.cnot_schedule().len(), 32);
    }

    #[test]
    fn cnot_schedule_replays_the_encoder() {
        let code = code_4_2();
        let mut reg = bits_from_str("0101").unwrap();
        for &(control, target) in code.cnot_schedule().pairs() {
            let c = reg[control];
            reg[target] ^= c;
        }
        assert_eq!(bits_to_string(&reg), "0011");
    }

    #[test]
    fn cnot_schedule_equals_encode_exhaustively() {
        for (n, k, frozen) in [
            (4usize, 2usize, vec![0usize, 2]),
            (8, 4, vec![0, 1, 2, 4]),
            (16, 8, vec![0, 1, 2, 3, 4, 5, 6, 8]),
        ] {
            let code = PolarCode::new(n, k, &frozen).unwrap();
            let schedule = code.cnot_schedule();
            assert!(schedule.pairs().iter().all(|&(c, t)| c != t));
            for pattern in 0..(1usize << k) {
                let u = code
                    .expand_info_bits(&code.info_pattern_bits(pattern))
                    .unwrap();
                let mut reg = u.clone();
                for &(control, target) in schedule.pairs() {
                    let c = reg[control];
                    reg[target] ^= c;
                }
                assert_eq!(reg, code.encode(&u).unwrap());
            }
        }
    }

    #[test]
    fn cnot_schedule_equals_encode_randomized_at_larger_sizes() {
        let mut rng = StdRng::seed_from_u64(6);
        for n in [32usize, 64] {
            let code = PolarCode::new(n, n, &[]).unwrap();
            let schedule = code.cnot_schedule();
            assert_eq!(schedule.len(), n / 2 * code.log_n());
            for _ in 0..100 {
                let u: Bits = (0..n).map(|_| rng.random()).collect();
                let mut reg = u.clone();
                for &(control, target) in schedule.pairs() {
                    let c = reg[control];
                    reg[target] ^= c;
                }
                assert_eq!(reg, code.encode(&u).unwrap());
            }
        }
    }

    proptest! {
        #[test]
        fn encode_invert_roundtrip(bits in proptest::collection::vec(any::<bool>(), 16)) {
            let code = PolarCode::new(16, 16, &[]).unwrap();
            let x = code.encode(&bits).unwrap();
            prop_assert_eq!(code.invert(&x).unwrap(), bits);
        }
    }
}
