//! A decoding problem instance: code, modulation, received vector, and
//! interleaver, plus the bit-layout transforms both decoders share.
//!
//! Multi-level variables are laid out as `x_{s,i} -> s*N + i`. The
//! transmit-side pipeline per level-encoded block is: flatten levels,
//! interleave (`out[j] = in[perm[j]]`), form the symbol labels
//! `z_i = (b_{0,i}, ..., b_{M-1,i})`, and map through the Gray constellation.
//! GAS search variables are these interleaved bits, optionally pushed through
//! the per-symbol Gray-to-natural bit transform when the degree-2 objective
//! is in use.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::modem::{binary_to_gray, gray_to_binary, ModulationScheme};
use crate::objective;
use crate::polar::{PolarCode, ENUMERATION_CAP};
use crate::poly::MultilinearPolynomial;

/// Which objective polynomial drives the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveKind {
    /// First-order BPSK objective (constant dropped); BPSK only.
    BpskSimplified,
    /// Degree-M objective over raw Gray-labeled bits; no bit transform.
    GrayHubo,
    /// Degree-2 objective over per-symbol transformed bits.
    NaturalQubo,
}

impl ObjectiveKind {
    /// Whether the search variables are per-symbol transformed bits.
    pub fn uses_bit_transform(&self) -> bool {
        matches!(self, ObjectiveKind::NaturalQubo)
    }
}

/// The unit consumed by both decoders.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    code: PolarCode,
    modulation: ModulationScheme,
    y: Vec<f64>,
    interleaver: Vec<usize>,
}

impl ProblemInstance {
    /// Builds an instance with an explicit interleaver (a permutation of the
    /// `M*N` bit positions; `out[j] = in[perm[j]]`).
    pub fn new(
        code: PolarCode,
        modulation: ModulationScheme,
        y: Vec<f64>,
        interleaver: Vec<usize>,
    ) -> Result<Self> {
        if y.len() != code.n() {
            return Err(Error::invalid_input(format!(
                "received vector length {} does not match code length {}",
                y.len(),
                code.n()
            )));
        }
        let positions = modulation.bits_per_symbol() * code.n();
        let mut seen = vec![false; positions];
        let valid = interleaver.len() == positions
            && interleaver.iter().all(|&p| {
                if p >= positions || seen[p] {
                    false
                } else {
                    seen[p] = true;
                    true
                }
            });
        if !valid {
            return Err(Error::invalid_input(format!(
                "interleaver must be a permutation of 0..{positions}"
            )));
        }
        Ok(Self {
            code,
            modulation,
            y,
            interleaver,
        })
    }

    /// Builds an instance with the identity interleaver.
    pub fn without_interleaver(
        code: PolarCode,
        modulation: ModulationScheme,
        y: Vec<f64>,
    ) -> Result<Self> {
        let positions = modulation.bits_per_symbol() * code.n();
        Self::new(code, modulation, y, (0..positions).collect())
    }

    pub fn code(&self) -> &PolarCode {
        &self.code
    }

    pub fn modulation(&self) -> &ModulationScheme {
        &self.modulation
    }

    pub fn received(&self) -> &[f64] {
        &self.y
    }

    pub fn interleaver(&self) -> &[usize] {
        &self.interleaver
    }

    /// Bit levels per symbol `M`.
    pub fn levels(&self) -> usize {
        self.modulation.bits_per_symbol()
    }

    /// Search variables `M*N`.
    pub fn num_vars(&self) -> usize {
        self.levels() * self.code.n()
    }

    /// Total information bits `M*K`.
    pub fn info_len(&self) -> usize {
        self.levels() * self.code.k()
    }

    /// Exponent of the valid search-space size, `M*K`.
    pub fn search_exponent(&self) -> usize {
        self.info_len()
    }

    /// Default objective: simplified linear form for BPSK, degree-2 QUBO for
    /// multi-level PAM.
    pub fn default_objective_kind(&self) -> ObjectiveKind {
        if self.levels() == 1 {
            ObjectiveKind::BpskSimplified
        } else {
            ObjectiveKind::NaturalQubo
        }
    }

    /// Builds the requested objective polynomial for this instance.
    pub fn objective(&self, kind: ObjectiveKind) -> Result<MultilinearPolynomial> {
        match kind {
            ObjectiveKind::BpskSimplified => {
                if self.levels() != 1 {
                    return Err(Error::Config(
                        "the simplified objective requires BPSK".to_string(),
                    ));
                }
                Ok(objective::bpsk_simplified(&self.y))
            }
            ObjectiveKind::GrayHubo => Ok(objective::gray_hubo(&self.y, &self.modulation)),
            ObjectiveKind::NaturalQubo => Ok(objective::natural_qubo(&self.y, &self.modulation)),
        }
    }

    /// Splits `M*K` information bits into per-level blocks and encodes each.
    pub fn encode_levels(&self, info_bits: &[bool]) -> Result<Vec<Bits>> {
        let k = self.code.k();
        if info_bits.len() != self.info_len() {
            return Err(Error::invalid_input(format!(
                "expected {} information bits, got {}",
                self.info_len(),
                info_bits.len()
            )));
        }
        (0..self.levels())
            .map(|level| {
                let chunk = &info_bits[level * k..(level + 1) * k];
                let u = self.code.expand_info_bits(chunk)?;
                self.code.encode(&u)
            })
            .collect()
    }

    /// Recovers the concatenated information bits from per-level codewords.
    pub fn info_bits_from_codewords(&self, levels: &[Bits]) -> Result<Bits> {
        let mut info = Vec::with_capacity(self.info_len());
        for codeword in levels {
            let u = self.code.invert(codeword)?;
            info.extend(self.code.extract_info_bits(&u)?);
        }
        Ok(info)
    }

    /// Flattens per-level codewords into the `s*N + i` variable layout and
    /// applies the interleaver.
    pub fn interleaved_bits(&self, levels: &[Bits]) -> Result<Bits> {
        let n = self.code.n();
        if levels.len() != self.levels() || levels.iter().any(|l| l.len() != n) {
            return Err(Error::invalid_input(
                "expected one length-N codeword per level".to_string(),
            ));
        }
        let flat: Bits = levels.iter().flatten().copied().collect();
        Ok(self.interleaver.iter().map(|&p| flat[p]).collect())
    }

    /// Symbol coordinates transmitted for the given per-level codewords.
    pub fn modulate(&self, levels: &[Bits]) -> Result<Vec<f64>> {
        let bits = self.interleaved_bits(levels)?;
        (0..self.code.n())
            .map(|i| self.modulation.map_gray(&self.symbol_label(&bits, i)))
            .collect()
    }

    /// The i-th symbol label from interleaved bits.
    fn symbol_label(&self, bits: &[bool], i: usize) -> Bits {
        let n = self.code.n();
        (0..self.levels()).map(|s| bits[s * n + i]).collect()
    }

    /// The literal squared-distance between the received vector and the
    /// symbols for these codewords.
    pub fn distance_to(&self, levels: &[Bits]) -> Result<f64> {
        let symbols = self.modulate(levels)?;
        Ok(self
            .y
            .iter()
            .zip(&symbols)
            .map(|(&received, &sent)| (received - sent).powi(2))
            .sum())
    }

    /// The search-variable assignment representing these codewords under the
    /// given objective.
    pub fn assignment_for(&self, levels: &[Bits], kind: ObjectiveKind) -> Result<Bits> {
        let bits = self.interleaved_bits(levels)?;
        if kind.uses_bit_transform() {
            Ok(self.transform_per_symbol(&bits, gray_to_binary))
        } else {
            Ok(bits)
        }
    }

    /// Recovers per-level codewords from a measured assignment: inverse
    /// per-symbol bit transform, de-interleave, unflatten.
    pub fn codewords_from_assignment(
        &self,
        assignment: &[bool],
        kind: ObjectiveKind,
    ) -> Result<Vec<Bits>> {
        if assignment.len() != self.num_vars() {
            return Err(Error::invalid_input(format!(
                "expected {} assignment bits, got {}",
                self.num_vars(),
                assignment.len()
            )));
        }
        let interleaved: Bits = if kind.uses_bit_transform() {
            self.transform_per_symbol(assignment, binary_to_gray)
        } else {
            assignment.to_vec()
        };
        let mut flat = vec![false; self.num_vars()];
        for (j, &p) in self.interleaver.iter().enumerate() {
            flat[p] = interleaved[j];
        }
        let n = self.code.n();
        Ok((0..self.levels())
            .map(|s| flat[s * n..(s + 1) * n].to_vec())
            .collect())
    }

    fn transform_per_symbol(&self, bits: &[bool], transform: impl Fn(&[bool]) -> Bits) -> Bits {
        let n = self.code.n();
        let mut out = vec![false; bits.len()];
        for i in 0..n {
            let label = self.symbol_label(bits, i);
            for (s, &bit) in transform(&label).iter().enumerate() {
                out[s * n + i] = bit;
            }
        }
        out
    }

    /// Enumerates every valid assignment together with its information bits,
    /// ordered lexicographically by the concatenated information pattern.
    pub fn valid_assignments(&self, kind: ObjectiveKind) -> Result<Vec<ValidAssignment>> {
        let mk = self.info_len();
        if mk > ENUMERATION_CAP {
            return Err(Error::resource_limit(format!(
                "enumeration of 2^{mk} valid states exceeds cap 2^{ENUMERATION_CAP}"
            )));
        }
        (0..(1usize << mk))
            .map(|pattern| {
                let info: Bits = (0..mk)
                    .map(|j| (pattern >> (mk - 1 - j)) & 1 == 1)
                    .collect();
                let levels = self.encode_levels(&info)?;
                let assignment = self.assignment_for(&levels, kind)?;
                Ok(ValidAssignment {
                    info_bits: info,
                    codeword_levels: levels,
                    assignment,
                })
            })
            .collect()
    }
}

/// One valid search point: information bits, codeword levels, and the
/// corresponding variable assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidAssignment {
    pub info_bits: Bits,
    pub codeword_levels: Vec<Bits>,
    pub assignment: Bits,
}
