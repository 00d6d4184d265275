//! Ground-truth decoders: exhaustive classical ML over valid codewords and
//! brute-force minimization of unconstrained binary objectives.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::instance::ProblemInstance;
use crate::polar::PolarCode;
use crate::poly::MultilinearPolynomial;

/// Largest variable count accepted by [`brute_force_min`].
pub const BRUTE_FORCE_VAR_CAP: usize = 20;

/// Exhaustive ML result: every minimizer in enumeration order plus the
/// minimum distance.
#[derive(Debug, Clone, PartialEq)]
pub struct MlResult {
    /// All argmin entries, ordered lexicographically by information pattern.
    pub minimizers: Vec<MlMinimizer>,
    pub min_distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlMinimizer {
    pub info_bits: Bits,
    pub codeword_levels: Vec<Bits>,
}

impl MlResult {
    /// The tie-break representative: lexicographically smallest info pattern.
    pub fn representative(&self) -> &MlMinimizer {
        &self.minimizers[0]
    }

    /// Whether the given information bits belong to the argmin set.
    pub fn contains_info(&self, info_bits: &[bool]) -> bool {
        self.minimizers.iter().any(|m| m.info_bits == info_bits)
    }

    pub fn has_ties(&self) -> bool {
        self.minimizers.len() > 1
    }
}

/// Evaluates the literal symbol distance for every one of the `2^(M K)`
/// codeword combinations and returns all minimizers (ties preserved).
pub fn ml_decode_bruteforce(instance: &ProblemInstance) -> Result<MlResult> {
    let mk = instance.info_len();
    if mk > crate::polar::ENUMERATION_CAP {
        return Err(Error::resource_limit(format!(
            "ML brute force over 2^{mk} candidates exceeds cap"
        )));
    }
    let mut minimizers: Vec<MlMinimizer> = Vec::new();
    let mut min_distance = f64::INFINITY;
    for pattern in 0..(1usize << mk) {
        let info: Bits = (0..mk)
            .map(|j| (pattern >> (mk - 1 - j)) & 1 == 1)
            .collect();
        let levels = instance.encode_levels(&info)?;
        let distance = instance.distance_to(&levels)?;
        if distance < min_distance {
            min_distance = distance;
            minimizers.clear();
        }
        if distance == min_distance {
            minimizers.push(MlMinimizer {
                info_bits: info,
                codeword_levels: levels,
            });
        }
    }
    Ok(MlResult {
        minimizers,
        min_distance,
    })
}

/// Exhaustive minimization of a multilinear polynomial over all binary
/// assignments; ties preserved in ascending assignment order.
pub fn brute_force_min(poly: &MultilinearPolynomial) -> Result<(Vec<Bits>, f64)> {
    let num_vars = poly.num_vars();
    if num_vars > BRUTE_FORCE_VAR_CAP {
        return Err(Error::resource_limit(format!(
            "brute force over 2^{num_vars} assignments exceeds cap 2^{BRUTE_FORCE_VAR_CAP}"
        )));
    }
    let mut minimizers: Vec<Bits> = Vec::new();
    let mut min_value = f64::INFINITY;
    for index in 0..(1usize << num_vars) {
        let assignment: Bits = (0..num_vars).map(|j| (index >> j) & 1 == 1).collect();
        let value = poly.evaluate(&assignment)?;
        if value < min_value {
            min_value = value;
            minimizers.clear();
        }
        if value == min_value {
            minimizers.push(assignment);
        }
    }
    Ok((minimizers, min_value))
}

/// Which problem formulation a search-space figure refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    /// Valid-codeword search: `M*K` binary decisions.
    ValidCodeword,
    /// Constraint-based QUBO with encoder ancillas:
    /// `M * N * (log2 N + 1)` variables.
    ConstraintQubo,
}

/// Base-2 exponent of the search-space size for a code/modulation pair.
pub fn search_space_exponent(code: &PolarCode, levels: usize, formulation: Formulation) -> usize {
    match formulation {
        Formulation::ValidCodeword => levels * code.k(),
        Formulation::ConstraintQubo => levels * code.n() * (code.log_n() + 1),
    }
}
