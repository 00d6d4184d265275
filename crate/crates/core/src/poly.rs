//! Real-coefficient multilinear polynomials over binary variables, plus the
//! fixed-point quantization used by the value register.
//!
//! Terms are keyed by sorted variable-index subsets; multiplication uses the
//! binary idempotence `x^2 = x`, so every product stays multilinear. Zero
//! coefficients are never stored.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Coefficients below this magnitude are dropped as numeric noise.
const COEFF_EPS: f64 = 1e-15;

/// A multilinear polynomial over `num_vars` binary variables.
#[derive(Debug, Clone, PartialEq)]
pub struct MultilinearPolynomial {
    num_vars: usize,
    terms: BTreeMap<Vec<usize>, f64>,
}

impl MultilinearPolynomial {
    pub fn zero(num_vars: usize) -> Self {
        Self {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, value: f64) -> Self {
        let mut poly = Self::zero(num_vars);
        poly.add_term(&[], value);
        poly
    }

    /// A single variable `x_i` as a degree-1 polynomial.
    pub fn variable(num_vars: usize, index: usize) -> Self {
        assert!(index < num_vars, "variable index out of range");
        let mut poly = Self::zero(num_vars);
        poly.add_term(&[index], 1.0);
        poly
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Highest subset size among stored terms (0 for constants and zero).
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|vars| vars.len()).max().unwrap_or(0)
    }

    pub fn constant_term(&self) -> f64 {
        self.terms.get(&Vec::new()).copied().unwrap_or(0.0)
    }

    /// Iterates `(variable subset, coefficient)` in deterministic order.
    pub fn terms(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.terms
            .iter()
            .map(|(vars, &coeff)| (vars.as_slice(), coeff))
    }

    /// Adds `coeff * prod_{i in vars} x_i`; repeated indices collapse via
    /// `x^2 = x`.
    pub fn add_term(&mut self, vars: &[usize], coeff: f64) {
        let mut key: Vec<usize> = vars.to_vec();
        key.sort_unstable();
        key.dedup();
        assert!(
            key.iter().all(|&v| v < self.num_vars),
            "variable index out of range"
        );
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().abs() < COEFF_EPS {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                if coeff.abs() >= COEFF_EPS {
                    e.insert(coeff);
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.num_vars, other.num_vars, "variable count mismatch");
        for (vars, coeff) in other.terms() {
            self.add_term(vars, coeff);
        }
    }

    pub fn scale(&mut self, factor: f64) {
        if factor == 0.0 {
            self.terms.clear();
            return;
        }
        for coeff in self.terms.values_mut() {
            *coeff *= factor;
        }
    }

    /// Product of two multilinear polynomials over the same variables.
    pub fn multiply(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars, "variable count mismatch");
        let mut out = Self::zero(self.num_vars);
        for (a_vars, a_coeff) in self.terms() {
            for (b_vars, b_coeff) in other.terms() {
                let mut vars = a_vars.to_vec();
                vars.extend_from_slice(b_vars);
                out.add_term(&vars, a_coeff * b_coeff);
            }
        }
        out
    }

    /// Evaluates the polynomial at a binary assignment.
    pub fn evaluate(&self, assignment: &[bool]) -> Result<f64> {
        if assignment.len() != self.num_vars {
            return Err(Error::invalid_input(format!(
                "expected {} variables, got {}",
                self.num_vars,
                assignment.len()
            )));
        }
        Ok(self
            .terms()
            .filter(|(vars, _)| vars.iter().all(|&v| assignment[v]))
            .map(|(_, coeff)| coeff)
            .sum())
    }

    /// Rounds coefficients to integers at scale `2^scale_bits`.
    pub fn quantize(&self, scale_bits: u32) -> QuantizedPolynomial {
        let scale = (1u64 << scale_bits) as f64;
        let terms: BTreeMap<Vec<usize>, i64> = self
            .terms
            .iter()
            .filter_map(|(vars, &coeff)| {
                let q = (coeff * scale).round() as i64;
                (q != 0).then(|| (vars.clone(), q))
            })
            .collect();
        QuantizedPolynomial {
            num_vars: self.num_vars,
            scale_bits,
            terms,
        }
    }

    /// JSON form `{num_vars, terms: [{vars, coeff}]}` with terms in
    /// deterministic order.
    pub fn to_json(&self) -> String {
        let repr = PolynomialRepr {
            num_vars: self.num_vars,
            terms: self
                .terms()
                .map(|(vars, coeff)| TermRepr {
                    vars: vars.to_vec(),
                    coeff,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&repr).expect("polynomial serialization")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let repr: PolynomialRepr = serde_json::from_str(json)
            .map_err(|e| Error::invalid_input(format!("polynomial JSON: {e}")))?;
        let mut poly = Self::zero(repr.num_vars);
        for term in repr.terms {
            if term.vars.iter().any(|&v| v >= repr.num_vars) {
                return Err(Error::invalid_input(
                    "term variable index out of range".to_string(),
                ));
            }
            poly.add_term(&term.vars, term.coeff);
        }
        Ok(poly)
    }
}

#[derive(Serialize, Deserialize)]
struct PolynomialRepr {
    num_vars: usize,
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    vars: Vec<usize>,
    coeff: f64,
}

/// Integer-coefficient polynomial at a fixed-point scale `2^scale_bits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantizedPolynomial {
    num_vars: usize,
    scale_bits: u32,
    terms: BTreeMap<Vec<usize>, i64>,
}

impl QuantizedPolynomial {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn scale_bits(&self) -> u32 {
        self.scale_bits
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], i64)> {
        self.terms
            .iter()
            .map(|(vars, &coeff)| (vars.as_slice(), coeff))
    }

    pub fn constant_term(&self) -> i64 {
        self.terms.get(&Vec::new()).copied().unwrap_or(0)
    }

    /// Integer value at a binary assignment.
    pub fn evaluate(&self, assignment: &[bool]) -> Result<i64> {
        if assignment.len() != self.num_vars {
            return Err(Error::invalid_input(format!(
                "expected {} variables, got {}",
                self.num_vars,
                assignment.len()
            )));
        }
        Ok(self
            .terms()
            .filter(|(vars, _)| vars.iter().all(|&v| assignment[v]))
            .map(|(_, coeff)| coeff)
            .sum())
    }

    /// Quantized value mapped back to the real scale.
    pub fn descale(&self, value: i64) -> f64 {
        value as f64 / (1u64 << self.scale_bits) as f64
    }

    /// Interval-arithmetic bounds: each non-constant term contributes either 0
    /// or its coefficient, so the sum of per-term extremes upper-bounds the
    /// true range.
    pub fn interval_bounds(&self) -> (i64, i64) {
        let mut lo = 0i64;
        let mut hi = 0i64;
        for (vars, coeff) in self.terms() {
            if vars.is_empty() {
                lo += coeff;
                hi += coeff;
            } else if coeff < 0 {
                lo += coeff;
            } else {
                hi += coeff;
            }
        }
        (lo, hi)
    }
}

/// Value-register sizing: qubit count `m` and the fixed-point scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValueRegisterSpec {
    /// Value-qubit count; the most significant qubit is the sign.
    pub m: u32,
    /// Fixed-point fractional bits of the quantization.
    pub scale_bits: u32,
}

/// Smallest `m` with `-2^(m-1) <= lo` and `hi < 2^(m-1)`.
fn min_register_bits(lo: i64, hi: i64) -> u32 {
    let mut m = 1u32;
    while !((-(1i128 << (m - 1)) <= lo as i128) && ((hi as i128) < (1i128 << (m - 1)))) {
        m += 1;
    }
    m
}

/// Sizes the value register for a polynomial quantized at `2^scale_bits`,
/// using interval-arithmetic bounds on the integer range.
pub fn value_register_spec(poly: &MultilinearPolynomial, scale_bits: u32) -> ValueRegisterSpec {
    let (lo, hi) = poly.quantize(scale_bits).interval_bounds();
    ValueRegisterSpec {
        m: min_register_bits(lo, hi),
        scale_bits,
    }
}

/// Smallest `m` able to hold `E_q(x) - c` in two's complement for every
/// attainable `x` and every threshold `c` inside the polynomial's own range.
pub fn threshold_register_bits(qpoly: &QuantizedPolynomial) -> u32 {
    let (lo, hi) = qpoly.interval_bounds();
    let spread = hi - lo;
    min_register_bits(-spread, spread)
}

/// Largest scale (fractional bits, up to 24) at which every
/// threshold-shifted value of the polynomial fits an `m`-qubit register.
pub fn fit_scale_bits(poly: &MultilinearPolynomial, m: u32) -> Option<u32> {
    (0..=24u32)
        .rev()
        .find(|&bits| threshold_register_bits(&poly.quantize(bits)) <= m)
}
