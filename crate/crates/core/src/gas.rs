//! Grover adaptive search: the adaptive-threshold loop, rotation-count
//! sampling, modified uniform sampling over valid codewords, and complexity
//! accounting, with two interchangeable measurement backends.
//!
//! The `Statevector` backend simulates the full circuit exactly; the
//! `Analytic` backend replaces the circuit with the closed-form Grover
//! success law over the enumerated valid states, which keeps large trial
//! counts cheap while remaining distribution-equivalent.
//!
//! Thresholds are carried in quantized integer units so the dictionary's
//! threshold shift stays exact; marking uses strict `E_q(x) < c_q`.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::instance::{ObjectiveKind, ProblemInstance, ValidAssignment};
use crate::poly::{threshold_register_bits, MultilinearPolynomial, QuantizedPolynomial};
use crate::sim::{
    dictionary_circuit, grover_operator, initial_state_circuit, Circuit, DictionaryMode,
    RegisterLayout, StateVector,
};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_4;

/// Measurement backend selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GasBackend {
    /// Closed-form Grover dynamics over the enumerated valid states.
    Analytic,
    /// Exact gate-level statevector simulation.
    Statevector,
}

impl std::str::FromStr for GasBackend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "analytic" => Ok(GasBackend::Analytic),
            "statevector" => Ok(GasBackend::Statevector),
            other => Err(Error::invalid_parameter(format!(
                "unknown backend {other:?} (expected analytic or statevector)"
            ))),
        }
    }
}

/// Search configuration. `max_classical_iterations` defaults to
/// `ceil(10 * sqrt(2^(M K)))` and the value-register width to the smallest
/// size that fits every threshold-shifted objective value.
#[derive(Debug, Clone)]
pub struct GasConfig {
    /// Rotation-bound growth factor, `> 1`.
    pub lambda: f64,
    pub backend: GasBackend,
    /// Consecutive non-improving measurements tolerated after the rotation
    /// bound saturates.
    pub patience: usize,
    pub max_classical_iterations: Option<usize>,
    /// Fixed-point fractional bits for objective quantization.
    pub scale_bits: u32,
    /// Value-register width override (statevector backend).
    pub value_qubits: Option<u32>,
    /// Objective override; defaults per modulation.
    pub objective: Option<ObjectiveKind>,
}

impl Default for GasConfig {
    fn default() -> Self {
        Self {
            lambda: 8.0 / 7.0,
            backend: GasBackend::Analytic,
            patience: 30,
            max_classical_iterations: None,
            scale_bits: 8,
            value_qubits: None,
            objective: None,
        }
    }
}

impl GasConfig {
    fn validate(&self) -> Result<()> {
        if self.lambda.is_nan() || self.lambda <= 1.0 {
            return Err(Error::Config(format!(
                "growth factor must exceed 1, got {}",
                self.lambda
            )));
        }
        if self.patience < 1 {
            return Err(Error::Config("patience must be >= 1".to_string()));
        }
        Ok(())
    }
}

/// CD/QD accounting of one search run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityReport {
    /// Classical objective evaluations: loop iterations executed.
    pub cd: usize,
    /// Grover operators applied in total.
    pub qd: usize,
    /// Whether the incumbent reached the quantized-objective minimum.
    pub reached_optimum: bool,
    /// Classical iteration count at which the incumbent first reached the
    /// minimum (0 when the initial sample was already optimal).
    pub optimum_iteration: Option<usize>,
    /// Grover operators applied up to that point.
    pub qd_at_optimum: Option<usize>,
}

/// One loop iteration: sampled rotation count, measured assignment, and its
/// objective value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub rotations: usize,
    pub measured: Bits,
    pub objective_q: i64,
    pub objective: f64,
    pub improved: bool,
}

/// Result of one GAS decode.
#[derive(Debug, Clone)]
pub struct GasOutcome {
    pub decoded_codewords: Vec<Bits>,
    pub decoded_info: Bits,
    pub incumbent_assignment: Bits,
    pub incumbent_value_q: i64,
    pub incumbent_value: f64,
    pub objective_kind: ObjectiveKind,
    pub report: ComplexityReport,
    pub history: Vec<IterationRecord>,
}

/// Per-run JSON record: the wire format consumed by downstream tooling.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr_db: Option<f64>,
    pub code: CodeDescriptor,
    pub modulation: String,
    pub backend: GasBackend,
    /// Concatenated decoded codeword levels, index 0 leftmost.
    pub decoded_bits: String,
    pub info_bits: String,
    pub ml_match: bool,
    pub cd: usize,
    pub qd: usize,
    pub iterations: Vec<IterationEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeDescriptor {
    pub n: usize,
    pub k: usize,
    pub frozen: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IterationEntry {
    #[serde(rename = "L")]
    pub rotations: usize,
    #[serde(rename = "E")]
    pub objective: f64,
}

impl RunRecord {
    pub fn new(
        instance: &ProblemInstance,
        outcome: &GasOutcome,
        backend: GasBackend,
        seed: u64,
        snr_db: Option<f64>,
        ml_match: bool,
    ) -> Self {
        let decoded: String = outcome
            .decoded_codewords
            .iter()
            .map(|w| crate::bits::bits_to_string(w))
            .collect();
        Self {
            seed,
            snr_db,
            code: CodeDescriptor {
                n: instance.code().n(),
                k: instance.code().k(),
                frozen: instance.code().frozen_set().to_vec(),
            },
            modulation: instance.modulation().name(),
            backend,
            decoded_bits: decoded,
            info_bits: crate::bits::bits_to_string(&outcome.decoded_info),
            ml_match,
            cd: outcome.report.cd,
            qd: outcome.report.qd,
            iterations: outcome
                .history
                .iter()
                .map(|record| IterationEntry {
                    rotations: record.rotations,
                    objective: record.objective,
                })
                .collect(),
        }
    }
}

/// `floor(pi/4 * sqrt(size))`: the optimal rotation count for a single
/// marked state in a space of the given size.
pub fn optimal_iterations(search_space_size: u64) -> u64 {
    (FRAC_PI_4 * (search_space_size as f64).sqrt()).floor() as u64
}

/// Uniform rotation count from `{0, ..., ceil(k - 1)}`.
pub fn sample_rotation_count<R: Rng + ?Sized>(k: f64, rng: &mut R) -> Result<usize> {
    if k.is_nan() || k < 1.0 {
        return Err(Error::invalid_parameter(format!(
            "rotation bound must be >= 1, got {k}"
        )));
    }
    let upper = (k - 1.0).ceil() as usize;
    Ok(rng.random_range(0..=upper))
}

/// Uniformly samples the information bits of a valid state and returns the
/// encoded, transformed assignment (the replacement for plain uniform
/// sampling over all bit patterns).
pub fn modified_uniform_sample<R: Rng + ?Sized>(
    instance: &ProblemInstance,
    kind: ObjectiveKind,
    rng: &mut R,
) -> Result<ValidAssignment> {
    let info: Bits = (0..instance.info_len()).map(|_| rng.random()).collect();
    let codeword_levels = instance.encode_levels(&info)?;
    let assignment = instance.assignment_for(&codeword_levels, kind)?;
    Ok(ValidAssignment {
        info_bits: info,
        codeword_levels,
        assignment,
    })
}

/// Enumerated valid states with quantized objective values, shared by the
/// analytic backend and the optimum accounting.
#[derive(Debug, Clone)]
pub struct ValidStateTable {
    entries: Vec<ValidAssignment>,
    values_q: Vec<i64>,
    /// Entry indices sorted by objective value (ascending).
    order: Vec<usize>,
}

impl ValidStateTable {
    pub fn build(
        instance: &ProblemInstance,
        kind: ObjectiveKind,
        qpoly: &QuantizedPolynomial,
    ) -> Result<Self> {
        let entries = instance.valid_assignments(kind)?;
        let values_q: Vec<i64> = entries
            .iter()
            .map(|e| qpoly.evaluate(&e.assignment))
            .collect::<Result<_>>()?;
        let mut order: Vec<usize> = (0..entries.len()).collect();
        order.sort_by_key(|&i| values_q[i]);
        Ok(Self {
            entries,
            values_q,
            order,
        })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[ValidAssignment] {
        &self.entries
    }

    pub fn values_q(&self) -> &[i64] {
        &self.values_q
    }

    /// Minimum quantized objective over valid states.
    pub fn min_value_q(&self) -> i64 {
        self.values_q[self.order[0]]
    }

    /// Number of valid states strictly below the threshold.
    pub fn marked_count(&self, c_q: i64) -> usize {
        self.order.partition_point(|&i| self.values_q[i] < c_q)
    }

    /// Closed-form success probability after `rotations` Grover operators.
    pub fn success_probability(&self, c_q: i64, rotations: usize) -> f64 {
        let t = self.marked_count(c_q);
        let ratio = t as f64 / self.size() as f64;
        let theta = ratio.sqrt().asin();
        ((2 * rotations + 1) as f64 * theta).sin().powi(2)
    }

    /// Samples a measurement outcome per the Grover law: with probability
    /// `sin^2((2L+1) asin sqrt(t/S))` a uniform marked state, otherwise a
    /// uniform unmarked one. With no marked states the measurement is uniform
    /// over all valid states.
    pub fn measure<R: Rng + ?Sized>(&self, c_q: i64, rotations: usize, rng: &mut R) -> usize {
        let t = self.marked_count(c_q);
        let s = self.size();
        if t == 0 {
            return self.order[rng.random_range(0..s)];
        }
        if t == s || rng.random::<f64>() < self.success_probability(c_q, rotations) {
            self.order[rng.random_range(0..t)]
        } else {
            self.order[rng.random_range(t..s)]
        }
    }
}

/// Convenience single-shot analytic measurement for a given real threshold.
pub fn analytic_measure<R: Rng + ?Sized>(
    instance: &ProblemInstance,
    kind: ObjectiveKind,
    scale_bits: u32,
    threshold: f64,
    rotations: usize,
    rng: &mut R,
) -> Result<Bits> {
    let qpoly = instance.objective(kind)?.quantize(scale_bits);
    let table = ValidStateTable::build(instance, kind, &qpoly)?;
    let c_q = (threshold * (1u64 << scale_bits) as f64).round() as i64;
    let index = table.measure(c_q, rotations, rng);
    Ok(table.entries()[index].assignment.clone())
}

/// Statevector measurement backend: rebuilds the threshold-dependent
/// preparation circuit per iteration and simulates `G^L A|0>` exactly.
struct StatevectorBackend {
    layout: RegisterLayout,
    poly: MultilinearPolynomial,
    scale_bits: u32,
    base: Circuit,
    grover_applications: usize,
}

impl StatevectorBackend {
    fn new(
        instance: &ProblemInstance,
        kind: ObjectiveKind,
        scale_bits: u32,
        value_qubits: u32,
    ) -> Result<Self> {
        let n_key = instance.num_vars();
        let layout = RegisterLayout::contiguous(n_key, value_qubits as usize);
        let base = initial_state_circuit(
            instance.code(),
            instance.levels(),
            kind.uses_bit_transform(),
            instance.interleaver(),
            layout.num_qubits(),
        )?;
        Ok(Self {
            layout,
            poly: instance.objective(kind)?,
            scale_bits,
            base,
            grover_applications: 0,
        })
    }

    fn measure<R: Rng + ?Sized>(
        &mut self,
        c_q: i64,
        rotations: usize,
        rng: &mut R,
    ) -> Result<Bits> {
        let threshold = c_q as f64 / (1u64 << self.scale_bits) as f64;
        let mut preparation = self.base.clone();
        let dictionary = dictionary_circuit(
            &self.poly,
            threshold,
            self.scale_bits,
            &self.layout,
            DictionaryMode::Integer,
        )
        .map_err(|e| match e {
            Error::Overflow(msg) => Error::Config(format!("value register too small: {msg}")),
            other => other,
        })?;
        preparation.extend(&dictionary)?;

        let mut state = StateVector::zero_state(self.layout.num_qubits())?;
        state.apply_circuit(&preparation)?;
        if rotations > 0 {
            let grover = grover_operator(&preparation, &self.layout)?;
            for _ in 0..rotations {
                state.apply_circuit(&grover)?;
                self.grover_applications += 1;
            }
        }
        Ok(state.measure_all(&self.layout, rng).key_bits)
    }
}

enum Backend {
    Analytic { applications: usize },
    Statevector(Box<StatevectorBackend>),
}

impl Backend {
    fn measure<R: Rng + ?Sized>(
        &mut self,
        table: &ValidStateTable,
        c_q: i64,
        rotations: usize,
        rng: &mut R,
    ) -> Result<Bits> {
        match self {
            Backend::Analytic { applications } => {
                *applications += rotations;
                let index = table.measure(c_q, rotations, rng);
                Ok(table.entries()[index].assignment.clone())
            }
            Backend::Statevector(backend) => backend.measure(c_q, rotations, rng),
        }
    }

    fn grover_applications(&self) -> usize {
        match self {
            Backend::Analytic { applications } => *applications,
            Backend::Statevector(backend) => backend.grover_applications,
        }
    }
}

/// Runs the adaptive search on one instance and post-processes the incumbent
/// into codewords and information bits.
pub fn gas_decode<R: Rng + ?Sized>(
    instance: &ProblemInstance,
    config: &GasConfig,
    rng: &mut R,
) -> Result<GasOutcome> {
    config.validate()?;
    let kind = config
        .objective
        .unwrap_or_else(|| instance.default_objective_kind());
    let poly = instance.objective(kind)?;
    let qpoly = poly.quantize(config.scale_bits);
    let table = ValidStateTable::build(instance, kind, &qpoly)?;
    let optimum_q = table.min_value_q();

    let mut backend = match config.backend {
        GasBackend::Analytic => Backend::Analytic { applications: 0 },
        GasBackend::Statevector => {
            let value_qubits = config
                .value_qubits
                .unwrap_or_else(|| threshold_register_bits(&qpoly));
            Backend::Statevector(Box::new(StatevectorBackend::new(
                instance,
                kind,
                config.scale_bits,
                value_qubits,
            )?))
        }
    };

    let initial = modified_uniform_sample(instance, kind, rng)?;
    let mut incumbent = initial.assignment;
    let mut c_q = qpoly.evaluate(&incumbent)?;

    let space = 1u64 << instance.info_len();
    let rotation_cap = (space as f64).sqrt();
    let max_iterations = config
        .max_classical_iterations
        .unwrap_or((10.0 * rotation_cap).ceil() as usize);

    let mut k = 1.0f64;
    let mut history: Vec<IterationRecord> = Vec::new();
    let mut qd = 0usize;
    let mut iterations = 0usize;
    let mut saturated_streak = 0usize;
    let (mut optimum_iteration, mut qd_at_optimum) = if c_q == optimum_q {
        (Some(0), Some(0))
    } else {
        (None, None)
    };

    while iterations < max_iterations {
        let rotations = sample_rotation_count(k, rng)?;
        let measured = backend.measure(&table, c_q, rotations, rng)?;
        qd += rotations;
        let value_q = qpoly.evaluate(&measured)?;
        let improved = value_q < c_q;
        history.push(IterationRecord {
            rotations,
            measured: measured.clone(),
            objective_q: value_q,
            objective: qpoly.descale(value_q),
            improved,
        });
        if improved {
            incumbent = measured;
            c_q = value_q;
            k = 1.0;
            saturated_streak = 0;
        } else {
            k = (config.lambda * k).min(rotation_cap);
            if k >= rotation_cap {
                saturated_streak += 1;
            }
        }
        debug_assert!(k <= rotation_cap);
        iterations += 1;
        if optimum_iteration.is_none() && c_q == optimum_q {
            optimum_iteration = Some(iterations);
            qd_at_optimum = Some(qd);
        }
        if saturated_streak >= config.patience {
            break;
        }
    }

    assert_eq!(
        qd,
        backend.grover_applications(),
        "query-complexity accounting out of sync with the backend"
    );

    let decoded_codewords = instance.codewords_from_assignment(&incumbent, kind)?;
    let decoded_info = instance.info_bits_from_codewords(&decoded_codewords)?;
    Ok(GasOutcome {
        decoded_codewords,
        decoded_info,
        incumbent_value_q: c_q,
        incumbent_value: qpoly.descale(c_q),
        incumbent_assignment: incumbent,
        objective_kind: kind,
        report: ComplexityReport {
            cd: iterations,
            qd,
            reached_optimum: c_q == optimum_q,
            optimum_iteration,
            qd_at_optimum,
        },
        history,
    })
}
