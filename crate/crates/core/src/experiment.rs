//! Batch experiment driver: paired BLER sweeps and query-complexity CDF
//! runs with deterministic seeding and CSV outputs.
//!
//! Seeding rule: every trial owns two ChaCha8 streams derived from the master
//! seed: stream `2*g` for the channel and `2*g + 1` for the search, where
//! `g = snr_index * trials + trial_index`. Results are therefore identical
//! across thread counts; `GP_THREADS` caps worker parallelism.

use crate::baseline::{ml_decode_bruteforce, search_space_exponent, Formulation};
use crate::error::{Error, Result};
use crate::gas::{gas_decode, GasBackend, GasConfig};
use crate::instance::ProblemInstance;
use crate::modem::{ChannelModel, ModulationScheme};
use crate::polar::PolarCode;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

/// Raw TOML schema for one experiment.
#[derive(Debug, Clone, Deserialize)]
pub struct ExperimentConfig {
    pub code: CodeSection,
    pub modulation: ModulationSection,
    pub channel: ChannelSection,
    pub run: RunSection,
    #[serde(default)]
    pub gas: GasSection,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CodeSection {
    #[serde(alias = "n")]
    pub n_bits: usize,
    #[serde(alias = "k")]
    pub k_bits: usize,
    pub frozen: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ModulationSection {
    /// `bpsk` or `pam<order>`.
    pub scheme: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ChannelSection {
    pub snr_db: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct RunSection {
    pub trials: usize,
    pub master_seed: u64,
    #[serde(default = "default_backend")]
    pub backend: GasBackend,
}

fn default_backend() -> GasBackend {
    GasBackend::Analytic
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct GasSection {
    pub lambda: Option<f64>,
    pub patience: Option<usize>,
    pub max_classical_iterations: Option<usize>,
    pub scale_bits: Option<u32>,
    pub value_qubits: Option<u32>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("config parse error: {e}")))
    }

    /// Validates and resolves into a runnable scenario.
    pub fn build(&self) -> Result<Scenario> {
        let code = PolarCode::new(self.code.n_bits, self.code.k_bits, &self.code.frozen)?;
        let modulation = ModulationScheme::parse(&self.modulation.scheme)?;
        if self.channel.snr_db.is_empty() {
            return Err(Error::Config("snr_db list must be non-empty".to_string()));
        }
        if self.run.trials < 1 {
            return Err(Error::Config("trials must be >= 1".to_string()));
        }
        let defaults = GasConfig::default();
        let gas = GasConfig {
            lambda: self.gas.lambda.unwrap_or(defaults.lambda),
            backend: self.run.backend,
            patience: self.gas.patience.unwrap_or(defaults.patience),
            max_classical_iterations: self.gas.max_classical_iterations,
            scale_bits: self.gas.scale_bits.unwrap_or(defaults.scale_bits),
            value_qubits: self.gas.value_qubits,
            objective: None,
        };
        Ok(Scenario {
            code,
            modulation,
            snr_db: self.channel.snr_db.clone(),
            trials: self.run.trials,
            master_seed: self.run.master_seed,
            gas,
        })
    }
}

/// A resolved, runnable experiment.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub code: PolarCode,
    pub modulation: ModulationScheme,
    pub snr_db: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    pub gas: GasConfig,
}

impl Scenario {
    /// The two per-trial rng streams (channel, search).
    fn trial_rngs(&self, snr_index: usize, trial: usize) -> (ChaCha8Rng, ChaCha8Rng) {
        let global = (snr_index * self.trials + trial) as u64;
        let mut channel = ChaCha8Rng::seed_from_u64(self.master_seed);
        channel.set_stream(2 * global);
        let mut search = ChaCha8Rng::seed_from_u64(self.master_seed);
        search.set_stream(2 * global + 1);
        (channel, search)
    }

    /// Draws one transmission and its received vector.
    fn draw_trial(
        &self,
        snr_db: f64,
        channel_rng: &mut ChaCha8Rng,
    ) -> Result<(Vec<bool>, ProblemInstance)> {
        let info: Vec<bool> = (0..self.modulation.bits_per_symbol() * self.code.k())
            .map(|_| channel_rng.random())
            .collect();
        let shell = ProblemInstance::without_interleaver(
            self.code.clone(),
            self.modulation,
            vec![0.0; self.code.n()],
        )?;
        let levels = shell.encode_levels(&info)?;
        let symbols = shell.modulate(&levels)?;
        let channel = if snr_db.is_infinite() {
            ChannelModel::noiseless()
        } else {
            ChannelModel::from_snr_db(snr_db)
        };
        let y = channel.transmit(&symbols, channel_rng);
        let instance = ProblemInstance::without_interleaver(self.code.clone(), self.modulation, y)?;
        Ok((info, instance))
    }
}

/// One BLER sweep point; both decoders scored on identical channel draws.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlerPoint {
    pub snr_db: f64,
    pub trials: usize,
    pub errors_ml: usize,
    pub errors_gas: usize,
    pub bler_ml: f64,
    pub bler_gas: f64,
    /// Wilson 95% interval for the GAS block-error rate.
    pub ci_low: f64,
    pub ci_high: f64,
    /// Trials where the GAS output belongs to the exact ML argmin set.
    pub gas_matches_ml: usize,
    /// Trials with a non-unique ML argmin.
    pub ml_ties: usize,
}

/// Wilson score interval for a binomial proportion at 95% confidence.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959963984540054f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let radius = (z / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // The bounds are exactly 0 and 1 at the extremes; snap rounding noise.
    let low = if successes == 0 {
        0.0
    } else {
        (center - radius).max(0.0)
    };
    let high = if successes == trials {
        1.0
    } else {
        (center + radius).min(1.0)
    };
    (low, high)
}

struct BlerTrial {
    ml_error: bool,
    gas_error: bool,
    gas_matches_ml: bool,
    ml_tie: bool,
}

/// Runs the paired BLER sweep.
pub fn run_bler(scenario: &Scenario) -> Result<Vec<BlerPoint>> {
    let pool = worker_pool()?;
    let mut points = Vec::with_capacity(scenario.snr_db.len());
    for (snr_index, &snr_db) in scenario.snr_db.iter().enumerate() {
        let trials: Vec<BlerTrial> = pool.install(|| {
            (0..scenario.trials)
                .into_par_iter()
                .map(|trial| -> Result<BlerTrial> {
                    let (mut channel_rng, mut search_rng) = scenario.trial_rngs(snr_index, trial);
                    let (info, instance) = scenario.draw_trial(snr_db, &mut channel_rng)?;
                    let ml = ml_decode_bruteforce(&instance)?;
                    let gas = gas_decode(&instance, &scenario.gas, &mut search_rng)?;
                    Ok(BlerTrial {
                        ml_error: ml.representative().info_bits != info,
                        gas_error: gas.decoded_info != info,
                        gas_matches_ml: ml.contains_info(&gas.decoded_info),
                        ml_tie: ml.has_ties(),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })?;

        let errors_ml = trials.iter().filter(|t| t.ml_error).count();
        let errors_gas = trials.iter().filter(|t| t.gas_error).count();
        let (ci_low, ci_high) = wilson_interval(errors_gas, scenario.trials);
        points.push(BlerPoint {
            snr_db,
            trials: scenario.trials,
            errors_ml,
            errors_gas,
            bler_ml: errors_ml as f64 / scenario.trials as f64,
            bler_gas: errors_gas as f64 / scenario.trials as f64,
            ci_low,
            ci_high,
            gas_matches_ml: trials.iter().filter(|t| t.gas_matches_ml).count(),
            ml_ties: trials.iter().filter(|t| t.ml_tie).count(),
        });
    }
    Ok(points)
}

/// Fixed CSV schema for BLER sweeps.
pub fn bler_csv(points: &[BlerPoint]) -> String {
    let mut out =
        String::from("snr_db,trials,errors_ml,errors_gas,bler_ml,bler_gas,ci_low,ci_high\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            p.snr_db,
            p.trials,
            p.errors_ml,
            p.errors_gas,
            p.bler_ml,
            p.bler_gas,
            p.ci_low,
            p.ci_high
        ));
    }
    out
}

/// One complexity trial: iteration counts at which the incumbent first
/// reached the ML optimum. Censored trials carry the exhausted budget values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdfTrial {
    pub trial: usize,
    /// Search rng stream id (the reproducibility handle).
    pub seed: u64,
    pub cd_at_opt: usize,
    pub qd_at_opt: usize,
    pub censored: bool,
}

/// A complexity run at one SNR point.
#[derive(Debug, Clone)]
pub struct CdfReport {
    pub snr_db: f64,
    pub trials: Vec<CdfTrial>,
    pub search_exponent: usize,
    pub constraint_exponent: usize,
}

impl CdfReport {
    pub fn resolved(&self) -> usize {
        self.trials.iter().filter(|t| !t.censored).count()
    }

    pub fn censored(&self) -> usize {
        self.trials.iter().filter(|t| t.censored).count()
    }

    /// Median over all trials, censored values ranked above every resolved
    /// value; `None` when the median itself is censored.
    pub fn median_qd(&self) -> Option<usize> {
        median_with_censoring(self.trials.iter().map(|t| (t.qd_at_opt, t.censored)))
    }

    pub fn median_cd(&self) -> Option<usize> {
        median_with_censoring(self.trials.iter().map(|t| (t.cd_at_opt, t.censored)))
    }

    /// Empirical CDF points `(value, fraction of trials at or below)` for the
    /// QD-at-optimum distribution; censored trials never enter the numerator.
    pub fn qd_cdf(&self) -> Vec<(usize, f64)> {
        let mut resolved: Vec<usize> = self
            .trials
            .iter()
            .filter(|t| !t.censored)
            .map(|t| t.qd_at_opt)
            .collect();
        resolved.sort_unstable();
        let n = self.trials.len() as f64;
        let mut points = Vec::new();
        for (i, &value) in resolved.iter().enumerate() {
            if i + 1 == resolved.len() || resolved[i + 1] != value {
                points.push((value, (i + 1) as f64 / n));
            }
        }
        points
    }
}

fn median_with_censoring(values: impl Iterator<Item = (usize, bool)>) -> Option<usize> {
    let mut items: Vec<(usize, bool)> = values.collect();
    items.sort_by_key(|&(value, censored)| (censored, value));
    let mid = items.len() / 2;
    let (value, censored) = items[mid];
    (!censored).then_some(value)
}

/// Runs the complexity experiment at a single SNR point.
pub fn run_cdf(scenario: &Scenario) -> Result<CdfReport> {
    if scenario.snr_db.len() != 1 {
        return Err(Error::Config(
            "complexity runs take exactly one SNR point".to_string(),
        ));
    }
    let snr_db = scenario.snr_db[0];
    let pool = worker_pool()?;
    let trials: Vec<CdfTrial> = pool.install(|| {
        (0..scenario.trials)
            .into_par_iter()
            .map(|trial| -> Result<CdfTrial> {
                let (mut channel_rng, mut search_rng) = scenario.trial_rngs(0, trial);
                let (_, instance) = scenario.draw_trial(snr_db, &mut channel_rng)?;
                let outcome = gas_decode(&instance, &scenario.gas, &mut search_rng)?;
                let report = &outcome.report;
                Ok(CdfTrial {
                    trial,
                    seed: 2 * trial as u64 + 1,
                    cd_at_opt: report.optimum_iteration.unwrap_or(report.cd),
                    qd_at_opt: report.qd_at_optimum.unwrap_or(report.qd),
                    censored: report.optimum_iteration.is_none(),
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(CdfReport {
        snr_db,
        trials,
        search_exponent: search_space_exponent(
            &scenario.code,
            scenario.modulation.bits_per_symbol(),
            Formulation::ValidCodeword,
        ),
        constraint_exponent: search_space_exponent(
            &scenario.code,
            scenario.modulation.bits_per_symbol(),
            Formulation::ConstraintQubo,
        ),
    })
}

/// Fixed CSV schema for complexity runs.
pub fn cdf_csv(report: &CdfReport) -> String {
    let mut out = String::from("trial,seed,cd_at_opt,qd_at_opt,censored\n");
    for t in &report.trials {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            t.trial, t.seed, t.cd_at_opt, t.qd_at_opt, t.censored as u8
        ));
    }
    out
}

/// Run manifest written next to every CSV output.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub master_seed: u64,
    pub config_sha256: String,
}

impl RunManifest {
    pub fn new(master_seed: u64, config_text: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(config_text.as_bytes());
        let digest = hasher.finalize();
        let config_sha256 = digest.iter().map(|b| format!("{b:02x}")).collect();
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            master_seed,
            config_sha256,
        }
    }
}

/// Writes `contents` to `path` and the manifest to `<path>.manifest.json`.
pub fn write_output(path: &Path, contents: &str, manifest: &RunManifest) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, contents)?;
    let manifest_path = path.with_extension(format!(
        "{}.manifest.json",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    let mut file = std::fs::File::create(manifest_path)?;
    let json = serde_json::to_string_pretty(manifest)
        .map_err(|e| Error::Config(format!("manifest serialization: {e}")))?;
    file.write_all(json.as_bytes())?;
    file.write_all(b"\n")?;
    Ok(())
}

/// Worker pool honoring the `GP_THREADS` cap.
fn worker_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var("GP_THREADS") {
        let threads: usize = value
            .parse()
            .map_err(|_| Error::Config(format!("GP_THREADS must be an integer, got {value:?}")))?;
        builder = builder.num_threads(threads.max(1));
    }
    builder
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}
