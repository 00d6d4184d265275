//! Command-line front end.
//!
//! Subcommands: `encode`, `ml-decode`, `gas-decode`, `bler`, `cdf`,
//! `dict-verify`, `baseline-qubo`, `report`. Batch commands read a TOML
//! scenario via `--config` and write CSV plus a JSON run manifest.

use crate::baseline::{brute_force_min, ml_decode_bruteforce, search_space_exponent, Formulation};
use crate::bits::{bits_from_str, bits_to_string};
use crate::error::{Error, Result};
use crate::experiment::{bler_csv, cdf_csv, run_bler, run_cdf, ExperimentConfig, RunManifest};
use crate::gas::{gas_decode, GasBackend, GasConfig, RunRecord};
use crate::instance::ProblemInstance;
use crate::modem::{ChannelModel, ModulationScheme};
use crate::objective::{constraint_qubo, PenaltyWeights};
use crate::polar::PolarCode;

use crate::sim::{dictionary_circuit, Circuit, DictionaryMode, Gate, RegisterLayout, StateVector};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Read;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "polar-gas",
    version,
    about = "Maximum-likelihood polar decoding by Grover adaptive search, simulated classically"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode an input vector read from stdin (0/1 string, frozen bits zero).
    Encode(CodeArgs),
    /// Brute-force ML decode of a received vector read from stdin (CSV reals).
    MlDecode(InstanceArgs),
    /// GAS decode of a received vector read from stdin; prints a JSON record.
    GasDecode(GasDecodeArgs),
    /// Paired BLER sweep from a TOML config.
    Bler(BatchArgs),
    /// Query-complexity CDF run from a TOML config (single SNR point).
    Cdf(BatchArgs),
    /// Exhaustive value-register check of the quantum dictionary.
    DictVerify(DictVerifyArgs),
    /// Build and brute-force the constraint-based baseline QUBO (BPSK).
    BaselineQubo(BaselineArgs),
    /// Summarize a bler.csv or cdf.csv file.
    Report(ReportArgs),
}

#[derive(Args)]
struct CodeArgs {
    /// Codeword length N (power of two).
    #[arg(long)]
    n: usize,
    /// Information length K.
    #[arg(long)]
    k: usize,
    /// Comma-separated frozen indices, e.g. 0,2.
    #[arg(long, value_delimiter = ',')]
    frozen: Vec<usize>,
}

impl CodeArgs {
    fn build(&self) -> Result<PolarCode> {
        PolarCode::new(self.n, self.k, &self.frozen)
    }
}

#[derive(Args)]
struct InstanceArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Modulation: bpsk or pam<order> (pam4, pam16, ...).
    #[arg(long = "mod", default_value = "bpsk")]
    modulation: String,
}

impl InstanceArgs {
    fn build(&self, y: Vec<f64>) -> Result<ProblemInstance> {
        ProblemInstance::without_interleaver(
            self.code.build()?,
            ModulationScheme::parse(&self.modulation)?,
            y,
        )
    }
}

#[derive(Args)]
struct GasDecodeArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "analytic")]
    backend: GasBackend,
    /// Value-register qubits (statevector backend); auto-sized by default.
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, default_value_t = 8)]
    scale_bits: u32,
    /// Annotation for the emitted record only.
    #[arg(long)]
    snr_db: Option<f64>,
}

#[derive(Args)]
struct BatchArgs {
    /// TOML scenario file.
    #[arg(long)]
    config: PathBuf,
    /// Master seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path.
    #[arg(long, default_value = "out.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct DictVerifyArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Value-register qubits.
    #[arg(long)]
    m: u32,
    /// Fixed-point bits; largest fitting value chosen when omitted.
    #[arg(long)]
    scale_bits: Option<u32>,
    /// Seed for the fixed instance draw.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// SNR of the fixed instance draw.
    #[arg(long, default_value_t = 5.0)]
    snr_db: f64,
}

#[derive(Args)]
struct BaselineArgs {
    #[command(flatten)]
    code: CodeArgs,
}

#[derive(Args)]
struct ReportArgs {
    /// CSV file produced by bler or cdf.
    #[arg(long = "in")]
    input: PathBuf,
}

/// Entry point; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Encode(args) => encode(args),
        Command::MlDecode(args) => ml_decode(args),
        Command::GasDecode(args) => gas_decode_cmd(args),
        Command::Bler(args) => batch(args, BatchKind::Bler),
        Command::Cdf(args) => batch(args, BatchKind::Cdf),
        Command::DictVerify(args) => dict_verify(args),
        Command::BaselineQubo(args) => baseline_qubo(args),
        Command::Report(args) => report(args),
    }
}

fn read_stdin() -> Result<String> {
    let mut buffer = String::new();
    std::io::stdin().read_to_string(&mut buffer)?;
    Ok(buffer)
}

fn parse_csv_row(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::invalid_input(format!("expected a real number, got {s:?}")))
        })
        .collect()
}

fn encode(args: CodeArgs) -> Result<()> {
    let code = args.build()?;
    let input = bits_from_str(&read_stdin()?)?;
    let codeword = code.encode(&input)?;
    println!("{}", bits_to_string(&codeword));
    Ok(())
}

fn ml_decode(args: InstanceArgs) -> Result<()> {
    let y = parse_csv_row(&read_stdin()?)?;
    let instance = args.build(y)?;
    let result = ml_decode_bruteforce(&instance)?;
    let best = result.representative();
    let codewords: Vec<String> = best
        .codeword_levels
        .iter()
        .map(|w| bits_to_string(w))
        .collect();
    println!(
        "codewords={} info={} min={} ties={}",
        codewords.join(","),
        bits_to_string(&best.info_bits),
        result.min_distance,
        result.minimizers.len() - 1
    );
    Ok(())
}

fn gas_decode_cmd(args: GasDecodeArgs) -> Result<()> {
    let y = parse_csv_row(&read_stdin()?)?;
    let instance = args.instance.build(y)?;
    let config = GasConfig {
        backend: args.backend,
        scale_bits: args.scale_bits,
        value_qubits: args.m,
        ..GasConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let outcome = gas_decode(&instance, &config, &mut rng)?;
    let ml = ml_decode_bruteforce(&instance)?;
    let record = RunRecord::new(
        &instance,
        &outcome,
        args.backend,
        args.seed,
        args.snr_db,
        ml.contains_info(&outcome.decoded_info),
    );
    let json = serde_json::to_string_pretty(&record)
        .map_err(|e| Error::Config(format!("record serialization: {e}")))?;
    println!("{json}");
    Ok(())
}

enum BatchKind {
    Bler,
    Cdf,
}

fn batch(args: BatchArgs, kind: BatchKind) -> Result<()> {
    let text = std::fs::read_to_string(&args.config)?;
    let mut config = ExperimentConfig::from_toml(&text)?;
    if let Some(seed) = args.seed {
        config.run.master_seed = seed;
    }
    let scenario = config.build()?;
    let manifest = RunManifest::new(scenario.master_seed, &text);
    match kind {
        BatchKind::Bler => {
            let points = run_bler(&scenario)?;
            crate::experiment::write_output(&args.out, &bler_csv(&points), &manifest)?;
            println!("snr_db trials bler_ml bler_gas ml_match");
            for p in &points {
                println!(
                    "{:6} {:6} {:.6} {:.6} {}/{}",
                    p.snr_db, p.trials, p.bler_ml, p.bler_gas, p.gas_matches_ml, p.trials
                );
            }
        }
        BatchKind::Cdf => {
            let cdf = run_cdf(&scenario)?;
            crate::experiment::write_output(&args.out, &cdf_csv(&cdf), &manifest)?;
            println!(
                "snr_db={} trials={} resolved={} censored={} search_space=2^{} (conventional 2^{})",
                cdf.snr_db,
                cdf.trials.len(),
                cdf.resolved(),
                cdf.censored(),
                cdf.search_exponent,
                cdf.constraint_exponent
            );
            if let (Some(cd), Some(qd)) = (cdf.median_cd(), cdf.median_qd()) {
                println!("median_cd_at_opt={cd} median_qd_at_opt={qd}");
            }
        }
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

fn dict_verify(args: DictVerifyArgs) -> Result<()> {
    // Fixed instance: seeded random information bits through the channel.
    let code = args.instance.code.build()?;
    let modulation = ModulationScheme::parse(&args.instance.modulation)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let shell =
        ProblemInstance::without_interleaver(code.clone(), modulation, vec![0.0; code.n()])?;
    let info: Vec<bool> = (0..shell.info_len()).map(|_| rng.random()).collect();
    let levels = shell.encode_levels(&info)?;
    let symbols = shell.modulate(&levels)?;
    let y = ChannelModel::from_snr_db(args.snr_db).transmit(&symbols, &mut rng);
    let instance = ProblemInstance::without_interleaver(code, modulation, y)?;

    let kind = instance.default_objective_kind();
    let poly = instance.objective(kind)?;
    let threshold = {
        // Any valid-state objective value serves as the shift.
        let sample = crate::gas::modified_uniform_sample(&instance, kind, &mut rng)?;
        poly.evaluate(&sample.assignment)?
    };
    let scale_bits = match args.scale_bits {
        Some(bits) => bits,
        None => crate::poly::fit_scale_bits(&poly, args.m).ok_or_else(|| {
            Error::Overflow(format!(
                "objective range does not fit {} value qubits at any scale",
                args.m
            ))
        })?,
    };

    let n_key = instance.num_vars();
    let layout = RegisterLayout::contiguous(n_key, args.m as usize);
    let mut circuit = Circuit::new(layout.num_qubits());
    for q in 0..n_key {
        circuit.push(Gate::H(q))?;
    }
    circuit.extend(&dictionary_circuit(
        &poly,
        threshold,
        scale_bits,
        &layout,
        DictionaryMode::Integer,
    )?)?;
    let mut state = StateVector::zero_state(layout.num_qubits())?;
    state.apply_circuit(&circuit)?;

    let qpoly = poly.quantize(scale_bits);
    let c_q = (threshold * (1u64 << scale_bits) as f64).round() as i64;
    let key_count = 1usize << n_key;
    let expected_weight = 1.0 / key_count as f64;
    let mut correct = 0usize;
    for key_index in 0..key_count {
        let key_bits = layout.key_bits(key_index);
        let expected = qpoly.evaluate(&key_bits)? - c_q;
        let mass = state.probability_where(|i| {
            i & (key_count - 1) == key_index && layout.value_reading(i) == expected
        });
        if (mass - expected_weight).abs() < 1e-9 {
            correct += 1;
        }
    }
    if correct == key_count {
        println!("OK {correct}/{key_count} basis states");
        Ok(())
    } else {
        println!("FAIL {correct}/{key_count} basis states");
        Err(Error::invalid_input(
            "dictionary readout mismatch".to_string(),
        ))
    }
}

fn baseline_qubo(args: BaselineArgs) -> Result<()> {
    let code = args.code.build()?;
    let y = parse_csv_row(&read_stdin()?)?;
    if y.len() != code.n() {
        return Err(Error::invalid_input(format!(
            "expected {} received samples, got {}",
            code.n(),
            y.len()
        )));
    }
    let weights = PenaltyWeights::suggested(code.rate());
    let qubo = constraint_qubo(&code, &y, &weights)?;
    let (minimizers, minimum) = brute_force_min(qubo.polynomial())?;
    let codeword = qubo.codeword_layer(&minimizers[0]);
    let input: Vec<bool> = (0..code.n()).map(|i| minimizers[0][i]).collect();
    println!(
        "variables={} search_space=2^{} minimum={} minimizers={}",
        qubo.num_vars(),
        search_space_exponent(&code, 1, Formulation::ConstraintQubo),
        minimum,
        minimizers.len()
    );
    println!(
        "codeword_layer={} input_layer={}",
        bits_to_string(&codeword),
        bits_to_string(&input)
    );
    Ok(())
}

fn report(args: ReportArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.input)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::invalid_input("empty CSV".to_string()))?;
    match header {
        h if h.starts_with("snr_db,") => report_bler(lines),
        h if h.starts_with("trial,") => report_cdf(lines),
        other => Err(Error::invalid_input(format!(
            "unrecognized CSV header {other:?}"
        ))),
    }
}

fn report_bler<'a>(lines: impl Iterator<Item = &'a str>) -> Result<()> {
    println!(
        "{:>8} {:>8} {:>10} {:>10} {:>12} {:>12} {:>24}",
        "snr_db", "trials", "errors_ml", "errors_gas", "bler_ml", "bler_gas", "gas 95% interval"
    );
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(Error::invalid_input(format!("malformed row {line:?}")));
        }
        println!(
            "{:>8} {:>8} {:>10} {:>10} {:>12} {:>12} {:>24}",
            fields[0],
            fields[1],
            fields[2],
            fields[3],
            fields[4],
            fields[5],
            format!("[{}, {}]", fields[6], fields[7])
        );
    }
    Ok(())
}

fn report_cdf<'a>(lines: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut resolved: Vec<(usize, usize)> = Vec::new();
    let mut censored = 0usize;
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::invalid_input(format!("malformed row {line:?}")));
        }
        let cd: usize = fields[2]
            .parse()
            .map_err(|_| Error::invalid_input(format!("bad cd field in {line:?}")))?;
        let qd: usize = fields[3]
            .parse()
            .map_err(|_| Error::invalid_input(format!("bad qd field in {line:?}")))?;
        if fields[4].trim() == "1" {
            censored += 1;
        } else {
            resolved.push((cd, qd));
        }
    }
    let total = resolved.len() + censored;
    println!(
        "trials={total} resolved={} censored={censored}",
        resolved.len()
    );
    if resolved.is_empty() {
        return Ok(());
    }
    let mut cds: Vec<usize> = resolved.iter().map(|&(cd, _)| cd).collect();
    let mut qds: Vec<usize> = resolved.iter().map(|&(_, qd)| qd).collect();
    cds.sort_unstable();
    qds.sort_unstable();
    let quantile = |sorted: &[usize], q: f64| sorted[(q * (sorted.len() - 1) as f64) as usize];
    println!(
        "cd_at_opt: p25={} median={} p75={} max={}",
        quantile(&cds, 0.25),
        quantile(&cds, 0.5),
        quantile(&cds, 0.75),
        cds[cds.len() - 1]
    );
    println!(
        "qd_at_opt: p25={} median={} p75={} max={}",
        quantile(&qds, 0.25),
        quantile(&qds, 0.5),
        quantile(&qds, 0.75),
        qds[qds.len() - 1]
    );
    Ok(())
}
