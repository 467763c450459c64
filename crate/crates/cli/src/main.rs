//! abcsim: estimate logical failure rates of noisy Clifford circuits.
//!
//! Machine-readable output goes to standard output or --out; everything meant
//! for humans (progress, resolved configuration, errors) goes to standard
//! error. Exit codes: 0 success, 2 unreadable or unparsable input, 3 invalid
//! configuration or semantics, 4 stale artifact digest.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use abcsim_core::bench::{benchmark_repetition, BenchConfig};
use abcsim_core::circuit::CliffordCircuit;
use abcsim_core::decoder::{build_lookup, Decoder, LookupDecoder, TrivialDecoder};
use abcsim_core::engine::{EngineKind, Run, RunConfig};
use abcsim_core::error::Error as CoreError;
use abcsim_core::io;
use abcsim_core::noise::{enumerate_locations, NoiseSpec};
use abcsim_core::spacetime::{derive_checks, precompute_periodic, BackpropagatedSet, CheckSet};

#[derive(Parser)]
#[command(name = "abcsim", version, about = "Fault simulation for noisy Clifford circuits")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Estimate a logical failure rate with the naive or abc engine.
    Simulate(SimulateArgs),
    /// Backpropagate check rows and write the reusable artifact.
    Precompute(PrecomputeArgs),
    /// Learn deterministic outcome parities from noiseless runs.
    DeriveChecks(DeriveChecksArgs),
    /// Time both engines across the repetition-memory family.
    Bench(BenchArgs),
    /// Parse and validate input files, reporting diagnostics.
    Validate(ValidateArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Naive,
    Abc,
}

impl From<EngineArg> for EngineKind {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Naive => EngineKind::Naive,
            EngineArg::Abc => EngineKind::Abc,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum DecoderArg {
    Trivial,
    Lookup,
}

#[derive(Args)]
struct SimulateArgs {
    /// Circuit file.
    #[arg(long)]
    circuit: PathBuf,
    /// Syndrome check matrix file.
    #[arg(long)]
    syndrome: PathBuf,
    /// Logical check matrix file.
    #[arg(long)]
    logical: PathBuf,
    /// Precompute artifact; without it, rows are backpropagated in-process.
    #[arg(long)]
    pre: Option<PathBuf>,
    /// Engine choice [default: abc].
    #[arg(long, value_enum)]
    engine: Option<EngineArg>,
    /// Noise levels, e.g. p_gate=1e-3,p_meas=1e-3,p_idle=0.
    #[arg(long)]
    noise: Option<String>,
    /// JSON config file; command-line flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of Monte Carlo shots [default: 1000].
    #[arg(long)]
    shots: Option<u64>,
    /// Seed for all randomness in the run [default: 0].
    #[arg(long)]
    seed: Option<u64>,
    /// Worker thread count; does not change results [default: 1].
    #[arg(long)]
    shards: Option<usize>,
    /// Decoder choice [default: trivial].
    #[arg(long, value_enum)]
    decoder: Option<DecoderArg>,
    /// Lookup decoder weight cutoff [default: 1].
    #[arg(long)]
    lookup_wmax: Option<usize>,
    /// Lookup table cache file; rebuilt and overwritten when stale.
    #[arg(long)]
    lookup_cache: Option<PathBuf>,
    /// Abort lookup construction beyond this many fault combinations.
    #[arg(long, default_value_t = 10_000_000)]
    lookup_cap: u64,
    /// Write results JSON here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PrecomputeArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long)]
    syndrome: PathBuf,
    #[arg(long)]
    logical: PathBuf,
    /// Exploit the circuit's PERIOD declaration instead of backpropagating
    /// every row separately.
    #[arg(long)]
    periodic: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DeriveChecksArgs {
    #[arg(long)]
    circuit: PathBuf,
    /// Noiseless sampling runs used to learn the outcome code.
    #[arg(long, default_value_t = 4096)]
    shots: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated round counts for the repetition family.
    #[arg(long, default_value = "10,32,100,316,1000")]
    rounds: String,
    #[arg(long, default_value_t = 2000)]
    shots: u64,
    /// Injected fault sites per shot (fixed across sizes).
    #[arg(long, default_value_t = 8)]
    sites: usize,
    /// Timing repeats; the best one is reported.
    #[arg(long, default_value_t = 5)]
    repeats: u32,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long)]
    syndrome: Option<PathBuf>,
    #[arg(long)]
    logical: Option<PathBuf>,
}

/// A failure with its process exit code; all error paths funnel through this.
struct Failure {
    code: u8,
    message: String,
}

type CliResult<T> = Result<T, Failure>;

fn code_for(e: &CoreError) -> u8 {
    match e {
        CoreError::Parse { .. } | CoreError::Io(_) => 2,
        CoreError::DigestMismatch { .. } => 4,
        _ => 3,
    }
}

fn core_err(e: CoreError) -> Failure {
    Failure {
        code: code_for(&e),
        message: e.to_string(),
    }
}

fn in_file(path: &Path, e: CoreError) -> Failure {
    Failure {
        code: code_for(&e),
        message: format!("{}: {e}", path.display()),
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| Failure {
        code: 2,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn write_output(out: Option<&Path>, content: &[u8]) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, content).map_err(|e| Failure {
            code: 2,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(content).map_err(|e| Failure {
                code: 2,
                message: format!("cannot write standard output: {e}"),
            })
        }
    }
}

fn load_circuit(path: &Path) -> CliResult<CliffordCircuit> {
    io::parse_circuit(&read_text(path)?).map_err(|e| in_file(path, e))
}

fn load_checks(
    syndrome: &Path,
    logical: &Path,
    circuit: &CliffordCircuit,
) -> CliResult<CheckSet> {
    let n = circuit.num_outcomes();
    let syn = io::parse_check_rows(&read_text(syndrome)?, n).map_err(|e| in_file(syndrome, e))?;
    let log = io::parse_check_rows(&read_text(logical)?, n).map_err(|e| in_file(logical, e))?;
    CheckSet::new(n, syn, log).map_err(core_err)
}

fn parse_noise_flag(text: &str) -> CliResult<NoiseSpec> {
    let mut p_gate = 0.0;
    let mut p_meas = 0.0;
    let mut p_idle = 0.0;
    for part in text.split(',') {
        let (key, value) = part.split_once('=').ok_or_else(|| Failure {
            code: 3,
            message: format!("noise spec '{part}' is not key=value"),
        })?;
        let v: f64 = value.parse().map_err(|_| Failure {
            code: 3,
            message: format!("bad probability '{value}' for {key}"),
        })?;
        match key.trim() {
            "p_gate" => p_gate = v,
            "p_meas" => p_meas = v,
            "p_idle" => p_idle = v,
            other => {
                return Err(Failure {
                    code: 3,
                    message: format!("unknown noise key '{other}'"),
                })
            }
        }
    }
    NoiseSpec::new(p_gate, p_meas, p_idle).map_err(core_err)
}

/// Optional defaults from --config; explicit flags win.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    noise: Option<NoiseSpec>,
    shots: Option<u64>,
    seed: Option<u64>,
    shards: Option<usize>,
    engine: Option<String>,
    decoder: Option<String>,
    lookup_wmax: Option<usize>,
}

fn load_config(path: &Path) -> CliResult<ConfigFile> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Simulate(args) => cmd_simulate(args),
        Cmd::Precompute(args) => cmd_precompute(args),
        Cmd::DeriveChecks(args) => cmd_derive_checks(args),
        Cmd::Bench(args) => cmd_bench(args),
        Cmd::Validate(args) => cmd_validate(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_simulate(args: SimulateArgs) -> CliResult<()> {
    let config = match &args.config {
        Some(path) => load_config(path)?,
        None => ConfigFile::default(),
    };
    let unknown = |what: &'static str, name: &str| Failure {
        code: 3,
        message: format!("config file has unknown {what} '{name}'"),
    };
    let engine: EngineKind = match (args.engine, config.engine.as_deref()) {
        (Some(e), _) => e.into(),
        (None, Some("naive")) => EngineKind::Naive,
        (None, Some("abc")) | (None, None) => EngineKind::Abc,
        (None, Some(other)) => return Err(unknown("engine", other)),
    };
    let decoder_kind = match (args.decoder, config.decoder.as_deref()) {
        (Some(d), _) => d,
        (None, Some("trivial")) | (None, None) => DecoderArg::Trivial,
        (None, Some("lookup")) => DecoderArg::Lookup,
        (None, Some(other)) => return Err(unknown("decoder", other)),
    };
    let noise = match (&args.noise, config.noise) {
        (Some(text), _) => parse_noise_flag(text)?,
        (None, Some(spec)) => spec,
        (None, None) => {
            return Err(Failure {
                code: 3,
                message: "no noise levels given; use --noise or --config".into(),
            })
        }
    };
    noise.validate().map_err(core_err)?;
    let shots = args.shots.or(config.shots).unwrap_or(1000);
    let seed = args.seed.or(config.seed).unwrap_or(0);
    let shards = args.shards.or(config.shards).unwrap_or(1);
    let w_max = args.lookup_wmax.or(config.lookup_wmax).unwrap_or(1);

    let circuit = load_circuit(&args.circuit)?;
    let checks = load_checks(&args.syndrome, &args.logical, &circuit)?;
    let circuit_digest = io::circuit_digest(&circuit);
    let checks_digest = io::checks_digest(&checks);

    let need_pre = engine == EngineKind::Abc || decoder_kind == DecoderArg::Lookup;
    let pre: Option<BackpropagatedSet> = match &args.pre {
        Some(path) => {
            let artifact =
                io::parse_precompute(&read_text(path)?).map_err(|e| in_file(path, e))?;
            for (what, artifact_digest, input) in [
                ("circuit", &artifact.circuit_digest, &circuit_digest),
                ("checks", &artifact.checks_digest, &checks_digest),
            ] {
                if artifact_digest != input {
                    return Err(core_err(CoreError::DigestMismatch {
                        what,
                        artifact: artifact_digest.clone(),
                        input: input.clone(),
                    }));
                }
            }
            Some(artifact.set)
        }
        None if need_pre => {
            Some(BackpropagatedSet::precompute(&circuit, &checks).map_err(core_err)?)
        }
        None => None,
    };

    let decoder: Box<dyn Decoder> = match decoder_kind {
        DecoderArg::Trivial => Box::new(TrivialDecoder::new(checks.num_logical_rows())),
        DecoderArg::Lookup => {
            let pre_ref = pre.as_ref().expect("need_pre covers the lookup decoder");
            Box::new(obtain_lookup(
                &args, &circuit, pre_ref, &noise, w_max, &circuit_digest, &checks_digest,
            )?)
        }
    };

    eprintln!(
        "config: engine={} decoder={} shots={shots} seed={seed} shards={shards} \
         noise=p_gate={},p_meas={},p_idle={} wmax={w_max} circuit={} checks={}",
        engine.name(),
        match decoder_kind {
            DecoderArg::Trivial => "trivial",
            DecoderArg::Lookup => "lookup",
        },
        noise.p_gate,
        noise.p_meas,
        noise.p_idle,
        &circuit_digest[..8],
        &checks_digest[..8],
    );

    let run = Run::new(&circuit, &checks, pre.as_ref(), noise, decoder.as_ref())
        .map_err(core_err)?;
    let output = run
        .estimate(engine, &RunConfig { shots, seed, shards })
        .map_err(core_err)?;
    eprintln!(
        "done: {} failures in {} shots, rate {:.3e}",
        output.estimate.failures, output.estimate.shots, output.estimate.rate
    );

    let results = io::ResultsJson::from_parts(
        engine.name(),
        circuit_digest,
        checks_digest,
        noise,
        seed,
        &output.estimate,
        output.timings,
    );
    write_output(args.out.as_deref(), results.render().as_bytes())
}

/// Loads the lookup table from the cache when it matches this run; otherwise
/// builds it (and refreshes the cache file when one was named).
fn obtain_lookup(
    args: &SimulateArgs,
    circuit: &CliffordCircuit,
    pre: &BackpropagatedSet,
    noise: &NoiseSpec,
    w_max: usize,
    circuit_digest: &str,
    checks_digest: &str,
) -> CliResult<LookupDecoder> {
    if let Some(path) = &args.lookup_cache {
        if path.exists() {
            match io::parse_lookup(&read_bytes(path)?) {
                Ok(artifact)
                    if artifact.circuit_digest == circuit_digest
                        && artifact.checks_digest == checks_digest
                        && artifact.noise == *noise
                        && artifact.decoder.w_max() == w_max =>
                {
                    eprintln!("lookup: reusing cache {}", path.display());
                    return Ok(artifact.decoder);
                }
                Ok(_) => eprintln!("lookup: cache {} is stale, rebuilding", path.display()),
                Err(e) => eprintln!("lookup: cache {} unreadable ({e}), rebuilding", path.display()),
            }
        }
    }
    let locations = enumerate_locations(circuit, noise);
    let decoder =
        build_lookup(pre, &locations, noise, w_max, args.lookup_cap).map_err(core_err)?;
    eprintln!(
        "lookup: built table with {} entries over {} locations",
        decoder.len(),
        locations.len()
    );
    if let Some(path) = &args.lookup_cache {
        let bytes = io::serialize_lookup(&decoder, circuit_digest, checks_digest, noise);
        fs::write(path, bytes).map_err(|e| Failure {
            code: 2,
            message: format!("cannot write {}: {e}", path.display()),
        })?;
    }
    Ok(decoder)
}

fn cmd_precompute(args: PrecomputeArgs) -> CliResult<()> {
    let circuit = load_circuit(&args.circuit)?;
    let checks = load_checks(&args.syndrome, &args.logical, &circuit)?;
    eprintln!(
        "config: periodic={} rows={}+{} circuit={}",
        args.periodic,
        checks.num_syndrome_rows(),
        checks.num_logical_rows(),
        &io::circuit_digest(&circuit)[..8],
    );
    let set = if args.periodic {
        precompute_periodic(&circuit, &checks).map_err(core_err)?
    } else {
        BackpropagatedSet::precompute(&circuit, &checks).map_err(core_err)?
    };
    let text = io::serialize_precompute(
        &set,
        &io::circuit_digest(&circuit),
        &io::checks_digest(&checks),
    );
    write_output(args.out.as_deref(), text.as_bytes())
}

fn cmd_derive_checks(args: DeriveChecksArgs) -> CliResult<()> {
    let circuit = load_circuit(&args.circuit)?;
    eprintln!(
        "config: shots={} seed={} circuit={}",
        args.shots,
        args.seed,
        &io::circuit_digest(&circuit)[..8],
    );
    let rows = derive_checks(&circuit, args.shots, args.seed);
    eprintln!("derived {} checks", rows.len());
    write_output(args.out.as_deref(), io::serialize_check_rows(&rows).as_bytes())
}

fn cmd_bench(args: BenchArgs) -> CliResult<()> {
    let rounds: Vec<usize> = args
        .rounds
        .split(',')
        .map(|t| {
            t.trim().parse().map_err(|_| Failure {
                code: 3,
                message: format!("bad round count '{t}'"),
            })
        })
        .collect::<CliResult<_>>()?;
    let cfg = BenchConfig {
        rounds,
        shots: args.shots,
        sites_per_shot: args.sites,
        repeats: args.repeats,
        seed: args.seed,
    };
    eprintln!(
        "config: rounds={:?} shots={} sites={} repeats={} seed={}",
        cfg.rounds, cfg.shots, cfg.sites_per_shot, cfg.repeats, cfg.seed
    );
    let records = benchmark_repetition(&cfg).map_err(core_err)?;
    write_output(args.out.as_deref(), io::bench_csv(&records).as_bytes())
}

fn cmd_validate(args: ValidateArgs) -> CliResult<()> {
    let circuit = load_circuit(&args.circuit)?;
    eprintln!(
        "{}: ok ({} qubits, depth {}, {} outcomes)",
        args.circuit.display(),
        circuit.num_qubits(),
        circuit.depth(),
        circuit.num_outcomes()
    );
    match (&args.syndrome, &args.logical) {
        (Some(s), Some(l)) => {
            let checks = load_checks(s, l, &circuit)?;
            eprintln!(
                "checks: ok ({} syndrome rows, {} logical rows over {} outcomes)",
                checks.num_syndrome_rows(),
                checks.num_logical_rows(),
                checks.num_outcomes()
            );
        }
        (None, None) => {}
        _ => {
            return Err(Failure {
                code: 3,
                message: "--syndrome and --logical go together".into(),
            })
        }
    }
    Ok(())
}
