//! Batch command-line front end.
//!
//! Exit codes: `0` success, `1` I/O failure, `2` usage or configuration
//! error, `3` physics precondition failure (adiabatic budget).

use std::ffi::OsString;
use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::Error;
use crate::oscillator::{build_model, first_order_energy, mode_overlap, ModeAssignment};
use crate::polarization::{chsh_scan, mode_rotation_entropy_scan};
use crate::interferometer::momentum_chsh_scan;
use crate::protocol::{ConversionConfig, ConversionProtocol};
use crate::scan::{format_sig, ScanResult};
use crate::state::C64;

pub const TOOL: &str = concat!("modent ", env!("CARGO_PKG_VERSION"));

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PHYSICS: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "modent", version, about = "Mode and particle entanglement simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// CHSH sum and pair entropy versus analyzer separation (CSV: theta,S,entropy)
    Chsh(ScanArgs),
    /// Mode entropy versus Hilbert-space rotation angle (CSV: phi,entropy_vn,entropy_renyi2)
    EntropyRotation(ScanArgs),
    /// Bragg interferometer CHSH sum and entropies (CSV: vartheta,S,entropy_in,entropy_out)
    Interferometer(ScanArgs),
    /// Anharmonic oscillator spectrum, overlaps and widths (JSON)
    Oscillator(OscillatorArgs),
    /// Monte-Carlo conversion campaign (JSON-lines log + JSON summary)
    Protocol(ProtocolArgs),
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    range_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    range_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OscillatorArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long)]
    truncation: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ProtocolArgs {
    /// Key-value run configuration file
    config: Option<PathBuf>,
    /// JSON-lines outcome log
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary JSON (defaults to `<out stem>.summary.json`)
    #[arg(long)]
    summary: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    gate: Option<Gate>,
    #[arg(long)]
    truncation: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gate {
    On,
    Off,
}

/// Flat key-value run configuration; every key is optional and unknown keys
/// are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    pub range_min: Option<f64>,
    pub range_max: Option<f64>,
    pub steps: Option<usize>,
    pub lambda: Option<f64>,
    pub truncation: Option<usize>,
    pub eta: Option<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub gate: Option<Gate>,
    pub landing_probability: Option<f64>,
    pub detect_amp: Option<f64>,
    pub detect_phase: Option<f64>,
    pub level_1: Option<usize>,
    pub level_2: Option<usize>,
    pub clock_period: Option<f64>,
    pub travel_plus_register_time: Option<f64>,
    pub and_gate_time: Option<f64>,
    pub t_meas: Option<f64>,
    pub adiabatic_threshold: Option<f64>,
    pub out: Option<PathBuf>,
    pub summary_out: Option<PathBuf>,
}

pub const MAX_TRUNCATION: usize = 512;
pub const MAX_STEPS: usize = 1_000_000;

impl RunConfigFile {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::InvalidConfig(e.message().to_string()))?;
        cfg.check_ranges()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Checks documented ranges, naming the offending key.
    pub fn check_ranges(&self) -> Result<(), Error> {
        let bad = |key: &str, v: &dyn std::fmt::Display, why: &str| {
            Err(Error::InvalidConfig(format!("key `{key}` = {v}: {why}")))
        };
        let unit = |key: &str, v: Option<f64>| match v {
            Some(x) if !(0.0..=1.0).contains(&x) => bad(key, &x, "must lie in [0, 1]"),
            _ => Ok(()),
        };
        let positive = |key: &str, v: Option<f64>| match v {
            Some(x) if !(x > 0.0 && x.is_finite()) => bad(key, &x, "must be positive"),
            _ => Ok(()),
        };
        unit("eta", self.eta)?;
        unit("landing_probability", self.landing_probability)?;
        unit("detect_amp", self.detect_amp)?;
        positive("clock_period", self.clock_period)?;
        positive("t_meas", self.t_meas)?;
        positive("adiabatic_threshold", self.adiabatic_threshold)?;
        for (key, v) in [
            ("travel_plus_register_time", self.travel_plus_register_time),
            ("and_gate_time", self.and_gate_time),
        ] {
            if let Some(x) = v {
                if !(x >= 0.0 && x.is_finite()) {
                    return bad(key, &x, "must be nonnegative");
                }
            }
        }
        if let Some(x) = self.lambda {
            if !(x >= 0.0 && x.is_finite()) {
                return bad("lambda", &x, "must be nonnegative");
            }
        }
        if let Some(n) = self.truncation {
            if !(8..=MAX_TRUNCATION).contains(&n) {
                return bad("truncation", &n, "must lie in [8, 512]");
            }
        }
        if let Some(n) = self.steps {
            if !(2..=MAX_STEPS).contains(&n) {
                return bad("steps", &n, "must lie in [2, 1000000]");
            }
        }
        if self.trials == Some(0) {
            return bad("trials", &0, "must be at least 1");
        }
        if let (Some(a), Some(b)) = (self.level_1, self.level_2) {
            if a == b {
                return bad("level_2", &b, "must differ from level_1");
            }
        }
        for (key, v) in [
            ("range_min", self.range_min),
            ("range_max", self.range_max),
            ("detect_phase", self.detect_phase),
        ] {
            if let Some(x) = v {
                if !x.is_finite() {
                    return bad(key, &x, "must be finite");
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Core(Error::AdiabaticViolation { .. }) => EXIT_PHYSICS,
            CliError::Core(_) => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

/// Parses `args` (including the program name), runs the subcommand, and
/// returns the process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Chsh(a) => cmd_scan(ScanKind::Chsh, a),
        Command::EntropyRotation(a) => cmd_scan(ScanKind::EntropyRotation, a),
        Command::Interferometer(a) => cmd_scan(ScanKind::Interferometer, a),
        Command::Oscillator(a) => cmd_oscillator(a),
        Command::Protocol(a) => cmd_protocol(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("modent: {e}");
            e.exit_code()
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfigFile, CliError> {
    match path {
        Some(p) => Ok(RunConfigFile::load(p)?),
        None => Ok(RunConfigFile::default()),
    }
}

/// Writes through a temporary file in the destination directory, then
/// renames it into place; `None` writes to stdout.
fn write_output(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    let Some(path) = path else {
        std::io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|e| CliError::Io(e.to_string()))?;
        return Ok(());
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io_err = |e: std::io::Error| CliError::Io(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

#[derive(Debug, Clone, Copy)]
enum ScanKind {
    Chsh,
    EntropyRotation,
    Interferometer,
}

impl ScanKind {
    fn name(self) -> &'static str {
        match self {
            ScanKind::Chsh => "chsh",
            ScanKind::EntropyRotation => "entropy-rotation",
            ScanKind::Interferometer => "interferometer",
        }
    }
}

const DEFAULT_SCAN_STEPS: usize = 91;

fn cmd_scan(kind: ScanKind, args: ScanArgs) -> Result<(), CliError> {
    let cfg = load_config(args.config.as_deref())?;
    let min = args.range_min.or(cfg.range_min).unwrap_or(0.0);
    let max = args.range_max.or(cfg.range_max).unwrap_or(FRAC_PI_2);
    let steps = args.steps.or(cfg.steps).unwrap_or(DEFAULT_SCAN_STEPS);
    if !(2..=MAX_STEPS).contains(&steps) {
        return Err(CliError::Usage(format!("--steps must lie in [2, {MAX_STEPS}], got {steps}")));
    }
    if !(min.is_finite() && max.is_finite() && max > min) {
        return Err(CliError::Usage(format!("range must satisfy min < max, got [{min}, {max}]")));
    }
    let scan: ScanResult = match kind {
        ScanKind::Chsh => chsh_scan(min, max, steps)?,
        ScanKind::EntropyRotation => mode_rotation_entropy_scan(min, max, steps)?,
        ScanKind::Interferometer => momentum_chsh_scan(min, max, steps)?,
    };
    let meta = vec![format!(
        "{TOOL} {} range_min={} range_max={} steps={steps}",
        kind.name(),
        format_sig(min),
        format_sig(max)
    )];
    let out = args.out.as_deref().or(cfg.out.as_deref());
    write_output(out, &scan.to_csv(&meta))
}

const REPORT_LEVELS: usize = 10;
const REPORT_OVERLAPS: usize = 4;

/// JSON report of the oscillator at one anharmonicity.
pub fn oscillator_report(lambda: f64, truncation: usize) -> Result<serde_json::Value, Error> {
    let model = build_model(lambda, truncation)?;
    let levels = REPORT_LEVELS.min(truncation);
    let eigenvalues: Vec<f64> = model.eigenvalues().iter().take(levels).copied().collect();
    let first_order: Vec<f64> = (0..levels).map(|n| first_order_energy(n, lambda)).collect();
    let overlaps = (0..REPORT_OVERLAPS)
        .map(|n| mode_overlap(&model, n))
        .collect::<Result<Vec<_>, _>>()?;
    let x2 = (0..levels)
        .map(|n| model.position_variance(n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(json!({
        "tool": TOOL,
        "lambda": lambda,
        "truncation": truncation,
        "eigenvalues": eigenvalues,
        "first_order": first_order,
        "overlaps": overlaps,
        "x2": x2,
    }))
}

fn cmd_oscillator(args: OscillatorArgs) -> Result<(), CliError> {
    let cfg = load_config(args.config.as_deref())?;
    let lambda = args.lambda.or(cfg.lambda).unwrap_or(0.04);
    let truncation = args.truncation.or(cfg.truncation).unwrap_or(64);
    if !(8..=MAX_TRUNCATION).contains(&truncation) {
        return Err(CliError::Usage(format!("--truncation must lie in [8, {MAX_TRUNCATION}]")));
    }
    let report = oscillator_report(lambda, truncation)?;
    let mut text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    write_output(args.out.as_deref().or(cfg.out.as_deref()), &text)
}

/// Resolved campaign parameters: flags override the file, the file
/// overrides defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolRun {
    pub config: ConversionConfig,
    pub trials: u64,
    pub seed: u64,
}

pub const DEFAULT_TRIALS: u64 = 100_000;

impl ProtocolRun {
    pub fn resolve(file: &RunConfigFile) -> Result<Self, Error> {
        let mut c = ConversionConfig::default();
        if let Some(v) = file.lambda {
            c.lambda_on = v;
        }
        if let Some(v) = file.truncation {
            c.truncation = v;
        }
        if let Some(v) = file.eta {
            c.ancilla.eta = v;
        }
        if let Some(g) = file.gate {
            c.abort_gate = g == Gate::On;
        }
        if let Some(v) = file.landing_probability {
            c.landing_probability = v;
        }
        if file.detect_amp.is_some() || file.detect_phase.is_some() {
            let r = file.detect_amp.unwrap_or(c.ancilla.detect_amp.norm());
            c.ancilla.detect_amp = C64::from_polar(r, file.detect_phase.unwrap_or(0.0));
        }
        if file.level_1.is_some() || file.level_2.is_some() {
            let (a, b) = c.assignment.levels();
            c.assignment = ModeAssignment::new(file.level_1.unwrap_or(a), file.level_2.unwrap_or(b))?;
        }
        if let Some(v) = file.clock_period {
            c.clock_period = v;
        }
        if let Some(v) = file.travel_plus_register_time {
            c.travel_plus_register_time = v;
        }
        if let Some(v) = file.and_gate_time {
            c.and_gate_time = v;
        }
        if let Some(v) = file.t_meas {
            c.t_meas = v;
        }
        if let Some(v) = file.adiabatic_threshold {
            c.adiabatic_threshold = v;
        }
        Ok(Self {
            config: c,
            trials: file.trials.unwrap_or(DEFAULT_TRIALS),
            seed: file.seed.unwrap_or(0),
        })
    }
}

fn default_summary_path(log: &Path) -> PathBuf {
    let stem = log.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    log.with_file_name(format!("{stem}.summary.json"))
}

fn cmd_protocol(args: ProtocolArgs) -> Result<(), CliError> {
    let mut file = load_config(args.config.as_deref())?;
    // flags take precedence over file values
    file.seed = args.seed.or(file.seed);
    file.lambda = args.lambda.or(file.lambda);
    file.eta = args.eta.or(file.eta);
    file.trials = args.trials.or(file.trials);
    file.gate = args.gate.or(file.gate);
    file.truncation = args.truncation.or(file.truncation);
    file.out = args.out.or(file.out);
    file.summary_out = args.summary.or(file.summary_out);
    file.check_ranges()?;

    let run = ProtocolRun::resolve(&file)?;
    let protocol = ConversionProtocol::new(run.config)?;
    let campaign = protocol.run_campaign(run.trials, run.seed)?;
    let stats = &campaign.stats;

    let mut summary = serde_json::Map::new();
    summary.insert("tool".into(), json!(TOOL));
    summary.insert("seed".into(), json!(run.seed));
    summary.insert("lambda_on".into(), json!(run.config.lambda_on));
    summary.insert("truncation".into(), json!(run.config.truncation));
    summary.insert("eta".into(), json!(run.config.ancilla.eta));
    summary.insert("landing_probability".into(), json!(run.config.landing_probability));
    summary.insert("expected_delivered_rate".into(), json!(run.config.expected_delivered_rate()));
    if let Some(r) = protocol.adiabatic_report() {
        summary.insert("adiabatic_r1".into(), json!(r.r1));
        summary.insert("adiabatic_r2".into(), json!(r.r2));
    }
    if let serde_json::Value::Object(m) = serde_json::to_value(stats).map_err(|e| CliError::Io(e.to_string()))? {
        summary.extend(m);
    }
    let mut summary_text = serde_json::to_string_pretty(&serde_json::Value::Object(summary))
        .map_err(|e| CliError::Io(e.to_string()))?;
    summary_text.push('\n');

    if let Some(log) = file.out.as_deref() {
        write_output(Some(log), &campaign.outcomes_jsonl()?)?;
    }
    let summary_path = file
        .summary_out
        .clone()
        .or_else(|| file.out.as_deref().map(default_summary_path));
    write_output(summary_path.as_deref(), &summary_text)?;

    let opt = |v: Option<f64>| v.map(format_sig).unwrap_or_else(|| "n/a".into());
    let line = format!(
        "delivered_rate={} mean_entropy={} min_fidelity={}",
        format_sig(stats.delivered_rate),
        opt(stats.mean_entropy),
        opt(stats.min_fidelity)
    );
    // keep stdout pure JSON when the summary itself went there
    if summary_path.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_rejects_unknown_keys() {
        let err = RunConfigFile::parse("eta = 0.9\nbogus = 1\n").unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn config_range_errors_name_the_key() {
        for (text, key) in [
            ("eta = 1.5", "eta"),
            ("lambda = -0.1", "lambda"),
            ("truncation = 4", "truncation"),
            ("steps = 1", "steps"),
            ("trials = 0", "trials"),
            ("level_1 = 2\nlevel_2 = 2", "level_2"),
        ] {
            let err = RunConfigFile::parse(text).unwrap_err();
            assert!(err.to_string().contains(key), "{text}: {err}");
        }
    }

    #[test]
    fn config_parses_all_keys() {
        let cfg = RunConfigFile::parse(
            "eta = 0.8\ngate = \"off\"\ntrials = 10\nseed = 4\nlevel_1 = 0\nlevel_2 = 3\n",
        )
        .unwrap();
        let run = ProtocolRun::resolve(&cfg).unwrap();
        assert_eq!(run.trials, 10);
        assert_eq!(run.seed, 4);
        assert!(!run.config.abort_gate);
        assert_eq!(run.config.assignment.levels(), (0, 3));
        assert_eq!(run.config.ancilla.eta, 0.8);
    }

    #[test]
    fn summary_path_derivation() {
        assert_eq!(default_summary_path(Path::new("out/log.jsonl")), PathBuf::from("out/log.summary.json"));
    }

    #[test]
    fn oscillator_report_shape() {
        let r = oscillator_report(0.0, 16).unwrap();
        assert_eq!(r["eigenvalues"].as_array().unwrap().len(), 10);
        assert_eq!(r["overlaps"].as_array().unwrap().len(), 4);
        assert!(oscillator_report(-1.0, 16).is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["modent", "chsh", "--steps", "1"]), EXIT_USAGE);
        assert_eq!(run(["modent", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["modent", "oscillator", "--lambda", "-1"]), EXIT_USAGE);
    }
}
