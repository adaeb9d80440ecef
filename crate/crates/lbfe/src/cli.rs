//! The five commands. Each writes JSON into the output directory and returns
//! a short text summary.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::ValueEnum;
use lbfe_core::bounds::{dstar_bruteforce, BoundReport, DSTAR_LIMIT};
use lbfe_core::rs_scheme::{build_rate_half_scheme, build_scheme, rate_half_params, EvaluationScheme, SchemeKind};
use lbfe_core::scheme::decompose_witness;
use lbfe_core::sim::{Cluster, SchemeSpec};
use lbfe_core::{Elem, Field, Rational, RsCode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{ConfigError, RunConfig, SchemeChoice};
use crate::formats::{BoundReportFile, ClusterSnapshot, EvalRecord, FormatError, SchemeFile, WitnessFile};
use crate::verify::{run_suites, SuiteResult};

pub const SCHEME_FILE: &str = "scheme.json";
pub const WITNESS_FILE: &str = "witness.json";
pub const EVAL_FILE: &str = "eval_results.json";
pub const CLUSTER_FILE: &str = "cluster.json";
pub const VERIFY_FILE: &str = "verify.json";
pub const BOUNDS_FILE: &str = "bounds.json";
pub const BENCH_FILE: &str = "bench.json";

/// Witnesses are only written for fields this small.
const WITNESS_MAX_ORDER: u32 = 64;

// Independent ChaCha streams so that, for one seed, the data blocks do not
// shift when a command draws a different number of targets.
const BLOCK_STREAM: u64 = 1;
const TARGET_STREAM: u64 = 2;
const VERIFY_STREAM: u64 = 3;
const BENCH_STREAM: u64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    BuildScheme,
    Simulate,
    Verify,
    Bounds,
    Bench,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Core(#[from] lbfe_core::Error),
}

/// What a command did. `passed` is false only when a check failed.
#[derive(Clone, Debug)]
pub struct Report {
    pub passed: bool,
    pub summary: String,
    pub files: Vec<PathBuf>,
}

impl Report {
    /// 0 on success, 1 when a check failed.
    pub fn exit_code(&self) -> u8 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

impl CliError {
    /// Errors come from the inputs (config, files, parameters): exit code 2.
    pub fn exit_code(&self) -> u8 {
        2
    }
}

fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf, CliError> {
    let io = |path: &Path, source| CliError::Io { path: path.to_path_buf(), source };
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let path = dir.join(name);
    let text = serde_json::to_string_pretty(value).map_err(FormatError::from)?;
    fs::write(&path, text + "\n").map_err(|e| io(&path, e))?;
    Ok(path)
}

fn field(config: &RunConfig) -> Result<Arc<Field>, CliError> {
    Ok(Arc::new(Field::new(config.q, config.t)?))
}

/// The configured code: points `0, 1, …, n − 1`.
pub fn code_for(config: &RunConfig) -> Result<RsCode, CliError> {
    let f = field(config)?;
    let n = config.length();
    if n == f.order() as usize {
        Ok(RsCode::full_length(f, config.k)?)
    } else {
        Ok(RsCode::new(f, config.k, (0..n as u32).map(Elem).collect())?)
    }
}

fn random_vec(rng: &mut ChaCha8Rng, len: usize, order: u32) -> Vec<Elem> {
    (0..len).map(|_| Elem(rng.gen_range(0..order))).collect()
}

fn target_for(config: &RunConfig, code: &RsCode, seed: u64) -> Vec<Elem> {
    match &config.target {
        Some(t) => t.iter().copied().map(Elem).collect(),
        None => random_vec(&mut stream(seed, TARGET_STREAM), code.k(), code.field().order()),
    }
}

fn spec_for(config: &RunConfig) -> SchemeSpec {
    match (config.scheme, config.params) {
        (SchemeChoice::Main, Some(p)) => SchemeSpec::Main(p),
        _ => SchemeSpec::RateHalf,
    }
}

fn build(code: &RsCode, p: &[Elem], spec: SchemeSpec, failed: &[usize]) -> Result<EvaluationScheme, CliError> {
    Ok(match spec {
        SchemeSpec::RateHalf => build_rate_half_scheme(code, p, failed)?,
        SchemeSpec::Main(params) => build_scheme(code, p, &params, failed)?,
    })
}

/// Runs `command`. `seed` overrides the configured seed.
pub fn run_command(command: Command, config: &RunConfig, out: &Path, seed: Option<u64>) -> Result<Report, CliError> {
    let seed = seed.unwrap_or(config.seed);
    match command {
        Command::BuildScheme => build_scheme_cmd(config, out, seed),
        Command::Simulate => simulate(config, out, seed),
        Command::Verify => verify(config, out, seed),
        Command::Bounds => bounds(config, out, seed),
        Command::Bench => bench(config, out, seed),
    }
}

fn build_scheme_cmd(config: &RunConfig, out: &Path, seed: u64) -> Result<Report, CliError> {
    let code = code_for(config)?;
    let p = target_for(config, &code, seed);
    let scheme = build(&code, &p, spec_for(config), &config.erasures)?;
    let mut files = vec![write_json(out, SCHEME_FILE, &SchemeFile::of(&scheme))?];
    if code.field().order() <= WITNESS_MAX_ORDER && code.is_full_length() {
        let witnesses = scheme
            .rounds()
            .iter()
            .map(|w| decompose_witness(&code, w.target(), &w.assignment()).map(|wit| WitnessFile::of(&wit)))
            .collect::<Result<Vec<_>, _>>()?;
        files.push(write_json(out, WITNESS_FILE, &witnesses)?);
    }
    let summary = format!(
        "scheme: {} round(s), {} protocol bits, {} subspace bits, naive {} bits",
        scheme.s(),
        scheme.protocol_bits(),
        scheme.subspace_bits(),
        code.k() as u64 * code.symbol_bits()
    );
    Ok(Report { passed: true, summary, files })
}

fn simulate(config: &RunConfig, out: &Path, seed: u64) -> Result<Report, CliError> {
    let saved = out.join(SCHEME_FILE);
    let scheme = if saved.exists() {
        let text = fs::read_to_string(&saved).map_err(|source| CliError::Io { path: saved.clone(), source })?;
        let file: SchemeFile = serde_json::from_str(&text).map_err(FormatError::from)?;
        file.build()?
    } else {
        let code = code_for(config)?;
        let p = target_for(config, &code, seed);
        build(&code, &p, spec_for(config), &config.erasures)?
    };
    let code = scheme.code().clone();
    let spec = match scheme.kind() {
        SchemeKind::RateHalf => SchemeSpec::RateHalf,
        SchemeKind::Main(p) => SchemeSpec::Main(p),
    };
    let p = scheme.target().to_vec();
    let mut rng = stream(seed, BLOCK_STREAM);
    let blocks: Vec<_> = (0..config.blocks).map(|_| random_vec(&mut rng, code.k(), code.field().order())).collect();
    let mut cluster = Cluster::deploy(code.clone(), &blocks)?;
    cluster.fail_nodes(scheme.failed())?;
    cluster.install(scheme)?;

    let mut records = Vec::with_capacity(blocks.len());
    let mut mismatches = 0;
    for b in 0..blocks.len() {
        let fast = cluster.evaluate(b, &p, spec)?;
        let naive = cluster.evaluate_naive(b, &p)?;
        if fast.values != naive.values {
            mismatches += 1;
        }
        records.push(EvalRecord::of(b, &fast));
    }
    let files =
        vec![write_json(out, EVAL_FILE, &records)?, write_json(out, CLUSTER_FILE, &ClusterSnapshot::of(&cluster))?];
    let scheme_bits: u64 = records.iter().map(|r| r.bits_downloaded).sum();
    let naive_bits: u64 = records.iter().map(|r| r.bits_naive).sum();
    let summary = format!(
        "{} block(s), {} failed node(s): scheme {scheme_bits} bits, naive {naive_bits} bits, {mismatches} mismatch(es)",
        blocks.len(),
        cluster.failed().len()
    );
    Ok(Report { passed: mismatches == 0, summary, files })
}

fn verify(config: &RunConfig, out: &Path, seed: u64) -> Result<Report, CliError> {
    let code = code_for(config)?;
    let suites = run_suites(config, &code, &mut stream(seed, VERIFY_STREAM));
    let files = vec![write_json(out, VERIFY_FILE, &suites)?];
    let passed = suites.iter().all(SuiteResult::passed);
    let lines: Vec<String> = suites
        .iter()
        .map(|s| match (&s.skipped, &s.first_failure) {
            (Some(why), _) => format!("SKIP {}: {why}", s.name),
            (None, None) => format!("PASS {}: {} cases", s.name, s.cases),
            (None, Some(first)) => format!("FAIL {}: {}/{} failed, first {first}", s.name, s.failures, s.cases),
        })
        .collect();
    Ok(Report { passed, summary: lines.join("\n"), files })
}

fn bounds(config: &RunConfig, out: &Path, seed: u64) -> Result<Report, CliError> {
    let code = code_for(config)?;
    let order = u64::from(code.field().order());
    let dual_size = order.checked_pow((code.n() - code.k()) as u32);
    let dstar = match dual_size {
        Some(size) if size <= DSTAR_LIMIT => Some(dstar_bruteforce(&code, &target_for(config, &code, seed))?),
        _ => None,
    };
    let report = BoundReport::new(code.n(), code.k(), config.q, config.t, dstar)?;
    let file = BoundReportFile::of(&report);
    let files = vec![write_json(out, BOUNDS_FILE, &file)?];
    let mut lines = vec![format!("{:<28} {:>12}  binding", "bound", "bits")];
    for e in &file.entries {
        let flag = if e.binding { "*" } else { "" };
        let vacuous = if e.vacuous { " (vacuous)" } else { "" };
        lines.push(format!("{:<28} {:>12.4}  {flag}{vacuous}", e.name, e.bits));
    }
    Ok(Report { passed: true, summary: lines.join("\n"), files })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub q: u64,
    pub t: u32,
    pub order: u64,
    pub n: usize,
    pub k: usize,
    pub scheme: String,
    pub bits_scheme: u64,
    pub bits_naive: u64,
    pub ratio: f64,
    pub correct: bool,
}

/// Largest `k` the rate-half construction accepts: `⌊Q ⌊q/2⌋ (q − 1) / q²⌋`.
pub fn rate_half_dimension(q: u64, t: u32) -> usize {
    (q.pow(t) * (q / 2) * (q - 1) / (q * q)) as usize
}

fn bench(config: &RunConfig, out: &Path, seed: u64) -> Result<Report, CliError> {
    let mut rng = stream(seed, BENCH_STREAM);
    let mut rows = Vec::new();
    for t in config.bench_t_min..=config.bench_t_max {
        let f = Arc::new(Field::new(config.q, t)?);
        let order = u64::from(f.order());
        let mut runs: Vec<(String, usize, SchemeSpec)> = Vec::new();
        let k = rate_half_dimension(config.q, t);
        if k > 0 && rate_half_params(config.q, t, k).is_ok() {
            runs.push(("rate-half".into(), k, SchemeSpec::RateHalf));
        }
        if let Some(params) = config.params {
            let k = (Rational::from_integer(order as i64) * (Rational::from_integer(1) - params.epsilon))
                .floor()
                .to_integer() as usize;
            if k > 0 {
                runs.push(("main".into(), k, SchemeSpec::Main(params)));
            }
        }
        for (name, k, spec) in runs {
            let code = RsCode::full_length(f.clone(), k)?;
            let x = random_vec(&mut rng, k, f.order());
            let p = random_vec(&mut rng, k, f.order());
            let mut cluster = Cluster::deploy(code.clone(), std::slice::from_ref(&x))?;
            let Ok(res) = cluster.evaluate(0, &p, spec) else {
                continue;
            };
            rows.push(BenchRow {
                q: config.q,
                t,
                order,
                n: code.n(),
                k,
                scheme: name,
                bits_scheme: res.bits_downloaded,
                bits_naive: res.bits_naive,
                ratio: res.bits_downloaded as f64 / res.bits_naive as f64,
                correct: res.values == vec![f.dot(&p, &x)],
            });
        }
    }
    let files = vec![write_json(out, BENCH_FILE, &rows)?];
    let mut lines = vec![format!(
        "{:>3} {:>3} {:>8} {:>8} {:>10} {:>12} {:>12} {:>7}",
        "q", "t", "n", "k", "scheme", "bits", "naive", "ratio"
    )];
    for r in &rows {
        lines.push(format!(
            "{:>3} {:>3} {:>8} {:>8} {:>10} {:>12} {:>12} {:>7.4}",
            r.q, r.t, r.n, r.k, r.scheme, r.bits_scheme, r.bits_naive, r.ratio
        ));
    }
    let passed = rows.iter().all(|r| r.correct);
    Ok(Report { passed, summary: lines.join("\n"), files })
}
