//! Line-oriented `key = value` run configuration.
//!
//! ```text
//! # comments and blank lines are ignored
//! q = 4
//! t = 2
//! k = 4
//! epsilon = 3/4
//! gamma = 1/4
//! delta = 1/2
//! erasures = 0, 7, 15
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use lbfe_core::field::{prime_power, MAX_ORDER};
use lbfe_core::rs_scheme::{main_params_with_dimension, rate_half_params, SchemeParams};
use lbfe_core::{Error as CoreError, Rational};

const KEYS: &[&str] = &[
    "q",
    "t",
    "k",
    "n",
    "epsilon",
    "gamma",
    "delta",
    "erasures",
    "blocks",
    "seed",
    "target",
    "scheme",
    "bench_t_min",
    "bench_t_max",
    "out",
];

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: key `{key}`: {message}")]
    Parse { line: usize, key: String, message: String },
    #[error("constraint violated: {0}")]
    Constraint(String),
}

fn parse_err(line: usize, key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Parse { line, key: key.to_string(), message: message.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeChoice {
    RateHalf,
    Main,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub q: u64,
    pub t: u32,
    pub k: usize,
    /// Code length; `None` means the full-length code `n = Q`.
    pub n: Option<usize>,
    pub params: Option<SchemeParams>,
    pub erasures: Vec<usize>,
    pub blocks: usize,
    pub seed: u64,
    pub target: Option<Vec<u32>>,
    pub scheme: SchemeChoice,
    pub bench_t_min: u32,
    pub bench_t_max: u32,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn order(&self) -> u64 {
        self.q.pow(self.t)
    }

    pub fn length(&self) -> usize {
        self.n.unwrap_or(self.order() as usize)
    }
}

/// Accepts `a/b` or a plain integer.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((a, b)) => {
            let (a, b): (i64, i64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
            (b != 0).then(|| Rational::new(a, b))
        }
        None => text.parse().ok().map(Rational::from_integer),
    }
}

fn parse_list<T: FromStr>(text: &str) -> Option<Vec<T>> {
    if text.trim().is_empty() {
        return Some(Vec::new());
    }
    text.split(',').map(|x| x.trim().parse().ok()).collect()
}

struct Entries {
    values: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, ConfigError> {
        match self.values.remove(key) {
            None => Ok(None),
            Some((line, raw)) => {
                raw.parse().map(Some).map_err(|_| parse_err(line, key, format!("cannot parse `{raw}`")))
            }
        }
    }

    fn require<T: FromStr>(&mut self, key: &str) -> Result<T, ConfigError> {
        self.take(key)?.ok_or_else(|| parse_err(0, key, "missing required key"))
    }

    fn rational(&mut self, key: &str) -> Result<Option<Rational>, ConfigError> {
        match self.values.remove(key) {
            None => Ok(None),
            Some((line, raw)) => parse_rational(&raw)
                .map(Some)
                .ok_or_else(|| parse_err(line, key, format!("`{raw}` is not a rational a/b"))),
        }
    }

    fn list<T: FromStr>(&mut self, key: &str) -> Result<Option<Vec<T>>, ConfigError> {
        match self.values.remove(key) {
            None => Ok(None),
            Some((line, raw)) => parse_list(&raw)
                .map(Some)
                .ok_or_else(|| parse_err(line, key, format!("`{raw}` is not a comma-separated list"))),
        }
    }

    fn line(&self, key: &str) -> usize {
        self.values.get(key).map_or(0, |e| e.0)
    }
}

/// Strict parse: unknown or repeated keys are errors, and every
/// cross-parameter constraint is checked before returning.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut values = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| parse_err(line, body, "expected `key = value`"))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(parse_err(line, key, "unknown key"));
        }
        if values.insert(key.to_string(), (line, value.trim().to_string())).is_some() {
            return Err(parse_err(line, key, "repeated key"));
        }
    }
    let mut e = Entries { values };
    let scheme_line = e.line("scheme");
    let q: u64 = e.require("q")?;
    let t: u32 = e.require("t")?;
    let k: usize = e.require("k")?;
    let n: Option<usize> = e.take("n")?;
    let (epsilon, gamma, delta) = (e.rational("epsilon")?, e.rational("gamma")?, e.rational("delta")?);
    let params = match (epsilon, gamma, delta) {
        (Some(eps), Some(g), Some(d)) => Some(SchemeParams::new(eps, g, d)),
        (None, None, None) => None,
        _ => return Err(parse_err(0, "epsilon/gamma/delta", "give all three or none")),
    };
    let scheme = match e.values.remove("scheme") {
        None if params.is_some() => SchemeChoice::Main,
        None => SchemeChoice::RateHalf,
        Some((_, v)) if v == "rate-half" => SchemeChoice::RateHalf,
        Some((_, v)) if v == "main" => SchemeChoice::Main,
        Some((line, v)) => return Err(parse_err(line, "scheme", format!("`{v}` is not rate-half or main"))),
    };
    if scheme == SchemeChoice::Main && params.is_none() {
        return Err(parse_err(scheme_line, "scheme", "main needs epsilon, gamma and delta"));
    }
    let erasures: Vec<usize> = e.list("erasures")?.unwrap_or_default();
    let target: Option<Vec<u32>> = e.list("target")?;
    let config = RunConfig {
        q,
        t,
        k,
        n,
        params,
        erasures,
        blocks: e.take("blocks")?.unwrap_or(1),
        seed: e.take("seed")?.unwrap_or(0),
        target,
        scheme,
        bench_t_min: e.take("bench_t_min")?.unwrap_or(t),
        bench_t_max: e.take("bench_t_max")?.unwrap_or(t),
        out: e.take::<String>("out")?.map(PathBuf::from),
    };
    validate(&config)?;
    Ok(config)
}

fn constraint(message: impl Into<String>) -> ConfigError {
    ConfigError::Constraint(message.into())
}

fn core_constraint(e: CoreError) -> ConfigError {
    match e {
        CoreError::ParamConstraintViolated(m) => constraint(m),
        other => constraint(other.to_string()),
    }
}

fn validate(c: &RunConfig) -> Result<(), ConfigError> {
    if prime_power(c.q).is_none() {
        return Err(constraint(format!("q = {} is a prime power", c.q)));
    }
    if c.t < 2 {
        return Err(constraint("t ≥ 2"));
    }
    let order = c.q.checked_pow(c.t).filter(|&o| o <= MAX_ORDER);
    let Some(order) = order else {
        return Err(constraint(format!("Q = q^t ≤ {MAX_ORDER}")));
    };
    let n = c.length();
    if n == 0 || n as u64 > order {
        return Err(constraint("1 ≤ n ≤ Q"));
    }
    if c.k == 0 || c.k > n {
        return Err(constraint("1 ≤ k ≤ n"));
    }
    if let Some(&bad) = c.erasures.iter().find(|&&j| j >= n) {
        return Err(constraint(format!("erasure {bad} < n")));
    }
    let mut sorted = c.erasures.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(constraint("erasures are distinct"));
    }
    if let Some(target) = &c.target {
        if target.len() != c.k {
            return Err(constraint("target has k entries"));
        }
        if target.iter().any(|&x| u64::from(x) >= order) {
            return Err(constraint("target entries < Q"));
        }
    }
    if c.bench_t_min < 2 || c.bench_t_min > c.bench_t_max {
        return Err(constraint("2 ≤ bench_t_min ≤ bench_t_max"));
    }
    if let Some(params) = &c.params {
        params.validate(c.q).map_err(core_constraint)?;
    }
    match c.scheme {
        SchemeChoice::RateHalf => {
            rate_half_params(c.q, c.t, c.k).map_err(|_| constraint("k q² ≤ Q ⌊q/2⌋ (q − 1)"))?;
        }
        SchemeChoice::Main => {
            let params = c.params.as_ref().expect("checked at parse time");
            main_params_with_dimension(c.q, c.t, c.k, params).map_err(core_constraint)?;
            let erased = Rational::from_integer((c.erasures.len() + order as usize - n) as i64);
            if erased >= params.gamma * Rational::from_integer(order as i64) {
                return Err(constraint("|ℐ| + (Q − n) < γQ"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let c = parse_config("q = 2\nt = 3\nk = 2\n").unwrap();
        assert_eq!((c.q, c.t, c.k, c.length()), (2, 3, 2, 8));
        assert_eq!(c.scheme, SchemeChoice::RateHalf);
        assert!(c.params.is_none() && c.erasures.is_empty());
        assert_eq!((c.blocks, c.seed), (1, 0));
    }

    #[test]
    fn rationals_are_exact() {
        let c =
            parse_config("q=4\nt=2\nk=4\nepsilon=3/4\ngamma = 1/4\ndelta = 1/2 # comment\nerasures = 1, 5\n").unwrap();
        let p = c.params.unwrap();
        assert_eq!(p.delta, Rational::new(1, 2));
        assert_eq!(p.epsilon, Rational::new(6, 8));
        assert_eq!(c.scheme, SchemeChoice::Main);
        assert_eq!(c.erasures, vec![1, 5]);
        assert_eq!(parse_rational(" 7 "), Some(Rational::from_integer(7)));
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn delta_too_small_names_the_inequality() {
        let err = parse_config("q=4\nt=2\nk=4\nepsilon=3/4\ngamma=1/4\ndelta=3/8\n").unwrap_err();
        let ConfigError::Constraint(msg) = err else { panic!("{err:?}") };
        assert!(msg.contains("δ ≥ γ + 1/q"), "{msg}");
    }

    #[test]
    fn parse_errors_carry_line_and_key() {
        assert_eq!(parse_config("q = 2\nt = 3\nwidth = 9\n"), Err(parse_err(3, "width", "unknown key")));
        assert!(matches!(parse_config("q = 2\nq = 3\n"), Err(ConfigError::Parse { line: 2, .. })));
        assert!(matches!(parse_config("q = 2\nt = x\nk = 1\n"), Err(ConfigError::Parse { line: 2, .. })));
        assert!(matches!(parse_config("q = 2\nt = 3\n"), Err(ConfigError::Parse { ref key, .. }) if key == "k"));
        assert!(matches!(parse_config("q=4\nt=2\nk=4\nepsilon=3/4\n"), Err(ConfigError::Parse { .. })));
        assert!(matches!(parse_config("q=4\nt=2\nk=4\ndelta=a/b\n"), Err(ConfigError::Parse { line: 4, .. })));
    }

    #[test]
    fn cross_parameter_constraints() {
        let bad = |text: &str| matches!(parse_config(text), Err(ConfigError::Constraint(_)));
        assert!(bad("q=6\nt=2\nk=1\n"));
        assert!(bad("q=2\nt=3\nk=3\n"));
        assert!(bad("q=2\nt=3\nk=2\nerasures=8\n"));
        assert!(bad("q=2\nt=3\nk=2\ntarget=1\n"));
        assert!(bad("q=4\nt=2\nk=4\nepsilon=3/4\ngamma=1/4\ndelta=1/2\nerasures=0,1,2,3\n"));
        assert!(bad("q=4\nt=2\nk=5\nepsilon=3/4\ngamma=1/4\ndelta=1/2\n"));
        assert!(!bad("q=4\nt=2\nk=4\nepsilon=3/4\ngamma=1/4\ndelta=1/2\nerasures=0,1,2\n"));
    }
}
