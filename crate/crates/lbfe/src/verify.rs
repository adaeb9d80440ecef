//! Invariant suites run by the `verify` command, sized by the configured
//! field. Small instances are exhaustive, larger ones sampled.

use std::sync::Arc;

use lbfe_core::rs_scheme::{
    rate_half_params, rs_reconstruct, sigma, sigma_by_reduction, single_window_scheme, SchemeParams,
};
use lbfe_core::scheme::{decompose_witness, generic_reconstruct, node_response, perp_char_check, SubspaceAssignment};
use lbfe_core::sim::{Cluster, SchemeSpec};
use lbfe_core::{Elem, Field, Poly, Rational, RsCode};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::RunConfig;

/// Above this many `(p, x)` pairs the correctness suite samples.
const EXHAUSTIVE_LIMIT: u64 = 1 << 16;
const SAMPLES: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    /// Why the suite did not run, if it did not.
    pub skipped: Option<String>,
    /// First failing case, for the report.
    pub first_failure: Option<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult { name: name.into(), cases: 0, failures: 0, skipped: None, first_failure: None }
    }

    fn skip(name: &str, why: impl Into<String>) -> Self {
        SuiteResult { skipped: Some(why.into()), ..Self::new(name) }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            self.first_failure.get_or_insert_with(describe);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn vector_at(mut idx: u64, len: usize, order: u64) -> Vec<Elem> {
    (0..len)
        .map(|_| {
            let e = Elem((idx % order) as u32);
            idx /= order;
            e
        })
        .collect()
}

fn random_vec(rng: &mut ChaCha8Rng, len: usize, order: u32) -> Vec<Elem> {
    (0..len).map(|_| Elem(rng.gen_range(0..order))).collect()
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    for i in 0..count {
        let j = rng.gen_range(i..n);
        all.swap(i, j);
    }
    all.truncate(count);
    all.sort_unstable();
    all
}

/// Every suite that applies to `config`.
pub fn run_suites(config: &RunConfig, code: &RsCode, rng: &mut ChaCha8Rng) -> Vec<SuiteResult> {
    let mut out = vec![sigma_suite(code.field_arc())];
    out.push(rate_half_suite(config, code, rng));
    out.push(nullspace_suite(config, code, rng));
    out.push(decoder_suite(config, code, rng));
    out.push(match &config.params {
        Some(params) => main_suite(config, code, params, rng),
        None => SuiteResult::skip("main-scheme-with-erasures", "no ε, γ, δ configured"),
    });
    out.push(perp_char_suite(code, rng));
    out
}

fn sigma_suite(field: &Arc<Field>) -> SuiteResult {
    const NAME: &str = "sigma-closed-form";
    if field.order() > 256 {
        return SuiteResult::skip(NAME, "Q > 256");
    }
    let mut res = SuiteResult::new(NAME);
    let code = RsCode::full_length(field.clone(), 1).expect("full-length code");
    let p_a = Poly::vanishing(field, code.points());
    for i in 0..field.degree() {
        for j in 0..code.n() as u64 {
            res.record(sigma(&code, i, j) == sigma_by_reduction(&code, &p_a, i, j), || format!("i={i} j={j}"));
        }
    }
    res
}

fn rate_half_suite(config: &RunConfig, code: &RsCode, rng: &mut ChaCha8Rng) -> SuiteResult {
    const NAME: &str = "rate-half-correctness";
    if rate_half_params(config.q, config.t, code.k()).is_err() {
        return SuiteResult::skip(NAME, "k above the rate-half dimension limit");
    }
    let f = code.field();
    let order = u64::from(f.order());
    let k = code.k();
    let total = order.checked_pow(2 * k as u32).unwrap_or(u64::MAX);
    let mut res = SuiteResult::new(NAME);
    let (targets, blocks, exhaustive) = if total <= EXHAUSTIVE_LIMIT {
        let per = order.pow(k as u32);
        let all: Vec<Vec<Elem>> = (0..per).map(|i| vector_at(i, k, order)).collect();
        (all.clone(), all, true)
    } else {
        let targets = (0..SAMPLES).map(|_| random_vec(rng, k, f.order())).collect();
        let blocks = (0..SAMPLES).map(|_| random_vec(rng, k, f.order())).collect();
        (targets, blocks, false)
    };
    let mut cluster = Cluster::deploy(code.clone(), &blocks).expect("blocks of length k");
    let expected_bits = code.n() as u64 * code_bits(f);
    for (i, p) in targets.iter().enumerate() {
        let picked: Vec<usize> = if exhaustive { (0..blocks.len()).collect() } else { vec![i] };
        for b in picked {
            let x = &blocks[b];
            let ok = cluster
                .evaluate(b, p, SchemeSpec::RateHalf)
                .is_ok_and(|out| out.values == vec![f.dot(p, x)] && out.bits_downloaded == expected_bits);
            res.record(ok, || format!("p={:?} x={:?}", codes(p), codes(x)));
        }
    }
    res
}

fn code_bits(f: &Field) -> u64 {
    lbfe_core::bits_per_symbol(u64::from(f.base_order()))
}

fn codes(xs: &[Elem]) -> Vec<u32> {
    xs.iter().map(|x| x.0).collect()
}

fn nullspace_suite(config: &RunConfig, code: &RsCode, rng: &mut ChaCha8Rng) -> SuiteResult {
    const NAME: &str = "silent-polynomials-orthogonal";
    let Ok(triple) = rate_half_params(config.q, config.t, code.k()) else {
        return SuiteResult::skip(NAME, "k above the rate-half dimension limit");
    };
    let code = &RsCode::full_length(code.field_arc().clone(), code.k()).expect("k ≤ Q");
    let f = code.field();
    let (order, k) = (u64::from(f.order()), code.k());
    let messages = order.checked_pow(k as u32).unwrap_or(u64::MAX);
    if messages > 4096 {
        return SuiteResult::skip(NAME, "Q^k > 4096");
    }
    let targets: Vec<Vec<Elem>> = if messages <= 64 {
        (0..messages).map(|i| vector_at(i, k, order)).collect()
    } else {
        (0..64).map(|_| random_vec(rng, k, f.order())).collect()
    };
    let words: Vec<(Vec<Elem>, Vec<Elem>)> = (0..messages)
        .map(|i| {
            let g = vector_at(i, k, order);
            let c = code.encode(&g).expect("length k");
            (g, c)
        })
        .collect();
    let mut res = SuiteResult::new(NAME);
    for p in targets.iter().filter(|p| triple.supports(p)) {
        let Ok(ws) = single_window_scheme(code, p, &triple, &[]) else {
            res.record(false, || format!("no scheme for p={:?}", codes(p)));
            continue;
        };
        for (g, c) in &words {
            if c.iter().zip(ws.node_values()).all(|(&cj, &vj)| f.trace(f.mul(cj, vj)).is_zero()) {
                res.record(f.dot(p, g).is_zero(), || format!("p={:?} g={:?}", codes(p), codes(g)));
            }
        }
    }
    res
}

fn decoder_suite(config: &RunConfig, code: &RsCode, rng: &mut ChaCha8Rng) -> SuiteResult {
    const NAME: &str = "decoders-agree";
    let Ok(triple) = rate_half_params(config.q, config.t, code.k()) else {
        return SuiteResult::skip(NAME, "k above the rate-half dimension limit");
    };
    if code.field().order() > 64 {
        return SuiteResult::skip(NAME, "Q > 64");
    }
    let code = &RsCode::full_length(code.field_arc().clone(), code.k()).expect("k ≤ Q");
    let f = code.field();
    let mut res = SuiteResult::new(NAME);
    for _ in 0..50 {
        let p = random_vec(rng, code.k(), f.order());
        let x = random_vec(rng, code.k(), f.order());
        let c = code.encode(&x).expect("length k");
        let outcome = single_window_scheme(code, &p, &triple, &[]).and_then(|ws| {
            let by_interp = rs_reconstruct(code, &ws, &ws.responses(f, &c))?;
            let assignment = ws.assignment();
            let wit = decompose_witness(code, &p, &assignment)?;
            let responses: Vec<_> = (0..code.n()).map(|j| node_response(f, j, c[j], assignment.basis(j))).collect();
            Ok((by_interp, generic_reconstruct(f, &wit, &responses)?))
        });
        let ok = matches!(outcome, Ok((a, b)) if a == b && a == f.dot(&p, &x));
        res.record(ok, || format!("p={:?} x={:?}", codes(&p), codes(&x)));
    }
    res
}

fn main_suite(config: &RunConfig, code: &RsCode, params: &SchemeParams, rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut res = SuiteResult::new("main-scheme-with-erasures");
    let f = code.field();
    let order = f.order() as usize;
    let absent = order - code.n();
    let limit = params.gamma * Rational::from_integer(order as i64);
    let max_failed =
        (0..=code.n()).take_while(|&e| Rational::from_integer((e + absent) as i64) < limit).last().unwrap_or(0);
    let mut sets = vec![config.erasures.clone()];
    for _ in 0..20 {
        let size = rng.gen_range(0..=max_failed);
        sets.push(random_subset(rng, code.n(), size));
    }
    let bits = code_bits(f);
    for failed in sets {
        let blocks: Vec<_> = (0..5).map(|_| random_vec(rng, code.k(), f.order())).collect();
        let mut cluster = Cluster::deploy(code.clone(), &blocks).expect("blocks of length k");
        cluster.fail_nodes(&failed).expect("indices below n");
        let survivors = code.n() - failed.len();
        let bound = params.bandwidth_bound(survivors, bits);
        for (b, x) in blocks.iter().enumerate() {
            let p = random_vec(rng, code.k(), f.order());
            let ok = match cluster.evaluate(b, &p, SchemeSpec::Main(*params)) {
                Ok(out) => {
                    out.values == vec![f.dot(&p, x)]
                        && failed.iter().all(|&j| cluster.node_ledger()[j] == 0)
                        && Rational::from_integer(out.bits_downloaded as i64) <= bound
                }
                Err(_) => false,
            };
            res.record(ok, || format!("ℐ={failed:?} p={:?}", codes(&p)));
        }
    }
    res
}

fn perp_char_suite(code: &RsCode, rng: &mut ChaCha8Rng) -> SuiteResult {
    const NAME: &str = "perp-char";
    let f = code.field();
    let codewords = u64::from(f.order()).checked_pow(code.k() as u32).unwrap_or(u64::MAX);
    if codewords > 4096 || code.n() > 16 {
        return SuiteResult::skip(NAME, "Q^k > 4096 or n > 16");
    }
    let t = f.degree() as usize;
    let mut res = SuiteResult::new(NAME);
    while res.cases < 20 {
        let bases = (0..code.n())
            .map(|_| {
                let dim = rng.gen_range(0..=t);
                random_vec(rng, dim, f.order())
            })
            .collect();
        let Ok(assignment) = SubspaceAssignment::new(f, bases) else {
            continue;
        };
        let ok = perp_char_check(code, &assignment).is_ok_and(|r| r.coincide());
        res.record(ok, || format!("{:?}", assignment.bases()));
    }
    res
}
