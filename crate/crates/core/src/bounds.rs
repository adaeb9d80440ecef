//! Lower bounds on the download bandwidth of linear schemes.
//!
//! Every bound is measured in base-field symbols (`log_q` units), which is
//! bits when `q = 2`. [`BoundReport`] carries both units, with bits obtained
//! by multiplying by `⌈log₂ q⌉`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::bits_per_symbol;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::rs::RsCode;
use crate::scheme::find_witness;

/// Largest dual-code size [`dstar_bruteforce`] will enumerate.
pub const DSTAR_LIMIT: u64 = 1 << 16;

fn log_base(x: f64, base: f64) -> f64 {
    libm::log(x) / libm::log(base)
}

/// The three terms of the bound for codes that are not maximal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObsBound {
    /// `k + t − 1`
    pub dimension_term: f64,
    /// `t n / (n − k + 1)`
    pub share_term: f64,
    /// `n log_q(n / (n − k + 1))`
    pub log_term: f64,
}

impl ObsBound {
    pub fn value(&self) -> f64 {
        self.dimension_term.max(self.share_term).max(self.log_term)
    }
}

/// `max{k + t − 1, t n/(n − k + 1), n log_q(n/(n − k + 1))}`.
pub fn obs_lower_bound(n: usize, k: usize, q: u64, t: u32) -> ObsBound {
    assert!(1 <= k && k <= n, "need 1 ≤ k ≤ n");
    let (nf, kf, tf) = (n as f64, k as f64, t as f64);
    let spare = nf - kf + 1.0;
    ObsBound {
        dimension_term: kf + tf - 1.0,
        share_term: tf * nf / spare,
        log_term: nf * log_base(nf / spare, q as f64),
    }
}

/// `n log_q(1 / (1 − (1 − 1/Q) d*/n))`.
pub fn prop_lower_bound(n: usize, q: u64, order: u64, dstar: usize) -> Result<f64> {
    let arg = 1.0 - (1.0 - 1.0 / order as f64) * dstar as f64 / n as f64;
    if arg <= 0.0 {
        return Err(Error::DegenerateArgument);
    }
    Ok(n as f64 * log_base(1.0 / arg, q as f64))
}

/// Value of the MDS bound; negative raw values are clamped to zero and
/// flagged as vacuous.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MdsBound {
    pub raw: f64,
    pub value: f64,
    pub vacuous: bool,
}

/// `n log_q(n / (n − k + 3))`, defined for `n > k + 1`.
pub fn mds_lower_bound(n: usize, k: usize, q: u64) -> Result<MdsBound> {
    if n <= k + 1 {
        return Err(Error::NotApplicable);
    }
    let raw = n as f64 * log_base(n as f64 / (n - k + 3) as f64, q as f64);
    let vacuous = raw <= 0.0;
    Ok(MdsBound { raw, value: if vacuous { 0.0 } else { raw }, vacuous })
}

/// Calls `visit` on every dual codeword, stopping early if it returns
/// `false`.
fn for_each_dual_codeword(code: &RsCode, mut visit: impl FnMut(&[Elem]) -> bool) -> Result<()> {
    let f = code.field();
    let basis = code.dual_code_basis();
    let order = f.order() as u64;
    let count =
        order.checked_pow(basis.len() as u32).filter(|&c| c <= DSTAR_LIMIT).ok_or(Error::TooLargeForExhaustive)?;
    let mut word = alloc::vec![Elem::ZERO; code.n()];
    for idx in 0..count {
        word.iter_mut().for_each(|x| *x = Elem::ZERO);
        let mut rest = idx;
        for y in &basis {
            let c = Elem((rest % order) as u32);
            rest /= order;
            if !c.is_zero() {
                for (x, &yj) in word.iter_mut().zip(y) {
                    *x = f.add(*x, f.mul(c, yj));
                }
            }
        }
        if !visit(&word) {
            break;
        }
    }
    Ok(())
}

fn hamming(a: &[Elem], b: &[Elem]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// `min_{y ∈ C^⊥} Δ(w, y)` for a given witness `w`.
pub fn dstar_for_witness(code: &RsCode, w: &[Elem]) -> Result<usize> {
    if w.len() != code.n() {
        return Err(Error::LengthMismatch { expected: code.n(), got: w.len() });
    }
    let mut best = code.n();
    for_each_dual_codeword(code, |y| {
        best = best.min(hamming(w, y));
        best > 0
    })?;
    Ok(best)
}

/// `d*` for target `p`, using the canonical witness.
pub fn dstar_bruteforce(code: &RsCode, p: &[Elem]) -> Result<usize> {
    let w = find_witness(code, p)?;
    dstar_for_witness(code, &w)
}

/// One named bound in a [`BoundReport`].
#[derive(Clone, Debug, PartialEq)]
pub struct BoundEntry {
    pub name: String,
    pub symbols: f64,
    pub bits: f64,
    pub vacuous: bool,
}

/// All bounds that apply to `(n, k, q, t)`, and the largest one.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub k: usize,
    pub q: u64,
    pub t: u32,
    pub entries: Vec<BoundEntry>,
    pub binding: String,
    pub binding_symbols: f64,
    pub binding_bits: f64,
}

impl BoundReport {
    /// Collects the bounds for an RS code. `dstar`, when known, adds the
    /// distance bound for that target.
    pub fn new(n: usize, k: usize, q: u64, t: u32, dstar: Option<usize>) -> Result<Self> {
        let width = bits_per_symbol(q) as f64;
        let mut entries = Vec::new();
        let mut push = |name: &str, symbols: f64, vacuous: bool| {
            entries.push(BoundEntry { name: String::from(name), symbols, bits: symbols * width, vacuous });
        };
        let obs = obs_lower_bound(n, k, q, t);
        push("obs:k+t-1", obs.dimension_term, false);
        push("obs:tn/(n-k+1)", obs.share_term, false);
        push("obs:n*log_q(n/(n-k+1))", obs.log_term.max(0.0), obs.log_term <= 0.0);
        if let Ok(mds) = mds_lower_bound(n, k, q) {
            push("mds", mds.value, mds.vacuous);
        }
        if let Some(d) = dstar {
            let order = q.pow(t);
            let v = prop_lower_bound(n, q, order, d)?;
            push("prop", v.max(0.0), v <= 0.0);
        }
        let top =
            entries.iter().max_by(|a, b| a.symbols.total_cmp(&b.symbols)).expect("at least the obs terms are present");
        let (binding, binding_symbols, binding_bits) = (top.name.clone(), top.symbols, top.bits);
        Ok(BoundReport { n, k, q, t, entries, binding, binding_symbols, binding_bits })
    }

    /// Whether a scheme downloading `symbols` base-field symbols respects
    /// every bound.
    pub fn admits(&self, symbols: u64) -> bool {
        symbols as f64 + 1e-9 >= self.binding_symbols
    }
}
