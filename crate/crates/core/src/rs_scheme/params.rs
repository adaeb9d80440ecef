//! Triples for the single-window scheme of rate up to one half and for the
//! multi-round erasure-tolerant scheme.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_rational::Ratio;

use super::{good_full_length, GoodTriple};
use crate::error::{Error, Result};
use crate::Rational;

/// `(⌊q/2⌋ q^(t−2) + 1, Q − k, ⌊q/2⌋ q^(t−1))`, good for the full-length
/// code with window `[0, k − 1]` whenever `k q² ≤ Q ⌊q/2⌋ (q − 1)`.
pub fn rate_half_params(q: u64, t: u32, k: usize) -> Result<GoodTriple> {
    if t < 2 {
        return Err(Error::InvalidField(format!("extension degree {t} < 2")));
    }
    let order = q.pow(t);
    let half = q / 2;
    if k == 0 || (k as u64) * q * q > order * half * (q - 1) {
        return Err(Error::DimensionTooLarge);
    }
    let triple =
        GoodTriple::new((half * q.pow(t - 2) + 1) as usize, order as usize - k, (half * q.pow(t - 1)) as usize);
    if !good_full_length(q, t, order, k, &triple) {
        // only reachable for degenerate shapes such as q = 2, t = 2
        return Err(Error::DimensionTooLarge);
    }
    Ok(triple)
}

/// `ε`, `γ`, `δ`: the code has rate at most `1 − ε`, tolerates fewer than
/// `γ n` erasures, and `δ` is the slack used to space out the rounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SchemeParams {
    pub epsilon: Rational,
    pub gamma: Rational,
    pub delta: Rational,
}

impl SchemeParams {
    pub fn new(epsilon: Rational, gamma: Rational, delta: Rational) -> Self {
        SchemeParams { epsilon, gamma, delta }
    }

    /// `s`: the largest integer strictly below `1/(ε − δ)`.
    pub fn rounds(&self) -> Result<usize> {
        let gap = self.epsilon - self.delta;
        if gap <= Rational::from_integer(0) {
            return Err(violated("ε > δ"));
        }
        Ok((gap.recip().ceil().to_integer() - 1) as usize)
    }

    /// Checks every constraint that does not involve `k`. The error lists
    /// each inequality that fails, separated by `; `.
    pub fn validate(&self, q: u64) -> Result<()> {
        let zero = Rational::from_integer(0);
        let one = Rational::from_integer(1);
        let qr = Rational::from_integer(q as i64);
        let SchemeParams { epsilon, gamma, delta } = *self;
        let mut failed: Vec<&str> = Vec::new();
        if gamma <= zero {
            failed.push("γ > 0");
        }
        if epsilon >= one {
            failed.push("ε < 1");
        }
        if delta < gamma + qr.recip() {
            failed.push("δ ≥ γ + 1/q");
        }
        if epsilon <= delta {
            failed.push("ε > δ");
        } else {
            if !((epsilon - delta) * qr).is_integer() {
                failed.push("(ε − δ)q ∈ ℤ");
            }
            if (epsilon - delta).recip() <= one {
                failed.push("1/(ε − δ) > 1");
            }
        }
        if q > 1 && delta < (one - epsilon) / (qr - one) + gamma / (one - qr.recip()) {
            failed.push("δ ≥ (1 − ε)/(q − 1) + γ/(1 − 1/q)");
        }
        if failed.is_empty() {
            Ok(())
        } else {
            Err(Error::ParamConstraintViolated(failed.join("; ")))
        }
    }

    /// `Q(1 − ε)` when it is an integer.
    pub fn dimension(&self, order: u64) -> Result<usize> {
        let k = Rational::from_integer(order as i64) * (Rational::from_integer(1) - self.epsilon);
        if k.is_integer() {
            Ok(k.to_integer() as usize)
        } else {
            Err(violated("Q(1 − ε) ∈ ℤ"))
        }
    }

    /// `(n − |ℐ|) · ⌈log₂ q⌉ / (ε − δ)`, the stated bandwidth bound in bits.
    pub fn bandwidth_bound(&self, survivors: usize, symbol_bits: u64) -> Rational {
        Rational::from_integer((survivors as u64 * symbol_bits) as i64) / (self.epsilon - self.delta)
    }
}

fn violated(which: &str) -> Error {
    Error::ParamConstraintViolated(String::from(which))
}

/// Output of [`main_params`]: `k`, `s` and one triple per round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MainParams {
    pub k: usize,
    pub s: usize,
    pub triples: Vec<GoodTriple>,
}

/// Round triples for `k = Q(1 − ε)`.
pub fn main_params(q: u64, t: u32, params: &SchemeParams) -> Result<MainParams> {
    params.validate(q)?;
    let k = params.dimension(q.pow(t))?;
    main_params_with_dimension(q, t, k, params)
}

/// Round triples for any `1 ≤ k ≤ Q(1 − ε)`: with `y_r = (ε − δ) q r`,
/// triple `r` is `(y_r q^(t−2) + 1, Q − k, y_r q^(t−1))`.
pub fn main_params_with_dimension(q: u64, t: u32, k: usize, params: &SchemeParams) -> Result<MainParams> {
    if t < 2 {
        return Err(Error::InvalidField(format!("extension degree {t} < 2")));
    }
    params.validate(q)?;
    let order = q.pow(t);
    let big_q = Rational::from_integer(order as i64);
    let kr = Rational::from_integer(k as i64);
    if k == 0 || kr > big_q * (Rational::from_integer(1) - params.epsilon) {
        return Err(violated("1 ≤ k ≤ Q(1 − ε)"));
    }
    let s = params.rounds()?;
    let step = ((params.epsilon - params.delta) * Rational::from_integer(q as i64)).to_integer() as u64;
    let triples: Vec<GoodTriple> = (1..=s as u64)
        .map(|r| {
            let y = step * r;
            GoodTriple::new((y * q.pow(t - 2) + 1) as usize, order as usize - k, (y * q.pow(t - 1)) as usize)
        })
        .collect();

    for (r, triple) in triples.iter().enumerate() {
        if !good_full_length(q, t, order, k, triple) {
            return Err(Error::ParamConstraintViolated(format!("triple {} is good", r + 1)));
        }
    }
    let int = |x: usize| Ratio::from_integer(x as i64);
    let qgamma = big_q * params.gamma;
    let first = triples[0];
    if int(first.d) > int(first.j_max) {
        return Err(violated("d₁ − j_max ≤ 0"));
    }
    let last = triples[s - 1];
    if int(last.d) - int(last.j_min) < kr - int(1) + qgamma {
        return Err(violated("d_s − j_min,s ≥ k − 1 + Qγ"));
    }
    for pair in triples.windows(2) {
        let gap = (int(pair[0].d) - int(pair[0].j_min)) - (int(pair[1].d) - int(pair[1].j_max));
        if gap < qgamma - int(1) {
            return Err(violated("(d_r − j_min,r) − (d_r+1 − j_max,r+1) ≥ Qγ − 1"));
        }
    }
    Ok(MainParams { k, s, triples })
}
