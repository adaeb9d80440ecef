//! Multi-round schemes: the target is split into per-round pieces, each
//! covered by one window, and every piece is recovered independently.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::params::{main_params_with_dimension, rate_half_params, SchemeParams};
use super::{check_erasures, consistent_polynomial, rs_reconstruct, vanish_on, GoodTriple, WindowScheme};
use crate::bits_per_symbol;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::poly::Poly;
use crate::rs::RsCode;
use crate::Rational;

/// Per-round targets and their consistent polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub targets: Vec<Vec<Elem>>,
    pub polys: Vec<Poly>,
}

fn too_many(erased: usize, free: usize) -> Error {
    Error::TooManyErasures { erased, limit: (free + 1).to_string() }
}

/// Splits `p` into `p^(1) + ... + p^(s)` with each piece inside its round's
/// window and a consistent `v^(r)` vanishing on `erasures`.
///
/// Round `r < s` takes the residual of `p` on `[ℓ_min^(r), ℓ_min^(r+1) − 1]`,
/// solves the slots `[j_min^(r), d^(r) − ℓ_min^(r+1)]` for the vanishing
/// conditions and reads the rest of `p^(r)` back from them. The last round
/// takes the whole remaining residual.
pub fn decompose_target(
    code: &RsCode,
    p: &[Elem],
    triples: &[GoodTriple],
    erasures: &[usize],
) -> Result<Decomposition> {
    let f = code.field();
    let k = code.k();
    if p.len() != k {
        return Err(Error::LengthMismatch { expected: k, got: p.len() });
    }
    if triples.is_empty() {
        return Err(Error::InvalidScheme("no rounds".into()));
    }
    let erasures = check_erasures(code, erasures)?;
    let windows: Vec<(usize, usize)> = triples.iter().map(|t| t.window(k)).collect();
    let s = triples.len();
    let mut covered = vec![Elem::ZERO; k];
    let mut targets = Vec::with_capacity(s);
    let mut polys = Vec::with_capacity(s);

    for (r, triple) in triples.iter().enumerate() {
        let GoodTriple { j_min, j_max, d } = *triple;
        let (lo, hi) = windows[r];
        let last = r + 1 == s;
        let next = if last { k } else { windows[r + 1].0.min(k) };
        if next > hi + 1 || (last && hi + 1 != k) {
            return Err(Error::InvalidScheme(format!("round {} leaves a gap in the target", r + 1)));
        }
        let mut piece = vec![Elem::ZERO; k];
        let mut coeffs = vec![Elem::ZERO; j_max + 1];
        for l in lo..next {
            piece[l] = f.sub(p[l], covered[l]);
            coeffs[d - l] = piece[l];
        }
        let free: Vec<usize> = if last {
            (j_min..=j_max).filter(|&j| j + k <= d || j > d).collect()
        } else {
            (j_min..=d - next).collect()
        };
        if erasures.len() > free.len() {
            return Err(too_many(erasures.len(), free.len()));
        }
        vanish_on(code, &mut coeffs, &free, &erasures).map_err(|_| too_many(erasures.len(), free.len()))?;
        if !last {
            for l in next..=hi {
                piece[l] = coeffs[d - l];
            }
        }
        for (c, &x) in covered.iter_mut().zip(&piece) {
            *c = f.add(*c, x);
        }
        targets.push(piece);
        polys.push(Poly::new(coeffs));
    }
    debug_assert_eq!(covered, p);
    Ok(Decomposition { targets, polys })
}

/// Which construction produced an [`EvaluationScheme`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeKind {
    /// One window covering the whole target, rate at most one half.
    RateHalf,
    /// `s` windows with erasure tolerance.
    Main(SchemeParams),
}

/// A complete scheme for one target: one [`WindowScheme`] per round on the
/// full-length code, plus the map from stored nodes to field positions.
///
/// A code shorter than `Q` is handled as the full-length code whose
/// missing positions are permanently erased.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationScheme {
    code: RsCode,
    full: RsCode,
    node_map: Vec<usize>,
    kind: SchemeKind,
    p: Vec<Elem>,
    failed: Vec<usize>,
    erasures: Vec<usize>,
    rounds: Vec<WindowScheme>,
}

struct Embedding {
    full: RsCode,
    node_map: Vec<usize>,
    failed: Vec<usize>,
    erasures: Vec<usize>,
}

fn embed(code: &RsCode, failed: &[usize]) -> Result<Embedding> {
    let failed = check_erasures(code, failed)?;
    let full = RsCode::full_length(code.field_arc().clone(), code.k())?;
    let node_map: Vec<usize> = code.points().iter().map(|a| a.0 as usize).collect();
    let mut erased = vec![true; full.n()];
    for (j, &pos) in node_map.iter().enumerate() {
        erased[pos] = failed.binary_search(&j).is_ok();
    }
    let erasures = (0..full.n()).filter(|&pos| erased[pos]).collect();
    Ok(Embedding { full, node_map, failed, erasures })
}

impl EvaluationScheme {
    /// Reassembles a scheme from its rounds, re-deriving the triples and
    /// checking every invariant.
    pub fn from_parts(
        code: &RsCode,
        kind: SchemeKind,
        p: Vec<Elem>,
        failed: &[usize],
        rounds: Vec<(GoodTriple, Vec<Elem>, Poly)>,
    ) -> Result<Self> {
        let emb = embed(code, failed)?;
        let f = code.field();
        let expected = expected_triples(code, &kind)?;
        let got: Vec<GoodTriple> = rounds.iter().map(|r| r.0).collect();
        if got != expected {
            return Err(Error::InvalidScheme("round triples do not match the parameters".into()));
        }
        if let SchemeKind::Main(params) = kind {
            check_tolerance(&params, emb.erasures.len(), f.order())?;
        }
        if p.len() != code.k() {
            return Err(Error::LengthMismatch { expected: code.k(), got: p.len() });
        }
        let mut sum = vec![Elem::ZERO; code.k()];
        let mut windows = Vec::with_capacity(rounds.len());
        for (triple, piece, v) in rounds {
            for (acc, &x) in sum.iter_mut().zip(&piece) {
                *acc = f.add(*acc, x);
            }
            windows.push(WindowScheme::from_parts(&emb.full, triple, piece, v, &emb.erasures)?);
        }
        if sum != p {
            return Err(Error::InvalidScheme("round targets do not sum to the target".into()));
        }
        let scheme = EvaluationScheme {
            code: code.clone(),
            full: emb.full,
            node_map: emb.node_map,
            kind,
            p,
            failed: emb.failed,
            erasures: emb.erasures,
            rounds: windows,
        };
        scheme.check_ledger()?;
        Ok(scheme)
    }

    pub fn code(&self) -> &RsCode {
        &self.code
    }

    /// The full-length code the rounds are defined on.
    pub fn working_code(&self) -> &RsCode {
        &self.full
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn params(&self) -> Option<&SchemeParams> {
        match &self.kind {
            SchemeKind::Main(p) => Some(p),
            SchemeKind::RateHalf => None,
        }
    }

    pub fn target(&self) -> &[Elem] {
        &self.p
    }

    /// Number of rounds `s`.
    pub fn s(&self) -> usize {
        self.rounds.len()
    }

    pub fn rounds(&self) -> &[WindowScheme] {
        &self.rounds
    }

    /// Failed node indices, sorted.
    pub fn failed(&self) -> &[usize] {
        &self.failed
    }

    /// Erased positions of the full-length code: failed nodes plus absent
    /// evaluation points.
    pub fn erased_positions(&self) -> &[usize] {
        &self.erasures
    }

    /// Position of stored node `j` in the full-length code.
    pub fn position(&self, node: usize) -> usize {
        self.node_map[node]
    }

    pub fn is_failed(&self, node: usize) -> bool {
        self.failed.binary_search(&node).is_ok()
    }

    /// Nodes that answer in every round.
    pub fn contacted_nodes(&self) -> Vec<usize> {
        (0..self.code.n()).filter(|&j| !self.is_failed(j)).collect()
    }

    /// What node `j` sends in round `r`: `tr(v^(r)(α_j) c_j)`.
    pub fn response(&self, round: usize, node: usize, symbol: Elem) -> Elem {
        self.rounds[round].response(self.code.field(), self.node_map[node], symbol)
    }

    /// Every round's responses for a stored codeword; failed nodes give
    /// `None`.
    pub fn responses(&self, codeword: &[Elem]) -> Vec<Vec<Option<Elem>>> {
        (0..self.s())
            .map(|r| {
                codeword
                    .iter()
                    .enumerate()
                    .map(|(j, &c)| (!self.is_failed(j)).then(|| self.response(r, j, c)))
                    .collect()
            })
            .collect()
    }

    /// Bits moved when every surviving node sends one base-field symbol per
    /// round: `(n − |ℐ|) · s · ⌈log₂ q⌉`.
    pub fn protocol_bits(&self) -> u64 {
        let symbols = (self.code.n() - self.failed.len()) * self.s();
        symbols as u64 * bits_per_symbol(self.code.field().base_order() as u64)
    }

    /// `Σ_r Σ_j dim V^(r)_j · ⌈log₂ q⌉`: only nodes with `v^(r)(α_j) ≠ 0`
    /// are counted.
    pub fn subspace_bits(&self) -> u64 {
        let active: usize = self
            .rounds
            .iter()
            .map(|w| self.node_map.iter().filter(|&&pos| !w.node_values()[pos].is_zero()).count())
            .sum();
        active as u64 * bits_per_symbol(self.code.field().base_order() as u64)
    }

    /// `(n − |ℐ|) · ⌈log₂ q⌉ / (ε − δ)` for the main construction.
    pub fn bandwidth_bound(&self) -> Option<Rational> {
        let bits = bits_per_symbol(self.code.field().base_order() as u64);
        self.params().map(|p| p.bandwidth_bound(self.code.n() - self.failed.len(), bits))
    }

    fn check_ledger(&self) -> Result<()> {
        let bits = Rational::from_integer(self.protocol_bits() as i64);
        if self.subspace_bits() > self.protocol_bits() {
            return Err(Error::InvalidScheme("subspace dimensions exceed one per round".into()));
        }
        if let Some(bound) = self.bandwidth_bound() {
            if bits > bound {
                return Err(Error::InvalidScheme("bandwidth exceeds (n − |ℐ|)/(ε − δ) symbols".into()));
            }
        }
        Ok(())
    }
}

fn expected_triples(code: &RsCode, kind: &SchemeKind) -> Result<Vec<GoodTriple>> {
    let f = code.field();
    let (q, t, k) = (f.base_order() as u64, f.degree(), code.k());
    match kind {
        SchemeKind::RateHalf => Ok(vec![rate_half_params(q, t, k)?]),
        SchemeKind::Main(params) => Ok(main_params_with_dimension(q, t, k, params)?.triples),
    }
}

fn check_tolerance(params: &SchemeParams, erased: usize, order: u32) -> Result<()> {
    let limit = Rational::from_integer(order as i64) * params.gamma;
    if Rational::from_integer(erased as i64) >= limit {
        return Err(Error::TooManyErasures { erased, limit: format!("γQ = {limit}") });
    }
    Ok(())
}

/// The erasure-tolerant scheme for target `p` on `code`, with the stored
/// nodes in `failed` erased.
pub fn build_scheme(code: &RsCode, p: &[Elem], params: &SchemeParams, failed: &[usize]) -> Result<EvaluationScheme> {
    let f = code.field();
    if p.len() != code.k() {
        return Err(Error::LengthMismatch { expected: code.k(), got: p.len() });
    }
    let emb = embed(code, failed)?;
    check_tolerance(params, emb.erasures.len(), f.order())?;
    let mp = main_params_with_dimension(f.base_order() as u64, f.degree(), code.k(), params)?;
    let dec = decompose_target(&emb.full, p, &mp.triples, &emb.erasures)?;
    let rounds =
        mp.triples.iter().zip(dec.targets).zip(dec.polys).map(|((&triple, piece), v)| (triple, piece, v)).collect();
    EvaluationScheme::from_parts(code, SchemeKind::Main(*params), p.to_vec(), failed, rounds)
}

/// The single-window scheme for rate at most one half. Erasures are
/// accepted when the free coefficients can absorb them.
pub fn build_rate_half_scheme(code: &RsCode, p: &[Elem], failed: &[usize]) -> Result<EvaluationScheme> {
    let f = code.field();
    let triple = rate_half_params(f.base_order() as u64, f.degree(), code.k())?;
    let emb = embed(code, failed)?;
    let v = consistent_polynomial(&emb.full, p, &triple, &emb.erasures)?;
    EvaluationScheme::from_parts(code, SchemeKind::RateHalf, p.to_vec(), failed, vec![(triple, p.to_vec(), v)])
}

/// `Σ_r` of the per-round interpolation decoders. `responses[r][j]` is what
/// stored node `j` sent in round `r`.
pub fn evaluate_full(scheme: &EvaluationScheme, responses: &[Vec<Option<Elem>>]) -> Result<Elem> {
    let f = scheme.code.field();
    if responses.len() != scheme.s() {
        return Err(Error::LengthMismatch { expected: scheme.s(), got: responses.len() });
    }
    let mut total = Elem::ZERO;
    for (round, per_node) in scheme.rounds.iter().zip(responses) {
        if per_node.len() != scheme.code.n() {
            return Err(Error::LengthMismatch { expected: scheme.code.n(), got: per_node.len() });
        }
        let mut full = vec![None; scheme.full.n()];
        for (j, r) in per_node.iter().enumerate() {
            if !scheme.is_failed(j) {
                full[scheme.node_map[j]] = *r;
            }
        }
        let value = rs_reconstruct(&scheme.full, round, &full).map_err(|e| match e {
            Error::MissingResponse(pos) => {
                Error::MissingResponse(scheme.node_map.iter().position(|&x| x == pos).unwrap_or(pos))
            }
            other => other,
        })?;
        total = f.add(total, value);
    }
    Ok(total)
}
