//! Evaluation schemes for Reed-Solomon codes built from good triples.
//!
//! A triple `(j_min, j_max, d)` and a polynomial `v(X) = Σ_{j_min ≤ j ≤ j_max}
//! v_j X^j` whose coefficients match the target (`v_j = p_{d−j}`) give node
//! `j` the one-dimensional space `span_B(v(α_j))`. The node sends
//! `m_j = tr(v(α_j) c_j)`, and `pᵀx` is the coefficient of `X^d` in the
//! polynomial of degree `< n` interpolating the `m_j`.

mod eval;
mod params;

pub use eval::{
    build_rate_half_scheme, build_scheme, decompose_target, evaluate_full, Decomposition, EvaluationScheme, SchemeKind,
};
pub use params::{main_params, main_params_with_dimension, rate_half_params, MainParams, SchemeParams};

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::bits_per_symbol;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg;
use crate::poly::Poly;
use crate::rs::RsCode;
use crate::scheme::SubspaceAssignment;

/// `0` for `x = 0`, otherwise the representative of `x mod m` in `[1, m]`.
pub fn mod_star(x: u64, m: u64) -> u64 {
    assert!(m >= 1, "mod* needs a positive modulus");
    if x == 0 {
        0
    } else {
        (x - 1) % m + 1
    }
}

/// `mod*(j · q^i, Q − 1)` without overflow.
fn shifted_exponent(j: u64, q: u64, i: u32, order: u64) -> u64 {
    if j == 0 {
        return 0;
    }
    let m = order - 1;
    let mut qi = 1 % m;
    for _ in 0..i {
        qi = qi * q % m;
    }
    let r = (j % m) * qi % m;
    if r == 0 {
        m
    } else {
        r
    }
}

/// Exponents present in `X^(j q^i) mod p_A(X)`, where `p_A` vanishes on the
/// evaluation points. Full-length codes use the closed form.
pub fn sigma(code: &RsCode, i: u32, j: u64) -> BTreeSet<usize> {
    if code.is_full_length() {
        let f = code.field();
        let e = shifted_exponent(j, f.base_order() as u64, i, f.order() as u64);
        BTreeSet::from([e as usize])
    } else {
        sigma_by_reduction(code, &vanishing_poly(code), i, j)
    }
}

fn vanishing_poly(code: &RsCode) -> Poly {
    Poly::vanishing(code.field(), code.points())
}

/// `σ_i(j)` by explicit reduction modulo `p_A`.
pub fn sigma_by_reduction(code: &RsCode, p_a: &Poly, i: u32, j: u64) -> BTreeSet<usize> {
    let f = code.field();
    let e = j * (f.base_order() as u64).pow(i);
    Poly::monomial(Elem::ONE, 1).pow_mod(f, e, p_a).expect("vanishing polynomial is nonzero").deg_set()
}

/// `(j_min, j_max, d)`; see [`is_good`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GoodTriple {
    pub j_min: usize,
    pub j_max: usize,
    pub d: usize,
}

impl GoodTriple {
    pub fn new(j_min: usize, j_max: usize, d: usize) -> Self {
        GoodTriple { j_min, j_max, d }
    }

    /// `(ℓ_min, ℓ_max) = (max{0, d − j_max}, min{k − 1, d − j_min})`.
    pub fn window(&self, k: usize) -> (usize, usize) {
        window(self, k)
    }

    /// Whether `p` vanishes outside the window.
    pub fn supports(&self, p: &[Elem]) -> bool {
        let (lo, hi) = self.window(p.len());
        p.iter().enumerate().all(|(l, c)| c.is_zero() || (lo..=hi).contains(&l))
    }

    fn check_shape(&self) -> Result<()> {
        if self.j_min < 1 || self.j_min > self.j_max || self.j_min >= self.d {
            Err(Error::BadTripleShape)
        } else {
            Ok(())
        }
    }
}

pub fn window(triple: &GoodTriple, k: usize) -> (usize, usize) {
    let lo = triple.d.saturating_sub(triple.j_max);
    let hi = (k - 1).min(triple.d.saturating_sub(triple.j_min));
    (lo, hi)
}

/// The three conditions for `(j_min, j_max, d)` to be good for `code`:
/// `d < n` and `j_max + k − 1 < n`; `d ∉ σ_i(j)` for `i ≥ 1` and every
/// `j ∈ [j_min, j_max + k − 1]`; and `d ∈ σ_0(j)` for some such `j`.
pub fn is_good(code: &RsCode, triple: &GoodTriple) -> Result<bool> {
    triple.check_shape()?;
    let (n, k) = (code.n(), code.k());
    if triple.d >= n || triple.j_max + k > n {
        return Ok(false);
    }
    let f = code.field();
    if code.is_full_length() {
        let (q, order) = (f.base_order() as u64, f.order() as u64);
        return Ok(good_full_length(q, f.degree(), order, k, triple));
    }
    let range = triple.j_min as u64..=(triple.j_max + k - 1) as u64;
    let p_a = vanishing_poly(code);
    for i in 1..f.degree() {
        if range.clone().any(|j| sigma_by_reduction(code, &p_a, i, j).contains(&triple.d)) {
            return Ok(false);
        }
    }
    Ok(range.clone().any(|j| sigma_by_reduction(code, &p_a, 0, j).contains(&triple.d)))
}

/// [`is_good`] for the full-length code of dimension `k` over `GF(q^t)`,
/// from the closed form of `σ_i`.
pub(crate) fn good_full_length(q: u64, t: u32, order: u64, k: usize, triple: &GoodTriple) -> bool {
    let n = order as usize;
    if triple.check_shape().is_err() || triple.d >= n || triple.j_max + k > n {
        return false;
    }
    let range = triple.j_min as u64..=(triple.j_max + k - 1) as u64;
    let d = triple.d as u64;
    for i in 1..t {
        if range.clone().any(|j| shifted_exponent(j, q, i, order) == d) {
            return false;
        }
    }
    range.contains(&d)
}

/// Checks erasure indices and returns them sorted.
fn check_erasures(code: &RsCode, erasures: &[usize]) -> Result<Vec<usize>> {
    let mut sorted = erasures.to_vec();
    sorted.sort_unstable();
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::DuplicatePosition(pair[0]));
        }
    }
    if let Some(&last) = sorted.last() {
        if last >= code.n() {
            return Err(Error::InvalidCode(format!("erased position {last} out of range")));
        }
    }
    Ok(sorted)
}

/// Fills `free` slots of `coeffs` so the polynomial vanishes at the erased
/// points. Pivots run over `free` in the given order; unused slots stay zero.
pub(crate) fn vanish_on(code: &RsCode, coeffs: &mut [Elem], free: &[usize], erasures: &[usize]) -> Result<()> {
    if erasures.is_empty() {
        return Ok(());
    }
    let f = code.field();
    let fixed = Poly::new(coeffs.to_vec());
    let matrix: Vec<Vec<Elem>> =
        erasures.iter().map(|&e| free.iter().map(|&j| f.pow(code.points()[e], j as u64)).collect()).collect();
    let rhs: Vec<Elem> = erasures.iter().map(|&e| f.neg(fixed.eval(f, code.points()[e]))).collect();
    let sol = linalg::solve(f, &matrix, &rhs).ok_or(Error::InsufficientFreedom)?;
    for (&j, v) in free.iter().zip(sol) {
        coeffs[j] = v;
    }
    Ok(())
}

/// A polynomial consistent with `p` for `triple`, vanishing on `erasures`.
/// Forced coefficients are `v_j = p_{d−j}`; the other slots in
/// `[j_min, j_max]` are solved for the vanishing conditions, lowest slots
/// first, with leftover freedom set to zero.
pub fn consistent_polynomial(code: &RsCode, p: &[Elem], triple: &GoodTriple, erasures: &[usize]) -> Result<Poly> {
    let k = code.k();
    if p.len() != k {
        return Err(Error::LengthMismatch { expected: k, got: p.len() });
    }
    triple.check_shape()?;
    if !triple.supports(p) {
        return Err(Error::SupportOutOfWindow);
    }
    let erasures = check_erasures(code, erasures)?;
    let mut coeffs = vec![Elem::ZERO; triple.j_max + 1];
    let mut free = Vec::new();
    for (j, c) in coeffs.iter_mut().enumerate().skip(triple.j_min) {
        match triple.d.checked_sub(j) {
            Some(l) if l < k => *c = p[l],
            _ => free.push(j),
        }
    }
    if erasures.len() > free.len() {
        return Err(Error::InsufficientFreedom);
    }
    vanish_on(code, &mut coeffs, &free, &erasures)?;
    Ok(Poly::new(coeffs))
}

/// One good triple, a target in its window, a consistent `v` and the
/// resulting per-node spans `V_j = span_B(v(α_j))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowScheme {
    triple: GoodTriple,
    p: Vec<Elem>,
    v: Poly,
    erasures: Vec<usize>,
    node_values: Vec<Elem>,
}

impl WindowScheme {
    /// Validates `v` against `p`, the triple and the erasures.
    pub fn from_parts(code: &RsCode, triple: GoodTriple, p: Vec<Elem>, v: Poly, erasures: &[usize]) -> Result<Self> {
        if !is_good(code, &triple)? {
            return Err(Error::NotGood);
        }
        let k = code.k();
        if p.len() != k {
            return Err(Error::LengthMismatch { expected: k, got: p.len() });
        }
        if !triple.supports(&p) {
            return Err(Error::SupportOutOfWindow);
        }
        let erasures = check_erasures(code, erasures)?;
        if v.deg_set().iter().any(|&j| j < triple.j_min || j > triple.j_max) {
            return Err(Error::InvalidScheme("v has a monomial outside [j_min, j_max]".into()));
        }
        for j in triple.j_min..=triple.j_max {
            if let Some(l) = triple.d.checked_sub(j).filter(|&l| l < k) {
                if v.coeff(j) != p[l] {
                    return Err(Error::InvalidScheme(format!("v_{j} does not match p_{l}")));
                }
            }
        }
        let f = code.field();
        let node_values: Vec<Elem> = code.points().iter().map(|&a| v.eval(f, a)).collect();
        if let Some(&e) = erasures.iter().find(|&&e| !node_values[e].is_zero()) {
            return Err(Error::InvalidScheme(format!("v does not vanish at erased node {e}")));
        }
        Ok(WindowScheme { triple, p, v, erasures, node_values })
    }

    pub fn triple(&self) -> GoodTriple {
        self.triple
    }

    pub fn target(&self) -> &[Elem] {
        &self.p
    }

    pub fn polynomial(&self) -> &Poly {
        &self.v
    }

    pub fn erasures(&self) -> &[usize] {
        &self.erasures
    }

    /// `v(α_j)` for every node; `V_j` is its `B`-span.
    pub fn node_values(&self) -> &[Elem] {
        &self.node_values
    }

    pub fn assignment(&self) -> SubspaceAssignment {
        SubspaceAssignment::spans(&self.node_values)
    }

    /// `tr(v(α_j) c_j)`.
    pub fn response(&self, f: &Field, node: usize, symbol: Elem) -> Elem {
        f.trace(f.mul(self.node_values[node], symbol))
    }

    /// Responses of every node for a whole codeword; erased nodes give `None`.
    pub fn responses(&self, f: &Field, codeword: &[Elem]) -> Vec<Option<Elem>> {
        codeword
            .iter()
            .enumerate()
            .map(|(j, &c)| (self.erasures.binary_search(&j).is_err()).then(|| self.response(f, j, c)))
            .collect()
    }

    /// Number of nodes with `V_j ≠ {0}`.
    pub fn active_nodes(&self) -> usize {
        self.node_values.iter().filter(|v| !v.is_zero()).count()
    }

    /// `Σ_j dim V_j · ⌈log₂ q⌉`.
    pub fn subspace_bits(&self, q: u32) -> u64 {
        self.active_nodes() as u64 * bits_per_symbol(q as u64)
    }
}

/// The scheme of one good triple: `v` from [`consistent_polynomial`].
pub fn single_window_scheme(
    code: &RsCode,
    p: &[Elem],
    triple: &GoodTriple,
    erasures: &[usize],
) -> Result<WindowScheme> {
    if !is_good(code, triple)? {
        return Err(Error::NotGood);
    }
    let v = consistent_polynomial(code, p, triple, erasures)?;
    WindowScheme::from_parts(code, *triple, p.to_vec(), v, erasures)
}

/// Interpolates `R` through `(α_j, m_j)` and returns its `X^d` coefficient.
/// A missing response counts as zero where `v(α_j) = 0`.
pub fn rs_reconstruct(code: &RsCode, scheme: &WindowScheme, responses: &[Option<Elem>]) -> Result<Elem> {
    let n = code.n();
    if responses.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: responses.len() });
    }
    let mut points = Vec::with_capacity(n);
    for (j, (&alpha, r)) in code.points().iter().zip(responses).enumerate() {
        let m = match r {
            Some(m) => *m,
            None if scheme.node_values[j].is_zero() => Elem::ZERO,
            None => return Err(Error::MissingResponse(j)),
        };
        points.push((alpha, m));
    }
    Ok(Poly::interpolate(code.field(), &points)?.coeff(scheme.triple.d))
}

#[cfg(test)]
mod tests;
