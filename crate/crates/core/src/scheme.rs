//! Linear evaluation schemes for an arbitrary linear code.
//!
//! Node `j` holds `c_j` and is assigned a `B`-subspace `V_j ⊆ F` with basis
//! `β^(j)_1..β^(j)_{b_j}`; it answers `tr(c_j β^(j)_ℓ)` for each basis
//! element. The assignment computes `pᵀx` when, for a witness `w` with
//! `Gᵀw = p`, every `ζ_i w` lies in `C^⊥ + (V_1 × ... × V_n)`.
//!
//! Membership is decided over `B` by expanding each coordinate of `F^n` into
//! its `t` polynomial-basis digits.

use alloc::vec;
use alloc::vec::Vec;

use crate::bits_per_symbol;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg;
use crate::rs::RsCode;

/// Per-node `B`-subspaces of `F`, each given by an independent basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceAssignment {
    bases: Vec<Vec<Elem>>,
}

impl SubspaceAssignment {
    /// Checks that each basis is independent over `B`.
    pub fn new(f: &Field, bases: Vec<Vec<Elem>>) -> Result<Self> {
        for basis in &bases {
            let rows: Vec<Vec<Elem>> = basis.iter().map(|&b| f.digits(b)).collect();
            if linalg::rank(f, rows) != basis.len() {
                return Err(Error::DependentBasis);
            }
        }
        Ok(SubspaceAssignment { bases })
    }

    /// `V_j = F` everywhere.
    pub fn full(f: &Field, n: usize) -> Self {
        let basis: Vec<Elem> = (0..f.degree()).map(|i| Elem(f.base_order().pow(i))).collect();
        SubspaceAssignment { bases: vec![basis; n] }
    }

    /// `V_j = {0}` everywhere.
    pub fn zero(n: usize) -> Self {
        SubspaceAssignment { bases: vec![Vec::new(); n] }
    }

    /// `V_j = span_B(g_j)`, with `V_j = {0}` where `g_j = 0`.
    pub fn spans(generators: &[Elem]) -> Self {
        SubspaceAssignment {
            bases: generators.iter().map(|&g| if g.is_zero() { Vec::new() } else { vec![g] }).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.bases.len()
    }

    pub fn basis(&self, j: usize) -> &[Elem] {
        &self.bases[j]
    }

    pub fn bases(&self) -> &[Vec<Elem>] {
        &self.bases
    }

    pub fn dim(&self, j: usize) -> usize {
        self.bases[j].len()
    }

    pub fn total_dim(&self) -> usize {
        self.bases.iter().map(Vec::len).sum()
    }

    /// `(Σ b_j) · ⌈log₂ q⌉`.
    pub fn bandwidth_bits(&self, q: u32) -> u64 {
        self.total_dim() as u64 * bits_per_symbol(q as u64)
    }
}

/// The data behind the generic decoder: `w` with `Gᵀw = p`, dual codewords
/// `z^(i)` with `ζ_i w − z^(i) ∈ V_1 × ... × V_n`, and the coordinates
/// `a[i][j][ℓ] ∈ B` of `ζ_i w_j − z^(i)_j` in the basis of `V_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericSchemeWitness {
    pub p: Vec<Elem>,
    pub w: Vec<Elem>,
    pub z: Vec<Vec<Elem>>,
    pub coeffs: Vec<Vec<Vec<Elem>>>,
    pub assignment: SubspaceAssignment,
}

/// What node `j` sends: one base-field symbol per basis element of `V_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeResponse {
    pub node: usize,
    pub values: Vec<Elem>,
}

impl NodeResponse {
    pub fn bit_count(&self, q: u32) -> u64 {
        self.values.len() as u64 * bits_per_symbol(q as u64)
    }
}

/// `(tr(c_j β_1), ..., tr(c_j β_b))`.
pub fn node_response(f: &Field, node: usize, symbol: Elem, basis: &[Elem]) -> NodeResponse {
    NodeResponse { node, values: basis.iter().map(|&b| f.trace(f.mul(symbol, b))).collect() }
}

/// The witness `w` with `Gᵀw = p` whose free variables are zero.
pub fn find_witness(code: &RsCode, p: &[Elem]) -> Result<Vec<Elem>> {
    if p.len() != code.k() {
        return Err(Error::LengthMismatch { expected: code.k(), got: p.len() });
    }
    linalg::solve(code.field(), &code.generator_transpose(), p).ok_or(Error::InconsistentSymbols)
}

/// Spanning set of `C^⊥ + 𝒱` over `B`, one column per generator, in digit
/// coordinates; the dual-code generators come first.
struct SumSpace {
    columns: Vec<Vec<Elem>>,
    dual: Vec<Vec<Elem>>,
}

impl SumSpace {
    fn new(code: &RsCode, assignment: &SubspaceAssignment) -> Self {
        let f = code.field();
        let n = code.n();
        let dual = code.dual_code_basis();
        let mut columns = Vec::new();
        for y in &dual {
            for &zeta in f.basis() {
                let v: Vec<Elem> = y.iter().map(|&yj| f.mul(zeta, yj)).collect();
                columns.push(digit_vector(f, &v));
            }
        }
        for j in 0..n {
            for &b in assignment.basis(j) {
                let mut v = vec![Elem::ZERO; n];
                v[j] = b;
                columns.push(digit_vector(f, &v));
            }
        }
        SumSpace { columns, dual }
    }

    /// Coefficients of `target` over the columns, or `None`.
    fn express(&self, f: &Field, target: &[Elem]) -> Option<Vec<Elem>> {
        let rows = target.len() * f.degree() as usize;
        let matrix: Vec<Vec<Elem>> = (0..rows).map(|r| self.columns.iter().map(|c| c[r]).collect()).collect();
        linalg::solve(f, &matrix, &digit_vector(f, target))
    }
}

fn digit_vector(f: &Field, v: &[Elem]) -> Vec<Elem> {
    v.iter().flat_map(|&x| f.digits(x)).collect()
}

fn check_shape(code: &RsCode, p: &[Elem], assignment: &SubspaceAssignment) -> Result<()> {
    if p.len() != code.k() {
        return Err(Error::LengthMismatch { expected: code.k(), got: p.len() });
    }
    if assignment.n() != code.n() {
        return Err(Error::LengthMismatch { expected: code.n(), got: assignment.n() });
    }
    Ok(())
}

/// Whether `assignment` is a linear evaluation scheme for `p`.
pub fn verify_linear_scheme(code: &RsCode, p: &[Elem], assignment: &SubspaceAssignment) -> Result<bool> {
    check_shape(code, p, assignment)?;
    let f = code.field();
    let w = find_witness(code, p)?;
    let space = SumSpace::new(code, assignment);
    Ok(f.basis().iter().all(|&zeta| {
        let target: Vec<Elem> = w.iter().map(|&wj| f.mul(zeta, wj)).collect();
        space.express(f, &target).is_some()
    }))
}

/// Splits each `ζ_i w` into a dual codeword plus a vector in `𝒱`.
pub fn decompose_witness(code: &RsCode, p: &[Elem], assignment: &SubspaceAssignment) -> Result<GenericSchemeWitness> {
    check_shape(code, p, assignment)?;
    let f = code.field();
    let t = f.degree() as usize;
    let w = find_witness(code, p)?;
    let space = SumSpace::new(code, assignment);
    let mut z = Vec::with_capacity(t);
    let mut coeffs = Vec::with_capacity(t);
    for &zeta in f.basis() {
        let target: Vec<Elem> = w.iter().map(|&wj| f.mul(zeta, wj)).collect();
        let sol = space.express(f, &target).ok_or(Error::NotAScheme)?;
        let (dual_part, rest) = sol.split_at(space.dual.len() * t);
        let mut zi = vec![Elem::ZERO; code.n()];
        for (y, chunk) in space.dual.iter().zip(dual_part.chunks(t)) {
            // coefficient of y is Σ_a chunk[a] ζ_a
            let scalar = chunk.iter().zip(f.basis()).fold(Elem::ZERO, |acc, (&c, &za)| f.add(acc, f.mul(c, za)));
            for (zj, &yj) in zi.iter_mut().zip(y) {
                *zj = f.add(*zj, f.mul(scalar, yj));
            }
        }
        let mut rest = rest.iter().copied();
        let table: Vec<Vec<Elem>> = (0..code.n()).map(|j| rest.by_ref().take(assignment.dim(j)).collect()).collect();
        z.push(zi);
        coeffs.push(table);
    }
    Ok(GenericSchemeWitness { p: p.to_vec(), w, z, coeffs, assignment: assignment.clone() })
}

/// Recovers `pᵀx` from node responses: `tr(ζ_i pᵀx) = Σ_j Σ_ℓ a[i][j][ℓ] ·
/// tr(c_j β^(j)_ℓ)`, then inverts the trace coordinates. Nodes with
/// `V_j = {0}` need not respond.
pub fn generic_reconstruct(f: &Field, witness: &GenericSchemeWitness, responses: &[NodeResponse]) -> Result<Elem> {
    let n = witness.w.len();
    let mut by_node: Vec<Option<&NodeResponse>> = vec![None; n];
    for r in responses {
        let slot = by_node.get_mut(r.node).ok_or(Error::MissingResponse(r.node))?;
        *slot = Some(r);
    }
    let mut traces = Vec::with_capacity(f.degree() as usize);
    for table in &witness.coeffs {
        let mut acc = Elem::ZERO;
        for (j, row) in table.iter().enumerate() {
            if witness.assignment.dim(j) == 0 {
                continue;
            }
            let resp = by_node[j].ok_or(Error::MissingResponse(j))?;
            if resp.values.len() != row.len() {
                return Err(Error::LengthMismatch { expected: row.len(), got: resp.values.len() });
            }
            acc = f.add(acc, f.dot(row, &resp.values));
        }
        traces.push(acc);
    }
    Ok(f.recover_from_traces(&traces))
}

/// Both sides of the duality between the scheme condition and orthogonality
/// to codewords inside `𝒲 = V_1^⊥ × ... × V_n^⊥`, as `B`-subspaces of
/// `F^n` in digit coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerpCharReport {
    /// `dim_B {w : ζ_i w ∈ C^⊥ + 𝒱 for all i}`.
    pub scheme_side_dim: usize,
    /// `dim_B span_F(C ∩ 𝒲)^⊥`.
    pub codeword_side_dim: usize,
    pub scheme_in_codeword: bool,
    pub codeword_in_scheme: bool,
}

impl PerpCharReport {
    pub fn coincide(&self) -> bool {
        self.scheme_in_codeword && self.codeword_in_scheme
    }
}

/// Largest `Q^k` [`perp_char_check`] will enumerate.
pub const PERP_CHAR_LIMIT: u64 = 4096;

/// Computes both sides by brute force and compares them.
pub fn perp_char_check(code: &RsCode, assignment: &SubspaceAssignment) -> Result<PerpCharReport> {
    if assignment.n() != code.n() {
        return Err(Error::LengthMismatch { expected: code.n(), got: assignment.n() });
    }
    let f = code.field();
    let qk = (f.order() as u64).checked_pow(code.k() as u32);
    if qk.is_none_or(|v| v > PERP_CHAR_LIMIT) {
        return Err(Error::TooLargeForExhaustive);
    }
    let t = f.degree() as usize;
    let n = code.n();
    let dim = n * t;

    // Scheme side: kernel of w ↦ (ζ_i w mod S)_i, with S = C^⊥ + 𝒱 cut out by
    // the annihilator H of its spanning columns.
    let space = SumSpace::new(code, assignment);
    let annihilator = linalg::kernel(f, &space.columns, dim);
    let mut constraints = Vec::new();
    for &zeta in f.basis() {
        // image of each digit basis vector under w ↦ ζ w
        let images: Vec<Vec<Elem>> = (0..dim)
            .map(|col| {
                let (j, a) = (col / t, col % t);
                let mut v = vec![Elem::ZERO; n];
                v[j] = f.mul(zeta, Elem(f.base_order().pow(a as u32)));
                digit_vector(f, &v)
            })
            .collect();
        for h in &annihilator {
            constraints.push(images.iter().map(|img| f.dot(h, img)).collect());
        }
    }
    let scheme_side = linalg::kernel(f, &constraints, dim);

    // Codeword side: enumerate C ∩ 𝒲, take the F-span, then its F-orthogonal
    // complement, then expand to a B-basis.
    let mut inside: Vec<Vec<Elem>> = Vec::new();
    let mut msg = vec![Elem::ZERO; code.k()];
    for idx in 0..qk.unwrap_or(0) {
        let mut rest = idx;
        for m in msg.iter_mut() {
            *m = Elem((rest % f.order() as u64) as u32);
            rest /= f.order() as u64;
        }
        let c = code.encode(&msg)?;
        let in_w =
            c.iter().enumerate().all(|(j, &cj)| assignment.basis(j).iter().all(|&b| f.trace(f.mul(cj, b)).is_zero()));
        if in_w {
            inside.push(c);
        }
    }
    let complement = linalg::kernel(f, &inside, n);
    let codeword_side: Vec<Vec<Elem>> = complement
        .iter()
        .flat_map(|u| {
            f.basis().iter().map(move |&zeta| digit_vector(f, &u.iter().map(|&x| f.mul(zeta, x)).collect::<Vec<_>>()))
        })
        .collect();

    let scheme_side_dim = scheme_side.len();
    let codeword_side_dim = linalg::rank(f, codeword_side.clone());
    let union_rank = {
        let mut all = scheme_side.clone();
        all.extend(codeword_side.iter().cloned());
        if all.is_empty() {
            0
        } else {
            linalg::rank(f, all)
        }
    };
    Ok(PerpCharReport {
        scheme_side_dim,
        codeword_side_dim,
        scheme_in_codeword: union_rank == codeword_side_dim,
        codeword_in_scheme: union_rank == scheme_side_dim,
    })
}
