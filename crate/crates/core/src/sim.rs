//! An in-process storage cluster: `n` nodes each hold one symbol of every
//! encoded block. Evaluations read only surviving nodes and credit every
//! downloaded bit to a per-node ledger.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::bits_per_symbol;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::rs::RsCode;
use crate::rs_scheme::{
    build_rate_half_scheme, build_scheme, evaluate_full, EvaluationScheme, SchemeKind, SchemeParams,
};

/// Which construction [`Cluster::evaluate`] runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemeSpec {
    RateHalf,
    Main(SchemeParams),
}

/// Outcome of one evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalResult {
    /// One value in `F`, or `t` base-field values for a batched run.
    pub values: Vec<Elem>,
    pub bits_downloaded: u64,
    /// `k ⌈log₂ Q⌉`, the cost of downloading `k` whole symbols.
    pub bits_naive: u64,
    /// Bits broadcast to the contacted nodes to describe the function.
    /// Reported only; never charged to the ledger.
    pub bits_uploaded: u64,
    pub nodes_contacted: Vec<usize>,
}

type CacheKey = (usize, Vec<Elem>, SchemeSpec);

#[derive(Clone, Debug)]
pub struct Cluster {
    code: RsCode,
    /// `stores[j][b]` is symbol `j` of block `b`.
    stores: Vec<Vec<Elem>>,
    blocks: usize,
    systematic: bool,
    failed: BTreeSet<usize>,
    node_bits: Vec<u64>,
    cache: BTreeMap<CacheKey, EvaluationScheme>,
}

impl Cluster {
    /// Encodes each block as the codeword of its coefficient vector.
    pub fn deploy(code: RsCode, blocks: &[Vec<Elem>]) -> Result<Self> {
        let words = blocks.iter().map(|b| code.encode(b)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_codewords(code, words, false))
    }

    /// Encodes each block so that node `i < k` stores `x_i` itself.
    pub fn deploy_systematic(code: RsCode, blocks: &[Vec<Elem>]) -> Result<Self> {
        let info: Vec<usize> = (0..code.k()).collect();
        let words = blocks.iter().map(|b| code.systematic_encode(b, &info)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_codewords(code, words, true))
    }

    fn from_codewords(code: RsCode, words: Vec<Vec<Elem>>, systematic: bool) -> Self {
        let n = code.n();
        let stores = (0..n).map(|j| words.iter().map(|w| w[j]).collect()).collect();
        Cluster {
            code,
            stores,
            blocks: words.len(),
            systematic,
            failed: BTreeSet::new(),
            node_bits: alloc::vec![0; n],
            cache: BTreeMap::new(),
        }
    }

    pub fn code(&self) -> &RsCode {
        &self.code
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn is_systematic(&self) -> bool {
        self.systematic
    }

    pub fn failed(&self) -> Vec<usize> {
        self.failed.iter().copied().collect()
    }

    /// Marks nodes as failed. Failing a node twice changes nothing.
    pub fn fail_nodes(&mut self, nodes: &[usize]) -> Result<()> {
        if let Some(&bad) = nodes.iter().find(|&&j| j >= self.code.n()) {
            return Err(Error::InvalidCode(alloc::format!("no node {bad}")));
        }
        let before = self.failed.len();
        self.failed.extend(nodes.iter().copied());
        if self.failed.len() != before {
            self.cache.clear();
        }
        Ok(())
    }

    /// Total bits downloaded so far.
    pub fn ledger(&self) -> u64 {
        self.node_bits.iter().sum()
    }

    /// Bits downloaded from each node so far.
    pub fn node_ledger(&self) -> &[u64] {
        &self.node_bits
    }

    /// Number of schemes currently cached.
    pub fn cached_schemes(&self) -> usize {
        self.cache.len()
    }

    /// Symbol of `block` stored at `node`.
    ///
    /// # Panics
    ///
    /// If `node` has failed: the protocols must never touch a failed node.
    pub fn read(&self, node: usize, block: usize) -> Elem {
        assert!(!self.failed.contains(&node), "read from failed node {node}");
        self.stores[node][block]
    }

    fn check_block(&self, block: usize) -> Result<()> {
        if block >= self.blocks {
            return Err(Error::InvalidCode(alloc::format!("no block {block}")));
        }
        Ok(())
    }

    fn survivors(&self) -> Vec<usize> {
        (0..self.code.n()).filter(|j| !self.failed.contains(j)).collect()
    }

    fn scheme(&mut self, code: &RsCode, p: &[Elem], spec: SchemeSpec) -> Result<EvaluationScheme> {
        let key = (code.k(), p.to_vec(), spec);
        if let Some(s) = self.cache.get(&key) {
            return Ok(s.clone());
        }
        let failed = self.failed();
        let scheme = match spec {
            SchemeSpec::RateHalf => build_rate_half_scheme(code, p, &failed)?,
            SchemeSpec::Main(params) => build_scheme(code, p, &params, &failed)?,
        };
        self.cache.insert(key, scheme.clone());
        Ok(scheme)
    }

    /// Caches a scheme built elsewhere (for instance loaded from a file) so
    /// that [`Cluster::evaluate`] uses it for its target.
    pub fn install(&mut self, scheme: EvaluationScheme) -> Result<()> {
        if scheme.code() != &self.code {
            return Err(Error::InvalidScheme("scheme is for a different code".into()));
        }
        if scheme.failed() != self.failed().as_slice() {
            return Err(Error::InvalidScheme("scheme erasures differ from the failed nodes".into()));
        }
        let spec = match scheme.kind() {
            SchemeKind::RateHalf => SchemeSpec::RateHalf,
            SchemeKind::Main(params) => SchemeSpec::Main(params),
        };
        self.cache.insert((self.code.k(), scheme.target().to_vec(), spec), scheme);
        Ok(())
    }

    /// Runs `scheme` on the symbols produced by `local` at each survivor and
    /// charges one base-field symbol per node per round.
    fn run(&mut self, scheme: &EvaluationScheme, local: impl Fn(Elem) -> Elem, block: usize) -> Result<EvalResult> {
        let n = self.code.n();
        let survivors = self.survivors();
        let mut responses = alloc::vec![alloc::vec![None; n]; scheme.s()];
        for &j in &survivors {
            let symbol = local(self.read(j, block));
            for (r, per_node) in responses.iter_mut().enumerate() {
                per_node[j] = Some(scheme.response(r, j, symbol));
            }
        }
        let value = evaluate_full(scheme, &responses)?;
        let f = self.code.field();
        let per_node = scheme.s() as u64 * bits_per_symbol(f.base_order() as u64);
        for &j in &survivors {
            self.node_bits[j] += per_node;
        }
        let symbol_bits = self.code.symbol_bits();
        Ok(EvalResult {
            values: alloc::vec![value],
            bits_downloaded: per_node * survivors.len() as u64,
            bits_naive: self.code.k() as u64 * symbol_bits,
            bits_uploaded: survivors.len() as u64 * scheme.target().len() as u64 * symbol_bits,
            nodes_contacted: survivors,
        })
    }

    /// `pᵀx` for the message of `block`, via the low-bandwidth scheme.
    pub fn evaluate(&mut self, block: usize, p: &[Elem], spec: SchemeSpec) -> Result<EvalResult> {
        self.check_block(block)?;
        let code = self.code.clone();
        let scheme = self.scheme(&code, p, spec)?;
        self.run(&scheme, |c| c, block)
    }

    /// `pᵀx` by downloading `k` whole symbols from the lowest-indexed
    /// survivors and interpolating.
    pub fn evaluate_naive(&mut self, block: usize, p: &[Elem]) -> Result<EvalResult> {
        self.check_block(block)?;
        let k = self.code.k();
        if p.len() != k {
            return Err(Error::LengthMismatch { expected: k, got: p.len() });
        }
        let survivors = self.survivors();
        if survivors.len() < k {
            return Err(Error::InsufficientSurvivors { needed: k, available: survivors.len() });
        }
        let picked: Vec<usize> = survivors[..k].to_vec();
        let symbols: Vec<(usize, Elem)> = picked.iter().map(|&j| (j, self.read(j, block))).collect();
        let rec = self.code.naive_recover(&symbols)?;
        let symbol_bits = self.code.symbol_bits();
        for &j in &picked {
            self.node_bits[j] += symbol_bits;
        }
        Ok(EvalResult {
            values: alloc::vec![self.code.field().dot(p, &rec.message)],
            bits_downloaded: rec.bits,
            bits_naive: rec.bits,
            bits_uploaded: 0,
            nodes_contacted: picked,
        })
    }

    /// `Σ_{i<k} x_i²` for a systematically stored block.
    ///
    /// Each node squares its symbol, which turns the codeword of `f` into
    /// one of `f²` in the dimension `2k − 1` code. The sum is the functional
    /// `Σ_{i<k} f²(α_i)`, whose coefficient vector is `(Σ_i α_i^l)_l`.
    pub fn evaluate_sum_of_squares(&mut self, block: usize, spec: SchemeSpec) -> Result<EvalResult> {
        self.check_block(block)?;
        if !self.systematic {
            return Err(Error::NotSystematic);
        }
        let k = self.code.k();
        if 2 * k - 1 > self.code.n() {
            return Err(Error::DimensionTooLarge);
        }
        let squared = self.code.with_dimension(2 * k - 1)?;
        let f = self.code.field();
        let p: Vec<Elem> = (0..2 * k - 1)
            .map(|l| self.code.points()[..k].iter().fold(Elem::ZERO, |acc, &a| f.add(acc, f.pow(a, l as u64))))
            .collect();
        let scheme = self.scheme(&squared, &p, spec).map_err(|e| match e {
            Error::ParamConstraintViolated(ref m) if m.starts_with("1 ≤ k") => Error::DimensionTooLarge,
            other => other,
        })?;
        let field = self.code.field_arc().clone();
        let mut out = self.run(&scheme, |c| field.mul(c, c), block)?;
        out.bits_naive = k as u64 * self.code.symbol_bits();
        Ok(out)
    }

    /// `t` base-field dot products `bᵀy^(i)` for one scheme execution, where
    /// `x_j = Σ_i y_{i,j} ζ_i`.
    pub fn evaluate_batched_base_field(&mut self, block: usize, b: &[Elem], spec: SchemeSpec) -> Result<EvalResult> {
        if let Some(i) = b.iter().position(|&c| !self.code.field().is_base(c)) {
            return Err(Error::CoefficientNotInBase(i));
        }
        let mut out = self.evaluate(block, b, spec)?;
        out.values = self.code.field().coords(out.values[0]);
        Ok(out)
    }
}
