//! Finite fields `B = GF(q)` and `F = GF(q^t)`.
//!
//! Both are built as quotient rings of a polynomial ring by a monic
//! irreducible modulus: `GF(q) = GF(p)[y]/(m(y))` and
//! `GF(q^t) = GF(q)[x]/(M(x))`. An element is identified with an integer
//! code in `[0, order)` whose base-`q` digits (base-`p` digits for `GF(q)`)
//! are its polynomial coefficients, lowest degree first. A base-field
//! element therefore has the same code in `B` and in `F`.
//!
//! Multiplication goes through discrete log/exp tables, addition is
//! digit-wise modulo `p` (plain XOR in characteristic two).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg;

/// Largest supported extension-field order.
pub const MAX_ORDER: u64 = 1 << 20;

/// A field element, stored as its integer code.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Splits `q` as `p^m`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > q {
        p = q;
    }
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p as u32, m))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn add_digits(mut a: u32, mut b: u32, p: u32) -> u32 {
    if p == 2 {
        return a ^ b;
    }
    let (mut out, mut place) = (0u32, 1u32);
    while a > 0 || b > 0 {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

fn neg_digits(mut a: u32, p: u32) -> u32 {
    if p == 2 {
        return a;
    }
    let (mut out, mut place) = (0u32, 1u32);
    while a > 0 {
        out += ((p - a % p) % p) * place;
        a /= p;
        place *= p;
    }
    out
}

/// Arithmetic on the coefficient field of a quotient-ring construction.
trait CoeffArith {
    fn size(&self) -> u32;
    fn add(&self, a: u32, b: u32) -> u32;
    fn neg(&self, a: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    fn inv(&self, a: u32) -> u32;
}

struct PrimeArith(u32);

impl CoeffArith for PrimeArith {
    fn size(&self) -> u32 {
        self.0
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.0
    }
    fn neg(&self, a: u32) -> u32 {
        (self.0 - a) % self.0
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }
    fn inv(&self, a: u32) -> u32 {
        // a^(p-2)
        let (mut base, mut e, mut acc) = (a as u64, self.0 as u64 - 2, 1u64);
        let p = self.0 as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u32
    }
}

fn to_digits(mut code: u32, radix: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = code % radix;
        code /= radix;
    }
    out
}

fn from_digits(digits: &[u32], radix: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * radix + d)
}

/// `x * y mod modulus` on coefficient vectors of length `deg`; `modulus` is
/// monic of degree `deg`.
fn mulmod<A: CoeffArith>(a: &A, x: &[u32], y: &[u32], modulus: &[u32]) -> Vec<u32> {
    let deg = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * deg];
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        for (j, &yj) in y.iter().enumerate() {
            if yj != 0 {
                prod[i + j] = a.add(prod[i + j], a.mul(xi, yj));
            }
        }
    }
    for top in (deg..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (i, &m) in modulus[..deg].iter().enumerate() {
            if m != 0 {
                let idx = top - deg + i;
                prod[idx] = a.add(prod[idx], a.neg(a.mul(c, m)));
            }
        }
    }
    prod.truncate(deg);
    prod
}

/// Remainder of `num` modulo the monic `den` (coefficient vectors, low first).
fn rem_monic<A: CoeffArith>(a: &A, num: &[u32], den: &[u32]) -> Vec<u32> {
    let dd = den.len() - 1;
    let mut r = num.to_vec();
    while r.len() > dd {
        let top = r.len() - 1;
        let c = r[top];
        if c != 0 {
            for (i, &m) in den.iter().enumerate() {
                let idx = top - dd + i;
                r[idx] = a.add(r[idx], a.neg(a.mul(c, m)));
            }
        }
        r.pop();
    }
    r
}

/// Exhaustive factor check: no monic divisor of degree `1..=deg/2`.
fn is_irreducible<A: CoeffArith>(a: &A, poly: &[u32]) -> bool {
    let deg = poly.len() - 1;
    let q = a.size() as u64;
    for d in 1..=deg / 2 {
        let count = q.pow(d as u32);
        for code in 0..count {
            let mut div = to_digits(code as u32, a.size(), d);
            div.push(1);
            if rem_monic(a, poly, &div).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `deg`: the one
/// whose lower coefficients, read as a base-`size` integer, are smallest.
fn smallest_irreducible<A: CoeffArith>(a: &A, deg: usize) -> Vec<u32> {
    let count = (a.size() as u64).pow(deg as u32);
    for code in 0..count {
        let mut poly = to_digits(code as u32, a.size(), deg);
        poly.push(1);
        if is_irreducible(a, &poly) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

fn build_tables<A: CoeffArith>(a: &A, modulus: &[u32]) -> LogTables {
    let deg = modulus.len() - 1;
    let radix = a.size();
    let order = (radix as u64).pow(deg as u32);
    let group = order - 1;
    let factors = prime_factors(group);
    let one = to_digits(1, radix, deg);

    let pow = |g: &[u32], mut e: u64| -> Vec<u32> {
        let mut acc = one.clone();
        let mut base = g.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(a, &acc, &base, modulus);
            }
            base = mulmod(a, &base, &base, modulus);
            e >>= 1;
        }
        acc
    };

    let generator = (1..order as u32)
        .map(|c| to_digits(c, radix, deg))
        .find(|g| factors.iter().all(|&r| pow(g, group / r) != one))
        .expect("multiplicative group is cyclic");

    let mut exp = Vec::with_capacity(group as usize);
    let mut log = vec![0u32; order as usize];
    let mut cur = one.clone();
    for i in 0..group as u32 {
        let code = from_digits(&cur, radix);
        exp.push(code);
        log[code as usize] = i;
        cur = mulmod(a, &cur, &generator, modulus);
    }
    LogTables { exp, log }
}

/// The base field `B = GF(q)`, `q = p^m`.
#[derive(Clone)]
pub struct BaseField {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl BaseField {
    pub fn new(q: u64) -> Result<Self> {
        let (p, m) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(Error::InvalidField(format!("q = {q} exceeds {MAX_ORDER}")));
        }
        let prime = PrimeArith(p);
        let modulus = if m == 1 { vec![0, 1] } else { smallest_irreducible(&prime, m as usize) };
        let LogTables { exp, log } = build_tables(&prime, &modulus);
        Ok(BaseField { p, m, q: q as u32, modulus, exp, log })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// `m` in `q = p^m`.
    pub fn prime_degree(&self) -> u32 {
        self.m
    }

    /// Modulus over `GF(p)` used to build `GF(q)`, low coefficient first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(add_digits(a.0, b.0, self.p))
    }

    pub fn neg(&self, a: Elem) -> Elem {
        Elem(neg_digits(a.0, self.p))
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(CoeffArith::mul(self, a.0, b.0))
    }

    pub fn inv(&self, a: Elem) -> Elem {
        Elem(CoeffArith::inv(self, a.0))
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }
}

impl CoeffArith for BaseField {
    fn size(&self) -> u32 {
        self.q
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        add_digits(a, b, self.p)
    }
    fn neg(&self, a: u32) -> u32 {
        neg_digits(a, self.p)
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        self.exp[((self.log[a as usize] + self.log[b as usize]) % n) as usize]
    }
    fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let n = self.q - 1;
        self.exp[((n - self.log[a as usize]) % n) as usize]
    }
}

impl fmt::Debug for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BaseField").field("q", &self.q).field("modulus", &self.modulus).finish()
    }
}

/// The extension field `F = GF(q^t)` over `B = GF(q)`, together with a
/// `B`-basis `ζ_1..ζ_t` and its trace-dual basis.
#[derive(Clone)]
pub struct Field {
    base: BaseField,
    t: u32,
    order: u32,
    modulus: Vec<Elem>,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
    basis: Vec<Elem>,
    dual: Vec<Elem>,
}

impl Field {
    /// `GF(q^t)` with the lexicographically smallest monic irreducible
    /// modulus and the polynomial basis `1, x, ..., x^(t-1)`.
    pub fn new(q: u64, t: u32) -> Result<Self> {
        let base = Self::check_params(q, t)?;
        let modulus = smallest_irreducible(&base, t as usize);
        Self::assemble(base, t, modulus)
    }

    /// `GF(q^t)` with a caller-chosen modulus (base-field codes, low first).
    /// The modulus is made monic before use.
    pub fn with_modulus(q: u64, t: u32, modulus: &[Elem]) -> Result<Self> {
        let base = Self::check_params(q, t)?;
        let mut coeffs: Vec<u32> = modulus.iter().map(|e| e.0).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.len() != t as usize + 1 {
            return Err(Error::InvalidField(format!("modulus must have degree {t}")));
        }
        if coeffs.iter().any(|&c| c >= base.q) {
            return Err(Error::InvalidField("modulus coefficient outside GF(q)".into()));
        }
        let lead_inv = CoeffArith::inv(&base, coeffs[t as usize]);
        for c in coeffs.iter_mut() {
            *c = CoeffArith::mul(&base, *c, lead_inv);
        }
        if !is_irreducible(&base, &coeffs) {
            return Err(Error::ReducibleModulus);
        }
        Self::assemble(base, t, coeffs)
    }

    fn check_params(q: u64, t: u32) -> Result<BaseField> {
        let base = BaseField::new(q)?;
        if t < 2 {
            return Err(Error::InvalidField(format!("extension degree {t} < 2")));
        }
        match q.checked_pow(t) {
            Some(order) if order <= MAX_ORDER => Ok(base),
            _ => Err(Error::InvalidField(format!("q^t exceeds {MAX_ORDER}"))),
        }
    }

    fn assemble(base: BaseField, t: u32, modulus: Vec<u32>) -> Result<Self> {
        let LogTables { exp, log } = build_tables(&base, &modulus);
        let q = base.q;
        let order = q.pow(t);
        let group = (order - 1) as u64;
        let mut trace = vec![0u32; order as usize];
        for a in 1..order {
            let la = log[a as usize] as u64;
            let mut acc = 0u32;
            let mut qi = 1u64;
            for _ in 0..t {
                acc = add_digits(acc, exp[((la * qi) % group) as usize], base.p);
                qi = qi * q as u64 % group;
            }
            trace[a as usize] = acc;
        }
        let basis: Vec<Elem> = (0..t).map(|i| Elem(q.pow(i))).collect();
        let mut field = Field {
            base,
            t,
            order,
            modulus: modulus.into_iter().map(Elem).collect(),
            exp,
            log,
            trace,
            basis: Vec::new(),
            dual: Vec::new(),
        };
        field.set_basis(basis)?;
        Ok(field)
    }

    /// Replaces the default polynomial basis with `basis`.
    pub fn with_basis(mut self, basis: Vec<Elem>) -> Result<Self> {
        self.set_basis(basis)?;
        Ok(self)
    }

    fn set_basis(&mut self, basis: Vec<Elem>) -> Result<()> {
        let t = self.t as usize;
        if basis.len() != t {
            return Err(Error::LengthMismatch { expected: t, got: basis.len() });
        }
        if basis.iter().any(|b| b.0 >= self.order) {
            return Err(Error::InvalidField("basis element outside the field".into()));
        }
        // ζ*_j solves tr(ζ_i · ζ*_j) = [i = j]; writing ζ*_j in the polynomial
        // basis gives the system M u = e_j with M[i][l] = tr(ζ_i x^l).
        let gram: Vec<Vec<Elem>> =
            basis.iter().map(|&z| (0..t).map(|l| self.trace(self.mul(z, self.poly_basis(l)))).collect()).collect();
        if linalg::rank(self, gram.clone()) < t {
            return Err(Error::DependentBasis);
        }
        let mut dual = Vec::with_capacity(t);
        for j in 0..t {
            let rhs: Vec<Elem> = (0..t).map(|i| if i == j { Elem::ONE } else { Elem::ZERO }).collect();
            let u = linalg::solve(self, &gram, &rhs).ok_or(Error::DependentBasis)?;
            dual.push(self.from_digits(&u));
        }
        self.basis = basis;
        self.dual = dual;
        Ok(())
    }

    fn poly_basis(&self, l: usize) -> Elem {
        Elem(self.base.q.pow(l as u32))
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    /// `Q = q^t`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// `q`, the order of the base field.
    pub fn base_order(&self) -> u32 {
        self.base.q
    }

    pub fn degree(&self) -> u32 {
        self.t
    }

    pub fn characteristic(&self) -> u32 {
        self.base.p
    }

    /// Monic modulus over the base field, low coefficient first.
    pub fn modulus(&self) -> &[Elem] {
        &self.modulus
    }

    /// The basis `ζ_1..ζ_t`.
    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    /// The trace-dual basis: `tr(ζ_i ζ*_j) = [i = j]`.
    pub fn dual_basis(&self) -> &[Elem] {
        &self.dual
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(Elem)
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.order
    }

    pub fn is_base(&self, a: Elem) -> bool {
        a.0 < self.base.q
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(add_digits(a.0, b.0, self.base.p))
    }

    pub fn neg(&self, a: Elem) -> Elem {
        Elem(neg_digits(a.0, self.base.p))
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let n = self.order - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        Elem(self.exp[(if s >= n { s - n } else { s }) as usize])
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        let n = self.order - 1;
        Elem(self.exp[((n - self.log[a.0 as usize]) % n) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let n = (self.order - 1) as u64;
        let l = self.log[a.0 as usize] as u64 % n;
        Elem(self.exp[((l * (e % n)) % n) as usize])
    }

    /// `a^(q^i)`.
    pub fn frobenius(&self, a: Elem, i: u32) -> Elem {
        let n = (self.order - 1) as u64;
        let mut e = 1u64;
        for _ in 0..i {
            e = e * self.base.q as u64 % n;
        }
        if a.is_zero() {
            Elem::ZERO
        } else {
            self.pow(a, if e == 0 { n } else { e })
        }
    }

    /// `tr(a) = Σ_{i<t} a^(q^i)`, an element of the base field.
    pub fn trace(&self, a: Elem) -> Elem {
        Elem(self.trace[a.0 as usize])
    }

    /// `(tr(ζ_1 a), ..., tr(ζ_t a))`.
    pub fn trace_coords(&self, a: Elem) -> Vec<Elem> {
        self.basis.iter().map(|&z| self.trace(self.mul(z, a))).collect()
    }

    /// Inverse of [`Field::trace_coords`].
    pub fn recover_from_traces(&self, coords: &[Elem]) -> Elem {
        assert_eq!(coords.len(), self.t as usize, "need one trace per basis element");
        coords.iter().zip(&self.dual).fold(Elem::ZERO, |acc, (&c, &d)| self.add(acc, self.mul(c, d)))
    }

    /// Coordinates of `a` in the basis `ζ`: `a = Σ c_i ζ_i`.
    pub fn coords(&self, a: Elem) -> Vec<Elem> {
        self.dual.iter().map(|&d| self.trace(self.mul(d, a))).collect()
    }

    /// Coordinates of `a` in the polynomial basis `1, x, ..., x^(t-1)`.
    pub fn digits(&self, a: Elem) -> Vec<Elem> {
        to_digits(a.0, self.base.q, self.t as usize).into_iter().map(Elem).collect()
    }

    pub fn from_digits(&self, digits: &[Elem]) -> Elem {
        let raw: Vec<u32> = digits.iter().map(|d| d.0).collect();
        Elem(from_digits(&raw, self.base.q))
    }

    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter().zip(b).fold(Elem::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("q", &self.base.q)
            .field("t", &self.t)
            .field("modulus", &self.modulus)
            .field("basis", &self.basis)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.base.q == other.base.q && self.t == other.t && self.modulus == other.modulus && self.basis == other.basis
    }
}

impl Eq for Field {}
