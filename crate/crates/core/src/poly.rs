//! Univariate polynomials over `GF(q^t)`.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// Coefficients lowest degree first, with no trailing zeros. The zero
/// polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&Elem::ZERO) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: Elem) -> Self {
        Poly::new(vec![c])
    }

    /// `c · X^deg`.
    pub fn monomial(c: Elem, deg: usize) -> Self {
        let mut coeffs = vec![Elem::ZERO; deg + 1];
        coeffs[deg] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.coeffs
    }

    /// Coefficient of `X^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Indices of the nonzero coefficients.
    pub fn deg_set(&self) -> BTreeSet<usize> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i).collect()
    }

    pub fn eval(&self, f: &Field, x: Elem) -> Elem {
        self.coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, f: &Field, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..len).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, f: &Field, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..len).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, f: &Field, c: Elem) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, f: &Field, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder, `self = q·m + r` with `deg r < deg m`.
    pub fn div_rem(&self, f: &Field, m: &Poly) -> Result<(Poly, Poly)> {
        let dm = m.degree().ok_or(Error::ZeroModulus)?;
        if self.coeffs.len() <= dm {
            return Ok((Poly::zero(), self.clone()));
        }
        let lead_inv = f.inv(m.coeffs[dm]);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Elem::ZERO; rem.len() - dm];
        for top in (dm..rem.len()).rev() {
            let c = f.mul(rem[top], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[top - dm] = c;
            for (i, &mi) in m.coeffs.iter().enumerate() {
                let idx = top - dm + i;
                rem[idx] = f.sub(rem[idx], f.mul(c, mi));
            }
        }
        rem.truncate(dm);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Remainder modulo `m`.
    pub fn mod_reduce(&self, f: &Field, m: &Poly) -> Result<Poly> {
        self.div_rem(f, m).map(|(_, r)| r)
    }

    /// `self^e mod m` by square-and-multiply.
    pub fn pow_mod(&self, f: &Field, mut e: u64, m: &Poly) -> Result<Poly> {
        let mut base = self.mod_reduce(f, m)?;
        let mut acc = Poly::constant(Elem::ONE).mod_reduce(f, m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base).mod_reduce(f, m)?;
            }
            base = base.mul(f, &base).mod_reduce(f, m)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// `Π (X − x_i)`.
    pub fn vanishing(f: &Field, xs: &[Elem]) -> Poly {
        let mut coeffs = vec![Elem::ONE];
        for &x in xs {
            // multiply by (X − x) in place
            coeffs.push(Elem::ZERO);
            for i in (0..coeffs.len()).rev() {
                let lower = if i > 0 { coeffs[i - 1] } else { Elem::ZERO };
                coeffs[i] = f.sub(lower, f.mul(x, coeffs[i]));
            }
        }
        Poly::new(coeffs)
    }

    /// The unique polynomial of degree `< points.len()` through `points`.
    pub fn interpolate(f: &Field, points: &[(Elem, Elem)]) -> Result<Poly> {
        let mut seen = vec![false; f.order() as usize];
        for &(x, _) in points {
            let slot = seen.get_mut(x.0 as usize).ok_or(Error::DuplicatePoint)?;
            if *slot {
                return Err(Error::DuplicatePoint);
            }
            *slot = true;
        }
        let xs: Vec<Elem> = points.iter().map(|p| p.0).collect();
        let master = Poly::vanishing(f, &xs);
        let n = points.len();
        let mut acc = vec![Elem::ZERO; n];
        let mut quot = vec![Elem::ZERO; n];
        for &(x, y) in points {
            if y.is_zero() {
                continue;
            }
            // master / (X − x) by synthetic division
            let mut carry = Elem::ZERO;
            for i in (0..n).rev() {
                carry = f.add(master.coeff(i + 1), f.mul(carry, x));
                quot[i] = carry;
            }
            let denom = quot.iter().rev().fold(Elem::ZERO, |a, &c| f.add(f.mul(a, x), c));
            let w = f.div(y, denom);
            for (a, &c) in acc.iter_mut().zip(&quot) {
                *a = f.add(*a, f.mul(w, c));
            }
        }
        Ok(Poly::new(acc))
    }
}
