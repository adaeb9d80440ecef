//! Reed-Solomon codes `RS[n, k]`: message `x ∈ F^k` is read as the
//! coefficients of `f(X) = Σ x_ℓ X^ℓ` and stored as `(f(α_1), ..., f(α_n))`.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::bits_per_symbol;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsCode {
    field: Arc<Field>,
    k: usize,
    points: Vec<Elem>,
}

/// Output of [`RsCode::naive_recover`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaiveRecovery {
    pub message: Vec<Elem>,
    pub bits: u64,
}

impl RsCode {
    pub fn new(field: impl Into<Arc<Field>>, k: usize, points: Vec<Elem>) -> Result<Self> {
        let field = field.into();
        let n = points.len();
        if k == 0 || k > n || n > field.order() as usize {
            return Err(Error::InvalidCode(format!("need 1 ≤ k ≤ n ≤ Q, got k = {k}, n = {n}, Q = {}", field.order())));
        }
        let mut seen = vec![false; field.order() as usize];
        for &a in &points {
            if !field.contains(a) {
                return Err(Error::InvalidCode(format!("point {a} outside the field")));
            }
            if core::mem::replace(&mut seen[a.0 as usize], true) {
                return Err(Error::DuplicatePoint);
            }
        }
        Ok(RsCode { field, k, points })
    }

    /// The code of length `Q` evaluated at every element, in ascending code
    /// order.
    pub fn full_length(field: impl Into<Arc<Field>>, k: usize) -> Result<Self> {
        let field = field.into();
        let points = field.elements().collect();
        Self::new(field, k, points)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Elem] {
        &self.points
    }

    pub fn is_full_length(&self) -> bool {
        self.points.len() == self.field.order() as usize
    }

    /// Same field and evaluation points, different dimension.
    pub fn with_dimension(&self, k: usize) -> Result<Self> {
        Self::new(self.field.clone(), k, self.points.clone())
    }

    /// Bits needed to ship one codeword symbol, `⌈log₂ Q⌉`.
    pub fn symbol_bits(&self) -> u64 {
        bits_per_symbol(self.field.order() as u64)
    }

    pub fn encode(&self, message: &[Elem]) -> Result<Vec<Elem>> {
        self.check_len(message.len(), self.k)?;
        let f = Poly::new(message.to_vec());
        Ok(self.points.iter().map(|&a| f.eval(&self.field, a)).collect())
    }

    /// The codeword equal to `values` at `info_positions`.
    pub fn systematic_encode(&self, values: &[Elem], info_positions: &[usize]) -> Result<Vec<Elem>> {
        self.check_len(values.len(), self.k)?;
        self.check_len(info_positions.len(), self.k)?;
        self.check_positions(info_positions)?;
        let pts: Vec<_> = info_positions.iter().zip(values).map(|(&j, &v)| (self.points[j], v)).collect();
        let f = Poly::interpolate(&self.field, &pts)?;
        Ok(self.points.iter().map(|&a| f.eval(&self.field, a)).collect())
    }

    /// Interpolates the message from at least `k` `(position, symbol)`
    /// pairs. Extra pairs are checked for consistency.
    pub fn naive_recover(&self, symbols: &[(usize, Elem)]) -> Result<NaiveRecovery> {
        if symbols.len() < self.k {
            return Err(Error::InsufficientSurvivors { needed: self.k, available: symbols.len() });
        }
        let positions: Vec<usize> = symbols.iter().map(|s| s.0).collect();
        self.check_positions(&positions)?;
        let pts: Vec<_> = symbols.iter().map(|&(j, v)| (self.points[j], v)).collect();
        let f = Poly::interpolate(&self.field, &pts)?;
        if f.degree().is_some_and(|d| d >= self.k) {
            return Err(Error::InconsistentSymbols);
        }
        let mut message = f.into_coeffs();
        message.resize(self.k, Elem::ZERO);
        Ok(NaiveRecovery { message, bits: symbols.len() as u64 * self.symbol_bits() })
    }

    /// The `n × k` generator matrix, `G[j][ℓ] = α_j^ℓ`.
    pub fn generator(&self) -> Vec<Vec<Elem>> {
        self.points.iter().map(|&a| (0..self.k).map(|l| self.field.pow(a, l as u64)).collect()).collect()
    }

    /// `Gᵀ`, a `k × n` matrix.
    pub fn generator_transpose(&self) -> Vec<Vec<Elem>> {
        linalg::transpose(&self.generator(), self.k)
    }

    /// A basis of the dual code `{y : Gᵀ y = 0}`, `n − k` vectors.
    pub fn dual_code_basis(&self) -> Vec<Vec<Elem>> {
        linalg::kernel(&self.field, &self.generator_transpose(), self.n())
    }

    /// `Gᵀ w`.
    pub fn apply_transpose(&self, w: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        (0..self.k)
            .map(|l| {
                self.points.iter().zip(w).fold(Elem::ZERO, |acc, (&a, &wj)| f.add(acc, f.mul(wj, f.pow(a, l as u64))))
            })
            .collect()
    }

    fn check_len(&self, got: usize, expected: usize) -> Result<()> {
        if got == expected {
            Ok(())
        } else {
            Err(Error::LengthMismatch { expected, got })
        }
    }

    fn check_positions(&self, positions: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.n()];
        for &j in positions {
            let slot = seen.get_mut(j).ok_or_else(|| Error::InvalidCode(format!("position {j} out of range")))?;
            if core::mem::replace(slot, true) {
                return Err(Error::DuplicatePosition(j));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rs42() -> RsCode {
        RsCode::full_length(Field::new(2, 2).unwrap(), 2).unwrap()
    }

    #[test]
    fn encode_examples() {
        let code = rs42();
        assert_eq!(code.encode(&[Elem(0), Elem(0)]).unwrap(), vec![Elem(0); 4]);
        assert_eq!(code.encode(&[Elem(3), Elem(0)]).unwrap(), vec![Elem(3); 4]);
        // points (0, 1, α, α+1 = α²); f = 1 + X
        assert_eq!(code.encode(&[Elem(1), Elem(1)]).unwrap(), vec![Elem(1), Elem(0), Elem(3), Elem(2)]);
        assert_eq!(code.encode(&[Elem(1)]), Err(Error::LengthMismatch { expected: 2, got: 1 }));
    }

    #[test]
    fn code_validation() {
        let f = Field::new(2, 2).unwrap();
        assert!(matches!(RsCode::new(f.clone(), 0, vec![Elem(0)]), Err(Error::InvalidCode(_))));
        assert!(matches!(RsCode::new(f.clone(), 2, vec![Elem(0)]), Err(Error::InvalidCode(_))));
        assert_eq!(RsCode::new(f, 1, vec![Elem(1), Elem(1)]), Err(Error::DuplicatePoint));
    }

    #[test]
    fn systematic_examples() {
        let code = rs42();
        let c = code.systematic_encode(&[Elem(1), Elem(2)], &[1, 2]).unwrap();
        assert_eq!((c[1], c[2]), (Elem(1), Elem(2)));
        assert!(code.naive_recover(&[(0, c[0]), (3, c[3])]).is_ok());
        assert_eq!(code.systematic_encode(&[Elem(0), Elem(0)], &[0, 3]).unwrap(), vec![Elem(0); 4]);
        assert_eq!(code.systematic_encode(&[Elem(1), Elem(2)], &[1, 1]), Err(Error::DuplicatePosition(1)));
        let full = RsCode::full_length(Field::new(2, 2).unwrap(), 4).unwrap();
        let vals = [Elem(3), Elem(1), Elem(0), Elem(2)];
        assert_eq!(full.systematic_encode(&vals, &[0, 1, 2, 3]).unwrap(), vals);
    }

    #[test]
    fn naive_bits_and_consistency() {
        let code = RsCode::full_length(Field::new(2, 3).unwrap(), 2).unwrap();
        let c = code.encode(&[Elem(5), Elem(6)]).unwrap();
        let r = code.naive_recover(&[(0, c[0]), (1, c[1])]).unwrap();
        assert_eq!(r.message, vec![Elem(5), Elem(6)]);
        assert_eq!(r.bits, 6);
        let zero = code.naive_recover(&[(4, Elem(0)), (6, Elem(0))]).unwrap();
        assert_eq!(zero.message, vec![Elem(0); 2]);
        assert_eq!(
            code.naive_recover(&[(0, c[0]), (1, c[1]), (2, Elem((c[2].0 + 1) % 8))]),
            Err(Error::InconsistentSymbols)
        );
    }

    #[test]
    fn dual_code_exhaustive() {
        let code = rs42();
        let dual = code.dual_code_basis();
        assert_eq!(dual.len(), 2);
        assert_eq!(linalg::rank(code.field(), dual.clone()), 2);
        let f = code.field();
        for a in 0..4 {
            for b in 0..4 {
                let c = code.encode(&[Elem(a), Elem(b)]).unwrap();
                for y in &dual {
                    assert_eq!(f.dot(&c, y), Elem::ZERO);
                }
            }
        }
        let full = RsCode::full_length(Field::new(2, 2).unwrap(), 4).unwrap();
        assert!(full.dual_code_basis().is_empty());
    }

    #[test]
    fn mds_every_pair_of_positions() {
        let code = rs42();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let mut seen = std::collections::HashSet::new();
                for a in 0..4 {
                    for b in 0..4 {
                        let c = code.encode(&[Elem(a), Elem(b)]).unwrap();
                        assert!(seen.insert((c[i], c[j])));
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn encode_is_linear_and_recoverable(
            m1 in prop::collection::vec(0u32..16, 4),
            m2 in prop::collection::vec(0u32..16, 4),
            a in 0u32..16,
            start in 0usize..12,
        ) {
            let code = RsCode::full_length(Field::new(4, 2).unwrap(), 4).unwrap();
            let f = code.field();
            let m1: Vec<Elem> = m1.into_iter().map(Elem).collect();
            let m2: Vec<Elem> = m2.into_iter().map(Elem).collect();
            let mix: Vec<Elem> = m1.iter().zip(&m2).map(|(&x, &y)| f.add(f.mul(Elem(a), x), y)).collect();
            let c1 = code.encode(&m1).unwrap();
            let c2 = code.encode(&m2).unwrap();
            let expect: Vec<Elem> = c1.iter().zip(&c2).map(|(&x, &y)| f.add(f.mul(Elem(a), x), y)).collect();
            prop_assert_eq!(code.encode(&mix).unwrap(), expect);
            let picks: Vec<_> = (start..start + 4).map(|j| (j, c1[j])).collect();
            prop_assert_eq!(code.naive_recover(&picks).unwrap().message, m1);
        }
    }
}
