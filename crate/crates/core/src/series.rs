//! Truncated Laurent series with explicit absolute precision.
//!
//! A series stores the coefficients of `t^lowest, ..., t^(precision-1)`;
//! everything from `t^precision` on is unknown. Arithmetic propagates the
//! precision so that no coefficient is ever reported beyond what is known.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, PartialEq)]
pub struct LaurentSeries<K: Field> {
    field: K,
    lowest: i64,
    coeffs: Vec<K::Elem>,
    precision: i64,
}

impl<K: Field> fmt::Debug for LaurentSeries<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = &self.field;
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !k.is_zero(c))
            .map(|(i, c)| format!("{}*t^{}", k.format_elem(c), self.lowest + i as i64))
            .collect();
        write!(f, "{} + O(t^{})", if terms.is_empty() { "0".into() } else { terms.join(" + ") }, self.precision)
    }
}

impl<K: Field> LaurentSeries<K> {
    /// Series with coefficients starting at `t^lowest`, known up to `t^(precision-1)`.
    pub fn new(field: &K, lowest: i64, coeffs: Vec<K::Elem>, precision: i64) -> Self {
        let mut coeffs = coeffs;
        let known = (precision - lowest).max(0) as usize;
        coeffs.truncate(known);
        coeffs.resize(known, field.zero());
        let mut s = LaurentSeries { field: field.clone(), lowest: lowest.min(precision), coeffs, precision };
        s.normalize();
        s
    }

    pub fn zero(field: &K, precision: i64) -> Self {
        LaurentSeries { field: field.clone(), lowest: precision, coeffs: Vec::new(), precision }
    }

    /// Exact constant, known to the given precision.
    pub fn constant(field: &K, c: K::Elem, precision: i64) -> Self {
        Self::new(field, 0, vec![c], precision)
    }

    /// The variable `t`.
    pub fn t(field: &K, precision: i64) -> Self {
        Self::new(field, 1, vec![field.one()], precision)
    }

    fn normalize(&mut self) {
        let k = &self.field;
        let lead = self.coeffs.iter().position(|c| !k.is_zero(c)).unwrap_or(self.coeffs.len());
        self.coeffs.drain(..lead);
        self.lowest += lead as i64;
    }

    pub fn field(&self) -> &K {
        &self.field
    }
    pub fn precision(&self) -> i64 {
        self.precision
    }

    /// Valuation, `None` when the series vanishes to its precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.lowest)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^n`.
    pub fn coeff(&self, n: i64) -> Result<K::Elem> {
        if n >= self.precision {
            return Err(Error::PrecisionExhausted { requested: n, precision: self.precision });
        }
        if n < self.lowest {
            return Ok(self.field.zero());
        }
        Ok(self.coeffs[(n - self.lowest) as usize].clone())
    }

    /// Coefficients of `t^-1, t^-2, ..., t^-m` (the principal part up to order `m`).
    pub fn principal_part(&self, m: usize) -> Result<Vec<K::Elem>> {
        (1..=m as i64).map(|j| self.coeff(-j)).collect()
    }

    pub fn with_precision(&self, precision: i64) -> Self {
        let p = precision.min(self.precision);
        Self::new(&self.field, self.lowest, self.coeffs.clone(), p)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let k = &self.field;
        let prec = self.precision.min(other.precision);
        let low = self.lowest.min(other.lowest).min(prec);
        let coeffs = (low..prec)
            .map(|n| {
                let a = self.coeff(n).expect("below precision");
                let b = other.coeff(n).expect("below precision");
                if negate {
                    k.sub(&a, &b)
                } else {
                    k.add(&a, &b)
                }
            })
            .collect();
        Self::new(k, low, coeffs, prec)
    }

    pub fn scale(&self, c: &K::Elem) -> Self {
        let k = &self.field;
        Self::new(k, self.lowest, self.coeffs.iter().map(|a| k.mul(a, c)).collect(), self.precision)
    }

    /// Multiplication by `t^n`.
    pub fn shift(&self, n: i64) -> Self {
        Self::new(&self.field, self.lowest + n, self.coeffs.clone(), self.precision + n)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let k = &self.field;
        let (va, vb) = (self.lowest, other.lowest);
        let prec = (self.precision + vb).min(other.precision + va);
        if self.is_zero() || other.is_zero() {
            return Self::zero(k, prec);
        }
        let low = va + vb;
        let n = (prec - low).max(0) as usize;
        let mut out = vec![k.zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if k.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                out[i + j] = k.mul_add(&out[i + j], a, b);
            }
        }
        Self::new(k, low, out, prec)
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Self::constant(&self.field, self.field.one(), self.precision - self.lowest);
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse. Fails when the series vanishes to its precision.
    pub fn inv(&self) -> Result<Self> {
        let k = &self.field;
        let v = self.valuation().ok_or(Error::PrecisionExhausted { requested: self.lowest, precision: self.precision })?;
        let rel = (self.precision - v) as usize;
        let a0_inv = k.inv(&self.coeffs[0]).expect("nonzero leading coefficient");
        let mut b = Vec::with_capacity(rel);
        b.push(a0_inv.clone());
        for n in 1..rel {
            let mut s = k.zero();
            for i in 1..=n.min(self.coeffs.len() - 1) {
                s = k.mul_add(&s, &self.coeffs[i], &b[n - i]);
            }
            b.push(k.neg(&k.mul(&s, &a0_inv)));
        }
        Ok(Self::new(k, -v, b, self.precision - 2 * v))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// `self(inner(t))` for `self` a power series and `inner` of positive valuation.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let k = &self.field;
        if self.lowest < 0 {
            return Err(Error::Precondition("outer series has a pole".into()));
        }
        let vi = match inner.valuation() {
            Some(v) if v >= 1 => v,
            Some(_) => return Err(Error::Precondition("inner series must have positive valuation".into())),
            None => inner.precision.max(1),
        };
        // the unknown tail O(inner^P) starts at order P * vi; inner^n is known to its own precision
        let prec = (self.precision * vi).min(inner.precision);
        let mut acc = Self::zero(k, prec);
        let mut power = Self::constant(k, k.one(), prec);
        for n in 0..self.precision {
            if n * vi >= prec {
                break;
            }
            let c = self.coeff(n)?;
            if !k.is_zero(&c) {
                acc = acc.add(&power.scale(&c).with_precision(prec));
            }
            power = power.mul(inner).with_precision(prec);
        }
        Ok(acc.with_precision(prec))
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let k = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| k.mul(c, &k.from_i64(self.lowest + i as i64)))
            .collect();
        Self::new(k, self.lowest - 1, coeffs, self.precision - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use proptest::prelude::*;

    fn k() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    #[test]
    fn precision_is_enforced() {
        let s = LaurentSeries::new(&k(), -2, vec![1, 2, 3], 5);
        assert_eq!(s.coeff(-2).unwrap(), 1);
        assert_eq!(s.coeff(4).unwrap(), 0);
        assert!(matches!(s.coeff(5), Err(Error::PrecisionExhausted { requested: 5, precision: 5 })));
    }

    #[test]
    fn geometric_series_inverse() {
        let k = k();
        // 1/(1 - t) = 1 + t + t^2 + ...
        let s = LaurentSeries::new(&k, 0, vec![1, k.from_i64(-1)], 10);
        let inv = s.inv().unwrap();
        assert_eq!(inv.precision(), 10);
        for n in 0..10 {
            assert_eq!(inv.coeff(n).unwrap(), 1);
        }
    }

    #[test]
    fn pole_inverse_precision() {
        let k = k();
        // t^2 (1 + t) known to O(t^8): inverse t^-2 (1 - t + ...) known to O(t^4)
        let s = LaurentSeries::new(&k, 2, vec![1, 1], 8);
        let inv = s.inv().unwrap();
        assert_eq!(inv.valuation(), Some(-2));
        assert_eq!(inv.precision(), 4);
        assert_eq!(inv.principal_part(2).unwrap(), vec![k.from_i64(-1), 1]);
    }

    #[test]
    fn composition_with_t_squared() {
        let k = k();
        let s = LaurentSeries::new(&k, 0, vec![1, 2, 3], 6);
        let t2 = LaurentSeries::new(&k, 2, vec![1], 20);
        let c = s.compose(&t2).unwrap();
        assert_eq!(c.coeff(0).unwrap(), 1);
        assert_eq!(c.coeff(2).unwrap(), 2);
        assert_eq!(c.coeff(4).unwrap(), 3);
        assert_eq!(c.coeff(1).unwrap(), 0);
    }

    #[test]
    fn derivative_of_pole() {
        let k = k();
        let s = LaurentSeries::new(&k, -1, vec![1, 0, 1], 4);
        let d = s.derivative();
        assert_eq!(d.coeff(-2).unwrap(), k.from_i64(-1));
        assert_eq!(d.coeff(0).unwrap(), 1);
        // residue of a derivative vanishes
        assert_eq!(d.coeff(-1).unwrap(), 0);
    }

    fn series() -> impl Strategy<Value = (i64, Vec<u64>)> {
        (-3i64..3, prop::collection::vec(0u64..101, 1..8))
    }

    proptest! {
        #[test]
        fn inverse_roundtrip((low, cs) in series()) {
            let k = k();
            let prec = low + cs.len() as i64;
            let s = LaurentSeries::new(&k, low, cs, prec);
            prop_assume!(!s.is_zero());
            let prod = s.mul(&s.inv().unwrap());
            let one = LaurentSeries::constant(&k, 1, prod.precision());
            prop_assert!(prod.sub(&one).is_zero());
        }

        #[test]
        fn multiplication_is_commutative_and_distributive((la, a) in series(), (lb, b) in series(), (lc, c) in series()) {
            let k = k();
            let sa = LaurentSeries::new(&k, la, a.clone(), la + a.len() as i64);
            let sb = LaurentSeries::new(&k, lb, b.clone(), lb + b.len() as i64);
            let sc = LaurentSeries::new(&k, lc, c.clone(), lc + c.len() as i64);
            prop_assert_eq!(sa.mul(&sb), sb.mul(&sa));
            let lhs = sa.mul(&sb.add(&sc));
            let rhs = sa.mul(&sb).add(&sa.mul(&sc));
            let p = lhs.precision().min(rhs.precision());
            prop_assert!(lhs.with_precision(p).sub(&rhs.with_precision(p)).is_zero());
        }
    }
}
