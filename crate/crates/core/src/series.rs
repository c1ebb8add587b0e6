//! The truncated polynomial ring `R_n = K[eps]/<eps^{n+1}>`.
//!
//! Every invariant in this crate lives in some `R_n`. Elements carry exactly
//! `n + 1` coefficients; truncation is definitional, so arithmetic never
//! inspects anything past the configured order.

use std::fmt;

use crate::field::{Field, FieldElem, ScalarError};

/// Ring context: the ground field together with the truncation order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SeriesRing {
    pub field: Field,
    pub order: usize,
}

impl SeriesRing {
    pub fn new(field: Field, order: usize) -> SeriesRing {
        SeriesRing { field, order }
    }
}

impl fmt::Display for SeriesRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[eps]/<eps^{}>", self.field, self.order + 1)
    }
}

/// Element of `R_n`, `coeffs[k]` being the coefficient of `eps^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedScalar {
    coeffs: Vec<FieldElem>,
}

impl TruncatedScalar {
    pub fn zero(ring: SeriesRing) -> TruncatedScalar {
        TruncatedScalar {
            coeffs: vec![FieldElem::zero(ring.field); ring.order + 1],
        }
    }

    pub fn one(ring: SeriesRing) -> TruncatedScalar {
        TruncatedScalar::constant(FieldElem::one(ring.field), ring.order)
    }

    /// Embeds a field element as the constant term.
    pub fn constant(c: FieldElem, order: usize) -> TruncatedScalar {
        let field = c.field();
        let mut coeffs = vec![FieldElem::zero(field); order + 1];
        coeffs[0] = c;
        TruncatedScalar { coeffs }
    }

    /// Builds from an explicit coefficient vector `[c0, ..., cn]`.
    pub fn from_coeffs(coeffs: Vec<FieldElem>) -> Result<TruncatedScalar, ScalarError> {
        let first = coeffs
            .first()
            .ok_or_else(|| ScalarError::Parse("empty coefficient list".into()))?
            .field();
        for c in &coeffs {
            if c.field() != first {
                return Err(ScalarError::FieldMismatch(first, c.field()));
            }
        }
        Ok(TruncatedScalar { coeffs })
    }

    pub fn ring(&self) -> SeriesRing {
        SeriesRing {
            field: self.coeffs[0].field(),
            order: self.coeffs.len() - 1,
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn field(&self) -> Field {
        self.coeffs[0].field()
    }

    pub fn coeff(&self, k: usize) -> &FieldElem {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElem::is_zero)
    }

    /// A unit of the local ring `R_n` is anything with invertible constant term.
    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    fn mismatch(&self, rhs: &TruncatedScalar) -> Option<ScalarError> {
        if self.order() != rhs.order() {
            return Some(ScalarError::OrderMismatch(self.order(), rhs.order()));
        }
        if self.field() != rhs.field() {
            return Some(ScalarError::FieldMismatch(self.field(), rhs.field()));
        }
        None
    }

    pub fn checked_add(&self, rhs: &TruncatedScalar) -> Result<TruncatedScalar, ScalarError> {
        if let Some(e) = self.mismatch(rhs) {
            return Err(e);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(TruncatedScalar { coeffs })
    }

    pub fn checked_sub(&self, rhs: &TruncatedScalar) -> Result<TruncatedScalar, ScalarError> {
        if let Some(e) = self.mismatch(rhs) {
            return Err(e);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(TruncatedScalar { coeffs })
    }

    /// Cauchy product truncated at the ring order.
    pub fn checked_mul(&self, rhs: &TruncatedScalar) -> Result<TruncatedScalar, ScalarError> {
        if let Some(e) = self.mismatch(rhs) {
            return Err(e);
        }
        let mut out = TruncatedScalar::zero(self.ring());
        out.mul_acc(self, rhs);
        Ok(out)
    }

    /// `self += a * b`; the fused kernel every matrix product runs on.
    pub fn mul_acc(&mut self, a: &TruncatedScalar, b: &TruncatedScalar) {
        let n = self.coeffs.len();
        debug_assert_eq!(a.coeffs.len(), n);
        debug_assert_eq!(b.coeffs.len(), n);
        for (i, ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().take(n - i).enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let c = &self.coeffs[i + j];
                self.coeffs[i + j] = c + &(ai * bj);
            }
        }
    }

    pub fn neg(&self) -> TruncatedScalar {
        TruncatedScalar {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> TruncatedScalar {
        TruncatedScalar {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Inverse in the local ring; errors when the constant term vanishes,
    /// which signals a degenerate structure map downstream.
    pub fn inverse(&self) -> Result<TruncatedScalar, ScalarError> {
        if !self.is_unit() {
            return Err(ScalarError::NotAUnit(self.to_string()));
        }
        let n = self.order();
        let c0_inv = self.coeffs[0].inv()?;
        let mut inv = vec![FieldElem::zero(self.field()); n + 1];
        inv[0] = c0_inv.clone();
        // b_k = -c0^{-1} * sum_{i=1..k} a_i b_{k-i}
        for k in 1..=n {
            let mut acc = FieldElem::zero(self.field());
            for i in 1..=k {
                if self.coeffs[i].is_zero() || inv[k - i].is_zero() {
                    continue;
                }
                acc = &acc + &(&self.coeffs[i] * &inv[k - i]);
            }
            inv[k] = -&(&acc * &c0_inv);
        }
        Ok(TruncatedScalar { coeffs: inv })
    }

    pub fn pow(&self, exp: i64) -> Result<TruncatedScalar, ScalarError> {
        let base = if exp < 0 { self.inverse()? } else { self.clone() };
        let mut acc = TruncatedScalar::one(self.ring());
        for _ in 0..exp.unsigned_abs() {
            acc = acc.checked_mul(&base)?;
        }
        Ok(acc)
    }

    /// `exp(c * eps)` truncated: `sum_{k<=n} c^k/k! eps^k`.
    ///
    /// In characteristic p this only exists while the factorials are units,
    /// i.e. for order < p.
    pub fn truncated_exp(c: &FieldElem, order: usize) -> Result<TruncatedScalar, ScalarError> {
        let field = c.field();
        if let Field::Fp(p) = field {
            if order as u64 >= p {
                return Err(ScalarError::NoninvertibleFactorial(p as usize, p));
            }
        }
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = FieldElem::one(field);
        coeffs.push(term.clone());
        for k in 1..=order {
            let k_inv = FieldElem::from_int(k as i64, field).inv()?;
            term = &(&term * c) * &k_inv;
            coeffs.push(term.clone());
        }
        Ok(TruncatedScalar { coeffs })
    }

    /// Reduction mod `<eps^{k+1}>`: keeps the first `k + 1` coefficients.
    pub fn reduce_order(&self, k: usize) -> Result<TruncatedScalar, ScalarError> {
        if k > self.order() {
            return Err(ScalarError::ReduceOrder {
                requested: k,
                actual: self.order(),
            });
        }
        Ok(TruncatedScalar {
            coeffs: self.coeffs[..=k].to_vec(),
        })
    }

    /// Parses `[c0, c1, ..., cn]` (or a bare field element, read as constant
    /// when a ring order is supplied).
    pub fn parse(s: &str, field: Field, order: Option<usize>) -> Result<TruncatedScalar, ScalarError> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let coeffs = inner
                .split(',')
                .map(|part| FieldElem::parse(part, field))
                .collect::<Result<Vec<_>, _>>()?;
            let ts = TruncatedScalar::from_coeffs(coeffs)?;
            if let Some(n) = order {
                if ts.order() != n {
                    return Err(ScalarError::OrderMismatch(ts.order(), n));
                }
            }
            Ok(ts)
        } else {
            let c = FieldElem::parse(s, field)?;
            let n = order.ok_or_else(|| ScalarError::Parse(s.to_string()))?;
            Ok(TruncatedScalar::constant(c, n))
        }
    }
}

impl fmt::Display for TruncatedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

macro_rules! ref_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait for &TruncatedScalar {
            type Output = TruncatedScalar;
            fn $method(self, rhs: &TruncatedScalar) -> TruncatedScalar {
                self.$checked(rhs).expect("series ring mismatch")
            }
        }
    };
}
ref_binop!(Add, add, checked_add);
ref_binop!(Sub, sub, checked_sub);
ref_binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &TruncatedScalar {
    type Output = TruncatedScalar;
    fn neg(self) -> TruncatedScalar {
        TruncatedScalar::neg(self)
    }
}
