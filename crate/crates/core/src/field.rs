//! Exact base fields: the rationals with arbitrary-precision coefficients and
//! prime fields `F_p` for a configured prime `p`.
//!
//! Rationals are stored in a hybrid representation: an `i128` fast path for the
//! small values that dominate invariant computations, promoting to
//! [`num::BigRational`] whenever a checked operation would overflow. Both forms
//! keep the fraction reduced with a positive denominator, so equality is plain
//! structural comparison.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use thiserror::Error;

/// Errors raised by scalar arithmetic and parsing.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("field contexts differ: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("series orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("{0}! has no inverse in characteristic {1}")]
    NoninvertibleFactorial(usize, u64),
    #[error("cannot reduce to order {requested}: value has order {actual}")]
    ReduceOrder { requested: usize, actual: usize },
    #[error("invalid scalar literal `{0}`")]
    Parse(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// The ground field carried as context by every scalar container.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Field {
    /// Arbitrary-precision rationals.
    Q,
    /// Integers mod a prime.
    Fp(u64),
}

impl Field {
    pub fn characteristic(self) -> u64 {
        match self {
            Field::Q => 0,
            Field::Fp(p) => p,
        }
    }

    /// Parses the textual field header: `Q` or `Fp:<prime>`.
    pub fn parse(s: &str) -> Result<Field, ScalarError> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Q);
        }
        if let Some(p) = s.strip_prefix("Fp:") {
            let p: u64 = p.parse().map_err(|_| ScalarError::Parse(s.to_string()))?;
            if !is_prime(p) {
                return Err(ScalarError::NotPrime(p));
            }
            return Ok(Field::Fp(p));
        }
        Err(ScalarError::Parse(s.to_string()))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Fp(p) => write!(f, "Fp:{p}"),
        }
    }
}

/// Deterministic Miller-Rabin for u64 moduli.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Largest magnitude kept on the `i128` fast path. Chosen so that cross
/// products of two small fractions cannot overflow an `i128`.
const SMALL_LIMIT: i128 = i64::MAX as i128;

/// Reduced rational with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Rat {
    Small { num: i128, den: i128 },
    Big(Box<BigRational>),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rat {
    fn small(num: i128, den: i128) -> Rat {
        debug_assert!(den > 0);
        let g = gcd_u128(num.unsigned_abs(), den as u128) as i128;
        let (num, den) = if g > 1 { (num / g, den / g) } else { (num, den) };
        if num.abs() <= SMALL_LIMIT && den <= SMALL_LIMIT {
            Rat::Small { num, den }
        } else {
            Rat::Big(Box::new(BigRational::new(num.into(), den.into())))
        }
    }

    fn from_big(r: BigRational) -> Rat {
        // Demote when both parts fit, so representations stay canonical.
        if let (Some(n), Some(d)) = (to_i128(r.numer()), to_i128(r.denom())) {
            if n.abs() <= SMALL_LIMIT && d <= SMALL_LIMIT {
                return Rat::Small { num: n, den: d };
            }
        }
        Rat::Big(Box::new(r))
    }

    pub(crate) fn from_i64(n: i64) -> Rat {
        Rat::Small { num: n as i128, den: 1 }
    }

    pub(crate) fn to_big(&self) -> BigRational {
        match self {
            Rat::Small { num, den } => BigRational::new((*num).into(), (*den).into()),
            Rat::Big(r) => (**r).clone(),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        matches!(self, Rat::Small { num: 0, .. })
    }

    pub(crate) fn is_one(&self) -> bool {
        matches!(self, Rat::Small { num: 1, den: 1 })
    }

    pub(crate) fn add(&self, rhs: &Rat) -> Rat {
        if let (Rat::Small { num: a, den: b }, Rat::Small { num: c, den: d }) = (self, rhs) {
            if let Some(r) = small_add(*a, *b, *c, *d) {
                return r;
            }
        }
        Rat::from_big(self.to_big() + rhs.to_big())
    }

    pub(crate) fn sub(&self, rhs: &Rat) -> Rat {
        if let (Rat::Small { num: a, den: b }, Rat::Small { num: c, den: d }) = (self, rhs) {
            if let Some(r) = small_add(*a, *b, -*c, *d) {
                return r;
            }
        }
        Rat::from_big(self.to_big() - rhs.to_big())
    }

    pub(crate) fn mul(&self, rhs: &Rat) -> Rat {
        if let (Rat::Small { num: a, den: b }, Rat::Small { num: c, den: d }) = (self, rhs) {
            // Cross-reduce first to keep intermediates small.
            let g1 = gcd_u128(a.unsigned_abs(), *d as u128) as i128;
            let g2 = gcd_u128(c.unsigned_abs(), *b as u128) as i128;
            let (a, d) = (a / g1, d / g1);
            let (c, b) = (c / g2, b / g2);
            if let (Some(n), Some(dd)) = (a.checked_mul(c), b.checked_mul(d)) {
                return Rat::small(n, dd);
            }
        }
        Rat::from_big(self.to_big() * rhs.to_big())
    }

    pub(crate) fn neg(&self) -> Rat {
        match self {
            Rat::Small { num, den } => Rat::Small { num: -num, den: *den },
            Rat::Big(r) => Rat::from_big(-(**r).clone()),
        }
    }

    pub(crate) fn inv(&self) -> Option<Rat> {
        match self {
            Rat::Small { num: 0, .. } => None,
            Rat::Small { num, den } => {
                let s = num.signum();
                Some(Rat::small(s * den, num.abs()))
            }
            Rat::Big(r) => Some(Rat::from_big(BigRational::new(
                r.denom().clone() * r.numer().signum(),
                r.numer().abs(),
            ))),
        }
    }
}

fn small_add(a: i128, b: i128, c: i128, d: i128) -> Option<Rat> {
    let n = a.checked_mul(d)?.checked_add(c.checked_mul(b)?)?;
    let den = b.checked_mul(d)?;
    Some(Rat::small(n, den))
}

fn to_i128(n: &BigInt) -> Option<i128> {
    use num::ToPrimitive;
    n.to_i128()
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small { num, den: 1 } => write!(f, "{num}"),
            Rat::Small { num, den } => write!(f, "{num}/{den}"),
            Rat::Big(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

/// An exact element of the configured field.
///
/// Values are immutable; arithmetic across different field contexts is an
/// error, never a coercion. The checked entry points return that error, while
/// the `std::ops` impls assume contexts were validated by the container and
/// panic on mismatch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElem(Repr);

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Rat(Rat),
    Mod { value: u64, prime: u64 },
}

impl FieldElem {
    pub fn field(&self) -> Field {
        match &self.0 {
            Repr::Rat(_) => Field::Q,
            Repr::Mod { prime, .. } => Field::Fp(*prime),
        }
    }

    pub fn zero(field: Field) -> FieldElem {
        FieldElem::from_int(0, field)
    }

    pub fn one(field: Field) -> FieldElem {
        FieldElem::from_int(1, field)
    }

    pub fn from_int(n: i64, field: Field) -> FieldElem {
        match field {
            Field::Q => FieldElem(Repr::Rat(Rat::from_i64(n))),
            Field::Fp(p) => {
                let v = n.rem_euclid(p as i64) as u64;
                FieldElem(Repr::Mod { value: v, prime: p })
            }
        }
    }

    /// Rational p/q; errors on a zero denominator or in positive characteristic.
    pub fn from_ratio(num: i64, den: i64, field: Field) -> Result<FieldElem, ScalarError> {
        let n = FieldElem::from_int(num, field);
        let d = FieldElem::from_int(den, field);
        n.checked_mul(&d.inv()?)
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Rat(r) => r.is_zero(),
            Repr::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Rat(r) => r.is_one(),
            Repr::Mod { value, .. } => *value == 1,
        }
    }

    fn mismatch(&self, rhs: &FieldElem) -> Option<ScalarError> {
        let (a, b) = (self.field(), rhs.field());
        (a != b).then_some(ScalarError::FieldMismatch(a, b))
    }

    pub fn checked_add(&self, rhs: &FieldElem) -> Result<FieldElem, ScalarError> {
        if let Some(e) = self.mismatch(rhs) {
            return Err(e);
        }
        Ok(match (&self.0, &rhs.0) {
            (Repr::Rat(a), Repr::Rat(b)) => FieldElem(Repr::Rat(a.add(b))),
            (Repr::Mod { value: a, prime }, Repr::Mod { value: b, .. }) => FieldElem(Repr::Mod {
                value: (a + b) % prime,
                prime: *prime,
            }),
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, rhs: &FieldElem) -> Result<FieldElem, ScalarError> {
        if let Some(e) = self.mismatch(rhs) {
            return Err(e);
        }
        Ok(match (&self.0, &rhs.0) {
            (Repr::Rat(a), Repr::Rat(b)) => FieldElem(Repr::Rat(a.sub(b))),
            (Repr::Mod { value: a, prime }, Repr::Mod { value: b, .. }) => FieldElem(Repr::Mod {
                value: (a + prime - b) % prime,
                prime: *prime,
            }),
            _ => unreachable!(),
        })
    }

    pub fn checked_mul(&self, rhs: &FieldElem) -> Result<FieldElem, ScalarError> {
        if let Some(e) = self.mismatch(rhs) {
            return Err(e);
        }
        Ok(match (&self.0, &rhs.0) {
            (Repr::Rat(a), Repr::Rat(b)) => FieldElem(Repr::Rat(a.mul(b))),
            (Repr::Mod { value: a, prime }, Repr::Mod { value: b, .. }) => FieldElem(Repr::Mod {
                value: mul_mod(*a, *b, *prime),
                prime: *prime,
            }),
            _ => unreachable!(),
        })
    }

    pub fn neg(&self) -> FieldElem {
        match &self.0 {
            Repr::Rat(r) => FieldElem(Repr::Rat(r.neg())),
            Repr::Mod { value, prime } => FieldElem(Repr::Mod {
                value: if *value == 0 { 0 } else { prime - value },
                prime: *prime,
            }),
        }
    }

    /// Multiplicative inverse; zero is rejected as a non-unit.
    pub fn inv(&self) -> Result<FieldElem, ScalarError> {
        match &self.0 {
            Repr::Rat(r) => r
                .inv()
                .map(|r| FieldElem(Repr::Rat(r)))
                .ok_or_else(|| ScalarError::NotAUnit(self.to_string())),
            Repr::Mod { value, prime } => {
                if *value == 0 {
                    return Err(ScalarError::NotAUnit(self.to_string()));
                }
                Ok(FieldElem(Repr::Mod {
                    value: pow_mod(*value, prime - 2, *prime),
                    prime: *prime,
                }))
            }
        }
    }

    pub fn pow(&self, exp: i64) -> Result<FieldElem, ScalarError> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut acc = FieldElem::one(self.field());
        for _ in 0..exp.unsigned_abs() {
            acc = acc.checked_mul(&base)?;
        }
        Ok(acc)
    }

    /// Parses a field-element literal: `p/q` or `p` over Q, an integer mod p.
    pub fn parse(s: &str, field: Field) -> Result<FieldElem, ScalarError> {
        let s = s.trim();
        let bad = || ScalarError::Parse(s.to_string());
        if let Some((n, d)) = s.split_once('/') {
            match field {
                Field::Q => {
                    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                    if d.is_zero() {
                        return Err(ScalarError::NotAUnit("0".into()));
                    }
                    Ok(FieldElem(Repr::Rat(Rat::from_big(BigRational::new(n, d)))))
                }
                Field::Fp(_) => {
                    let n: i64 = n.trim().parse().map_err(|_| bad())?;
                    let d: i64 = d.trim().parse().map_err(|_| bad())?;
                    FieldElem::from_ratio(n, d, field)
                }
            }
        } else {
            match field {
                Field::Q => {
                    let n: BigInt = s.parse().map_err(|_| bad())?;
                    Ok(FieldElem(Repr::Rat(Rat::from_big(BigRational::from(n)))))
                }
                Field::Fp(p) => {
                    let n: i128 = s.parse().map_err(|_| bad())?;
                    let v = n.rem_euclid(p as i128) as u64;
                    Ok(FieldElem(Repr::Mod { value: v, prime: p }))
                }
            }
        }
    }

    /// Rational access for interop in tests and oracles.
    pub fn to_rational(&self) -> Option<BigRational> {
        match &self.0 {
            Repr::Rat(r) => Some(r.to_big()),
            Repr::Mod { .. } => None,
        }
    }

    pub fn residue(&self) -> Option<u64> {
        match &self.0 {
            Repr::Rat(_) => None,
            Repr::Mod { value, .. } => Some(*value),
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rat(r) => write!(f, "{r}"),
            Repr::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

macro_rules! ref_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait for &FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.$checked(rhs).expect("field context mismatch")
            }
        }
    };
}
ref_binop!(Add, add, checked_add);
ref_binop!(Sub, sub, checked_sub);
ref_binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> FieldElem {
        FieldElem::from_ratio(n, d, Field::Q).unwrap()
    }

    #[test]
    fn rational_basics() {
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(1, -2), q(-1, 2));
        assert_eq!((&q(1, 2) + &q(1, 3)), q(5, 6));
        assert_eq!((&q(1, 2) * &q(2, 3)), q(1, 3));
        assert_eq!(q(3, 7).inv().unwrap(), q(7, 3));
        assert!(FieldElem::zero(Field::Q).inv().is_err());
    }

    #[test]
    fn prime_field_basics() {
        let f = Field::Fp(7);
        let a = FieldElem::from_int(5, f);
        let b = FieldElem::from_int(4, f);
        assert_eq!(&a + &b, FieldElem::from_int(2, f));
        assert_eq!(&a * &b, FieldElem::from_int(6, f));
        assert_eq!(a.inv().unwrap(), FieldElem::from_int(3, f));
        assert_eq!(FieldElem::from_int(-1, f), FieldElem::from_int(6, f));
    }

    #[test]
    fn mixed_context_is_an_error() {
        let a = FieldElem::one(Field::Q);
        let b = FieldElem::one(Field::Fp(5));
        assert!(matches!(
            a.checked_add(&b),
            Err(ScalarError::FieldMismatch(Field::Q, Field::Fp(5)))
        ));
    }

    #[test]
    fn field_parsing() {
        assert_eq!(Field::parse("Q").unwrap(), Field::Q);
        assert_eq!(Field::parse("Fp:101").unwrap(), Field::Fp(101));
        assert!(matches!(Field::parse("Fp:91"), Err(ScalarError::NotPrime(91))));
        assert_eq!(FieldElem::parse("-3/6", Field::Q).unwrap(), q(-1, 2));
        assert_eq!(
            FieldElem::parse("10", Field::Fp(7)).unwrap(),
            FieldElem::from_int(3, Field::Fp(7))
        );
    }

    #[test]
    fn promotion_round_trips() {
        // 2^80 does not fit the small path squared.
        let big = FieldElem::parse("1208925819614629174706176", Field::Q).unwrap();
        let sq = &big * &big;
        let back = &sq * &big.inv().unwrap();
        assert_eq!(back, big);
        assert!(big.to_rational().is_some());
    }

    proptest! {
        #[test]
        fn hybrid_matches_bigrational(a in -1000i64..1000, b in 1i64..1000,
                                      c in -1000i64..1000, d in 1i64..1000) {
            let x = q(a, b);
            let y = q(c, d);
            let ops: [(FieldElem, BigRational); 3] = [
                (&x + &y, x.to_rational().unwrap() + y.to_rational().unwrap()),
                (&x - &y, x.to_rational().unwrap() - y.to_rational().unwrap()),
                (&x * &y, x.to_rational().unwrap() * y.to_rational().unwrap()),
            ];
            for (got, want) in ops {
                prop_assert_eq!(got.to_rational().unwrap(), want);
            }
        }

        #[test]
        fn fp_field_axioms(a in 0u64..10007, b in 0u64..10007, c in 0u64..10007) {
            let f = Field::Fp(10007);
            let x = FieldElem::from_int(a as i64, f);
            let y = FieldElem::from_int(b as i64, f);
            let z = FieldElem::from_int(c as i64, f);
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            if !x.is_zero() {
                prop_assert!((&x * &x.inv().unwrap()).is_one());
            }
        }
    }
}
