//! Scalar fields: prime fields GF(p), the four-element field GF(4) and the
//! rationals. Every element is stored in canonical form so that structural
//! equality coincides with field equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest supported prime modulus; products of residues must fit in `u64`.
pub const MAX_PRIME: u64 = u32::MAX as u64;

/// A verified prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || p > MAX_PRIME || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The scalar domain K.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Prime(Prime),
    /// GF(2)[x]/(x²+x+1), codes 0,1,2,3 meaning 0, 1, ω, ω+1.
    Gf4,
    Rational,
}

// ω·ω = ω+1, ω·(ω+1) = 1, (ω+1)·(ω+1) = ω.
const GF4_MUL: [[u8; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        Prime::new(p).map(FieldSpec::Prime)
    }

    pub fn gf2() -> Self {
        FieldSpec::Prime(Prime(2))
    }

    pub fn gf3() -> Self {
        FieldSpec::Prime(Prime(3))
    }

    pub fn gf5() -> Self {
        FieldSpec::Prime(Prime(5))
    }

    /// Number of elements, or `None` for the rationals.
    pub fn order(self) -> Option<u64> {
        match self {
            FieldSpec::Prime(p) => Some(p.0),
            FieldSpec::Gf4 => Some(4),
            FieldSpec::Rational => None,
        }
    }

    pub fn is_finite(self) -> bool {
        self.order().is_some()
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::Prime(p) => p.0,
            FieldSpec::Gf4 => 2,
            FieldSpec::Rational => 0,
        }
    }

    pub fn zero(self) -> FieldElement {
        match self {
            FieldSpec::Rational => FieldElement(Repr::Rational(BigRational::zero())),
            _ => FieldElement(Repr::Finite { spec: self, code: 0 }),
        }
    }

    pub fn one(self) -> FieldElement {
        match self {
            FieldSpec::Rational => FieldElement(Repr::Rational(BigRational::one())),
            _ => FieldElement(Repr::Finite { spec: self, code: 1 }),
        }
    }

    /// Image of an integer under the canonical ring map Z → K.
    pub fn from_i64(self, v: i64) -> FieldElement {
        match self {
            FieldSpec::Prime(p) => {
                let code = v.rem_euclid(p.0 as i64) as u64;
                FieldElement(Repr::Finite { spec: self, code })
            }
            FieldSpec::Gf4 => {
                let code = v.rem_euclid(2) as u64;
                FieldElement(Repr::Finite { spec: self, code })
            }
            FieldSpec::Rational => FieldElement(Repr::Rational(BigRational::from_integer(v.into()))),
        }
    }

    /// Element with the given canonical encoding (residue or GF(4) code).
    pub fn element(self, code: u64) -> Result<FieldElement> {
        match self.order() {
            Some(q) if code < q => Ok(FieldElement(Repr::Finite { spec: self, code })),
            Some(_) => Err(Error::BadEncoding(self, code)),
            None => Err(Error::InfiniteField("element codes")),
        }
    }

    pub fn rational(self, num: i64, den: i64) -> Result<FieldElement> {
        if self != FieldSpec::Rational {
            return Err(Error::FieldMismatch(self, FieldSpec::Rational));
        }
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElement(Repr::Rational(BigRational::new(num.into(), den.into()))))
    }

    /// All elements in ascending encoding order, zero first.
    pub fn elements(self) -> Result<Vec<FieldElement>> {
        let q = self.order().ok_or(Error::InfiniteField("enumeration"))?;
        Ok((0..q).map(|code| FieldElement(Repr::Finite { spec: self, code })).collect())
    }

    /// Parses an element literal: an integer for prime fields (reduced),
    /// a code 0..3 for GF(4), `a` or `a/b` for the rationals.
    pub fn parse_element(self, s: &str) -> Result<FieldElement> {
        let bad = || Error::Parse(format!("bad {} element `{}`", self, s));
        match self {
            FieldSpec::Prime(p) => {
                let v: BigInt = s.parse().map_err(|_| bad())?;
                let r = ((v % BigInt::from(p.0)) + BigInt::from(p.0)) % BigInt::from(p.0);
                Ok(FieldElement(Repr::Finite { spec: self, code: r.to_u64().ok_or_else(bad)? }))
            }
            FieldSpec::Gf4 => {
                let code: u64 = s.parse().map_err(|_| bad())?;
                self.element(code).map_err(|_| bad())
            }
            FieldSpec::Rational => {
                let (num, den) = match s.split_once('/') {
                    Some((a, b)) => (a, b),
                    None => (s, "1"),
                };
                let num: BigInt = num.parse().map_err(|_| bad())?;
                let den: BigInt = den.parse().map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(bad());
                }
                Ok(FieldElement(Repr::Rational(BigRational::new(num, den))))
            }
        }
    }

    /// Addition/multiplication tables on codes, for fast exhaustive scans.
    pub fn tables(self) -> Result<FiniteTables> {
        let q = self.order().ok_or(Error::InfiniteField("code tables"))?;
        if q > 256 {
            return Err(Error::Infeasible(format!("code tables for {} elements", q)));
        }
        let elems = self.elements()?;
        let q = q as usize;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                add[i * q + j] = (a + b).code().unwrap() as u8;
                mul[i * q + j] = (a * b).code().unwrap() as u8;
            }
        }
        Ok(FiniteTables { q, add, mul })
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) if matches!(p.0, 2 | 3 | 5) => write!(f, "gf{}", p.0),
            FieldSpec::Prime(p) => write!(f, "gfp:{}", p.0),
            FieldSpec::Gf4 => write!(f, "gf4"),
            FieldSpec::Rational => write!(f, "q"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gf2" => Ok(FieldSpec::gf2()),
            "gf3" => Ok(FieldSpec::gf3()),
            "gf4" => Ok(FieldSpec::Gf4),
            "gf5" => Ok(FieldSpec::gf5()),
            "q" => Ok(FieldSpec::Rational),
            _ => match s.strip_prefix("gfp:") {
                Some(p) => {
                    let p: u64 = p.parse().map_err(|_| Error::UnknownField(s.to_string()))?;
                    FieldSpec::prime(p)
                }
                None => Err(Error::UnknownField(s.to_string())),
            },
        }
    }
}

/// Add/mul lookup tables over the codes `0..q` of a small finite field.
#[derive(Clone, Debug)]
pub struct FiniteTables {
    pub q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
}

impl FiniteTables {
    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Finite { spec: FieldSpec, code: u64 },
    Rational(BigRational),
}

/// An element of a [`FieldSpec`] in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement(Repr);

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        match &self.0 {
            Repr::Finite { spec, .. } => *spec,
            Repr::Rational(_) => FieldSpec::Rational,
        }
    }

    /// Canonical encoding for finite fields.
    pub fn code(&self) -> Option<u64> {
        match &self.0 {
            Repr::Finite { code, .. } => Some(*code),
            Repr::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rational(r) => Some(r),
            Repr::Finite { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Finite { code, .. } => *code == 0,
            Repr::Rational(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Finite { code, .. } => *code == 1,
            Repr::Rational(r) => r.is_one(),
        }
    }

    /// Rebuilds the element from its raw parts.
    pub fn canonical(&self) -> FieldElement {
        match &self.0 {
            Repr::Finite { spec, code } => FieldElement(Repr::Finite { spec: *spec, code: code % spec.order().unwrap() }),
            Repr::Rational(r) => FieldElement(Repr::Rational(BigRational::new(r.numer().clone(), r.denom().clone()))),
        }
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.spec() == other.spec() {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.spec(), other.spec()))
        }
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Finite { spec, code: a }, Repr::Finite { code: b, .. }) => {
                let code = match spec {
                    FieldSpec::Prime(p) => (a + b) % p.0,
                    _ => a ^ b,
                };
                FieldElement(Repr::Finite { spec: *spec, code })
            }
            (Repr::Rational(a), Repr::Rational(b)) => FieldElement(Repr::Rational(a + b)),
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Finite { spec, code: a }, Repr::Finite { code: b, .. }) => {
                let code = match spec {
                    FieldSpec::Prime(p) => (a * b) % p.0,
                    _ => GF4_MUL[*a as usize][*b as usize] as u64,
                };
                FieldElement(Repr::Finite { spec: *spec, code })
            }
            (Repr::Rational(a), Repr::Rational(b)) => FieldElement(Repr::Rational(a * b)),
            _ => unreachable!(),
        })
    }

    pub fn try_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Finite { spec: FieldSpec::Prime(p), code } => {
                // Fermat: a^(p-2)
                FieldElement(Repr::Finite { spec: FieldSpec::Prime(*p), code: pow_mod(*code, p.0 - 2, p.0) })
            }
            Repr::Finite { spec, code } => {
                let code = (1..4).find(|&b| GF4_MUL[*code as usize][b] == 1).unwrap() as u64;
                FieldElement(Repr::Finite { spec: *spec, code })
            }
            Repr::Rational(r) => FieldElement(Repr::Rational(r.recip())),
        })
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.spec().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        match &self.0 {
            Repr::Finite { spec: FieldSpec::Prime(p), code } => {
                FieldElement(Repr::Finite { spec: FieldSpec::Prime(*p), code: (p.0 - code) % p.0 })
            }
            Repr::Finite { .. } => self.clone(),
            Repr::Rational(r) => FieldElement(Repr::Rational(-r)),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        -&self
    }
}

// Operator forms panic on mismatched fields; callers that cannot rule a
// mismatch out use the `try_*` methods.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field mismatch")
            }
        }

        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$checked(&rhs).expect("field mismatch")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Finite { code, .. } => write!(f, "{}", code),
            Repr::Rational(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Repr::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite fields order by code; rationals by value. Elements of different
/// fields order by field.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (&self.0, &other.0) {
            (Repr::Finite { spec: s1, code: a }, Repr::Finite { spec: s2, code: b }) => s1.cmp(s2).then(a.cmp(b)),
            (Repr::Rational(a), Repr::Rational(b)) => a.cmp(b),
            _ => self.spec().cmp(&other.spec()),
        }
    }
}

impl FieldElement {
    /// Absolute height max(|num|, den) of a rational, 0 for finite fields.
    pub fn height(&self) -> BigInt {
        match &self.0 {
            Repr::Rational(r) => r.numer().abs().max(r.denom().clone()),
            Repr::Finite { .. } => BigInt::zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_fields() -> Vec<FieldSpec> {
        vec![FieldSpec::gf2(), FieldSpec::gf3(), FieldSpec::Gf4, FieldSpec::gf5()]
    }

    #[test]
    fn gf3_mul() {
        let k = FieldSpec::gf3();
        assert_eq!(&k.from_i64(2) * &k.from_i64(2), k.one());
    }

    #[test]
    fn rational_add() {
        let q = FieldSpec::Rational;
        let s = &q.rational(1, 2).unwrap() + &q.rational(1, 3).unwrap();
        assert_eq!(s, q.rational(5, 6).unwrap());
        assert_eq!(s.to_string(), "5/6");
    }

    #[test]
    fn gf4_omega_squared() {
        // x·x = x² ≡ x + 1 (mod x²+x+1)
        let k = FieldSpec::Gf4;
        let w = k.element(2).unwrap();
        assert_eq!(&w * &w, k.element(3).unwrap());
    }

    #[test]
    fn inverses() {
        let k = FieldSpec::gf3();
        assert_eq!(k.from_i64(2).inv().unwrap(), k.from_i64(2));
        let q = FieldSpec::Rational;
        assert_eq!(q.rational(-2, 3).unwrap().inv().unwrap(), q.rational(-3, 2).unwrap());
        let k = FieldSpec::gf5();
        assert_eq!(k.from_i64(3).inv().unwrap(), k.from_i64(2));
        assert!(matches!(k.zero().inv(), Err(Error::DivisionByZero)));
        assert!(matches!(k.one().try_div(&k.zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn mismatch_is_rejected() {
        let a = FieldSpec::gf2().one();
        let b = FieldSpec::gf3().one();
        assert!(matches!(a.try_add(&b), Err(Error::FieldMismatch(..))));
        assert!(matches!(a.try_mul(&b), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn enumeration() {
        let codes = |k: FieldSpec| k.elements().unwrap().iter().map(|e| e.code().unwrap()).collect::<Vec<_>>();
        assert_eq!(codes(FieldSpec::gf2()), vec![0, 1]);
        assert_eq!(codes(FieldSpec::Gf4), vec![0, 1, 2, 3]);
        assert_eq!(codes(FieldSpec::gf5()), vec![0, 1, 2, 3, 4]);
        assert!(matches!(FieldSpec::Rational.elements(), Err(Error::InfiniteField(_))));
    }

    #[test]
    fn field_axioms_exhaustive() {
        for k in small_fields() {
            let els = k.elements().unwrap();
            let (zero, one) = (k.zero(), k.one());
            for a in &els {
                assert_eq!(a + &zero, a.clone());
                assert_eq!(a * &one, a.clone());
                assert!((a + &(-a)).is_zero());
                if !a.is_zero() {
                    assert!((a * &a.inv().unwrap()).is_one());
                    assert_eq!(a.inv().unwrap().inv().unwrap(), a.clone());
                }
                for b in &els {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    assert_eq!(&(a - b) + b, a.clone());
                    for c in &els {
                        assert_eq!(&(a + b) + c, a + &(b + c));
                        assert_eq!(&(a * b) * c, a * &(b * c));
                        assert_eq!(a * &(b + c), &(a * b) + &(a * c));
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_is_identity() {
        for k in small_fields() {
            for a in k.elements().unwrap() {
                assert_eq!(a.canonical(), a);
            }
        }
        let q = FieldSpec::Rational;
        for (n, d) in [(6, -4), (0, 7), (-9, 3), (5, 1)] {
            let a = q.rational(n, d).unwrap();
            assert_eq!(a.canonical(), a);
            assert!(a.as_rational().unwrap().denom() > &BigInt::zero());
        }
    }

    #[test]
    fn tokens() {
        for t in ["gf2", "gf3", "gf4", "gf5", "gfp:7", "q"] {
            assert_eq!(t.parse::<FieldSpec>().unwrap().to_string(), t);
        }
        assert_eq!("gfp:5".parse::<FieldSpec>().unwrap(), FieldSpec::gf5());
        assert!("gfp:6".parse::<FieldSpec>().is_err());
        assert!("gf9".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn element_literals() {
        let q = FieldSpec::Rational;
        assert_eq!(q.parse_element("-4/6").unwrap(), q.rational(-2, 3).unwrap());
        assert_eq!(q.parse_element("7").unwrap().to_string(), "7");
        assert!(q.parse_element("1/0").is_err());
        assert_eq!(FieldSpec::gf5().parse_element("-1").unwrap().code(), Some(4));
        assert!(FieldSpec::Gf4.parse_element("4").is_err());
    }

    #[test]
    fn tables_agree() {
        for k in small_fields() {
            let t = k.tables().unwrap();
            for a in k.elements().unwrap() {
                for b in k.elements().unwrap() {
                    let (ca, cb) = (a.code().unwrap() as u8, b.code().unwrap() as u8);
                    assert_eq!(t.add(ca, cb) as u64, (&a + &b).code().unwrap());
                    assert_eq!(t.mul(ca, cb) as u64, (&a * &b).code().unwrap());
                }
            }
        }
    }
}
