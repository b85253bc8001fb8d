//! Sparse Laurent polynomials in `q, t` with exact integer coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

/// Machine integer that widens to a `BigInt` on overflow.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Int {
    Small(i64),
    Big(BigInt),
}

impl Int {
    fn norm(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(b),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Int::Small(1) | Int::Small(-1))
    }

    pub fn signum(&self) -> i64 {
        match self {
            Int::Small(v) => v.signum(),
            Int::Big(b) => b.signum().to_i64().unwrap_or(0),
        }
    }

    pub fn add(&self, o: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, o) {
            if let Some(v) = a.checked_add(*b) {
                return Int::Small(v);
            }
        }
        Int::norm(self.to_big() + o.to_big())
    }

    pub fn mul(&self, o: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, o) {
            if let Some(v) = a.checked_mul(*b) {
                return Int::Small(v);
            }
        }
        Int::norm(self.to_big() * o.to_big())
    }

    pub fn neg(&self) -> Int {
        match self {
            Int::Small(v) => v.checked_neg().map(Int::Small).unwrap_or_else(|| Int::norm(-BigInt::from(*v))),
            Int::Big(b) => Int::norm(-b),
        }
    }

    /// Exact quotient, `None` unless `d` divides `self`.
    pub fn div_exact(&self, d: i64) -> Option<Int> {
        if d == 0 {
            return None;
        }
        if let Int::Small(v) = self {
            if let (Some(0), Some(q)) = (v.checked_rem(d), v.checked_div(d)) {
                return Some(Int::Small(q));
            }
        }
        let (q, r) = self.to_big().div_rem(&BigInt::from(d));
        r.is_zero().then(|| Int::norm(q))
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int::Small(v)
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

/// Exponent pair `(dq, dt)`.
pub type Mono = (i32, i32);

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    /// Sorted by exponent, no zero coefficients.
    terms: Vec<(Mono, Int)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0, 0)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn q() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn t() -> Self {
        Self::monomial(1, 0, 1)
    }

    pub fn monomial(c: i64, dq: i32, dt: i32) -> Self {
        if c == 0 {
            return Self::zero();
        }
        LaurentPoly { terms: vec![((dq, dt), Int::Small(c))] }
    }

    /// Builds from `(dq, dt, coefficient)` triples, combining repeats.
    pub fn from_terms(raw: impl IntoIterator<Item = (i32, i32, Int)>) -> Self {
        let mut v: Vec<(Mono, Int)> = raw.into_iter().map(|(a, b, c)| ((a, b), c)).collect();
        v.sort_by_key(|x| x.0);
        let mut terms: Vec<(Mono, Int)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match terms.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.add(&c),
                _ => terms.push((m, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        LaurentPoly { terms }
    }

    pub fn terms(&self) -> &[(Mono, Int)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == (0, 0) && self.terms[0].1 == Int::Small(1)
    }

    /// `(sign, dq, dt)` when the polynomial is `±q^dq t^dt`, i.e. a unit.
    pub fn as_unit(&self) -> Option<(i64, i32, i32)> {
        match self.terms.as_slice() {
            [((dq, dt), c)] if c.is_unit() => Some((c.signum(), *dq, *dt)),
            _ => None,
        }
    }

    /// Inverse of a unit.
    pub fn unit_inverse(&self) -> Option<Self> {
        self.as_unit().map(|(s, dq, dt)| Self::monomial(s, -dq, -dt))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `self · ±q^dq t^dt`.
    pub fn shift(&self, sign: i64, dq: i32, dt: i32) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|((a, b), c)| ((a + dq, b + dt), if sign < 0 { c.neg() } else { c.clone() }))
            .collect();
        LaurentPoly { terms }
    }

    /// Exact division by an integer, `None` unless every coefficient divides.
    pub fn div_int(&self, d: i64) -> Option<Self> {
        let terms = self.terms.iter().map(|(m, c)| c.div_exact(d).map(|c| (*m, c))).collect::<Option<_>>()?;
        Some(LaurentPoly { terms })
    }

    pub fn add_assign_ref(&mut self, o: &LaurentPoly) {
        if o.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = o.clone();
            return;
        }
        *self = merge(&self.terms, &o.terms, false);
    }

    /// `self += a · b`.
    pub fn add_product(&mut self, a: &LaurentPoly, b: &LaurentPoly) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let p = a * b;
        self.add_assign_ref(&p);
    }

    /// Substitutes integers for `q` and `t`; `None` on a non-integral value.
    pub fn eval_int(&self, q: i64, t: i64) -> Option<BigInt> {
        let pw = |base: i64, e: i32| -> Option<(BigInt, BigInt)> {
            let b = BigInt::from(base);
            if e >= 0 {
                Some((num_traits::pow(b, e as usize), BigInt::one()))
            } else if base == 0 {
                None
            } else {
                Some((BigInt::one(), num_traits::pow(b, (-e) as usize)))
            }
        };
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for ((a, b), c) in &self.terms {
            let (n1, d1) = pw(q, *a)?;
            let (n2, d2) = pw(t, *b)?;
            let (n, d) = (c.to_big() * n1 * n2, d1 * d2);
            num = num * &d + n * &den;
            den *= d;
        }
        let (quot, rem) = num.div_rem(&den);
        rem.is_zero().then_some(quot)
    }
}

fn merge(a: &[(Mono, Int)], b: &[(Mono, Int)], negate_b: bool) -> LaurentPoly {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let nb = |c: &Int| if negate_b { c.neg() } else { c.clone() };
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push((b[j].0, nb(&b[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let c = a[i].1.add(&nb(&b[j].1));
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(b[j..].iter().map(|(m, c)| (*m, nb(c))));
    LaurentPoly { terms: out }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        merge(&self.terms, &o.terms, false)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        merge(&self.terms, &o.terms, true)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || o.is_zero() {
            return LaurentPoly::zero();
        }
        if let [(m, c)] = self.terms.as_slice() {
            return scale(o, *m, c);
        }
        if let [(m, c)] = o.terms.as_slice() {
            return scale(self, *m, c);
        }
        let mut raw = Vec::with_capacity(self.terms.len() * o.terms.len());
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                raw.push((a1 + a2, b1 + b2, c1.mul(c2)));
            }
        }
        LaurentPoly::from_terms(raw)
    }
}

fn scale(p: &LaurentPoly, (dq, dt): Mono, c: &Int) -> LaurentPoly {
    LaurentPoly { terms: p.terms.iter().map(|((a, b), x)| ((a + dq, b + dt), x.mul(c))).collect() }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, o: LaurentPoly) -> LaurentPoly {
                (&self).$f(&o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, ((dq, dt), c)) in self.terms.iter().rev().enumerate() {
            let neg = c.signum() < 0;
            let abs = if neg { c.neg() } else { c.clone() };
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut vars = Vec::new();
            for (name, e) in [("q", *dq), ("t", *dt)] {
                match e {
                    0 => {}
                    1 => vars.push(name.to_string()),
                    _ => vars.push(format!("{name}^{e}")),
                }
            }
            let unit = abs == Int::Small(1);
            match (unit, vars.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{}", vars.join("*"))?,
                (false, true) => write!(f, "{abs}")?,
                (false, false) => write!(f, "{abs}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Serialized as a list of `[dq, dt, "coefficient"]`.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for ((dq, dt), c) in &self.terms {
            seq.serialize_element(&(dq, dt, c.to_string()))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(raw: &[(i32, i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(raw.iter().map(|&(a, b, c)| (a, b, Int::Small(c))))
    }

    #[test]
    fn basic_arithmetic() {
        let q = LaurentPoly::q();
        let one = LaurentPoly::one();
        let x = &q - &one;
        assert_eq!((&x * &x).to_string(), "q^2 - 2*q + 1");
        assert!((&x - &x).is_zero());
        let qinv = q.unit_inverse().unwrap();
        assert!((&q * &qinv).is_one());
        assert_eq!(poly(&[(2, 1, -1)]).as_unit(), Some((-1, 2, 1)));
        assert_eq!(x.as_unit(), None);
        assert_eq!(poly(&[(0, 0, 6), (1, 0, -4)]).div_int(2).unwrap(), poly(&[(0, 0, 3), (1, 0, -2)]));
        assert!(poly(&[(0, 0, 3)]).div_int(2).is_none());
        assert_eq!(poly(&[(-1, 0, 4), (1, 1, 1)]).eval_int(2, 3), Some(BigInt::from(8)));
    }

    #[test]
    fn coefficients_widen_on_overflow() {
        let big = LaurentPoly::constant(i64::MAX);
        let sq = &big * &big;
        assert_eq!(sq.terms()[0].1.to_big(), BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
        let back = &sq - &sq;
        assert!(back.is_zero());
        let sum = &big + &big;
        assert_eq!(sum.terms()[0].1.to_big(), BigInt::from(i64::MAX) * 2);
    }

    #[test]
    fn serializes_as_triples() {
        let p = poly(&[(1, 0, -3), (0, 2, 1)]);
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"[[0,2,"1"],[1,0,"-3"]]"#);
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-3i32..4, -2i32..3, -5i64..6), 0..6).prop_map(|v| poly(&v))
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
            let prod = &a * &b;
            prop_assert!(prod.terms().iter().all(|(_, c)| !c.is_zero()));
            prop_assert!(prod.terms().windows(2).all(|w| w[0].0 < w[1].0));
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in arb_poly(), b in arb_poly()) {
            let ev = |p: &LaurentPoly| p.eval_int(1, 1).unwrap();
            prop_assert_eq!(ev(&(&a * &b)), ev(&a) * ev(&b));
            prop_assert_eq!(ev(&(&a + &b)), ev(&a) + ev(&b));
        }
    }
}
