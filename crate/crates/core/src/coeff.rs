//! Exact coefficient arithmetic for the rings the engine computes over:
//! the integers, Z/m, the rationals, and the integers with a finite set of
//! primes inverted (e.g. Z[1/2]).
//!
//! Elements are kept in a canonical form at all times: Z/m representatives
//! lie in `[0, m)`, fractions are reduced with positive denominator, and a
//! localized integer has a denominator supported on the inverted primes.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoeffRing {
    Integers,
    ModM(u64),
    Rationals,
    /// Z localized away from the given primes; the list is sorted and deduplicated.
    LocalizedIntegers(Vec<u64>),
}

impl CoeffRing {
    pub fn zmod(m: u64) -> Result<Self, Error> {
        if m < 2 {
            return Err(Error::InvalidRing(format!("modulus {m} must be at least 2")));
        }
        Ok(CoeffRing::ModM(m))
    }

    pub fn localized(primes: &[u64]) -> Result<Self, Error> {
        let mut ps: Vec<u64> = primes.to_vec();
        ps.sort_unstable();
        ps.dedup();
        if ps.is_empty() {
            return Err(Error::InvalidRing("empty prime set for localization".into()));
        }
        for &p in &ps {
            if !is_prime(p) {
                return Err(Error::InvalidRing(format!("{p} is not prime")));
            }
        }
        Ok(CoeffRing::LocalizedIntegers(ps))
    }

    pub fn is_field(&self) -> bool {
        match self {
            CoeffRing::Rationals => true,
            CoeffRing::ModM(m) => is_prime(*m),
            _ => false,
        }
    }

    /// Rings over which the engine computes homology: Z, Q, Z/p, and
    /// localizations of Z. Composite Z/m is excluded.
    pub fn supports_homology(&self) -> bool {
        match self {
            CoeffRing::ModM(m) => is_prime(*m),
            _ => true,
        }
    }

    pub fn two_is_invertible(&self) -> bool {
        match self {
            CoeffRing::Integers => false,
            CoeffRing::Rationals => true,
            CoeffRing::ModM(m) => m % 2 == 1,
            CoeffRing::LocalizedIntegers(ps) => ps.contains(&2),
        }
    }

    pub fn characteristic_two(&self) -> bool {
        matches!(self, CoeffRing::ModM(m) if m % 2 == 0)
    }

    pub fn zero(&self) -> RingElement {
        RingElement {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    pub fn one(&self) -> RingElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> RingElement {
        self.reduce(&BigInt::from(n))
    }

    /// Canonical image of an integer in this ring.
    pub fn reduce(&self, n: &BigInt) -> RingElement {
        match self {
            CoeffRing::ModM(m) => {
                let m = BigInt::from(*m);
                RingElement {
                    num: n.mod_floor(&m),
                    den: BigInt::one(),
                }
            }
            _ => RingElement {
                num: n.clone(),
                den: BigInt::one(),
            },
        }
    }

    fn canon(&self, num: BigInt, den: BigInt) -> RingElement {
        assert!(!den.is_zero(), "zero denominator");
        match self {
            CoeffRing::Integers | CoeffRing::ModM(_) => {
                let (q, r) = num.div_rem(&den);
                assert!(r.is_zero(), "non-integral element of {self:?}");
                self.reduce(&q)
            }
            CoeffRing::Rationals | CoeffRing::LocalizedIntegers(_) => {
                let mut num = num;
                let mut den = den;
                if den.is_negative() {
                    num = -num;
                    den = -den;
                }
                let g = num.gcd(&den);
                if !g.is_one() {
                    num /= &g;
                    den /= &g;
                }
                if let CoeffRing::LocalizedIntegers(ps) = self {
                    let mut d = den.clone();
                    for &p in ps {
                        let p = BigInt::from(p);
                        while (&d % &p).is_zero() {
                            d /= &p;
                        }
                    }
                    assert!(
                        d.abs().is_one(),
                        "denominator {den} not supported on inverted primes"
                    );
                }
                RingElement { num, den }
            }
        }
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.canon(&a.num * &b.den + &b.num * &a.den, &a.den * &b.den)
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.canon(&a.num * &b.den - &b.num * &a.den, &a.den * &b.den)
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        self.canon(-&a.num, a.den.clone())
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.canon(&a.num * &b.num, &a.den * &b.den)
    }

    pub fn scale(&self, a: &RingElement, n: i64) -> RingElement {
        self.mul(a, &self.from_int(n))
    }

    /// True iff `x` divides 1 in the ring.
    pub fn is_unit(&self, x: &RingElement) -> bool {
        match self {
            CoeffRing::Integers => x.num.abs().is_one(),
            CoeffRing::Rationals => !x.num.is_zero(),
            CoeffRing::ModM(m) => x.num.gcd(&BigInt::from(*m)).is_one(),
            CoeffRing::LocalizedIntegers(ps) => {
                if x.num.is_zero() {
                    return false;
                }
                let mut n = x.num.abs();
                for &p in ps {
                    let p = BigInt::from(p);
                    while (&n % &p).is_zero() {
                        n /= &p;
                    }
                }
                n.is_one()
            }
        }
    }

    pub fn inverse(&self, x: &RingElement) -> Option<RingElement> {
        if !self.is_unit(x) {
            return None;
        }
        match self {
            CoeffRing::ModM(m) => {
                let m = BigInt::from(*m);
                let e = x.num.extended_gcd(&m);
                Some(self.reduce(&e.x))
            }
            _ => Some(self.canon(x.den.clone(), x.num.clone())),
        }
    }

    /// Image of the binomial coefficient C(n, i).
    pub fn binomial(&self, n: u64, i: u64) -> Result<RingElement, Error> {
        if i > n {
            return Err(Error::OutOfRange(format!("binomial({n}, {i})")));
        }
        Ok(self.reduce(&binomial_int(n, i)))
    }

    /// Parses the CLI spelling: "z", "q", "zmod:<m>", "zloc:<p1,p2,...>".
    pub fn parse(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        match s {
            "z" => return Ok(CoeffRing::Integers),
            "q" => return Ok(CoeffRing::Rationals),
            _ => {}
        }
        if let Some(m) = s.strip_prefix("zmod:") {
            let m: u64 = m
                .parse()
                .map_err(|_| Error::InvalidRing(format!("bad modulus in {s:?}")))?;
            return CoeffRing::zmod(m);
        }
        if let Some(ps) = s.strip_prefix("zloc:") {
            let primes: Vec<u64> = ps
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse()
                        .map_err(|_| Error::InvalidRing(format!("bad prime in {s:?}")))
                })
                .collect::<Result<_, _>>()?;
            return CoeffRing::localized(&primes);
        }
        Err(Error::InvalidRing(format!("unrecognized ring {s:?}")))
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::Integers => write!(f, "z"),
            CoeffRing::Rationals => write!(f, "q"),
            CoeffRing::ModM(m) => write!(f, "zmod:{m}"),
            CoeffRing::LocalizedIntegers(ps) => {
                let s: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "zloc:{}", s.join(","))
            }
        }
    }
}

/// A canonical ring element: integer, residue, or reduced fraction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingElement {
    num: BigInt,
    den: BigInt,
}

impl RingElement {
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// The element as an integer, if its denominator is 1.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.den.is_one().then_some(&self.num)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

pub fn binomial_int(n: u64, i: u64) -> BigInt {
    let i = i.min(n - i);
    let mut acc = BigInt::one();
    for k in 0..i {
        acc = acc * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Odd primes up to and including `max`.
pub fn odd_primes_up_to(max: u64) -> Vec<u64> {
    (3..=max).filter(|&p| is_prime(p)).collect()
}

impl FromStr for CoeffRing {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CoeffRing::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(ring: &CoeffRing, n: i64) -> RingElement {
        ring.from_int(n)
    }

    #[test]
    fn reduction_is_canonical() {
        let z3 = CoeffRing::zmod(3).unwrap();
        assert_eq!(el(&z3, 7), el(&z3, 1));
        assert_eq!(el(&z3, -1), el(&z3, 2));
        let zloc2 = CoeffRing::localized(&[2]).unwrap();
        assert_eq!(el(&zloc2, 6), zloc2.reduce(&BigInt::from(6)));
        for ring in [
            CoeffRing::Integers,
            CoeffRing::Rationals,
            z3.clone(),
            zloc2.clone(),
        ] {
            assert!(ring.zero().is_zero());
        }
    }

    #[test]
    fn unit_detection() {
        let z3 = CoeffRing::zmod(3).unwrap();
        assert!(z3.is_unit(&el(&z3, 1)));
        assert!(!z3.is_unit(&el(&z3, 3)));
        let zloc2 = CoeffRing::localized(&[2]).unwrap();
        assert!(zloc2.is_unit(&el(&zloc2, 2)));
        assert!(zloc2.is_unit(&el(&zloc2, -8)));
        assert!(!zloc2.is_unit(&el(&zloc2, 3)));
        assert!(!zloc2.is_unit(&el(&zloc2, 6)));
    }

    #[test]
    fn unit_product_is_unit() {
        let rings = [
            CoeffRing::Integers,
            CoeffRing::Rationals,
            CoeffRing::zmod(9).unwrap(),
            CoeffRing::localized(&[2, 5]).unwrap(),
        ];
        for ring in &rings {
            for a in -10i64..=10 {
                for b in -10i64..=10 {
                    let (x, y) = (el(ring, a), el(ring, b));
                    if ring.is_unit(&x) && ring.is_unit(&y) {
                        assert!(ring.is_unit(&ring.mul(&x, &y)), "{ring} {a} {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn binomials() {
        let z3 = CoeffRing::zmod(3).unwrap();
        assert!(z3.binomial(3, 1).unwrap().is_zero());
        assert_eq!(z3.binomial(3, 3).unwrap(), el(&z3, 1));
        let q = CoeffRing::Rationals;
        assert_eq!(q.binomial(4, 2).unwrap(), el(&q, 6));
        assert!(q.binomial(2, 4).is_err());
    }

    #[test]
    fn ring_axioms_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(0xC0FFEE);
        let rings = [
            CoeffRing::Integers,
            CoeffRing::Rationals,
            CoeffRing::zmod(12).unwrap(),
            CoeffRing::localized(&[3]).unwrap(),
        ];
        for ring in &rings {
            for _ in 0..1000 {
                let (a, b, c) = (
                    el(ring, rng.gen_range(-50..50)),
                    el(ring, rng.gen_range(-50..50)),
                    el(ring, rng.gen_range(-50..50)),
                );
                let ab_c = ring.mul(&ring.mul(&a, &b), &c);
                let a_bc = ring.mul(&a, &ring.mul(&b, &c));
                assert_eq!(ab_c, a_bc);
                let lhs = ring.mul(&a, &ring.add(&b, &c));
                let rhs = ring.add(&ring.mul(&a, &b), &ring.mul(&a, &c));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let z7 = CoeffRing::zmod(7).unwrap();
        for a in 1..7 {
            let x = el(&z7, a);
            let inv = z7.inverse(&x).unwrap();
            assert_eq!(z7.mul(&x, &inv), z7.one());
        }
        let zloc2 = CoeffRing::localized(&[2]).unwrap();
        let x = el(&zloc2, 4);
        assert_eq!(zloc2.mul(&x, &zloc2.inverse(&x).unwrap()), zloc2.one());
        assert!(zloc2.inverse(&el(&zloc2, 3)).is_none());
    }

    #[test]
    fn parse_spellings() {
        assert_eq!(CoeffRing::parse("z").unwrap(), CoeffRing::Integers);
        assert_eq!(CoeffRing::parse("q").unwrap(), CoeffRing::Rationals);
        assert_eq!(CoeffRing::parse("zmod:5").unwrap(), CoeffRing::zmod(5).unwrap());
        assert_eq!(
            CoeffRing::parse("zloc:2").unwrap(),
            CoeffRing::localized(&[2]).unwrap()
        );
        assert!(CoeffRing::parse("zmod:1").is_err());
        assert!(CoeffRing::parse("zloc:4").is_err());
        assert!(CoeffRing::parse("gf256").is_err());
    }
}
