//! Trigraded algebra presentations with Koszul-signed multiplication.
//!
//! Elements live in a free graded-commutative algebra on named generators,
//! each either exterior (square zero) or polynomial. A generator is odd when
//! its filtration-plus-degree parity `s + p` is odd; odd generators
//! anticommute. Relations are carried alongside as plain elements and are
//! imposed downstream, not during multiplication.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::coeff::{CoeffRing, RingElement};
use crate::error::Error;

/// Degree `(s, p, w)`: filtration, motivic degree, weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tridegree {
    pub s: i64,
    pub p: i64,
    pub w: i64,
}

impl Tridegree {
    pub fn new(s: i64, p: i64, w: i64) -> Self {
        Tridegree { s, p, w }
    }

    pub fn add(&self, other: &Tridegree) -> Tridegree {
        Tridegree::new(self.s + other.s, self.p + other.p, self.w + other.w)
    }

    pub fn sub(&self, other: &Tridegree) -> Tridegree {
        Tridegree::new(self.s - other.s, self.p - other.p, self.w - other.w)
    }

    /// Total Chow height `2w - s - p`; every differential lowers it by 1.
    pub fn chow_height(&self) -> i64 {
        2 * self.w - self.s - self.p
    }

    /// Degree shift of the page-`j` differential.
    pub fn differential_shift(j: i64) -> Tridegree {
        Tridegree::new(j, 1 - j, 0)
    }

    pub fn is_odd(&self) -> bool {
        (self.s + self.p).rem_euclid(2) == 1
    }

    pub fn zero() -> Tridegree {
        Tridegree::new(0, 0, 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeneratorKind {
    /// Squares to zero.
    Exterior,
    /// Free polynomial generator.
    Polynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub kind: GeneratorKind,
    pub degree: Tridegree,
}

impl Generator {
    pub fn exterior(name: impl Into<String>, s: i64, p: i64, w: i64) -> Self {
        Generator {
            name: name.into(),
            kind: GeneratorKind::Exterior,
            degree: Tridegree::new(s, p, w),
        }
    }

    pub fn polynomial(name: impl Into<String>, s: i64, p: i64, w: i64) -> Self {
        Generator {
            name: name.into(),
            kind: GeneratorKind::Polynomial,
            degree: Tridegree::new(s, p, w),
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree.is_odd()
    }
}

/// Exponent vector over the presentation's generator list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn unit(ngens: usize) -> Self {
        Monomial(vec![0; ngens])
    }

    pub fn generator(ngens: usize, idx: usize) -> Self {
        let mut e = vec![0; ngens];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn exponent(&self, idx: usize) -> u32 {
        self.0[idx]
    }
}

fn serialize_terms<S: serde::Serializer>(
    terms: &BTreeMap<Monomial, RingElement>,
    ser: S,
) -> Result<S::Ok, S::Error> {
    let v: Vec<(&Monomial, &RingElement)> = terms.iter().collect();
    serde::Serialize::serialize(&v, ser)
}

fn deserialize_terms<'de, D: serde::Deserializer<'de>>(
    de: D,
) -> Result<BTreeMap<Monomial, RingElement>, D::Error> {
    let v: Vec<(Monomial, RingElement)> = serde::Deserialize::deserialize(de)?;
    Ok(v.into_iter().collect())
}

/// A finite sum of monomials with coefficients; zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraElement {
    #[serde(serialize_with = "serialize_terms", deserialize_with = "deserialize_terms")]
    pub terms: BTreeMap<Monomial, RingElement>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn term(m: Monomial, c: RingElement) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        AlgebraElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }
}

/// Generators plus relations over a coefficient ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraPresentation {
    pub ring: CoeffRing,
    pub generators: Vec<Generator>,
    pub relations: Vec<AlgebraElement>,
}

impl AlgebraPresentation {
    pub fn free(ring: CoeffRing, generators: Vec<Generator>) -> Self {
        AlgebraPresentation {
            ring,
            generators,
            relations: Vec::new(),
        }
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn unit_element(&self) -> AlgebraElement {
        AlgebraElement::term(Monomial::unit(self.ngens()), self.ring.one())
    }

    pub fn generator_element(&self, idx: usize) -> AlgebraElement {
        AlgebraElement::term(Monomial::generator(self.ngens(), idx), self.ring.one())
    }

    pub fn monomial_degree(&self, m: &Monomial) -> Tridegree {
        let mut d = Tridegree::zero();
        for (g, &e) in self.generators.iter().zip(&m.0) {
            d.s += g.degree.s * e as i64;
            d.p += g.degree.p * e as i64;
            d.w += g.degree.w * e as i64;
        }
        d
    }

    /// Homogeneous degree, or None when zero or mixed.
    pub fn element_degree(&self, x: &AlgebraElement) -> Option<Tridegree> {
        let mut it = x.terms.keys().map(|m| self.monomial_degree(m));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Koszul sign and combined exponents of `a * b`; `None` when an
    /// exterior generator would square.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, i64)> {
        let n = self.ngens();
        let mut exps = vec![0u32; n];
        for i in 0..n {
            let e = a.0[i] + b.0[i];
            if e > 1 && self.generators[i].kind == GeneratorKind::Exterior {
                return None;
            }
            exps[i] = e;
        }
        // each odd factor of b at index i crosses the odd factors of a at
        // strictly larger indices
        let odd: Vec<u32> = self
            .generators
            .iter()
            .map(|g| if g.is_odd() { 1 } else { 0 })
            .collect();
        let mut crossings: u64 = 0;
        let mut odd_above: u64 = (0..n).map(|j| (a.0[j] * odd[j]) as u64).sum();
        for i in 0..n {
            odd_above -= (a.0[i] * odd[i]) as u64;
            crossings += (b.0[i] * odd[i]) as u64 * odd_above;
        }
        let sign = if crossings % 2 == 0 { 1 } else { -1 };
        Some((Monomial(exps), sign))
    }

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut out = a.clone();
        for (m, c) in &b.terms {
            let entry = out.terms.entry(m.clone()).or_insert_with(|| self.ring.zero());
            *entry = self.ring.add(entry, c);
            if entry.is_zero() {
                out.terms.remove(m);
            }
        }
        out
    }

    pub fn scale(&self, a: &AlgebraElement, c: &RingElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (m, x) in &a.terms {
            let v = self.ring.mul(x, c);
            if !v.is_zero() {
                out.terms.insert(m.clone(), v);
            }
        }
        out
    }

    pub fn neg(&self, a: &AlgebraElement) -> AlgebraElement {
        self.scale(a, &self.ring.from_int(-1))
    }

    pub fn sub(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let Some((m, sign)) = self.mul_monomials(ma, mb) else {
                    continue;
                };
                let c = self.ring.scale(&self.ring.mul(ca, cb), sign);
                let entry = out.terms.entry(m).or_insert_with(|| self.ring.zero());
                *entry = self.ring.add(entry, &c);
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn pow(&self, a: &AlgebraElement, e: u32) -> AlgebraElement {
        let mut out = self.unit_element();
        for _ in 0..e {
            out = self.mul(&out, a);
        }
        out
    }

    /// All monomials of the given tridegree. Every generator must have
    /// positive weight so the search terminates.
    pub fn monomials_of_degree(&self, t: Tridegree) -> Vec<Monomial> {
        assert!(
            self.generators.iter().all(|g| g.degree.w > 0),
            "degreewise enumeration needs positive generator weights"
        );
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.ngens()];
        self.enumerate(0, t, &mut exps, &mut out);
        out.sort();
        out
    }

    fn enumerate(&self, idx: usize, rem: Tridegree, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if rem.s < 0 || rem.p < 0 || rem.w < 0 {
            return;
        }
        if idx == self.ngens() {
            if rem == Tridegree::zero() {
                out.push(Monomial(exps.clone()));
            }
            return;
        }
        let g = &self.generators[idx];
        let cap = match g.kind {
            GeneratorKind::Exterior => 1,
            GeneratorKind::Polynomial => (rem.w / g.degree.w).max(0) as u32,
        };
        for e in 0..=cap {
            let d = Tridegree::new(
                rem.s - g.degree.s * e as i64,
                rem.p - g.degree.p * e as i64,
                rem.w - g.degree.w * e as i64,
            );
            exps[idx] = e;
            self.enumerate(idx + 1, d, exps, out);
        }
        exps[idx] = 0;
    }

    /// Canonical text form: coefficient, exterior factors, then polynomial
    /// powers, e.g. `2*r1*r2*t^3`.
    pub fn render_monomial(&self, m: &Monomial, c: &RingElement) -> String {
        let mut factors = Vec::new();
        for (g, &e) in self.generators.iter().zip(&m.0) {
            if e == 0 {
                continue;
            }
            if e == 1 {
                factors.push(g.name.clone());
            } else {
                factors.push(format!("{}^{}", g.name, e));
            }
        }
        let coeff = c.to_string();
        if factors.is_empty() {
            coeff
        } else if coeff == "1" {
            factors.join("*")
        } else if coeff == "-1" {
            format!("-{}", factors.join("*"))
        } else {
            format!("{}*{}", coeff, factors.join("*"))
        }
    }

    pub fn render_element(&self, x: &AlgebraElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in x.terms.iter().enumerate() {
            let piece = self.render_monomial(m, c);
            if i == 0 {
                s.push_str(&piece);
            } else if let Some(rest) = piece.strip_prefix('-') {
                let _ = write!(s, " - {rest}");
            } else {
                let _ = write!(s, " + {piece}");
            }
        }
        s
    }

    /// Inverse of [`render_element`]; accepts any sum of `*`-joined factors.
    pub fn parse_element(&self, input: &str) -> Result<AlgebraElement, Error> {
        let input = input.trim();
        if input == "0" {
            return Ok(AlgebraElement::zero());
        }
        let mut out = AlgebraElement::zero();
        for (sign, term) in split_signed_terms(input)? {
            let mut coeff = self.ring.from_int(sign);
            let mut exps = vec![0u32; self.ngens()];
            for factor in term.split('*') {
                let factor = factor.trim();
                if factor.is_empty() {
                    return Err(Error::Precondition(format!("empty factor in {term:?}")));
                }
                if factor.chars().next().unwrap().is_ascii_digit() {
                    coeff = self.ring.mul(&coeff, &parse_coeff(&self.ring, factor)?);
                    continue;
                }
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => {
                        let e: u32 = e.parse().map_err(|_| {
                            Error::Precondition(format!("bad exponent in {factor:?}"))
                        })?;
                        (n, e)
                    }
                    None => (factor, 1),
                };
                let idx = self.generator_index(name).ok_or_else(|| {
                    Error::Precondition(format!("unknown generator {name:?}"))
                })?;
                exps[idx] += exp;
                if self.generators[idx].kind == GeneratorKind::Exterior && exps[idx] > 1 {
                    return Err(Error::Precondition(format!(
                        "exterior generator {name:?} squared"
                    )));
                }
            }
            out = self.add(&out, &AlgebraElement::term(Monomial(exps), coeff));
        }
        Ok(out)
    }
}

fn split_signed_terms(input: &str) -> Result<Vec<(i64, String)>, Error> {
    let mut terms = Vec::new();
    let mut sign = 1i64;
    let mut cur = String::new();
    let flush = |sign: i64, cur: &mut String, terms: &mut Vec<(i64, String)>| {
        let t = cur.trim().to_string();
        if !t.is_empty() {
            terms.push((sign, t));
        }
        cur.clear();
    };
    let mut first = true;
    for ch in input.chars() {
        match ch {
            '+' => {
                flush(sign, &mut cur, &mut terms);
                sign = 1;
            }
            '-' if first || cur.trim().is_empty() => {
                flush(sign, &mut cur, &mut terms);
                sign = -1;
            }
            '-' => {
                flush(sign, &mut cur, &mut terms);
                sign = -1;
            }
            _ => cur.push(ch),
        }
        first = false;
    }
    flush(sign, &mut cur, &mut terms);
    if terms.is_empty() {
        return Err(Error::Precondition(format!("no terms in {input:?}")));
    }
    Ok(terms)
}

fn parse_coeff(ring: &CoeffRing, s: &str) -> Result<RingElement, Error> {
    use num_bigint::BigInt;
    let parse_int = |t: &str| -> Result<BigInt, Error> {
        t.parse()
            .map_err(|_| Error::Precondition(format!("bad coefficient {s:?}")))
    };
    match s.split_once('/') {
        None => Ok(ring.reduce(&parse_int(s)?)),
        Some((n, d)) => {
            let num = ring.reduce(&parse_int(n)?);
            let den = ring.reduce(&parse_int(d)?);
            let inv = ring
                .inverse(&den)
                .ok_or_else(|| Error::Precondition(format!("non-invertible denominator in {s:?}")))?;
            Ok(ring.mul(&num, &inv))
        }
    }
}

/// Enforces the standing hypothesis on the coefficient ring of the input
/// cohomology rings: either 2 is invertible, or the characteristic is 2 and
/// the base is declared to contain a square root of -1.
pub fn check_input_ring(ring: &CoeffRing, sqrt_minus_one: bool) -> Result<(), Error> {
    if ring.two_is_invertible() || (ring.characteristic_two() && sqrt_minus_one) {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "ring {ring} needs 2 invertible, or characteristic 2 with a declared square root of -1"
        )))
    }
}

/// `Lambda(rho_1, ..., rho_n)` with `rho_i` exterior in degree `(0, 2i-1, i)`.
pub fn gln_cohomology(ring: &CoeffRing, n: usize, sqrt_minus_one: bool) -> Result<AlgebraPresentation, Error> {
    check_input_ring(ring, sqrt_minus_one)?;
    if n == 0 {
        return Err(Error::OutOfRange("gln requires n >= 1".into()));
    }
    let gens = (1..=n)
        .map(|i| Generator::exterior(format!("r{i}"), 0, 2 * i as i64 - 1, i as i64))
        .collect();
    Ok(AlgebraPresentation::free(ring.clone(), gens))
}

/// `Lambda(rho_{n-m+1}, ..., rho_n)`, the cohomology of the Stiefel variety
/// of `m`-frames in `n`-space.
pub fn stiefel_cohomology(
    ring: &CoeffRing,
    n: usize,
    m: usize,
    sqrt_minus_one: bool,
) -> Result<AlgebraPresentation, Error> {
    check_input_ring(ring, sqrt_minus_one)?;
    if m == 0 || m > n {
        return Err(Error::OutOfRange(format!(
            "stiefel requires 1 <= m <= n, got m={m}, n={n}"
        )));
    }
    let gens = (n - m + 1..=n)
        .map(|i| Generator::exterior(format!("r{i}"), 0, 2 * i as i64 - 1, i as i64))
        .collect();
    Ok(AlgebraPresentation::free(ring.clone(), gens))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_presentation() -> AlgebraPresentation {
        // Lambda(r1, r2) tensor a polynomial generator t at (1, 1, 1)
        let q = CoeffRing::Rationals;
        AlgebraPresentation::free(
            q,
            vec![
                Generator::exterior("r1", 0, 1, 1),
                Generator::exterior("r2", 0, 3, 2),
                Generator::polynomial("t", 1, 1, 1),
            ],
        )
    }

    #[test]
    fn chow_height_and_shift() {
        let t = Tridegree::new(0, 3, 2);
        assert_eq!(t.chow_height(), 1);
        for j in 1..6 {
            let d = Tridegree::differential_shift(j);
            assert_eq!(t.add(&d).chow_height(), t.chow_height() - 1);
        }
    }

    #[test]
    fn koszul_signs() {
        let a = sample_presentation();
        let r1 = a.generator_element(0);
        let r2 = a.generator_element(1);
        let t = a.generator_element(2);
        // odd * odd anticommutes
        let fwd = a.mul(&r1, &r2);
        let bwd = a.mul(&r2, &r1);
        assert_eq!(fwd, a.neg(&bwd));
        // t is even (s + p = 2); it commutes with everything
        assert_eq!(a.mul(&r1, &t), a.mul(&t, &r1));
        // exterior squares vanish
        assert!(a.mul(&r1, &r1).is_zero());
        // associativity with signs
        let x = a.add(&r1, &a.mul(&r2, &t));
        let y = a.add(&t, &r2);
        let z = a.add(&r1, &t);
        let lhs = a.mul(&a.mul(&x, &y), &z);
        let rhs = a.mul(&x, &a.mul(&y, &z));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn degree_arithmetic() {
        let a = sample_presentation();
        let m = Monomial(vec![1, 1, 2]);
        assert_eq!(a.monomial_degree(&m), Tridegree::new(2, 6, 5));
        let x = a.mul(&a.generator_element(0), &a.generator_element(2));
        assert_eq!(a.element_degree(&x), Some(Tridegree::new(1, 2, 2)));
        let mixed = a.add(&a.generator_element(0), &a.generator_element(1));
        assert_eq!(a.element_degree(&mixed), None);
    }

    #[test]
    fn monomial_enumeration() {
        let a = sample_presentation();
        // weight 2: r1*t, r2, t^2
        let found = a.monomials_of_degree(Tridegree::new(1, 2, 2));
        assert_eq!(found, vec![Monomial(vec![1, 0, 1])]);
        let found = a.monomials_of_degree(Tridegree::new(2, 2, 2));
        assert_eq!(found, vec![Monomial(vec![0, 0, 2])]);
        let found = a.monomials_of_degree(Tridegree::new(0, 3, 2));
        assert_eq!(found, vec![Monomial(vec![0, 1, 0])]);
        assert!(a.monomials_of_degree(Tridegree::new(0, 1, 5)).is_empty());
    }

    #[test]
    fn render_parse_round_trip() {
        let a = sample_presentation();
        let r1 = a.generator_element(0);
        let r2 = a.generator_element(1);
        let t = a.generator_element(2);
        let x = a.sub(
            &a.add(&a.scale(&a.mul(&r1, &a.pow(&t, 3)), &a.ring.from_int(2)), &r2),
            &a.pow(&t, 2),
        );
        let s = a.render_element(&x);
        assert_eq!(s, "-t^2 + r2 + 2*r1*t^3");
        assert_eq!(a.parse_element(&s).unwrap(), x);
        assert_eq!(a.parse_element("0").unwrap(), AlgebraElement::zero());
        assert_eq!(a.parse_element("-r1 + 1/2*t").unwrap(), {
            let half = a.ring.inverse(&a.ring.from_int(2)).unwrap();
            a.add(&a.neg(&r1), &a.scale(&t, &half))
        });
        assert!(a.parse_element("bogus").is_err());
        assert!(a.parse_element("r1^2").is_err());
    }

    #[test]
    fn render_parse_random_round_trip() {
        use rand::{Rng, SeedableRng};
        let a = sample_presentation();
        let mut rng = rand::rngs::StdRng::seed_from_u64(99);
        for _ in 0..200 {
            let mut x = AlgebraElement::zero();
            for _ in 0..rng.gen_range(0..5) {
                let m = Monomial(vec![
                    rng.gen_range(0..2),
                    rng.gen_range(0..2),
                    rng.gen_range(0..4),
                ]);
                let c = a.ring.from_int(rng.gen_range(-5..=5));
                x = a.add(&x, &AlgebraElement::term(m, c));
            }
            let s = a.render_element(&x);
            assert_eq!(a.parse_element(&s).unwrap(), x, "input {s:?}");
        }
    }

    #[test]
    fn input_rings() {
        let q = CoeffRing::Rationals;
        let g = gln_cohomology(&q, 3, false).unwrap();
        assert_eq!(g.ngens(), 3);
        assert_eq!(g.generators[2].degree, Tridegree::new(0, 5, 3));

        let st = stiefel_cohomology(&q, 5, 2, false).unwrap();
        assert_eq!(st.generators[0].name, "r4");
        assert_eq!(st.generators[1].name, "r5");

        // gating: Z is rejected, Z/2 needs the square-root declaration
        assert!(gln_cohomology(&CoeffRing::Integers, 2, false).is_err());
        let z2 = CoeffRing::zmod(2).unwrap();
        assert!(gln_cohomology(&z2, 2, false).is_err());
        assert!(gln_cohomology(&z2, 2, true).is_ok());
        assert!(stiefel_cohomology(&q, 2, 3, false).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let a = sample_presentation();
        let x = a.add(&a.generator_element(0), &a.pow(&a.generator_element(2), 2));
        let json = serde_json::to_string(&x).unwrap();
        let back: AlgebraElement = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        let pj = serde_json::to_string(&a).unwrap();
        let pa: AlgebraPresentation = serde_json::from_str(&pj).unwrap();
        assert_eq!(pa, a);
    }
}
