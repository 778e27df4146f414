//! Integer symmetric-function toolkit: elementary symmetric polynomials,
//! weight polynomials, monic division, the approximate extension of a short
//! weight vector, prime splitting, and the antisymmetric decomposition.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::coeff::{odd_primes_up_to, CoeffRing, RingElement};
use crate::error::Error;

/// A finite list of integer weights.
pub type WeightVector = Vec<i64>;

/// Integer polynomial in one variable, coefficients ascending in the power
/// of z; the leading coefficient is nonzero unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial(Vec<BigInt>);

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial(Vec::new())
    }

    pub fn one() -> Self {
        IntPolynomial(vec![BigInt::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.0.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_monic(&self) -> bool {
        self.0.last().map_or(false, |c| c.is_one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, c) in out.iter_mut().enumerate() {
            *c = self.coeff(i) - other.coeff(i);
        }
        Self::new(out)
    }

    pub fn eval_mod(&self, x: u64, p: u64) -> u64 {
        let p = p as u128;
        let mut acc: u128 = 0;
        for c in self.0.iter().rev() {
            let c = c.mod_floor(&BigInt::from(p)).to_u64_digits().1;
            let c = *c.first().unwrap_or(&0) as u128;
            acc = (acc * x as u128 + c) % p;
        }
        acc as u64
    }
}

/// The i-th elementary symmetric polynomial of the entries of `v`.
pub fn elementary_symmetric(i: usize, v: &[i64]) -> Result<BigInt, Error> {
    if i > v.len() {
        return Err(Error::OutOfRange(format!(
            "sigma_{i} of a vector of length {}",
            v.len()
        )));
    }
    // incremental expansion of prod (1 + v_j t), degree capped at i
    let mut coeffs = vec![BigInt::zero(); i + 1];
    coeffs[0] = BigInt::one();
    for &w in v {
        for k in (1..=i).rev() {
            let t = &coeffs[k - 1] * BigInt::from(w);
            coeffs[k] += t;
        }
    }
    Ok(coeffs[i].clone())
}

/// The monic polynomial with the entries of `v` as roots.
pub fn weight_polynomial(v: &[i64]) -> IntPolynomial {
    let mut f = IntPolynomial::one();
    for &w in v {
        f = f.mul(&IntPolynomial::new(vec![BigInt::from(-w), BigInt::one()]));
    }
    f
}

/// Long division by a monic divisor; returns `(q, r)` with `f = g q + r`
/// and `deg r < deg g`.
pub fn poly_divmod(f: &IntPolynomial, g: &IntPolynomial) -> Result<(IntPolynomial, IntPolynomial), Error> {
    if !g.is_monic() {
        return Err(Error::Precondition("divisor must be monic".into()));
    }
    let dg = g.degree().expect("monic polynomial is nonzero");
    let mut rem = f.0.clone();
    if rem.len() <= dg {
        return Ok((IntPolynomial::zero(), f.clone()));
    }
    let mut q = vec![BigInt::zero(); rem.len() - dg];
    for k in (dg..rem.len()).rev() {
        let c = rem[k].clone();
        if c.is_zero() {
            continue;
        }
        q[k - dg] = c.clone();
        for (j, gj) in g.0.iter().enumerate() {
            let t = &c * gj;
            rem[k - dg + j] -= t;
        }
    }
    Ok((IntPolynomial::new(q), IntPolynomial::new(rem)))
}

/// Weight polynomials, quotient, remainder, and elementary symmetric values
/// of the approximate extension of `v` to the length of `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VexResult {
    pub f_u: IntPolynomial,
    pub f_v: IntPolynomial,
    pub q: IntPolynomial,
    pub r: IntPolynomial,
    /// sigma_1 .. sigma_n of the approximate extension, read off the
    /// coefficients of `f_v * q` by Vieta.
    pub sigma_vex: Vec<BigInt>,
}

/// Approximate extension of `v` to `u`: divides `f_u` by `f_v` and records
/// the symmetric functions of the padded root multiset.
pub fn vex(u: &[i64], v: &[i64]) -> Result<VexResult, Error> {
    if v.len() >= u.len() {
        return Err(Error::Precondition(format!(
            "vex requires len(v) < len(u), got {} and {}",
            v.len(),
            u.len()
        )));
    }
    let n = u.len();
    let f_u = weight_polynomial(u);
    let f_v = weight_polynomial(v);
    let (q, r) = poly_divmod(&f_u, &f_v)?;
    let fvq = f_v.mul(&q);
    let sigma_vex = (1..=n)
        .map(|i| {
            let c = fvq.coeff(n - i);
            if i % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    Ok(VexResult {
        f_u,
        f_v,
        q,
        r,
        sigma_vex,
    })
}

/// `sigma_i(u) - sigma_i(vex_u(v))`, cross-checked against the remainder
/// coefficient identity `(-1)^i * [z^{n-i}] r`.
pub fn sigma_difference(u: &[i64], v: &[i64], i: usize) -> Result<BigInt, Error> {
    let n = u.len();
    if i == 0 || i > n {
        return Err(Error::OutOfRange(format!("sigma index {i} for n={n}")));
    }
    let vx = vex(u, v)?;
    let direct = elementary_symmetric(i, u)? - &vx.sigma_vex[i - 1];
    let from_r = {
        let c = vx.r.coeff(n - i);
        if i % 2 == 0 {
            c
        } else {
            -c
        }
    };
    if direct != from_r {
        return Err(Error::Internal(format!(
            "sigma-difference routes disagree for u={u:?} v={v:?} i={i}: {direct} vs {from_r}"
        )));
    }
    Ok(direct)
}

/// True when the stated alternative sign `(-1)^{n-i}` would give a different
/// value for this difference; callers surface this as a note.
pub fn alternative_sign_disagrees(n: usize, i: usize, difference: &BigInt) -> bool {
    !difference.is_zero() && (n - i) % 2 != i % 2
}

/// Odd primes up to `max_prime` over which `q` splits into linear factors,
/// with the root multiset for each.
pub fn split_primes(q: &IntPolynomial, max_prime: u64) -> Result<Vec<(u64, Vec<u64>)>, Error> {
    let deg = q.degree().unwrap_or(0);
    if deg == 0 {
        return Err(Error::Precondition("split test requires a nonconstant polynomial".into()));
    }
    let mut out = Vec::new();
    'primes: for p in odd_primes_up_to(max_prime) {
        let lead = q.coeffs()[deg].mod_floor(&BigInt::from(p));
        if lead.is_zero() {
            continue; // degree drops mod p
        }
        // deflate roots one at a time by synthetic division mod p
        let mut coeffs: Vec<u64> = q
            .coeffs()
            .iter()
            .map(|c| {
                let c = c.mod_floor(&BigInt::from(p));
                *c.to_u64_digits().1.first().unwrap_or(&0)
            })
            .collect();
        let mut roots = Vec::new();
        while coeffs.len() > 1 {
            let mut found = None;
            for x in 0..p {
                if eval_mod_u64(&coeffs, x, p) == 0 {
                    found = Some(x);
                    break;
                }
            }
            match found {
                Some(x) => {
                    roots.push(x);
                    coeffs = deflate(&coeffs, x, p);
                }
                None => continue 'primes,
            }
        }
        roots.sort_unstable();
        out.push((p, roots));
    }
    Ok(out)
}

fn eval_mod_u64(coeffs: &[u64], x: u64, p: u64) -> u64 {
    let (x, p) = (x as u128, p as u128);
    let mut acc: u128 = 0;
    for &c in coeffs.iter().rev() {
        acc = (acc * x + c as u128) % p;
    }
    acc as u64
}

/// Synthetic division of `coeffs` (ascending) by `z - x` mod p; the
/// remainder is known to vanish.
fn deflate(coeffs: &[u64], x: u64, p: u64) -> Vec<u64> {
    let n = coeffs.len();
    let mut out = vec![0u64; n - 1];
    let mut carry: u128 = 0;
    for k in (1..n).rev() {
        carry = (coeffs[k] as u128 + carry * x as u128) % p as u128;
        out[k - 1] = carry as u64;
    }
    out
}

/// Sparse multivariate polynomial in `i` pairs of variables `c_j`, `c'_j`.
/// Exponent keys list the `c` exponents first, then the `c'` exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairPolynomial {
    pub pairs: usize,
    pub terms: BTreeMap<Vec<u32>, RingElement>,
}

impl PairPolynomial {
    pub fn zero(pairs: usize) -> Self {
        PairPolynomial {
            pairs,
            terms: BTreeMap::new(),
        }
    }

    pub fn term(pairs: usize, exps: Vec<u32>, coeff: RingElement) -> Self {
        assert_eq!(exps.len(), 2 * pairs);
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        PairPolynomial { pairs, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_assign(&mut self, ring: &CoeffRing, other: &Self) {
        for (e, c) in &other.terms {
            let entry = self.terms.entry(e.clone()).or_insert_with(|| ring.zero());
            *entry = ring.add(entry, c);
            if entry.is_zero() {
                self.terms.remove(e);
            }
        }
    }

    pub fn add(&self, ring: &CoeffRing, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(ring, other);
        out
    }

    pub fn scale(&self, ring: &CoeffRing, c: &RingElement) -> Self {
        let mut out = Self::zero(self.pairs);
        for (e, a) in &self.terms {
            let v = ring.mul(a, c);
            if !v.is_zero() {
                out.terms.insert(e.clone(), v);
            }
        }
        out
    }

    pub fn mul(&self, ring: &CoeffRing, other: &Self) -> Self {
        let mut out = Self::zero(self.pairs);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let c = ring.mul(ca, cb);
                let entry = out.terms.entry(e).or_insert_with(|| ring.zero());
                *entry = ring.add(entry, &c);
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// The involution swapping `c_j` and `c'_j`.
    pub fn swap_pairs(&self) -> Self {
        let mut out = Self::zero(self.pairs);
        for (e, c) in &self.terms {
            let mut swapped = e[self.pairs..].to_vec();
            swapped.extend_from_slice(&e[..self.pairs]);
            out.terms.insert(swapped, c.clone());
        }
        out
    }
}

/// Writes an antisymmetric `f` as `sum_j (c_j - c'_j) f_j` with each `f_j`
/// fixed by the pair swap. Requires 2 invertible; `c_1 c'_1` over Z/2 is a
/// genuine counterexample.
pub fn antisymmetric_decompose(
    ring: &CoeffRing,
    f: &PairPolynomial,
) -> Result<Vec<PairPolynomial>, Error> {
    if !ring.two_is_invertible() {
        return Err(Error::Precondition(
            "antisymmetric decomposition requires 2 invertible in the coefficient ring".into(),
        ));
    }
    if !f.add(ring, &f.swap_pairs()).is_zero() {
        return Err(Error::Precondition("polynomial is not antisymmetric".into()));
    }
    let i = f.pairs;
    let half = ring
        .inverse(&ring.from_int(2))
        .expect("2 invertible checked above");

    // express f in the variables d_j = (c_j - c'_j)/2, e_j = (c_j + c'_j)/2,
    // i.e. substitute c_j = e_j + d_j, c'_j = e_j - d_j.  In the (d, e)
    // basis antisymmetry means every monomial has odd total d-degree.
    let mut in_de = PairPolynomial::zero(i);
    for (exps, coeff) in &f.terms {
        let mut term = PairPolynomial::term(i, vec![0; 2 * i], coeff.clone());
        for j in 0..2 * i {
            let var = j % i; // pair index
        let plus = j < i; // c_j = e + d, c'_j = e - d
            let mut base = PairPolynomial::zero(i);
            // first block of the key = d exponents, second block = e exponents
            let mut d_exp = vec![0; 2 * i];
            d_exp[var] = 1;
            let mut e_exp = vec![0; 2 * i];
            e_exp[i + var] = 1;
            base.add_assign(ring, &PairPolynomial::term(i, e_exp, ring.one()));
            let d_coeff = if plus { ring.one() } else { ring.from_int(-1) };
            base.add_assign(ring, &PairPolynomial::term(i, d_exp, d_coeff));
            for _ in 0..exps[j] {
                term = term.mul(ring, &base);
            }
        }
        in_de.add_assign(ring, &term);
    }

    // assign each monomial to the least pair index with odd d-exponent
    let mut parts_de = vec![PairPolynomial::zero(i); i];
    for (exps, coeff) in &in_de.terms {
        let total_d: u32 = exps[..i].iter().sum();
        if total_d % 2 == 0 {
            return Err(Error::Internal(
                "even-d monomial survived in an antisymmetric polynomial".into(),
            ));
        }
        let j = (0..i)
            .find(|&j| exps[j] % 2 == 1)
            .expect("odd total degree implies an odd exponent");
        let mut e = exps.clone();
        e[j] -= 1;
        // f_j picks up monomial / (2 d_j)
        parts_de[j].add_assign(
            ring,
            &PairPolynomial::term(i, e, ring.mul(coeff, &half)),
        );
    }

    // convert each part back to the c, c' variables:
    // d_j = (c_j - c'_j)/2, e_j = (c_j + c'_j)/2
    let mut out = Vec::with_capacity(i);
    for part in parts_de {
        let mut in_c = PairPolynomial::zero(i);
        for (exps, coeff) in &part.terms {
            let mut term = PairPolynomial::term(i, vec![0; 2 * i], coeff.clone());
            for j in 0..2 * i {
                let var = j % i;
                let is_d = j < i;
                let mut c_exp = vec![0; 2 * i];
                c_exp[var] = 1;
                let mut cp_exp = vec![0; 2 * i];
                cp_exp[i + var] = 1;
                let mut base = PairPolynomial::term(i, c_exp, half.clone());
                let second = if is_d {
                    ring.neg(&half)
                } else {
                    half.clone()
                };
                base.add_assign(ring, &PairPolynomial::term(i, cp_exp, second));
                for _ in 0..exps[j] {
                    term = term.mul(ring, &base);
                }
            }
            in_c.add_assign(ring, &term);
        }
        out.push(in_c);
    }
    Ok(out)
}

/// Reconstructs `sum_j (c_j - c'_j) f_j`; used to verify decompositions.
pub fn reconstruct_antisymmetric(
    ring: &CoeffRing,
    parts: &[PairPolynomial],
) -> PairPolynomial {
    let i = parts.len();
    let mut out = PairPolynomial::zero(i);
    for (j, part) in parts.iter().enumerate() {
        let mut c_exp = vec![0; 2 * i];
        c_exp[j] = 1;
        let mut cp_exp = vec![0; 2 * i];
        cp_exp[i + j] = 1;
        let mut diff = PairPolynomial::term(i, c_exp, ring.one());
        diff.add_assign(ring, &PairPolynomial::term(i, cp_exp, ring.from_int(-1)));
        out.add_assign(ring, &diff.mul(ring, part));
    }
    out
}
