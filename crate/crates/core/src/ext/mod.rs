//! Relative Ext over finite algebras via truncated bar resolutions, plus
//! the closed-form Ext constructors the engine cross-checks against.
//!
//! The algebras of interest are duals of exterior Hopf algebras on primitive
//! generators; modules are duals of comodule algebras. Dualization of a
//! coassociative structure is a plain transpose, so associativity of the
//! dual side comes for free and is verified exhaustively anyway.

mod bar;
mod closed_form;

pub use bar::{
    bar_resolution, ext_product_check, ext_via_bar, BarComplex, Cochain, GradedExtResult,
    ProductExpectation, ProductSample, Tuple,
};
pub use closed_form::{
    annihilator_is_zero, ext_closed_form, ext_closed_form_eta, presentation_ranks, EtaExtension,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coeff::{CoeffRing, RingElement};
use crate::error::Error;

/// Sparse linear combination of basis elements.
pub type Sparse = Vec<(usize, RingElement)>;

/// A finite free algebra over the coefficient ring, given by structure
/// constants, with a distinguished unit basis element and an augmentation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteAlgebra {
    pub ring: CoeffRing,
    pub labels: Vec<String>,
    /// Internal bidegree `(p, w)` of each basis element.
    pub degrees: Vec<(i64, i64)>,
    pub unit: usize,
    /// `mul[i][j]` = coordinates of the product of basis elements i and j.
    pub mul: Vec<Vec<Sparse>>,
    /// Augmentation, an algebra map to the base.
    pub counit: Vec<RingElement>,
}

pub(crate) fn sparse_add(
    ring: &CoeffRing,
    acc: &mut BTreeMap<usize, RingElement>,
    k: usize,
    c: &RingElement,
) {
    let entry = acc.entry(k).or_insert_with(|| ring.zero());
    *entry = ring.add(entry, c);
    if entry.is_zero() {
        acc.remove(&k);
    }
}

pub(crate) fn sparse_from(acc: BTreeMap<usize, RingElement>) -> Sparse {
    acc.into_iter().collect()
}

impl FiniteAlgebra {
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    /// Product of two sparse elements via the structure constants.
    pub fn mul_sparse(&self, a: &Sparse, b: &Sparse) -> Sparse {
        let mut acc = BTreeMap::new();
        for (i, ca) in a {
            for (j, cb) in b {
                let c = self.ring.mul(ca, cb);
                for (k, ck) in &self.mul[*i][*j] {
                    sparse_add(&self.ring, &mut acc, *k, &self.ring.mul(&c, ck));
                }
            }
        }
        sparse_from(acc)
    }

    pub fn counit_of(&self, a: &Sparse) -> RingElement {
        a.iter().fold(self.ring.zero(), |acc, (i, c)| {
            self.ring.add(&acc, &self.ring.mul(c, &self.counit[*i]))
        })
    }

    /// Checks unit laws, associativity on all basis triples, the grading of
    /// the table, and multiplicativity of the augmentation.
    pub fn validate(&self) -> Result<(), Error> {
        let n = self.rank();
        let bad = |msg: String| Err(Error::Precondition(msg));
        if self.degrees.len() != n || self.mul.len() != n || self.counit.len() != n {
            return bad("algebra table sizes disagree".into());
        }
        if self.degrees[self.unit] != (0, 0) {
            return bad("unit must sit in degree (0, 0)".into());
        }
        let basis = |i: usize| vec![(i, self.ring.one())];
        for i in 0..n {
            if self.mul_sparse(&basis(self.unit), &basis(i)) != basis(i)
                || self.mul_sparse(&basis(i), &basis(self.unit)) != basis(i)
            {
                return bad(format!("unit law fails at basis element {i}"));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let (pi, wi) = self.degrees[i];
                let (pj, wj) = self.degrees[j];
                for (k, c) in &self.mul[i][j] {
                    if c.is_zero() {
                        return bad("explicit zero in multiplication table".into());
                    }
                    if self.degrees[*k] != (pi + pj, wi + wj) {
                        return bad(format!("product of {i} and {j} breaks the grading"));
                    }
                }
                let e = self.ring.mul(&self.counit[i], &self.counit[j]);
                if self.counit_of(&self.mul[i][j]) != e {
                    return bad(format!("augmentation is not multiplicative at ({i}, {j})"));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let ij_k = self.mul_sparse(&self.mul[i][j], &basis(k));
                    let i_jk = self.mul_sparse(&basis(i), &self.mul[j][k]);
                    if ij_k != i_jk {
                        return bad(format!("associativity fails at ({i}, {j}, {k})"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A finite free module over a [`FiniteAlgebra`], optionally carrying the
/// coproduct dual to a ring structure on the primal side (used for the cup
/// product on Ext).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteModule {
    pub algebra: FiniteAlgebra,
    pub labels: Vec<String>,
    pub degrees: Vec<(i64, i64)>,
    /// `action[a][x]` = coordinates of (algebra basis a) acting on
    /// (module basis x).
    pub action: Vec<Vec<Sparse>>,
    /// `coproduct[x]` = list of `(left, right, coefficient)` summands.
    pub coproduct: Option<Vec<Vec<(usize, usize, RingElement)>>>,
}

impl FiniteModule {
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn act_sparse(&self, a: &Sparse, x: &Sparse) -> Sparse {
        let ring = &self.algebra.ring;
        let mut acc = BTreeMap::new();
        for (i, ca) in a {
            for (j, cx) in x {
                let c = ring.mul(ca, cx);
                for (k, ck) in &self.action[*i][*j] {
                    sparse_add(ring, &mut acc, *k, &ring.mul(&c, ck));
                }
            }
        }
        sparse_from(acc)
    }

    /// Checks the unit action, compatibility with the multiplication table
    /// on all pairs, and the grading.
    pub fn validate(&self) -> Result<(), Error> {
        self.algebra.validate()?;
        let ring = &self.algebra.ring;
        let n = self.algebra.rank();
        let m = self.rank();
        let bad = |msg: String| Err(Error::Precondition(msg));
        if self.action.len() != n || self.degrees.len() != m {
            return bad("module table sizes disagree".into());
        }
        let mb = |x: usize| vec![(x, ring.one())];
        let ab = |i: usize| vec![(i, ring.one())];
        for x in 0..m {
            if self.act_sparse(&ab(self.algebra.unit), &mb(x)) != mb(x) {
                return bad(format!("unit does not fix module basis {x}"));
            }
        }
        for i in 0..n {
            let (pi, wi) = self.algebra.degrees[i];
            for x in 0..m {
                let (px, wx) = self.degrees[x];
                for (y, c) in &self.action[i][x] {
                    if c.is_zero() {
                        return bad("explicit zero in action table".into());
                    }
                    if self.degrees[*y] != (pi + px, wi + wx) {
                        return bad(format!("action of {i} on {x} breaks the grading"));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for x in 0..m {
                    let lhs = self.act_sparse(&ab(i), &self.act_sparse(&ab(j), &mb(x)));
                    let rhs = self.act_sparse(&self.algebra.mul[i][j], &mb(x));
                    if lhs != rhs {
                        return bad(format!("action incompatible with product at ({i}, {j}, {x})"));
                    }
                }
            }
        }
        if let Some(cop) = &self.coproduct {
            if cop.len() != m {
                return bad("coproduct table size disagrees".into());
            }
            for (x, terms) in cop.iter().enumerate() {
                let (px, wx) = self.degrees[x];
                for (l, r, c) in terms {
                    if c.is_zero() {
                        return bad("explicit zero in coproduct table".into());
                    }
                    let (pl, wl) = self.degrees[*l];
                    let (pr, wr) = self.degrees[*r];
                    if (pl + pr, wl + wr) != (px, wx) {
                        return bad(format!("coproduct of {x} breaks the grading"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// How a module generator interacts with the Hopf algebra generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Coaction {
    /// `g -> a_i (x) 1 + 1 (x) g`, paired with Hopf generator `i`.
    Primitive(usize),
    /// `g -> 1 (x) g`.
    Trivial,
    /// `g -> 1 (x) g + sum_i b_i a_i (x) 1`, scalars indexed over the Hopf
    /// generators.
    Eta(Vec<RingElement>),
}

// ---- exterior subset algebra on bitmask-indexed bases ----

fn bits_ascending(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

/// Sign of `e_S * e_T` for subset monomials in ascending order, `None` when
/// the subsets meet. `parities[i]` is the Koszul parity of generator `i`.
fn exterior_sign(parities: &[u8], s: u32, t: u32) -> Option<i64> {
    if s & t != 0 {
        return None;
    }
    // each odd element of t crosses the odd elements of s above it
    let mut crossings = 0u32;
    for j in bits_ascending(t) {
        if parities[j] == 0 {
            continue;
        }
        for i in bits_ascending(s) {
            if i > j && parities[i] == 1 {
                crossings += 1;
            }
        }
    }
    Some(if crossings % 2 == 0 { 1 } else { -1 })
}

fn subset_parity(parities: &[u8], s: u32) -> u8 {
    (bits_ascending(s).map(|i| parities[i] as u32).sum::<u32>() % 2) as u8
}

fn subset_degree(degrees: &[(i64, i64)], s: u32) -> (i64, i64) {
    bits_ascending(s).fold((0, 0), |(p, w), i| (p + degrees[i].0, w + degrees[i].1))
}

fn subset_label(names: &[String], s: u32) -> String {
    let parts: Vec<&str> = bits_ascending(s).map(|i| names[i].as_str()).collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Element of a tensor square `A (x) B` of subset algebras.
type Tensor = BTreeMap<(u32, u32), RingElement>;

fn tensor_mul(
    ring: &CoeffRing,
    a_par: &[u8],
    b_par: &[u8],
    x: &Tensor,
    y: &Tensor,
) -> Tensor {
    let mut out: Tensor = BTreeMap::new();
    for ((a, b), cx) in x {
        for ((c, d), cy) in y {
            let Some(s1) = exterior_sign(a_par, *a, *c) else { continue };
            let Some(s2) = exterior_sign(b_par, *b, *d) else { continue };
            // move c (left factor of y) past b (right factor of x)
            let cross = subset_parity(b_par, *b) * subset_parity(a_par, *c);
            let sign = s1 * s2 * if cross == 1 { -1 } else { 1 };
            let coeff = ring.scale(&ring.mul(cx, cy), sign);
            if coeff.is_zero() {
                continue;
            }
            let key = (a | c, b | d);
            let entry = out.entry(key).or_insert_with(|| ring.zero());
            *entry = ring.add(entry, &coeff);
            if entry.is_zero() {
                out.remove(&key);
            }
        }
    }
    out
}

/// Coproduct of the subset monomial `e_K` in the exterior Hopf algebra with
/// primitive generators.
fn primitive_coproduct(ring: &CoeffRing, parities: &[u8], k: u32) -> Tensor {
    let mut acc: Tensor = BTreeMap::new();
    acc.insert((0, 0), ring.one());
    for i in bits_ascending(k) {
        let mut gen: Tensor = BTreeMap::new();
        gen.insert((1 << i, 0), ring.one());
        gen.insert((0, 1 << i), ring.one());
        acc = tensor_mul(ring, parities, parities, &acc, &gen);
    }
    acc
}

/// Dual algebra of the exterior Hopf algebra on primitive generators with
/// the given internal bidegrees. Basis elements are indexed by subsets
/// (bitmask order); the class dual to the subset monomial keeps its degree.
pub fn dual_exterior_hopf(
    ring: &CoeffRing,
    gens: &[(String, (i64, i64))],
) -> Result<FiniteAlgebra, Error> {
    let k = gens.len();
    if k > 16 {
        return Err(Error::OutOfRange("more than 16 Hopf generators".into()));
    }
    let names: Vec<String> = gens.iter().map(|(n, _)| n.clone()).collect();
    let degrees: Vec<(i64, i64)> = gens.iter().map(|(_, d)| *d).collect();
    let parities: Vec<u8> = degrees.iter().map(|(p, _)| (p.rem_euclid(2)) as u8).collect();
    let n = 1usize << k;
    let mut mul = vec![vec![Vec::new(); n]; n];
    for kk in 0..n as u32 {
        // scatter the coproduct of e_K into the dual multiplication table:
        // the coefficient of e_{J1} (x) e_{J2} is the coefficient of the
        // dual basis element at index K in the product of duals J1, J2
        for ((j1, j2), c) in primitive_coproduct(ring, &parities, kk) {
            mul[j1 as usize][j2 as usize].push((kk as usize, c));
        }
    }
    for row in &mut mul {
        for cell in row.iter_mut() {
            cell.sort_by_key(|(k, _)| *k);
        }
    }
    let mut counit = vec![ring.zero(); n];
    counit[0] = ring.one();
    let alg = FiniteAlgebra {
        ring: ring.clone(),
        labels: (0..n as u32).map(|s| subset_label(&names, s)).collect(),
        degrees: (0..n as u32).map(|s| subset_degree(&degrees, s)).collect(),
        unit: 0,
        mul,
        counit,
    };
    alg.validate()?;
    Ok(alg)
}

/// The group ring of Z/2: basis `{1, g}` with `g^2 = 1` in degree `(0, 0)`.
pub fn z2_group_ring(ring: &CoeffRing) -> FiniteAlgebra {
    let one = ring.one();
    let b = |i: usize| vec![(i, one.clone())];
    let alg = FiniteAlgebra {
        ring: ring.clone(),
        labels: vec!["1".into(), "g".into()],
        degrees: vec![(0, 0), (0, 0)],
        unit: 0,
        mul: vec![vec![b(0), b(1)], vec![b(1), b(0)]],
        counit: vec![one.clone(), one],
    };
    alg.validate().expect("group ring is associative");
    alg
}

/// The rank-one module on which the algebra acts through its augmentation.
pub fn trivial_module(alg: &FiniteAlgebra) -> FiniteModule {
    let ring = alg.ring.clone();
    let action = alg
        .counit
        .iter()
        .map(|e| {
            vec![if e.is_zero() {
                Vec::new()
            } else {
                vec![(0usize, e.clone())]
            }]
        })
        .collect();
    let m = FiniteModule {
        algebra: alg.clone(),
        labels: vec!["n".into()],
        degrees: vec![(0, 0)],
        action,
        coproduct: Some(vec![vec![(0, 0, ring.one())]]),
    };
    m.validate().expect("trivial module is a module");
    m
}

/// The algebra as a module over itself.
pub fn regular_module(alg: &FiniteAlgebra) -> FiniteModule {
    let m = FiniteModule {
        algebra: alg.clone(),
        labels: alg.labels.clone(),
        degrees: alg.degrees.clone(),
        action: alg.mul.clone(),
        coproduct: None,
    };
    m.validate().expect("regular module is a module");
    m
}

/// Direct sum of two modules over the same algebra.
pub fn direct_sum_module(a: &FiniteModule, b: &FiniteModule) -> Result<FiniteModule, Error> {
    if a.algebra != b.algebra {
        return Err(Error::PresentationMismatch(
            "direct sum over different algebras".into(),
        ));
    }
    let off = a.rank();
    let mut action = Vec::with_capacity(a.algebra.rank());
    for i in 0..a.algebra.rank() {
        let mut row = a.action[i].clone();
        for cell in &b.action[i] {
            row.push(cell.iter().map(|(k, c)| (k + off, c.clone())).collect());
        }
        action.push(row);
    }
    let m = FiniteModule {
        algebra: a.algebra.clone(),
        labels: a
            .labels
            .iter()
            .cloned()
            .chain(b.labels.iter().map(|l| format!("{l}'")))
            .collect(),
        degrees: a.degrees.iter().chain(&b.degrees).cloned().collect(),
        action,
        coproduct: None,
    };
    m.validate()?;
    Ok(m)
}

/// Builds the dual pair for a comodule algebra: the Hopf algebra is exterior
/// on primitive generators `gens`, the comodule is exterior on `module_gens`
/// with the listed coactions, and both are dualized by transposition.
pub fn comodule_dual(
    ring: &CoeffRing,
    gens: &[(String, (i64, i64))],
    module_gens: &[(String, (i64, i64), Coaction)],
) -> Result<(FiniteAlgebra, FiniteModule), Error> {
    let alg = dual_exterior_hopf(ring, gens)?;
    let kb = module_gens.len();
    if kb > 16 {
        return Err(Error::OutOfRange("more than 16 module generators".into()));
    }
    let a_par: Vec<u8> = gens
        .iter()
        .map(|(_, (p, _))| (p.rem_euclid(2)) as u8)
        .collect();
    let b_names: Vec<String> = module_gens.iter().map(|(n, _, _)| n.clone()).collect();
    let b_degrees: Vec<(i64, i64)> = module_gens.iter().map(|(_, d, _)| *d).collect();
    let b_par: Vec<u8> = b_degrees
        .iter()
        .map(|(p, _)| (p.rem_euclid(2)) as u8)
        .collect();
    for (i, (name, _, co)) in module_gens.iter().enumerate() {
        match co {
            Coaction::Primitive(h) => {
                if *h >= gens.len() {
                    return Err(Error::OutOfRange(format!(
                        "coaction of {name:?} pairs with missing Hopf generator {h}"
                    )));
                }
                if a_par[*h] != b_par[i] {
                    return Err(Error::Precondition(format!(
                        "paired generators {name:?} and {:?} have different parities",
                        gens[*h].0
                    )));
                }
            }
            Coaction::Eta(b) => {
                if b.len() != gens.len() {
                    return Err(Error::Precondition(format!(
                        "eta scalars for {name:?} must match the {} Hopf generators",
                        gens.len()
                    )));
                }
                for (j, bj) in b.iter().enumerate() {
                    if !bj.is_zero() && (a_par[j] != 1 || b_par[i] != 1) {
                        return Err(Error::Precondition(format!(
                            "eta coaction of {name:?} needs odd generators on both sides"
                        )));
                    }
                }
            }
            Coaction::Trivial => {}
        }
    }

    // coaction images of the generators inside A (x) B
    let gen_psi: Vec<Tensor> = module_gens
        .iter()
        .enumerate()
        .map(|(i, (_, _, co))| {
            let mut t: Tensor = BTreeMap::new();
            t.insert((0, 1 << i), ring.one());
            match co {
                Coaction::Trivial => {}
                Coaction::Primitive(h) => {
                    t.insert((1 << h, 0), ring.one());
                }
                Coaction::Eta(b) => {
                    for (j, bj) in b.iter().enumerate() {
                        if !bj.is_zero() {
                            t.insert((1 << j, 0), bj.clone());
                        }
                    }
                }
            }
            t
        })
        .collect();

    // psi on subset monomials, extended multiplicatively in ascending order
    let nb = 1usize << kb;
    let mut psi: Vec<Tensor> = Vec::with_capacity(nb);
    for t in 0..nb as u32 {
        let mut acc: Tensor = BTreeMap::new();
        acc.insert((0, 0), ring.one());
        for i in bits_ascending(t) {
            acc = tensor_mul(ring, &a_par, &b_par, &acc, &gen_psi[i]);
        }
        psi.push(acc);
    }

    // dual action: the coefficient of e_J (x) b_T in psi(b_U) contributes
    // to (dual J) acting on (dual T) with output (dual U)
    let na = alg.rank();
    let mut action = vec![vec![Vec::new(); nb]; na];
    for (u, t) in psi.iter().enumerate() {
        for ((j, tt), c) in t {
            action[*j as usize][*tt as usize].push((u, c.clone()));
        }
    }
    for row in &mut action {
        for cell in row.iter_mut() {
            cell.sort_by_key(|(k, _)| *k);
        }
    }

    // dual coproduct from the exterior multiplication of B
    let mut coproduct = vec![Vec::new(); nb];
    for t1 in 0..nb as u32 {
        for t2 in 0..nb as u32 {
            if let Some(sign) = exterior_sign(&b_par, t1, t2) {
                coproduct[(t1 | t2) as usize].push((
                    t1 as usize,
                    t2 as usize,
                    ring.from_int(sign),
                ));
            }
        }
    }

    let module = FiniteModule {
        algebra: alg.clone(),
        labels: (0..nb as u32).map(|s| subset_label(&b_names, s)).collect(),
        degrees: (0..nb as u32).map(|s| subset_degree(&b_degrees, s)).collect(),
        action,
        coproduct: Some(coproduct),
    };
    module.validate()?;
    Ok((alg, module))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_exterior_small() {
        let q = CoeffRing::Rationals;
        let alg = dual_exterior_hopf(&q, &[("a".into(), (1, 1)), ("b".into(), (3, 2))]).unwrap();
        assert_eq!(alg.rank(), 4);
        // duals of primitives multiply to the dual of the product, up to sign
        let a = vec![(1usize, q.one())];
        let b = vec![(2usize, q.one())];
        let ab = alg.mul_sparse(&a, &b);
        assert_eq!(ab.len(), 1);
        assert_eq!(ab[0].0, 3);
        // odd times odd anticommutes
        let ba = alg.mul_sparse(&b, &a);
        assert_eq!(ba[0].0, 3);
        assert_eq!(alg.ring.add(&ab[0].1, &ba[0].1), q.zero());
        // squares vanish
        assert!(alg.mul_sparse(&a, &a).is_empty());
    }

    #[test]
    fn group_ring_and_modules() {
        let z = CoeffRing::Integers;
        let alg = z2_group_ring(&z);
        let g = vec![(1usize, z.one())];
        assert_eq!(alg.mul_sparse(&g, &g), vec![(0, z.one())]);
        let triv = trivial_module(&alg);
        assert_eq!(triv.act_sparse(&g, &vec![(0, z.one())]), vec![(0, z.one())]);
        let reg = regular_module(&alg);
        assert_eq!(reg.rank(), 2);
        let sum = direct_sum_module(&triv, &reg).unwrap();
        assert_eq!(sum.rank(), 3);
    }

    #[test]
    fn comodule_dualization() {
        let q = CoeffRing::Rationals;
        // A = Lambda(alpha, beta), B = Lambda(alpha', gamma)
        let gens = vec![("alpha".to_string(), (1, 1)), ("beta".to_string(), (3, 2))];
        let mods = vec![
            ("alpha'".to_string(), (1i64, 1i64), Coaction::Primitive(0)),
            ("gamma".to_string(), (5, 3), Coaction::Trivial),
        ];
        let (alg, module) = comodule_dual(&q, &gens, &mods).unwrap();
        assert_eq!(alg.rank(), 4);
        assert_eq!(module.rank(), 4);
        // the dual of alpha acts nontrivially (alpha' is not A-trivial)
        let da = vec![(1usize, q.one())];
        let dunit = vec![(0usize, q.one())];
        assert!(!module.act_sparse(&da, &dunit).is_empty());
        // the dual of beta acts trivially here (no eta)
        let db = vec![(2usize, q.one())];
        assert!(module.act_sparse(&db, &dunit).is_empty());
    }

    #[test]
    fn eta_coaction_dualizes_to_beta_action() {
        let q = CoeffRing::Rationals;
        let gens = vec![("beta".to_string(), (1, 1))];
        let mods = vec![(
            "eta".to_string(),
            (1i64, 1i64),
            Coaction::Eta(vec![q.from_int(3)]),
        )];
        let (_alg, module) = comodule_dual(&q, &gens, &mods).unwrap();
        // dual beta sends the dual unit to 3 * dual eta
        let db = vec![(1usize, q.one())];
        let dunit = vec![(0usize, q.one())];
        assert_eq!(module.act_sparse(&db, &dunit), vec![(1, q.from_int(3))]);
    }

    #[test]
    fn mismatched_parity_rejected() {
        let q = CoeffRing::Rationals;
        let gens = vec![("beta".to_string(), (2, 1))];
        let mods = vec![(
            "eta".to_string(),
            (1i64, 1i64),
            Coaction::Eta(vec![q.one()]),
        )];
        assert!(comodule_dual(&q, &gens, &mods).is_err());
    }
}
