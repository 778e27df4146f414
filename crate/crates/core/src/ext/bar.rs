//! Truncated bar resolutions and Ext as homology of the dualized complex.
//!
//! The normalized complex (entries from the augmentation ideal) is used for
//! Ext; the unnormalized one is available for cross-checks. Both split into
//! finite blocks by bar degree and internal bidegree, and one bar degree
//! beyond the requested bound is always built so kernels at the bound are
//! exact.

use std::collections::BTreeMap;

use crate::coeff::RingElement;
use crate::error::Error;
use crate::graded::Tridegree;
use crate::linalg::{self, ModuleShape};
use crate::par;

use super::{FiniteModule, Sparse};

/// Bar tuple: algebra element positions (into [`BarComplex::elements`]),
/// then the module basis index.
pub type Tuple = (Vec<usize>, usize);

type BlockKey = (usize, i64, i64);

/// Ext ranks and torsion per tridegree `(bar degree, p, w)`.
pub type GradedExtResult = BTreeMap<Tridegree, ModuleShape>;

#[derive(Debug, Clone)]
pub struct BarComplex {
    pub module: FiniteModule,
    pub reduced: bool,
    pub max_p: usize,
    pub max_weight: Option<i64>,
    /// Algebra basis indices usable in tuple entries.
    pub elements: Vec<usize>,
    elem_deg: Vec<(i64, i64)>,
    /// Entry product in element coordinates (normalized when `reduced`).
    prod: Vec<Vec<Sparse>>,
    /// Entry action on the module (normalized when `reduced`).
    act: Vec<Vec<Sparse>>,
    /// Augmentation of each element (zero in the reduced complex).
    eps: Vec<RingElement>,
    pub blocks: BTreeMap<BlockKey, Vec<Tuple>>,
    index: BTreeMap<BlockKey, BTreeMap<Tuple, usize>>,
    /// Chain differential per block with bar degree >= 1: rows indexed by
    /// the block basis, columns by the bar-degree-lower block at the same
    /// internal bidegree.
    pub d: BTreeMap<BlockKey, Vec<Vec<RingElement>>>,
}

/// A homogeneous bar cochain: a functional on the tuples of one block.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    pub s: usize,
    pub degree: (i64, i64),
    pub coeffs: BTreeMap<Tuple, RingElement>,
}

pub fn bar_resolution(
    module: &FiniteModule,
    max_p: usize,
    reduced: bool,
    max_weight: Option<i64>,
) -> Result<BarComplex, Error> {
    let alg = &module.algebra;
    let ring = alg.ring.clone();
    if alg
        .degrees
        .iter()
        .chain(&module.degrees)
        .any(|&(_, w)| w < 0)
    {
        return Err(Error::Precondition("negative weights in bar input".into()));
    }
    let elements: Vec<usize> = if reduced {
        (0..alg.rank()).filter(|&i| i != alg.unit).collect()
    } else {
        (0..alg.rank()).collect()
    };
    let pos_of: BTreeMap<usize, usize> = elements.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let elem_deg: Vec<(i64, i64)> = elements.iter().map(|&i| alg.degrees[i]).collect();

    // entry-level structure in element coordinates; normalization replaces
    // x by x - eps(x) 1 and projects products back off the unit
    let ne = elements.len();
    let mut prod = vec![vec![Vec::new(); ne]; ne];
    let mut act = vec![vec![Vec::new(); module.rank()]; ne];
    for (pi, &i) in elements.iter().enumerate() {
        for (pj, &j) in elements.iter().enumerate() {
            let mut acc: BTreeMap<usize, RingElement> = BTreeMap::new();
            for (k, c) in &alg.mul[i][j] {
                if let Some(&pk) = pos_of.get(k) {
                    super::sparse_add(&ring, &mut acc, pk, c);
                }
            }
            if reduced {
                // (x - eps x)(y - eps y) = xy - eps(x) y - eps(y) x + eps(x)eps(y)
                let ei = ring.neg(&alg.counit[i]);
                let ej = ring.neg(&alg.counit[j]);
                if !ei.is_zero() {
                    super::sparse_add(&ring, &mut acc, pj, &ei);
                }
                if !ej.is_zero() {
                    super::sparse_add(&ring, &mut acc, pi, &ej);
                }
            }
            prod[pi][pj] = super::sparse_from(acc);
        }
        for x in 0..module.rank() {
            let mut acc: BTreeMap<usize, RingElement> = BTreeMap::new();
            for (y, c) in &module.action[i][x] {
                super::sparse_add(&ring, &mut acc, *y, c);
            }
            if reduced && !alg.counit[i].is_zero() {
                super::sparse_add(&ring, &mut acc, x, &ring.neg(&alg.counit[i]));
            }
            act[pi][x] = super::sparse_from(acc);
        }
    }
    let eps: Vec<RingElement> = if reduced {
        vec![ring.zero(); ne]
    } else {
        elements.iter().map(|&i| alg.counit[i].clone()).collect()
    };

    // enumerate tuples per (bar degree, internal bidegree) with optional
    // weight pruning; zero-weight entries are bounded by the bar degree
    let mut blocks: BTreeMap<BlockKey, Vec<Tuple>> = BTreeMap::new();
    for p in 0..=max_p {
        for n in 0..module.rank() {
            let (np, nw) = module.degrees[n];
            if max_weight.map_or(false, |cap| nw > cap) {
                continue;
            }
            let mut stack = vec![0usize; p];
            enumerate_tuples(
                &elem_deg,
                max_weight,
                p,
                0,
                np,
                nw,
                &mut stack,
                &mut |tuple, tp, tw| {
                    blocks
                        .entry((p, tp, tw))
                        .or_default()
                        .push((tuple.to_vec(), n));
                },
            );
        }
    }
    for tuples in blocks.values_mut() {
        tuples.sort();
    }
    let index: BTreeMap<BlockKey, BTreeMap<Tuple, usize>> = blocks
        .iter()
        .map(|(k, v)| {
            (
                *k,
                v.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect(),
            )
        })
        .collect();

    let mut complex = BarComplex {
        module: module.clone(),
        reduced,
        max_p,
        max_weight,
        elements,
        elem_deg,
        prod,
        act,
        eps,
        blocks,
        index,
        d: BTreeMap::new(),
    };
    complex.build_differentials()?;
    Ok(complex)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_tuples(
    elem_deg: &[(i64, i64)],
    max_weight: Option<i64>,
    p: usize,
    pos: usize,
    acc_p: i64,
    acc_w: i64,
    stack: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize], i64, i64),
) {
    if pos == p {
        emit(stack, acc_p, acc_w);
        return;
    }
    for (e, &(ep, ew)) in elem_deg.iter().enumerate() {
        let w = acc_w + ew;
        if max_weight.map_or(false, |cap| w > cap) {
            continue;
        }
        stack[pos] = e;
        enumerate_tuples(elem_deg, max_weight, p, pos + 1, acc_p + ep, w, stack, emit);
    }
}

impl BarComplex {
    fn build_differentials(&mut self) -> Result<(), Error> {
        let ring = self.module.algebra.ring.clone();
        let keys: Vec<BlockKey> = self.blocks.keys().filter(|(p, _, _)| *p >= 1).cloned().collect();
        for key in keys {
            let (p, ip, iw) = key;
            let src = &self.blocks[&key];
            let dst_key = (p - 1, ip, iw);
            let ncols = self.blocks.get(&dst_key).map_or(0, |b| b.len());
            let mut rows = Vec::with_capacity(src.len());
            for tuple in src {
                let image = self.differential_of(tuple)?;
                let mut row = vec![ring.zero(); ncols];
                for (t, c) in image {
                    let idx = self
                        .index
                        .get(&dst_key)
                        .and_then(|m| m.get(&t))
                        .ok_or_else(|| {
                            Error::Internal("bar image tuple missing from target block".into())
                        })?;
                    row[*idx] = ring.add(&row[*idx], &c);
                }
                rows.push(row);
            }
            self.d.insert(key, rows);
        }
        Ok(())
    }

    /// Alternating-sum bar differential of a single tuple.
    fn differential_of(&self, tuple: &Tuple) -> Result<BTreeMap<Tuple, RingElement>, Error> {
        let ring = &self.module.algebra.ring;
        let (ts, n) = tuple;
        let p = ts.len();
        let mut out: BTreeMap<Tuple, RingElement> = BTreeMap::new();
        let mut add = |t: Tuple, c: RingElement| {
            if c.is_zero() {
                return;
            }
            let entry = out.entry(t.clone()).or_insert_with(|| ring.zero());
            *entry = ring.add(entry, &c);
            if entry.is_zero() {
                out.remove(&t);
            }
        };
        // face 0: augmentation of the first entry (zero when reduced)
        if !self.eps[ts[0]].is_zero() {
            add((ts[1..].to_vec(), *n), self.eps[ts[0]].clone());
        }
        // inner faces: multiply adjacent entries
        for i in 1..p {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            for (z, c) in &self.prod[ts[i - 1]][ts[i]] {
                let mut t = ts.clone();
                t[i - 1] = *z;
                t.remove(i);
                add((t, *n), ring.scale(c, sign));
            }
        }
        // last face: act on the module
        let sign = if p % 2 == 0 { 1 } else { -1 };
        for (y, c) in &self.act[ts[p - 1]][*n] {
            add((ts[..p - 1].to_vec(), *y), ring.scale(c, sign));
        }
        Ok(out)
    }

    /// Total rank of the degree-`p` term within the enumerated window.
    pub fn term_rank(&self, p: usize) -> usize {
        self.blocks
            .iter()
            .filter(|((bp, _, _), _)| *bp == p)
            .map(|(_, b)| b.len())
            .sum()
    }

    /// Exact matrix check that consecutive differentials compose to zero.
    pub fn verify_dd(&self) -> Result<(), Error> {
        let ring = &self.module.algebra.ring;
        for (&(p, ip, iw), dp) in &self.d {
            let Some(dq) = self.d.get(&(p - 1, ip, iw)) else {
                continue;
            };
            let ncols = dq.first().map_or(0, |r| r.len());
            for (r, row) in dp.iter().enumerate() {
                for c in 0..ncols {
                    let mut acc = ring.zero();
                    for (m, x) in row.iter().enumerate() {
                        if !x.is_zero() {
                            acc = ring.add(&acc, &ring.mul(x, &dq[m][c]));
                        }
                    }
                    if !acc.is_zero() {
                        return Err(Error::Internal(format!(
                            "d o d is nonzero at block ({p}, {ip}, {iw}) entry ({r}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Cochain differential matrix on the block `(s, p, w)`: rows indexed
    /// by that block, columns by `(s + 1, p, w)`.
    fn delta_matrix(&self, s: usize, ip: i64, iw: i64) -> Vec<Vec<RingElement>> {
        let ring = &self.module.algebra.ring;
        let nrows = self.blocks.get(&(s, ip, iw)).map_or(0, |b| b.len());
        let up = self.d.get(&(s + 1, ip, iw));
        let ncols = self.blocks.get(&(s + 1, ip, iw)).map_or(0, |b| b.len());
        let mut m = vec![vec![ring.zero(); ncols]; nrows];
        if let Some(up) = up {
            for (v, row) in up.iter().enumerate() {
                for (u, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        m[u][v] = c.clone();
                    }
                }
            }
        }
        m
    }

    /// Homology of the dualized complex at one block.
    fn ext_block(&self, s: usize, ip: i64, iw: i64) -> Result<ModuleShape, Error> {
        let ring = &self.module.algebra.ring;
        let delta = self.delta_matrix(s, ip, iw);
        let kernel = linalg::left_kernel(ring, &delta)?;
        let image: Vec<Vec<RingElement>> = if s == 0 {
            Vec::new()
        } else {
            self.delta_matrix(s - 1, ip, iw)
        };
        linalg::homology_shape(ring, &kernel, &image)
    }

    /// Ext shapes per tridegree for bar degrees up to `max_degree`; requires
    /// the complex to extend one degree further.
    pub fn ext_shapes(&self, max_degree: usize) -> Result<GradedExtResult, Error> {
        if max_degree + 1 > self.max_p {
            return Err(Error::OutOfRange(format!(
                "complex truncated at {}, cannot report degree {max_degree}",
                self.max_p
            )));
        }
        let keys: Vec<BlockKey> = self
            .blocks
            .keys()
            .filter(|(s, _, _)| *s <= max_degree)
            .cloned()
            .collect();
        let shapes = par::map_indexed(keys.clone(), |(s, ip, iw)| self.ext_block(s, ip, iw));
        let mut out = GradedExtResult::new();
        for (key, shape) in keys.into_iter().zip(shapes) {
            let shape = shape?;
            if !shape.is_zero() {
                out.insert(Tridegree::new(key.0 as i64, key.1, key.2), shape);
            }
        }
        Ok(out)
    }

    pub fn dual_cochain(&self, entries: &[usize], module_index: usize) -> Result<Cochain, Error> {
        let pos: Vec<usize> = entries
            .iter()
            .map(|i| {
                self.elements
                    .iter()
                    .position(|e| e == i)
                    .ok_or_else(|| Error::OutOfRange(format!("basis element {i} not in complex")))
            })
            .collect::<Result<_, _>>()?;
        let (mut ip, mut iw) = self.module.degrees[module_index];
        for &p in &pos {
            ip += self.elem_deg[p].0;
            iw += self.elem_deg[p].1;
        }
        let mut coeffs = BTreeMap::new();
        coeffs.insert((pos.clone(), module_index), self.module.algebra.ring.one());
        Ok(Cochain {
            s: entries.len(),
            degree: (ip, iw),
            coeffs,
        })
    }

    pub fn zero_cochain(&self, s: usize, degree: (i64, i64)) -> Cochain {
        Cochain {
            s,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn coboundary(&self, phi: &Cochain) -> Cochain {
        let ring = &self.module.algebra.ring;
        let (ip, iw) = phi.degree;
        let mut coeffs = BTreeMap::new();
        if let Some(up) = self.d.get(&(phi.s + 1, ip, iw)) {
            let src = &self.blocks[&(phi.s + 1, ip, iw)];
            let dst = &self.blocks[&(phi.s, ip, iw)];
            for (v, row) in up.iter().enumerate() {
                let mut acc = ring.zero();
                for (u, c) in row.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    if let Some(x) = phi.coeffs.get(&dst[u]) {
                        acc = ring.add(&acc, &ring.mul(c, x));
                    }
                }
                if !acc.is_zero() {
                    coeffs.insert(src[v].clone(), acc);
                }
            }
        }
        Cochain {
            s: phi.s + 1,
            degree: phi.degree,
            coeffs,
        }
    }

    pub fn is_cocycle(&self, phi: &Cochain) -> bool {
        self.coboundary(phi).coeffs.is_empty()
    }

    /// True when `phi` is the coboundary of some cochain one degree down.
    pub fn is_coboundary(&self, phi: &Cochain) -> Result<bool, Error> {
        if phi.coeffs.is_empty() {
            return Ok(true);
        }
        if phi.s == 0 {
            return Ok(false);
        }
        let ring = &self.module.algebra.ring;
        let (ip, iw) = phi.degree;
        let basis = match self.blocks.get(&(phi.s, ip, iw)) {
            Some(b) => b,
            None => return Ok(false),
        };
        let target: Vec<RingElement> = basis
            .iter()
            .map(|t| phi.coeffs.get(t).cloned().unwrap_or_else(|| ring.zero()))
            .collect();
        let image = self.delta_matrix(phi.s - 1, ip, iw);
        if image.is_empty() {
            return Ok(false);
        }
        Ok(linalg::solve_in_span(ring, &image, &target)?.is_some())
    }

    /// Alexander-Whitney cup product through the module coproduct.
    pub fn cup(&self, phi: &Cochain, psi: &Cochain) -> Result<Cochain, Error> {
        let ring = self.module.algebra.ring.clone();
        let cop = self.module.coproduct.as_ref().ok_or_else(|| {
            Error::Precondition("cup product needs a module coproduct".into())
        })?;
        let s = phi.s;
        let t = psi.s;
        let degree = (phi.degree.0 + psi.degree.0, phi.degree.1 + psi.degree.1);
        let mut coeffs = BTreeMap::new();
        if let Some(basis) = self.blocks.get(&(s + t, degree.0, degree.1)) {
            for (entries, n) in basis {
                let mut acc = ring.zero();
                for (l, r, c) in &cop[*n] {
                    let a = phi.coeffs.get(&(entries[..s].to_vec(), *l));
                    let b = psi.coeffs.get(&(entries[s..].to_vec(), *r));
                    if let (Some(a), Some(b)) = (a, b) {
                        acc = ring.add(&acc, &ring.mul(c, &ring.mul(a, b)));
                    }
                }
                if !acc.is_zero() {
                    coeffs.insert((entries.clone(), *n), acc);
                }
            }
        }
        Ok(Cochain {
            s: s + t,
            degree,
            coeffs,
        })
    }
}

/// Ext of the module against the base, per tridegree `(s, p, w)`, for bar
/// degrees up to `max_degree`. One further bar degree is built internally so
/// every reported kernel is exact. `max_weight` bounds the internal weight
/// of the blocks that are enumerated.
pub fn ext_via_bar(
    module: &FiniteModule,
    max_degree: usize,
    max_weight: Option<i64>,
) -> Result<GradedExtResult, Error> {
    let ring = &module.algebra.ring;
    if !ring.supports_homology() {
        return Err(Error::UnsupportedHomologyRing(ring.to_string()));
    }
    let complex = bar_resolution(module, max_degree + 1, true, max_weight)?;
    complex.ext_shapes(max_degree)
}

/// Expected outcome of one cup-product sample.
pub enum ProductExpectation {
    /// The product class equals the class of this cochain.
    Class(Cochain),
    /// The product is a nonzero class.
    Nonzero,
}

pub struct ProductSample {
    pub left: Cochain,
    pub right: Cochain,
    pub expect: ProductExpectation,
}

/// Verifies cup-product samples at the cochain level: products of cocycles
/// must be cocycles with the expected class.
#[allow(clippy::needless_lifetimes)]
pub fn ext_product_check(complex: &BarComplex, samples: &[ProductSample]) -> Result<bool, Error> {
    let ring = &complex.module.algebra.ring;
    for sample in samples {
        if !complex.is_cocycle(&sample.left) || !complex.is_cocycle(&sample.right) {
            return Ok(false);
        }
        let prod = complex.cup(&sample.left, &sample.right)?;
        if !complex.is_cocycle(&prod) {
            return Ok(false);
        }
        match &sample.expect {
            ProductExpectation::Nonzero => {
                if complex.is_coboundary(&prod)? {
                    return Ok(false);
                }
            }
            ProductExpectation::Class(expected) => {
                let mut diff = prod.clone();
                for (t, c) in &expected.coeffs {
                    let entry = diff.coeffs.entry(t.clone()).or_insert_with(|| ring.zero());
                    *entry = ring.sub(entry, c);
                    if entry.is_zero() {
                        diff.coeffs.remove(t);
                    }
                }
                if !complex.is_coboundary(&diff)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
