//! Trigraded multiplicative spectral sequence runner.
//!
//! A page is stored per tridegree as a subquotient of the free module on the
//! ambient monomial basis: a list of cycle rows and a list of boundary rows,
//! both in ambient coordinates. Presentation relations enter as initial
//! boundary rows (all monomial multiples landing in the tridegree), so the
//! starting page already carries the quotient structure. A page step takes
//! homology against the derivation extended from the stated rules.
//!
//! Unstated differentials are never fired. A candidate differential that the
//! rules do not determine, and that degree reasoning cannot kill, is
//! reported as a warning.

use std::collections::{BTreeMap, BTreeSet};

use crate::coeff::RingElement;
use crate::error::Error;
use crate::graded::{
    AlgebraElement, AlgebraPresentation, Generator, GeneratorKind, Monomial, Tridegree,
};
use crate::linalg::{self, ModuleShape};
use crate::par;

/// Truncation window. Entries live in `0 <= s <= max_s`, `0 <= p <= max_p`,
/// `0 <= w <= max_w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_s: i64,
    pub max_p: i64,
    pub max_w: i64,
}

impl Bounds {
    pub fn new(max_s: i64, max_p: i64, max_w: i64) -> Self {
        Bounds { max_s, max_p, max_w }
    }

    /// Default window for a rank-`n` scenario: encloses every generator and
    /// the last possible differential `d_n`.
    pub fn for_rank(n: usize) -> Self {
        let n = n as i64;
        Bounds::new(2 * n + 2, 4 * n + 2, 4 * n + 2)
    }

    pub fn contains(&self, t: &Tridegree) -> bool {
        (0..=self.max_s).contains(&t.s)
            && (0..=self.max_p).contains(&t.p)
            && (0..=self.max_w).contains(&t.w)
    }
}

/// One tridegree of a page: the ambient monomial basis together with cycle
/// and boundary rows in ambient coordinates. The homology of the pair is the
/// actual page entry; boundary rows always lie in the cycle span.
#[derive(Debug, Clone)]
pub struct Entry {
    pub monomials: Vec<Monomial>,
    pub cycles: Vec<Vec<RingElement>>,
    pub boundaries: Vec<Vec<RingElement>>,
}

#[derive(Debug, Clone)]
pub struct SSPage {
    pub page_index: i64,
    pub presentation: AlgebraPresentation,
    pub bounds: Bounds,
    pub entries: BTreeMap<Tridegree, Entry>,
}

/// `d_page(source) = target`, with the source a named exterior generator.
/// A zero target is a stated vanishing differential; it still marks the
/// generator as handled on that page.
#[derive(Debug, Clone)]
pub struct DifferentialRule {
    pub page: i64,
    pub source: String,
    pub target: AlgebraElement,
}

/// A source tridegree whose page-`j` differential could be nonzero: both the
/// source and the shifted target entry have nonzero homology.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    pub page: i64,
    pub source: Tridegree,
    pub target: Tridegree,
}

/// Readout of a stabilized page: surviving generators, detected truncation
/// relations, the per-tridegree shapes, and honesty flags.
#[derive(Debug, Clone)]
pub struct RingPresentation {
    pub generators: Vec<Generator>,
    pub relations: Vec<String>,
    pub shapes: BTreeMap<Tridegree, ModuleShape>,
    pub associated_graded_only: bool,
    pub unresolved_extension: bool,
    pub conjectural_differentials: bool,
}

pub struct RunResult {
    pub page: SSPage,
    pub shapes: BTreeMap<Tridegree, ModuleShape>,
    pub fired: Vec<String>,
    pub warnings: Vec<String>,
}

/// All monomials within the window, bucketed by tridegree. Positive
/// generator weights bound the search.
fn bounded_monomials(
    pres: &AlgebraPresentation,
    bounds: &Bounds,
) -> BTreeMap<Tridegree, Vec<Monomial>> {
    fn rec(
        pres: &AlgebraPresentation,
        bounds: &Bounds,
        idx: usize,
        acc: Tridegree,
        exps: &mut Vec<u32>,
        out: &mut BTreeMap<Tridegree, Vec<Monomial>>,
    ) {
        if !bounds.contains(&acc) {
            return;
        }
        if idx == pres.ngens() {
            out.entry(acc).or_default().push(Monomial(exps.clone()));
            return;
        }
        let g = &pres.generators[idx];
        let mut e = 0u32;
        loop {
            let d = Tridegree::new(
                acc.s + g.degree.s * e as i64,
                acc.p + g.degree.p * e as i64,
                acc.w + g.degree.w * e as i64,
            );
            if !bounds.contains(&d) {
                break;
            }
            exps[idx] = e;
            rec(pres, bounds, idx + 1, d, exps, out);
            if g.kind == GeneratorKind::Exterior && e == 1 {
                break;
            }
            e += 1;
        }
        exps[idx] = 0;
    }
    let mut out = BTreeMap::new();
    let mut exps = vec![0u32; pres.ngens()];
    rec(pres, bounds, 0, Tridegree::zero(), &mut exps, &mut out);
    for monos in out.values_mut() {
        monos.sort();
    }
    out
}

fn element_row(
    pres: &AlgebraPresentation,
    entry: &Entry,
    x: &AlgebraElement,
) -> Result<Vec<RingElement>, Error> {
    let index: BTreeMap<&Monomial, usize> = entry
        .monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mut row = vec![pres.ring.zero(); entry.monomials.len()];
    for (m, c) in &x.terms {
        let i = index
            .get(m)
            .ok_or_else(|| Error::Internal("element escapes its degree bucket".into()))?;
        row[*i] = c.clone();
    }
    Ok(row)
}

/// Builds the starting page: identity cycles and relation-ideal boundaries
/// per tridegree.
pub fn init_page(e2: &AlgebraPresentation, bounds: Bounds) -> Result<SSPage, Error> {
    for g in &e2.generators {
        if g.degree.w <= 0 || g.degree.s < 0 || g.degree.p < 0 {
            return Err(Error::OutOfRange(format!(
                "generator {} needs positive weight and nonnegative degrees for a bounded page",
                g.name
            )));
        }
    }
    let rel_degrees: Vec<Tridegree> = e2
        .relations
        .iter()
        .map(|r| {
            e2.element_degree(r)
                .ok_or_else(|| Error::Precondition("inhomogeneous relation".into()))
        })
        .collect::<Result<_, _>>()?;
    let buckets = bounded_monomials(e2, &bounds);
    let mut entries = BTreeMap::new();
    for (t, monomials) in buckets {
        let n = monomials.len();
        let mut cycles = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = vec![e2.ring.zero(); n];
            row[i] = e2.ring.one();
            cycles.push(row);
        }
        let entry = Entry {
            monomials,
            cycles,
            boundaries: Vec::new(),
        };
        let mut boundaries = Vec::new();
        for (rel, dr) in e2.relations.iter().zip(&rel_degrees) {
            let shift = t.sub(dr);
            if shift.s < 0 || shift.p < 0 || shift.w < 0 {
                continue;
            }
            for m in e2.monomials_of_degree(shift) {
                let prod = e2.mul(&AlgebraElement::term(m, e2.ring.one()), rel);
                if prod.is_zero() {
                    continue;
                }
                boundaries.push(element_row(e2, &entry, &prod)?);
            }
        }
        let entry = Entry { boundaries, ..entry };
        entries.insert(t, entry);
    }
    Ok(SSPage {
        page_index: 2,
        presentation: e2.clone(),
        bounds,
        entries,
    })
}

/// Derivation extended from per-generator rules by the Leibniz law:
/// `d(xy) = d(x)y + (-1)^(s+p) x d(y)` on homogeneous `x`.
pub fn leibniz_differential(
    pres: &AlgebraPresentation,
    rules: &BTreeMap<usize, AlgebraElement>,
    x: &AlgebraElement,
) -> AlgebraElement {
    let n = pres.ngens();
    let mut out = AlgebraElement::zero();
    for (m, c) in &x.terms {
        let mut passed_parity = 0u32;
        for k in 0..n {
            let e = m.0[k];
            if e == 0 {
                continue;
            }
            if let Some(target) = rules.get(&k) {
                let mut prefix = vec![0u32; n];
                prefix[..k].copy_from_slice(&m.0[..k]);
                let mut mid = vec![0u32; n];
                mid[k] = e - 1;
                let mut suffix = vec![0u32; n];
                suffix[k + 1..].copy_from_slice(&m.0[k + 1..]);
                let sign = if passed_parity % 2 == 0 { 1 } else { -1 };
                let coeff = pres.ring.scale(c, sign * e as i64);
                let mut piece = AlgebraElement::term(Monomial(prefix), coeff);
                piece = pres.mul(&piece, &AlgebraElement::term(Monomial(mid), pres.ring.one()));
                piece = pres.mul(&piece, target);
                piece = pres.mul(
                    &piece,
                    &AlgebraElement::term(Monomial(suffix), pres.ring.one()),
                );
                out = pres.add(&out, &piece);
            }
            if pres.generators[k].is_odd() {
                passed_parity += e;
            }
        }
    }
    out
}

fn row_times_matrix(
    pres: &AlgebraPresentation,
    row: &[RingElement],
    mat: &[Vec<RingElement>],
    width: usize,
) -> Vec<RingElement> {
    let mut out = vec![pres.ring.zero(); width];
    for (c, mrow) in row.iter().zip(mat) {
        if c.is_zero() {
            continue;
        }
        for (o, v) in out.iter_mut().zip(mrow) {
            *o = pres.ring.add(o, &pres.ring.mul(c, v));
        }
    }
    out
}

fn validate_rules(
    page: &SSPage,
    rules: &[DifferentialRule],
) -> Result<BTreeMap<usize, AlgebraElement>, Error> {
    let pres = &page.presentation;
    let j = page.page_index;
    let mut rmap = BTreeMap::new();
    for r in rules {
        if r.page != j {
            return Err(Error::Precondition(format!(
                "rule for page {} applied on page {}",
                r.page, j
            )));
        }
        let idx = pres
            .generator_index(&r.source)
            .ok_or_else(|| Error::Precondition(format!("unknown generator {:?}", r.source)))?;
        if pres.generators[idx].kind != GeneratorKind::Exterior {
            return Err(Error::Precondition(format!(
                "differential rules may only source exterior generators, got {:?}",
                r.source
            )));
        }
        if !r.target.is_zero() {
            let td = pres
                .element_degree(&r.target)
                .ok_or_else(|| Error::Precondition("inhomogeneous differential target".into()))?;
            let sd = pres.generators[idx].degree;
            let expect = sd.add(&Tridegree::differential_shift(j));
            if td != expect {
                return Err(Error::Precondition(format!(
                    "d{}({}) target sits at ({}, {}, {}), the degree law needs ({}, {}, {})",
                    j, r.source, td.s, td.p, td.w, expect.s, expect.p, expect.w
                )));
            }
            debug_assert_eq!(td.chow_height(), sd.chow_height() - 1);
        }
        if rmap.insert(idx, r.target.clone()).is_some() {
            return Err(Error::Precondition(format!(
                "two rules for generator {:?} on page {}",
                r.source, j
            )));
        }
    }
    Ok(rmap)
}

/// One page turn: homology against the derivation generated by `rules`.
pub fn apply_rules(page: &SSPage, rules: &[DifferentialRule]) -> Result<SSPage, Error> {
    let pres = &page.presentation;
    let j = page.page_index;
    let rmap = validate_rules(page, rules)?;
    let shift = Tridegree::differential_shift(j);

    // ambient differential matrix per populated tridegree
    let mut dmats: BTreeMap<Tridegree, Vec<Vec<RingElement>>> = BTreeMap::new();
    for (t, entry) in &page.entries {
        let tt = t.add(&shift);
        let Some(target) = page.entries.get(&tt) else {
            // no monomials there; images either vanish or leave the window
            for m in &entry.monomials {
                let d = leibniz_differential(
                    pres,
                    &rmap,
                    &AlgebraElement::term(m.clone(), pres.ring.one()),
                );
                if !d.is_zero() && page.bounds.contains(&tt) {
                    return Err(Error::Internal(
                        "differential image escapes its degree bucket".into(),
                    ));
                }
            }
            continue;
        };
        let mut rows = Vec::with_capacity(entry.monomials.len());
        for m in &entry.monomials {
            let d = leibniz_differential(
                pres,
                &rmap,
                &AlgebraElement::term(m.clone(), pres.ring.one()),
            );
            rows.push(element_row(pres, target, &d)?);
        }
        dmats.insert(*t, rows);
    }

    let keys: Vec<Tridegree> = page.entries.keys().copied().collect();
    let results = par::map_indexed(keys, |t| -> Result<(Tridegree, Entry), Error> {
        let entry = &page.entries[&t];
        let tt = t.add(&shift);

        let mut cycles = entry.cycles.clone();
        if let (Some(d), Some(target)) = (dmats.get(&t), page.entries.get(&tt)) {
            let width = target.monomials.len();
            let images: Vec<Vec<RingElement>> = cycles
                .iter()
                .map(|c| row_times_matrix(pres, c, d, width))
                .collect();
            if images.iter().flatten().any(|v| !v.is_zero()) {
                let ncyc = cycles.len();
                let mut stacked = images;
                stacked.extend(target.boundaries.iter().cloned());
                let kern = linalg::left_kernel(&pres.ring, &stacked)?;
                let old = std::mem::take(&mut cycles);
                for x in kern {
                    let row = row_times_matrix(pres, &x[..ncyc], &old, entry.monomials.len());
                    if row.iter().any(|v| !v.is_zero()) {
                        cycles.push(row);
                    }
                }
                // projected kernel rows can be dependent when target
                // boundaries overlap the image; homology counting needs a
                // genuine basis of the cycle lattice
                cycles = linalg::row_basis(&pres.ring, &cycles)?;
            }
        }

        let mut boundaries = entry.boundaries.clone();
        let src = t.sub(&shift);
        if let (Some(d), Some(source)) = (dmats.get(&src), page.entries.get(&src)) {
            for c in &source.cycles {
                let img = row_times_matrix(pres, c, d, entry.monomials.len());
                if img.iter().any(|v| !v.is_zero()) {
                    boundaries.push(img);
                }
            }
        }

        Ok((
            t,
            Entry {
                monomials: entry.monomials.clone(),
                cycles,
                boundaries,
            },
        ))
    });
    let mut entries = BTreeMap::new();
    for r in results {
        let (t, e) = r?;
        entries.insert(t, e);
    }
    Ok(SSPage {
        page_index: j + 1,
        presentation: pres.clone(),
        bounds: page.bounds,
        entries,
    })
}

impl SSPage {
    /// Nonzero homology shapes per tridegree.
    pub fn shapes(&self) -> Result<BTreeMap<Tridegree, ModuleShape>, Error> {
        let keys: Vec<Tridegree> = self.entries.keys().copied().collect();
        let results = par::map_indexed(keys, |t| {
            let e = &self.entries[&t];
            linalg::homology_shape(&self.presentation.ring, &e.cycles, &e.boundaries)
                .map(|s| (t, s))
        });
        let mut out = BTreeMap::new();
        for r in results {
            let (t, s) = r?;
            if !s.is_zero() {
                out.insert(t, s);
            }
        }
        Ok(out)
    }
}

/// Candidates for `d_j` on the given page: tridegree pairs where both ends
/// have nonzero homology.
pub fn possible_differentials(
    shapes: &BTreeMap<Tridegree, ModuleShape>,
    j: i64,
) -> Vec<Candidate> {
    let shift = Tridegree::differential_shift(j);
    let mut out = Vec::new();
    for t in shapes.keys() {
        let tt = t.add(&shift);
        if shapes.contains_key(&tt) {
            out.push(Candidate {
                page: j,
                source: *t,
                target: tt,
            });
        }
    }
    out
}

/// Whether the stated rules determine `d_j` on the whole entry at
/// `candidate.source`. A monomial is handled when each of its exterior
/// factors either carries a page-`j` rule or maps into a vanishing
/// tridegree; classes supported on unhandled monomials are then checked to
/// have handled representatives modulo boundaries.
fn candidate_is_covered(
    page: &SSPage,
    shapes: &BTreeMap<Tridegree, ModuleShape>,
    ruled: &BTreeSet<usize>,
    candidate: &Candidate,
) -> Result<bool, Error> {
    let pres = &page.presentation;
    let entry = &page.entries[&candidate.source];
    let shift = Tridegree::differential_shift(candidate.page);
    let mut uncovered = Vec::new();
    for (i, m) in entry.monomials.iter().enumerate() {
        let handled = pres.generators.iter().enumerate().all(|(k, g)| {
            m.0[k] == 0
                || g.kind != GeneratorKind::Exterior
                || ruled.contains(&k)
                || !shapes.contains_key(&g.degree.add(&shift))
        });
        if !handled {
            uncovered.push(i);
        }
    }
    if uncovered.is_empty() {
        return Ok(true);
    }
    // cycle combinations vanishing on the unhandled coordinates
    let proj: Vec<Vec<RingElement>> = entry
        .cycles
        .iter()
        .map(|c| uncovered.iter().map(|&i| c[i].clone()).collect())
        .collect();
    let kern = linalg::left_kernel(&pres.ring, &proj)?;
    let mut pool: Vec<Vec<RingElement>> = kern
        .iter()
        .map(|x| row_times_matrix(pres, x, &entry.cycles, entry.monomials.len()))
        .collect();
    pool.extend(entry.boundaries.iter().cloned());
    if pool.is_empty() {
        return Ok(entry.cycles.is_empty());
    }
    for c in &entry.cycles {
        if linalg::solve_in_span(&pres.ring, &pool, c)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Runs the sequence: fires the stated rules page by page, never invents a
/// differential, and reports undetermined candidates as warnings.
///
/// The working window is padded by the largest rule page so that classes
/// near the stated boundary still meet their differentials; the returned
/// shapes are filtered back to the stated bounds.
pub fn run(
    e2: &AlgebraPresentation,
    rules: &[DifferentialRule],
    bounds: Bounds,
) -> Result<RunResult, Error> {
    let mut by_page: BTreeMap<i64, Vec<DifferentialRule>> = BTreeMap::new();
    for r in rules {
        if r.page < 2 {
            return Err(Error::Precondition(format!(
                "differentials start on page 2, got page {}",
                r.page
            )));
        }
        by_page.entry(r.page).or_default().push(r.clone());
    }
    let pad = by_page.keys().next_back().copied().unwrap_or(0);
    let engine_bounds = Bounds::new(bounds.max_s + pad, bounds.max_p + pad, bounds.max_w);
    let mut page = init_page(e2, engine_bounds)?;
    let mut shapes = page.shapes()?;
    let mut fired = Vec::new();
    let mut warnings = Vec::new();
    let j_max = engine_bounds
        .max_s
        .max(by_page.keys().next_back().copied().unwrap_or(2));
    for j in 2..=j_max {
        page.page_index = j;
        let ruled: BTreeSet<usize> = by_page
            .get(&j)
            .map(|rs| {
                rs.iter()
                    .filter_map(|r| e2.generator_index(&r.source))
                    .collect()
            })
            .unwrap_or_default();
        for cand in possible_differentials(&shapes, j) {
            if !candidate_is_covered(&page, &shapes, &ruled, &cand)? {
                warnings.push(format!(
                    "d{} candidate ({}, {}, {}) -> ({}, {}, {}) is not determined by any stated rule",
                    j,
                    cand.source.s, cand.source.p, cand.source.w,
                    cand.target.s, cand.target.p, cand.target.w
                ));
            }
        }
        if let Some(rs) = by_page.get(&j) {
            page = apply_rules(&page, rs)?;
            shapes = page.shapes()?;
            for r in rs {
                fired.push(format!(
                    "d{}({}) = {}",
                    j,
                    r.source,
                    e2.render_element(&r.target)
                ));
            }
        } else {
            page.page_index = j + 1;
        }
    }
    shapes.retain(|t, _| bounds.contains(t));
    Ok(RunResult {
        page,
        shapes,
        fired,
        warnings,
    })
}

/// Whether the class of a homogeneous element is nonzero on the page.
pub fn class_survives(page: &SSPage, x: &AlgebraElement) -> Result<bool, Error> {
    if x.is_zero() {
        return Ok(false);
    }
    let pres = &page.presentation;
    let t = pres
        .element_degree(x)
        .ok_or_else(|| Error::Precondition("inhomogeneous class".into()))?;
    let Some(entry) = page.entries.get(&t) else {
        return Ok(false);
    };
    let row = element_row(pres, entry, x)?;
    if row.iter().all(|v| v.is_zero()) {
        return Ok(false);
    }
    if entry.cycles.is_empty()
        || linalg::solve_in_span(&pres.ring, &entry.cycles, &row)?.is_none()
    {
        return Ok(false);
    }
    if entry.boundaries.is_empty() {
        return Ok(true);
    }
    Ok(linalg::solve_in_span(&pres.ring, &entry.boundaries, &row)?.is_none())
}

/// Associated-graded readout: surviving generators, truncation relations for
/// polynomial generators detected within bounds, the shape table, and the
/// honesty flags. Scenario layers may clear `associated_graded_only` when a
/// closed form resolves the extensions.
pub fn assemble_presentation(result: &RunResult) -> Result<RingPresentation, Error> {
    let page = &result.page;
    let pres = &page.presentation;
    let mut generators = Vec::new();
    let mut relations = Vec::new();
    for (i, g) in pres.generators.iter().enumerate() {
        let gi = pres.generator_element(i);
        if !class_survives(page, &gi)? {
            continue;
        }
        generators.push(g.clone());
        if g.kind == GeneratorKind::Polynomial {
            let mut k = 2u32;
            loop {
                let d = Tridegree::new(
                    g.degree.s * k as i64,
                    g.degree.p * k as i64,
                    g.degree.w * k as i64,
                );
                if !page.bounds.contains(&d) {
                    break;
                }
                if !class_survives(page, &pres.pow(&gi, k))? {
                    relations.push(format!("{}^{}", g.name, k));
                    break;
                }
                k += 1;
            }
        }
    }
    Ok(RingPresentation {
        generators,
        relations,
        shapes: result.shapes.clone(),
        associated_graded_only: true,
        unresolved_extension: false,
        conjectural_differentials: !result.warnings.is_empty(),
    })
}
