//! Closed-form Ext presentations for duals of exterior Hopf algebras acting
//! on exterior comodule algebras, and rank extraction from presentations.

use std::collections::BTreeMap;

use crate::coeff::{CoeffRing, RingElement};
use crate::error::Error;
use crate::graded::{AlgebraElement, AlgebraPresentation, Generator, Monomial, Tridegree};
use crate::linalg::{self, ModuleShape};

/// `Lambda(g_1..g_p)[t_1..t_m]`: exterior classes at filtration 0 carrying
/// the gamma bidegrees, polynomial classes at filtration 1 carrying the beta
/// bidegrees. The alpha pairs cancel and do not appear.
pub fn ext_closed_form(
    ring: &CoeffRing,
    _n_alpha: usize,
    beta_degrees: &[(i64, i64)],
    gamma_degrees: &[(i64, i64)],
) -> AlgebraPresentation {
    let mut gens = Vec::new();
    for (j, (r, s)) in gamma_degrees.iter().enumerate() {
        gens.push(Generator::exterior(format!("g{}", j + 1), 0, *r, *s));
    }
    for (i, (r, s)) in beta_degrees.iter().enumerate() {
        gens.push(Generator::polynomial(format!("t{}", i + 1), 1, *r, *s));
    }
    AlgebraPresentation::free(ring.clone(), gens)
}

/// True when no nonzero ring element annihilates every `b_i`, i.e. when
/// `sum b_i t_i` is a nonzerodivisor in the polynomial part.
pub fn annihilator_is_zero(ring: &CoeffRing, b: &[RingElement]) -> bool {
    if b.iter().all(|x| x.is_zero()) {
        return false;
    }
    match ring {
        CoeffRing::ModM(m) => {
            // Ann is generated by m / gcd(b_1, .., b_k, m)
            use num_bigint::BigInt;
            use num_integer::Integer;
            let mut g = BigInt::from(*m);
            for x in b {
                g = g.gcd(x.numerator());
            }
            g == BigInt::from(1)
        }
        // the other supported rings are domains
        _ => true,
    }
}

/// The two-sided description of Ext in the presence of an eta class:
/// `0 -> Lambda(g)[t]/(sum b_i t_i) -> Ext -> Ann(sum b_i t_i) -> 0`.
#[derive(Debug, Clone)]
pub struct EtaExtension {
    /// The quotient by the principal relation, always a subring of Ext.
    pub sub: AlgebraPresentation,
    /// Whether the annihilator term vanishes (then `sub` is all of Ext).
    pub quotient_zero: bool,
    /// Full presentation when the extension is determined: either the
    /// relation is a nonzerodivisor, or it is zero and eta survives as a
    /// fresh exterior class.
    pub merged: Option<AlgebraPresentation>,
}

pub fn ext_closed_form_eta(
    ring: &CoeffRing,
    n_alpha: usize,
    beta_degrees: &[(i64, i64)],
    gamma_degrees: &[(i64, i64)],
    b: &[RingElement],
    eta_degree: (i64, i64),
) -> Result<EtaExtension, Error> {
    if b.len() != beta_degrees.len() {
        return Err(Error::Precondition(format!(
            "{} eta scalars for {} beta classes",
            b.len(),
            beta_degrees.len()
        )));
    }
    let mut sub = ext_closed_form(ring, n_alpha, beta_degrees, gamma_degrees);
    let p = gamma_degrees.len();
    let relation = {
        let mut rel = AlgebraElement::zero();
        for (i, bi) in b.iter().enumerate() {
            let theta = Monomial::generator(sub.ngens(), p + i);
            rel = sub.add(&rel, &AlgebraElement::term(theta, bi.clone()));
        }
        rel
    };
    let all_zero = relation.is_zero();
    if !all_zero {
        sub.relations.push(relation);
    }
    let quotient_zero = annihilator_is_zero(ring, b);
    let merged = if all_zero {
        // eta survives: adjoin a fresh exterior class in its degree
        let mut gens = sub.generators.clone();
        gens.insert(
            p,
            Generator::exterior("e", 0, eta_degree.0, eta_degree.1),
        );
        Some(AlgebraPresentation::free(ring.clone(), gens))
    } else if quotient_zero {
        Some(sub.clone())
    } else {
        None
    };
    Ok(EtaExtension {
        sub,
        quotient_zero,
        merged,
    })
}

/// Rank and torsion per tridegree of a presented algebra, within the given
/// filtration and weight window. Relations are imposed degreewise: the
/// relation module at degree `t` is spanned by all monomial multiples of
/// the relations landing in `t`.
pub fn presentation_ranks(
    pres: &AlgebraPresentation,
    max_s: i64,
    max_w: i64,
) -> Result<BTreeMap<Tridegree, ModuleShape>, Error> {
    let mut buckets: BTreeMap<Tridegree, Vec<Monomial>> = BTreeMap::new();
    let mut exps = vec![0u32; pres.ngens()];
    collect_monomials(pres, 0, max_s, max_w, &mut exps, &mut buckets);
    let mut out = BTreeMap::new();
    for (t, monos) in &buckets {
        let index: BTreeMap<&Monomial, usize> =
            monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for rel in &pres.relations {
            let dr = pres
                .element_degree(rel)
                .ok_or_else(|| Error::Precondition("inhomogeneous relation".into()))?;
            let shift = t.sub(&dr);
            if shift.s < 0 || shift.p < 0 || shift.w < 0 {
                continue;
            }
            for m in pres.monomials_of_degree(shift) {
                let prod = pres.mul(&AlgebraElement::term(m, pres.ring.one()), rel);
                let mut row = vec![pres.ring.zero(); monos.len()];
                for (mm, c) in &prod.terms {
                    let idx = index.get(mm).ok_or_else(|| {
                        Error::Internal("relation multiple escapes the degree bucket".into())
                    })?;
                    row[*idx] = c.clone();
                }
                rows.push(row);
            }
        }
        let shape = linalg::quotient_invariants(&pres.ring, monos.len(), &rows)?;
        if !shape.is_zero() {
            out.insert(*t, shape);
        }
    }
    Ok(out)
}

fn collect_monomials(
    pres: &AlgebraPresentation,
    idx: usize,
    max_s: i64,
    max_w: i64,
    exps: &mut Vec<u32>,
    out: &mut BTreeMap<Tridegree, Vec<Monomial>>,
) {
    if idx == pres.ngens() {
        let m = Monomial(exps.clone());
        let t = pres.monomial_degree(&m);
        out.entry(t).or_default().push(m);
        return;
    }
    let g = &pres.generators[idx];
    assert!(g.degree.w > 0, "rank window needs positive generator weights");
    exps[idx] = 0;
    let mut used = Tridegree::zero();
    for (gg, &x) in pres.generators.iter().zip(exps.iter()) {
        used.s += gg.degree.s * x as i64;
        used.w += gg.degree.w * x as i64;
    }
    let mut e = 0u32;
    loop {
        let s = used.s + g.degree.s * e as i64;
        let w = used.w + g.degree.w * e as i64;
        if s > max_s || w > max_w {
            break;
        }
        if g.kind == crate::graded::GeneratorKind::Exterior && e > 1 {
            break;
        }
        exps[idx] = e;
        collect_monomials(pres, idx + 1, max_s, max_w, exps, out);
        e += 1;
    }
    exps[idx] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_shapes() {
        let q = CoeffRing::Rationals;
        let e = ext_closed_form(&q, 0, &[(1, 1)], &[]);
        assert_eq!(e.ngens(), 1);
        assert_eq!(e.generators[0].degree, Tridegree::new(1, 1, 1));

        let e = ext_closed_form(&q, 3, &[], &[(1, 1), (3, 2)]);
        assert_eq!(e.ngens(), 2);
        assert!(e.generators.iter().all(|g| g.degree.s == 0));
    }

    #[test]
    fn eta_cases() {
        let q = CoeffRing::Rationals;
        // unit scalar: relation t = 0, annihilator zero, merged = sub
        let e = ext_closed_form_eta(&q, 0, &[(1, 1)], &[], &[q.one()], (1, 1)).unwrap();
        assert!(e.quotient_zero);
        let merged = e.merged.unwrap();
        assert_eq!(merged.relations.len(), 1);
        assert_eq!(merged.render_element(&merged.relations[0]), "t1");

        // zero scalar: eta survives as a new exterior class
        let e = ext_closed_form_eta(&q, 0, &[(1, 1)], &[(5, 3)], &[q.zero()], (1, 1)).unwrap();
        assert!(!e.quotient_zero);
        let merged = e.merged.unwrap();
        let names: Vec<&str> = merged.generators.iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, vec!["g1", "e", "t1"]);
        assert!(merged.relations.is_empty());

        // b = 3 over Z: relation 3t, nonzerodivisor, merged = sub
        let z = CoeffRing::Integers;
        let e = ext_closed_form_eta(&z, 0, &[(1, 1)], &[], &[z.from_int(3)], (1, 1)).unwrap();
        assert!(e.quotient_zero);
        let merged = e.merged.unwrap();
        assert_eq!(merged.render_element(&merged.relations[0]), "3*t1");

        // over Z/6 with b = 2: annihilated by 3, extension unresolved
        let z6 = CoeffRing::zmod(6).unwrap();
        let e = ext_closed_form_eta(&z6, 0, &[(1, 1)], &[], &[z6.from_int(2)], (1, 1)).unwrap();
        assert!(!e.quotient_zero);
        assert!(e.merged.is_none());
    }

    #[test]
    fn ranks_with_relations() {
        use num_bigint::BigInt;
        // Z[t]/(3t): free in filtration 0, torsion 3 above
        let z = CoeffRing::Integers;
        let e = ext_closed_form_eta(&z, 0, &[(1, 1)], &[], &[z.from_int(3)], (1, 1)).unwrap();
        let shapes = presentation_ranks(&e.sub, 3, 3).unwrap();
        assert_eq!(shapes[&Tridegree::new(0, 0, 0)].rank, 1);
        for s in 1..=3i64 {
            let shape = &shapes[&Tridegree::new(s, s, s)];
            assert_eq!(shape.rank, 0);
            assert_eq!(shape.torsion, vec![BigInt::from(3)]);
        }

        // Lambda(g)[t]/(t) over Q: only filtration 0 survives
        let q = CoeffRing::Rationals;
        let e = ext_closed_form_eta(&q, 0, &[(1, 1)], &[(5, 3)], &[q.one()], (1, 1)).unwrap();
        let shapes = presentation_ranks(&e.sub, 4, 8).unwrap();
        assert_eq!(shapes.len(), 2);
        assert_eq!(shapes[&Tridegree::new(0, 0, 0)].rank, 1);
        assert_eq!(shapes[&Tridegree::new(0, 5, 3)].rank, 1);
    }
}
