//! Ring-dispatching wrappers around the integer and field lanes.
//!
//! Over `Z` and localized integers the integer lane runs and torsion is read
//! off the Smith normal form, with invariant factors stripped of inverted
//! primes. Over `Q` and `Z/p` plain elimination applies.

pub mod field;
pub mod int;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::coeff::{CoeffRing, RingElement};
use crate::error::Error;

/// Free rank plus torsion invariant factors of a finitely presented module.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModuleShape {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl ModuleShape {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

fn integer_lane(ring: &CoeffRing) -> Result<bool, Error> {
    match ring {
        CoeffRing::Integers | CoeffRing::LocalizedIntegers(_) => Ok(true),
        CoeffRing::Rationals => Ok(false),
        CoeffRing::ModM(_) if ring.is_field() => Ok(false),
        CoeffRing::ModM(m) => Err(Error::UnsupportedHomologyRing(format!(
            "composite modulus {m}"
        ))),
    }
}

fn to_int_rows(rows: &[Vec<RingElement>]) -> int::IMat {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|e| {
                    e.as_integer()
                        .expect("integer-lane matrix entry with denominator")
                        .clone()
                })
                .collect()
        })
        .collect()
}

fn from_int_rows(ring: &CoeffRing, rows: int::IMat) -> Vec<Vec<RingElement>> {
    rows.into_iter()
        .map(|r| r.into_iter().map(|e| ring.reduce(&e)).collect())
        .collect()
}

/// Basis of `{ x : sum_i x_i rows[i] = 0 }`.
pub fn left_kernel(ring: &CoeffRing, rows: &[Vec<RingElement>]) -> Result<Vec<Vec<RingElement>>, Error> {
    if integer_lane(ring)? {
        Ok(from_int_rows(ring, int::left_kernel(&to_int_rows(rows))))
    } else {
        Ok(field::left_kernel(ring, &rows.to_vec()))
    }
}

/// Expresses `target` as a combination of `rows`, if possible.
pub fn solve_in_span(
    ring: &CoeffRing,
    rows: &[Vec<RingElement>],
    target: &[RingElement],
) -> Result<Option<Vec<RingElement>>, Error> {
    if integer_lane(ring)? {
        let b: Vec<BigInt> = target
            .iter()
            .map(|e| e.as_integer().expect("integer-lane target").clone())
            .collect();
        Ok(int::solve_left(&to_int_rows(rows), &b)
            .map(|x| x.into_iter().map(|e| ring.reduce(&e)).collect()))
    } else {
        Ok(field::solve_left(ring, &rows.to_vec(), target))
    }
}

pub fn rank(ring: &CoeffRing, rows: &[Vec<RingElement>]) -> Result<usize, Error> {
    if integer_lane(ring)? {
        Ok(int::rank(&to_int_rows(rows)))
    } else {
        Ok(field::rank(ring, &rows.to_vec()))
    }
}

/// Basis of the row span: the nonzero rows of a unimodular echelon form.
/// Over the integer lane the exact lattice is preserved, not just its
/// saturation, so torsion bookkeeping downstream stays correct.
pub fn row_basis(
    ring: &CoeffRing,
    rows: &[Vec<RingElement>],
) -> Result<Vec<Vec<RingElement>>, Error> {
    if rows.is_empty() {
        return Ok(Vec::new());
    }
    let nonzero = |r: &Vec<RingElement>| r.iter().any(|e| !e.is_zero());
    if integer_lane(ring)? {
        let (h, _, _) = int::echelon_with_transform(&to_int_rows(rows));
        let rows = from_int_rows(ring, h);
        Ok(rows.into_iter().filter(nonzero).collect())
    } else {
        let (h, _, _) = field::echelon_with_transform(ring, &rows.to_vec());
        Ok(h.into_iter().filter(nonzero).collect())
    }
}

/// Shape of `R^dim / rowspan(rel_rows)`.
pub fn quotient_invariants(
    ring: &CoeffRing,
    dim: usize,
    rel_rows: &[Vec<RingElement>],
) -> Result<ModuleShape, Error> {
    if rel_rows.is_empty() {
        return Ok(ModuleShape {
            rank: dim,
            torsion: Vec::new(),
        });
    }
    if integer_lane(ring)? {
        let diag = int::snf_diagonal(&to_int_rows(rel_rows));
        let inverted: &[u64] = match ring {
            CoeffRing::LocalizedIntegers(ps) => ps,
            _ => &[],
        };
        let mut torsion = Vec::new();
        for d in &diag {
            let mut d = d.abs();
            for &p in inverted {
                let p = BigInt::from(p);
                while (&d % &p).is_zero() {
                    d /= &p;
                }
            }
            if !d.is_one() {
                torsion.push(d);
            }
        }
        Ok(ModuleShape {
            rank: dim - diag.len(),
            torsion,
        })
    } else {
        let r = field::rank(ring, &rel_rows.to_vec());
        Ok(ModuleShape {
            rank: dim - r,
            torsion: Vec::new(),
        })
    }
}

/// Shape of `span(kernel_rows) / span(image_rows)`, all rows in the same
/// ambient coordinates. The image must lie in the kernel span; integer
/// kernels from [`left_kernel`] are saturated, so the membership solve is
/// exact over every supported ring.
pub fn homology_shape(
    ring: &CoeffRing,
    kernel_rows: &[Vec<RingElement>],
    image_rows: &[Vec<RingElement>],
) -> Result<ModuleShape, Error> {
    let mut rels = Vec::new();
    for row in image_rows {
        if row.iter().all(|e| e.is_zero()) {
            continue;
        }
        let x = solve_in_span(ring, kernel_rows, row)?.ok_or_else(|| {
            Error::Internal("boundary row escapes the cycle lattice".into())
        })?;
        rels.push(x);
    }
    quotient_invariants(ring, kernel_rows.len(), &rels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_shapes() {
        let z = CoeffRing::Integers;
        // Z^2 / <(2,0)> = Z + Z/2
        let rel = vec![vec![z.from_int(2), z.from_int(0)]];
        let s = quotient_invariants(&z, 2, &rel).unwrap();
        assert_eq!(s.rank, 1);
        assert_eq!(s.torsion, vec![BigInt::from(2)]);

        // same module over Z[1/2] loses the torsion
        let zloc = CoeffRing::localized(&[2]).unwrap();
        let rel = vec![vec![zloc.from_int(2), zloc.from_int(0)]];
        let s = quotient_invariants(&zloc, 2, &rel).unwrap();
        assert_eq!(s.rank, 1);
        assert!(s.torsion.is_empty());

        // over a field the relation just drops the dimension
        let q = CoeffRing::Rationals;
        let rel = vec![vec![q.from_int(2), q.from_int(0)]];
        let s = quotient_invariants(&q, 2, &rel).unwrap();
        assert_eq!(s.rank, 1);
        assert!(s.torsion.is_empty());
    }

    #[test]
    fn composite_modulus_rejected() {
        let z4 = CoeffRing::zmod(4).unwrap();
        assert!(quotient_invariants(&z4, 1, &[vec![z4.from_int(2)]]).is_err());
    }
}
