//! Gaussian elimination over an exact field (`Q` or `Z/p`), with the same
//! row conventions as the integer lane.

use crate::coeff::{CoeffRing, RingElement};

pub type FMat = Vec<Vec<RingElement>>;

fn identity(ring: &CoeffRing, n: usize) -> FMat {
    let mut u = vec![vec![ring.zero(); n]; n];
    for (i, row) in u.iter_mut().enumerate() {
        row[i] = ring.one();
    }
    u
}

fn row_axpy(ring: &CoeffRing, dst: &mut [RingElement], src: &[RingElement], c: &RingElement) {
    if c.is_zero() {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        *d = ring.add(d, &ring.mul(c, s));
    }
}

/// Row echelon with transform: `(h, u, pivots)` with `u * m = h`.
pub fn echelon_with_transform(
    ring: &CoeffRing,
    m: &FMat,
) -> (FMat, FMat, Vec<(usize, usize)>) {
    assert!(ring.is_field(), "field lane requires a field");
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut h = m.clone();
    let mut u = identity(ring, nrows);
    let mut pivots = Vec::new();
    let mut top = 0usize;
    for col in 0..ncols {
        if top == nrows {
            break;
        }
        let Some(p) = (top..nrows).find(|&i| !h[i][col].is_zero()) else {
            continue;
        };
        h.swap(top, p);
        u.swap(top, p);
        let inv = ring.inverse(&h[top][col]).expect("nonzero field element");
        for e in h[top].iter_mut() {
            *e = ring.mul(e, &inv);
        }
        for e in u[top].iter_mut() {
            *e = ring.mul(e, &inv);
        }
        for i in 0..nrows {
            if i == top || h[i][col].is_zero() {
                continue;
            }
            let c = ring.neg(&h[i][col]);
            let pivot_row = h[top].clone();
            row_axpy(ring, &mut h[i], &pivot_row, &c);
            let pivot_u = u[top].clone();
            row_axpy(ring, &mut u[i], &pivot_u, &c);
        }
        pivots.push((top, col));
        top += 1;
    }
    (h, u, pivots)
}

pub fn left_kernel(ring: &CoeffRing, m: &FMat) -> FMat {
    if m.is_empty() {
        return Vec::new();
    }
    let (h, u, _) = echelon_with_transform(ring, m);
    h.iter()
        .zip(u)
        .filter(|(hr, _)| hr.iter().all(|e| e.is_zero()))
        .map(|(_, ur)| ur)
        .collect()
}

pub fn solve_left(ring: &CoeffRing, m: &FMat, b: &[RingElement]) -> Option<Vec<RingElement>> {
    if m.is_empty() {
        return b.iter().all(|e| e.is_zero()).then(Vec::new);
    }
    let (h, u, pivots) = echelon_with_transform(ring, m);
    let mut residual = b.to_vec();
    let mut y = vec![ring.zero(); m.len()];
    for &(row, col) in &pivots {
        if residual[col].is_zero() {
            continue;
        }
        // pivot entries are normalized to 1
        let c = residual[col].clone();
        y[row] = c.clone();
        row_axpy(ring, &mut residual, &h[row], &ring.neg(&c));
    }
    if residual.iter().any(|e| !e.is_zero()) {
        return None;
    }
    let ncols_u = u.first().map_or(0, |r| r.len());
    let mut x = vec![ring.zero(); ncols_u];
    for (yi, ur) in y.iter().zip(&u) {
        row_axpy(ring, &mut x, ur, yi);
    }
    Some(x)
}

pub fn rank(ring: &CoeffRing, m: &FMat) -> usize {
    if m.is_empty() {
        return 0;
    }
    echelon_with_transform(ring, m).2.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(ring: &CoeffRing, rows: &[&[i64]]) -> FMat {
        rows.iter()
            .map(|r| r.iter().map(|&e| ring.from_int(e)).collect())
            .collect()
    }

    #[test]
    fn kernel_and_solve_over_q() {
        let q = CoeffRing::Rationals;
        let m = mat(&q, &[&[1, 2], &[2, 4], &[0, 1]]);
        let k = left_kernel(&q, &m);
        assert_eq!(k.len(), 1);
        let x = solve_left(&q, &m, &[q.from_int(1), q.from_int(3)]).unwrap();
        let prod: Vec<RingElement> = (0..2)
            .map(|j| {
                x.iter()
                    .zip(&m)
                    .fold(q.zero(), |acc, (xi, row)| q.add(&acc, &q.mul(xi, &row[j])))
            })
            .collect();
        assert_eq!(prod, vec![q.from_int(1), q.from_int(3)]);
    }

    #[test]
    fn rank_over_z3() {
        let z3 = CoeffRing::zmod(3).unwrap();
        // 3 = 0 mod 3, so this matrix drops rank
        let m = mat(&z3, &[&[3, 1], &[0, 1]]);
        assert_eq!(rank(&z3, &m), 1);
    }
}
