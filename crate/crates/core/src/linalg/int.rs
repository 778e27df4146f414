//! Exact integer linear algebra: row echelon with unimodular transform,
//! left kernels, exact solves, and Smith normal form.
//!
//! All matrices are row-major `Vec<Vec<BigInt>>`; vectors multiply on the
//! left, `x * M`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub type IMat = Vec<Vec<BigInt>>;

fn zeros(n: usize) -> Vec<BigInt> {
    vec![BigInt::zero(); n]
}

fn identity(n: usize) -> IMat {
    let mut u = vec![zeros(n); n];
    for (i, row) in u.iter_mut().enumerate() {
        row[i] = BigInt::from(1);
    }
    u
}

fn row_axpy(dst: &mut [BigInt], src: &[BigInt], c: &BigInt) {
    if c.is_zero() {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        *d += c * s;
    }
}

/// Row echelon form by unimodular row operations: returns `(h, u, pivots)`
/// with `u * m = h`, `u` unimodular, and `pivots[k] = (row, col)` for each
/// pivot in order.
pub fn echelon_with_transform(m: &IMat) -> (IMat, IMat, Vec<(usize, usize)>) {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut h = m.clone();
    let mut u = identity(nrows);
    let mut pivots = Vec::new();
    let mut top = 0usize;
    for col in 0..ncols {
        if top == nrows {
            break;
        }
        loop {
            // smallest nonzero entry in this column at or below `top`
            let mut best: Option<usize> = None;
            for i in top..nrows {
                if !h[i][col].is_zero()
                    && best.map_or(true, |b| h[i][col].abs() < h[b][col].abs())
                {
                    best = Some(i);
                }
            }
            let Some(p) = best else { break };
            h.swap(top, p);
            u.swap(top, p);
            let mut done = true;
            for i in top + 1..nrows {
                if h[i][col].is_zero() {
                    continue;
                }
                let q = -(&h[i][col] / &h[top][col]);
                let (hp, hi) = split_rows(&mut h, top, i);
                row_axpy(hi, hp, &q);
                let (up, ui) = split_rows(&mut u, top, i);
                row_axpy(ui, up, &q);
                if !h[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                pivots.push((top, col));
                top += 1;
                break;
            }
        }
    }
    (h, u, pivots)
}

fn split_rows<'a>(m: &'a mut IMat, a: usize, b: usize) -> (&'a [BigInt], &'a mut [BigInt]) {
    assert!(a < b);
    let (lo, hi) = m.split_at_mut(b);
    (&lo[a], &mut hi[0])
}

/// Basis of `{ x : x * m = 0 }`. Rows of the result span the full integer
/// kernel lattice (the kernel of an integer matrix is saturated).
pub fn left_kernel(m: &IMat) -> IMat {
    if m.is_empty() {
        return Vec::new();
    }
    let (h, u, _) = echelon_with_transform(m);
    h.iter()
        .zip(u)
        .filter(|(hr, _)| hr.iter().all(|e| e.is_zero()))
        .map(|(_, ur)| ur)
        .collect()
}

/// Solves `x * m = b` exactly over the integers.
pub fn solve_left(m: &IMat, b: &[BigInt]) -> Option<Vec<BigInt>> {
    if m.is_empty() {
        return b.iter().all(|e| e.is_zero()).then(Vec::new);
    }
    let (h, u, pivots) = echelon_with_transform(m);
    let mut residual = b.to_vec();
    let mut y = zeros(m.len());
    for &(row, col) in &pivots {
        if residual[col].is_zero() {
            continue;
        }
        let (q, r) = num_integer::Integer::div_rem(&residual[col], &h[row][col]);
        if !r.is_zero() {
            return None;
        }
        y[row] = q.clone();
        row_axpy(&mut residual, &h[row], &(-q));
    }
    if residual.iter().any(|e| !e.is_zero()) {
        return None;
    }
    // x = y * u
    let ncols_u = u.first().map_or(0, |r| r.len());
    let mut x = zeros(ncols_u);
    for (yi, ur) in y.iter().zip(&u) {
        row_axpy(&mut x, ur, yi);
    }
    Some(x)
}

pub fn rank(m: &IMat) -> usize {
    if m.is_empty() {
        return 0;
    }
    let (_, _, pivots) = echelon_with_transform(m);
    pivots.len()
}

/// Smith normal form diagonal of `m`: nonzero invariant factors
/// `d_1 | d_2 | ...`, all positive.
pub fn snf_diagonal(m: &IMat) -> Vec<BigInt> {
    let mut a = m.clone();
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut r0 = 0usize;
    let mut c0 = 0usize;
    while r0 < nrows && c0 < ncols {
        // locate smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in r0..nrows {
            for j in c0..ncols {
                if !a[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(r0, pi);
        for row in a.iter_mut() {
            row.swap(c0, pj);
        }
        loop {
            let mut clean = true;
            for i in r0 + 1..nrows {
                if a[i][c0].is_zero() {
                    continue;
                }
                let q = -(&a[i][c0] / &a[r0][c0]);
                let (rp, ri) = split_rows(&mut a, r0, i);
                row_axpy(ri, rp, &q);
                if !a[i][c0].is_zero() {
                    clean = false;
                }
            }
            for j in c0 + 1..ncols {
                if a[r0][j].is_zero() {
                    continue;
                }
                let q = -(&a[r0][j] / &a[r0][c0]);
                for row in a.iter_mut().skip(r0) {
                    let t = &row[c0] * &q;
                    row[j] += t;
                }
                if !a[r0][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // the pivot may have grown smaller entries into its row/column;
                // re-pivot on the smallest entry of row/column r0/c0
                let mut best: Option<(usize, usize)> = None;
                for i in r0..nrows {
                    if !a[i][c0].is_zero()
                        && best.map_or(true, |(bi, bj)| a[i][c0].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, c0));
                    }
                }
                for j in c0..ncols {
                    if !a[r0][j].is_zero()
                        && best.map_or(true, |(bi, bj)| a[r0][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((r0, j));
                    }
                }
                let (pi, pj) = best.expect("nonzero pivot must remain");
                a.swap(r0, pi);
                for row in a.iter_mut() {
                    row.swap(c0, pj);
                }
                continue;
            }
            // enforce divisibility of the remaining block by the pivot
            let mut offending = None;
            'scan: for i in r0 + 1..nrows {
                for j in c0 + 1..ncols {
                    if !(&a[i][j] % &a[r0][c0]).is_zero() {
                        offending = Some(i);
                        break 'scan;
                    }
                }
            }
            match offending {
                Some(i) => {
                    // fold row i into the pivot row so the non-divisible entry
                    // participates in the next reduction round
                    let src = a[i].clone();
                    row_axpy(&mut a[r0], &src, &BigInt::from(1));
                    continue;
                }
                None => break,
            }
        }
        let d = a[r0][c0].abs();
        diag.push(d);
        r0 += 1;
        c0 += 1;
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IMat {
        rows.iter()
            .map(|r| r.iter().map(|&e| BigInt::from(e)).collect())
            .collect()
    }

    #[test]
    fn kernel_of_simple_matrix() {
        let m = mat(&[&[1, 2], &[2, 4], &[0, 1]]);
        let k = left_kernel(&m);
        assert_eq!(k.len(), 1);
        // kernel row must annihilate m
        for col in 0..2 {
            let s: BigInt = k[0].iter().zip(&m).map(|(x, row)| x * &row[col]).sum();
            assert!(s.is_zero());
        }
        // and be primitive (2, -1, 0) up to sign
        assert_eq!(k[0][0].abs(), BigInt::from(2));
    }

    #[test]
    fn solve_and_fail() {
        let m = mat(&[&[2, 0], &[0, 3]]);
        let x = solve_left(&m, &[BigInt::from(4), BigInt::from(9)]).unwrap();
        assert_eq!(x, vec![BigInt::from(2), BigInt::from(3)]);
        assert!(solve_left(&m, &[BigInt::from(1), BigInt::from(0)]).is_none());
    }

    #[test]
    fn snf_classics() {
        assert_eq!(
            snf_diagonal(&mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]])),
            vec![BigInt::from(2), BigInt::from(2), BigInt::from(156)]
        );
        assert_eq!(snf_diagonal(&mat(&[&[6]])), vec![BigInt::from(6)]);
        assert_eq!(
            snf_diagonal(&mat(&[&[2, 0], &[0, 3]])),
            vec![BigInt::from(1), BigInt::from(6)]
        );
        assert!(snf_diagonal(&mat(&[&[0, 0]])).is_empty());
    }

    #[test]
    fn snf_random_against_rank() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let nr = rng.gen_range(1..5);
            let nc = rng.gen_range(1..5);
            let m: IMat = (0..nr)
                .map(|_| (0..nc).map(|_| BigInt::from(rng.gen_range(-6i64..=6))).collect())
                .collect();
            let d = snf_diagonal(&m);
            assert_eq!(d.len(), rank(&m));
            for w in d.windows(2) {
                assert!((&w[1] % &w[0]).is_zero(), "divisibility {d:?}");
            }
        }
    }
}
