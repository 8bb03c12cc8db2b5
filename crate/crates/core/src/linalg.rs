//! Small dense exact-rational linear algebra: just enough for Gram solves,
//! matrix inversion and the shift-operator least systems.

use crate::Rat;
use num_traits::{One, Zero};

pub(crate) fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    let mut out = vec![vec![Rat::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                let t = &a[i][l] * &b[l][j];
                out[i][j] += t;
            }
        }
    }
    out
}

pub(crate) fn mat_vec(a: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Rat::zero(), |acc, (x, y)| acc + x * y)
        })
        .collect()
}

/// Inverse by Gauss-Jordan with partial (first nonzero) pivoting.
pub(crate) fn mat_inv(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x /= p.clone();
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..2 * n {
                    let t = &f * &m[col][c];
                    m[r][c] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solve the square system `a x = b` exactly. `None` if singular.
pub(crate) fn solve_square(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x /= p.clone();
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let t = &f * &m[col][c];
                    m[r][c] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Outcome of reducing a (possibly rectangular, possibly inconsistent)
/// linear system `a x = b` to reduced row echelon form.
pub(crate) struct RrefSolution {
    /// A particular solution with all free variables set to zero.
    pub particular: Vec<Rat>,
    /// Number of free variables (0 means the solution is unique).
    pub free_vars: usize,
    pub rank: usize,
}

/// Gauss-Jordan on an augmented rectangular system. Returns `None` when the
/// system is inconsistent.
pub(crate) fn solve_rectangular(rows: &mut Vec<(Vec<Rat>, Rat)>, ncols: usize) -> Option<RrefSolution> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r].0[col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let p = rows[rank].0[col].clone();
        for x in rows[rank].0.iter_mut() {
            *x /= p.clone();
        }
        rows[rank].1 /= p.clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r].0[col].is_zero() {
                let f = rows[r].0[col].clone();
                for c in col..ncols {
                    let t = &f * &rows[rank].0[c];
                    rows[r].0[c] -= t;
                }
                let t = &f * &rows[rank].1;
                rows[r].1 -= t;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    // inconsistent iff a zero row has nonzero rhs
    for (lhs, rhs) in rows.iter().skip(rank) {
        if lhs.iter().all(Rat::is_zero) && !rhs.is_zero() {
            return None;
        }
    }
    let mut particular = vec![Rat::zero(); ncols];
    for (r, &col) in pivots.iter().enumerate() {
        particular[col] = rows[r].1.clone();
    }
    Some(RrefSolution {
        particular,
        free_vars: ncols - rank,
        rank,
    })
}
