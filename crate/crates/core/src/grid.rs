//! Sampled fields on a fundamental cell of `t/Γ` and the Euclidean geometry
//! of the cell.
//!
//! Grids are uniform in the fractional coordinates of the `Γ`-basis
//! `2π A_{α_i}/⟨α_i,α_i⟩`, with the same resolution along every axis, so a
//! Weyl element permutes grid points exactly and the periodic trapezoidal
//! rule is exact on exponentials below the Nyquist level.

use crate::root_system::RootSystem;
use crate::{rat_to_f64, Rat};
use std::f64::consts::TAU;
use std::sync::Arc;

/// Cholesky factor `L` (lower triangular) of the simple-root Gram matrix,
/// in f64. Euclidean coordinates of an ambient vector `v` are `Lᵀ v`.
pub fn gram_cholesky(rs: &RootSystem) -> Vec<Vec<f64>> {
    let n = rs.rank;
    let g: Vec<Vec<f64>> = rs
        .gram
        .iter()
        .map(|row| row.iter().map(rat_to_f64).collect())
        .collect();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = g[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    l
}

/// Euclidean coordinates of an ambient (simple-root basis) vector.
pub fn euclidean_coords(l: &[Vec<f64>], ambient: &[f64]) -> Vec<f64> {
    let n = ambient.len();
    (0..n)
        .map(|j| (j..n).map(|i| l[i][j] * ambient[i]).sum())
        .collect()
}

/// Uniform grid over the fundamental cell, `n` points per axis.
#[derive(Debug, Clone)]
pub struct TorusGrid {
    pub rs: Arc<RootSystem>,
    pub n: usize,
    /// Euclidean vectors of the (2π-scaled) `Γ`-basis.
    basis: Vec<Vec<f64>>,
}

impl TorusGrid {
    pub fn new(rs: Arc<RootSystem>, n: usize) -> Self {
        let l = gram_cholesky(&rs);
        let basis = (0..rs.rank)
            .map(|i| {
                let gii = rat_to_f64(&rs.gram[i][i]);
                let mut amb = vec![0.0; rs.rank];
                amb[i] = TAU / gii;
                euclidean_coords(&l, &amb)
            })
            .collect();
        TorusGrid { rs, n, basis }
    }

    pub fn rank(&self) -> usize {
        self.rs.rank
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.rank() as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Multi-index of a flat index (row-major, first axis slowest).
    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0usize; self.rank()];
        for ax in (0..self.rank()).rev() {
            out[ax] = idx % self.n;
            idx /= self.n;
        }
        out
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi.iter().fold(0usize, |acc, &i| acc * self.n + i)
    }

    /// Fractional coordinates of a grid point.
    pub fn frac(&self, multi: &[usize]) -> Vec<f64> {
        multi.iter().map(|&i| i as f64 / self.n as f64).collect()
    }

    /// Euclidean coordinates of `H(x)` for fractional `x` (no wrapping).
    pub fn euclid_of_frac(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rank()];
        for (i, b) in self.basis.iter().enumerate() {
            for (o, &bv) in out.iter_mut().zip(b) {
                *o += x[i] * bv;
            }
        }
        out
    }

    /// Distance from the grid point to the identity in the torus metric
    /// (minimum over two shells of lattice translates).
    pub fn dist_to_origin(&self, multi: &[usize]) -> f64 {
        self.dist_to_origin_frac(&self.frac(multi))
    }

    pub fn dist_to_origin_frac(&self, x: &[f64]) -> f64 {
        let mut best = f64::INFINITY;
        let mut offs = vec![0i64; self.rank()];
        self.scan_shifts(0, &mut offs, x, &mut best);
        best.sqrt()
    }

    fn scan_shifts(&self, ax: usize, offs: &mut Vec<i64>, x: &[f64], best: &mut f64) {
        if ax == self.rank() {
            let shifted: Vec<f64> = x
                .iter()
                .zip(offs.iter())
                .map(|(&xi, &o)| xi + o as f64)
                .collect();
            let e = self.euclid_of_frac(&shifted);
            let d2: f64 = e.iter().map(|v| v * v).sum();
            if d2 < *best {
                *best = d2;
            }
            return;
        }
        for s in -2i64..=2 {
            offs[ax] = s;
            self.scan_shifts(ax + 1, offs, x, best);
        }
    }

    /// Torus distance to the identity for every grid point, as a flat array
    /// (one shell of lattice translates; enough for the reduced bases here).
    pub fn distance_field(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        for idx in 0..self.len() {
            let x = self.frac(&self.multi_index(idx));
            let mut best = f64::INFINITY;
            let mut offs = vec![0i64; self.rank()];
            self.scan_shells(0, &mut offs, &x, &mut best);
            out.push(best.sqrt());
        }
        out
    }

    fn scan_shells(&self, ax: usize, offs: &mut Vec<i64>, x: &[f64], best: &mut f64) {
        if ax == self.rank() {
            let shifted: Vec<f64> = x
                .iter()
                .zip(offs.iter())
                .map(|(&xi, &o)| xi + o as f64)
                .collect();
            let e = self.euclid_of_frac(&shifted);
            let d2: f64 = e.iter().map(|v| v * v).sum();
            if d2 < *best {
                *best = d2;
            }
            return;
        }
        for s in -1i64..=1 {
            offs[ax] = s;
            self.scan_shells(ax + 1, offs, x, best);
        }
    }

    /// A safe "one grid cell" length for support margins: the diameter of a
    /// grid cell in the Euclidean metric.
    pub fn cell_diameter(&self) -> f64 {
        let corner: Vec<f64> = self
            .basis
            .iter()
            .fold(vec![0.0; self.rank()], |mut acc, b| {
                for (a, &bv) in acc.iter_mut().zip(b) {
                    *a += bv.abs() / self.n as f64;
                }
                acc
            });
        corner.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Matrix of a Weyl element on fractional coordinates (integer; maps the
    /// grid onto itself modulo 1).
    pub fn weyl_frac_matrix(&self, w: usize) -> Vec<Vec<i64>> {
        let rs = &self.rs;
        let n = rs.rank;
        let mut out = vec![vec![0i64; n]; n];
        for i in 0..n {
            // image of the i-th Γ-basis vector, in ambient coordinates
            let mut amb = vec![Rat::from_integer(0.into()); n];
            amb[i] = Rat::from_integer(1.into()) / rs.gram[i][i].clone();
            let img = rs.apply_weyl_ambient(w, &amb);
            for (j, row) in out.iter_mut().enumerate() {
                let c = img[j].clone() * rs.gram[j][j].clone();
                assert!(c.is_integer(), "Weyl action must preserve Γ");
                use num_traits::ToPrimitive;
                row[i] = c.to_integer().to_i64().unwrap();
            }
        }
        out
    }
}

/// A real field sampled on a [`TorusGrid`].
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub grid: TorusGrid,
    pub data: Vec<f64>,
}

impl GridFunction {
    pub fn from_fn(grid: TorusGrid, f: impl Fn(&[f64]) -> f64) -> Self {
        let mut data = Vec::with_capacity(grid.len());
        for idx in 0..grid.len() {
            let multi = grid.multi_index(idx);
            data.push(f(&grid.frac(&multi)));
        }
        GridFunction { grid, data }
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        let len = grid.len();
        GridFunction {
            grid,
            data: vec![0.0; len],
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.data.iter().fold(0.0, |a, &v| a.max(v.abs()))
    }

    pub fn sup_diff(&self, other: &GridFunction) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |a, (&x, &y)| a.max((x - y).abs()))
    }

    pub fn l2_norm(&self) -> f64 {
        (self.data.iter().map(|v| v * v).sum::<f64>() / self.data.len() as f64).sqrt()
    }

    pub fn pointwise_mul(&self, other: &GridFunction) -> GridFunction {
        assert_eq!(self.data.len(), other.data.len());
        GridFunction {
            grid: self.grid.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> GridFunction {
        GridFunction {
            grid: self.grid.clone(),
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// Sup of `|f|` over points at torus distance ≥ `r` from the identity.
    pub fn sup_outside_radius(&self, r: f64) -> f64 {
        let mut sup: f64 = 0.0;
        for idx in 0..self.grid.len() {
            let multi = self.grid.multi_index(idx);
            if self.grid.dist_to_origin(&multi) >= r {
                sup = sup.max(self.data[idx].abs());
            }
        }
        sup
    }

    /// Sup of `|f|` over points at torus distance ≤ `r`.
    pub fn sup_inside_radius(&self, r: f64) -> f64 {
        let mut sup: f64 = 0.0;
        for idx in 0..self.grid.len() {
            let multi = self.grid.multi_index(idx);
            if self.grid.dist_to_origin(&multi) <= r {
                sup = sup.max(self.data[idx].abs());
            }
        }
        sup
    }

    /// Largest distance from the identity at which `|f|` exceeds
    /// `tol_rel · sup|f|`.
    pub fn support_radius(&self, tol_rel: f64) -> f64 {
        let thresh = tol_rel * self.sup_norm();
        let mut r: f64 = 0.0;
        for idx in 0..self.grid.len() {
            if self.data[idx].abs() > thresh {
                let multi = self.grid.multi_index(idx);
                r = r.max(self.grid.dist_to_origin(&multi));
            }
        }
        r
    }

    /// Largest deviation `|f(x) − f(wx)|` over the group and the grid.
    pub fn weyl_invariance_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let n = self.grid.n as i64;
        for w in 0..self.grid.rs.weyl_order() {
            let mat = self.grid.weyl_frac_matrix(w);
            for idx in 0..self.grid.len() {
                let multi = self.grid.multi_index(idx);
                let image: Vec<usize> = mat
                    .iter()
                    .map(|row| {
                        let v: i64 = row
                            .iter()
                            .zip(&multi)
                            .map(|(&c, &m)| c * m as i64)
                            .sum();
                        (v.rem_euclid(n)) as usize
                    })
                    .collect();
                let j = self.grid.flat_index(&image);
                worst = worst.max((self.data[idx] - self.data[j]).abs());
            }
        }
        worst
    }

    /// CSV rows `x_1,...,x_n,value` (fractional coordinates).
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for ax in 0..self.grid.rank() {
            s.push_str(&format!("x{}", ax + 1));
            s.push(',');
        }
        s.push_str("value\n");
        for idx in 0..self.grid.len() {
            let multi = self.grid.multi_index(idx);
            for x in self.grid.frac(&multi) {
                s.push_str(&format!("{x:.10},"));
            }
            s.push_str(&format!("{:.12e}\n", self.data[idx]));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::SystemKind;

    #[test]
    fn a1_cell_geometry() {
        let rs = RootSystem::new(SystemKind::A1, &[2]).unwrap();
        let grid = TorusGrid::new(rs, 8);
        // Γ basis vector has length 2π; x = 1/2 is the farthest point (π).
        let d = grid.dist_to_origin(&[4]);
        assert!((d - std::f64::consts::PI).abs() < 1e-12);
        let d = grid.dist_to_origin(&[7]);
        assert!((d - TAU / 8.0).abs() < 1e-12, "wraps around");
        assert!((grid.cell_diameter() - TAU / 8.0).abs() < 1e-12);
    }

    #[test]
    fn weyl_invariance_on_grid() {
        let rs = RootSystem::new(SystemKind::A2, &[2]).unwrap();
        let grid = TorusGrid::new(rs.clone(), 12);
        let delta = crate::exppoly::delta_poly(&rs);
        let f = GridFunction::from_fn(grid, |x| delta.eval_frac(x).re);
        assert!(f.weyl_invariance_defect() < 1e-10);
    }

    #[test]
    fn b2_distances_symmetric() {
        let rs = RootSystem::new(SystemKind::B2, &[2, 2]).unwrap();
        let grid = TorusGrid::new(rs, 10);
        // the swap (x1,x2) ↦ (x2,x1) is not an isometry of B2, but x ↦ −x is
        let d1 = grid.dist_to_origin(&[3, 7]);
        let d2 = grid.dist_to_origin(&[7, 3]);
        assert!((d1 - d2).abs() < 1e-12);
    }
}
