//! The Jacobi transform `f̂(m,μ) = ⟨f, P(m,μ)⟩_m` and its inverse: exact on
//! exponential polynomials, lattice-rule quadrature on sampled fields, with
//! doubling gates for resolution and truncation.
//!
//! Product systems of A1 factors additionally get separable evaluation
//! tables, which turn synthesis and analysis into axis-by-axis tensor
//! contractions; that is what makes the rank-3 wave experiments affordable.

use crate::error::{Error, Result};
use crate::exppoly::{inner_product_m, symmetrize, QExpPoly};
use crate::grid::{GridFunction, TorusGrid};
use crate::jacobi::JacobiTable;
use crate::root_system::{RootSystem, SystemKind, Weight};
use crate::{rat, rat_to_f64, Rat, C64};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Spectral coefficients on the dominant cone.
#[derive(Debug, Clone)]
pub struct SpectralCoeffs {
    pub rs: Arc<RootSystem>,
    pub values: BTreeMap<Weight, C64>,
    pub truncation_level: i64,
}

impl SpectralCoeffs {
    pub fn zero(rs: Arc<RootSystem>) -> Self {
        SpectralCoeffs {
            rs,
            values: BTreeMap::new(),
            truncation_level: 0,
        }
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.values().fold(0.0, |a, v| a.max(v.norm()))
    }

    /// `Σ_μ |f̂(μ)|²/‖P(m,μ)‖²` (the spectral side of the Parseval identity).
    pub fn parseval_sum(&self, table: &JacobiTable) -> f64 {
        self.values
            .iter()
            .map(|(mu, v)| {
                let n = rat_to_f64(&table.jacobi(mu).expect("dominant").norm_sq);
                v.norm_sqr() / n
            })
            .sum()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("mu_coords,re,im\n");
        for (mu, v) in &self.values {
            let coords = mu
                .coords
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            s.push_str(&format!("{coords},{:.12e},{:.12e}\n", v.re, v.im));
        }
        s
    }
}

// ---- exact layer -----------------------------------------------------------

/// Exact Jacobi transform of an exponential polynomial. Rejects non-invariant
/// input unless `do_symmetrize` is set.
pub fn transform_exact(
    table: &JacobiTable,
    f: &QExpPoly,
    do_symmetrize: bool,
) -> Result<Vec<(Weight, Rat)>> {
    let rs = &table.rs;
    let f = if f.is_weyl_invariant(rs) {
        f.clone()
    } else if do_symmetrize {
        symmetrize(rs, f)
    } else {
        return Err(Error::NotInvariant);
    };
    // support is contained in the dominant weights no farther from 0 than
    // the farthest weight of f
    let mut max_norm = Rat::zero();
    for (kappa, _) in f.terms() {
        let n = rs.weight_norm_sq(kappa);
        if n > max_norm {
            max_norm = n;
        }
    }
    let mut out = Vec::new();
    for mu in dominant_ball(rs, &max_norm) {
        let p = table.jacobi(&mu)?;
        let v = inner_product_m(&f, &p.poly, &table.delta);
        if !v.is_zero() {
            out.push((mu, v));
        }
    }
    Ok(out)
}

/// All dominant weights with `‖μ‖² ≤ bound`.
pub fn dominant_ball(rs: &RootSystem, norm_sq_bound: &Rat) -> Vec<Weight> {
    let bound_f = rat_to_f64(norm_sq_bound).max(0.0).sqrt();
    let per_axis: Vec<i64> = (0..rs.rank)
        .map(|i| {
            let gii = rat_to_f64(&rs.gram[i][i]).sqrt();
            (bound_f / gii).ceil() as i64 + 1
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![0i64; rs.rank];
    fn rec(
        bounds: &[i64],
        cur: &mut Vec<i64>,
        dim: usize,
        rs: &RootSystem,
        bound: &Rat,
        out: &mut Vec<Weight>,
    ) {
        if dim == bounds.len() {
            let w = Weight::new(cur.clone());
            if rs.weight_norm_sq(&w) <= *bound {
                out.push(w);
            }
            return;
        }
        for v in 0..=bounds[dim] {
            cur[dim] = v;
            rec(bounds, cur, dim + 1, rs, bound, out);
        }
    }
    rec(&per_axis, &mut cur, 0, rs, norm_sq_bound, &mut out);
    out.sort();
    out
}

/// Exact inverse: `Σ_μ f̂(μ) P(m,μ)/‖P(m,μ)‖²`.
pub fn synthesize_exact(table: &JacobiTable, coeffs: &[(Weight, Rat)]) -> Result<QExpPoly> {
    let mut out = QExpPoly::zero(table.rs.rank);
    for (mu, v) in coeffs {
        let p = table.jacobi(mu)?;
        out = out.add(&p.poly.scalar_mul(&(v / &p.norm_sq)));
    }
    Ok(out)
}

// ---- generic numerical layer -------------------------------------------------

/// Evaluate an exponential polynomial on every grid point (twiddle-table
/// based; phases are exact since all weights are lattice points).
pub fn eval_poly_on_grid(poly: &QExpPoly, grid: &TorusGrid) -> Vec<C64> {
    let n = grid.n;
    let twiddle: Vec<C64> = (0..n)
        .map(|r| {
            let phase = std::f64::consts::TAU * r as f64 / n as f64;
            C64::new(phase.cos(), phase.sin())
        })
        .collect();
    let mut out = vec![C64::new(0.0, 0.0); grid.len()];
    let rank = grid.rank();
    for (kappa, c) in poly.terms() {
        let cv = C64::new(rat_to_f64(c), 0.0);
        for (idx, o) in out.iter_mut().enumerate() {
            let mut rem = idx;
            let mut acc: i64 = 0;
            for ax in (0..rank).rev() {
                let j = (rem % n) as i64;
                rem /= n;
                acc += kappa.coords[ax] * j;
            }
            let r = acc.rem_euclid(n as i64) as usize;
            *o += cv * twiddle[r];
        }
    }
    out
}

/// Quadrature transform of a sampled field over all dominant μ with
/// coordinates ≤ `level`. The grid must satisfy the Nyquist condition for
/// the integrand `f · P(μ,·⁻¹) · δ`.
pub fn transform_numeric(
    table: &JacobiTable,
    f: &GridFunction,
    level: i64,
) -> Result<SpectralCoeffs> {
    let rs = table.rs.clone();
    let grid = &f.grid;
    let mus = dominant_level_set(&rs, level);
    let mut max_band: i64 = 0;
    for mu in &mus {
        let p = table.jacobi(mu)?;
        max_band = max_band.max(p.poly.max_abs_coord());
    }
    let band = max_band + table.delta.max_abs_coord();
    if (grid.n as i64) < 2 * band + 1 {
        return Err(Error::UnderResolved(format!(
            "grid n = {} below the Nyquist requirement {} for level {level}",
            grid.n,
            2 * band + 1
        )));
    }
    let delta_vals = eval_poly_on_grid(&table.delta, grid);
    let mut values = BTreeMap::new();
    for mu in mus {
        let p = table.jacobi(&mu)?;
        let pinv = p.poly.conj_inverse();
        let pv = eval_poly_on_grid(&pinv, grid);
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..grid.len() {
            acc += f.data[i] * delta_vals[i].re * pv[i];
        }
        acc /= grid.len() as f64;
        values.insert(mu, acc);
    }
    Ok(SpectralCoeffs {
        rs,
        values,
        truncation_level: level,
    })
}

pub fn dominant_level_set(rs: &RootSystem, level: i64) -> Vec<Weight> {
    fn rec(level: i64, cur: &mut Vec<i64>, dim: usize, out: &mut Vec<Weight>) {
        if dim == cur.len() {
            out.push(Weight::new(cur.clone()));
            return;
        }
        for v in 0..=level {
            cur[dim] = v;
            rec(level, cur, dim + 1, out);
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0i64; rs.rank];
    rec(level, &mut cur, 0, &mut out);
    out
}

/// Transform with the resolution doubling gate: samples the callable on `n`
/// and `2n` grids and demands coefficient agreement below `gate_tol`.
pub fn transform_from_fn(
    table: &JacobiTable,
    f: impl Fn(&[f64]) -> f64,
    n: usize,
    level: i64,
    gate_tol: f64,
) -> Result<SpectralCoeffs> {
    let coarse = transform_numeric(
        table,
        &GridFunction::from_fn(TorusGrid::new(table.rs.clone(), n), &f),
        level,
    )?;
    let fine = transform_numeric(
        table,
        &GridFunction::from_fn(TorusGrid::new(table.rs.clone(), 2 * n), &f),
        level,
    )?;
    let mut worst = 0.0f64;
    for (mu, v) in &fine.values {
        let w = coarse.values.get(mu).copied().unwrap_or(C64::new(0.0, 0.0));
        worst = worst.max((v - w).norm());
    }
    if worst > gate_tol {
        return Err(Error::UnderResolved(format!(
            "doubling the grid moved coefficients by {worst:.3e} > {gate_tol:.1e}"
        )));
    }
    Ok(fine)
}

/// Synthesis `Σ_μ f̂(μ) P(m,μ,·)/‖P‖²` on a grid. Returns the real field and
/// the largest imaginary residual of the sum.
pub fn synthesize(
    table: &JacobiTable,
    coeffs: &SpectralCoeffs,
    grid: &TorusGrid,
) -> Result<(GridFunction, f64)> {
    if table.rs.kind.is_a1_product() {
        return synthesize_product(table, coeffs, grid);
    }
    let mut acc = vec![C64::new(0.0, 0.0); grid.len()];
    for (mu, v) in &coeffs.values {
        let p = table.jacobi(mu)?;
        let pv = eval_poly_on_grid(&p.poly, grid);
        let scale = v / rat_to_f64(&p.norm_sq);
        for (a, pvi) in acc.iter_mut().zip(&pv) {
            *a += scale * pvi;
        }
    }
    let imag = acc.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
    Ok((
        GridFunction {
            grid: grid.clone(),
            data: acc.iter().map(|z| z.re).collect(),
        },
        imag,
    ))
}

// ---- separable fast path for products of A1 factors ------------------------

/// Per-axis evaluation tables for an orthogonal product of A1 factors:
/// `vals[ax][l][j] = P_{m_ax}(l·α_ax)(x_j)` (real by symmetry), the per-axis
/// norms `‖P_l‖²` and normalizations `c(m_ax, (l+ρ_ax)α_ax)`.
pub struct AxisTables {
    pub levels: i64,
    pub vals: Vec<Vec<Vec<f64>>>,
    pub norm_sq: Vec<Vec<f64>>,
    pub c_mu_rho: Vec<Vec<f64>>,
    pub rho: Vec<i64>,
}

/// Tables are built by the exact-norm three-term recurrence
/// `P_{l+1} = M(α)·P_l − (‖P_l‖²/‖P_{l−1}‖²)·P_{l−1}` (the mixed
/// coefficient vanishes by parity of the weight), so the cost is `O(L·n)`
/// per axis and no high-level Gram solves occur on the numerical path.
pub fn axis_tables(rs: &Arc<RootSystem>, level: i64, n: usize) -> Result<AxisTables> {
    if !rs.kind.is_a1_product() {
        return Err(Error::Unsupported(
            "axis tables need a product of A1 factors".into(),
        ));
    }
    let mut vals = Vec::new();
    let mut norms = Vec::new();
    let mut cs = Vec::new();
    let mut rho = Vec::new();
    for ax in 0..rs.rank {
        let sub = RootSystem::new(SystemKind::A1, &[rs.orbit_mults[ax]])?;
        let table = JacobiTable::new(sub);
        let p_half = table.rs.rho.coords[0];
        rho.push(p_half);
        let mut axis_norms = Vec::with_capacity(level as usize + 1);
        let mut axis_cs = Vec::with_capacity(level as usize + 1);
        for l in 0..=level {
            let mu = Weight::new(vec![l]);
            axis_norms.push(rat_to_f64(&table.norm_sq_closed(&mu)?));
            axis_cs.push(rat_to_f64(&table.c_fn(&[rat(l + p_half)])?));
        }
        let mut axis_vals: Vec<Vec<f64>> = Vec::with_capacity(level as usize + 1);
        let m1: Vec<f64> = (0..n)
            .map(|j| 2.0 * (std::f64::consts::TAU * j as f64 / n as f64).cos())
            .collect();
        for l in 0..=level as usize {
            let row = match l {
                0 => vec![1.0; n],
                1 => m1.clone(),
                _ => {
                    let b = axis_norms[l - 1] / axis_norms[l - 2];
                    (0..n)
                        .map(|j| m1[j] * axis_vals[l - 1][j] - b * axis_vals[l - 2][j])
                        .collect()
                }
            };
            axis_vals.push(row);
        }
        vals.push(axis_vals);
        norms.push(axis_norms);
        cs.push(axis_cs);
    }
    Ok(AxisTables {
        levels: level,
        vals,
        norm_sq: norms,
        c_mu_rho: cs,
        rho,
    })
}

impl AxisTables {
    /// `‖P(m,μ)‖²` for a product weight.
    pub fn norm_sq(&self, mu: &[i64]) -> f64 {
        mu.iter()
            .enumerate()
            .map(|(ax, &l)| self.norm_sq[ax][l as usize])
            .product()
    }

    /// `c(m,μ+ρ)` for a product weight.
    pub fn c_mu_rho(&self, mu: &[i64]) -> f64 {
        mu.iter()
            .enumerate()
            .map(|(ax, &l)| self.c_mu_rho[ax][l as usize])
            .product()
    }
}

/// Separable synthesis: `out(x) = Σ_{μ ∈ [0,L]^n} coeff(μ)·∏ T_ax[μ_ax][x_ax]`.
///
/// `coeff` already carries whatever normalization the caller wants (norms,
/// propagators, …). Contraction proceeds axis by axis, so the rank-3 cost is
/// `O(L³N + L²N² + LN³)` rather than `O(L³N³)`.
pub fn contract_synthesis(
    tables: &AxisTables,
    coeff: &dyn Fn(&[i64]) -> f64,
    grid: &TorusGrid,
) -> GridFunction {
    let rank = grid.rank();
    let n = grid.n;
    let lp1 = (tables.levels + 1) as usize;
    match rank {
        1 => {
            let mut data = vec![0.0f64; n];
            for l in 0..lp1 {
                let c = coeff(&[l as i64]);
                if c == 0.0 {
                    continue;
                }
                let row = &tables.vals[0][l];
                for (d, r) in data.iter_mut().zip(row) {
                    *d += c * r;
                }
            }
            GridFunction {
                grid: grid.clone(),
                data,
            }
        }
        2 => {
            let mut a = vec![0.0f64; lp1 * n];
            for l1 in 0..lp1 {
                for l2 in 0..lp1 {
                    let c = coeff(&[l1 as i64, l2 as i64]);
                    if c == 0.0 {
                        continue;
                    }
                    let row = &tables.vals[1][l2];
                    let dst = &mut a[l1 * n..(l1 + 1) * n];
                    for (d, r) in dst.iter_mut().zip(row) {
                        *d += c * r;
                    }
                }
            }
            let mut data = vec![0.0f64; n * n];
            for l1 in 0..lp1 {
                let t1 = &tables.vals[0][l1];
                let src = &a[l1 * n..(l1 + 1) * n];
                for x1 in 0..n {
                    let w = t1[x1];
                    if w == 0.0 {
                        continue;
                    }
                    let dst = &mut data[x1 * n..(x1 + 1) * n];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d += w * s;
                    }
                }
            }
            GridFunction {
                grid: grid.clone(),
                data,
            }
        }
        3 => {
            let mut a = vec![0.0f64; lp1 * lp1 * n];
            for l1 in 0..lp1 {
                for l2 in 0..lp1 {
                    let base = (l1 * lp1 + l2) * n;
                    for l3 in 0..lp1 {
                        let c = coeff(&[l1 as i64, l2 as i64, l3 as i64]);
                        if c == 0.0 {
                            continue;
                        }
                        let row = &tables.vals[2][l3];
                        let dst = &mut a[base..base + n];
                        for (d, r) in dst.iter_mut().zip(row) {
                            *d += c * r;
                        }
                    }
                }
            }
            let mut b = vec![0.0f64; lp1 * n * n];
            for l1 in 0..lp1 {
                for l2 in 0..lp1 {
                    let src = &a[(l1 * lp1 + l2) * n..(l1 * lp1 + l2 + 1) * n];
                    let t2 = &tables.vals[1][l2];
                    for x2 in 0..n {
                        let w = t2[x2];
                        if w == 0.0 {
                            continue;
                        }
                        let dst = &mut b[(l1 * n + x2) * n..(l1 * n + x2 + 1) * n];
                        for (d, s) in dst.iter_mut().zip(src) {
                            *d += w * s;
                        }
                    }
                }
            }
            let mut data = vec![0.0f64; n * n * n];
            for l1 in 0..lp1 {
                let t1 = &tables.vals[0][l1];
                for x1 in 0..n {
                    let w = t1[x1];
                    if w == 0.0 {
                        continue;
                    }
                    let src = &b[l1 * n * n..(l1 + 1) * n * n];
                    let dst = &mut data[x1 * n * n..(x1 + 1) * n * n];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d += w * s;
                    }
                }
            }
            GridFunction {
                grid: grid.clone(),
                data,
            }
        }
        _ => unreachable!("rank ≤ 3"),
    }
}

fn synthesize_product(
    table: &JacobiTable,
    coeffs: &SpectralCoeffs,
    grid: &TorusGrid,
) -> Result<(GridFunction, f64)> {
    let level = coeffs
        .values
        .keys()
        .flat_map(|mu| mu.coords.iter().copied())
        .max()
        .unwrap_or(0);
    let tables = axis_tables(&table.rs, level, grid.n)?;
    let map = &coeffs.values;
    let imag = map.values().fold(0.0f64, |m, z| m.max(z.im.abs()));
    let out = contract_synthesis(
        &tables,
        &|mu: &[i64]| match map.get(&Weight::new(mu.to_vec())) {
            Some(v) => v.re / tables.norm_sq(mu),
            None => 0.0,
        },
        grid,
    );
    Ok((out, imag))
}

/// `⟨f,g⟩_m` by the lattice rule on a shared grid.
pub fn inner_product_numeric(table: &JacobiTable, f: &GridFunction, g: &GridFunction) -> f64 {
    let delta_vals = eval_poly_on_grid(&table.delta, &f.grid);
    let mut acc = 0.0;
    for i in 0..f.data.len() {
        acc += f.data[i] * g.data[i] * delta_vals[i].re;
    }
    acc / f.data.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exppoly::orbit_sum;

    fn a1m2() -> JacobiTable {
        JacobiTable::new(RootSystem::new(SystemKind::A1, &[2]).unwrap())
    }

    #[test]
    fn exact_transform_examples() {
        let t = a1m2();
        // f = P(m,ν) picks out ‖P‖²δ_{μν}
        let p2 = t.jacobi(&Weight::new(vec![2])).unwrap();
        let coeffs = transform_exact(&t, &p2.poly, false).unwrap();
        assert_eq!(coeffs.len(), 1);
        assert_eq!(coeffs[0].0, Weight::new(vec![2]));
        assert_eq!(coeffs[0].1, p2.norm_sq);
        // f = 1: only f̂(0) = 2
        let coeffs = transform_exact(&t, &QExpPoly::one(1), false).unwrap();
        assert_eq!(coeffs, vec![(Weight::zero(1), rat(2))]);
        // f = M(α): f̂(α) = 2, f̂(0) = 0
        let m1 = orbit_sum(&t.rs, &Weight::new(vec![1]));
        let coeffs = transform_exact(&t, &m1, false).unwrap();
        assert_eq!(coeffs, vec![(Weight::new(vec![1]), rat(2))]);
        // non-invariant input is rejected without the symmetrize flag
        let e1 = QExpPoly::monomial(Weight::new(vec![1]), rat(1));
        assert!(transform_exact(&t, &e1, false).is_err());
        let sym = transform_exact(&t, &e1, true).unwrap();
        assert_eq!(sym, vec![(Weight::new(vec![1]), rat(1))]);
    }

    #[test]
    fn exact_round_trip() {
        let t = a1m2();
        let f = orbit_sum(&t.rs, &Weight::new(vec![3]))
            .scalar_mul(&crate::ratio(2, 7))
            .add(&QExpPoly::one(1));
        let coeffs = transform_exact(&t, &f, false).unwrap();
        let back = synthesize_exact(&t, &coeffs).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn numeric_matches_exact() {
        let t = a1m2();
        let f_poly = orbit_sum(&t.rs, &Weight::new(vec![2]))
            .add(&orbit_sum(&t.rs, &Weight::new(vec![1])).scalar_mul(&crate::ratio(1, 3)));
        let grid = TorusGrid::new(t.rs.clone(), 32);
        let f = GridFunction::from_fn(grid, |x| f_poly.eval_frac(x).re);
        let num = transform_numeric(&t, &f, 4).unwrap();
        let exact = transform_exact(&t, &f_poly, false).unwrap();
        for (mu, v) in &num.values {
            let e = exact
                .iter()
                .find(|(m, _)| m == mu)
                .map(|(_, q)| rat_to_f64(q))
                .unwrap_or(0.0);
            assert!((v.re - e).abs() < 1e-10, "μ = {mu}");
            assert!(v.im.abs() < 1e-12);
        }
        // zero input → zero coefficients
        let z = GridFunction::zeros(TorusGrid::new(t.rs.clone(), 32));
        let num = transform_numeric(&t, &z, 3).unwrap();
        assert!(num.sup_abs() == 0.0);
    }

    #[test]
    fn nyquist_gate() {
        let t = a1m2();
        let f = GridFunction::zeros(TorusGrid::new(t.rs.clone(), 8));
        assert!(matches!(
            transform_numeric(&t, &f, 6),
            Err(Error::UnderResolved(_))
        ));
    }

    #[test]
    fn synthesis_reproduces_polynomials() {
        let t = a1m2();
        let grid = TorusGrid::new(t.rs.clone(), 64);
        // single coefficient ‖P‖² at μ → P(m,μ,·)
        let mu = Weight::new(vec![3]);
        let p = t.jacobi(&mu).unwrap();
        let mut coeffs = SpectralCoeffs::zero(t.rs.clone());
        coeffs
            .values
            .insert(mu.clone(), C64::new(rat_to_f64(&p.norm_sq), 0.0));
        coeffs.truncation_level = 3;
        let (field, imag) = synthesize(&t, &coeffs, &grid).unwrap();
        assert!(imag < 1e-12);
        for j in 0..grid.n {
            let x = [j as f64 / grid.n as f64];
            let want = p.poly.eval_frac(&x).re;
            assert!((field.data[j] - want).abs() < 1e-10);
        }
    }

    #[test]
    fn product_synthesis_matches_generic() {
        let rs = RootSystem::new(SystemKind::A1xA1, &[2, 4]).unwrap();
        let t = JacobiTable::new(rs);
        let grid = TorusGrid::new(t.rs.clone(), 24);
        let mut coeffs = SpectralCoeffs::zero(t.rs.clone());
        coeffs
            .values
            .insert(Weight::new(vec![1, 2]), C64::new(0.7, 0.0));
        coeffs
            .values
            .insert(Weight::new(vec![0, 1]), C64::new(-0.3, 0.0));
        coeffs.truncation_level = 2;
        let (fast, _) = synthesize(&t, &coeffs, &grid).unwrap();
        let mut slow = vec![0.0f64; grid.len()];
        for (mu, v) in &coeffs.values {
            let p = t.jacobi(mu).unwrap();
            let pv = eval_poly_on_grid(&p.poly, &grid);
            let s = v.re / rat_to_f64(&p.norm_sq);
            for (o, z) in slow.iter_mut().zip(&pv) {
                *o += s * z.re;
            }
        }
        for (a, b) in fast.data.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn axis_table_recurrence_matches_exact_polynomials() {
        for m in [2u32, 4, 6] {
            let rs = RootSystem::new(SystemKind::A1, &[m]).unwrap();
            let t = JacobiTable::new(rs.clone());
            let tables = axis_tables(&rs, 10, 16).unwrap();
            for l in 0..=10i64 {
                let p = t.jacobi(&Weight::new(vec![l])).unwrap();
                assert!(
                    (tables.norm_sq[0][l as usize] - rat_to_f64(&p.norm_sq)).abs() < 1e-9
                );
                for j in 0..16usize {
                    let x = [j as f64 / 16.0];
                    let want = p.poly.eval_frac(&x).re;
                    let got = tables.vals[0][l as usize][j];
                    assert!((want - got).abs() < 1e-9, "m={m} l={l} j={j}");
                }
            }
        }
    }

    #[test]
    fn parseval_on_polynomials() {
        let t = a1m2();
        let f_poly = orbit_sum(&t.rs, &Weight::new(vec![2]))
            .add(&QExpPoly::one(1).scalar_mul(&crate::ratio(5, 3)));
        let coeffs = transform_exact(&t, &f_poly, false).unwrap();
        let spectral: f64 = coeffs
            .iter()
            .map(|(mu, v)| {
                let n = rat_to_f64(&t.jacobi(mu).unwrap().norm_sq);
                rat_to_f64(v).powi(2) / n
            })
            .sum();
        let direct = rat_to_f64(&inner_product_m(&f_poly, &f_poly, &t.delta));
        assert!((spectral - direct).abs() < 1e-12);
    }
}
