//! The triple `(a, Δ, m)`: reduced root systems of rank ≤ 3 with even
//! Weyl-invariant multiplicities, their Weyl groups, the restricted weight
//! lattice `P` with its dominance order, and the lattice `Γ`.
//!
//! Vectors in `a*` are stored by exact rational coordinates in the
//! *simple-root basis*; the inner product is carried by the rational Gram
//! matrix of the simple roots, so every pairing below is exact. Weights are
//! stored by their integer evaluations `μ_α = ⟨μ,α⟩/⟨α,α⟩` at the simple
//! roots, which makes membership in `P` a type invariant.

use crate::error::{Error, Result};
use crate::linalg::{mat_inv, mat_mul, mat_vec};
use crate::{rat, ratio, Rat};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

/// The root systems realized by this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    A1,
    #[serde(rename = "a1xa1")]
    A1xA1,
    #[serde(rename = "a1cubed")]
    A1Cubed,
    A2,
    B2,
}

impl SystemKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a1" => Ok(SystemKind::A1),
            "a1xa1" | "a1a1" | "a1x a1" => Ok(SystemKind::A1xA1),
            "a1cubed" | "a1^3" | "a1xa1xa1" => Ok(SystemKind::A1Cubed),
            "a2" => Ok(SystemKind::A2),
            "b2" => Ok(SystemKind::B2),
            other => Err(Error::UnknownKind(other.to_string())),
        }
    }

    /// True when the system is an orthogonal product of A1 factors.
    pub fn is_a1_product(self) -> bool {
        matches!(self, SystemKind::A1 | SystemKind::A1xA1 | SystemKind::A1Cubed)
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SystemKind::A1 => "a1",
            SystemKind::A1xA1 => "a1xa1",
            SystemKind::A1Cubed => "a1cubed",
            SystemKind::A2 => "a2",
            SystemKind::B2 => "b2",
        };
        f.write_str(s)
    }
}

/// Serializable descriptor `{kind, multiplicities}` used by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemDescriptor {
    pub kind: SystemKind,
    pub multiplicities: Vec<u32>,
}

/// A restricted weight, stored by its integer evaluations at the simple
/// roots. `μ ∈ P⁺` iff all coordinates are nonnegative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Weight {
    pub coords: Vec<i64>,
}

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Weight { coords }
    }

    pub fn zero(rank: usize) -> Self {
        Weight { coords: vec![0; rank] }
    }

    pub fn is_dominant(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A positive root with its multiplicity data.
#[derive(Debug, Clone)]
pub struct Root {
    /// Integer coordinates in the simple-root basis.
    pub coords: Vec<i64>,
    /// Index of the Weyl orbit this root belongs to.
    pub orbit: usize,
    /// The (even) multiplicity `m_α`.
    pub mult: u32,
}

/// One Weyl group element, as the matrices of its action on root-basis
/// coordinates and on weight evaluation coordinates.
#[derive(Debug, Clone)]
pub struct WeylElement {
    pub root_mat: Vec<Vec<i64>>,
    pub eval_mat: Vec<Vec<i64>>,
}

/// The immutable data of a triple `(a, Δ, m)`.
#[derive(Debug)]
pub struct RootSystem {
    pub kind: SystemKind,
    pub rank: usize,
    /// Gram matrix of the simple roots.
    pub gram: Vec<Vec<Rat>>,
    pub positive_roots: Vec<Root>,
    pub weyl: Vec<WeylElement>,
    /// Per-orbit multiplicities, in orbit order.
    pub orbit_mults: Vec<u32>,
    /// `ρ = ½ Σ_{α>0} m_α α` in the simple-root basis.
    pub rho_ambient: Vec<Rat>,
    /// `ρ` as a weight (its evaluations are integers since `m` is even).
    pub rho: Weight,
    /// eval = M · ambient; `M[i][j] = ⟨α_j, α_i⟩/⟨α_i, α_i⟩`.
    m_to_eval: Vec<Vec<Rat>>,
    m_to_ambient: Vec<Vec<Rat>>,
    /// `⟨μ,ν⟩ = eval(μ)ᵀ B eval(ν)` for weights.
    eval_gram: Vec<Vec<Rat>>,
    /// Gram matrix of the `Γ`-basis vectors `A_{α_i}/⟨α_i,α_i⟩` (the 2π is
    /// kept symbolic everywhere).
    pub gamma_gram: Vec<Vec<Rat>>,
}

const EXPECTED_WEYL_ORDER: &[(SystemKind, usize)] = &[
    (SystemKind::A1, 2),
    (SystemKind::A1xA1, 4),
    (SystemKind::A1Cubed, 8),
    (SystemKind::A2, 6),
    (SystemKind::B2, 8),
];

impl RootSystem {
    /// Build one of the supported systems with per-orbit even multiplicities.
    ///
    /// Orbits are ordered by the first positive root they contain, so the
    /// expected argument counts are: A1 and A2 take one value, A1xA1 and B2
    /// take two (for B2: long orbit first), A1³ takes three.
    pub fn new(kind: SystemKind, multiplicities: &[u32]) -> Result<Arc<RootSystem>> {
        for &m in multiplicities {
            if m == 0 || m % 2 != 0 {
                return Err(Error::InvalidMultiplicity(format!(
                    "multiplicities must be even and >= 2, got {m}"
                )));
            }
        }
        let (rank, gram_i, pos): (usize, Vec<Vec<i64>>, Vec<Vec<i64>>) = match kind {
            SystemKind::A1 => (1, vec![vec![1]], vec![vec![1]]),
            SystemKind::A1xA1 => (
                2,
                vec![vec![1, 0], vec![0, 1]],
                vec![vec![1, 0], vec![0, 1]],
            ),
            SystemKind::A1Cubed => (
                3,
                vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
                vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            ),
            SystemKind::A2 => (
                2,
                vec![vec![2, -1], vec![-1, 2]],
                vec![vec![1, 0], vec![0, 1], vec![1, 1]],
            ),
            SystemKind::B2 => (
                2,
                // α₁ long (norm² 2), α₂ short (norm² 1)
                vec![vec![2, -1], vec![-1, 1]],
                vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]],
            ),
        };
        let gram: Vec<Vec<Rat>> = gram_i
            .iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect();

        // Simple reflections on root-basis coordinates, then the full group
        // by closure.
        let gens: Vec<Vec<Vec<i64>>> = (0..rank)
            .map(|i| {
                let mut s = vec![vec![0i64; rank]; rank];
                for (r, row) in s.iter_mut().enumerate() {
                    row[r] = 1;
                }
                // s_i(α_j) = α_j − (2⟨α_j,α_i⟩/⟨α_i,α_i⟩) α_i
                for j in 0..rank {
                    let c = 2 * gram_i[j][i] / gram_i[i][i];
                    s[i][j] -= c;
                }
                s
            })
            .collect();
        let elements = generate_group(&gens, rank);
        let expected = EXPECTED_WEYL_ORDER
            .iter()
            .find(|(k, _)| *k == kind)
            .map(|(_, n)| *n)
            .unwrap();
        assert_eq!(elements.len(), expected, "Weyl group order mismatch");

        // Orbit partition of the positive roots under W (orbits include the
        // negatives; two positive roots share an orbit iff one is a Weyl
        // image of the other up to sign).
        let mut orbit_of = vec![usize::MAX; pos.len()];
        let mut n_orbits = 0usize;
        for i in 0..pos.len() {
            if orbit_of[i] != usize::MAX {
                continue;
            }
            let id = n_orbits;
            n_orbits += 1;
            let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
            for w in &elements {
                let img = apply_i64(w, &pos[i]);
                let neg: Vec<i64> = img.iter().map(|x| -x).collect();
                seen.insert(img);
                seen.insert(neg);
            }
            for (j, p) in pos.iter().enumerate() {
                if seen.contains(p) {
                    orbit_of[j] = id;
                }
            }
        }
        if multiplicities.len() != n_orbits {
            return Err(Error::InvalidMultiplicity(format!(
                "{kind} has {n_orbits} root orbit(s); got {} multiplicities",
                multiplicities.len()
            )));
        }

        let positive_roots: Vec<Root> = pos
            .iter()
            .zip(&orbit_of)
            .map(|(coords, &orbit)| Root {
                coords: coords.clone(),
                orbit,
                mult: multiplicities[orbit],
            })
            .collect();

        // ρ = ½ Σ m_α α, in the root basis.
        let mut rho_ambient = vec![Rat::zero(); rank];
        for r in &positive_roots {
            for (i, &c) in r.coords.iter().enumerate() {
                rho_ambient[i] += ratio(r.mult as i64 * c, 2);
            }
        }

        // Evaluation map: eval_i(v) = ⟨v, α_i⟩ / ⟨α_i, α_i⟩.
        let mut m_to_eval = vec![vec![Rat::zero(); rank]; rank];
        for i in 0..rank {
            for j in 0..rank {
                m_to_eval[i][j] = &gram[j][i] / &gram[i][i];
            }
        }
        let m_to_ambient = mat_inv(&m_to_eval).expect("evaluation map invertible");
        let eval_gram = {
            // B = (M⁻¹)ᵀ G M⁻¹
            let mt: Vec<Vec<Rat>> = (0..rank)
                .map(|i| (0..rank).map(|j| m_to_ambient[j][i].clone()).collect())
                .collect();
            mat_mul(&mat_mul(&mt, &gram), &m_to_ambient)
        };
        let gamma_gram: Vec<Vec<Rat>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| &gram[i][j] / (&gram[i][i] * &gram[j][j]))
                    .collect()
            })
            .collect();

        let rho_eval_rat = mat_vec(&m_to_eval, &rho_ambient);
        let rho = Weight::new(
            rho_eval_rat
                .iter()
                .map(|q| {
                    assert!(q.is_integer(), "ρ must lie in P for even multiplicities");
                    q.to_integer().to_i64().unwrap()
                })
                .collect(),
        );

        let weyl: Vec<WeylElement> = elements
            .into_iter()
            .map(|root_mat| {
                let rm_rat: Vec<Vec<Rat>> = root_mat
                    .iter()
                    .map(|r| r.iter().map(|&x| rat(x)).collect())
                    .collect();
                let em = mat_mul(&mat_mul(&m_to_eval, &rm_rat), &m_to_ambient);
                let eval_mat: Vec<Vec<i64>> = em
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|q| {
                                assert!(q.is_integer(), "Weyl action must preserve P");
                                q.to_integer().to_i64().unwrap()
                            })
                            .collect()
                    })
                    .collect();
                WeylElement { root_mat, eval_mat }
            })
            .collect();

        let rs = RootSystem {
            kind,
            rank,
            gram,
            positive_roots,
            weyl,
            orbit_mults: multiplicities.to_vec(),
            rho_ambient,
            rho,
            m_to_eval,
            m_to_ambient,
            eval_gram,
            gamma_gram,
        };
        rs.validate()?;
        Ok(Arc::new(rs))
    }

    fn validate(&self) -> Result<()> {
        // Δ reduced: no positive root is twice another.
        for a in &self.positive_roots {
            for b in &self.positive_roots {
                let twice: Vec<i64> = b.coords.iter().map(|x| 2 * x).collect();
                assert_ne!(a.coords, twice, "system not reduced");
            }
        }
        // ρ_α = m_α/2 on simple roots, ρ_α ≥ m_α/2 > 0 on every positive root.
        for (i, r) in self.positive_roots.iter().enumerate() {
            let ra = self.rho_alpha(i);
            let half = ratio(r.mult as i64, 2);
            assert!(ra > Rat::zero(), "ρ_α must be positive");
            assert!(ra >= half, "ρ_α ≥ m_α/2 must hold");
            if r.coords.iter().map(|x| x.abs()).sum::<i64>() == 1 {
                assert_eq!(ra, half, "ρ_α = m_α/2 on simple roots");
            }
        }
        Ok(())
    }

    pub fn descriptor(&self) -> SystemDescriptor {
        SystemDescriptor {
            kind: self.kind,
            multiplicities: self.orbit_mults.clone(),
        }
    }

    /// Σ_{α>0} m_α/2 — the weight of the polynomial growth in the estimates.
    pub fn half_mult_sum(&self) -> u32 {
        self.positive_roots.iter().map(|r| r.mult / 2).sum()
    }

    pub fn weyl_order(&self) -> usize {
        self.weyl.len()
    }

    // ---- inner products -------------------------------------------------

    pub fn inner_ambient(&self, a: &[Rat], b: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                if !a[i].is_zero() && !b[j].is_zero() {
                    acc += &a[i] * &b[j] * &self.gram[i][j];
                }
            }
        }
        acc
    }

    pub fn inner_weights(&self, mu: &Weight, nu: &Weight) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                if mu.coords[i] != 0 && nu.coords[j] != 0 {
                    acc += rat(mu.coords[i]) * rat(nu.coords[j]) * &self.eval_gram[i][j];
                }
            }
        }
        acc
    }

    pub fn weight_norm_sq(&self, mu: &Weight) -> Rat {
        self.inner_weights(mu, mu)
    }

    /// Ambient (simple-root basis) coordinates of a weight.
    pub fn ambient(&self, mu: &Weight) -> Vec<Rat> {
        let v: Vec<Rat> = mu.coords.iter().map(|&c| rat(c)).collect();
        mat_vec(&self.m_to_ambient, &v)
    }

    /// Evaluation coordinates `(⟨v,α_i⟩/⟨α_i,α_i⟩)_i` of an ambient vector.
    pub fn eval_coords(&self, ambient: &[Rat]) -> Vec<Rat> {
        mat_vec(&self.m_to_eval, ambient)
    }

    /// The weight with the given ambient coordinates, if it lies in `P`.
    pub fn weight_from_ambient(&self, ambient: &[Rat]) -> Option<Weight> {
        let ev = self.eval_coords(ambient);
        let mut coords = Vec::with_capacity(self.rank);
        for q in &ev {
            if !q.is_integer() {
                return None;
            }
            coords.push(q.to_integer().to_i64()?);
        }
        Some(Weight::new(coords))
    }

    // ---- μ_α ------------------------------------------------------------

    /// `μ_α = ⟨μ,α⟩/⟨α,α⟩` for `α` a root of the system (given in root-basis
    /// coordinates, sign allowed). Errors when `α` is not a root.
    pub fn mu_sub_alpha(&self, ambient: &[Rat], alpha: &[i64]) -> Result<Rat> {
        let idx = self.root_index(alpha).ok_or(Error::NotARoot)?;
        let a = &self.positive_roots[idx].coords;
        let sign = if alpha.iter().zip(a).all(|(x, y)| *x == *y) {
            rat(1)
        } else {
            rat(-1)
        };
        let ar: Vec<Rat> = a.iter().map(|&x| rat(x)).collect();
        let num = self.inner_ambient(ambient, &ar);
        let den = self.inner_ambient(&ar, &ar);
        Ok(sign * num / den)
    }

    pub fn mu_sub_alpha_weight(&self, mu: &Weight, alpha: &[i64]) -> Result<Rat> {
        self.mu_sub_alpha(&self.ambient(mu), alpha)
    }

    /// Index into `positive_roots` for `±α`, or `None` when not a root.
    pub fn root_index(&self, alpha: &[i64]) -> Option<usize> {
        let neg: Vec<i64> = alpha.iter().map(|x| -x).collect();
        self.positive_roots
            .iter()
            .position(|r| r.coords == alpha || r.coords == neg)
    }

    /// `ρ_α` for the i-th positive root, exact.
    pub fn rho_alpha(&self, root_idx: usize) -> Rat {
        let r = &self.positive_roots[root_idx];
        let ar: Vec<Rat> = r.coords.iter().map(|&x| rat(x)).collect();
        self.inner_ambient(&self.rho_ambient, &ar) / self.inner_ambient(&ar, &ar)
    }

    /// `μ_α` of a weight at the i-th positive root (an integer for μ ∈ P).
    pub fn weight_alpha(&self, mu: &Weight, root_idx: usize) -> Rat {
        let r = &self.positive_roots[root_idx];
        let ar: Vec<Rat> = r.coords.iter().map(|&x| rat(x)).collect();
        self.inner_ambient(&self.ambient(mu), &ar) / self.inner_ambient(&ar, &ar)
    }

    /// `λ_α` at the i-th positive root for rational evaluation coordinates.
    pub fn eval_alpha_rat(&self, ev: &[Rat], root_idx: usize) -> Rat {
        let amb = mat_vec(&self.m_to_ambient, ev);
        let r = &self.positive_roots[root_idx];
        let ar: Vec<Rat> = r.coords.iter().map(|&x| rat(x)).collect();
        self.inner_ambient(&amb, &ar) / self.inner_ambient(&ar, &ar)
    }

    /// Inner product of two rational evaluation-coordinate vectors.
    pub fn inner_eval_rat(&self, a: &[Rat], b: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                if !a[i].is_zero() && !b[j].is_zero() {
                    acc += &a[i] * &b[j] * &self.eval_gram[i][j];
                }
            }
        }
        acc
    }

    // ---- Weyl action ----------------------------------------------------

    pub fn apply_weyl(&self, w: usize, mu: &Weight) -> Weight {
        Weight::new(apply_i64(&self.weyl[w].eval_mat, &mu.coords))
    }

    pub fn apply_weyl_ambient(&self, w: usize, v: &[Rat]) -> Vec<Rat> {
        let m: Vec<Vec<Rat>> = self.weyl[w]
            .root_mat
            .iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect();
        mat_vec(&m, v)
    }

    /// Rational evaluation coordinates transform by the same integer matrix.
    pub fn apply_weyl_eval_rat(&self, w: usize, ev: &[Rat]) -> Vec<Rat> {
        self.weyl[w]
            .eval_mat
            .iter()
            .map(|row| {
                row.iter()
                    .zip(ev)
                    .fold(Rat::zero(), |acc, (&c, x)| acc + rat(c) * x)
            })
            .collect()
    }

    pub fn weyl_orbit(&self, mu: &Weight) -> Vec<Weight> {
        let mut set: BTreeSet<Weight> = BTreeSet::new();
        for w in 0..self.weyl.len() {
            set.insert(self.apply_weyl(w, mu));
        }
        set.into_iter().collect()
    }

    pub fn orbit_stabilizer_size(&self, mu: &Weight) -> usize {
        self.weyl_order() / self.weyl_orbit(mu).len()
    }

    /// The unique dominant representative of the orbit of `mu`.
    pub fn dominant_representative(&self, mu: &Weight) -> Weight {
        self.weyl_orbit(mu)
            .into_iter()
            .find(Weight::is_dominant)
            .expect("every orbit meets P+")
    }

    // ---- dominance ------------------------------------------------------

    /// Heckman-Opdam dominance: `ν ≤ μ` iff `μ − ν` is a nonnegative-integer
    /// combination of the doubled positive roots `2α`.
    pub fn dominance_leq(&self, nu: &Weight, mu: &Weight) -> bool {
        let diff: Vec<i64> = mu
            .coords
            .iter()
            .zip(&nu.coords)
            .map(|(a, b)| a - b)
            .collect();
        let amb = mat_vec(
            &self.m_to_ambient,
            &diff.iter().map(|&c| rat(c)).collect::<Vec<_>>(),
        );
        amb.iter().all(|q| {
            if !q.is_integer() {
                return false;
            }
            let n = q.to_integer();
            !n.is_negative() && (n % 2u32).is_zero()
        })
    }

    /// All `ν ∈ P⁺` with `ν ≤ μ`, including `μ`, sorted by a linear
    /// extension of the dominance order (ascending).
    pub fn lower_cone(&self, mu: &Weight) -> Result<Vec<Weight>> {
        if !mu.is_dominant() {
            return Err(Error::NotDominant);
        }
        let nsq = self.weight_norm_sq(mu);
        // ν ≤ μ dominant forces ‖ν‖ ≤ ‖μ‖, hence ν_αi ≤ ‖μ‖/‖α_i‖.
        let bounds: Vec<i64> = (0..self.rank)
            .map(|i| {
                let b = &nsq / &self.gram[i][i];
                isqrt_rat_floor(&b)
            })
            .collect();
        let mut out: Vec<Weight> = Vec::new();
        let mut cur = vec![0i64; self.rank];
        enumerate_box(&bounds, &mut cur, 0, &mut |c| {
            let nu = Weight::new(c.to_vec());
            if self.dominance_leq(&nu, mu) {
                out.push(nu);
            }
        });
        out.sort_by_key(|nu| {
            let amb = self.ambient(nu);
            let ht: Rat = amb.iter().fold(Rat::zero(), |a, x| a + x);
            (ht, nu.coords.clone())
        });
        Ok(out)
    }

    // ---- torus geometry (numeric) ----------------------------------------

    /// `‖H(x)‖²/(2π)²` for fractional Γ-basis coordinates `x`.
    pub fn cell_norm_sq(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                acc += x[i] * x[j] * crate::rat_to_f64(&self.gamma_gram[i][j]);
            }
        }
        acc
    }

    /// Squared lengths `⟨α,α⟩` over all roots, as f64 (used by `S`).
    pub fn max_root_norm_sq(&self) -> f64 {
        self.positive_roots
            .iter()
            .map(|r| {
                let ar: Vec<Rat> = r.coords.iter().map(|&x| rat(x)).collect();
                crate::rat_to_f64(&self.inner_ambient(&ar, &ar))
            })
            .fold(0.0, f64::max)
    }

    /// Largest `R` with `B_R ⊆ S = {|α(H)| ≤ π/2 ∀α}`.
    pub fn max_admissible_radius(&self) -> f64 {
        std::f64::consts::FRAC_PI_2 / self.max_root_norm_sq().sqrt()
    }
}

fn apply_i64(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn generate_group(gens: &[Vec<Vec<i64>>], rank: usize) -> Vec<Vec<Vec<i64>>> {
    let ident: Vec<Vec<i64>> = (0..rank)
        .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut seen: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue: VecDeque<Vec<Vec<i64>>> = VecDeque::new();
    queue.push_back(ident);
    while let Some(m) = queue.pop_front() {
        if !seen.insert(m.clone()) {
            continue;
        }
        for g in gens {
            let prod: Vec<Vec<i64>> = g
                .iter()
                .map(|grow| {
                    (0..rank)
                        .map(|j| (0..rank).map(|k| grow[k] * m[k][j]).sum())
                        .collect()
                })
                .collect();
            queue.push_back(prod);
        }
        out.push(m);
    }
    out
}

fn enumerate_box(bounds: &[i64], cur: &mut Vec<i64>, dim: usize, f: &mut impl FnMut(&[i64])) {
    if dim == bounds.len() {
        f(cur);
        return;
    }
    for v in 0..=bounds[dim] {
        cur[dim] = v;
        enumerate_box(bounds, cur, dim + 1, f);
    }
}

/// Largest integer `k ≥ 0` with `k² ≤ q` (q a nonnegative rational).
fn isqrt_rat_floor(q: &Rat) -> i64 {
    if q < &Rat::zero() {
        return -1;
    }
    let approx = crate::rat_to_f64(q).sqrt();
    let mut k = approx.floor() as i64;
    while rat(k + 1) * rat(k + 1) <= *q {
        k += 1;
    }
    while k > 0 && rat(k) * rat(k) > *q {
        k -= 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_basics() {
        let rs = RootSystem::new(SystemKind::A1, &[2]).unwrap();
        assert_eq!(rs.positive_roots.len(), 1);
        assert_eq!(rs.weyl_order(), 2);
        // ρ = α, ρ_α = 1
        assert_eq!(rs.rho, Weight::new(vec![1]));
        assert_eq!(rs.rho_alpha(0), rat(1));
        // μ = α: μ_α = 1
        let alpha = Weight::new(vec![1]);
        assert_eq!(rs.weight_alpha(&alpha, 0), rat(1));
        assert_eq!(rs.mu_sub_alpha_weight(&rs.rho.clone(), &[1]).unwrap(), rat(1));
    }

    #[test]
    fn odd_multiplicity_rejected() {
        assert!(RootSystem::new(SystemKind::A1, &[3]).is_err());
        assert!(RootSystem::new(SystemKind::A1, &[0]).is_err());
        assert!(RootSystem::new(SystemKind::B2, &[2]).is_err()); // needs 2 orbit values
    }

    #[test]
    fn a2_rho_and_mu_alpha() {
        let rs = RootSystem::new(SystemKind::A2, &[2]).unwrap();
        assert_eq!(rs.positive_roots.len(), 3);
        assert_eq!(rs.weyl_order(), 6);
        // ρ = α₁+α₂+(α₁+α₂) summed halves = 2(α₁+α₂)·½·2 → ambient (2,2)·... = α₁+α₂ doubled
        assert_eq!(rs.rho_ambient, vec![rat(2), rat(2)]);
        assert_eq!(rs.rho, Weight::new(vec![1, 1]));
        // μ = ρ at the highest root α₁+α₂ is 2
        assert_eq!(rs.mu_sub_alpha_weight(&rs.rho.clone(), &[1, 1]).unwrap(), rat(2));
        // every ρ_α ≥ m/2 = 1
        for i in 0..3 {
            assert!(rs.rho_alpha(i) >= rat(1));
        }
    }

    #[test]
    fn b2_rho_alpha_lemma() {
        let rs = RootSystem::new(SystemKind::B2, &[2, 4]).unwrap();
        assert_eq!(rs.positive_roots.len(), 4);
        assert_eq!(rs.weyl_order(), 8);
        for (i, r) in rs.positive_roots.iter().enumerate() {
            assert!(rs.rho_alpha(i) >= ratio(r.mult as i64, 2));
        }
        // not a root
        assert!(rs.mu_sub_alpha(&[rat(1), rat(1)], &[2, 1]).is_err());
    }

    #[test]
    fn reflection_moves_rho_by_mult() {
        // s_γ ρ = ρ − m_γ γ for simple γ
        for (kind, mults) in [
            (SystemKind::A1, vec![4u32]),
            (SystemKind::A2, vec![2]),
            (SystemKind::B2, vec![2, 4]),
            (SystemKind::A1Cubed, vec![2, 2, 2]),
        ] {
            let rs = RootSystem::new(kind, &mults).unwrap();
            for i in 0..rs.rank {
                // find the Weyl element equal to the i-th simple reflection
                let mut refl = None;
                'outer: for (w, el) in rs.weyl.iter().enumerate() {
                    for (j, row) in el.root_mat.iter().enumerate() {
                        let simple: Vec<i64> =
                            (0..rs.rank).map(|k| i64::from(k == j)).collect();
                        let img = apply_i64(el.root_mat.as_slice(), &simple);
                        let _ = row;
                        let expect: Vec<i64> = if j == i {
                            simple.iter().map(|x| -x).collect()
                        } else {
                            continue;
                        };
                        if img == expect {
                            // candidate: verify it is the reflection on all basis vectors
                            let ok = (0..rs.rank).all(|k| {
                                let e: Vec<i64> =
                                    (0..rs.rank).map(|l| i64::from(l == k)).collect();
                                let img = apply_i64(el.root_mat.as_slice(), &e);
                                let mut exp: Vec<Rat> =
                                    e.iter().map(|&x| rat(x)).collect();
                                // s_i e_k = e_k − 2⟨e_k,α_i⟩/⟨α_i,α_i⟩ e_i
                                let ar: Vec<Rat> = (0..rs.rank)
                                    .map(|l| rat(i64::from(l == i)))
                                    .collect();
                                let er: Vec<Rat> =
                                    e.iter().map(|&x| rat(x)).collect();
                                let c = rat(2) * rs.inner_ambient(&er, &ar)
                                    / rs.inner_ambient(&ar, &ar);
                                exp[i] -= c;
                                img.iter().zip(&exp).all(|(&a, b)| rat(a) == *b)
                            });
                            if ok {
                                refl = Some(w);
                                break 'outer;
                            }
                        }
                    }
                }
                let w = refl.expect("simple reflection present");
                let lhs = rs.apply_weyl_ambient(w, &rs.rho_ambient);
                let m_gamma = rs.positive_roots[rs
                    .root_index(
                        &(0..rs.rank)
                            .map(|l| i64::from(l == i))
                            .collect::<Vec<_>>(),
                    )
                    .unwrap()]
                .mult;
                let mut rhs = rs.rho_ambient.clone();
                rhs[i] -= rat(m_gamma as i64);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn dominance_a1() {
        let rs = RootSystem::new(SystemKind::A1, &[2]).unwrap();
        let n = |k| Weight::new(vec![k]);
        assert!(rs.dominance_leq(&n(2), &n(4)));
        assert!(!rs.dominance_leq(&n(3), &n(4)));
        assert!(rs.dominance_leq(&n(4), &n(4)));
    }

    #[test]
    fn dominance_a2_doubled_roots() {
        let rs = RootSystem::new(SystemKind::A2, &[2]).unwrap();
        // μ with ambient 2(α₁+α₂) dominates 0: difference = 2α₁ + 2α₂
        let mu = rs
            .weight_from_ambient(&[rat(2), rat(2)])
            .expect("in P");
        assert!(rs.dominance_leq(&Weight::zero(2), &mu));
        // the fundamental weight ω₁ does not dominate 0
        let w1 = Weight::new(vec![1, 0]);
        assert!(!rs.dominance_leq(&Weight::zero(2), &w1));
    }

    #[test]
    fn lower_cones_a1() {
        let rs = RootSystem::new(SystemKind::A1, &[2]).unwrap();
        let cone = rs.lower_cone(&Weight::new(vec![1])).unwrap();
        assert_eq!(cone, vec![Weight::new(vec![1])]);
        let cone = rs.lower_cone(&Weight::new(vec![2])).unwrap();
        assert_eq!(cone, vec![Weight::new(vec![0]), Weight::new(vec![2])]);
        let cone = rs.lower_cone(&Weight::zero(1)).unwrap();
        assert_eq!(cone, vec![Weight::zero(1)]);
        assert!(rs.lower_cone(&Weight::new(vec![-1])).is_err());
    }

    #[test]
    fn orbits_and_stabilizers() {
        let rs = RootSystem::new(SystemKind::A1, &[2]).unwrap();
        let orbit = rs.weyl_orbit(&Weight::new(vec![1]));
        assert_eq!(orbit.len(), 2);
        assert_eq!(rs.orbit_stabilizer_size(&Weight::zero(1)), 2);

        let rs = RootSystem::new(SystemKind::A2, &[2]).unwrap();
        let orbit = rs.weyl_orbit(&Weight::new(vec![1, 0]));
        assert_eq!(orbit.len(), 3);
        assert_eq!(rs.orbit_stabilizer_size(&Weight::new(vec![1, 0])), 2);
    }

    #[test]
    fn each_orbit_meets_dominant_chamber_once() {
        for (kind, mults) in [
            (SystemKind::A2, vec![2u32]),
            (SystemKind::B2, vec![2, 2]),
            (SystemKind::A1xA1, vec![2, 4]),
        ] {
            let rs = RootSystem::new(kind, &mults).unwrap();
            let b = 6i64;
            let mut cur = vec![0i64; rs.rank];
            let bounds: Vec<i64> = vec![2 * b; rs.rank];
            enumerate_box(&bounds, &mut cur, 0, &mut |c| {
                let mu = Weight::new(c.iter().map(|&x| x - b).collect());
                let orbit = rs.weyl_orbit(&mu);
                let ndom = orbit.iter().filter(|w| w.is_dominant()).count();
                assert_eq!(ndom, 1, "orbit of {mu} meets P+ {ndom} times");
            });
        }
    }

    #[test]
    fn weight_evals_integral_at_every_root() {
        for (kind, mults) in [
            (SystemKind::A2, vec![2u32]),
            (SystemKind::B2, vec![2, 4]),
        ] {
            let rs = RootSystem::new(kind, &mults).unwrap();
            for c0 in -3i64..=3 {
                for c1 in -3i64..=3 {
                    let mu = Weight::new(vec![c0, c1]);
                    for i in 0..rs.positive_roots.len() {
                        assert!(rs.weight_alpha(&mu, i).is_integer());
                    }
                }
            }
        }
    }

    #[test]
    fn gamma_cell_geometry() {
        let rs = RootSystem::new(SystemKind::A1, &[2]).unwrap();
        // Γ basis vector is 2π·α/⟨α,α⟩ = 2π·α, of norm 2π.
        let n2 = rs.cell_norm_sq(&[1.0]);
        assert!((n2 - 1.0).abs() < 1e-14);
        assert!((rs.max_admissible_radius() - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
    }
}
