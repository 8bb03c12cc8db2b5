//! Sparse Laurent ("exponential") polynomials on the restricted weight
//! lattice `P`, with exact rational coefficients or complex coefficients for
//! evaluation contexts.
//!
//! A term `c · e^μ` is keyed by the integer evaluation coordinates of `μ`.
//! On the torus, `e^μ(exp iH) = e^{iμ(H)}`; in the fractional coordinates
//! `x` of the `Γ`-basis this is `e^{2πi ⟨coords(μ), x⟩}`, which is what
//! [`ExpPoly::eval_frac`] computes.

use crate::error::{Error, Result};
use crate::root_system::{RootSystem, Weight};
use crate::{rat, rat_to_f64, Rat, C64};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Coefficient ring for exponential polynomials.
pub trait Coeff: Clone + PartialEq + Zero {
    fn conj(&self) -> Self;
    fn from_rat(q: &Rat) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn add_ref(&self, other: &Self) -> Self;
    fn to_c64(&self) -> C64;
}

impl Coeff for Rat {
    fn conj(&self) -> Self {
        self.clone()
    }
    fn from_rat(q: &Rat) -> Self {
        q.clone()
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn to_c64(&self) -> C64 {
        C64::new(rat_to_f64(self), 0.0)
    }
}

impl Coeff for C64 {
    fn conj(&self) -> Self {
        C64::new(self.re, -self.im)
    }
    fn from_rat(q: &Rat) -> Self {
        C64::new(rat_to_f64(q), 0.0)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn to_c64(&self) -> C64 {
        *self
    }
}

/// A finite linear combination of exponentials `e^μ`, `μ ∈ P`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpPoly<C: Coeff> {
    pub rank: usize,
    terms: BTreeMap<Weight, C>,
}

pub type QExpPoly = ExpPoly<Rat>;
pub type CExpPoly = ExpPoly<C64>;

impl<C: Coeff> ExpPoly<C> {
    pub fn zero(rank: usize) -> Self {
        ExpPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(Weight::zero(rank), C::from_rat(&rat(1)))
    }

    pub fn monomial(mu: Weight, c: C) -> Self {
        let rank = mu.coords.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mu, c);
        }
        ExpPoly { rank, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mu: &Weight) -> C {
        self.terms.get(mu).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficient of `e^0`, i.e. the normalized Haar integral over `T`.
    pub fn constant_term(&self) -> C {
        self.coeff(&Weight::zero(self.rank))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.rank, other.rank, "mixed systems");
        let mut out = self.clone();
        for (mu, c) in &other.terms {
            let entry = out.terms.entry(mu.clone()).or_insert_with(C::zero);
            *entry = entry.add_ref(c);
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scalar_mul(&self, s: &C) -> Self {
        self.map_coeffs(|c| c.mul(s))
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        self.map_terms(|_, c| f(c))
    }

    /// Map each term `(μ, c)` to a new coefficient (diagonal operators).
    pub fn map_terms(&self, f: impl Fn(&Weight, &C) -> C) -> Self {
        let mut terms = BTreeMap::new();
        for (mu, c) in &self.terms {
            let v = f(mu, c);
            if !v.is_zero() {
                terms.insert(mu.clone(), v);
            }
        }
        ExpPoly {
            rank: self.rank,
            terms,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.rank, other.rank, "mixed systems");
        let mut terms: BTreeMap<Weight, C> = BTreeMap::new();
        for (mu, a) in &self.terms {
            for (nu, b) in &other.terms {
                let key = Weight::new(
                    mu.coords
                        .iter()
                        .zip(&nu.coords)
                        .map(|(x, y)| x + y)
                        .collect(),
                );
                let prod = a.mul(b);
                let entry = terms.entry(key).or_insert_with(C::zero);
                *entry = entry.add_ref(&prod);
            }
        }
        terms.retain(|_, v| !v.is_zero());
        ExpPoly {
            rank: self.rank,
            terms,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.rank);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// `f ↦ f̄` on the torus: conjugate coefficients and negate weights
    /// (valid because the `e^μ` are unitary characters of `T`).
    pub fn conj_inverse(&self) -> Self {
        let mut terms = BTreeMap::new();
        for (mu, c) in &self.terms {
            terms.insert(
                Weight::new(mu.coords.iter().map(|x| -x).collect()),
                c.conj(),
            );
        }
        ExpPoly {
            rank: self.rank,
            terms,
        }
    }

    /// Pullback along a Weyl element on exponentials: `e^μ ↦ e^{wμ}`.
    pub fn weyl_image(&self, rs: &RootSystem, w: usize) -> Self {
        let mut terms = BTreeMap::new();
        for (mu, c) in &self.terms {
            terms.insert(rs.apply_weyl(w, mu), c.clone());
        }
        ExpPoly {
            rank: self.rank,
            terms,
        }
    }

    pub fn is_weyl_invariant(&self, rs: &RootSystem) -> bool {
        (0..rs.weyl_order()).all(|w| self.weyl_image(rs, w) == *self)
    }

    /// Evaluate at the torus point with fractional `Γ`-basis coordinates `x`:
    /// `Σ c_μ e^{2πi⟨coords(μ),x⟩}`.
    pub fn eval_frac(&self, x: &[f64]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (mu, c) in &self.terms {
            let phase: f64 = mu
                .coords
                .iter()
                .zip(x)
                .map(|(&k, &xi)| k as f64 * xi)
                .sum::<f64>()
                * std::f64::consts::TAU;
            acc += c.to_c64() * C64::new(phase.cos(), phase.sin());
        }
        acc
    }

    /// Largest absolute coordinate over the support (the bandwidth a lattice
    /// quadrature rule has to resolve).
    pub fn max_abs_coord(&self) -> i64 {
        self.terms
            .keys()
            .flat_map(|mu| mu.coords.iter().map(|c| c.abs()))
            .max()
            .unwrap_or(0)
    }
}

impl QExpPoly {
    pub fn to_complex(&self) -> CExpPoly {
        let mut terms = BTreeMap::new();
        for (mu, c) in &self.terms {
            terms.insert(mu.clone(), C64::new(rat_to_f64(c), 0.0));
        }
        ExpPoly {
            rank: self.rank,
            terms,
        }
    }

    /// Exact Laurent division: returns `q` with `q·divisor = self`, or an
    /// error when the division is not exact.
    ///
    /// Greedy leading-term cancellation in the lexicographic order; for an
    /// exact quotient this takes exactly one step per quotient term, so a
    /// generous step cap is a reliable non-divisibility detector.
    pub fn exact_div(&self, divisor: &QExpPoly) -> Result<QExpPoly> {
        assert_eq!(self.rank, divisor.rank, "mixed systems");
        if divisor.is_zero() {
            return Err(Error::NotDivisible("division by zero".into()));
        }
        let dlead = divisor.terms.keys().next_back().unwrap().clone();
        let dcoef = divisor.terms[&dlead].clone();
        let mut rem = self.terms.clone();
        let mut quot = QExpPoly::zero(self.rank);
        let max_steps = 64 * (self.num_terms() + 1) + 1024;
        let mut steps = 0usize;
        while let Some((rlead, rcoef)) = rem.iter().next_back().map(|(k, v)| (k.clone(), v.clone()))
        {
            steps += 1;
            if steps > max_steps {
                return Err(Error::NotDivisible("no exact quotient".into()));
            }
            let shift = Weight::new(
                rlead
                    .coords
                    .iter()
                    .zip(&dlead.coords)
                    .map(|(a, b)| a - b)
                    .collect(),
            );
            let c = &rcoef / &dcoef;
            for (nu, b) in &divisor.terms {
                let key = Weight::new(
                    shift
                        .coords
                        .iter()
                        .zip(&nu.coords)
                        .map(|(x, y)| x + y)
                        .collect(),
                );
                let sub = &c * b;
                let entry = rem.entry(key.clone()).or_insert_with(Rat::zero);
                *entry -= sub;
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.terms.insert(shift, c);
        }
        Ok(quot)
    }
}

impl fmt::Display for QExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (mu, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*e{mu}")?;
        }
        Ok(())
    }
}

/// Serialized term: integer coordinates plus an exact `p/q` coefficient.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpPolyTerm {
    pub coords: Vec<i64>,
    pub coeff: String,
}

impl QExpPoly {
    pub fn to_terms(&self) -> Vec<ExpPolyTerm> {
        self.terms
            .iter()
            .map(|(mu, c)| ExpPolyTerm {
                coords: mu.coords.clone(),
                coeff: c.to_string(),
            })
            .collect()
    }

    pub fn from_terms(rank: usize, terms: &[ExpPolyTerm]) -> Result<QExpPoly> {
        let mut out = QExpPoly::zero(rank);
        for t in terms {
            if t.coords.len() != rank {
                return Err(Error::InvalidConfig("term rank mismatch".into()));
            }
            let c: Rat = t
                .coeff
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad rational `{}`", t.coeff)))?;
            out = out.add(&QExpPoly::monomial(Weight::new(t.coords.clone()), c));
        }
        Ok(out)
    }
}

// ---- system-level constructions ------------------------------------------

/// Orbit sum `M(μ) = Σ_{ν ∈ Wμ} e^ν`.
pub fn orbit_sum(rs: &RootSystem, mu: &Weight) -> QExpPoly {
    let mut out = QExpPoly::zero(rs.rank);
    for nu in rs.weyl_orbit(mu) {
        out = out.add(&QExpPoly::monomial(nu, rat(1)));
    }
    out
}

/// Average over the Weyl group: `(1/|W|) Σ_w w·f`.
pub fn symmetrize(rs: &RootSystem, f: &QExpPoly) -> QExpPoly {
    let mut acc = QExpPoly::zero(rs.rank);
    for w in 0..rs.weyl_order() {
        acc = acc.add(&f.weyl_image(rs, w));
    }
    acc.scalar_mul(&(rat(1) / rat(rs.weyl_order() as i64)))
}

/// The evaluation coordinates of the i-th positive root, as a weight.
/// `None` when the root does not lie in `P` (short/long mixtures in B2, or
/// the A2 roots: `P` is the weight lattice of the doubled system `2Δ`).
pub fn root_eval_weight(rs: &RootSystem, root_idx: usize) -> Option<Weight> {
    let r = &rs.positive_roots[root_idx];
    let amb: Vec<Rat> = r.coords.iter().map(|&x| rat(x)).collect();
    rs.weight_from_ambient(&amb)
}

/// The doubled root `2α` as a weight; always lies in `P`.
pub fn double_root_eval_weight(rs: &RootSystem, root_idx: usize) -> Weight {
    let r = &rs.positive_roots[root_idx];
    let amb: Vec<Rat> = r.coords.iter().map(|&x| rat(2 * x)).collect();
    rs.weight_from_ambient(&amb).expect("2α lies in P")
}

/// The weight `δ(m) = ∏_{α>0} (−1)^{m_α/2} (e^α − e^{−α})^{m_α}`, which on
/// `T` equals `∏ |e^{α(log t)} − e^{−α(log t)}|^{m_α} = ∏ (2 sin α(H))^{m_α}`.
///
/// Individual roots need not lie in `P`, but each factor expands over even
/// multiples of `α` because `m_α` is even, so δ itself lives in `ℂ[P]`.
pub fn delta_poly(rs: &RootSystem) -> QExpPoly {
    let mut out = QExpPoly::one(rs.rank);
    for (i, root) in rs.positive_roots.iter().enumerate() {
        let m = root.mult as i64;
        let two_alpha = double_root_eval_weight(rs, i);
        // (e^α − e^{−α})^m = Σ_j C(m,j)(−1)^j e^{(m/2−j)·2α}
        let mut factor = QExpPoly::zero(rs.rank);
        for j in 0..=m {
            let c = rat(binomial(m, j)) * rat(if j % 2 == 0 { 1 } else { -1 });
            let k = m / 2 - j;
            let mu = Weight::new(two_alpha.coords.iter().map(|x| k * x).collect());
            factor = factor.add(&QExpPoly::monomial(mu, c));
        }
        let sign = if (m / 2) % 2 == 0 { rat(1) } else { rat(-1) };
        out = out.mul(&factor).scalar_mul(&sign);
    }
    out
}

fn binomial(n: i64, k: i64) -> i64 {
    let mut c: i64 = 1;
    for j in 0..k {
        c = c * (n - j) / (j + 1);
    }
    c
}

/// `⟨f,g⟩_m = ∫_T f ḡ δ(m) dt`, computed exactly as the constant term of
/// `f · conj_inverse(g) · δ`.
pub fn inner_product_m(f: &QExpPoly, g: &QExpPoly, delta: &QExpPoly) -> Rat {
    f.mul(&g.conj_inverse()).mul(delta).constant_term()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;
    use crate::root_system::SystemKind;

    fn a1m2() -> std::sync::Arc<RootSystem> {
        RootSystem::new(SystemKind::A1, &[2]).unwrap()
    }

    fn e(k: i64) -> QExpPoly {
        QExpPoly::monomial(Weight::new(vec![k]), rat(1))
    }

    #[test]
    fn ring_ops() {
        // (e^α + e^{−α})² = e^{2α} + 2 + e^{−2α}
        let f = e(1).add(&e(-1));
        let sq = f.mul(&f);
        assert_eq!(sq.coeff(&Weight::new(vec![2])), rat(1));
        assert_eq!(sq.coeff(&Weight::new(vec![0])), rat(2));
        assert_eq!(sq.coeff(&Weight::new(vec![-2])), rat(1));
        assert_eq!(sq.num_terms(), 3);
        // f·1 = f, e^α·e^{−α} = 1
        let one = QExpPoly::one(1);
        assert_eq!(f.mul(&one), f);
        assert_eq!(e(1).mul(&e(-1)), one);
    }

    #[test]
    fn orbit_sums() {
        let rs = a1m2();
        let m = orbit_sum(&rs, &Weight::new(vec![1]));
        assert_eq!(m, e(1).add(&e(-1)));
        assert_eq!(orbit_sum(&rs, &Weight::zero(1)), QExpPoly::one(1));
        let a2 = RootSystem::new(SystemKind::A2, &[2]).unwrap();
        let m = orbit_sum(&a2, &Weight::new(vec![1, 0]));
        assert_eq!(m.num_terms(), 3);
        assert!(m.terms().all(|(_, c)| *c == rat(1)));
        assert!(m.is_weyl_invariant(&a2));
    }

    #[test]
    fn delta_a1() {
        let rs = a1m2();
        let d = delta_poly(&rs);
        // 2 − e^{2α} − e^{−2α}
        assert_eq!(d.coeff(&Weight::new(vec![0])), rat(2));
        assert_eq!(d.coeff(&Weight::new(vec![2])), rat(-1));
        assert_eq!(d.coeff(&Weight::new(vec![-2])), rat(-1));
        assert_eq!(d.constant_term(), rat(2));
        assert!(d.is_weyl_invariant(&rs));
        // at α(H) = π/2 (fraction x = 1/4 since α(H(x)) = 2πx): (2 sin π/2)² = 4
        let v = d.eval_frac(&[0.25]);
        assert!((v.re - 4.0).abs() < 1e-12 && v.im.abs() < 1e-14);
        // at α(H) = 0: zero
        let v = d.eval_frac(&[0.0]);
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn delta_a1_m4_constant_term() {
        let rs = RootSystem::new(SystemKind::A1, &[4]).unwrap();
        let d = delta_poly(&rs);
        assert_eq!(d.constant_term(), rat(6));
        // nonnegative on the torus
        for i in 0..100 {
            let x = i as f64 / 100.0;
            assert!(d.eval_frac(&[x]).re > -1e-12);
        }
    }

    #[test]
    fn delta_nonnegative_b2() {
        let rs = RootSystem::new(SystemKind::B2, &[2, 4]).unwrap();
        let d = delta_poly(&rs);
        assert!(d.is_weyl_invariant(&rs));
        for i in 0..20 {
            for j in 0..20 {
                let x = [i as f64 / 20.0 + 0.013, j as f64 / 20.0 + 0.007];
                let v = d.eval_frac(&x);
                assert!(v.re > -1e-10 && v.im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn inner_products_a1_m2() {
        let rs = a1m2();
        let d = delta_poly(&rs);
        let one = QExpPoly::one(1);
        let m1 = orbit_sum(&rs, &Weight::new(vec![1]));
        assert_eq!(inner_product_m(&one, &one, &d), rat(2));
        assert_eq!(inner_product_m(&m1, &one, &d), rat(0));
        assert_eq!(inner_product_m(&m1, &m1, &d), rat(2));
        assert_eq!(
            inner_product_m(&m1, &one, &d),
            inner_product_m(&one, &m1, &d)
        );
    }

    #[test]
    fn eval_examples() {
        let rs = a1m2();
        // e^μ at H = 0 is 1
        assert!((e(3).eval_frac(&[0.0]).re - 1.0).abs() < 1e-15);
        // M(α) at α(H) = π/3 (x = 1/6): 2cos(π/3) = 1
        let m1 = orbit_sum(&rs, &Weight::new(vec![1]));
        let v = m1.eval_frac(&[1.0 / 6.0]);
        assert!((v.re - 1.0).abs() < 1e-12 && v.im.abs() < 1e-14);
    }

    #[test]
    fn conj_inverse_matches_conjugation_on_t() {
        let rs = RootSystem::new(SystemKind::A2, &[2]).unwrap();
        let f = orbit_sum(&rs, &Weight::new(vec![1, 0]))
            .scalar_mul(&ratio(3, 7))
            .add(&orbit_sum(&rs, &Weight::new(vec![2, 1])));
        let g = f.conj_inverse();
        for (i, j) in [(3usize, 11usize), (5, 2), (9, 4)] {
            let x = [i as f64 / 13.0, j as f64 / 13.0];
            let a = g.eval_frac(&x);
            let b = f.eval_frac(&x).conj();
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn constant_term_is_haar_integral() {
        let rs = RootSystem::new(SystemKind::A2, &[2]).unwrap();
        let f = orbit_sum(&rs, &Weight::new(vec![2, 1])).mul(&orbit_sum(
            &rs,
            &Weight::new(vec![1, 1]),
        ));
        let n = 2 * f.max_abs_coord() as usize + 1;
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += f.eval_frac(&[i as f64 / n as f64, j as f64 / n as f64]);
            }
        }
        acc /= (n * n) as f64;
        let ct = rat_to_f64(&f.constant_term());
        assert!((acc.re - ct).abs() < 1e-12 && acc.im.abs() < 1e-12);
    }

    #[test]
    fn exact_division_roundtrip() {
        let rs = RootSystem::new(SystemKind::B2, &[2, 2]).unwrap();
        let d = delta_poly(&rs);
        let f = orbit_sum(&rs, &Weight::new(vec![2, 1])).add(&QExpPoly::one(2));
        let prod = f.mul(&d);
        let q = prod.exact_div(&d).unwrap();
        assert_eq!(q, f);
        let bad = prod.add(&QExpPoly::one(2));
        assert!(bad.exact_div(&d).is_err());
    }
}
