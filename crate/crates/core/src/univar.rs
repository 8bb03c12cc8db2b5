//! Minimal univariate polynomials over the rationals, used for the exact
//! one-parameter limits in the rank-one Weyl-extension analysis.

use crate::{rat, Rat};
use num_traits::Zero;

/// Dense univariate polynomial, coefficients low-to-high. Invariant: no
/// trailing zero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct QPoly {
    pub coeffs: Vec<Rat>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = QPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// `c · x^k`
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        let mut p = QPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Rat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        let mut p = QPoly { coeffs };
        p.trim();
        p
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut p = QPoly { coeffs };
        p.trim();
        p
    }

    pub fn scale(&self, s: &Rat) -> QPoly {
        let mut p = QPoly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        };
        p.trim();
        p
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Multiplicity of the root `x0` (0 when not a root).
    pub fn root_order(&self, x0: &Rat) -> usize {
        let mut p = self.clone();
        let mut k = 0;
        while !p.is_zero() && p.eval(x0).is_zero() {
            p = p.divide_linear(x0);
            k += 1;
        }
        k
    }

    /// Synthetic division by `(x − x0)`; caller must know `x0` is a root.
    pub fn divide_linear(&self, x0: &Rat) -> QPoly {
        let n = self.coeffs.len();
        if n <= 1 {
            return QPoly::zero();
        }
        let mut out = vec![Rat::zero(); n - 1];
        let mut carry = Rat::zero();
        for i in (0..n).rev() {
            let v = &self.coeffs[i] + &carry;
            if i == 0 {
                break;
            }
            out[i - 1] = v.clone();
            carry = v * x0;
        }
        let mut p = QPoly { coeffs: out };
        p.trim();
        p
    }
}

/// Exact limit of `num(x)/den(x)` as `x → x0`. `None` when the limit is
/// infinite; `Some(0)` when `num` vanishes to higher order.
pub fn rational_limit(num: &QPoly, den: &QPoly, x0: &Rat) -> Option<Rat> {
    if num.is_zero() {
        return Some(rat(0));
    }
    let on = num.root_order(x0);
    let od = den.root_order(x0);
    if on < od {
        return None;
    }
    let mut n = num.clone();
    let mut d = den.clone();
    for _ in 0..od {
        n = n.divide_linear(x0);
        d = d.divide_linear(x0);
    }
    if on > od {
        return Some(rat(0));
    }
    Some(n.eval(x0) / d.eval(x0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    #[test]
    fn arithmetic_and_roots() {
        // (x−1)²(x+2)
        let p = QPoly::monomial(rat(1), 1)
            .add(&QPoly::constant(rat(-1)))
            .mul(&QPoly::monomial(rat(1), 1).add(&QPoly::constant(rat(-1))))
            .mul(&QPoly::monomial(rat(1), 1).add(&QPoly::constant(rat(2))));
        assert_eq!(p.root_order(&rat(1)), 2);
        assert_eq!(p.root_order(&rat(-2)), 1);
        assert_eq!(p.root_order(&rat(5)), 0);
        assert_eq!(p.eval(&rat(2)), rat(4));
    }

    #[test]
    fn limits() {
        // (x²−1)/(x−1) → 2 at 1
        let num = QPoly::monomial(rat(1), 2).add(&QPoly::constant(rat(-1)));
        let den = QPoly::monomial(rat(1), 1).add(&QPoly::constant(rat(-1)));
        assert_eq!(rational_limit(&num, &den, &rat(1)), Some(rat(2)));
        // (x−1)/(x−1)² → ∞
        assert_eq!(rational_limit(&den, &den.mul(&den), &rat(1)), None);
        // (x−1)²/(x−1) → 0
        assert_eq!(rational_limit(&den.mul(&den), &den, &rat(1)), Some(rat(0)));
        // plain evaluation
        assert_eq!(
            rational_limit(&num, &QPoly::constant(rat(2)), &rat(3)),
            Some(rat(4))
        );
        let _ = ratio(1, 2);
    }
}
