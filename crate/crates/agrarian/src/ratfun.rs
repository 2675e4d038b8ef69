//! Rational functions: normalized fractions of Laurent polynomials.
//!
//! This is the commutative field K(X) in which all agrarian invariants are
//! evaluated. Equality is cross-multiplication equality, so no gcd machinery
//! is required for correctness; normalization only fixes the leading
//! denominator coefficient and strips common monomial factors.

use crate::laurent::{LaurentPoly, Monomial};
use crate::scalar::GaussianRational;
use std::fmt;

#[derive(Clone, Debug)]
pub struct RatFun {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFun {
    pub fn from_poly(num: LaurentPoly) -> Self {
        let rank = num.rank();
        RatFun { num, den: LaurentPoly::one(rank) }
    }

    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        assert_eq!(num.rank(), den.rank());
        let mut f = RatFun { num, den };
        f.normalize();
        f
    }

    pub fn zero(rank: usize) -> Self {
        Self::from_poly(LaurentPoly::zero(rank))
    }

    pub fn one(rank: usize) -> Self {
        Self::from_poly(LaurentPoly::one(rank))
    }

    pub fn constant(rank: usize, c: GaussianRational) -> Self {
        Self::from_poly(LaurentPoly::constant(rank, c))
    }

    pub fn var(rank: usize, index: usize) -> Self {
        Self::from_poly(LaurentPoly::var(rank, index))
    }

    pub fn rank(&self) -> usize {
        self.num.rank()
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator is the constant 1.
    pub fn is_polynomial(&self) -> bool {
        self.den.num_terms() == 1
            && self.den.leading().map(|(m, c)| m.total() == 0 && m.0.iter().all(|e| *e == 0) && c.is_one()).unwrap_or(false)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            let rank = self.rank();
            self.den = LaurentPoly::one(rank);
            return;
        }
        // strip the common monomial factor of each side separately: dividing
        // num and den by their own trailing monomials only changes the
        // fraction by a unit monomial, which we keep balanced below.
        let rank = self.rank();
        let num_shift = Monomial(
            (0..rank).map(|v| self.num.min_exp_in(v).unwrap()).collect(),
        );
        let den_shift = Monomial(
            (0..rank).map(|v| self.den.min_exp_in(v).unwrap()).collect(),
        );
        // cancel the shared part so supports stay small
        let common = Monomial(
            num_shift.0.iter().zip(&den_shift.0).map(|(a, b)| *a.min(b)).collect(),
        );
        let inv = common.inv();
        self.num = self.num.mul_monomial(&inv);
        self.den = self.den.mul_monomial(&inv);
        // cheap cancellation: try exact division either way
        if self.den.num_terms() > 1 || self.num.num_terms() > 1 {
            if let Some(q) = self.num.exact_div(&self.den) {
                self.num = q;
                self.den = LaurentPoly::one(rank);
            } else if let Some(q) = self.den.exact_div(&self.num) {
                // num/den = 1/q
                self.num = LaurentPoly::one(rank);
                self.den = q;
            }
        }
        // scale so the denominator's grlex-leading coefficient is 1
        let lead = self.den.leading().unwrap().1.clone();
        if !lead.is_one() {
            let inv = lead.inv().unwrap();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        RatFun::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        RatFun::new(
            self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        RatFun::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Option<RatFun> {
        if self.is_zero() {
            return None;
        }
        Some(RatFun::new(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFun) -> RatFun {
        self.mul(&other.inv().expect("division by zero"))
    }

    /// Degree in `var`: `deg num − deg den`, spreads of the supports.
    /// `None` encodes −∞.
    pub fn deg_in(&self, var: usize) -> Option<i64> {
        Some(self.num.deg_in(var)? - self.den.deg_in(var).unwrap())
    }

    /// Order in `var` of the Laurent-series expansion: `ord num − ord den`.
    /// `None` encodes ∞.
    pub fn ord_in(&self, var: usize) -> Option<i64> {
        Some(self.num.ord_in(var)? - self.den.ord_in(var).unwrap())
    }

    /// The ring automorphism β inverting `var` on both numerator and
    /// denominator.
    pub fn beta_involution(&self, var: usize) -> RatFun {
        RatFun::new(self.num.invert_var(var), self.den.invert_var(var))
    }

    pub fn change_basis(&self, t_inv: &[Vec<i64>]) -> RatFun {
        RatFun::new(self.num.change_basis(t_inv), self.den.change_basis(t_inv))
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_polynomial() {
            self.num.display_with(names)
        } else {
            format!("({})/({})", self.num.display_with(names), self.den.display_with(names))
        }
    }
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for RatFun {}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.rank()).map(|v| format!("x{v}")).collect();
        write!(f, "{}", self.display_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(
            1,
            terms.iter().map(|(e, c)| (vec![*e], GaussianRational::from_int(*c))),
        )
    }

    #[test]
    fn fraction_degree() {
        // (1 − t³)/(1 − t) has degree 3 − 1 = 2
        let f = RatFun::new(poly(&[(0, 1), (3, -1)]), poly(&[(0, 1), (1, -1)]));
        assert_eq!(f.deg_in(0), Some(2));
    }

    #[test]
    fn zero_degree_is_neg_infinity() {
        assert_eq!(RatFun::zero(1).deg_in(0), None);
        assert_eq!(RatFun::zero(1).ord_in(0), None);
    }

    #[test]
    fn cross_multiplication_equality() {
        let a = RatFun::new(poly(&[(2, 1), (3, 1)]), poly(&[(2, 1)]));
        let b = RatFun::new(poly(&[(0, 1), (1, 1)]), poly(&[(0, 1)]));
        assert_eq!(a, b);
    }

    #[test]
    fn beta_and_degree_order_identity() {
        // deg f = −ord f − ord β(f) for nonzero f
        let cases = vec![
            RatFun::from_poly(poly(&[(1, 1), (2, 1)])),
            RatFun::new(poly(&[(0, 1), (3, -1)]), poly(&[(0, 1), (1, -1)])),
            RatFun::new(poly(&[(-2, 5), (1, 3)]), poly(&[(-1, 1), (2, 7)])),
        ];
        for f in cases {
            let b = f.beta_involution(0);
            let lhs = f.deg_in(0).unwrap();
            let rhs = -f.ord_in(0).unwrap() - b.ord_in(0).unwrap();
            assert_eq!(lhs, rhs, "failed for {f}");
        }
    }

    #[test]
    fn beta_simple() {
        let f = RatFun::from_poly(poly(&[(1, 1), (2, 1)]));
        assert_eq!(f.beta_involution(0), RatFun::from_poly(poly(&[(-1, 1), (-2, 1)])));
        let one = RatFun::one(1);
        assert_eq!(one.beta_involution(0), one);
    }

    #[test]
    fn arithmetic_and_inverse() {
        let f = RatFun::new(poly(&[(0, 1), (1, 1)]), poly(&[(0, 2)]));
        let g = RatFun::new(poly(&[(1, 3)]), poly(&[(0, 1), (1, -1)]));
        let sum = f.add(&g);
        assert_eq!(sum.sub(&g), f);
        let prod = f.mul(&g);
        assert_eq!(prod.div(&g), f);
        assert_eq!(f.mul(&f.inv().unwrap()), RatFun::one(1));
    }

    #[test]
    fn rank_zero_is_plain_scalars() {
        let a = RatFun::constant(0, GaussianRational::from_ratio(3, 2));
        let b = RatFun::constant(0, GaussianRational::i());
        let p = a.mul(&b);
        assert_eq!(
            p,
            RatFun::constant(0, GaussianRational::from_parts(0, 1, 3, 2))
        );
    }
}
