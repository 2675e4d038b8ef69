//! Sparse multivariate Laurent polynomials over ℚ(i).

use crate::scalar::GaussianRational;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// An exponent vector in ℤᵏ, one slot per basis element of the ambient
/// free abelian group. Componentwise addition is the group law.
///
/// Ordered graded-lexicographically (total exponent sum first, then lex),
/// which fixes canonical leading terms throughout the crate.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn unit(rank: usize) -> Self {
        Monomial(vec![0; rank])
    }

    pub fn var(rank: usize, index: usize) -> Self {
        let mut v = vec![0; rank];
        v[index] = 1;
        Monomial(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|a| -a).collect())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.total().cmp(&other.total()).then_with(|| self.0.cmp(&other.0))
    }
}

/// A Laurent polynomial: a finite map from monomials to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentPoly {
    rank: usize,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, GaussianRational::one())
    }

    pub fn constant(rank: usize, c: GaussianRational) -> Self {
        let mut p = Self::zero(rank);
        if !c.is_zero() {
            p.terms.insert(Monomial::unit(rank), c);
        }
        p
    }

    pub fn term(mono: Monomial, c: GaussianRational) -> Self {
        let rank = mono.rank();
        let mut p = Self::zero(rank);
        if !c.is_zero() {
            p.terms.insert(mono, c);
        }
        p
    }

    /// The polynomial `var_index` (a single variable to the first power).
    pub fn var(rank: usize, index: usize) -> Self {
        Self::term(Monomial::var(rank, index), GaussianRational::one())
    }

    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (Vec<i64>, GaussianRational)>) -> Self {
        let mut p = Self::zero(rank);
        for (exps, c) in terms {
            assert_eq!(exps.len(), rank, "monomial rank mismatch");
            p.add_term(Monomial(exps), c);
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Leading (monomial, coefficient) under graded-lex; `None` for zero.
    pub fn leading(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    /// Trailing (minimal) term under graded-lex.
    pub fn trailing(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next()
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        debug_assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        debug_assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        debug_assert_eq!(self.rank, other.rank);
        let mut out = LaurentPoly::zero(self.rank);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(self.rank);
        }
        LaurentPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> LaurentPoly {
        LaurentPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        let mut out = LaurentPoly::one(self.rank);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Maximal exponent of `var` over the support; `None` for zero.
    pub fn max_exp_in(&self, var: usize) -> Option<i64> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    /// Minimal exponent of `var` over the support; `None` for zero.
    pub fn min_exp_in(&self, var: usize) -> Option<i64> {
        self.terms.keys().map(|m| m.0[var]).min()
    }

    /// Degree of `var`: maximal minus minimal exponent over the support.
    /// `None` encodes −∞ (the zero polynomial).
    pub fn deg_in(&self, var: usize) -> Option<i64> {
        Some(self.max_exp_in(var)? - self.min_exp_in(var)?)
    }

    /// Order of `var`: the minimal exponent. `None` encodes ∞ (zero).
    pub fn ord_in(&self, var: usize) -> Option<i64> {
        self.min_exp_in(var)
    }

    /// The involution sending `var ↦ var⁻¹` and fixing the other variables.
    pub fn invert_var(&self, var: usize) -> LaurentPoly {
        LaurentPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e[var] = -e[var];
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Rewrites exponents through a unimodular change of lattice basis:
    /// each exponent vector `v` becomes `t_inv · v` (new coordinates).
    pub fn change_basis(&self, t_inv: &[Vec<i64>]) -> LaurentPoly {
        let k = self.rank;
        assert_eq!(t_inv.len(), k);
        LaurentPoly {
            rank: k,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let e: Vec<i64> = t_inv
                        .iter()
                        .map(|row| row.iter().zip(&m.0).map(|(a, b)| a * b).sum())
                        .collect();
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Exact division: returns `self / divisor` when the division leaves no
    /// remainder, `None` otherwise. Uses leading-term reduction under the
    /// graded-lex order; candidate quotient monomials are confined to the
    /// Newton-polytope box, which bounds the search for inexact inputs.
    pub fn exact_div(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(LaurentPoly::zero(self.rank));
        }
        let k = self.rank;
        let lo: Vec<i64> = (0..k)
            .map(|v| self.min_exp_in(v).unwrap() - divisor.min_exp_in(v).unwrap())
            .collect();
        let hi: Vec<i64> = (0..k)
            .map(|v| self.max_exp_in(v).unwrap() - divisor.max_exp_in(v).unwrap())
            .collect();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return None;
        }
        let (dm, dc) = divisor.leading().unwrap();
        let dm = dm.clone();
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero(k);
        while let Some((rm, rc)) = rem.leading() {
            let cand = rm.div(&dm);
            if cand.0.iter().zip(lo.iter().zip(&hi)).any(|(e, (l, h))| e < l || e > h) {
                return None;
            }
            let c = rc / &dc;
            let t = LaurentPoly::term(cand, c);
            rem = rem.sub(&t.mul(divisor));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Renders terms using the given variable names, e.g. `1 - s + s^2`.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, e)| **e != 0)
                .map(|(v, e)| {
                    let name = names.get(v).cloned().unwrap_or_else(|| format!("x{v}"));
                    if *e == 1 { name } else { format!("{name}^{e}") }
                })
                .collect();
            let coeff_str = c.to_string();
            let piece = if mono.is_empty() {
                coeff_str
            } else if c.is_one() {
                mono.join("*")
            } else if (-c).is_one() {
                format!("-{}", mono.join("*"))
            } else {
                format!("{}*{}", coeff_str, mono.join("*"))
            };
            if idx == 0 {
                out.push_str(&piece);
            } else if let Some(rest) = piece.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&piece);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.rank).map(|v| format!("x{v}")).collect();
        write!(f, "{}", self.display_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_var(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(
            1,
            terms.iter().map(|(e, c)| (vec![*e], GaussianRational::from_int(*c))),
        )
    }

    #[test]
    fn deg_is_spread() {
        // t + t⁻¹ has degree 2: max 1 minus min −1.
        let p = one_var(&[(1, 1), (-1, 1)]);
        assert_eq!(p.deg_in(0), Some(2));
        assert_eq!(LaurentPoly::zero(1).deg_in(0), None);
    }

    #[test]
    fn ord_is_min_exponent() {
        let p = one_var(&[(2, 1), (3, 1)]);
        assert_eq!(p.ord_in(0), Some(2));
        assert_eq!(LaurentPoly::zero(1).ord_in(0), None);
        // additivity under monomial shift
        let shifted = p.mul(&one_var(&[(-1, 1)]));
        assert_eq!(shifted.ord_in(0), Some(1));
    }

    #[test]
    fn deg_additive_on_products() {
        let p = one_var(&[(0, 1), (3, -1)]); // 1 - t³
        let q = one_var(&[(0, 1), (1, -1)]); // 1 - t
        let pq = p.mul(&q);
        assert_eq!(pq.deg_in(0), Some(p.deg_in(0).unwrap() + q.deg_in(0).unwrap()));
    }

    #[test]
    fn exact_division() {
        let p = one_var(&[(0, 1), (3, -1)]); // 1 - t³
        let q = one_var(&[(0, 1), (1, -1)]); // 1 - t
        let quot = p.exact_div(&q).unwrap();
        assert_eq!(quot, one_var(&[(0, 1), (1, 1), (2, 1)]));
        assert_eq!(quot.mul(&q), p);
        // inexact
        let r = one_var(&[(0, 1), (2, 1)]);
        assert!(r.exact_div(&q).is_none());
    }

    #[test]
    fn exact_division_multivariate() {
        let x = LaurentPoly::var(2, 0);
        let y = LaurentPoly::var(2, 1);
        let one = LaurentPoly::one(2);
        let p = one.add(&x).mul(&one.add(&y));
        assert_eq!(p.exact_div(&one.add(&y)).unwrap(), one.add(&x));
    }

    #[test]
    fn invert_var_involution() {
        let p = one_var(&[(1, 1), (2, 1)]);
        let q = p.invert_var(0);
        assert_eq!(q, one_var(&[(-1, 1), (-2, 1)]));
        assert_eq!(q.invert_var(0), p);
    }

    #[test]
    fn grlex_leading_term() {
        let x = Monomial(vec![1, 0]);
        let y2 = Monomial(vec![0, 2]);
        assert!(y2 > x); // higher total degree wins
        let a = Monomial(vec![1, 1]);
        let b = Monomial(vec![0, 2]);
        assert!(a > b); // same total, lex on exponents
    }
}
