//! Finite based chain complexes of free ℤG-modules, their evaluation through
//! a rationalized representation, agrarian Betti numbers, and agrarian
//! torsion via exact chain contractions.

use crate::error::{Error, Result};
use crate::group::{
    abelianize, fox_derivative, rationalize, AbelianizationMap, GroupRingElement, Presentation,
    Representation, Word,
};
use crate::laurent::LaurentPoly;
use crate::matrix::{det_ratfun, mat_mul, rank_ratfun, solve_ratfun, Matrix, RatFunField, SkewField};
use crate::ratfun::RatFun;

/// A finite free based chain complex over the group ring of a presentation's
/// ambient group.
///
/// Boundary data is stored in the row convention: `boundaries[i]` is the
/// matrix of ∂_{i+1}: C_{i+1} → C_i with shape `ranks[i+1] × ranks[i]`,
/// acting on coordinate row vectors on the right. With this convention the
/// composite ∂_{i}∘∂_{i+1} is the literal matrix product
/// `boundaries[i+1] · boundaries[i]`, which must vanish after evaluation
/// through any validated representation.
#[derive(Clone, Debug)]
pub struct BasedChainComplex {
    pub generators: Vec<String>,
    pub ranks: Vec<usize>,
    pub boundaries: Vec<Matrix<GroupRingElement>>,
    pub labels: Vec<Vec<String>>,
    pub deficiency_one: bool,
}

/// Per-degree agrarian Betti numbers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BettiProfile(pub Vec<usize>);

impl BettiProfile {
    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, b)| if i % 2 == 0 { *b as i64 } else { -(*b as i64) })
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|b| *b == 0)
    }
}

/// Column-pivot strategy for the chain contraction. Two genuinely different
/// splittings let torsion functionals be cross-checked for γ-independence.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PivotStrategy {
    Leftmost,
    Rightmost,
}

impl BasedChainComplex {
    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn validate_shapes(&self) -> Result<()> {
        if self.ranks.is_empty() {
            return Err(Error::validation("complex has no degrees".into()));
        }
        if self.boundaries.len() + 1 != self.ranks.len() {
            return Err(Error::validation("boundary count does not match degree count".into()));
        }
        for (i, b) in self.boundaries.iter().enumerate() {
            if b.rows() != self.ranks[i + 1] || b.cols() != self.ranks[i] {
                return Err(Error::validation(format!(
                    "boundary {i} has shape {}×{}, expected {}×{}",
                    b.rows(),
                    b.cols(),
                    self.ranks[i + 1],
                    self.ranks[i]
                )));
            }
        }
        Ok(())
    }

    /// The usual Euler characteristic Σ(−1)ⁱ rank Cᵢ.
    pub fn euler_characteristic_ranks(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(i, r)| if i % 2 == 0 { *r as i64 } else { -(*r as i64) })
            .sum()
    }

    /// Evaluates every boundary through σ⊗q as block Laurent matrices.
    pub fn evaluate(
        &self,
        rep: &Representation,
        ab: &AbelianizationMap,
    ) -> Vec<Matrix<LaurentPoly>> {
        self.boundaries
            .iter()
            .map(|b| evaluate_boundary(b, rep, ab))
            .collect()
    }

    /// Checks ∂∘∂ = 0 after evaluation.
    pub fn validate_composites(
        &self,
        rep: &Representation,
        ab: &AbelianizationMap,
    ) -> Result<()> {
        let ev = self.evaluate(rep, ab);
        for i in 0..ev.len().saturating_sub(1) {
            let prod = poly_mat_mul(&ev[i + 1], &ev[i]);
            if !poly_mat_is_zero(&prod) {
                return Err(Error::validation(format!(
                    "evaluated boundary composite at degree {} is nonzero",
                    i + 2
                )));
            }
        }
        Ok(())
    }

    /// Agrarian Betti numbers: bᵢ = n·rank Cᵢ − rank ∂ᵢ − rank ∂ᵢ₊₁ over K(X).
    pub fn betti_numbers(&self, rep: &Representation, ab: &AbelianizationMap) -> BettiProfile {
        let ev = self.evaluate(rep, ab);
        let ranks_of_maps: Vec<usize> = ev.iter().map(rank_poly_matrix).collect();
        let n = rep.dim;
        let mut out = Vec::with_capacity(self.ranks.len());
        for i in 0..self.ranks.len() {
            let outgoing = if i >= 1 { ranks_of_maps[i - 1] } else { 0 };
            let incoming = if i < ranks_of_maps.len() { ranks_of_maps[i] } else { 0 };
            out.push(n * self.ranks[i] - outgoing - incoming);
        }
        BettiProfile(out)
    }

    /// The agrarian Euler characteristic Σ(−1)ⁱ bᵢ.
    pub fn euler_characteristic(&self, rep: &Representation, ab: &AbelianizationMap) -> i64 {
        self.betti_numbers(rep, ab).euler_characteristic()
    }

    /// Agrarian torsion: the determinant of (d+γ): C_even ⊗ → C_odd ⊗ for a
    /// chain contraction γ built by exact column-pivot splitting. Errors when
    /// the evaluated complex is not acyclic.
    pub fn torsion(
        &self,
        rep: &Representation,
        ab: &AbelianizationMap,
        strategy: PivotStrategy,
    ) -> Result<RatFun> {
        let betti = self.betti_numbers(rep, ab);
        if !betti.is_zero() {
            return Err(Error::undefined(format!(
                "torsion undefined: complex is not acyclic (betti {:?})",
                betti.0
            )));
        }
        let field = RatFunField { rank: ab.rank };
        let ev = self.evaluate(rep, ab);
        // standard column convention: b[i] maps C_{i+1} → C_i (left mult)
        let b: Vec<Matrix<RatFun>> = ev
            .iter()
            .map(|m| poly_to_ratfun(&m.transpose()))
            .collect();
        let n = rep.dim;
        let dims: Vec<usize> = self.ranks.iter().map(|r| r * n).collect();
        let top = self.top_degree();

        // pivot columns of each boundary map
        let pivots: Vec<Vec<usize>> = b.iter().map(|m| pivot_columns(m, strategy)).collect();

        // for each degree i, the contraction block γ_i: C_i → C_{i+1}
        let mut gamma: Vec<Option<Matrix<RatFun>>> = vec![None; self.ranks.len()];
        for i in 0..self.ranks.len() {
            if i == top {
                break; // γ_top = 0 into the zero module
            }
            let b_up = &b[i]; // C_{i+1} → C_i
            let up_pivots = &pivots[i];
            // kernel projection of C_i: coordinates along pivot columns of B_i
            let x_ker: Matrix<RatFun> = if i == 0 {
                // everything is in the kernel of the zero map to C_{-1}
                identity_ratfun(&field, dims[0])
            } else {
                let b_dn = &b[i - 1]; // C_i → C_{i-1}
                let dn_pivots = &pivots[i - 1];
                let restricted = select_columns(b_dn, dn_pivots);
                let coeffs = solve_ratfun(&restricted, b_dn).ok_or_else(|| {
                    Error::cross_check("pivot system unsolvable during contraction".into())
                })?;
                // x_U = embed(U)·coeffs; x_ker = Id − x_U
                let mut ker = identity_ratfun(&field, dims[i]);
                for (row_idx, &col) in dn_pivots.iter().enumerate() {
                    for j in 0..dims[i] {
                        let v = ker.at(col, j).sub(coeffs.at(row_idx, j));
                        ker.set(col, j, v);
                    }
                }
                ker
            };
            // lift the kernel part through B_{i+1}, supported on its pivot columns
            let restricted_up = select_columns(b_up, up_pivots);
            let lifted = solve_ratfun(&restricted_up, &x_ker).ok_or_else(|| {
                Error::cross_check("acyclic complex failed kernel lifting".into())
            })?;
            let mut g = Matrix::new(dims[i + 1], dims[i], field.zero());
            for (row_idx, &col) in up_pivots.iter().enumerate() {
                for j in 0..dims[i] {
                    g.set(col, j, lifted.at(row_idx, j).clone());
                }
            }
            gamma[i] = Some(g);
        }

        // assemble (d+γ): C_even → C_odd
        let even: Vec<usize> = (0..self.ranks.len()).step_by(2).collect();
        let odd: Vec<usize> = (1..self.ranks.len()).step_by(2).collect();
        let total_even: usize = even.iter().map(|&i| dims[i]).sum();
        let total_odd: usize = odd.iter().map(|&i| dims[i]).sum();
        if total_even != total_odd {
            return Err(Error::undefined(
                "acyclic complex must have balanced even/odd dimensions".into(),
            ));
        }
        let offset_of = |list: &[usize], deg: usize| -> usize {
            list.iter().take_while(|&&d| d != deg).map(|&d| dims[d]).sum()
        };
        let mut m = Matrix::new(total_odd, total_even, field.zero());
        for &i in &even {
            let col0 = offset_of(&even, i);
            if i >= 1 {
                // d-part into degree i−1
                let row0 = offset_of(&odd, i - 1);
                let blk = &b[i - 1];
                for r in 0..dims[i - 1] {
                    for c in 0..dims[i] {
                        m.set(row0 + r, col0 + c, blk.at(r, c).clone());
                    }
                }
            }
            if let Some(g) = &gamma[i] {
                let row0 = offset_of(&odd, i + 1);
                for r in 0..dims[i + 1] {
                    for c in 0..dims[i] {
                        let v = m.at(row0 + r, col0 + c).add(g.at(r, c));
                        m.set(row0 + r, col0 + c, v);
                    }
                }
            }
        }
        let det = det_ratfun(&m);
        if det.is_zero() {
            return Err(Error::cross_check("contraction determinant vanished".into()));
        }
        Ok(det)
    }

    /// Torsion with the γ-independence audit: both pivot strategies must
    /// produce the same degree vector and polytope class.
    pub fn torsion_checked(
        &self,
        rep: &Representation,
        ab: &AbelianizationMap,
    ) -> Result<RatFun> {
        let a = self.torsion(rep, ab, PivotStrategy::Leftmost)?;
        let b = self.torsion(rep, ab, PivotStrategy::Rightmost)?;
        for var in 0..ab.rank {
            if a.deg_in(var) != b.deg_in(var) || a.ord_in(var) != b.ord_in(var) {
                return Err(Error::cross_check(
                    "torsion functionals disagree across contraction strategies".into(),
                ));
            }
        }
        if ab.rank > 0 {
            let pa = crate::polytope::polytope_hom(&a);
            let pb = crate::polytope::polytope_hom(&b);
            if !pa.pg_equal(&pb) {
                return Err(Error::cross_check(
                    "torsion polytopes disagree across contraction strategies".into(),
                ));
            }
        }
        Ok(a)
    }
}

/// The presentation complex 0 → ℤG^r → ℤG^g → ℤG → 0: degree-one boundary
/// `1 − xᵢ` per generator, degree-two boundary the Fox Jacobian with rows
/// indexed by relators and columns by generators (row convention).
pub fn chain_complex(p: &Presentation) -> BasedChainComplex {
    let g = p.num_gens();
    let r = p.relators.len();
    let n1 = Matrix::from_fn(g, 1, |i, _| GroupRingElement::one_minus(Word::generator(i)));
    let n2 = Matrix::from_fn(r, g, |j, i| fox_derivative(&p.relators[j], i));
    BasedChainComplex {
        generators: p.generators.clone(),
        ranks: vec![1, g, r],
        boundaries: vec![n1, n2],
        labels: vec![
            vec!["p".into()],
            p.generators.clone(),
            (0..r).map(|i| format!("r{i}")).collect(),
        ],
        deficiency_one: p.is_deficiency_one(),
    }
}

pub fn evaluate_boundary(
    b: &Matrix<GroupRingElement>,
    rep: &Representation,
    ab: &AbelianizationMap,
) -> Matrix<LaurentPoly> {
    let n = rep.dim;
    let mut out = Matrix::new(b.rows() * n, b.cols() * n, LaurentPoly::zero(ab.rank));
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            let blk = rationalize(b.at(i, j), rep, ab);
            for r in 0..n {
                for c in 0..n {
                    out.set(i * n + r, j * n + c, blk.at(r, c).clone());
                }
            }
        }
    }
    out
}

pub fn poly_mat_mul(a: &Matrix<LaurentPoly>, b: &Matrix<LaurentPoly>) -> Matrix<LaurentPoly> {
    assert_eq!(a.cols(), b.rows());
    let rank = if a.rows() * a.cols() > 0 {
        a.at(0, 0).rank()
    } else if b.rows() * b.cols() > 0 {
        b.at(0, 0).rank()
    } else {
        0
    };
    Matrix::from_fn(a.rows(), b.cols(), |i, j| {
        let mut acc = LaurentPoly::zero(rank);
        for k in 0..a.cols() {
            acc = acc.add(&a.at(i, k).mul(b.at(k, j)));
        }
        acc
    })
}

pub fn poly_mat_is_zero(a: &Matrix<LaurentPoly>) -> bool {
    (0..a.rows()).all(|i| (0..a.cols()).all(|j| a.at(i, j).is_zero()))
}

pub fn rank_poly_matrix(m: &Matrix<LaurentPoly>) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    crate::matrix::bareiss(m).0
}

pub fn poly_to_ratfun(m: &Matrix<LaurentPoly>) -> Matrix<RatFun> {
    m.map(|p| RatFun::from_poly(p.clone()))
}

fn identity_ratfun(field: &RatFunField, n: usize) -> Matrix<RatFun> {
    Matrix::identity_with(n, field.zero(), field.one())
}

fn select_columns(m: &Matrix<RatFun>, cols: &[usize]) -> Matrix<RatFun> {
    Matrix::from_fn(m.rows(), cols.len(), |i, j| m.at(i, cols[j]).clone())
}

/// Columns that receive a pivot during row reduction, scanned left to right
/// or right to left. Either set indexes a basis of the column space.
fn pivot_columns(m: &Matrix<RatFun>, strategy: PivotStrategy) -> Vec<usize> {
    let mut work = m.clone();
    let order: Vec<usize> = match strategy {
        PivotStrategy::Leftmost => (0..m.cols()).collect(),
        PivotStrategy::Rightmost => (0..m.cols()).rev().collect(),
    };
    let mut pivots = Vec::new();
    let mut used_rows: Vec<bool> = vec![false; m.rows()];
    for &col in &order {
        let Some(pr) = (0..m.rows()).find(|&r| !used_rows[r] && !work.at(r, col).is_zero()) else {
            continue;
        };
        used_rows[pr] = true;
        pivots.push(col);
        let inv = work.at(pr, col).inv().unwrap();
        for r in 0..m.rows() {
            if r != pr && !work.at(r, col).is_zero() {
                let factor = work.at(r, col).mul(&inv);
                for &c in &order {
                    let delta = factor.mul(work.at(pr, c));
                    let v = work.at(r, c).sub(&delta);
                    work.set(r, c, v);
                }
            }
        }
    }
    pivots.sort_unstable();
    pivots
}

/// Audit helper: verifies `(σ⊗q)(M₁·M₂) = 0` style composites directly on a
/// presentation without building a complex.
pub fn presentation_composite_vanishes(
    p: &Presentation,
    rep: &Representation,
) -> Result<()> {
    let ab = abelianize(p);
    chain_complex(p).validate_composites(rep, &ab)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Character;
    use crate::matrix::Matrix;
    use crate::scalar::GaussianRational;

    fn trefoil() -> Presentation {
        Presentation::parse("<a,b | a b a b^-1 a^-1 b^-1>").unwrap()
    }

    fn circle() -> Presentation {
        Presentation::parse("<t | >").unwrap()
    }

    fn f2_semidirect_z() -> Presentation {
        Presentation::parse("<x,y,t | t x t^-1 x^-1 y^-1, t y t^-1 x^-1>").unwrap()
    }

    #[test]
    fn complex_shapes() {
        let c = chain_complex(&trefoil());
        assert_eq!(c.ranks, vec![1, 2, 1]);
        assert!(c.deficiency_one);
        c.validate_shapes().unwrap();
        let c2 = chain_complex(&circle());
        assert_eq!(c2.ranks, vec![1, 1, 0]);
        assert!(c2.deficiency_one);
        let c3 = chain_complex(&f2_semidirect_z());
        assert_eq!(c3.ranks, vec![1, 3, 2]);
    }

    #[test]
    fn composites_vanish_after_evaluation() {
        for p in [trefoil(), f2_semidirect_z()] {
            let rep = Representation::trivial(&p);
            presentation_composite_vanishes(&p, &rep).unwrap();
        }
        // and with a sign representation on the trefoil
        let p = trefoil();
        let neg = Matrix::from_rows(vec![vec![GaussianRational::from_int(-1)]]);
        let rep = Representation::new(&p, 1, vec![neg.clone(), neg], None).unwrap();
        presentation_composite_vanishes(&p, &rep).unwrap();
    }

    #[test]
    fn circle_complex_is_acyclic() {
        let p = circle();
        let rep = Representation::trivial(&p);
        let ab = abelianize(&p);
        let c = chain_complex(&p);
        let betti = c.betti_numbers(&rep, &ab);
        assert!(betti.is_zero(), "betti {:?}", betti.0);
    }

    #[test]
    fn degree_zero_only_complex() {
        // 0 → ℤG → 0 concentrated in degree zero, over the trivial group
        let p = Presentation::parse("<e | e>").unwrap();
        let rep = Representation::trivial(&p);
        let ab = abelianize(&p);
        assert_eq!(ab.rank, 0);
        let c = BasedChainComplex {
            generators: p.generators.clone(),
            ranks: vec![1],
            boundaries: vec![],
            labels: vec![vec!["p".into()]],
            deficiency_one: false,
        };
        let betti = c.betti_numbers(&rep, &ab);
        assert_eq!(betti.0, vec![1]);
    }

    #[test]
    fn trefoil_betti_vanishes_and_euler() {
        let p = trefoil();
        let rep = Representation::trivial(&p);
        let ab = abelianize(&p);
        let c = chain_complex(&p);
        let betti = c.betti_numbers(&rep, &ab);
        assert!(betti.is_zero(), "betti {:?}", betti.0);
        assert_eq!(c.euler_characteristic(&rep, &ab), 0);
        assert_eq!(c.euler_characteristic_ranks(), 0);
    }

    #[test]
    fn f2_semidirect_betti_vanishes() {
        let p = f2_semidirect_z();
        let rep = Representation::trivial(&p);
        let ab = abelianize(&p);
        let c = chain_complex(&p);
        assert!(c.betti_numbers(&rep, &ab).is_zero());
    }

    #[test]
    fn circle_torsion_is_inverse_segment() {
        let p = circle();
        let rep = Representation::trivial(&p);
        let ab = abelianize(&p);
        let c = chain_complex(&p);
        let tau = c.torsion_checked(&rep, &ab).unwrap();
        // torsion is (1−s)^{±1}; polytope thickness along φ(t)=1 is ±1
        let el = crate::polytope::polytope_hom(&tau);
        assert_eq!(el.thickness(&[1]).abs(), 1);
        assert_eq!(tau.deg_in(0), Some(-1));
    }

    #[test]
    fn trefoil_torsion_degree() {
        let p = trefoil();
        let rep = Representation::trivial(&p);
        let ab = abelianize(&p);
        let c = chain_complex(&p);
        let tau = c.torsion_checked(&rep, &ab).unwrap();
        let phi = Character::new(&p, vec![1, 1]).unwrap();
        let cov = phi.covector(&ab, &p).unwrap();
        let el = crate::polytope::polytope_hom(&tau);
        assert_eq!(el.thickness(&cov), 1);
        assert_eq!(tau.deg_in(0), Some(1));
    }

    #[test]
    fn torsion_requires_acyclicity() {
        // free group complex has nonzero betti numbers
        let p = Presentation::parse("<a,b | >").unwrap();
        let rep = Representation::trivial(&p);
        let ab = abelianize(&p);
        let c = chain_complex(&p);
        match c.torsion(&rep, &ab, PivotStrategy::Leftmost) {
            Err(Error::Undefined(_)) => {}
            other => panic!("expected undefined, got {other:?}"),
        }
    }

    #[test]
    fn torsion_invariant_under_basis_permutation() {
        // permuting the preferred basis (determinant ±1) must not change
        // degree or polytope outputs
        let p = trefoil();
        let rep = Representation::trivial(&p);
        let ab = abelianize(&p);
        let c = chain_complex(&p);
        let tau = c.torsion_checked(&rep, &ab).unwrap();
        let mut permuted = c.clone();
        // swap the two degree-one basis elements: swap columns of N1's domain
        // = swap rows of boundaries[0] and columns of boundaries[1]
        permuted.boundaries[0].swap_rows(0, 1);
        permuted.boundaries[1].swap_cols(0, 1);
        permuted.labels[1].swap(0, 1);
        let tau2 = permuted.torsion_checked(&rep, &ab).unwrap();
        assert_eq!(tau.deg_in(0), tau2.deg_in(0));
        let e1 = crate::polytope::polytope_hom(&tau);
        let e2 = crate::polytope::polytope_hom(&tau2);
        assert!(e1.pg_equal(&e2));
    }
}
