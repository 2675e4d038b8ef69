//! Dense matrices over abstract (possibly skew) fields, with exact rank,
//! determinant and solve routines.
//!
//! Commutative work over K(X) goes through fraction-free Bareiss elimination
//! on cleared-denominator Laurent matrices; generic elimination over a
//! `SkewField` backs the noncommutative cases.

use crate::laurent::LaurentPoly;
use crate::ratfun::RatFun;
use crate::scalar::GaussianRational;
use std::fmt;

/// A division ring presented as a runtime object: operations take the field
/// first, elements second. Commutativity is not assumed.
pub trait SkewField {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, b))
    }
}

/// The commutative field of rational functions in `rank` variables over ℚ(i).
/// With `rank == 0` this is ℚ(i) itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunField {
    pub rank: usize,
}

impl SkewField for RatFunField {
    type Elem = RatFun;

    fn zero(&self) -> RatFun {
        RatFun::zero(self.rank)
    }
    fn one(&self) -> RatFun {
        RatFun::one(self.rank)
    }
    fn add(&self, a: &RatFun, b: &RatFun) -> RatFun {
        a.add(b)
    }
    fn neg(&self, a: &RatFun) -> RatFun {
        a.neg()
    }
    fn mul(&self, a: &RatFun, b: &RatFun) -> RatFun {
        a.mul(b)
    }
    fn inv(&self, a: &RatFun) -> Option<RatFun> {
        a.inv()
    }
    fn is_zero(&self, a: &RatFun) -> bool {
        a.is_zero()
    }
}

/// Row-major rectangular matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn new(rows: usize, cols: usize, fill: T) -> Self {
        Matrix { rows, cols, data: vec![fill; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Matrix<T> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn map<U: Clone>(&self, mut f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| f(x)).collect() }
    }

    /// Copy without the given row.
    pub fn delete_row(&self, row: usize) -> Matrix<T> {
        assert!(row < self.rows);
        Matrix::from_fn(self.rows - 1, self.cols, |i, j| {
            let src = if i < row { i } else { i + 1 };
            self.at(src, j).clone()
        })
    }

    /// Copy without the given column.
    pub fn delete_col(&self, col: usize) -> Matrix<T> {
        assert!(col < self.cols);
        Matrix::from_fn(self.rows, self.cols - 1, |i, j| {
            let src = if j < col { j } else { j + 1 };
            self.at(i, src).clone()
        })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn identity_with(n: usize, zero: T, one: T) -> Self {
        let mut m = Matrix::new(n, n, zero);
        for i in 0..n {
            m.set(i, i, one.clone());
        }
        m
    }
}

/// Matrix product over an abstract field.
pub fn mat_mul<F: SkewField>(field: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.cols, b.rows, "shape mismatch");
    Matrix::from_fn(a.rows, b.cols, |i, j| {
        let mut acc = field.zero();
        for k in 0..a.cols {
            acc = field.add(&acc, &field.mul(a.at(i, k), b.at(k, j)));
        }
        acc
    })
}

pub fn mat_identity<F: SkewField>(field: &F, n: usize) -> Matrix<F::Elem> {
    Matrix::identity_with(n, field.zero(), field.one())
}

pub fn mat_is_zero<F: SkewField>(field: &F, a: &Matrix<F::Elem>) -> bool {
    a.data.iter().all(|x| field.is_zero(x))
}

/// Row rank over an arbitrary skew field, by elimination with left
/// multipliers only (row rank equals column rank over a division ring).
pub fn rank_elim<F: SkewField>(field: &F, m: &Matrix<F::Elem>) -> usize {
    let mut a = m.clone();
    let mut rank = 0usize;
    let mut row = 0usize;
    for col in 0..a.cols {
        let pivot = (row..a.rows).find(|&r| !field.is_zero(a.at(r, col)));
        let Some(p) = pivot else { continue };
        a.swap_rows(row, p);
        let inv = field.inv(a.at(row, col)).expect("pivot not invertible");
        for r in row + 1..a.rows {
            if field.is_zero(a.at(r, col)) {
                continue;
            }
            let factor = field.mul(a.at(r, col), &inv);
            for c in col..a.cols {
                let delta = field.mul(&factor, a.at(row, c));
                let v = field.sub(a.at(r, c), &delta);
                a.set(r, c, v);
            }
        }
        rank += 1;
        row += 1;
        if row == a.rows {
            break;
        }
    }
    rank
}

/// Fraction-free Bareiss elimination on a Laurent-polynomial matrix.
/// Returns (rank, determinant). The determinant is only meaningful for
/// square inputs; rank-deficient square matrices report a zero determinant.
pub fn bareiss(m: &Matrix<LaurentPoly>) -> (usize, LaurentPoly) {
    let rank_vars = if m.data.is_empty() { 0 } else { m.at(0, 0).rank() };
    if m.rows == 0 || m.cols == 0 {
        return (0, LaurentPoly::one(rank_vars));
    }
    let mut a = m.clone();
    let n = a.rows;
    let cols = a.cols;
    let mut prev = LaurentPoly::one(rank_vars);
    let mut sign = 1i32;
    let mut rank = 0usize;
    let mut row = 0usize;
    for col in 0..cols {
        if row == n {
            break;
        }
        let pivot = (row..n).find(|&r| !a.at(r, col).is_zero());
        let Some(p) = pivot else { continue };
        if p != row {
            a.swap_rows(row, p);
            sign = -sign;
        }
        let pivot_val = a.at(row, col).clone();
        for r in row + 1..n {
            for c in col + 1..cols {
                let t = pivot_val
                    .mul(a.at(r, c))
                    .sub(&a.at(r, col).mul(a.at(row, c)));
                let reduced = t.exact_div(&prev).expect("Bareiss divisibility");
                a.set(r, c, reduced);
            }
            a.set(r, col, LaurentPoly::zero(rank_vars));
        }
        prev = pivot_val;
        rank += 1;
        row += 1;
    }
    let det = if m.rows == m.cols && rank == m.rows {
        if sign < 0 {
            prev.neg()
        } else {
            prev
        }
    } else {
        LaurentPoly::zero(rank_vars)
    };
    (rank, det)
}

/// Clears denominators row by row, returning the polynomial matrix and the
/// product of the scaling factors (the determinant correction).
fn clear_denominators(m: &Matrix<RatFun>, rank_vars: usize) -> (Matrix<LaurentPoly>, LaurentPoly) {
    let mut cleared = Matrix::new(m.rows, m.cols, LaurentPoly::zero(rank_vars));
    let mut scale = LaurentPoly::one(rank_vars);
    for i in 0..m.rows {
        let mut row_scale = LaurentPoly::one(rank_vars);
        for j in 0..m.cols {
            row_scale = row_scale.mul(m.at(i, j).den());
        }
        for j in 0..m.cols {
            let f = m.at(i, j);
            let co = row_scale.exact_div(f.den()).expect("denominator divides row scale");
            cleared.set(i, j, f.num().mul(&co));
        }
        scale = scale.mul(&row_scale);
    }
    (cleared, scale)
}

/// Exact rank of a matrix over K(X).
pub fn rank_ratfun(m: &Matrix<RatFun>) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let rank_vars = m.at(0, 0).rank();
    let (cleared, _) = clear_denominators(m, rank_vars);
    bareiss(&cleared).0
}

/// Exact determinant over K(X) via fraction-free elimination. The empty
/// matrix has determinant 1.
pub fn det_ratfun(m: &Matrix<RatFun>) -> RatFun {
    assert_eq!(m.rows, m.cols, "determinant of non-square matrix");
    if m.rows == 0 {
        return RatFun::one(0);
    }
    let rank_vars = m.at(0, 0).rank();
    if m.rows == 0 {
        return RatFun::one(rank_vars);
    }
    let (cleared, scale) = clear_denominators(m, rank_vars);
    let (_, det) = bareiss(&cleared);
    RatFun::new(det, scale)
}

/// Solves `a · x = rhs` column by column over K(X) when a solution exists.
/// `a` may be rectangular; returns `None` if any column of `rhs` is outside
/// the column span of `a`. When the kernel is nontrivial the solution picked
/// is the one supported on pivot columns.
pub fn solve_ratfun(a: &Matrix<RatFun>, rhs: &Matrix<RatFun>) -> Option<Matrix<RatFun>> {
    assert_eq!(a.rows, rhs.rows);
    let rank_vars = a
        .data
        .first()
        .map(|x| x.rank())
        .or_else(|| rhs.data.first().map(|x| x.rank()))
        .unwrap_or(0);
    let field = RatFunField { rank: rank_vars };
    let n = a.rows;
    let m = a.cols;
    let k = rhs.cols;
    // augmented elimination tracking pivot columns
    let mut work = Matrix::from_fn(n, m + k, |i, j| {
        if j < m {
            a.at(i, j).clone()
        } else {
            rhs.at(i, j - m).clone()
        }
    });
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut row = 0usize;
    for col in 0..m {
        let Some(p) = (row..n).find(|&r| !work.at(r, col).is_zero()) else { continue };
        work.swap_rows(row, p);
        let inv = work.at(row, col).inv().unwrap();
        for c in col..m + k {
            let v = work.at(row, c).mul(&inv);
            work.set(row, c, v);
        }
        for r in 0..n {
            if r == row || work.at(r, col).is_zero() {
                continue;
            }
            let factor = work.at(r, col).clone();
            for c in col..m + k {
                let delta = factor.mul(work.at(row, c));
                let v = work.at(r, c).sub(&delta);
                work.set(r, c, v);
            }
        }
        pivots.push((row, col));
        row += 1;
        if row == n {
            break;
        }
    }
    // consistency: rows past the pivot rows must have zero rhs
    for r in row..n {
        for c in 0..k {
            if !work.at(r, m + c).is_zero() {
                return None;
            }
        }
    }
    let mut x = Matrix::new(m, k, field.zero());
    for &(r, c) in &pivots {
        for j in 0..k {
            x.set(c, j, work.at(r, m + j).clone());
        }
    }
    Some(x)
}

/// Canonical representative of the Dieudonné determinant, computed by the
/// four-case recursion: 1×1 matrices map to their entry; a zero last row
/// gives 0; a nonzero corner entry drives one Schur-complement step; and
/// otherwise the column of the last nonzero entry in the bottom row is
/// swapped into the corner, negating the result.
///
/// Only functionals invariant under abelianization (deg, ord, polytope
/// class) of the returned value are canonical; the raw representative is
/// exposed for inspection but its unit part is presentation-dependent.
pub fn dieudonne_det<F: SkewField>(field: &F, m: &Matrix<F::Elem>) -> F::Elem {
    assert_eq!(m.rows, m.cols, "Dieudonné determinant of non-square matrix");
    if m.rows == 0 {
        return field.one();
    }
    let mut a = m.clone();
    let mut acc = field.one(); // product of extracted corner entries, right to left
    let mut sign_negative = false;
    let mut n = a.rows;
    loop {
        if n == 1 {
            let v = field.mul(a.at(0, 0), &acc);
            return if sign_negative { field.neg(&v) } else { v };
        }
        if (0..n).all(|j| field.is_zero(a.at(n - 1, j))) {
            return field.zero();
        }
        if !field.is_zero(a.at(n - 1, n - 1)) {
            let corner = a.at(n - 1, n - 1).clone();
            let corner_inv = field.inv(&corner).expect("nonzero entry has an inverse");
            let mut next = Matrix::new(n - 1, n - 1, field.zero());
            for i in 0..n - 1 {
                // factor aᵢₙ · aₙₙ⁻¹ applied to the last row
                let factor = field.mul(a.at(i, n - 1), &corner_inv);
                for j in 0..n - 1 {
                    let delta = field.mul(&factor, a.at(n - 1, j));
                    next.set(i, j, field.sub(a.at(i, j), &delta));
                }
            }
            acc = field.mul(&corner, &acc);
            a = next;
            n -= 1;
        } else {
            let j = (0..n - 1)
                .rev()
                .find(|&j| !field.is_zero(a.at(n - 1, j)))
                .expect("nonzero entry exists in the last row");
            a.swap_cols(j, n - 1);
            sign_negative = !sign_negative;
        }
    }
}

/// Turns a matrix over ℚ(i) into a RatFun matrix of the given variable rank.
pub fn scalar_matrix_to_ratfun(m: &Matrix<GaussianRational>, rank: usize) -> Matrix<RatFun> {
    m.map(|c| RatFun::constant(rank, c.clone()))
}
