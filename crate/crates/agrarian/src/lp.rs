//! Exact rational linear programming, just enough for polytope work:
//! feasibility of `{λ ≥ 0 : Aλ = b}` via a phase-1 simplex with Bland's rule.

use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Decides whether `b` lies in the convex hull of `points` (exact).
pub fn point_in_hull(point: &[BigRational], points: &[Vec<BigRational>]) -> bool {
    if points.is_empty() {
        return false;
    }
    let dim = point.len();
    // constraints: Σ λᵢ vᵢ = p and Σ λᵢ = 1, λ ≥ 0
    let rows = dim + 1;
    let cols = points.len();
    let mut a = vec![vec![BigRational::zero(); cols]; rows];
    let mut b = vec![BigRational::zero(); rows];
    for (j, v) in points.iter().enumerate() {
        for i in 0..dim {
            a[i][j] = v[i].clone();
        }
        a[rows - 1][j] = BigRational::one();
    }
    b[..dim].clone_from_slice(point);
    b[rows - 1] = BigRational::one();
    feasible_eq_nonneg(&a, &b)
}

/// Phase-1 simplex feasibility for `{x ≥ 0 : Ax = b}`.
pub fn feasible_eq_nonneg(a: &[Vec<BigRational>], b: &[BigRational]) -> bool {
    let m = a.len();
    if m == 0 {
        return true;
    }
    let n = a[0].len();
    // flip rows so b ≥ 0, append artificial identity, minimize artificial sum
    let total = n + m;
    let mut tab = vec![vec![BigRational::zero(); total]; m];
    let mut rhs = vec![BigRational::zero(); m];
    for i in 0..m {
        let flip = b[i].is_negative();
        for j in 0..n {
            tab[i][j] = if flip { -a[i][j].clone() } else { a[i][j].clone() };
        }
        rhs[i] = if flip { -b[i].clone() } else { b[i].clone() };
        tab[i][n + i] = BigRational::one();
    }
    let mut basis: Vec<usize> = (n..total).collect();
    // objective row: cost 1 on artificials, reduced through the basis
    let mut cost = vec![BigRational::zero(); total];
    for j in n..total {
        cost[j] = BigRational::one();
    }
    let mut obj = vec![BigRational::zero(); total];
    let mut obj_val = BigRational::zero();
    for j in 0..total {
        let mut red = cost[j].clone();
        for i in 0..m {
            red -= &cost[basis[i]] * &tab[i][j];
        }
        obj[j] = red;
    }
    for i in 0..m {
        obj_val += &cost[basis[i]] * &rhs[i];
    }

    loop {
        // Bland: first column with negative reduced cost
        let Some(enter) = (0..total).find(|&j| obj[j].is_negative()) else {
            break;
        };
        // ratio test, Bland tie-break by smallest basis index
        let mut leave: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = &rhs[i] / &tab[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b
                            || (ratio == *b
                                && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            // unbounded phase-1 cannot happen with artificials, defensive exit
            return false;
        };
        // pivot
        let piv = tab[r][enter].clone();
        for j in 0..total {
            tab[r][j] = &tab[r][j] / &piv;
        }
        rhs[r] = &rhs[r] / &piv;
        for i in 0..m {
            if i != r && !tab[i][enter].is_zero() {
                let f = tab[i][enter].clone();
                for j in 0..total {
                    let d = &f * &tab[r][j];
                    tab[i][j] = &tab[i][j] - &d;
                }
                let d = &f * &rhs[r];
                rhs[i] = &rhs[i] - &d;
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for j in 0..total {
                let d = &f * &tab[r][j];
                obj[j] = &obj[j] - &d;
            }
            let d = &f * &rhs[r];
            obj_val = &obj_val - &d;
        }
        basis[r] = enter;
    }
    obj_val.is_zero()
}
