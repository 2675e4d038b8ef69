//! Integer lattice utilities: Smith normal form with unimodular transforms,
//! and adapted-basis construction for primitive characters.

use num::bigint::BigInt;
use num::{One, Signed, Zero};

pub type IntMat = Vec<Vec<BigInt>>;

pub fn int_mat(rows: usize, cols: usize) -> IntMat {
    vec![vec![BigInt::zero(); cols]; rows]
}

pub fn identity(n: usize) -> IntMat {
    let mut m = int_mat(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

pub fn mat_mul(a: &IntMat, b: &IntMat) -> IntMat {
    let r = a.len();
    let inner = if r > 0 { a[0].len() } else { 0 };
    let c = if b.is_empty() { 0 } else { b[0].len() };
    assert!(b.len() == inner);
    let mut out = int_mat(r, c);
    for i in 0..r {
        for j in 0..c {
            let mut acc = BigInt::zero();
            for k in 0..inner {
                acc += &a[i][k] * &b[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

/// Smith normal form: returns `(u, d, v)` with `u · m · v = d`, `u` and `v`
/// unimodular and `d` diagonal with each entry dividing the next.
pub fn smith_normal_form(m: &IntMat) -> (IntMat, IntMat, IntMat) {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut d = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);

    fn swap_rows(d: &mut IntMat, u: &mut IntMat, a: usize, b: usize) {
        d.swap(a, b);
        u.swap(a, b);
    }
    fn swap_cols(d: &mut IntMat, v: &mut IntMat, a: usize, b: usize) {
        for row in d.iter_mut() {
            row.swap(a, b);
        }
        for row in v.iter_mut() {
            row.swap(a, b);
        }
    }
    fn add_row(d: &mut IntMat, u: &mut IntMat, dst: usize, src: usize, k: &BigInt) {
        let cols = d[0].len();
        for j in 0..cols {
            let t = &d[src][j] * k;
            d[dst][j] += t;
        }
        let un = u[0].len();
        for j in 0..un {
            let t = &u[src][j] * k;
            u[dst][j] += t;
        }
    }
    fn add_col(d: &mut IntMat, v: &mut IntMat, dst: usize, src: usize, k: &BigInt) {
        for row in d.iter_mut() {
            let t = &row[src] * k;
            row[dst] += t;
        }
        for row in v.iter_mut() {
            let t = &row[src] * k;
            row[dst] += t;
        }
    }

    let mut t = 0usize;
    while t < rows && t < cols {
        // find a nonzero pivot with minimal absolute value
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d[i][j].is_zero() {
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => d[i][j].abs() < d[pi][pj].abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut d, &mut u, t, pi);
        swap_cols(&mut d, &mut v, t, pj);
        // reduce row and column against the pivot until clean
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !d[i][t].is_zero() {
                    let q = -(&d[i][t] / &d[t][t]);
                    add_row(&mut d, &mut u, i, t, &q);
                    if !d[i][t].is_zero() {
                        swap_rows(&mut d, &mut u, t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !d[t][j].is_zero() {
                    let q = -(&d[t][j] / &d[t][t]);
                    add_col(&mut d, &mut v, j, t, &q);
                    if !d[t][j].is_zero() {
                        swap_cols(&mut d, &mut v, t, j);
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        // enforce divisibility of later entries by the pivot
        let mut fixed = true;
        'divis: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&d[i][j] % &d[t][t]).is_zero() {
                    add_row(&mut d, &mut u, t, i, &BigInt::one());
                    fixed = false;
                    break 'divis;
                }
            }
        }
        if fixed {
            if d[t][t].is_negative() {
                let m1 = -BigInt::one();
                for j in 0..cols {
                    d[t][j] = &d[t][j] * &m1;
                }
                for j in 0..rows {
                    u[t][j] = &u[t][j] * &m1;
                }
            }
            t += 1;
        }
    }
    (u, d, v)
}

/// A unimodular matrix `t` with `phi · t = (g, 0, …, 0)` where `g > 0` is
/// the gcd of the entries; columns of `t` form the adapted lattice basis.
/// Also returns `t⁻¹` for exponent rewriting. `phi` must be nonzero.
pub fn adapted_basis(phi: &[i64]) -> (Vec<Vec<i64>>, Vec<Vec<i64>>, i64) {
    let k = phi.len();
    assert!(phi.iter().any(|x| *x != 0), "zero character has no adapted basis");
    let row: IntMat = vec![phi.iter().map(|x| BigInt::from(*x)).collect()];
    let (u, d, v) = smith_normal_form(&row);
    // u is 1×1 = ±1; fold it into v so that phi · t = (g, 0, …)
    let sign = u[0][0].clone();
    let g = (&d[0][0] * &sign).abs();
    let mut t = v.clone();
    if (phi_dot_col(phi, &t, 0)).is_negative() {
        for r in t.iter_mut() {
            r[0] = -r[0].clone();
        }
    }
    let tinv = invert_unimodular(&t);
    let to_i64 = |m: &IntMat| -> Vec<Vec<i64>> {
        m.iter()
            .map(|r| r.iter().map(|x| i64::try_from(x.clone()).expect("entry fits i64")).collect())
            .collect()
    };
    (
        to_i64(&t),
        to_i64(&tinv),
        i64::try_from(g).expect("gcd fits i64"),
    )
}

fn phi_dot_col(phi: &[i64], t: &IntMat, col: usize) -> BigInt {
    phi.iter()
        .enumerate()
        .map(|(i, p)| BigInt::from(*p) * &t[i][col])
        .sum()
}

/// Inverse of a unimodular integer matrix via adjugate-free elimination
/// over the rationals, checked to be integral.
pub fn invert_unimodular(m: &IntMat) -> IntMat {
    use num::rational::BigRational;
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero()).expect("singular matrix");
        a.swap(col, p);
        inv.swap(col, p);
        let piv = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &piv;
            inv[col][j] = &inv[col][j] / &piv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let d = &f * &a[col][j];
                    a[r][j] = &a[r][j] - &d;
                    let d = &f * &inv[col][j];
                    inv[r][j] = &inv[r][j] - &d;
                }
            }
        }
    }
    inv.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| {
                    assert!(x.is_integer(), "matrix was not unimodular");
                    x.to_integer()
                })
                .collect()
        })
        .collect()
}
