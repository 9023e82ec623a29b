//! Small dense exact linear algebra.

use crate::field::Field;
use crate::poly::Poly;

pub type Mat<F> = Vec<Vec<F>>;

pub fn det<F: Field>(mut a: Mat<F>) -> F {
    let n = a.len();
    let mut sign = F::one();
    let mut acc = F::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return F::zero();
        };
        if p != col {
            a.swap(p, col);
            sign = -sign;
        }
        let piv = a[col][col].clone();
        acc = acc * piv.clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() / piv.clone();
            for c in col..n {
                let t = f.clone() * a[col][c].clone();
                a[r][c] = a[r][c].clone() - t;
            }
        }
    }
    sign * acc
}

/// Solve A·X = B for square nonsingular A; B given column-major as a list of right-hand sides.
pub fn solve<F: Field>(a: &Mat<F>, rhs: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = a.len();
    let k = rhs.len();
    let mut m: Mat<F> = (0..n)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend(rhs.iter().map(|b| b[i].clone()));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(p, col);
        let piv = m[col][col].clone();
        for c in col..n + k {
            m[col][c] = m[col][c].clone() / piv.clone();
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..n + k {
                let t = f.clone() * m[col][c].clone();
                m[r][c] = m[r][c].clone() - t;
            }
        }
    }
    Some((0..k).map(|j| (0..n).map(|i| m[i][n + j].clone()).collect()).collect())
}

pub fn inverse<F: Field>(a: &Mat<F>) -> Option<Mat<F>> {
    let n = a.len();
    let id: Vec<Vec<F>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { F::one() } else { F::zero() }).collect())
        .collect();
    let cols = solve(a, &id)?;
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

pub fn matmul<F: Field>(a: &Mat<F>, b: &Mat<F>) -> Mat<F> {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..k).fold(F::zero(), |s, l| s + a[i][l].clone() * b[l][j].clone())
                })
                .collect()
        })
        .collect()
}

/// Indices of a maximal linearly independent subset of the given vectors.
pub fn independent_subset<F: Field>(vs: &[Vec<F>]) -> Vec<usize> {
    let mut basis: Vec<Vec<F>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut keep = Vec::new();
    for (idx, v) in vs.iter().enumerate() {
        let mut w = v.clone();
        for (b, &p) in basis.iter().zip(&pivots) {
            if !w[p].is_zero() {
                let f = w[p].clone() / b[p].clone();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi = wi.clone() - f.clone() * bi.clone();
                }
            }
        }
        if let Some(p) = w.iter().position(|x| !x.is_zero()) {
            basis.push(w);
            pivots.push(p);
            keep.push(idx);
        }
    }
    keep
}

/// det(λI − M) by Faddeev–LeVerrier, returned in ascending powers of λ.
pub fn charpoly<F: Field>(m: &Mat<F>) -> Poly<F> {
    let n = m.len();
    let mut c = vec![F::zero(); n + 1];
    c[n] = F::one();
    let id: Mat<F> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect())
        .collect();
    let mut mk: Mat<F> = vec![vec![F::zero(); n]; n];
    for k in 1..=n {
        // M_k = M·M_{k-1} + c_{n-k+1} I
        let prod = matmul(m, &mk);
        mk = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| prod[i][j].clone() + c[n - k + 1].clone() * id[i][j].clone())
                    .collect()
            })
            .collect();
        let am = matmul(m, &mk);
        let tr = (0..n).fold(F::zero(), |s, i| s + am[i][i].clone());
        c[n - k] = -(tr / F::from_int(k as i64));
    }
    Poly::new(c)
}
