//! Dense linear algebra over `Z/ℓ`.

use super::arith::{inv_mod, mul_mod};
use super::poly::{self, Poly};

pub type Matrix = Vec<Vec<u64>>;

/// Reduced row echelon form. Returns the nonzero rows and their pivot
/// columns (strictly increasing).
pub fn rref(mut rows: Matrix, ell: u64) -> (Matrix, Vec<usize>) {
    let ncols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    for r in rows.iter_mut() {
        r.resize(ncols, 0);
    }
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pr) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = inv_mod(rows[rank][col], ell).expect("nonzero mod prime");
        for x in rows[rank].iter_mut() {
            *x = mul_mod(*x, inv, ell);
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x = (*x + ell - mul_mod(f, y, ell)) % ell;
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    (rows, pivots)
}

pub fn rank(rows: Matrix, ell: u64) -> usize {
    rref(rows, ell).1.len()
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            let mut r = vec![0; n];
            r[i] = 1;
            r
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix, ell: u64) -> Matrix {
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            let mut out = vec![0u128; m];
            for (k, &x) in row.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (o, &y) in out.iter_mut().zip(&b[k]) {
                    *o += (x * y) as u128;
                }
            }
            out.into_iter().map(|v| (v % ell as u128) as u64).collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[u64], ell: u64) -> Vec<u64> {
    a.iter()
        .map(|row| {
            let s: u128 = row.iter().zip(v).map(|(&x, &y)| (x * y) as u128).sum();
            (s % ell as u128) as u64
        })
        .collect()
}

/// `Σ c_i A^i` for a polynomial `c`.
pub fn poly_eval_matrix(c: &[u64], a: &Matrix, ell: u64) -> Matrix {
    let n = a.len();
    let mut acc = vec![vec![0; n]; n];
    for &coef in c.iter().rev() {
        acc = mat_mul(&acc, a, ell);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] = (row[i] + coef) % ell;
        }
    }
    acc
}

/// Characteristic polynomial `det(xI − A)` (monic) by the Faddeev–LeVerrier-free
/// Hessenberg method, valid over any field.
pub fn char_poly(a: &Matrix, ell: u64) -> Poly {
    let n = a.len();
    let mut h = a.clone();
    // Reduce to upper Hessenberg form by similarity transforms.
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| h[i][j] != 0) else {
            continue;
        };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        let inv = inv_mod(h[j + 1][j], ell).unwrap();
        for i in j + 2..n {
            let f = mul_mod(h[i][j], inv, ell);
            if f == 0 {
                continue;
            }
            for k in 0..n {
                let t = mul_mod(f, h[j + 1][k], ell);
                h[i][k] = (h[i][k] + ell - t) % ell;
            }
            for row in h.iter_mut() {
                let t = mul_mod(f, row[i], ell);
                row[j + 1] = (row[j + 1] + t) % ell;
            }
        }
    }
    // p_0 = 1, p_{m} = (x − h_{m−1,m−1}) p_{m−1} − Σ h_{i,m−1} (∏ subdiag) p_i
    let mut ps: Vec<Poly> = vec![vec![1]];
    for m in 1..=n {
        let x_minus = vec![(ell - h[m - 1][m - 1]) % ell, 1];
        let mut pm = poly::mul(&x_minus, &ps[m - 1], ell);
        let mut prod = 1u64;
        for i in (0..m - 1).rev() {
            prod = mul_mod(prod, h[i + 1][i], ell);
            let coef = mul_mod(prod, h[i][m - 1], ell);
            if coef != 0 {
                pm = poly::sub(&pm, &poly::scale(&ps[i], coef, ell), ell);
            }
        }
        ps.push(pm);
    }
    ps.pop().unwrap()
}

/// Minimal polynomial of `A` via Krylov spaces of the standard basis vectors.
pub fn min_poly(a: &Matrix, ell: u64) -> Poly {
    let n = a.len();
    let mut acc: Poly = vec![1];
    for e in 0..n {
        let mut v = vec![0u64; n];
        v[e] = 1;
        // Apply the current annihilator first; the remaining part has a
        // local minimal polynomial that must be multiplied in.
        let w = mat_vec(&poly_eval_matrix(&acc, a, ell), &v, ell);
        if w.iter().all(|&x| x == 0) {
            continue;
        }
        let local = vector_min_poly(a, &w, ell);
        acc = poly::mul(&acc, &local, ell);
    }
    poly::monic(&acc, ell)
}

/// Monic polynomial of least degree with `q(A) v = 0`.
pub fn vector_min_poly(a: &Matrix, v: &[u64], ell: u64) -> Poly {
    let n = a.len();
    // Krylov vectors with a running echelon that tracks combinations.
    let mut basis: Vec<(Vec<u64>, Poly, usize)> = Vec::new();
    let mut cur = v.to_vec();
    for deg in 0..=n {
        let mut vec = cur.clone();
        let mut comb: Poly = {
            let mut c = vec![0u64; deg + 1];
            c[deg] = 1;
            c
        };
        for (bv, bc, pc) in &basis {
            let f = vec[*pc];
            if f != 0 {
                for (x, &y) in vec.iter_mut().zip(bv) {
                    *x = (*x + ell - mul_mod(f, y, ell)) % ell;
                }
                comb = poly::sub(&comb, &poly::scale(bc, f, ell), ell);
            }
        }
        match vec.iter().position(|&x| x != 0) {
            None => return poly::monic(&comb, ell),
            Some(pc) => {
                let inv = inv_mod(vec[pc], ell).unwrap();
                let vec: Vec<u64> = vec.iter().map(|&x| mul_mod(x, inv, ell)).collect();
                let comb = poly::scale(&comb, inv, ell);
                basis.push((vec, comb, pc));
            }
        }
        cur = mat_vec(a, &cur, ell);
    }
    unreachable!("Krylov sequence must become dependent within n+1 steps")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_basic() {
        let (r, p) = rref(vec![vec![2, 4, 1], vec![1, 2, 0], vec![3, 6, 1]], 7);
        assert_eq!(p, vec![0, 2]);
        assert_eq!(r, vec![vec![1, 2, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn char_and_min_poly() {
        let ell = 11;
        // Companion-like example with repeated eigenvalue: diag(2, 2, 3).
        let a = vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 3]];
        let cp = char_poly(&a, ell);
        // (x-2)^2 (x-3)
        let want = poly::mul(&poly::mul(&[9, 1], &[9, 1], ell), &[8, 1], ell);
        assert_eq!(cp, want);
        assert_eq!(min_poly(&a, ell), poly::mul(&[9, 1], &[8, 1], ell));
        // Jordan block: min poly = char poly.
        let j = vec![vec![5, 1], vec![0, 5]];
        assert_eq!(min_poly(&j, ell), poly::mul(&[6, 1], &[6, 1], ell));
        // Cayley–Hamilton on a dense matrix.
        let m = vec![
            vec![1, 2, 3, 4],
            vec![0, 5, 6, 7],
            vec![8, 9, 10, 0],
            vec![1, 1, 2, 3],
        ];
        let z = poly_eval_matrix(&char_poly(&m, ell), &m, ell);
        assert!(z.iter().flatten().all(|&x| x == 0));
        let mp = min_poly(&m, ell);
        assert!(poly_eval_matrix(&mp, &m, ell)
            .iter()
            .flatten()
            .all(|&x| x == 0));
    }
}
