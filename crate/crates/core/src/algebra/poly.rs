//! Dense univariate polynomials over `Z/ℓ`, little-endian coefficient vectors.
//!
//! Polynomials are kept trimmed (no trailing zero coefficients); the zero
//! polynomial is the empty vector.

use super::arith::{inv_mod, mul_mod, prime_divisors};

pub type Poly = Vec<u64>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(a: &[u64], b: &[u64], ell: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % ell)
        .collect();
    trim(out)
}

pub fn sub(a: &[u64], b: &[u64], ell: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + ell - b.get(i).copied().unwrap_or(0)) % ell)
        .collect();
    trim(out)
}

pub fn scale(a: &[u64], s: u64, ell: u64) -> Poly {
    trim(a.iter().map(|&c| mul_mod(c, s, ell)).collect())
}

pub fn mul(a: &[u64], b: &[u64], ell: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, ell)) % ell;
        }
    }
    trim(out)
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem(a: &[u64], b: &[u64], ell: u64) -> (Poly, Poly) {
    let db = degree(b).expect("polynomial division by zero");
    let lead_inv = inv_mod(b[db], ell).expect("leading coefficient is a unit");
    let mut r: Poly = trim(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let coef = mul_mod(r[dr], lead_inv, ell);
        let shift = dr - db;
        q[shift] = coef;
        for (j, &bj) in b.iter().enumerate().take(db + 1) {
            let t = mul_mod(coef, bj, ell);
            r[shift + j] = (r[shift + j] + ell - t) % ell;
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem(a: &[u64], b: &[u64], ell: u64) -> Poly {
    divrem(a, b, ell).1
}

pub fn monic(a: &[u64], ell: u64) -> Poly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => {
            let inv = inv_mod(a[d], ell).expect("unit leading coefficient");
            scale(a, inv, ell)
        }
    }
}

pub fn gcd(a: &[u64], b: &[u64], ell: u64) -> Poly {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = rem(&x, &y, ell);
        x = y;
        y = r;
    }
    monic(&x, ell)
}

/// `(g, s)` with `g = gcd(a, m)` monic and `s·a ≡ g (mod m)`.
pub fn ext_gcd_inverse(a: &[u64], m: &[u64], ell: u64) -> (Poly, Poly) {
    let (mut old_r, mut r) = (trim(a.to_vec()), trim(m.to_vec()));
    let (mut old_s, mut s): (Poly, Poly) = (vec![1], Vec::new());
    while !r.is_empty() {
        let (q, rr) = divrem(&old_r, &r, ell);
        let ns = sub(&old_s, &mul(&q, &s, ell), ell);
        old_r = std::mem::replace(&mut r, rr);
        old_s = std::mem::replace(&mut s, ns);
    }
    match degree(&old_r) {
        None => (Vec::new(), Vec::new()),
        Some(d) => {
            let inv = inv_mod(old_r[d], ell).expect("unit");
            (scale(&old_r, inv, ell), scale(&old_s, inv, ell))
        }
    }
}

pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], ell: u64) -> Poly {
    rem(&mul(a, b, ell), m, ell)
}

/// `base^e mod m`.
pub fn powmod(base: &[u64], mut e: u128, m: &[u64], ell: u64) -> Poly {
    let mut acc: Poly = rem(&[1], m, ell);
    let mut b = rem(base, m, ell);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, m, ell);
        }
        b = mulmod(&b, &b, m, ell);
        e >>= 1;
    }
    acc
}

/// Rabin's irreducibility test for a monic polynomial of degree `d ≥ 1`.
pub fn is_irreducible(f: &[u64], ell: u64) -> bool {
    let d = match degree(f) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    let x: Poly = vec![0, 1];
    // x^(ℓ^k) mod f for k = 1..d via repeated Frobenius.
    let frob = |g: &Poly| powmod(g, ell as u128, f, ell);
    let mut powers = Vec::with_capacity(d + 1);
    let mut cur = rem(&x, f, ell);
    powers.push(cur.clone());
    for _ in 0..d {
        cur = frob(&cur);
        powers.push(cur.clone());
    }
    // x^(ℓ^d) ≡ x
    if powers[d] != powers[0] {
        return false;
    }
    for q in prime_divisors(d as u64) {
        let k = d / q as usize;
        let h = sub(&powers[k], &x, ell);
        if gcd(f, &h, ell).len() != 1 {
            return false;
        }
    }
    true
}

/// The `n`-th cyclotomic polynomial reduced mod `ℓ`, for `gcd(n, ℓ) = 1`.
pub fn cyclotomic_mod(n: u64, ell: u64) -> Poly {
    // Φ_n = ∏_{d | n} (x^d - 1)^{μ(n/d)}; numerator and denominator are
    // accumulated separately and divided exactly at the end.
    let mut num: Poly = vec![1];
    let mut den: Poly = vec![1];
    for d in super::arith::divisors(n) {
        let mu = mobius(n / d);
        if mu == 0 {
            continue;
        }
        let mut xd = vec![0u64; d as usize + 1];
        xd[0] = ell - 1;
        xd[d as usize] = 1;
        if mu == 1 {
            num = mul(&num, &xd, ell);
        } else {
            den = mul(&den, &xd, ell);
        }
    }
    let (q, r) = divrem(&num, &den, ell);
    debug_assert!(r.is_empty());
    q
}

pub fn mobius(n: u64) -> i32 {
    let f = super::arith::factor(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Lexicographic comparison of equal-degree polynomials on the coefficient
/// list `(c_0, c_1, ..., c_d)`.
pub fn lex_cmp(a: &[u64], b: &[u64]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

pub fn derivative(f: &[u64], ell: u64) -> Poly {
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % ell, ell))
            .collect(),
    )
}

/// `None` if `f` is squarefree, otherwise a nontrivial repeated factor
/// (the monic `gcd(f, f')`, or `f` itself when `f' = 0`).
pub fn repeated_factor(f: &[u64], ell: u64) -> Option<Poly> {
    let df = derivative(f, ell);
    if df.is_empty() {
        return (degree(f).unwrap_or(0) > 0).then(|| monic(f, ell));
    }
    let g = gcd(f, &df, ell);
    (g.len() > 1).then_some(g)
}

/// Monic irreducible factors of a squarefree polynomial over `F_ℓ`, `ℓ`
/// odd, sorted by degree and then lexicographically.
pub fn factor_squarefree(f: &[u64], ell: u64) -> Vec<Poly> {
    let mut f = monic(f, ell);
    let mut out = Vec::new();
    let x: Poly = vec![0, 1];
    let mut h = rem(&x, &f, ell);
    let mut i = 0;
    while degree(&f).unwrap_or(0) >= 2 * (i + 1) {
        i += 1;
        h = powmod(&h, ell as u128, &f, ell);
        let g = gcd(&f, &sub(&h, &x, ell), ell);
        if g.len() > 1 {
            equal_degree_split(&g, i, ell, &mut out);
            f = divrem(&f, &g, ell).0;
            h = rem(&h, &f, ell);
        }
    }
    if degree(&f).unwrap_or(0) > 0 {
        out.push(monic(&f, ell));
    }
    out.sort_by(|a, b| lex_cmp(a, b));
    out
}

/// Cantor–Zassenhaus splitting of a product of distinct degree-`d` factors,
/// with test polynomials enumerated deterministically.
fn equal_degree_split(g: &[u64], d: usize, ell: u64, out: &mut Vec<Poly>) {
    let n = degree(g).unwrap_or(0);
    if n == d {
        out.push(monic(g, ell));
        return;
    }
    let exp = (ell as u128).pow(d as u32).saturating_sub(1) / 2;
    for counter in 1u64.. {
        // Digits of the counter in base ℓ give the test polynomial.
        let mut t = Vec::new();
        let mut c = counter;
        while c > 0 {
            t.push(c % ell);
            c /= ell;
        }
        t.push(1);
        let t = trim(t);
        if degree(&t).unwrap_or(0) >= n {
            break;
        }
        let u = sub(&powmod(&t, exp, g, ell), &[1], ell);
        let h = gcd(g, &u, ell);
        let dh = degree(&h).unwrap_or(0);
        if h.len() > 1 && dh < n {
            equal_degree_split(&h, d, ell, out);
            equal_degree_split(&divrem(g, &h, ell).0, d, ell, out);
            return;
        }
    }
    unreachable!("equal-degree splitting exhausted its test polynomials");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_identity() {
        let ell = 7;
        let a = vec![3, 0, 5, 1, 6];
        let b = vec![2, 1, 1];
        let (q, r) = divrem(&a, &b, ell);
        assert_eq!(add(&mul(&q, &b, ell), &r, ell), trim(a));
        assert!(r.len() < b.len());
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic_mod(1, 7), vec![6, 1]);
        assert_eq!(cyclotomic_mod(2, 7), vec![1, 1]);
        assert_eq!(cyclotomic_mod(5, 3), vec![1, 1, 1, 1, 1]);
        assert_eq!(cyclotomic_mod(4, 5), vec![1, 0, 1]);
        assert_eq!(degree(&cyclotomic_mod(11, 13)), Some(10));
    }

    #[test]
    fn irreducibility() {
        // x^2 + 1 is irreducible mod 3 and 7, reducible mod 5.
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(is_irreducible(&[1, 0, 1], 7));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        // Φ_5 is irreducible mod 3 (order of 3 mod 5 is 4).
        assert!(is_irreducible(&cyclotomic_mod(5, 3), 3));
        assert!(!is_irreducible(&cyclotomic_mod(5, 11), 11));
        // Brute-force count of irreducible monic cubics mod 3: (27 - 3)/3 = 8.
        let mut count = 0;
        for c0 in 0..3 {
            for c1 in 0..3 {
                for c2 in 0..3 {
                    if is_irreducible(&[c0, c1, c2, 1], 3) {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, 8);
    }

    #[test]
    fn factorization() {
        for ell in [5u64, 7, 11, 13] {
            // x^(ℓ^2) − x is the product of all monic irreducibles of degree 1 and 2.
            let n = (ell * ell) as usize;
            let mut f = vec![0u64; n + 1];
            f[n] = 1;
            f[1] = ell - 1;
            let fs = factor_squarefree(&f, ell);
            let linear = fs.iter().filter(|g| g.len() == 2).count() as u64;
            let quad = fs.iter().filter(|g| g.len() == 3).count() as u64;
            assert_eq!(linear, ell);
            assert_eq!(quad, (ell * ell - ell) / 2);
            assert!(fs.iter().all(|g| is_irreducible(g, ell)));
            let prod = fs.iter().fold(vec![1u64], |acc, g| mul(&acc, g, ell));
            assert_eq!(prod, f);
        }
        let f = mul(&mul(&[1, 1], &[1, 1], 7), &[3, 1], 7);
        assert_eq!(repeated_factor(&f, 7), Some(vec![1, 1]));
        assert_eq!(repeated_factor(&[1, 0, 1], 7), None);
    }

    #[test]
    fn inverse_mod_poly() {
        let ell = 5;
        let m = vec![2, 0, 0, 1, 1]; // arbitrary modulus
        let a = vec![1, 3, 4];
        let (g, s) = ext_gcd_inverse(&a, &m, ell);
        if g == vec![1] {
            assert_eq!(mulmod(&s, &a, &m, ell), vec![1]);
        }
    }
}
