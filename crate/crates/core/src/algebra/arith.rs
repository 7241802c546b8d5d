//! Integer number theory on machine words: modular powers, primality,
//! factorization, Kronecker symbols and CRT.

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_i64(a: i64, b: i64) -> u64 {
    gcd(a.unsigned_abs(), b.unsigned_abs())
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Least non-negative residue of `a` modulo `m`.
pub fn rem_euclid(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        if m == 1 {
            return Some(0);
        }
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller–Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Checks that `ell` is an odd prime, returning it unchanged.
pub fn odd_prime(ell: u64) -> Result<u64> {
    if ell > 2 && ell < (1 << 31) && is_prime(ell) {
        Ok(ell)
    } else {
        Err(Error::NotOddPrime(ell))
    }
}

// --- u128 arithmetic for field orders ℓ^d - 1 that overflow u64 ---

fn mul_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    // Double-and-add; only used for moduli above 2^64.
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod_u128(acc, a, m);
        }
        a = add_mod_u128(a, a, m);
        b >>= 1;
    }
    acc
}

fn add_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

fn pow_mod_u128(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u128(acc, base, m);
        }
        base = mul_mod_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn is_prime_u128(n: u128) -> bool {
    if n <= u64::MAX as u128 {
        return is_prime(n as u64);
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = pow_mod_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u128(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u128) -> u128 {
    // Brent's variant with a fixed sequence of constants, so factorizations
    // are reproducible.
    for c in 1u128.. {
        let f = |x: u128| add_mod_u128(mul_mod_u128(x, x, n), c, n);
        let (mut x, mut y, mut d) = (2u128, 2u128, 1u128);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u128(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

/// Prime factorization as sorted `(prime, exponent)` pairs.
pub fn factor_u128(mut n: u128) -> Vec<(u128, u32)> {
    let mut out: Vec<(u128, u32)> = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut p = 2u128;
    while p < 10_000 && p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![];
    if n > 1 {
        stack.push(n);
    }
    let mut big: Vec<u128> = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u128(m) {
            big.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    big.sort_unstable();
    for q in big {
        match out.last_mut() {
            Some((r, e)) if *r == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out.sort_unstable();
    out
}

pub fn factor(n: u64) -> Vec<(u64, u32)> {
    factor_u128(n as u128)
        .into_iter()
        .map(|(p, e)| (p as u64, e))
        .collect()
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factor(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Largest square-free divisor of `n`.
pub fn radical(n: u64) -> u64 {
    prime_divisors(n).into_iter().product::<u64>().max(1)
}

/// Splits `n = n_p * n_rest` with `n_p` the full power of `p` dividing `n`.
pub fn split_prime_power(n: u64, p: u64) -> (u64, u64) {
    let mut np = 1;
    let mut rest = n;
    while rest.is_multiple_of(p) {
        rest /= p;
        np *= p;
    }
    (np, rest)
}

/// p-adic valuation; `None` for zero.
pub fn valuation(n: i64, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut m = n.unsigned_abs();
    let mut v = 0;
    while m.is_multiple_of(p) {
        m /= p;
        v += 1;
    }
    Some(v)
}

/// Multiplicative order of `a` modulo `m` (requires `gcd(a, m) = 1`).
pub fn mult_order_mod(a: u64, m: u64) -> Result<u64> {
    if m == 1 {
        return Ok(1);
    }
    if gcd(a % m, m) != 1 {
        return Err(Error::NotAUnit(format!("{a} mod {m}")));
    }
    order_dividing(euler_phi(m) as u128, |e| pow_mod(a, e as u64, m) == 1).map(|e| e as u64)
}

/// Least `e | group_order` with `is_one(e)`, given that `is_one(group_order)`.
pub fn order_dividing(group_order: u128, is_one: impl Fn(u128) -> bool) -> Result<u128> {
    let mut e = group_order;
    for (q, k) in factor_u128(group_order) {
        for _ in 0..k {
            if e.is_multiple_of(q) && is_one(e / q) {
                e /= q;
            } else {
                break;
            }
        }
    }
    Ok(e)
}

/// Solves `x ≡ r_i (mod m_i)` for pairwise coprime moduli; returns
/// `(x mod prod, prod)`.
pub fn crt(residues: &[(u64, u64)]) -> Option<(u64, u64)> {
    let mut x: u128 = 0;
    let mut m: u128 = 1;
    for &(r, mi) in residues {
        let mi128 = mi as u128;
        if gcd_u128(m, mi128) != 1 {
            return None;
        }
        // x + m*t ≡ r (mod mi)
        let inv = inv_mod((m % mi128) as u64, mi)?;
        let diff = ((r as i128 - (x % mi128) as i128).rem_euclid(mi as i128)) as u64;
        let t = mul_mod(diff, inv, mi) as u128;
        x += m * t;
        m *= mi128;
        x %= m;
    }
    Some((x as u64, m as u64))
}

/// Kronecker symbol `(t | n)`.
pub fn kronecker(t: i64, n: i64) -> i32 {
    if n == 0 {
        return if t.unsigned_abs() == 1 { 1 } else { 0 };
    }
    let mut a = t as i128;
    let mut n = n as i128;
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    // Factor out powers of two from n.
    let mut twos = 0;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
    }
    // Jacobi symbol (a | n) for odd positive n.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Legendre symbol for an odd prime as a residue in `{0, 1, ell - 1}`.
pub fn legendre_residue(a: i64, ell: u64) -> u64 {
    match kronecker(a, ell as i64) {
        1 => 1,
        -1 => ell - 1,
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(7_758_337_633));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn factor_roundtrip() {
        for n in [1u64, 2, 12, 360, 1_000_000_007 * 3, 600851475143] {
            let f = factor(n);
            let back: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(back, n);
            assert!(f.iter().all(|&(p, _)| is_prime(p)));
        }
        let big: u128 = 13u128.pow(22) - 1;
        let f = factor_u128(big);
        let back: u128 = f.iter().map(|&(p, e)| p.pow(e)).product();
        assert_eq!(back, big);
    }

    #[test]
    fn orders_mod_m() {
        assert_eq!(mult_order_mod(2, 5).unwrap(), 4);
        assert_eq!(mult_order_mod(4, 11).unwrap(), 5);
        assert_eq!(mult_order_mod(13, 11).unwrap(), 10);
        assert_eq!(mult_order_mod(3, 5).unwrap(), 4);
        assert!(mult_order_mod(2, 4).is_err());
    }

    #[test]
    fn kronecker_values() {
        assert_eq!(kronecker(2, 7), 1);
        assert_eq!(kronecker(5, 13), -1);
        for n in 1..50 {
            assert_eq!(kronecker(1, n), 1);
        }
        // Agrees with Euler's criterion for odd primes.
        for ell in [3i64, 5, 7, 11, 13, 17] {
            for a in -30i64..30 {
                let e = pow_mod(rem_euclid(a, ell as u64), (ell as u64 - 1) / 2, ell as u64);
                let want = if a % ell == 0 {
                    0
                } else if e == 1 {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(a, ell), want, "({a}|{ell})");
            }
        }
        assert_eq!(kronecker(-1, 8), 1);
        assert_eq!(kronecker(3, 8), -1);
        assert_eq!(kronecker(2, 4), 0);
    }

    #[test]
    fn crt_small() {
        assert_eq!(crt(&[(2, 3), (3, 5)]), Some((8, 15)));
        assert_eq!(crt(&[(1, 4), (0, 3)]), Some((9, 12)));
        assert_eq!(crt(&[(1, 4), (0, 6)]), None);
    }

    #[test]
    fn divisor_helpers() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(radical(72), 6);
        assert_eq!(split_prime_power(72, 2), (8, 9));
        assert_eq!(euler_phi(12), 4);
    }
}
