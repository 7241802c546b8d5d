//! Exact convolution of residue sequences through three NTT primes and CRT.
//!
//! Inputs are residues mod `ℓ < 2^31`; the exact integer convolution is
//! bounded by `n·ℓ²`, which stays below the product of the three primes for
//! every length the transform supports (`2^23`).

const PRIMES: [u32; 3] = [998_244_353, 167_772_161, 469_762_049];
const ROOT: u32 = 3;
pub const MAX_LEN: usize = 1 << 23;

/// Montgomery arithmetic modulo an odd prime below `2^30`, `R = 2^32`.
#[derive(Clone, Copy)]
struct Mont {
    m: u32,
    /// `-m^{-1} mod 2^32`
    m_neg_inv: u32,
    /// `R^2 mod m`
    r2: u32,
}

impl Mont {
    fn new(m: u32) -> Self {
        let mut inv: u32 = 1;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u32.wrapping_sub(m.wrapping_mul(inv)));
        }
        let r = (1u64 << 32) % m as u64;
        Mont {
            m,
            m_neg_inv: inv.wrapping_neg(),
            r2: (r * r % m as u64) as u32,
        }
    }

    #[inline(always)]
    fn reduce(&self, t: u64) -> u32 {
        let u = (t as u32).wrapping_mul(self.m_neg_inv);
        let r = ((t + u as u64 * self.m as u64) >> 32) as u32;
        if r >= self.m {
            r - self.m
        } else {
            r
        }
    }

    #[inline(always)]
    fn mul(&self, a: u32, b: u32) -> u32 {
        self.reduce(a as u64 * b as u64)
    }

    fn to_mont(&self, a: u32) -> u32 {
        self.mul(a % self.m, self.r2)
    }

    fn from_mont(&self, a: u32) -> u32 {
        self.reduce(a as u64)
    }

    fn pow(&self, mut b: u32, mut e: u64) -> u32 {
        let mut acc = self.to_mont(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    #[inline(always)]
    fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }
}

/// Twiddle tables: `tw[half + k] = w_len^k` for each power-of-two `len`.
fn twiddles(mt: &Mont, n: usize, invert: bool) -> Vec<u32> {
    let mut tw = vec![0u32; n.max(2)];
    let mut half = 1;
    while half < n {
        let len = 2 * half;
        let mut w = mt.pow(mt.to_mont(ROOT), (mt.m as u64 - 1) / len as u64);
        if invert {
            w = mt.pow(w, mt.m as u64 - 2);
        }
        let mut t = mt.to_mont(1);
        for k in 0..half {
            tw[half + k] = t;
            t = mt.mul(t, w);
        }
        half = len;
    }
    tw
}

/// Decimation-in-frequency transform; output is in bit-reversed order.
fn ntt_dif(a: &mut [u32], tw: &[u32], mt: &Mont) {
    let n = a.len();
    let mut half = n / 2;
    while half >= 1 {
        let w = &tw[half..2 * half];
        for chunk in a.chunks_mut(2 * half) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((x, y), &t) in lo.iter_mut().zip(hi.iter_mut()).zip(w) {
                let (u, v) = (*x, *y);
                *x = mt.add(u, v);
                *y = mt.mul(mt.sub(u, v), t);
            }
        }
        half /= 2;
    }
}

/// Decimation-in-time transform taking bit-reversed input to natural order.
fn ntt_dit(a: &mut [u32], tw: &[u32], mt: &Mont) {
    let n = a.len();
    let mut half = 1;
    while half < n {
        let w = &tw[half..2 * half];
        for chunk in a.chunks_mut(2 * half) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((x, y), &t) in lo.iter_mut().zip(hi.iter_mut()).zip(w) {
                let u = *x;
                let v = mt.mul(*y, t);
                *x = mt.add(u, v);
                *y = mt.sub(u, v);
            }
        }
        half *= 2;
    }
}

fn convolve_prime(a: &[u64], b: Option<&[u64]>, size: usize, m: u32) -> Vec<u32> {
    let mt = Mont::new(m);
    let load = |src: &[u64]| {
        let mut f = vec![0u32; size];
        for (x, &y) in f.iter_mut().zip(src) {
            *x = mt.to_mont((y % m as u64) as u32);
        }
        f
    };
    let fwd = twiddles(&mt, size, false);
    let mut fa = load(a);
    ntt_dif(&mut fa, &fwd, &mt);
    match b {
        Some(b) => {
            let mut fb = load(b);
            ntt_dif(&mut fb, &fwd, &mt);
            for (x, y) in fa.iter_mut().zip(&fb) {
                *x = mt.mul(*x, *y);
            }
        }
        None => {
            for x in fa.iter_mut() {
                *x = mt.mul(*x, *x);
            }
        }
    }
    drop(fwd);
    let inv = twiddles(&mt, size, true);
    ntt_dit(&mut fa, &inv, &mt);
    let inv_n = mt.pow(mt.to_mont(size as u32), m as u64 - 2);
    for x in fa.iter_mut() {
        *x = mt.from_mont(mt.mul(*x, inv_n));
    }
    fa
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// First `out_len` coefficients of `a * b` mod `modulus < 2^31` (any
/// modulus, not only primes), choosing between a sparse schoolbook loop, a
/// dense schoolbook loop and the NTT by estimated cost.
pub fn convolve_auto(a: &[u64], b: &[u64], out_len: usize, modulus: u64) -> Vec<u64> {
    let a = &a[..a.len().min(out_len)];
    let b = &b[..b.len().min(out_len)];
    let nz = |v: &[u64]| -> Vec<(usize, u64)> {
        v.iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| (i, x))
            .collect()
    };
    let (sa, sb) = (nz(a), nz(b));
    let full = (a.len() + b.len()).max(2);
    let size = full.next_power_of_two();
    let ntt_cost = 9 * size as u128 * size.trailing_zeros() as u128;
    let sparse_cost = sa.len() as u128 * sb.len() as u128;
    if sparse_cost <= ntt_cost || full > MAX_LEN {
        let mut acc = vec![0u128; out_len];
        for &(i, x) in &sa {
            for &(j, y) in &sb {
                if i + j >= out_len {
                    break;
                }
                acc[i + j] += (x * y) as u128;
            }
        }
        let m = modulus as u128;
        return acc.into_iter().map(|c| (c % m) as u64).collect();
    }
    convolve_mod(a, if std::ptr::eq(a, b) { a } else { b }, out_len, modulus)
}

/// First `out_len` coefficients of `a * b`, reduced mod `ell`.
pub fn convolve_mod(a: &[u64], b: &[u64], out_len: usize, ell: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() || out_len == 0 {
        return vec![0; out_len];
    }
    let same = std::ptr::eq(a, b);
    let a = &a[..a.len().min(out_len)];
    let b = &b[..b.len().min(out_len)];
    let full = a.len() + b.len() - 1;
    let size = full.next_power_of_two();
    assert!(
        size <= MAX_LEN,
        "convolution length {full} exceeds NTT limit"
    );
    let b_opt = if same { None } else { Some(b) };

    let (r0, (r1, r2)) = rayon::join(
        || convolve_prime(a, b_opt, size, PRIMES[0]),
        || {
            rayon::join(
                || convolve_prime(a, b_opt, size, PRIMES[1]),
                || convolve_prime(a, b_opt, size, PRIMES[2]),
            )
        },
    );

    // Garner reconstruction of the exact value, then reduction mod ell.
    let (p0, p1, p2) = (PRIMES[0] as u64, PRIMES[1] as u64, PRIMES[2] as u64);
    let inv_p0_mod_p1 = pow_mod(p0 % p1, p1 - 2, p1);
    let p0p1_mod_p2 = (p0 as u128 * p1 as u128 % p2 as u128) as u64;
    let inv_p0p1_mod_p2 = pow_mod(p0p1_mod_p2, p2 - 2, p2);
    let ell128 = ell as u128;
    let p0p1_mod_ell = (p0 as u128 * p1 as u128 % ell128) as u64;
    let p0_mod_p2 = p0 % p2;

    let n = out_len.min(full);
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x0 = r0[i] as u64;
            let x1 = r1[i] as u64;
            let x2 = r2[i] as u64;
            let t1 = (x1 + p1 - x0 % p1) % p1 * inv_p0_mod_p1 % p1;
            // v01 = x0 + p0·t1 < p0·p1 < 2^58
            let v01 = x0 + p0 * t1;
            let v01_mod_p2 = (x0 % p2 + p0_mod_p2 * t1 % p2) % p2;
            let t2 = (x2 + p2 - v01_mod_p2) % p2 * inv_p0p1_mod_p2 % p2;
            ((v01 as u128 % ell128 + t2 as u128 * p0p1_mod_ell as u128) % ell128) as u64
        })
        .collect();
    out.resize(out_len, 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(a: &[u64], b: &[u64], n: usize, ell: u64) -> Vec<u64> {
        let mut out = vec![0u64; n];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                if i + j < n {
                    out[i + j] =
                        ((out[i + j] as u128 + x as u128 * y as u128) % ell as u128) as u64;
                }
            }
        }
        out
    }

    #[test]
    fn matches_schoolbook() {
        for ell in [3u64, 13, 2_147_483_647] {
            let a: Vec<u64> = (0..300u64).map(|i| (i * i * 7919 + 3) % ell).collect();
            let b: Vec<u64> = (0..257u64).map(|i| (i * 104_729 + 11) % ell).collect();
            for n in [1, 100, 556, 700] {
                assert_eq!(convolve_mod(&a, &b, n, ell), naive(&a, &b, n, ell));
                assert_eq!(convolve_mod(&a, &a, n, ell), naive(&a, &a, n, ell));
            }
        }
    }

    #[test]
    fn montgomery_round_trip() {
        for &m in &PRIMES {
            let mt = Mont::new(m);
            for a in [0u32, 1, 2, m - 1, 123_456_789 % m] {
                assert_eq!(mt.from_mont(mt.to_mont(a)), a);
                let b = 987_654_321 % m;
                let want = (a as u64 * b as u64 % m as u64) as u32;
                assert_eq!(mt.from_mont(mt.mul(mt.to_mont(a), mt.to_mont(b))), want);
            }
        }
    }
}
