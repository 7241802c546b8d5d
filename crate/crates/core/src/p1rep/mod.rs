//! The permutation module `F{P¹(Z/M)}` over a finite field `F = F_{ℓ^d}`
//! containing the `M`-th roots of unity, with `SL2(Z/M)` acting on row
//! vectors `(c:d)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::arith::{divisors, factor, gcd, inv_mod, mul_mod, odd_prime};
use crate::algebra::{cyclotomic_field_with_root, ExtElement, ExtField};
use crate::error::{Error, Result};

/// Largest `|P¹(Z/M)|` handled.
pub const MAX_POINTS: usize = 200_000;
/// Largest residue degree `[F : F_ℓ]` handled.
pub const MAX_FIELD_DEGREE: usize = 24;

/// A point `(c:d)` in canonical form: `c = gcd(c, M)` and `d` least among
/// the representatives with that `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct P1Point {
    pub c: u64,
    pub d: u64,
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.c, self.d)
    }
}

/// `P¹(Z/M)` with its points sorted by `(c, d)`.
#[derive(Debug, Clone)]
pub struct P1Line {
    modulus: u64,
    points: Vec<P1Point>,
    index: HashMap<P1Point, usize>,
}

impl P1Line {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn points(&self) -> &[P1Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Canonical representative of the unit orbit of `(c, d)`.
    pub fn normalize(&self, c: i64, d: i64) -> Result<P1Point> {
        normalize(self.modulus, c, d)
    }

    pub fn index_of(&self, c: i64, d: i64) -> Result<usize> {
        let pt = self.normalize(c, d)?;
        Ok(self.index[&pt])
    }

    /// `σ` with `σ(x) = x·g`.
    pub fn permutation(&self, g: &Mat2) -> Result<Vec<usize>> {
        let g = g.reduce(self.modulus)?;
        let m = self.modulus as i64;
        self.points
            .iter()
            .map(|p| {
                let (c, d) = (p.c as i64, p.d as i64);
                let c2 = (c * g.a + d * g.c) % m;
                let d2 = (c * g.b + d * g.d) % m;
                self.index_of(c2, d2)
            })
            .collect()
    }
}

fn normalize(m: u64, c: i64, d: i64) -> Result<P1Point> {
    if m == 1 {
        return Ok(P1Point { c: 0, d: 0 });
    }
    let mi = m as i64;
    let (c, d) = (c.rem_euclid(mi) as u64, d.rem_euclid(mi) as u64);
    let g = gcd(c, m);
    if gcd(g, d) != 1 {
        return Err(Error::Usage(format!(
            "({c}, {d}) is not unimodular mod {m}"
        )));
    }
    let n = m / g;
    // A unit u0 with u0·c ≡ g: invert c/g mod M/g and lift to a unit mod M.
    let cg = (c / g) % n;
    let base = if n == 1 {
        1
    } else {
        inv_mod(cg, n).expect("c/g is a unit mod M/g")
    };
    let u0 = (0..g)
        .map(|t| base + t * n)
        .find(|&u| gcd(u, m) == 1)
        .expect("units lift along Z/M → Z/(M/g)");
    let d0 = mul_mod(u0, d, m);
    // Remaining freedom: units u ≡ 1 (mod M/g).
    let best = (0..g)
        .map(|t| 1 + t * n)
        .filter(|&u| gcd(u, m) == 1)
        .map(|u| mul_mod(u, d0, m))
        .min()
        .expect("u = 1 qualifies");
    Ok(P1Point { c: g % m, d: best })
}

/// `|P¹(Z/M)| = M ∏_{p | M} (1 + 1/p)`.
pub fn p1_size(m: u64) -> u64 {
    factor(m).iter().fold(m, |acc, &(p, _)| acc / p * (p + 1))
}

/// Enumerates `P¹(Z/M)` in canonical order.
pub fn p1_enumerate(m: u64) -> Result<Arc<P1Line>> {
    if m == 0 {
        return Err(Error::Usage("modulus must be positive".into()));
    }
    if p1_size(m) as usize > MAX_POINTS {
        return Err(Error::Unsupported(format!(
            "|P1(Z/{m})| exceeds {MAX_POINTS}"
        )));
    }
    let mut points = Vec::new();
    if m == 1 {
        points.push(P1Point { c: 0, d: 0 });
    } else {
        for g in divisors(m) {
            for d in 0..m {
                if gcd(g, d) != 1 {
                    continue;
                }
                let p = normalize(m, g as i64, d as i64)?;
                if p.d == d {
                    points.push(p);
                }
            }
        }
    }
    points.sort();
    points.dedup();
    debug_assert_eq!(points.len() as u64, p1_size(m));
    let index = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    Ok(Arc::new(P1Line {
        modulus: m,
        points,
        index,
    }))
}

/// A 2×2 integer matrix acting on row vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };
    pub const S: Mat2 = Mat2 {
        a: 0,
        b: -1,
        c: 1,
        d: 0,
    };
    pub const T: Mat2 = Mat2 {
        a: 1,
        b: 1,
        c: 0,
        d: 1,
    };

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Entries reduced into `[0, M)`; errors unless `det ≡ 1 (mod M)`.
    pub fn reduce(&self, m: u64) -> Result<Mat2> {
        let mi = m as i64;
        let r = Mat2 {
            a: self.a.rem_euclid(mi),
            b: self.b.rem_euclid(mi),
            c: self.c.rem_euclid(mi),
            d: self.d.rem_euclid(mi),
        };
        let det =
            ((r.a as i128 * r.d as i128 - r.b as i128 * r.c as i128).rem_euclid(mi as i128)) as i64;
        if det != 1 % mi {
            return Err(Error::Usage(format!(
                "matrix {self:?} has determinant {det} mod {m}"
            )));
        }
        Ok(r)
    }
}

/// A vector of `F{P¹(Z/M)}` with raw coefficients in `F`.
#[derive(Debug, Clone)]
pub struct P1Vector {
    pub line: Arc<P1Line>,
    pub field: Arc<ExtField>,
    pub coeffs: Vec<Vec<u64>>,
}

impl P1Vector {
    pub fn zero(line: &Arc<P1Line>, field: &Arc<ExtField>) -> Self {
        P1Vector {
            line: line.clone(),
            field: field.clone(),
            coeffs: vec![field.zero_raw(); line.len()],
        }
    }

    /// `v = Σ_x x`.
    pub fn invariant(line: &Arc<P1Line>, field: &Arc<ExtField>) -> Self {
        P1Vector {
            line: line.clone(),
            field: field.clone(),
            coeffs: vec![field.one_raw(); line.len()],
        }
    }

    pub fn coeff(&self, i: usize) -> ExtElement {
        ExtElement::from_raw(&self.field, self.coeffs[i].clone())
    }

    /// Sum of all coordinates (the augmentation).
    pub fn augmentation(&self) -> ExtElement {
        let mut acc = self.field.zero_raw();
        for c in &self.coeffs {
            self.field.add_assign_raw(&mut acc, c);
        }
        ExtElement::from_raw(&self.field, acc)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| ExtField::is_zero_raw(c))
    }

    pub fn support(&self) -> usize {
        self.coeffs
            .iter()
            .filter(|c| !ExtField::is_zero_raw(c))
            .count()
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_context(o)?;
        Ok(P1Vector {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| self.field.add_raw(a, b))
                .collect(),
            ..self.clone()
        })
    }

    pub fn scale(&self, s: &ExtElement) -> Self {
        P1Vector {
            coeffs: self
                .coeffs
                .iter()
                .map(|a| self.field.mul_raw(a, s.coeffs()))
                .collect(),
            ..self.clone()
        }
    }

    fn same_context(&self, o: &Self) -> Result<()> {
        if self.line.modulus != o.line.modulus || self.field != o.field {
            return Err(Error::DomainMismatch(format!(
                "P1 vectors mod {} over {:?} vs mod {} over {:?}",
                self.line.modulus,
                self.field.modulus(),
                o.line.modulus,
                o.field.modulus()
            )));
        }
        Ok(())
    }

    fn permuted(&self, sigma: &[usize]) -> Self {
        let mut coeffs = vec![self.field.zero_raw(); self.coeffs.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[sigma[i]] = c.clone();
        }
        P1Vector {
            coeffs,
            ..self.clone()
        }
    }
}

impl PartialEq for P1Vector {
    fn eq(&self, o: &Self) -> bool {
        self.line.modulus == o.line.modulus && self.field == o.field && self.coeffs == o.coeffs
    }
}

/// `v·g`: the coefficient at `x` moves to `x·g`.
pub fn act(v: &P1Vector, g: &Mat2) -> Result<P1Vector> {
    Ok(v.permuted(&v.line.permutation(g)?))
}

/// The field `F_ℓ(ζ_M)` and `ζ_M`, with the degree cap enforced.
pub fn root_field(ell: u64, m: u64) -> Result<(Arc<ExtField>, ExtElement)> {
    odd_prime(ell)?;
    if gcd(ell, m) != 1 {
        return Err(Error::RamifiedModulus { ell, modulus: m });
    }
    let ord = crate::algebra::arith::mult_order_mod(ell % m.max(1), m.max(1))? as usize;
    if ord > MAX_FIELD_DEGREE {
        return Err(Error::Unsupported(format!(
            "F_{ell}(zeta_{m}) has degree {ord} > {MAX_FIELD_DEGREE}"
        )));
    }
    cyclotomic_field_with_root(ell, m)
}

/// `Σ_{h mod M} ζ^{−hβ} (1:h)` with `ζ` of order `M`.
pub fn tm_vector(m: u64, beta: i64, ell: u64) -> Result<P1Vector> {
    let line = p1_enumerate(m)?;
    let (field, zeta) = root_field(ell, m)?;
    tm_vector_in(&line, &field, &zeta, m, beta)
}

/// `Σ_{h mod M'} ζ^{−hβ} (1:h)` on `P¹(Z/M')` for a root `ζ` of order
/// `order`; `order·h·β` must only depend on `h mod M'`, i.e.
/// `order | M'·β`.
pub fn tm_vector_in(
    line: &Arc<P1Line>,
    field: &Arc<ExtField>,
    zeta: &ExtElement,
    order: u64,
    beta: i64,
) -> Result<P1Vector> {
    let mp = line.modulus();
    let b = beta.rem_euclid(order as i64) as u64;
    if !(mp as u128 * b as u128).is_multiple_of(order as u128) {
        return Err(Error::Usage(format!(
            "exponent h*{beta} mod {order} is not well defined for h mod {mp}"
        )));
    }
    let mut v = P1Vector::zero(line, field);
    let zinv = zeta.inv()?;
    let step = zinv.pow(b as u128);
    let mut cur = ExtElement::one(field);
    for h in 0..mp {
        let i = line.index_of(1, h as i64)?;
        v.coeffs[i] = field.add_raw(&v.coeffs[i], cur.coeffs());
        cur = cur.mul(&step);
    }
    Ok(v)
}

/// A subspace in reduced row echelon form.
#[derive(Debug, Clone)]
pub struct Submodule {
    pub line: Arc<P1Line>,
    pub field: Arc<ExtField>,
    rows: Vec<(usize, Vec<Vec<u64>>)>,
}

impl Submodule {
    pub fn empty(line: &Arc<P1Line>, field: &Arc<ExtField>) -> Self {
        Submodule {
            line: line.clone(),
            field: field.clone(),
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> Vec<P1Vector> {
        self.rows
            .iter()
            .map(|(_, r)| P1Vector {
                line: self.line.clone(),
                field: self.field.clone(),
                coeffs: r.clone(),
            })
            .collect()
    }

    fn reduce(&self, v: &mut [Vec<u64>]) {
        let f = &self.field;
        for (piv, row) in &self.rows {
            if ExtField::is_zero_raw(&v[*piv]) {
                continue;
            }
            let s = v[*piv].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !ExtField::is_zero_raw(r) {
                    *x = f.sub_raw(x, &f.mul_raw(&s, r));
                }
            }
        }
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &P1Vector) -> Result<bool> {
        self.check(v)?;
        let f = self.field.clone();
        let mut w = v.coeffs.clone();
        self.reduce(&mut w);
        let Some(piv) = w.iter().position(|c| !ExtField::is_zero_raw(c)) else {
            return Ok(false);
        };
        let inv = f.inv_raw(&w[piv])?;
        for x in w.iter_mut() {
            *x = f.mul_raw(x, &inv);
        }
        for (_, row) in self.rows.iter_mut() {
            if ExtField::is_zero_raw(&row[piv]) {
                continue;
            }
            let s = row[piv].clone();
            for (x, r) in row.iter_mut().zip(&w) {
                if !ExtField::is_zero_raw(r) {
                    *x = f.sub_raw(x, &f.mul_raw(&s, r));
                }
            }
        }
        let pos = self.rows.partition_point(|(p, _)| *p < piv);
        self.rows.insert(pos, (piv, w));
        Ok(true)
    }

    pub fn contains(&self, v: &P1Vector) -> Result<bool> {
        self.check(v)?;
        let mut w = v.coeffs.clone();
        self.reduce(&mut w);
        Ok(w.iter().all(|c| ExtField::is_zero_raw(c)))
    }

    fn check(&self, v: &P1Vector) -> Result<()> {
        if v.line.modulus() != self.line.modulus() || v.field != self.field {
            return Err(Error::DomainMismatch(format!(
                "vector mod {} does not match submodule mod {}",
                v.line.modulus(),
                self.line.modulus()
            )));
        }
        Ok(())
    }

    /// True if `S` and `T` map the subspace into itself.
    pub fn is_stable(&self) -> Result<bool> {
        let s = self.line.permutation(&Mat2::S)?;
        let t = self.line.permutation(&Mat2::T)?;
        for b in self.basis() {
            if !self.contains(&b.permuted(&s))? || !self.contains(&b.permuted(&t))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The least `S`,`T`-stable subspace containing the seeds.
pub fn generate_submodule(seeds: &[P1Vector]) -> Result<Submodule> {
    let first = seeds
        .first()
        .ok_or_else(|| Error::Usage("generate_submodule needs at least one seed".into()))?;
    let mut sub = Submodule::empty(&first.line, &first.field);
    let s = first.line.permutation(&Mat2::S)?;
    let t = first.line.permutation(&Mat2::T)?;
    let mut work: Vec<P1Vector> = Vec::new();
    for v in seeds {
        if sub.insert(v)? {
            work.push(v.clone());
        }
    }
    while let Some(v) = work.pop() {
        for sigma in [&s, &t] {
            let w = v.permuted(sigma);
            if sub.insert(&w)? {
                work.push(w);
            }
        }
    }
    if !sub.is_stable()? {
        return Err(Error::Hypothesis(
            "closure is not stable under S and T".into(),
        ));
    }
    Ok(sub)
}

/// The augmentation kernel of `F{P¹(F_p)}` over `F_ℓ(ζ_p)`.
pub fn steinberg_subspace(p: u64, ell: u64) -> Result<Submodule> {
    if !crate::algebra::arith::is_prime(p) {
        return Err(Error::Usage(format!("{p} is not prime")));
    }
    if p == ell {
        return Err(Error::Usage(format!("p = {p} equals ell")));
    }
    let line = p1_enumerate(p)?;
    let (field, _) = root_field(ell, p)?;
    let mut sub = Submodule::empty(&line, &field);
    let last = line.len() - 1;
    for i in 0..last {
        let mut v = P1Vector::zero(&line, &field);
        v.coeffs[i] = field.one_raw();
        v.coeffs[last] = field.neg_raw(&field.one_raw());
        sub.insert(&v)?;
    }
    Ok(sub)
}

pub fn membership(v: &P1Vector, w: &Submodule) -> Result<bool> {
    w.contains(v)
}

/// Index maps between `P¹(Z/M)` and `∏ P¹(Z/M_p)`.
#[derive(Debug, Clone)]
pub struct CrtSplit {
    pub line: Arc<P1Line>,
    /// `(M_p, P¹(Z/M_p))` for each prime `p | M`, ascending.
    pub factors: Vec<(u64, Arc<P1Line>)>,
    /// For each point of `P¹(Z/M)`, its component indices.
    pub to_product: Vec<Vec<usize>>,
    pub from_product: HashMap<Vec<usize>, usize>,
}

impl CrtSplit {
    /// Idempotent `1_p`: `≡ 1 (mod M_p)`, `≡ 0 (mod M/M_p)`.
    pub fn idempotent(&self, i: usize) -> u64 {
        let m = self.line.modulus();
        let mp = self.factors[i].0;
        let rest = m / mp;
        mul_mod(rest, inv_mod(rest % mp, mp).unwrap_or(0), m)
    }

    /// Coefficientwise outer product of one vector per factor.
    pub fn outer(&self, parts: &[P1Vector]) -> Result<P1Vector> {
        if parts.len() != self.factors.len() {
            return Err(Error::Usage(
                "one vector per prime factor is required".into(),
            ));
        }
        let field = parts[0].field.clone();
        let mut v = P1Vector::zero(&self.line, &field);
        for (i, idx) in self.to_product.iter().enumerate() {
            let mut acc = field.one_raw();
            for (part, &j) in parts.iter().zip(idx) {
                acc = field.mul_raw(&acc, &part.coeffs[j]);
            }
            v.coeffs[i] = acc;
        }
        Ok(v)
    }

    /// `tm_vector(M, β)` split into its factors `Σ_{h mod M_p} e(−hβ_p/M)(1:h)`
    /// with `β_p = β·1_p`, all over the field of `ζ_M`.
    pub fn tm_factors(
        &self,
        beta: i64,
        field: &Arc<ExtField>,
        zeta: &ExtElement,
    ) -> Result<Vec<P1Vector>> {
        let m = self.line.modulus();
        (0..self.factors.len())
            .map(|i| {
                let bp = (beta.rem_euclid(m as i64) as u128 * self.idempotent(i) as u128
                    % m as u128) as i64;
                tm_vector_in(&self.factors[i].1, field, zeta, m, bp)
            })
            .collect()
    }
}

pub fn crt_split(m: u64) -> Result<CrtSplit> {
    let line = p1_enumerate(m)?;
    let factors: Vec<(u64, Arc<P1Line>)> = factor(m)
        .into_iter()
        .map(|(p, e)| {
            let mp = p.pow(e);
            Ok((mp, p1_enumerate(mp)?))
        })
        .collect::<Result<_>>()?;
    let mut to_product = Vec::with_capacity(line.len());
    let mut from_product = HashMap::with_capacity(line.len());
    for (i, pt) in line.points().iter().enumerate() {
        let idx: Vec<usize> = factors
            .iter()
            .map(|(mp, l)| l.index_of((pt.c % mp) as i64, (pt.d % mp) as i64))
            .collect::<Result<_>>()?;
        from_product.insert(idx.clone(), i);
        to_product.push(idx);
    }
    let product: usize = factors.iter().map(|(_, l)| l.len()).product();
    if from_product.len() != line.len() || product != line.len() {
        return Err(Error::Hypothesis(format!(
            "CRT split of P1(Z/{m}) is not bijective"
        )));
    }
    Ok(CrtSplit {
        line,
        factors,
        to_product,
        from_product,
    })
}

/// Image of `v ∈ F{P¹(Z/M')}` in `F{P¹(Z/M)}`: each point goes to the sum
/// of the points above it.
pub fn lift_vector(v: &P1Vector, m: u64) -> Result<P1Vector> {
    let mp = v.line.modulus();
    if !m.is_multiple_of(mp) {
        return Err(Error::Usage(format!("{mp} does not divide {m}")));
    }
    let line = p1_enumerate(m)?;
    let mut out = P1Vector::zero(&line, &v.field);
    for (i, pt) in line.points().iter().enumerate() {
        let j = v.line.index_of((pt.c % mp) as i64, (pt.d % mp) as i64)?;
        out.coeffs[i] = v.coeffs[j].clone();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Orbits of unimodular pairs under unit scaling, by brute force.
    fn orbit_count(m: u64) -> usize {
        let units: Vec<u64> = (1..=m).filter(|&u| gcd(u % m, m) == 1 || m == 1).collect();
        let mut seen = HashSet::new();
        let mut count = 0;
        for c in 0..m {
            for d in 0..m {
                if gcd(gcd(c, d), m) != 1 || seen.contains(&(c, d)) {
                    continue;
                }
                count += 1;
                for &u in &units {
                    seen.insert((u * c % m, u * d % m));
                }
            }
        }
        count.max(1)
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(p1_enumerate(1).unwrap().len(), 1);
        assert_eq!(p1_enumerate(7).unwrap().len(), 8);
        assert_eq!(p1_enumerate(12).unwrap().len(), 24);
        for m in 1..=60 {
            let n = p1_enumerate(m).unwrap().len();
            assert_eq!(n as u64, p1_size(m));
            assert_eq!(n, orbit_count(m), "M = {m}");
        }
    }

    #[test]
    fn normalization_is_orbit_invariant() {
        for m in [8u64, 12, 18, 25, 30] {
            for c in 0..m as i64 {
                for d in 0..m as i64 {
                    if gcd(gcd(c as u64, d as u64), m) != 1 {
                        continue;
                    }
                    let p = normalize(m, c, d).unwrap();
                    for u in 1..m as i64 {
                        if gcd(u as u64, m) == 1 {
                            assert_eq!(normalize(m, u * c, u * d).unwrap(), p);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn action_basics() {
        let line = p1_enumerate(5).unwrap();
        let (field, _) = root_field(3, 5).unwrap();
        let mut v = P1Vector::zero(&line, &field);
        for i in 0..line.len() {
            v.coeffs[i] = field.from_int_raw(i as i64);
        }
        assert_eq!(act(&v, &Mat2::IDENTITY).unwrap(), v);
        assert_eq!(act(&act(&v, &Mat2::S).unwrap(), &Mat2::S).unwrap(), v);
        let g = Mat2::S.mul(&Mat2::T);
        assert_eq!(
            act(&act(&v, &Mat2::S).unwrap(), &Mat2::T).unwrap(),
            act(&v, &g).unwrap()
        );
        // T-orbit of (1:0).
        let t = line.permutation(&Mat2::T).unwrap();
        let start = line.index_of(1, 0).unwrap();
        let mut x = t[start];
        let mut size = 1;
        while x != start {
            x = t[x];
            size += 1;
        }
        assert_eq!(size, 5);
        assert!(act(
            &v,
            &Mat2 {
                a: 2,
                b: 0,
                c: 0,
                d: 2
            }
        )
        .is_err());
    }

    #[test]
    fn tm_vector_shapes() {
        let v = tm_vector(5, 1, 3).unwrap();
        assert_eq!(v.support(), 5);
        assert_eq!(v.field.degree(), 4);
        let vals: HashSet<Vec<u64>> = v
            .coeffs
            .iter()
            .filter(|c| !ExtField::is_zero_raw(c))
            .cloned()
            .collect();
        assert_eq!(vals.len(), 5);
        assert!(v.augmentation().is_zero());
        let w = tm_vector(6, 0, 5).unwrap();
        assert_eq!(w.support(), 6);
        assert!(matches!(
            tm_vector(6, 1, 3),
            Err(Error::RamifiedModulus { .. })
        ));
    }

    #[test]
    fn steinberg_dimensions() {
        for (p, ell) in [(5u64, 3u64), (5, 7), (7, 3), (11, 5), (2, 3)] {
            let st = steinberg_subspace(p, ell).unwrap();
            assert_eq!(st.dim() as u64, p);
            let line = p1_enumerate(p).unwrap();
            let inv = P1Vector::invariant(&line, &st.field);
            assert_eq!(membership(&inv, &st).unwrap(), (p + 1) % ell == 0);
            for beta in 0..p as i64 {
                let v = tm_vector(p, beta, ell).unwrap();
                let dim = generate_submodule(&[v]).unwrap().dim() as u64;
                assert_eq!(
                    dim,
                    if beta == 0 { p + 1 } else { p },
                    "p={p} ell={ell} beta={beta}"
                );
            }
        }
        let line = p1_enumerate(7).unwrap();
        let (field, _) = root_field(3, 7).unwrap();
        assert_eq!(
            generate_submodule(&[P1Vector::invariant(&line, &field)])
                .unwrap()
                .dim(),
            1
        );
    }

    #[test]
    fn two_adic_shifts() {
        for ell in [3u64, 5, 7] {
            for beta in [1i64, 3] {
                let w = generate_submodule(&[tm_vector(4, beta, ell).unwrap()]).unwrap();
                assert!(membership(&tm_vector(4, beta + 2, ell).unwrap(), &w).unwrap());
            }
            for beta in [1i64, 3, 5, 7] {
                let w = generate_submodule(&[tm_vector(8, beta, ell).unwrap()]).unwrap();
                for s in [2, 4, 6] {
                    assert!(membership(&tm_vector(8, beta + s, ell).unwrap(), &w).unwrap());
                }
            }
        }
    }

    #[test]
    fn crt_outer_product() {
        let split = crt_split(15).unwrap();
        assert_eq!(split.line.len(), 24);
        assert_eq!(
            split.factors.iter().map(|f| f.1.len()).collect::<Vec<_>>(),
            vec![4, 6]
        );
        let (field, zeta) = root_field(7, 15).unwrap();
        for beta in 0..15 {
            let whole = tm_vector_in(&split.line, &field, &zeta, 15, beta).unwrap();
            let parts = split.tm_factors(beta, &field, &zeta).unwrap();
            assert_eq!(split.outer(&parts).unwrap(), whole, "beta = {beta}");
        }
        let single = crt_split(9).unwrap();
        assert!(single
            .to_product
            .iter()
            .enumerate()
            .all(|(i, v)| v == &vec![i]));
    }

    #[test]
    fn lifting() {
        let small = p1_enumerate(2).unwrap();
        let (field, _) = root_field(3, 8).unwrap();
        let inv = P1Vector::invariant(&small, &field);
        let lifted = lift_vector(&inv, 8).unwrap();
        assert_eq!(
            lifted,
            P1Vector::invariant(&p1_enumerate(8).unwrap(), &field)
        );
        let mut v = P1Vector::zero(&small, &field);
        v.coeffs[0] = field.from_int_raw(1);
        v.coeffs[1] = field.from_int_raw(2);
        let words = [
            Mat2::S,
            Mat2::T,
            Mat2::S.mul(&Mat2::T),
            Mat2::T.mul(&Mat2::T).mul(&Mat2::S),
        ];
        let mut g = Mat2::IDENTITY;
        for i in 0..20 {
            g = g.mul(&words[i % words.len()]);
            let lhs = lift_vector(&act(&v, &g).unwrap(), 8).unwrap();
            let rhs = act(&lift_vector(&v, 8).unwrap(), &g).unwrap();
            assert_eq!(lhs, rhs);
        }
        assert!(lift_vector(&v, 9).is_err());
    }
}
