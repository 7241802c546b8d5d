//! Decomposition of a level-one form mod `ℓ` into `T_p`-eigencomponents.

use std::sync::Arc;

use crate::algebra::linalg::{self, Matrix};
use crate::algebra::poly::{self, Poly};
use crate::algebra::{ExtElement, ExtField};
use crate::error::{need_precision, Error, Result};
use crate::forms::{level_one_basis, LevelOneBasis};
use crate::heckeops::{hecke_tp, hecke_tp_with, is_eigen, HeckeContext};
use crate::qseries::{CoeffRing, ExtRing, ExtSeries, ModSeries};

/// One `T_p`-eigencomponent. Eigenvalues outside `F_ℓ` come with their
/// Frobenius conjugates as separate components over the same field.
#[derive(Debug, Clone)]
pub struct EigenComponent {
    pub eigenvalue: ExtElement,
    /// Minimal polynomial of the eigenvalue over `F_ℓ`.
    pub factor: Poly,
    /// Multiplicity of `factor` in the characteristic polynomial.
    pub multiplicity: usize,
    /// Coordinates in the echelon basis.
    pub coordinates: Vec<ExtElement>,
    pub series: ExtSeries,
}

impl EigenComponent {
    pub fn field(&self) -> &Arc<ExtField> {
        self.eigenvalue.field()
    }

    /// The component mod `ℓ`, if its coefficients lie in `F_ℓ`.
    pub fn to_mod_series(&self) -> Option<ModSeries> {
        let ell = self.field().ell();
        let coeffs: Option<Vec<u64>> = self
            .series
            .coeffs()
            .iter()
            .map(|c| c.iter().skip(1).all(|&x| x == 0).then_some(c[0]))
            .collect();
        ModSeries::from_residues(ell, coeffs?).ok()
    }

    /// True when every coefficient at `q^n`, `n ≥ 1`, vanishes.
    pub fn is_constant(&self) -> bool {
        self.series
            .coeffs()
            .iter()
            .skip(1)
            .all(|c| ExtField::is_zero_raw(c))
    }

    pub fn coeff_is_zero(&self, n: i64) -> Result<bool> {
        Ok(ExtField::is_zero_raw(&self.series.coeff(n)?))
    }
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub p: u64,
    pub weight: i64,
    pub ell: u64,
    /// Row `j` holds the coordinates of `T_p b_j`.
    pub hecke_matrix: Matrix,
    pub char_poly: Poly,
    pub min_poly: Poly,
    pub components: Vec<EigenComponent>,
}

impl Decomposition {
    /// Sum of all components, folded back to `F_ℓ`.
    pub fn sum(&self, precision: i64) -> Result<ModSeries> {
        let ring = crate::qseries::ResidueRing::new(self.ell)?;
        let mut acc = ModSeries::zero(ring, 1, 0, precision);
        let mut i = 0;
        while i < self.components.len() {
            let first = &self.components[i];
            let deg = first.factor.len() - 1;
            let mut group = first.series.clone();
            for c in &self.components[i + 1..i + deg] {
                group = group.add(&c.series)?;
            }
            let rational = EigenComponent {
                series: group,
                ..first.clone()
            }
            .to_mod_series()
            .ok_or_else(|| {
                Error::Hypothesis("conjugate components do not sum into F_ell".into())
            })?;
            acc = acc.add(&rational)?;
            i += deg;
        }
        Ok(acc)
    }
}

/// The matrix of `T_p` on the echelon basis of `M_k` mod `ℓ`, acting on
/// row vectors.
pub fn hecke_matrix(basis: &LevelOneBasis, p: u64) -> Result<Matrix> {
    let ctx = HeckeContext::level_one(basis.weight);
    need_precision(p as i64 * basis.dim() as i64, basis.precision())?;
    basis
        .basis
        .iter()
        .map(|b| basis.coordinates(&hecke_tp(b, p, &ctx)?))
        .collect()
}

/// Splits `f ∈ M_k` mod `ℓ` into `T_p`-eigencomponents. The minimal
/// polynomial of `T_p` must be squarefree; each component is checked
/// against its eigen-equation and the components are checked to sum to `f`.
pub fn eigen_decompose(f: &ModSeries, p: u64, k: i64) -> Result<Decomposition> {
    let ell = f.ell();
    if !crate::algebra::arith::is_prime(p) {
        return Err(Error::Usage(format!("{p} is not prime")));
    }
    if p == ell {
        return Err(Error::Usage(format!("p = {p} equals ell")));
    }
    let precision = f.precision();
    let basis = level_one_basis(k, ell, precision)?;
    let x = basis.coordinates(f)?;
    let a = hecke_matrix(&basis, p)?;
    let char_poly = linalg::char_poly(&a, ell);
    let min_poly = linalg::min_poly(&a, ell);
    if let Some(rep) = poly::repeated_factor(&min_poly, ell) {
        return Err(Error::Semisimplicity {
            p,
            factor: format_poly(&rep),
        });
    }
    let mut components = Vec::new();
    if x.iter().any(|&c| c != 0) {
        let c_k = HeckeContext::level_one(k).nebentypus_factor(p, ell)?;
        for g in poly::factor_squarefree(&min_poly, ell) {
            let multiplicity = multiplicity(&char_poly, &g, ell);
            let field = Arc::new(if g.len() == 2 {
                ExtField::prime_field(ell)?
            } else {
                ExtField::new(ell, g.clone())?
            });
            let root = if g.len() == 2 {
                ExtElement::from_int(&field, -(g[0] as i64))
            } else {
                ExtElement::generator(&field)
            };
            let ring = ExtRing::new(field.clone());
            let basis_ext: Vec<ExtSeries> = basis
                .basis
                .iter()
                .map(|b| b.extend(&ring))
                .collect::<Result<_>>()?;
            let mut lambda = root;
            for _ in 0..g.len() - 1 {
                let coords = project(&x, &a, &min_poly, &lambda)?;
                let mut series = ExtSeries::zero(ring.clone(), 1, 0, precision);
                for (c, b) in coords.iter().zip(&basis_ext) {
                    if !c.is_zero() {
                        series = series.add(&b.scale(&c.coeffs().to_vec()))?;
                    }
                }
                let ck = ring.from_i64(c_k as i64);
                let tf = hecke_tp_with(&series, p, &ck)?;
                if !is_eigen(&series, &tf, &lambda.coeffs().to_vec()) {
                    return Err(Error::Hypothesis(format!(
                        "component for eigenvalue {lambda} fails T_{p} eigen-equation"
                    )));
                }
                if coords.iter().any(|c| !c.is_zero()) {
                    components.push(EigenComponent {
                        eigenvalue: lambda.clone(),
                        factor: g.clone(),
                        multiplicity,
                        coordinates: coords,
                        series,
                    });
                }
                lambda = lambda.pow(ell as u128);
            }
        }
    }
    let dec = Decomposition {
        p,
        weight: k,
        ell,
        hecke_matrix: a,
        char_poly,
        min_poly,
        components,
    };
    if dec.sum(precision)? != *f {
        return Err(Error::Hypothesis(
            "eigencomponents do not sum to the input".into(),
        ));
    }
    Ok(dec)
}

/// `x·E_λ` where `E_λ = h(A)/h(λ)`, `h(y) = m(y)/(y − λ)`.
fn project(x: &[u64], a: &Matrix, m: &[u64], lambda: &ExtElement) -> Result<Vec<ExtElement>> {
    let field = lambda.field();
    let deg = m.len() - 1;
    // Synthetic division of m by (y − λ).
    let mut h = vec![ExtElement::zero(field); deg];
    h[deg - 1] = ExtElement::from_int(field, m[deg] as i64);
    for i in (1..deg).rev() {
        h[i - 1] = ExtElement::from_int(field, m[i] as i64).add(&lambda.mul(&h[i]));
    }
    let mut h_at = ExtElement::zero(field);
    for c in h.iter().rev() {
        h_at = h_at.mul(lambda).add(c);
    }
    let xs: Vec<ExtElement> = x
        .iter()
        .map(|&c| ExtElement::from_int(field, c as i64))
        .collect();
    let mut v: Vec<ExtElement> = xs.iter().map(|c| c.mul(&h[deg - 1])).collect();
    for hi in h[..deg - 1].iter().rev() {
        let mut next: Vec<ExtElement> = xs.iter().map(|c| c.mul(hi)).collect();
        for (vi, row) in v.iter().zip(a) {
            if vi.is_zero() {
                continue;
            }
            for (n, &aij) in next.iter_mut().zip(row) {
                if aij != 0 {
                    *n = n.add(&vi.mul(&ExtElement::from_int(field, aij as i64)));
                }
            }
        }
        v = next;
    }
    let inv = h_at.inv()?;
    Ok(v.into_iter().map(|c| c.mul(&inv)).collect())
}

fn multiplicity(f: &[u64], g: &[u64], ell: u64) -> usize {
    let mut f = f.to_vec();
    let mut n = 0;
    loop {
        let (q, r) = poly::divrem(&f, g, ell);
        if !r.is_empty() {
            return n;
        }
        f = q;
        n += 1;
    }
}

pub(crate) fn format_poly(f: &[u64]) -> String {
    let terms: Vec<String> = f
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, _) => format!("{c}"),
            (1, 1) => "x".into(),
            (1, _) => format!("{c}*x"),
            (_, 1) => format!("x^{i}"),
            _ => format!("{c}*x^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}
