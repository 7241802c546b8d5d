use std::sync::Arc;

use proptest::prelude::*;

use congruence_lab::algebra::arith::{gcd, inv_mod, kronecker};
use congruence_lab::algebra::{
    cyclotomic_field_with_root, sqrt_mod, ExtElement, ExtField, Residue,
};
use congruence_lab::criterion::{analyze_lpoly, LPolyCase};
use congruence_lab::engine::{
    factor_claim, least_nonzero, read_certificates, recombine, scan, square_class_closure,
    write_certificates, Claim, ScanConfig,
};
use congruence_lab::forms::delta_mod;
use congruence_lab::p1rep::{act, p1_enumerate, tm_vector, Mat2, P1Vector};
use congruence_lab::qseries::{IntSeries, ModSeries};

const ELLS: [u64; 5] = [3, 5, 7, 11, 13];

fn ell() -> impl Strategy<Value = u64> {
    prop::sample::select(ELLS.to_vec())
}

fn field_element(field: &Arc<ExtField>, raw: &[u64]) -> ExtElement {
    let ell = field.ell();
    let coeffs = (0..field.degree())
        .map(|i| raw[i % raw.len()] % ell)
        .collect();
    ExtElement::from_raw(field, coeffs)
}

fn int_series(max_len: usize) -> impl Strategy<Value = IntSeries> {
    prop::collection::vec(-1000i64..1000, 8..max_len).prop_map(|c| IntSeries::from_i64s(&c))
}

fn mod_series(ell: u64, max_len: usize) -> impl Strategy<Value = ModSeries> {
    prop::collection::vec(0..ell, 8..max_len)
        .prop_map(move |c| ModSeries::from_residues(ell, c).unwrap())
}

fn word() -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), 0..12)
}

fn word_matrix(w: &[bool]) -> Mat2 {
    w.iter().fold(Mat2::IDENTITY, |acc, &s| {
        acc.mul(if s { &Mat2::S } else { &Mat2::T })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(ell in ell(), m in prop::sample::select(vec![5u64, 7, 9, 11, 13, 16, 21]),
                    a in prop::collection::vec(any::<u64>(), 1..13),
                    b in prop::collection::vec(any::<u64>(), 1..13),
                    c in prop::collection::vec(any::<u64>(), 1..13)) {
        prop_assume!(gcd(ell, m) == 1);
        let (field, _) = cyclotomic_field_with_root(ell, m).unwrap();
        prop_assume!(field.degree() <= 12);
        let (x, y, z) = (field_element(&field, &a), field_element(&field, &b), field_element(&field, &c));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert_eq!(x.add(&y), y.add(&x));
        if !x.is_zero() {
            let q = field.size().unwrap();
            prop_assert!(x.pow(q - 1).is_one());
            prop_assert_eq!((q - 1) % x.mult_order().unwrap(), 0);
            prop_assert!(x.mul(&x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn roots_of_unity(ell in ell(), m in 2u64..40, b in 0u64..200) {
        prop_assume!(gcd(ell, m) == 1);
        let (field, zeta) = cyclotomic_field_with_root(ell, m).unwrap();
        prop_assume!(field.degree() <= 16);
        prop_assert!(zeta.pow(m as u128).is_one());
        for j in 1..m {
            prop_assert!(!zeta.pow(j as u128).is_one());
        }
        let step = zeta.pow(b as u128);
        let mut acc = ExtElement::zero(&field);
        let mut cur = ExtElement::one(&field);
        for _ in 0..m {
            acc = acc.add(&cur);
            cur = cur.mul(&step);
        }
        let expected = if b % m == 0 { m as i64 } else { 0 };
        prop_assert_eq!(acc, ExtElement::from_int(&field, expected));
    }

    #[test]
    fn square_roots(ell in prop::sample::select(vec![3u64, 5, 7, 11, 13, 101, 1009]), a in -5000i64..5000) {
        let r = Residue::new(a, ell).unwrap();
        let k = kronecker(a, ell as i64);
        match sqrt_mod(r) {
            Some(s) => {
                prop_assert!(k >= 0);
                prop_assert_eq!(s.pow(2), r);
            }
            None => prop_assert_eq!(k, -1),
        }
    }

    #[test]
    fn sieve_sum_reproduces(f in int_series(120), m in 1u64..9) {
        let mut acc = f.sieve(m, 0).unwrap();
        for b in 1..m {
            acc = acc.add(&f.sieve(m, b).unwrap()).unwrap();
        }
        prop_assert_eq!(acc, f);
    }

    #[test]
    fn u_after_v_is_identity(f in int_series(80), m in 1u64..7) {
        let v = f.v_operator(m).unwrap();
        prop_assert_eq!(v.sieve(m, 0).unwrap(), v.clone());
        prop_assert_eq!(v.u_operator(m).unwrap(), f);
    }

    #[test]
    fn theta_leibniz((_, f, g) in ell().prop_flat_map(|l| (Just(l), mod_series(l, 60), mod_series(l, 60)))) {
        let lhs = f.mul(&g).unwrap().theta().unwrap();
        let rhs = f.theta().unwrap().mul(&g).unwrap().add(&f.mul(&g.theta().unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_commutes(ell in ell(), f in int_series(60), g in int_series(60), m in 1u64..6, b in 0u64..6) {
        let b = b % m;
        let r = |s: &IntSeries| s.reduce_mod(ell).unwrap();
        let (fl, gl) = (r(&f), r(&g));
        prop_assert_eq!(r(&f.mul(&g).unwrap()), fl.mul(&gl).unwrap());
        prop_assert_eq!(r(&f.sieve(m, b).unwrap()), fl.sieve(m, b).unwrap());
        prop_assert_eq!(r(&f.u_operator(m).unwrap()), fl.u_operator(m).unwrap());
        prop_assert_eq!(r(&f.v_operator(m).unwrap()), fl.v_operator(m).unwrap());
        prop_assert_eq!(r(&f.theta().unwrap()), fl.theta().unwrap());
    }

    #[test]
    fn lpoly_root_ratio(ell in ell(), lambda in 0i64..13, c in 1i64..13, p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 17])) {
        prop_assume!(p != ell && c % ell as i64 != 0);
        let a = analyze_lpoly(p, Residue::new(lambda, ell).unwrap(), Residue::new(c, ell).unwrap()).unwrap();
        if !matches!(a.case, LPolyCase::Repeated { .. }) {
            prop_assert_eq!((ell * ell - 1) % a.period, 0);
            for m in 1..=3 * a.period {
                prop_assert_eq!(a.roots_agree(m), a.admits(m), "m = {}", m);
            }
        } else {
            prop_assert_eq!(a.period, ell);
        }
    }

    #[test]
    fn p1_action_is_homomorphism(m in 2u64..30, beta in 0i64..30, g in word(), h in word()) {
        let ell = if m % 3 == 0 { 5 } else { 3 };
        let v = tm_vector(m, beta, ell);
        prop_assume!(v.is_ok());
        let v = v.unwrap();
        let (g, h) = (word_matrix(&g), word_matrix(&h));
        let lhs = act(&act(&v, &g).unwrap(), &h).unwrap();
        let rhs = act(&v, &g.mul(&h)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn p1_normalization_classes(m in 2u64..200, c in 0i64..1000, d in 0i64..1000, u in 1u64..1000) {
        let line = p1_enumerate(m).unwrap();
        prop_assume!(gcd(gcd(c as u64, d as u64), m) == 1 && gcd(u, m) == 1);
        let x = line.normalize(c, d).unwrap();
        let y = line.normalize(c * u as i64, d * u as i64).unwrap();
        prop_assert_eq!(x, y);
        // The representative is itself canonical.
        prop_assert_eq!(line.normalize(x.c as i64, x.d as i64).unwrap(), x);
        let ui = inv_mod(u % m, m).unwrap();
        prop_assert_eq!(line.normalize(x.c as i64 * ui as i64, x.d as i64 * ui as i64).unwrap(), x);
    }

    #[test]
    fn invariant_vector_is_fixed(m in 2u64..40, g in word()) {
        let line = p1_enumerate(m).unwrap();
        let field = Arc::new(ExtField::prime_field(7).unwrap());
        let v = P1Vector::invariant(&line, &field);
        prop_assert_eq!(act(&v, &word_matrix(&g)).unwrap(), v);
    }

    #[test]
    fn claim_factorization_round_trips(m in 1u64..5000, r in 0i64..5000, q in prop::sample::select(vec![2u64, 3, 5, 7]), gap in any::<bool>()) {
        let claim = if gap {
            Claim::gap(m, r as u64 % m, q).unwrap()
        } else {
            Claim::progression(m, r).unwrap()
        };
        let back = recombine(&factor_claim(&claim)).unwrap();
        prop_assert_eq!(back.envelope(), claim.envelope());
        prop_assert_eq!(back.gap_prime(), claim.gap_prime());
        for n in -200..200 {
            prop_assert_eq!(back.contains(n), claim.contains(n));
        }
    }

    #[test]
    fn claim_members_agree_with_contains(m in 1u64..60, r in 0i64..60, q in prop::sample::select(vec![2u64, 3, 5]), gap in any::<bool>()) {
        let claim = if gap { Claim::gap(m, r as u64, q).unwrap() } else { Claim::progression(m, r).unwrap() };
        let members: Vec<i64> = claim.members(500).collect();
        let expected: Vec<i64> = (0..=500).filter(|&n| claim.contains(n)).collect();
        prop_assert_eq!(members, expected);
    }

    #[test]
    fn scan_is_sound_and_finds_planted_zeros(
        (ell, coeffs) in prop::sample::select(vec![5u64, 7, 11]).prop_flat_map(|l| (Just(l), prop::collection::vec(1..l, 600))),
        m in 2u64..12, b in 0u64..12,
    ) {
        let b = b % m;
        let mut coeffs = coeffs;
        for n in (b as usize..coeffs.len()).step_by(m as usize) {
            coeffs[n] = 0;
        }
        let f = ModSeries::from_residues(ell, coeffs).unwrap();
        let config = ScanConfig { max_modulus: 12, bound: 599, support_min: 25 };
        let certs = scan(&f, &config).unwrap();
        for c in &certs {
            prop_assert_eq!(least_nonzero(&f, &c.claim, 599).unwrap(), None);
            for w in &c.witnesses {
                prop_assert!(f.coeff(w.index).unwrap() != 0);
                prop_assert!(c.claim.is_subset_of(&w.covering));
            }
        }
        let planted = Claim::progression(m, b as i64).unwrap();
        prop_assert!(certs.iter().any(|c| planted.is_subset_of(&c.claim)), "{:?}", certs);
    }
}

#[test]
fn square_class_closure_of_scan_hits() {
    for ell in [5u64, 7, 11] {
        let bound = 30_000;
        let d = delta_mod(ell, bound + 1).unwrap();
        let config = ScanConfig {
            max_modulus: 60,
            bound,
            support_min: 25,
        };
        let certs = scan(&d, &config).unwrap();
        for c in &certs {
            for derived in square_class_closure(c, 1).unwrap() {
                assert_eq!(
                    least_nonzero(&d, &derived.claim, bound).unwrap(),
                    None,
                    "ell={ell}: {} from {}",
                    derived.claim,
                    c.claim
                );
                assert!(certs.iter().any(|h| derived.claim.is_subset_of(&h.claim)));
            }
        }
    }
}

#[test]
fn certificate_stream_round_trips() {
    let d = delta_mod(7, 5001).unwrap();
    let certs = scan(
        &d,
        &ScanConfig {
            max_modulus: 40,
            bound: 5000,
            support_min: 25,
        },
    )
    .unwrap();
    let mut buf = Vec::new();
    write_certificates(&mut buf, &certs).unwrap();
    let back = read_certificates(buf.as_slice()).unwrap();
    assert_eq!(back, certs);
    let mut again = Vec::new();
    write_certificates(&mut again, &back).unwrap();
    assert_eq!(buf, again);
}
