mod common;

use proptest::prelude::*;
use quadsum::cyclotomic::{closed_form, gauss_cyclotomic, gauss_square, CyclotomicInt};
use quadsum::evaluator::{evaluate, evaluate_with, Limits};
use quadsum::fieldcore::{Embedding, FieldCtx, FieldElem};
use quadsum::lifts::{lift_two, make_tilde_with, TypeState};
use quadsum::linalg::{self, Matrix};
use quadsum::nullity::{nullity_at, nullity_by_kernel, nullity_profile, NullityProfile, QuadFunc};
use quadsum::quadform::{brute_force_sum, brute_force_sum_naive, diagonalize, type_direct, DEFAULT_CAP};

use common::{matches, oracle_sum, Oracle};

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7])
}

fn elem(ctx: &FieldCtx, raw: &[u64]) -> FieldElem {
    let c: Vec<u64> = raw.iter().take(ctx.degree()).map(|v| v % ctx.p()).collect();
    ctx.element(&c).unwrap()
}

fn nonzero(ctx: &FieldCtx, raw: &[u64]) -> FieldElem {
    let e = elem(ctx, raw);
    if e.is_zero() {
        ctx.one()
    } else {
        e
    }
}

/// A function over F_{p^n} built from raw draws; exponents are distinct and
/// the top coefficient is nonzero.
fn build_func(ctx: &FieldCtx, alphas: &[u64], raws: &[Vec<u64>]) -> QuadFunc {
    let mut al: Vec<u64> = alphas.to_vec();
    al.sort_unstable();
    al.dedup();
    let terms = al.iter().zip(raws).map(|(&a, r)| (nonzero(ctx, r), a)).collect();
    QuadFunc::new(ctx, terms).unwrap()
}

fn raw_vecs() -> impl Strategy<Value = Vec<Vec<u64>>> {
    prop::collection::vec(prop::collection::vec(0u64..1000, 4), 4)
}

fn alpha_set(max: u64) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..=max, 1..=3)
}

/// Every monic irreducible modulus of degree d, found by construction.
fn irreducible_moduli(p: u64, d: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let total = p.pow(d as u32);
    for code in 0..total {
        let mut m: Vec<u64> = (0..d).map(|i| code / p.pow(i as u32) % p).collect();
        m.push(1);
        if FieldCtx::new(p, d, Some(&m)).is_ok() {
            out.push(m);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn field_axioms(p in prime(), d in 1usize..=4, ra in prop::collection::vec(0u64..1000, 4),
                    rb in prop::collection::vec(0u64..1000, 4), rc in prop::collection::vec(0u64..1000, 4)) {
        let k = FieldCtx::new(p, d, None).unwrap();
        let (a, b, c) = (elem(&k, &ra), elem(&k, &rb), elem(&k, &rc));
        prop_assert_eq!(k.mul(&a, &b), k.mul(&b, &a));
        prop_assert_eq!(k.mul(&k.mul(&a, &b), &c), k.mul(&a, &k.mul(&b, &c)));
        prop_assert_eq!(k.mul(&a, &k.add(&b, &c)), k.add(&k.mul(&a, &b), &k.mul(&a, &c)));
        prop_assert_eq!(k.add(&a, &k.neg(&a)), k.zero());
        prop_assert_eq!(k.sub(&k.add(&a, &b), &b), a.clone());
        prop_assert_eq!(k.mul(&a, &k.one()), a.clone());
        if !a.is_zero() {
            prop_assert_eq!(k.mul(&a, &k.inv(&a).unwrap()), k.one());
        } else {
            prop_assert!(k.inv(&a).is_err());
        }
        // Frobenius is a ring map of order d and the trace is linear
        prop_assert_eq!(k.frobenius(&k.mul(&a, &b), 1), k.mul(&k.frobenius(&a, 1), &k.frobenius(&b, 1)));
        prop_assert_eq!(k.frobenius(&a, d as u64), a.clone());
        prop_assert_eq!(k.frobenius(&a, 1), k.pow_u64(&a, p));
        prop_assert_eq!(k.trace(&k.add(&a, &b)), (k.trace(&a) + k.trace(&b)) % p);
        // independent arithmetic agrees
        let o = Oracle::for_ctx(&k);
        prop_assert_eq!(o.mul(a.coeffs(), b.coeffs()), k.mul(&a, &b).coeffs().to_vec());
        prop_assert_eq!(o.trace(a.coeffs()), k.trace(&a));
    }

    #[test]
    fn embedding_is_a_homomorphism(p in prime(), d in 1usize..=2, k in 2usize..=3,
                                   ra in prop::collection::vec(0u64..1000, 4),
                                   rb in prop::collection::vec(0u64..1000, 4)) {
        let src = FieldCtx::new(p, d, None).unwrap();
        let dst = FieldCtx::new(p, d * k, None).unwrap();
        let (a, b) = (elem(&src, &ra), elem(&src, &rb));
        for root in Embedding::all_roots(&src, &dst).unwrap() {
            let e = Embedding::with_root(&src, &dst, root).unwrap();
            prop_assert_eq!(e.apply(&src.add(&a, &b)), dst.add(&e.apply(&a), &e.apply(&b)));
            prop_assert_eq!(e.apply(&src.mul(&a, &b)), dst.mul(&e.apply(&a), &e.apply(&b)));
            prop_assert_eq!(e.apply(&src.one()), dst.one());
        }
        let e = Embedding::new(&src, &dst).unwrap();
        prop_assert_eq!(dst.trace(&e.apply(&a)), (k as u64 * src.trace(&a)) % p);
    }

    #[test]
    fn sum_does_not_depend_on_the_embedding_root(p in prop::sample::select(vec![3u64, 5]),
                                                 alphas in alpha_set(2), raws in raw_vecs()) {
        let src = FieldCtx::new(p, 2, None).unwrap();
        let dst = FieldCtx::new(p, 4, None).unwrap();
        let f = build_func(&src, &alphas, &raws);
        let mut sums = Vec::new();
        for root in Embedding::all_roots(&src, &dst).unwrap() {
            let e = Embedding::with_root(&src, &dst, root).unwrap();
            let terms: Vec<(FieldElem, u64)> = f.terms().iter().map(|(a, al)| (e.apply(a), *al)).collect();
            sums.push(oracle_sum(&dst, &terms, None));
        }
        prop_assert_eq!(sums.len(), 2);
        prop_assert_eq!(&sums[0], &sums[1]);
    }

    #[test]
    fn congruence_invariance(p in prime(), d in 1usize..=6,
                             entries in prop::collection::vec(0u64..1000, 36),
                             change in prop::collection::vec(0u64..1000, 36)) {
        let mut b: Matrix = linalg::zeros(d, d);
        for i in 0..d {
            for j in 0..=i {
                let v = entries[i * 6 + j] % p;
                b[i][j] = v;
                b[j][i] = v;
            }
        }
        let mut q: Matrix = (0..d).map(|i| (0..d).map(|j| change[i * 6 + j] % p).collect()).collect();
        if linalg::rank(&q, p) < d {
            q = linalg::identity(d);
        }
        let c = linalg::mat_mul(&linalg::mat_mul(&linalg::transpose(&q), &b, p), &q, p);
        let d0 = diagonalize(&b, p).unwrap();
        let d1 = diagonalize(&c, p).unwrap();
        prop_assert_eq!((d0.rank, d0.nullity, d0.t), (d1.rank, d1.nullity, d1.t));
        prop_assert_eq!(d0.rank, linalg::rank(&b, p));
    }

    #[test]
    fn lift_two_is_independent_of_beta(p in prime(), n in 1usize..=2, s in 1u32..=3,
                                       alphas in alpha_set(3), raws in raw_vecs()) {
        let base = FieldCtx::new(p, n, None).unwrap();
        let f = build_func(&base, &alphas, &raws);
        let (t0, l0) = type_direct(&f, 1).unwrap();
        let l_target = nullity_at(&f, (n as u64) << s).unwrap();
        let mut results = Vec::new();
        for beta in base.elements().filter(|x| base.quadratic_character(x) == -1).take(6) {
            let tilde = make_tilde_with(&f, &base, &beta).unwrap();
            let (tt, lt) = type_direct(&tilde, 1).unwrap();
            let st = TypeState { p, n_total: n as u64, l: l0, t: t0 };
            let tl = TypeState { p, n_total: n as u64, l: lt, t: tt };
            results.push(lift_two(st, tl, s, l_target).unwrap());
        }
        prop_assert!(results.windows(2).all(|w| w[0] == w[1]));
        if ((n as u64) << s) <= 16 {
            let (td, _) = type_direct(&f, 1 << s).unwrap();
            prop_assert_eq!(results[0].t, td);
        }
    }

    #[test]
    fn profile_is_coherent(p in prime(), n in 1usize..=2, alphas in alpha_set(3), raws in raw_vecs()) {
        let base = FieldCtx::new(p, n, None).unwrap();
        let f = build_func(&base, &alphas, &raws);
        let prof = nullity_profile(&f).unwrap();
        let n = n as u64;
        prop_assert_eq!(prof.s % n, 0);
        prop_assert_eq!(prof.entries.last().unwrap(), &(prof.s, 2 * f.alpha()));
        for &(m, l) in &prof.entries {
            prop_assert_eq!(prof.s % m, 0);
            prop_assert!(l <= 2 * f.alpha());
            if m < prof.s {
                prop_assert!(l < 2 * f.alpha());
            }
        }
        for k in 1..=12u64 {
            let m = k * n;
            let l = prof.query(m).unwrap();
            prop_assert_eq!(l, nullity_at(&f, m).unwrap());
            if p.checked_pow(m as u32).is_some_and(|q| q <= 5_000) {
                prop_assert_eq!(l, nullity_by_kernel(&f, m).unwrap());
            }
        }
        let json = serde_json::to_string(&prof).unwrap();
        let back: NullityProfile = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, prof);
    }

    #[test]
    fn closed_form_matches_oracle(p in prime(), n in 1usize..=2, m in 1u64..=4,
                                  alphas in alpha_set(3), raws in raw_vecs()) {
        let big = (n as u64 * m) as u32;
        prop_assume!(p.pow(big) <= 20_000);
        let base = FieldCtx::new(p, n, None).unwrap();
        let f = build_func(&base, &alphas, &raws);
        let v = evaluate(&f, m).unwrap();
        let work = FieldCtx::new(p, big as usize, None).unwrap();
        let g = f.embed_into(&work).unwrap();
        let counts = oracle_sum(&work, g.terms(), None);
        prop_assert!(matches(&v.to_cyclotomic(), &counts));
        prop_assert!(matches(&brute_force_sum(&f, m, DEFAULT_CAP).unwrap(), &counts));
        prop_assert!(matches(&brute_force_sum_naive(&f, m, DEFAULT_CAP).unwrap(), &counts));
        // the smallest direct base the lift composition can start from
        let mut floor = n as u64;
        let mut rest = m;
        while rest % p == 0 {
            rest /= p;
            floor *= p;
        }
        let lifted = evaluate_with(&f, m, Limits { direct_max: floor }).unwrap();
        prop_assert_eq!((lifted.t, lifted.l), (v.t, v.l));
    }

    #[test]
    fn value_is_independent_of_the_modulus(p in prop::sample::select(vec![3u64, 5]), n in 2usize..=3,
                                           pick in 0usize..1000, m in 1u64..=4,
                                           alphas in alpha_set(3), raws in raw_vecs()) {
        let moduli = irreducible_moduli(p, n);
        let k1 = FieldCtx::new(p, n, None).unwrap();
        let k2 = FieldCtx::new(p, n, Some(&moduli[pick % moduli.len()])).unwrap();
        let f1 = build_func(&k1, &alphas, &raws);
        let emb = Embedding::new(&k1, &k2).unwrap();
        let terms = f1.terms().iter().map(|(a, al)| (emb.apply(a), *al)).collect();
        let f2 = QuadFunc::new(&k2, terms).unwrap();
        let v1 = evaluate(&f1, m).unwrap();
        let v2 = evaluate(&f2, m).unwrap();
        prop_assert_eq!((v1.t, v1.l), (v2.t, v2.l));
    }

    #[test]
    fn cyclotomic_ring_laws(p in prime(), xs in prop::collection::vec(-50i64..50, 7),
                            ys in prop::collection::vec(-50i64..50, 7), e in 0u64..6) {
        let mk = |v: &[i64]| {
            let mut acc = CyclotomicInt::zero(p);
            for (j, &c) in v.iter().take(p as usize).enumerate() {
                acc = acc.add(&CyclotomicInt::zeta_pow(p, j as i64).scale(&c.into())).unwrap();
            }
            acc
        };
        let (x, y) = (mk(&xs), mk(&ys));
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(x.add(&y).unwrap().sub(&y).unwrap(), x.clone());
        prop_assert_eq!(x.conj().conj(), x.clone());
        prop_assert_eq!(x.mul(&y).unwrap().conj(), x.conj().mul(&y.conj()).unwrap());
        let g = gauss_cyclotomic(p);
        prop_assert_eq!(g.mul(&g).unwrap().as_integer().cloned(), Some(gauss_square(p)));
        prop_assert_eq!(closed_form(p, e, 0, 1), g.pow(e));
    }
}

#[test]
fn irreducible_modulus_counts() {
    // (p^2 - p)/2 monic irreducible quadratics and (p^3 - p)/3 cubics
    assert_eq!(irreducible_moduli(3, 2).len(), 3);
    assert_eq!(irreducible_moduli(5, 2).len(), 10);
    assert_eq!(irreducible_moduli(3, 3).len(), 8);
}
