use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sl2q_mtc::catalog::SimpleLabel;
use sl2q_mtc::chars::oracle_fuse;
use sl2q_mtc::fusion::{
    compare_all, delta_invariant, fuse, fuse_blocks, fuse_blocks_with, real_form_filter, solve_pairs_diagonal,
    solve_pairs_unipotent, BlockCase, BlockContext, FuseOptions, Scope,
};
use sl2q_mtc::sl2::{ClassLabel, ExtMatrix, GroupElement, Sign};
use sl2q_mtc::{Error, Mtc};

fn q5() -> &'static Mtc {
    static M: OnceLock<Mtc> = OnceLock::new();
    M.get_or_init(|| Mtc::new(5).unwrap())
}

fn q13() -> &'static Mtc {
    static M: OnceLock<Mtc> = OnceLock::new();
    M.get_or_init(|| Mtc::new(13).unwrap())
}

fn lab(m: &Mtc, s: &str) -> SimpleLabel {
    m.parse(s).unwrap()
}

fn non_central(m: &Mtc) -> Vec<SimpleLabel> {
    m.catalog.labels().filter(|l| !l.is_central()).collect()
}

fn sorted(mut v: Vec<(GroupElement, GroupElement)>) -> Vec<(GroupElement, GroupElement)> {
    v.sort_by_key(|(a, b)| (a.a.code(), a.b.code(), a.c.code(), a.d.code(), b.a.code(), b.b.code(), b.c.code(), b.d.code()));
    v
}

fn brute_pairs(m: &Mtc, t1: sl2q_mtc::gf::FieldElement, t2: sl2q_mtc::gf::FieldElement, z: &GroupElement) -> Vec<(GroupElement, GroupElement)> {
    let g = &m.group;
    let out = g
        .elements()
        .iter()
        .filter(|y1| g.trace(y1) == t1)
        .map(|y1| (*y1, g.mul(&g.inv(y1), z)))
        .filter(|(_, y2)| g.trace(y2) == t2)
        .collect();
    sorted(out)
}

#[test]
fn delta_examples() {
    let m = q5();
    let fp = &m.group.field;
    let f = &fp.base;
    let two = f.from_int(2);
    assert!(delta_invariant(fp, two, two, two).is_zero());
    let e = fp.e();
    let te = f.add(e, f.inv(e));
    let tee = f.add(f.mul(e, e), f.inv(f.mul(e, e)));
    assert!(delta_invariant(fp, tee, te, te).is_zero());
    let tf = fp.restrict(fp.ext.add(fp.f(), fp.ext.inv(fp.f()))).unwrap();
    assert!(!delta_invariant(fp, f.zero(), tf, tf).is_zero());
}

#[test]
fn delta_vanishes_exactly_on_product_eigenvalues() {
    for m in [q5(), q13()] {
        let fp = &m.group.field;
        let ext = &fp.ext;
        // eigenvalues from F_q^× and from the norm-one subgroup of F_{q²}^×
        let q = fp.q as i64;
        let mut eig: Vec<_> = (0..q - 1).map(|k| fp.embed(fp.e_pow(k))).collect();
        eig.extend((0..q + 1).map(|l| fp.f_pow(l)));
        let tr = |x| fp.restrict(ext.add(x, ext.inv(x))).unwrap();
        for &a in eig.iter().step_by(2) {
            for &a1 in eig.iter().step_by(3) {
                for &a2 in &eig {
                    let hit = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
                        .iter()
                        .any(|&(s1, s2)| ext.mul(ext.pow(a1, s1), ext.pow(a2, s2)) == a);
                    assert_eq!(delta_invariant(fp, tr(a), tr(a1), tr(a2)).is_zero(), hit);
                }
            }
        }
    }
}

#[test]
fn diagonal_pairs_match_brute_force() {
    let m = q5();
    let g = &m.group;
    let f = &g.field.base;
    for k in 1..2 * m.h() as i64 {
        let a = g.field.e_pow(k);
        for t1 in f.elements() {
            for t2 in f.elements() {
                let got = sorted(solve_pairs_diagonal(g, t1, t2, a));
                assert_eq!(got, brute_pairs(m, t1, t2, &g.a_of(a)), "k={k}");
            }
        }
    }
}

#[test]
fn unipotent_pairs_match_brute_force() {
    let m = q5();
    let g = &m.group;
    let f = &g.field.base;
    for mu in [Sign::Plus, Sign::Minus] {
        for b in [f.one(), g.field.e()] {
            let z = g.signed(mu, &g.b_of(b));
            for t1 in f.elements() {
                for t2 in f.elements() {
                    let got = sorted(solve_pairs_unipotent(g, t1, t2, mu, b));
                    assert_eq!(got, brute_pairs(m, t1, t2, &z));
                    if t1 == f.mul(f.from_int(mu.value()), t2) {
                        assert!(got.iter().all(|(y1, y2)| y1.c.is_zero() && y2.c.is_zero()));
                    }
                }
            }
        }
    }
}

#[test]
fn identity_product_forces_inverse_pairs() {
    let m = q5();
    let g = &m.group;
    let f = &g.field.base;
    for t1 in f.elements() {
        for t2 in f.elements() {
            let v = brute_pairs(m, t1, t2, &g.identity());
            assert_eq!(v.is_empty(), t1 != t2 && !g.elements().iter().all(|y| g.trace(y) != t1));
        }
    }
}

#[test]
fn real_form_filter_agrees_with_conjugation() {
    for m in [q5(), q13()] {
        let g = &m.group;
        let fp = &g.field;
        let ext = &fp.ext;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = fp.q * fp.q;
        let mut seen = [0usize; 2];
        for _ in 0..4000 {
            let a = ext.from_code(rng.gen_range(0..n));
            let b = ext.from_code(rng.gen_range(0..n));
            let structured = rng.gen_bool(0.5);
            let (c, d) = if structured {
                (ext.neg(ext.mul(fp.embed(fp.e()), fp.conj(b))), fp.conj(a))
            } else {
                (ext.from_code(rng.gen_range(0..n)), ext.from_code(rng.gen_range(0..n)))
            };
            let u = ExtMatrix([[a, b], [c, d]]);
            if g.ext_det(&u) != ext.one() {
                continue;
            }
            let real = g.from_ext(&g.ext_conj_by(&g.k_matrix(), &u)).is_some();
            assert_eq!(real_form_filter(g, &u), real);
            seen[real as usize] += 1;
        }
        assert!(seen[0] > 0 && seen[1] > 0);
        // c^ℓ = k.a(f^ℓ)
        for l in 1..=m.h() as i64 {
            let u = g.a_ext(fp.f_pow(l));
            assert!(real_form_filter(g, &u));
            assert_eq!(g.from_ext(&g.ext_conj_by(&g.k_matrix(), &u)).unwrap(), g.c_pow(l));
        }
    }
}

#[test]
fn k_set_construction() {
    for m in [q5(), q13()] {
        let g = &m.group;
        let fp = &g.field;
        let h = m.h() as i64;
        let labels = non_central(m);
        let (mut literal_agree, mut total) = (0usize, 0usize);
        for x1 in labels.iter().step_by(3) {
            for x2 in labels.iter().step_by(5) {
                let c = BlockContext::new(m, x1, x2).unwrap();
                let has_b = matches!(x1, SimpleLabel::B { .. }) || matches!(x2, SimpleLabel::B { .. });
                for l in 1..=m.h() {
                    let t = g.trace(&g.c_pow(l as i64));
                    if delta_invariant(fp, t, c.t1, c.t2).is_zero() {
                        continue;
                    }
                    for i in 1..=m.q() as i64 + 1 {
                        let (y1, y2) = (c.h_matrix(g, l, 1, 2 * h + 1 + l as i64 + i), c.h_matrix(g, l, 2, i));
                        assert_eq!(g.mul(&y1, &y2), g.c_pow(l as i64));
                        assert_eq!((g.trace(&y1), g.trace(&y2)), (c.t1, c.t2));
                        for j in 1..=2 {
                            let idx = if j == 1 { 2 * h + 1 + l as i64 + i } else { i };
                            if let (Some(p), Some(d)) =
                                (c.k_condition(fp, l, j, idx, true), c.k_condition(fp, l, j, idx, false))
                            {
                                total += 1;
                                literal_agree += usize::from(p == d);
                            }
                        }
                    }
                    if has_b {
                        assert_eq!(c.k_set(g, l), c.k_set_classified(g, l));
                    }
                }
            }
        }
        // the literal square-class test is not the membership criterion
        assert!(total > 0 && literal_agree < total);
    }
}

#[test]
fn h_sets_follow_the_congruence() {
    let m = q5();
    let fp = &m.group.field;
    let b1 = lab(m, "B:+:+:+:1");
    let b2 = lab(m, "B:+:-:+:2");
    let c = BlockContext::new(m, &b1, &b2).unwrap();
    // έ₁ = 0, έ₂ = 1: the two congruences clash iff k ≢ έ₁ − έ₂, i.e. k even
    for k in 1..2 * m.h() {
        assert_eq!(c.h_set(fp, k).is_empty(), k % 2 == 0, "k={k}");
    }
    let a = lab(m, "A:1:1");
    let ca = BlockContext::new(m, &a, &a).unwrap();
    assert_eq!(ca.h_set(fp, 1).len() as u32, m.q() - 1);
    assert_eq!(ca.g_set, vec![2, 4]);
    assert_eq!(ca.i_set, vec![2, 4, 6]);
}

#[test]
fn closed_form_equals_oracle_on_all_pairs_q5() {
    let m = q5();
    let r = compare_all(m, &Scope::AllPairs);
    assert_eq!(r.pairs, 74 * 74);
    assert!(r.errors.is_empty(), "{:?}", r.errors);
    assert!(r.mismatches.is_empty(), "{:?}", &r.mismatches[..r.mismatches.len().min(5)]);
    // central x₁ or x₂: 2(q+4) = 18 central simples, 56 others
    assert_eq!(r.delegated, 74 * 74 - 56 * 56);
}

#[test]
fn closed_form_equals_oracle_sampled_q13() {
    let m = q13();
    let r = compare_all(m, &Scope::Sample { n: 500, seed: 1 });
    assert_eq!(r.pairs, 500);
    assert!(r.ok(), "{:?}", &r.mismatches[..r.mismatches.len().min(5)]);
}

#[test]
fn empty_scope_gives_empty_report() {
    let r = compare_all(q5(), &Scope::Pairs(Vec::new()));
    assert_eq!(r.pairs, 0);
    assert!(r.ok());
}

#[test]
fn fusion_examples() {
    let m = q5();
    let c11 = lab(m, "C:1:1");
    assert_eq!(fuse(m, &c11, &c11).unwrap(), oracle_fuse(m, &c11, &c11).unwrap());
    let v = fuse(m, &c11, &c11).unwrap();
    assert_eq!(v.get(&lab(m, "A:1:2")), 2);
    assert_eq!(v.get(&lab(m, "A:1:4")), 2);

    let a12 = lab(m, "A:1:2");
    let central = fuse(m, &a12, &a12).unwrap().restrict(ClassLabel::Central(Sign::Plus));
    let expect = [("E:+:1", 1), ("E:+:V", 3), ("E:+:W'", 1), ("E:+:W''", 1), ("E:+:X2", 2)];
    let expect: Vec<(String, u64)> = expect.iter().map(|(s, n)| (s.to_string(), *n)).collect();
    assert_eq!(central.named_terms(m), expect);

    for l in m.catalog.labels() {
        let v = fuse(m, &SimpleLabel::unit(), &l).unwrap();
        assert_eq!(v.named_terms(m), vec![(m.name(&l).to_string(), 1)]);
    }
}

#[test]
fn odd_top_nonsplit_central_block_has_only_odd_constituents() {
    let m = q5();
    // d = w₁ − w₂ = 3 = 2h+1, ν = −
    let (x1, x2) = (lab(m, "C:1:4"), lab(m, "C:1:1"));
    let blocks = fuse_blocks(m, &x1, &x2).unwrap();
    let b = blocks.iter().find(|b| b.block == ClassLabel::Central(Sign::Plus)).unwrap();
    assert_eq!(b.case, BlockCase::CentralC { d: 3 });
    let names: Vec<String> = b.vector.named_terms(m).into_iter().map(|(s, _)| s).collect();
    assert_eq!(names, vec!["E:+:W1", "E:+:X1"]);
    assert_eq!(b.vector, oracle_fuse(m, &x1, &x2).unwrap().restrict(ClassLabel::Central(Sign::Plus)));
}

#[test]
fn fusion_invariants_on_all_pairs_q5() {
    let m = q5();
    let labels: Vec<SimpleLabel> = m.catalog.labels().collect();
    let d = |l: &SimpleLabel| m.catalog.get(l).unwrap().qdim;
    for x in &labels {
        for y in &labels {
            let v = fuse(m, x, y).unwrap();
            assert_eq!(v.total_dim(m), d(x) * d(y));
            assert_eq!(v.get(&SimpleLabel::unit()), u64::from(y == &x.dual()));
            assert!(v.iter().all(|(w, _)| w.parity() == x.parity() * y.parity()));
            if x <= y {
                assert_eq!(v, fuse(m, y, x).unwrap());
            }
        }
    }
}

#[test]
fn block_dimension_bookkeeping() {
    let m = q5();
    let g = &m.group;
    let labels = non_central(m);
    for x1 in labels.iter().step_by(4) {
        for x2 in labels.iter().step_by(6) {
            for b in fuse_blocks(m, x1, x2).unwrap() {
                let z = g.representative(b.block);
                let fiber: u64 =
                    b.vector.iter().map(|(w, &n)| n * m.catalog.get(w).unwrap().qdim / g.class_size(b.block)).sum();
                let count = g
                    .class_members(x1.support())
                    .filter(|y1| g.class_of(&g.mul(&g.inv(y1), &z)).0 == x2.support())
                    .count() as u64;
                assert_eq!(fiber, count, "{} {} {}", m.name(x1), m.name(x2), b.block);
            }
        }
    }
}

#[test]
fn central_factor_without_fallback_is_unsupported() {
    let m = q5();
    let e = lab(m, "E:-:V");
    let a = lab(m, "A:1:2");
    assert!(matches!(fuse_blocks_with(m, &e, &a, FuseOptions { oracle_fallback: false, ..Default::default() }), Err(Error::UnsupportedCase(_))));
    assert!(fuse_blocks_with(m, &a, &a, FuseOptions { oracle_fallback: false, ..Default::default() }).is_ok());
    assert!(fuse_blocks(m, &e, &a).unwrap().iter().all(|b| b.case == BlockCase::Delegated));
}

#[test]
fn fusion_vector_json() {
    let m = q5();
    let c11 = lab(m, "C:1:1");
    let v = fuse(m, &c11, &c11).unwrap();
    let j = v.to_json(m, &c11, &c11);
    assert_eq!(j["pairs"], serde_json::json!(["C:1:1", "C:1:1"]));
    let terms = j["terms"].as_array().unwrap();
    let keys: Vec<&str> = terms.iter().map(|t| t[0].as_str().unwrap()).collect();
    let mut s = keys.clone();
    s.sort();
    assert_eq!(keys, s);
    assert_eq!(terms.len(), v.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn fuse_is_commutative_and_dimensional_q13(i in 0usize..282, j in 0usize..282) {
        let m = q13();
        let (x, y) = (m.catalog.data(i).label, m.catalog.data(j).label);
        let v = fuse(m, &x, &y).unwrap();
        prop_assert_eq!(&v, &fuse(m, &y, &x).unwrap());
        prop_assert_eq!(v.total_dim(m), m.catalog.data(i).qdim * m.catalog.data(j).qdim);
        prop_assert_eq!(v.get(&SimpleLabel::unit()), u64::from(x == y));
    }
}
