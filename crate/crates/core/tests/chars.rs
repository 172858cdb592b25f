use sl2q_mtc::catalog::{Irrep, SimpleLabel};
use sl2q_mtc::chars::{
    char_of, eval, inner, oracle_fuse, restriction_corrections, restriction_from_characters, restriction_table,
    tensor_char, Subgroup,
};
use sl2q_mtc::cyclo::{Cyclo, Rational};
use sl2q_mtc::sl2::ClassLabel;
use sl2q_mtc::Mtc;

fn ctx(q: u64) -> Mtc {
    Mtc::new(q).unwrap()
}

fn lab(m: &Mtc, s: &str) -> SimpleLabel {
    m.parse(s).unwrap()
}

#[test]
fn character_table_orthogonality() {
    for q in [5u64, 9, 13] {
        let m = ctx(q);
        let g = &m.group;
        let order = g.order() as i128;
        let sizes: Vec<i128> = (0..g.num_classes()).map(|c| g.member_indices(c).len() as i128).collect();
        let irreps = m.table.irreps().to_vec();
        assert_eq!(irreps.len(), g.num_classes());
        let mut dims = 0u64;
        for &r in &irreps {
            assert_eq!(m.table.value(r, 0), &Cyclo::from_int(r.dim(g.q()) as i64));
            dims += r.dim(g.q()).pow(2);
        }
        assert_eq!(dims, g.order());
        for &r in &irreps {
            for &s in &irreps {
                let mut acc = Cyclo::zero();
                for (c, &n) in sizes.iter().enumerate() {
                    acc += &(m.table.value(r, c) * &m.table.value(s, c).conj()).scale(Rational::from_integer(n));
                }
                let expect = if r == s { order } else { 0 };
                assert_eq!(acc, Cyclo::from_int(expect as i64), "rows {r} {s} at q={q}");
            }
        }
        for c1 in 0..g.num_classes() {
            for c2 in 0..g.num_classes() {
                let mut acc = Cyclo::zero();
                for &r in &irreps {
                    acc += &(m.table.value(r, c1) * &m.table.value(r, c2).conj());
                }
                let expect = if c1 == c2 { order / sizes[c1] } else { 0 };
                assert_eq!(acc, Cyclo::from_int(expect as i64), "columns at q={q}");
            }
        }
    }
}

#[test]
fn table_matches_traces_of_the_natural_module() {
    // Sym^0 ⊕ ... check: V ⊕ 1 is the permutation character on the projective line.
    let m = ctx(5);
    let g = &m.group;
    let f = &g.field.base;
    for c in 0..g.num_classes() {
        let x = g.rep(c);
        let mut fixed = 0i64;
        // points [1:0] and [t:1]
        if x.c.is_zero() {
            fixed += 1;
        }
        for t in f.elements() {
            // x (t,1)ᵀ ∥ (t,1)ᵀ
            let top = f.add(f.mul(x.a, t), x.b);
            let bot = f.add(f.mul(x.c, t), x.d);
            if !bot.is_zero() && f.mul(bot, t) == top {
                fixed += 1;
            }
        }
        let v = m.table.value(Irrep::V, c) + &Cyclo::one();
        assert_eq!(v, Cyclo::from_int(fixed));
    }
}

#[test]
fn d_characters_are_orthonormal_at_q5() {
    let m = ctx(5);
    let labels: Vec<SimpleLabel> = m.catalog.labels().collect();
    assert_eq!(m.orbits.len(), labels.len());
    assert_eq!(m.orbits.total_pairs(), 9 * 120);
    let chars: Vec<_> = labels.iter().map(|l| char_of(&m, l)).collect();
    for (i, a) in chars.iter().enumerate() {
        for (j, b) in chars.iter().enumerate() {
            if i != j && a.label.support() != b.label.support() {
                continue;
            }
            let expect = if i == j { Cyclo::one() } else { Cyclo::zero() };
            assert_eq!(inner(&m, &a.values, &b.values), expect, "{:?} {:?}", a.label, b.label);
        }
        // Σ_x χ(x, e) = d
        let d: i64 = m
            .orbits
            .orbits()
            .iter()
            .zip(&a.values)
            .filter(|(o, _)| o.h as usize == m.group.index_of(&m.group.identity()))
            .map(|(o, v)| o.size as i64 * v.as_rational_integer().unwrap())
            .sum();
        assert_eq!(d as u64, m.catalog.data(i).qdim);
    }
}

#[test]
fn d_characters_sampled_orthonormality_at_q13() {
    let m = ctx(13);
    let labels: Vec<SimpleLabel> = m.catalog.labels().collect();
    for i in (0..labels.len()).step_by(17) {
        let a = char_of(&m, &labels[i]);
        assert_eq!(inner(&m, &a.values, &a.values), Cyclo::one());
        for j in [(i + 1) % labels.len(), (i + 5) % labels.len()] {
            let b = char_of(&m, &labels[j]);
            assert_eq!(inner(&m, &a.values, &b.values), Cyclo::zero());
        }
    }
}

#[test]
fn characters_are_invariant_and_self_dual() {
    let m = ctx(5);
    let g = &m.group;
    for l in m.catalog.labels().step_by(3) {
        let support: Vec<_> = g.class_members(l.support()).collect();
        for x in support.iter().step_by(7) {
            for h in g.elements().iter().step_by(5) {
                if g.mul(x, h) != g.mul(h, x) {
                    continue;
                }
                let v = eval(&m, &l, x, h);
                assert_eq!(eval(&m, &l.dual(), &g.inv(x), &g.inv(h)), v);
                let w = g.at(31);
                assert_eq!(eval(&m, &l, &g.conj_by(&w, x), &g.conj_by(&w, h)), v);
            }
        }
    }
}

#[test]
fn character_examples() {
    let m = ctx(5);
    let g = &m.group;
    let e = g.identity();
    let a = g.a_pow(1);
    for k in 1..2 * m.h() {
        let ak = g.a_pow(k as i64);
        assert_eq!(eval(&m, &lab(&m, "E:+:V"), &e, &ak), Cyclo::one());
        for u in 1..m.q() {
            let l = SimpleLabel::A { k, u };
            assert_eq!(eval(&m, &l, &ak, &a), Cyclo::root_of_unity(m.q() - 1, u as i64));
        }
    }
    let identity_orbit = m
        .orbits
        .range(0)
        .find(|&i| m.orbits.orbits()[i].h as usize == g.index_of(&a))
        .unwrap();
    for u1 in 1..m.q() {
        for u2 in 1..m.q() {
            let t = tensor_char(&m, &SimpleLabel::A { k: 1, u: u1 }, &SimpleLabel::A { k: 1, u: u2 });
            let d = u1 as i64 - u2 as i64;
            let expect = &Cyclo::root_of_unity(m.q() - 1, d) + &Cyclo::root_of_unity(m.q() - 1, -d);
            assert_eq!(t[identity_orbit], expect);
        }
    }
}

/// Brute-force (χ₁⊙χ₂)(z,h) summing over all of Γ.
fn brute_tensor(m: &Mtc, l1: &SimpleLabel, l2: &SimpleLabel) -> Vec<Cyclo> {
    let g = &m.group;
    m.orbits
        .orbits()
        .iter()
        .map(|o| {
            let z = g.rep(o.class);
            let h = g.at(o.h as usize);
            let mut acc = Cyclo::zero();
            for x1 in g.elements() {
                if g.mul(x1, &h) != g.mul(&h, x1) {
                    continue;
                }
                let x2 = g.mul(&g.inv(x1), &z);
                acc += &(&eval(m, l1, x1, &h) * &eval(m, l2, &x2, &h));
            }
            acc
        })
        .collect()
}

#[test]
fn tensor_character_matches_brute_force() {
    let m = ctx(5);
    for (a, b) in [("A:1:2", "C:1:3"), ("B:-:+:-:2", "C:2:1"), ("E:-:X2", "B:+:-:+:4"), ("E:+:W'", "E:-:X'")] {
        let (l1, l2) = (lab(&m, a), lab(&m, b));
        assert_eq!(tensor_char(&m, &l1, &l2), brute_tensor(&m, &l1, &l2), "{a} {b}");
    }
}

#[test]
fn oracle_examples() {
    let m = ctx(5);
    let unit = SimpleLabel::unit();
    for l in m.catalog.labels() {
        let v = oracle_fuse(&m, &unit, &l).unwrap();
        assert_eq!(v.iter().collect::<Vec<_>>(), vec![(&l, &1)]);
    }
    let a12 = lab(&m, "A:1:2");
    let v = oracle_fuse(&m, &a12, &a12).unwrap();
    let central: Vec<(String, u64)> =
        v.iter().filter(|(w, _)| w.support() == ClassLabel::Central(sl2q_mtc::sl2::Sign::Plus))
            .map(|(w, &n)| (m.name(w).to_string(), n))
            .collect();
    let mut expect: Vec<(String, u64)> =
        [("E:+:1", 1), ("E:+:V", 3), ("E:+:X2", 2), ("E:+:W'", 1), ("E:+:W''", 1)].iter().map(|(s, n)| (s.to_string(), *n)).collect();
    let mut got = central.clone();
    got.sort();
    expect.sort();
    assert_eq!(got, expect);

    let c11 = lab(&m, "C:1:1");
    let v = oracle_fuse(&m, &c11, &c11).unwrap();
    assert_eq!(v.get(&lab(&m, "A:1:2")), 2);
    assert_eq!(v.get(&lab(&m, "A:1:4")), 2);
}

#[test]
fn oracle_is_commutative_and_dimension_multiplicative() {
    let m = ctx(5);
    let labels: Vec<SimpleLabel> = m.catalog.labels().collect();
    for (i, l1) in labels.iter().enumerate().step_by(5) {
        for l2 in labels.iter().skip(i % 7).step_by(9) {
            let v = oracle_fuse(&m, l1, l2).unwrap();
            assert_eq!(v, oracle_fuse(&m, l2, l1).unwrap());
            let total: u64 = v.iter().map(|(w, &n)| n * m.catalog.get(w).unwrap().qdim).sum();
            let d = |l| m.catalog.get(l).unwrap().qdim;
            assert_eq!(total, d(l1) * d(l2));
            assert_eq!(v.get(&SimpleLabel::unit()), u64::from(l1 == l2));
            for (w, _) in v.iter() {
                assert_eq!(w.parity(), l1.parity() * l2.parity());
            }
        }
    }
}

#[test]
fn restriction_tables() {
    for q in [5u64, 13] {
        let m = ctx(q);
        let fixes = restriction_corrections(m.h());
        for &r in m.table.irreps() {
            for sub in [Subgroup::Split, Subgroup::Unipotent, Subgroup::Nonsplit] {
                let computed = restriction_from_characters(&m, r, sub);
                let total: u32 = computed.values().sum();
                assert_eq!(total as u64, r.dim(m.q()));
                if r == Irrep::One {
                    assert!(restriction_table(&m, r, sub, true).is_none());
                    continue;
                }
                let corrected = restriction_table(&m, r, sub, true).unwrap();
                let literal = restriction_table(&m, r, sub, false).unwrap();
                assert_eq!(corrected, computed, "{r} on {sub:?} at q={q}");
                assert_eq!(literal == computed, !fixes.contains(&(r, sub)), "{r} on {sub:?} at q={q}");
            }
        }
    }
}
