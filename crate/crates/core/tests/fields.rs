use proptest::prelude::*;
use sl2q_mtc::cyclo::{sqrt_q, Cyclo};
use sl2q_mtc::gf::{make_field, FieldParams};

fn fields() -> Vec<FieldParams> {
    [5, 9, 13, 25].iter().map(|&q| make_field(q).unwrap()).collect()
}

#[test]
fn generators_have_the_right_orders() {
    for fp in fields() {
        let q = fp.q as i64;
        let ext = &fp.ext;
        let g = fp.check_gen();
        // order of ě is exactly q²-1 by brute force
        let mut x = g;
        let mut order = 1;
        while x != ext.one() {
            x = ext.mul(x, g);
            order += 1;
        }
        assert_eq!(order, q * q - 1);
        assert_eq!(ext.pow(g, (q * q - 1) / 2), ext.neg(ext.one()));

        let f = fp.f();
        let mut y = f;
        let mut ord_f = 1;
        while y != ext.one() {
            y = ext.mul(y, f);
            ord_f += 1;
        }
        assert_eq!(ord_f, q + 1);
        assert_eq!(ext.pow(f, 2 * fp.h as i64 + 1), ext.neg(ext.one()));

        let e = fp.e();
        let powers: std::collections::BTreeSet<_> = (0..q - 1).map(|k| fp.base.pow(e, k as u64)).collect();
        assert_eq!(powers.len() as i64, q - 1);
        assert_eq!(fp.embed(e), ext.mul(fp.e_tilde(), fp.e_tilde()));
        assert_eq!(fp.dlog(e), Ok(1));
        assert_eq!(fp.is_square(e), Ok(false));
        assert!(fp.dlog(fp.base.zero()).is_err());
    }
}

#[test]
fn lexicographic_generator_is_smallest() {
    // Low-degree-first lexicographic order on F_25 = F_5[t]/(t²+t+1).
    let fp = make_field(5).unwrap();
    let ext = &fp.ext;
    let order = |x| {
        let mut y = x;
        let mut k = 1;
        while y != ext.one() {
            y = ext.mul(y, x);
            k += 1;
        }
        k
    };
    let mut first = None;
    'outer: for c0 in 0..5 {
        for c1 in 0..5 {
            let x = ext.from_coeffs(&[c0, c1]);
            if !x.is_zero() && order(x) == 24 {
                first = Some(x);
                break 'outer;
            }
        }
    }
    assert_eq!(first, Some(fp.check_gen()));
}

#[test]
fn norm_and_conjugation() {
    for fp in fields() {
        let ext = &fp.ext;
        assert_eq!(fp.conj(fp.e_tilde()), ext.neg(fp.e_tilde()));
        assert_eq!(fp.norm(fp.f()), fp.base.one());
        assert_eq!(fp.norm(ext.zero()), fp.base.zero());
        assert_eq!(fp.embed(fp.norm(fp.check_gen())), ext.pow(fp.check_gen(), fp.q as i64 + 1));
        let mut fibres = vec![0; fp.q as usize];
        for x in ext.elements() {
            fibres[fp.norm(x).code() as usize] += 1;
            assert_eq!(fp.conj(fp.conj(x)), x);
        }
        assert_eq!(fibres[0], 1);
        assert!(fibres[1..].iter().all(|&c| c == fp.q + 1));
    }
}

#[test]
fn trace_is_linear_and_surjective() {
    for q in [5, 13, 25] {
        let fp = make_field(q).unwrap();
        let b = &fp.base;
        let mut hit = vec![false; fp.p as usize];
        for x in b.elements() {
            hit[fp.trace_to_prime(x) as usize] = true;
            for y in b.elements() {
                let lhs = fp.trace_to_prime(b.add(x, y));
                assert_eq!(lhs, (fp.trace_to_prime(x) + fp.trace_to_prime(y)) % fp.p);
            }
            for c in 0..fp.p as i64 {
                let cx = b.mul(b.from_int(c), x);
                assert_eq!(fp.trace_to_prime(cx) as i64, c * fp.trace_to_prime(x) as i64 % fp.p as i64);
            }
        }
        assert!(hit.iter().all(|&h| h));
    }
}

#[test]
fn squares_and_roots() {
    for fp in fields() {
        let b = &fp.base;
        let squares: std::collections::BTreeSet<_> =
            b.elements().filter(|x| !x.is_zero()).map(|x| b.mul(x, x)).collect();
        assert_eq!(squares.len() as u32, (fp.q - 1) / 2);
        for y in b.elements().filter(|y| !y.is_zero()) {
            assert_eq!(fp.is_square(y).unwrap(), squares.contains(&y));
            if let Some(r) = fp.sqrt(y) {
                assert_eq!(b.mul(r, r), y);
            }
        }
    }
}

#[test]
fn r_and_s_constants() {
    for fp in fields() {
        let b = &fp.base;
        let ext = &fp.ext;
        for k in 0..fp.q as i64 {
            assert_eq!(b.add(fp.r(k), fp.r_prime(k)), fp.e_pow(k));
            assert_eq!(b.sub(fp.r(k), fp.r_prime(k)), fp.e_pow(-k));
            let s = fp.embed(fp.s(k));
            assert_eq!(ext.add(s, fp.s_prime(k)), fp.f_pow(k));
            assert_eq!(ext.sub(s, fp.s_prime(k)), fp.f_pow(-k));
            let ft = ext.pow(fp.f_tilde(), k);
            assert_eq!(ext.add(fp.s_tilde(k), fp.s_tilde_prime(k)), ft);
            assert_eq!(ext.sub(fp.s_tilde(k), fp.s_tilde_prime(k)), ext.inv(ft));
        }
    }
}

#[test]
fn sqrt_q_squares_to_q() {
    for fp in fields() {
        let s = sqrt_q(&fp);
        assert_eq!(s.pow(2), Cyclo::from_int(fp.q as i64));
        assert!(s.to_complex().0 > 0.0);
    }
    assert_eq!(sqrt_q(&make_field(9).unwrap()), Cyclo::from_int(3));
}

proptest! {
    #[test]
    fn base_field_axioms(q in prop::sample::select(vec![5u64, 9, 13, 25]), xs in prop::array::uniform3(0u32..625)) {
        let fp = make_field(q).unwrap();
        let b = &fp.base;
        let [x, y, z] = xs.map(|c| b.from_code(c % fp.q));
        prop_assert_eq!(b.mul(b.mul(x, y), z), b.mul(x, b.mul(y, z)));
        prop_assert_eq!(b.mul(x, b.add(y, z)), b.add(b.mul(x, y), b.mul(x, z)));
        prop_assert_eq!(b.add(x, b.neg(x)), b.zero());
        if !x.is_zero() {
            prop_assert_eq!(b.mul(x, b.inv(x)), b.one());
        }
    }

    #[test]
    fn ext_field_axioms(q in prop::sample::select(vec![5u64, 9, 13]), xs in prop::array::uniform3(0u32..28561)) {
        let fp = make_field(q).unwrap();
        let e = &fp.ext;
        let [x, y, z] = xs.map(|c| e.from_code(c % e.order()));
        prop_assert_eq!(e.mul(e.mul(x, y), z), e.mul(x, e.mul(y, z)));
        prop_assert_eq!(e.mul(x, e.add(y, z)), e.add(e.mul(x, y), e.mul(x, z)));
        prop_assert_eq!(e.add(x, e.neg(x)), e.zero());
        if !x.is_zero() {
            prop_assert_eq!(e.mul(x, e.inv(x)), e.one());
        }
        prop_assert_eq!(fp.norm(e.mul(x, y)), fp.base.mul(fp.norm(x), fp.norm(y)));
        // the embedding is a ring homomorphism
        let b = &fp.base;
        let (u, v) = (b.from_code(xs[0] % fp.q), b.from_code(xs[1] % fp.q));
        prop_assert_eq!(fp.embed(b.mul(u, v)), e.mul(fp.embed(u), fp.embed(v)));
        prop_assert_eq!(fp.embed(b.add(u, v)), e.add(fp.embed(u), fp.embed(v)));
    }

    #[test]
    fn cyclo_ring_laws(n in 1u32..40, a in prop::collection::vec((0i64..40, -3i128..4), 0..5),
                       b in prop::collection::vec((0i64..40, -3i128..4), 0..5)) {
        use sl2q_mtc::cyclo::Rational;
        let mk = |v: &Vec<(i64, i128)>| Cyclo::from_terms(n, v.iter().map(|&(k, c)| (k, Rational::from_integer(c))));
        let (x, y) = (mk(&a), mk(&b));
        prop_assert!((&x + &(-&x)).is_zero());
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
        // reduction is idempotent
        let again = Cyclo::from_terms(n, x.terms().map(|(k, c)| (k as i64, *c)));
        prop_assert_eq!(again, x.clone());
        // a real combination has symmetric rational coefficients
        let real = &x + &x.conj();
        prop_assert_eq!(real.conj(), real);
    }
}
