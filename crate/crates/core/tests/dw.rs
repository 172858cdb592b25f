use sl2q_mtc::cyclo::Rational;
use sl2q_mtc::dw::{dw_crosscheck, dw_invariant, Manifold};
use sl2q_mtc::modular::ModularData;
use sl2q_mtc::Mtc;

fn r(a: i128, b: i128) -> Rational {
    Rational::new(a, b)
}

#[test]
fn examples_at_q5() {
    let m = Mtc::new(5).unwrap();
    assert_eq!(dw_invariant(&m, Manifold::S2xS1), r(1, 1));
    assert_eq!(dw_invariant(&m, Manifold::S3), r(1, 120));
    assert_eq!(dw_invariant(&m, Manifold::T3), r(74, 1));
    assert_eq!(dw_invariant(&m, Manifold::Lens(2)), r(1, 60));
    // elements of order dividing 3: e and the 20 elements of order 3
    assert_eq!(dw_invariant(&m, Manifold::Lens(3)), r(21, 120));
    // Σ₂×S¹ = Σ_X (|Γ|/d_X)²
    let direct: Rational = m.catalog.entries().iter().map(|d| r(120, d.qdim as i128).pow(2)).sum();
    assert_eq!(dw_invariant(&m, Manifold::SigmaGxS1(2)), direct);
}

#[test]
fn parse_manifolds() {
    for s in ["s3", "s2xs1", "t3", "lens:7:1", "sigma:3xs1"] {
        assert_eq!(s.parse::<Manifold>().unwrap().to_string(), s);
    }
    for s in ["lens:0:1", "lens:3:2", "sigma:xs1", "t4", ""] {
        assert!(s.parse::<Manifold>().is_err(), "{s}");
    }
}

#[test]
fn crosschecks() {
    for q in [5u64, 13] {
        let m = Mtc::new(q).unwrap();
        let md = ModularData::build(&m);
        assert_eq!(dw_invariant(&m, Manifold::T3), r(m.catalog.len() as i128, 1));
        let mut list = vec![Manifold::S2xS1, Manifold::T3];
        list.extend((0..=3).map(Manifold::SigmaGxS1));
        list.extend([2, 3, 5, 7].map(Manifold::Lens));
        for man in list {
            let rep = dw_crosscheck(&m, &md, man);
            assert_eq!(rep.equal, Some(true), "q={q} {rep:?}");
        }
    }
}
