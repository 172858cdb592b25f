use sl2q_mtc::cyclo::{Cyclo, Rational};
use sl2q_mtc::modular::{check_relations, verlinde_vs_oracle, ModularData};
use sl2q_mtc::chars::oracle_fuse;
use sl2q_mtc::fusion::FusionVector;
use sl2q_mtc::Mtc;

#[test]
fn worked_examples() {
    let m = Mtc::new(5).unwrap();
    let md = ModularData::build(&m);
    let unit = md.unit();
    let a12 = m.catalog.index(&m.parse("A:1:2").unwrap()).unwrap();
    assert_eq!(*md.s(unit, unit), Cyclo::from_rational(Rational::new(1, 120)));
    assert_eq!(*md.s(unit, a12), Cyclo::from_rational(Rational::new(1, 4)));
    assert_eq!(md.t[a12], Cyclo::from_int(-1));
    for v in 0..md.len() {
        assert_eq!(md.verlinde_fuse(unit, v).unwrap(), FusionVector::single(md.labels[v]));
    }
    let c11 = m.catalog.index(&m.parse("C:1:1").unwrap()).unwrap();
    assert_eq!(md.verlinde_fuse(c11, c11).unwrap(), oracle_fuse(&m, &md.labels[c11], &md.labels[c11]).unwrap());
}

#[test]
fn relations_at_q5() {
    let m = Mtc::new(5).unwrap();
    let md = ModularData::build(&m);
    let r = check_relations(&m, &md);
    assert!(r.ok(), "{r:?}");
    let lambda = r.lambda.clone().unwrap();
    assert_eq!(lambda, md.anomaly());
    eprintln!("{r:?}");
}

#[test]
fn verlinde_all_pairs_at_q5() {
    let m = Mtc::new(5).unwrap();
    let md = ModularData::build(&m);
    let n = md.len();
    let pairs: Vec<_> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
    let bad = verlinde_vs_oracle(&m, &md, &pairs);
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(3)]);
}

#[test]
fn unit_row_and_anomaly_at_q13() {
    let m = Mtc::new(13).unwrap();
    let md = ModularData::build(&m);
    assert!(md.unit_row_ok());
    assert!(md.global_dimension_ok());
    assert!(md.is_symmetric());
    eprintln!("lambda(13) = {}", md.anomaly());
}
