use symfermat::curvedb::CurveDatabase;
use symfermat::freypipe::*;
use symfermat::qrsolver::{symbol_sign, to_classes, CongruenceClassSet};
use symfermat::symplectic::Sign;

const REORDERED: &str = "
equation 3,8,21
floor >7
case y_even level 42
  7 ~ 2
  3 ~ -2
  2 ~ -2
case y_odd level 168 candidates 168b1,168a1
  7 ~ 2
  2 = 10
  3 ~ -2

equation 3,4,5
floor >=5
case y_even level 30
  2 ~ -4
  3 ~ 2
  5 ~ 2
case y_odd level 120 candidates 120b1,120a1
  2 = 8
  3 ~ 2
  5 ~ 2
";

#[test]
fn result_is_invariant_under_reordering() {
    let db = CurveDatabase::embedded();
    let shuffled = ScenarioFile::parse(REORDERED).unwrap();
    for eq in [triple(3, 8, 21), triple(3, 4, 5)] {
        let a = run_equation(&ScenarioFile::embedded(), &db, &eq).unwrap();
        let b = run_equation(&shuffled, &db, &eq).unwrap();
        assert_eq!(a.classes, b.classes);
        assert_eq!(a.exponent_floor, b.exponent_floor);
    }
}

#[test]
fn dropping_a_scenario_enlarges_the_class_set() {
    let db = CurveDatabase::embedded();
    let eq = triple(3, 8, 21);
    let scs = ScenarioFile::embedded().scenarios(&eq, &db).unwrap();
    let full = to_classes(&run_scenarios(&scs, &db).unwrap().1).unwrap();
    let odd_only = to_classes(&run_scenarios(&scs[..1], &db).unwrap().1).unwrap();
    assert_eq!(full.intersection(&odd_only), full);
    assert_ne!(full, odd_only);
    assert!(full.density() < odd_only.density());
}

#[test]
fn every_class_for_3_8_21_has_minus_two_a_non_residue() {
    let db = CurveDatabase::embedded();
    let r = run_equation(&ScenarioFile::embedded(), &db, &triple(3, 8, 21)).unwrap();
    let m = r.classes.modulus();
    for &res in r.classes.residues() {
        let s = symbol_sign(-1, res, m).unwrap() * symbol_sign(2, res, m).unwrap();
        assert_eq!(s, Sign::Minus, "residue {res} mod {m}");
    }
}

#[test]
fn paper_decompositions_are_disjoint() {
    let five = CongruenceClassSet::new(8, [5]);
    for other in [23, 19] {
        let single = CongruenceClassSet::new(24, [other]);
        assert!(five.intersection(&single).is_empty());
        assert_eq!(
            five.union(&single).density(),
            five.density() + single.density()
        );
    }
}
