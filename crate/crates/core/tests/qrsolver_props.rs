use num_rational::BigRational;
use proptest::prelude::*;
use symfermat::nt::{is_prime, primes_up_to};
use symfermat::qrsolver::*;
use symfermat::symplectic::{QrConstraint, Sign};

fn euler(n: i64, p: u64) -> i8 {
    let r = n.rem_euclid(p as i64) as u128;
    let mut acc = 1u128;
    for _ in 0..(p - 1) / 2 {
        acc = acc * r % p as u128;
    }
    if acc == 1 {
        1
    } else if acc == 0 {
        0
    } else {
        -1
    }
}

#[test]
fn symbol_sign_matches_euler_criterion_below_1000() {
    for n in [-1i64, 2, -2, 3, -3, 6, -6] {
        for p in primes_up_to(1000).into_iter().filter(|&p| p > 3) {
            let r = p % 24;
            let predicted = [-1i64, 2, 3]
                .into_iter()
                .filter(|q| match q {
                    -1 => n < 0,
                    q => n % q == 0,
                })
                .map(|q| symbol_sign(q, r, 24).unwrap())
                .fold(Sign::Plus, |a, b| a * b);
            assert_eq!(predicted.as_i8(), euler(n, p), "n={n} p={p}");
        }
    }
}

#[test]
fn single_atom_density_is_one_half() {
    for q in [3, 5, 7, 11] {
        for s in [1i8, -1] {
            let e = SignExpr::Atom(QrConstraint::from_i64(q, Sign::from_i8(s).unwrap()).unwrap());
            let set = to_classes(&e).unwrap();
            assert_eq!(set.density(), BigRational::new(1.into(), 2.into()), "q={q}");
        }
    }
}

#[test]
fn classes_agree_with_actual_primes() {
    let exprs = [
        "(-2)=-1 & (2)=-1",
        "(2)=-1 | ((2)=+1 & (-1)=-1)",
        "!(5)=1 & ((-3)=1 | (7)=-1)",
        "(30)=-1",
    ];
    for text in exprs {
        let e = parse(text).unwrap();
        let set = to_classes(&e).unwrap();
        for p in primes_up_to(3000).into_iter().filter(|&p| p > 7) {
            assert_eq!(set.contains(p), holds_at(&e, p), "{text} at {p}");
        }
    }
}

fn atom_strategy() -> impl Strategy<Value = SignExpr> {
    (
        prop::sample::select(vec![-1i64, 2, -2, 3, -3, 5, 6, -6, 7, 10, -15]),
        any::<bool>(),
    )
        .prop_map(|(n, plus)| {
            let s = if plus { Sign::Plus } else { Sign::Minus };
            SignExpr::Atom(QrConstraint::from_i64(n, s).unwrap())
        })
}

fn expr_strategy() -> impl Strategy<Value = SignExpr> {
    let leaf = prop_oneof![
        8 => atom_strategy(),
        1 => Just(SignExpr::True),
        1 => Just(SignExpr::False),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| SignExpr::Not(Box::new(e))),
            prop::collection::vec(inner.clone(), 2..4).prop_map(SignExpr::And),
            prop::collection::vec(inner, 2..4).prop_map(SignExpr::Or),
        ]
    })
}

fn qr_strategy() -> impl Strategy<Value = QrConstraint> {
    (
        prop::sample::select(vec![1i64, -1, 2, -2, 3, -3, 5, 6, -6, 10, 15, -30]),
        any::<bool>(),
    )
        .prop_map(|(n, plus)| {
            QrConstraint::from_i64(n, if plus { Sign::Plus } else { Sign::Minus }).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn pretty_printer_round_trips(e in expr_strategy()) {
        let text = e.to_string();
        let back = parse(&text).unwrap();
        prop_assert_eq!(to_classes(&back).unwrap(), to_classes(&e).unwrap(), "{}", text);
    }

    #[test]
    fn or_is_union_and_density_is_subadditive(a in expr_strategy(), b in expr_strategy()) {
        let ca = to_classes(&a).unwrap();
        let cb = to_classes(&b).unwrap();
        let cor = to_classes(&SignExpr::Or(vec![a.clone(), b.clone()])).unwrap();
        let cand = to_classes(&SignExpr::And(vec![a, b])).unwrap();
        prop_assert_eq!(&cor, &ca.union(&cb));
        prop_assert_eq!(&cand, &ca.intersection(&cb));
        prop_assert!(cor.density() <= ca.density() + cb.density());
        prop_assert_eq!(cor.density() + cand.density(), ca.density() + cb.density());
    }

    #[test]
    fn canonical_form_is_unique(e in expr_strategy()) {
        let set = to_classes(&e).unwrap();
        let lifted = CongruenceClassSet::new(8 * 3 * 5 * 7 * 11, set.lift(8 * 3 * 5 * 7 * 11));
        prop_assert_eq!(&lifted, &set);
        let m = set.modulus();
        for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
            let coarse = CongruenceClassSet::new(d, set.residues().iter().copied());
            prop_assert_ne!(coarse.lift(m), set.lift(m));
        }
    }

    #[test]
    fn simplify_preserves_the_solution_set(cs in prop::collection::vec(qr_strategy(), 0..6)) {
        let conj = |cs: &[QrConstraint]| {
            to_classes(&SignExpr::and_all(cs.iter().cloned().map(SignExpr::Atom).collect())).unwrap()
        };
        match simplify(&cs).unwrap() {
            Simplified::Contradiction => prop_assert!(conj(&cs).is_empty()),
            Simplified::Consistent(kept) => {
                prop_assert_eq!(conj(&kept), conj(&cs));
                for i in 0..kept.len() {
                    let mut rest = kept.clone();
                    rest.remove(i);
                    prop_assert_ne!(conj(&rest), conj(&kept), "{} is redundant", kept[i]);
                }
            }
        }
    }
}

#[test]
fn residues_are_prime_classes() {
    let set = to_classes(&parse("(-2)=-1 & (2)=1 & (3)=1").unwrap()).unwrap();
    let first = (2..10_000u64).find(|&p| is_prime(p) && set.contains(p));
    assert_eq!(first, Some(23));
}
