use super::*;
use crate::families::{family_invariants, FamilyId};
use crate::forms::{build_form, vector};
use proptest::prelude::*;

fn fam(id: FamilyId) -> ManifoldInvariants {
    family_invariants(id).unwrap()
}

/// A record with the given form whose Wu target `3τ + 2χ` is `target`.
/// Only the target matters to the decision, so `χ`, `τ` are not realistic.
fn with_target(form: IntersectionForm, target: i64) -> ManifoldInvariants {
    let (chi, tau) = if target % 2 == 0 { (target / 2, 0) } else { ((target - 3) / 2, 1) };
    ManifoldInvariants {
        name: "test".into(),
        chi: BigInt::from(chi),
        tau: BigInt::from(tau),
        form,
        b1: 0,
        h1: AbelianGroup::free(0),
        w2: None,
        presentation: None,
    }
}

/// Independent oracle: plain odometer over the box in machine integers.
fn oracle_solutions(rows: &[Vec<i64>], target: i64, odd: &[bool], bound: i64) -> Vec<Vec<i64>> {
    let n = rows.len();
    let mut out = Vec::new();
    let mut x = vec![-bound; n];
    if n == 0 {
        return if target == 0 { vec![vec![]] } else { vec![] };
    }
    loop {
        if x.iter().zip(odd).all(|(v, &o)| (v.rem_euclid(2) == 1) == o) {
            let mut q = 0i64;
            for i in 0..n {
                for j in 0..n {
                    q += x[i] * rows[i][j] * x[j];
                }
            }
            if q == target {
                out.push(x.clone());
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if x[i] < bound {
                x[i] += 1;
                break;
            }
            x[i] = -bound;
        }
    }
}

#[test]
fn wu_target_examples() {
    assert_eq!(wu_target(&BigInt::from(-4), &BigInt::zero()), BigInt::from(-8));
    assert_eq!(wu_target(&BigInt::from(4 - 4 - 4), &BigInt::zero()), BigInt::from(-8));
    assert_eq!(wu_target(&BigInt::from(-2), &BigInt::zero()), BigInt::from(-4));
    assert_eq!(wu_target(&BigInt::from(3), &BigInt::from(1)), BigInt::from(9));
}

#[test]
fn spin_examples() {
    let h = IntersectionForm::hyperbolic();
    assert_eq!(is_spin(&h, &AbelianGroup::free(4)), SpinStatus::Spin);
    assert_eq!(is_spin(&build_form("diag(1)").unwrap(), &AbelianGroup::free(1)), SpinStatus::NotSpin);
    assert_eq!(is_spin(&h, &"Z^1 + Z/2".parse().unwrap()), SpinStatus::Indeterminate);
}

#[test]
fn characteristic_residue_examples() {
    assert_eq!(characteristic_residue(&IntersectionForm::hyperbolic()).unwrap(), vec![false, false]);
    assert_eq!(characteristic_residue(&build_form("diag(1,-1)").unwrap()).unwrap(), vec![true, true]);
    assert_eq!(characteristic_residue(&IntersectionForm::hyperbolic_sum(3)).unwrap(), vec![false; 6]);
    // CP² # CP²bar in a non-diagonal basis: [[1,1],[1,0]] has characteristic class (0,1)
    let f = build_form("matrix [[1,1],[1,0]]").unwrap();
    assert_eq!(characteristic_residue(&f).unwrap(), vec![false, true]);
    assert_eq!(characteristic_residue(&build_form("diag(2)").unwrap()), Err(Error::NotUnimodular));
}

#[test]
fn characteristic_residue_is_characteristic() {
    // c·x ≡ x·x (mod 2) for every basis vector and pair sum
    for spec in ["diag(1,1,-1)", "matrix [[1,1],[1,0]]", "matrix [[1,1,0],[1,0,1],[0,1,0]]", "3H"] {
        let f = build_form(spec).unwrap();
        let c: Vec<BigInt> = characteristic_residue(&f)
            .unwrap()
            .into_iter()
            .map(|b| BigInt::from(b as i64))
            .collect();
        for mask in 0u32..(1 << f.rank()) {
            let x: Vec<BigInt> = (0..f.rank()).map(|i| BigInt::from((mask >> i) & 1)).collect();
            let lhs = f.pair(&c, &x).unwrap();
            let rhs = f.evaluate(&x).unwrap();
            assert!((lhs - rhs).is_even(), "{spec} mask {mask}");
        }
    }
}

#[test]
fn mod8_examples() {
    let h = IntersectionForm::hyperbolic();
    assert!(mod8_filter(&h, &BigInt::from(-8), &[false, false]).unwrap());
    assert!(!mod8_filter(&h, &BigInt::from(-4), &[false, false]).unwrap());
    let h3 = IntersectionForm::hyperbolic_sum(3);
    assert!(!mod8_filter(&h3, &BigInt::from(-12), &[false; 6]).unwrap());
    assert!(mod8_filter(&h, &BigInt::from(-8), &[true, false]).is_err());
    assert!(mod8_filter(&build_form("diag(3)").unwrap(), &BigInt::from(3), &[true]).is_err());
}

#[test]
fn no_even_class_of_square_minus_12_on_3h() {
    // every value of q(x) over even x in [-20, 20]^6, one hyperbolic block at a time
    let block: std::collections::BTreeSet<i64> = (-10i64..=10)
        .flat_map(|a| (-10i64..=10).map(move |b| 2 * (2 * a) * (2 * b)))
        .collect();
    let mut reach = std::collections::BTreeSet::from([0i64]);
    for _ in 0..3 {
        reach = reach.iter().flat_map(|r| block.iter().map(move |b| r + b)).collect();
    }
    assert!(!reach.contains(&-12));
    assert!(reach.contains(&-16));
}

#[test]
fn decide_family_examples() {
    let v = decide_almost_complex(&fam(FamilyId::M1 { g: 1 }), DEFAULT_SEARCH_BOUND).unwrap();
    assert_eq!(v.status, Status::Exists);
    let w = v.witness.unwrap();
    assert_eq!(w.coefficients, vector(&[-2, 2]));
    assert_eq!(w.square, BigInt::from(-8));

    let v = decide_almost_complex(&fam(FamilyId::M4 { n: 1 }), DEFAULT_SEARCH_BOUND).unwrap();
    assert_eq!(v.status, Status::NotExists);

    let m = fam(FamilyId::M4 { n: 2 });
    let v = decide_almost_complex(&m, DEFAULT_SEARCH_BOUND).unwrap();
    assert_eq!(v.status, Status::Exists);
    assert_eq!(v.witness.unwrap().square, BigInt::from(-8));
    assert_eq!(m.form.evaluate(&vector(&[2, 2, 2, -4])).unwrap(), BigInt::from(-8));

    let m = fam(FamilyId::M3 { g: 1, n: 2 });
    let v = decide_almost_complex(&m, DEFAULT_SEARCH_BOUND).unwrap();
    assert_eq!(v.status, Status::Exists);
    assert_eq!(m.form.evaluate(&vector(&[2, 2, 2, -2, 2, -4])).unwrap(), BigInt::from(-16));

    let v = decide_almost_complex(&fam(FamilyId::M4 { n: 3 }), DEFAULT_SEARCH_BOUND).unwrap();
    assert_eq!(v.status, Status::NotExists);
    assert!(v.reasons[0].starts_with("mod-8 obstruction"));
}

#[test]
fn family_sweeps() {
    for g in 1..=50 {
        let v = decide_almost_complex(&fam(FamilyId::M1 { g }), DEFAULT_SEARCH_BOUND).unwrap();
        assert_eq!(v.status, Status::Exists, "M1 g={g}");
    }
    for g in 1..=20 {
        for n in 1..=20 {
            for id in [FamilyId::M2 { g, n }, FamilyId::M3 { g, n }] {
                let m = fam(id);
                let v = decide_almost_complex(&m, DEFAULT_SEARCH_BOUND).unwrap();
                assert_eq!(v.status, Status::Exists, "{id}");
                let w = v.witness.unwrap();
                assert_eq!(m.form.evaluate(&w.coefficients).unwrap(), w.square);
                assert_eq!(w.square, wu_target(&m.chi, &m.tau));
                assert!(w.coefficients.iter().all(|c| c.is_even()));
            }
        }
    }
    for n in 1..=40u32 {
        let v = decide_almost_complex(&fam(FamilyId::M4 { n }), DEFAULT_SEARCH_BOUND).unwrap();
        let want = if n % 2 == 0 { Status::Exists } else { Status::NotExists };
        assert_eq!(v.status, want, "M4 n={n}");
    }
}

#[test]
fn inconsistent_w2_is_a_validation_error() {
    let mut m = fam(FamilyId::M1 { g: 1 });
    m.w2 = Some(vec![true, false]);
    assert!(matches!(decide_almost_complex(&m, 8), Err(Error::Invalid(_))));
    m.w2 = Some(vec![false]);
    assert!(matches!(decide_almost_complex(&m, 8), Err(Error::Invalid(_))));
    assert!(validate_invariants(&m).unwrap_err().iter().any(|v| v.code == "w2"));
}

#[test]
fn rejects_oversized_bound() {
    assert!(matches!(
        decide_almost_complex(&fam(FamilyId::M1 { g: 1 }), MAX_SEARCH_BOUND + 1),
        Err(Error::Domain(_))
    ));
}

#[test]
fn enumeration_examples() {
    let e = enumerate_chern_classes(&fam(FamilyId::M1 { g: 1 }), 5).unwrap();
    assert!(e.complete);
    let got: Vec<_> = e.witnesses.iter().map(|w| w.coefficients.clone()).collect();
    assert_eq!(got, vec![vector(&[-2, 2]), vector(&[2, -2])]);

    let e = enumerate_chern_classes(&fam(FamilyId::M1 { g: 2 }), 0).unwrap();
    assert!(e.complete);
    let got: Vec<_> = e.witnesses.iter().map(|w| w.coefficients.clone()).collect();
    assert_eq!(got, vec![vector(&[-4, 2]), vector(&[-2, 4]), vector(&[2, -4]), vector(&[4, -2])]);

    for bound in [0, 3, 32] {
        let e = enumerate_chern_classes(&fam(FamilyId::M4 { n: 1 }), bound).unwrap();
        assert!(e.witnesses.is_empty());
        assert!(e.complete);
    }

    let e = enumerate_chern_classes(&fam(FamilyId::M4 { n: 2 }), 4).unwrap();
    assert!(!e.complete);
    assert!(!e.witnesses.is_empty());
}

#[test]
fn enumeration_matches_oracle_for_m1_divisor_counts() {
    // even divisor pairs of ab = -4g: a = 2u, b = 2v, uv = -g
    for g in 1..=30i64 {
        let e = enumerate_chern_classes(&fam(FamilyId::M1 { g: g as u32 }), 0).unwrap();
        let divisors = (1..=g).filter(|d| g % d == 0).count();
        assert_eq!(e.witnesses.len(), 2 * divisors, "g={g}");
        for w in &e.witnesses {
            assert_eq!(&w.coefficients[0] * &w.coefficients[1], BigInt::from(-4 * g));
        }
    }
}

#[test]
fn definite_forms_are_decided_completely() {
    // sums of three odd squares are ≡ 3 mod 8; 3, 11, 19, 27 representable, negatives never
    let f = build_form("diag(1,1,1)").unwrap();
    let v = decide_almost_complex(&with_target(f.clone(), -5), 32).unwrap();
    assert_eq!(v.status, Status::NotExists);
    let v = decide_almost_complex(&with_target(f.clone(), 27), 32).unwrap();
    assert_eq!(v.status, Status::Exists);
    // 27 = 25+1+1 = 9+9+9; max-norm 3 wins
    assert_eq!(v.witness.unwrap().coefficients, vector(&[-3, -3, -3]));
    let e = enumerate_chern_classes(&with_target(f, 11), 32).unwrap();
    assert!(e.complete);
    // 11 = 9 + 1 + 1 in three positions with all sign choices
    assert_eq!(e.witnesses.len(), 3 * 8);
}

#[test]
fn tier_three_reports_unknown_honestly() {
    // indefinite non-unimodular form with no hits in a tiny box
    let f = build_form("matrix [[2,3],[3,2]]").unwrap();
    let m = ManifoldInvariants {
        w2: Some(vec![false, false]),
        ..with_target(f, 0)
    };
    let mut m = m;
    m.chi = BigInt::from(1000);
    m.tau = BigInt::zero();
    let v = decide_almost_complex(&m, 2).unwrap();
    assert_eq!(v.status, Status::Unknown);
    assert_eq!(v.search_bound, Some(2));
}

#[test]
fn validate_examples() {
    assert_eq!(validate_invariants(&fam(FamilyId::M2 { g: 1, n: 1 })), Ok(()));
    assert_eq!(validate_invariants(&fam(FamilyId::M3 { g: 2, n: 3 })), Ok(()));
    let mut m = fam(FamilyId::M1 { g: 1 });
    m.b1 = 3;
    m.h1 = AbelianGroup::free(3);
    m.presentation = None;
    let errs = validate_invariants(&m).unwrap_err();
    assert_eq!(errs.len(), 1);
    assert_eq!(errs[0].code, "betti identity");

    let mut m = fam(FamilyId::M1 { g: 1 });
    m.tau = BigInt::from(2);
    m.h1 = AbelianGroup::free(5);
    let codes: Vec<String> = validate_invariants(&m).unwrap_err().into_iter().map(|v| v.code).collect();
    assert_eq!(codes, vec!["signature", "h1 rank", "abelianization"]);
}

fn block_form(blocks: &[u8]) -> (IntersectionForm, Vec<Vec<i64>>, Vec<bool>) {
    let mut form: Option<IntersectionForm> = None;
    let mut odd = Vec::new();
    for &b in blocks {
        let piece = match b {
            0 => IntersectionForm::hyperbolic(),
            1 => build_form("diag(1)").unwrap(),
            _ => build_form("diag(-1)").unwrap(),
        };
        odd.extend(if b == 0 { vec![false, false] } else { vec![true] });
        form = Some(match form {
            None => piece,
            Some(f) => f.direct_sum(&piece),
        });
    }
    let form = form.unwrap();
    let rows = (0..form.rank())
        .map(|i| form.matrix().row(i).iter().map(|v| v.to_i64().unwrap()).collect())
        .collect();
    (form, rows, odd)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tiers_agree_with_box_oracle(
        blocks in proptest::collection::vec(0u8..3, 1..4),
        target in -24i64..=24,
    ) {
        let (form, rows, odd) = block_form(&blocks);
        let m = ManifoldInvariants { w2: Some(odd.clone()), ..with_target(form.clone(), target) };
        let oracle = oracle_solutions(&rows, target, &odd, 6);
        let v = decide_almost_complex(&m, 32).unwrap();
        if !oracle.is_empty() {
            prop_assert_eq!(v.status, Status::Exists);
        }
        if v.status == Status::NotExists {
            prop_assert!(oracle.is_empty());
        }
        if let Some(w) = &v.witness {
            prop_assert_eq!(form.evaluate(&w.coefficients).unwrap(), BigInt::from(target));
            for (c, &o) in w.coefficients.iter().zip(&odd) {
                prop_assert_eq!(c.is_odd(), o);
            }
        }
        let e = enumerate_chern_classes(&m, 3).unwrap();
        let seen: Vec<Vec<i64>> = e.witnesses.iter()
            .map(|w| w.coefficients.iter().map(|c| c.to_i64().unwrap()).collect())
            .collect();
        let mut sorted = seen.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(&sorted, &seen);
        for x in &seen {
            let neg: Vec<i64> = x.iter().map(|v| -v).collect();
            prop_assert!(seen.contains(&neg));
        }
        let sig = form.signature().unwrap();
        for w in &e.witnesses {
            prop_assert!((&w.square - BigInt::from(sig)).mod_floor(&BigInt::from(8)).is_zero());
        }
        let in_box = oracle_solutions(&rows, target, &odd, 3);
        let restricted: Vec<Vec<i64>> =
            seen.iter().filter(|x| x.iter().all(|v| v.abs() <= 3)).cloned().collect();
        prop_assert_eq!(&restricted, &in_box);
        if !e.complete {
            prop_assert_eq!(restricted.len(), seen.len());
        }
    }
}
