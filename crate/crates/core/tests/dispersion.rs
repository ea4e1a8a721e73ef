use std::cmp::Ordering;

use latdisp_core::contfrac::{CFSequence, OneSided};
use latdisp_core::dispersion::*;
use latdisp_core::qfield::is_squarefree;
use latdisp_core::{ci_compare, Expr, QuadraticNumber};

fn q(s: &str) -> QuadraticNumber {
    s.parse().unwrap()
}

fn seq(lpre: &[u64], lper: &[u64], rpre: &[u64], rper: &[u64]) -> CFSequence {
    CFSequence::new(
        OneSided::new(lpre.to_vec(), lper.to_vec()).unwrap(),
        OneSided::new(rpre.to_vec(), rper.to_vec()).unwrap(),
    )
}

#[test]
fn box_value_examples() {
    let phi = QuadraticNumber::phi();
    let v = box_value(1, 0, &phi, &phi.conj()).unwrap();
    assert_eq!(v.exact(), Some(&q("(2 + sqrt(5))/sqrt(5)")));
    let d = q("1 + sqrt(2)");
    let v1 = box_value(2, 1, &d, &d.conj()).unwrap();
    assert_eq!(v1.exact(), Some(&q("(3 + 2*sqrt(2))/(2*sqrt(2))")));
    let v0 = box_value(2, 0, &d, &d.conj()).unwrap();
    assert_eq!(v0.exact(), Some(&q("(2 + 2*sqrt(2))/(2*sqrt(2))")));
}

#[test]
fn periodic_examples() {
    assert_eq!(disp_periodic(&[2]).unwrap(), q("(3 + 2*sqrt(2))/(2*sqrt(2))"));
    assert_eq!(disp_periodic(&[2, 1, 1, 2]).unwrap(), q("1 + 16/sqrt(221)"));
}

#[test]
fn subring_examples() {
    let r = disp_quadratic(SubringSpec::new(5, 1).unwrap()).unwrap();
    assert_eq!(r.dispersion, q("2 + sqrt(5)"));
    let r = disp_quadratic(SubringSpec::new(2, 1).unwrap()).unwrap();
    assert_eq!(r.dispersion, q("3 + 2*sqrt(2)"));
    let r = disp_quadratic(SubringSpec::new(13, 1).unwrap()).unwrap();
    assert_eq!(r.normalized, q("1 + 4/sqrt(13)"));
    assert!(SubringSpec::new(12, 1).is_err());
}

#[test]
fn subring_sweep_agrees() {
    for d in (2..=50).filter(|&d| is_squarefree(d)) {
        for n in 1..=3 {
            disp_quadratic(SubringSpec::new(d, n).unwrap()).unwrap();
        }
    }
}

#[test]
fn bounds_examples() {
    let (l, u) = coefficient_bounds(100).unwrap();
    assert_eq!(l, "2601/100".parse().unwrap());
    assert!((num_traits::ToPrimitive::to_f64(&u).unwrap() - 26.5098).abs() < 1e-4);
    let tb = tight_bounds(3).unwrap();
    assert_eq!(tb.lower.to_decimal(4), "2.1094");
    assert_eq!(tb.upper.to_decimal(5), "2.30931");
    let tb = tight_bounds(1).unwrap();
    assert_eq!(tb.lower, tb.upper);
}

#[test]
fn best_lattices_increase() {
    let lim = Expr::from(best_limit());
    let mut prev: Option<QuadraticNumber> = None;
    for k in 1..=8 {
        let b = best_lattice(k).unwrap();
        if let Some(p) = &prev {
            assert_eq!(ci_compare(&Expr::from(p), &Expr::from(&b.value)), Ok(Ordering::Less));
        }
        assert_eq!(ci_compare(&Expr::from(&b.value), &lim), Ok(Ordering::Less));
        prev = Some(b.value);
    }
    assert_eq!(best_lattice(3).unwrap().period, vec![2, 1, 1, 2]);
}

#[test]
fn threshold_witnesses() {
    let cases = [
        (seq(&[1, 2], &[2, 1], &[2], &[2, 1]), "(41 + 4*sqrt(3))/23"),
        (seq(&[1, 1], &[2, 1, 1, 1], &[2, 1, 1], &[2, 1, 1, 1]), "4/15*(3 + 2*sqrt(6))"),
        (seq(&[2, 2, 2], &[1, 1, 1, 2, 2, 2], &[2, 1, 1], &[2, 2, 2, 1, 1, 1]), "2/2519*(1157 + 101*sqrt(210))"),
    ];
    for (s, want) in cases {
        let want = q(want);
        let w = witness_box_value(&s, 0, 1).unwrap();
        assert_eq!(w.exact(), Some(&want));
        let full = disp_sequence(&s).unwrap();
        let v = full.value.expr().unwrap();
        assert_ne!(ci_compare(v, &Expr::from(&want)).unwrap(), Ordering::Less);
    }
}

#[test]
fn witness_reproduces_value() {
    let s = seq(&[3], &[1, 2], &[1, 4], &[2, 2, 1]);
    let r = disp_sequence(&s).unwrap();
    assert!(r.attained);
    let Some(Witness::Box { i, j }) = r.witness else { panic!("{r:?}") };
    let w = witness_box_value(&s, i, j).unwrap();
    assert_eq!(&w, r.value.expr().unwrap());
}

#[test]
fn coefficient_checks() {
    let r = coefficient_bound_check(&q("6 + delta_217")).unwrap();
    assert_eq!(r.period, vec![13, 1, 6, 2, 3, 4, 1, 1, 1, 1, 1, 4, 3, 2, 6, 1]);
    assert_eq!((r.a0, r.max_interior, r.bound.clone()), (13, Some(6), 7.into()));
    assert!(r.pass());
    let r = coefficient_bound_check(&q("1 + 2*delta_5")).unwrap();
    assert_eq!(r.period, vec![4]);
    assert!(r.pass());
    let r = coefficient_bound_check(&q("4 + sqrt(19)")).unwrap();
    assert_eq!(r.period, vec![8, 2, 1, 3, 1, 2]);
    assert!(r.pass() && r.interior_le_a0);
    assert!(coefficient_bound_check(&q("sqrt(2)")).is_err());
    assert!(coefficient_bound_check(&q("sqrt(2)/2 + 3")).is_err());
}

#[test]
fn statistics_scan_small() {
    let rows = coefficient_statistics_scan(10, 10).unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| !r.is_counterexample()));
    let golden = rows.iter().find(|r| r.trace == 1 && r.norm == -1).unwrap();
    assert_eq!(golden.distinct, vec![1]);
}

#[test]
fn table_rows() {
    let rows = table1(&TABLE1_COEFFS).unwrap();
    assert_eq!(rows.len(), 17);
    assert_eq!(rows[0].upper.to_decimal(4), "2.1547");
    assert_eq!(rows[8].a, 10);
    assert_eq!(rows[8].lower.to_decimal(5), "3.64757");
    assert_eq!(rows[8].upper.to_decimal(5), "4.04256");
}

mod properties {
    use proptest::prelude::*;

    use super::*;

    fn block() -> impl Strategy<Value = Vec<u64>> {
        prop::collection::vec(1u64..=5, 1..4)
    }

    fn sequences() -> impl Strategy<Value = CFSequence> {
        let pre = || prop::collection::vec(1u64..=5, 0..3);
        (pre(), block(), pre(), block()).prop_map(|(lp, l, rp, r)| seq(&lp, &l, &rp, &r))
    }

    fn value(s: &CFSequence) -> Expr {
        disp_sequence(s).unwrap().value.expr().unwrap().clone()
    }

    fn eq(a: &Expr, b: &Expr) -> bool {
        (a.clone() - b.clone()).enclose(256).unwrap().contains_zero()
    }

    fn max_coeff(s: &CFSequence) -> u64 {
        s.left.preperiod().iter().chain(s.left.period()).chain(s.right.preperiod()).chain(s.right.period()).copied().max().unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 40, failure_persistence: None, ..ProptestConfig::default() })]

        #[test]
        fn sandwiched_by_tight_bounds(p in block()) {
            let s = CFSequence::periodic(&p).unwrap();
            let a = *p.iter().max().unwrap();
            prop_assume!(a >= 2);
            let v = value(&s);
            let t = tight_bounds(a).unwrap();
            prop_assert!(ci_compare(&Expr::from(&t.lower), &v).unwrap() != Ordering::Greater);
            prop_assert!(ci_compare(&v, &Expr::from(&t.upper)).unwrap() != Ordering::Greater);
        }

        #[test]
        fn golden_is_smallest(s in sequences()) {
            let phi = QuadraticNumber::phi();
            let g = Expr::from(&phi * &phi * &phi) / Expr::from(q("sqrt(5)"));
            let v = value(&s);
            prop_assert!(eq(&v, &g) || ci_compare(&v, &g).unwrap() == Ordering::Greater);
        }

        #[test]
        fn shift_reverse_invariance(p in block(), k in -4i64..=4, rev in any::<bool>()) {
            let s = CFSequence::periodic(&p).unwrap();
            prop_assume!(k.unsigned_abs() as usize <= p.len());
            prop_assert!(eq(&value(&s.shift_reverse(k, rev).unwrap()), &value(&s)));
        }

        #[test]
        fn block_maxima_within_coefficient_bounds(s in sequences()) {
            for i in -6i64..6 {
                let a = s.coeff(i).unwrap();
                if a < 2 {
                    continue;
                }
                let (lo, hi) = coefficient_bounds(a).unwrap();
                let best = [a / 2, a.div_ceil(2)]
                    .into_iter()
                    .filter(|&j| j < a)
                    .map(|j| witness_box_value(&s, i, j).unwrap())
                    .max_by(|x, y| ci_compare(x, y).unwrap())
                    .unwrap();
                prop_assert_eq!(ci_compare(&Expr::from(QuadraticNumber::from_rational(lo)), &best).unwrap(), Ordering::Less);
                prop_assert_eq!(ci_compare(&best, &Expr::from(QuadraticNumber::from_rational(hi))).unwrap(), Ordering::Less);
            }
        }

        #[test]
        fn box_witness_reproduces(s in sequences()) {
            let r = disp_sequence(&s).unwrap();
            let v = r.value.expr().unwrap();
            if let Some(Witness::Box { i, j }) = r.witness {
                prop_assert!(r.attained);
                prop_assert!(eq(&witness_box_value(&s, i, j).unwrap(), v));
            }
            let a = max_coeff(&s);
            for i in -6i64..6 {
                for j in 0..s.coeff(i).unwrap() {
                    let w = witness_box_value(&s, i, j).unwrap();
                    prop_assert!(eq(&w, v) || ci_compare(&w, v).unwrap() == Ordering::Less);
                }
            }
            prop_assert!(a >= 1);
        }
    }
}
