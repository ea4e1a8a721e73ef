use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

use latdisp_core::contfrac::*;
use latdisp_core::qfield::is_squarefree;
use latdisp_core::QuadraticNumber;

fn q(s: &str) -> QuadraticNumber {
    s.parse().unwrap()
}

#[test]
fn expansion_examples() {
    let e = cf_expand(&q("6 + delta_217")).unwrap();
    assert!(e.is_purely_periodic());
    assert_eq!(e.pure_period().unwrap().len(), 16);
    assert_eq!(cf_expand(&q("1 + sqrt(2)")).unwrap().pure_period(), Some(vec![2]));
    assert_eq!(cf_expand(&q("2/5")).unwrap().finite_coefficients(), Some(vec![0, 2, 1, 1]));
    assert!(cf_expand(&q("-2/5")).is_err());
}

#[test]
fn convergent_examples() {
    let ones = CFSequence::periodic(&[1]).unwrap();
    let c = ones.convergent(6).unwrap();
    assert_eq!((c.p, c.q), (BigInt::from(13), BigInt::from(8)));
    let s = CFSequence::periodic(&[3, 1, 4]).unwrap();
    let c = s.convergent(0).unwrap();
    assert_eq!((c.p, c.q), (BigInt::from(1), BigInt::from(0)));
    let a = ones.convergent(-3).unwrap();
    let b = ones.convergent(-4).unwrap();
    assert_eq!(&a.p * &b.q - &b.p * &a.q, BigInt::from(-1));
}

#[test]
fn tail_examples() {
    let phi = QuadraticNumber::phi();
    let (d, dt) = CFSequence::periodic(&[1]).unwrap().tail_values(-5).unwrap();
    assert_eq!((d, -dt), (phi.clone(), &phi - &QuadraticNumber::one()));
    let (d, dt) = CFSequence::periodic(&[2]).unwrap().tail_values(3).unwrap();
    assert_eq!((d, dt), (q("1 + sqrt(2)"), q("1 - sqrt(2)")));
    let (d, dt) = CFSequence::periodic(&[2, 1, 1, 2]).unwrap().tail_values(0).unwrap();
    // Delta_0 = [(2,1,1,2)] solves 5x^2 - 11x - 5 = 0
    assert_eq!(d, q("(11 + sqrt(221))/10"));
    assert!(dt.is_negative() && (&dt + &QuadraticNumber::one()).is_positive());
}

#[test]
fn shift_reverse_examples() {
    let s = CFSequence::periodic(&[2, 1, 1, 2]).unwrap();
    let t = s.shift_reverse(2, false).unwrap();
    for i in -8..8 {
        assert_eq!(t.get(i), s.get(i + 2));
    }
    assert_eq!(s.shift_reverse(0, false).unwrap(), s);
    let u = CFSequence::periodic(&[1, 2]).unwrap().shift_reverse(0, true).unwrap();
    assert_eq!(u.right.period(), &[1, 2]);
    assert_eq!(u.get(1), Some(2));
    assert_eq!(u.get(-1), Some(2));
    assert_eq!(u.shift(1).unwrap().right.period(), &[2, 1]);
}

#[test]
fn generator_examples() {
    assert_eq!(purely_periodic_generator(5, 1).unwrap(), QuadraticNumber::phi());
    assert_eq!(purely_periodic_generator(2, 1).unwrap(), q("1 + sqrt(2)"));
    let g = purely_periodic_generator(5, 2).unwrap();
    assert_eq!(g, q("1 + 2*delta_5"));
    assert_eq!(cf_expand(&g).unwrap().pure_period(), Some(vec![4]));
}

#[test]
fn sequence_literals() {
    let s: CFSequence = "(1,2)|(2,1,1,2)".parse().unwrap();
    assert_eq!(s.get(0), Some(2));
    assert_eq!(s.get(-1), Some(2));
    let e: Expansion = "[2;1,1,(2,1,1,1)]".parse().unwrap();
    assert_eq!(e.get(0), Some(2));
    assert_eq!(e.get(3), Some(2));
    assert_eq!(e.get(4), Some(1));
}

fn is_rotation(p: &[u64], target: &[u64]) -> bool {
    p.len() == target.len() && (0..p.len()).any(|k| p[k..].iter().chain(&p[..k]).eq(target.iter()))
}

/// Which identity the data supports for the expansion of `-1/conj(Delta)`.
#[test]
fn conjugate_expansion_artifact() {
    let mut cases: Vec<QuadraticNumber> = Vec::new();
    for d in (2..60u64).filter(|&d| is_squarefree(d)) {
        for n in 1..=2 {
            cases.push(purely_periodic_generator(d, n).unwrap());
        }
    }
    for p in [&[1u64, 2, 3][..], &[1, 1, 2], &[3, 1, 4, 1, 5], &[2, 7, 1, 8, 2, 8], &[1, 2, 2, 3]] {
        cases.push(CFSequence::periodic(p).unwrap().tail_values(0).unwrap().0);
    }
    let (mut reversed, mut forward, total) = (0, 0, cases.len());
    for g in &cases {
        let period = cf_expand(g).unwrap().pure_period().unwrap();
        let inv = (-g.conj()).inv().unwrap();
        let got = cf_expand(&inv).unwrap().pure_period().unwrap();
        let mut rev = period.clone();
        rev.reverse();
        if is_rotation(&rev, &got) {
            reversed += 1;
        }
        if is_rotation(&period, &got) {
            forward += 1;
        }
        assert_eq!(got, rev, "{g}");
    }
    println!("-1/conj(Delta) has the reversed period in {reversed}/{total} cases, the forward period in {forward}/{total}");
    assert_eq!(reversed, total);
}

fn periods() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..6, 1..5)
}

fn generator() -> impl Strategy<Value = QuadraticNumber> {
    (2u64..100, 1u64..4)
        .prop_filter("squarefree", |(d, _)| is_squarefree(*d))
        .prop_map(|(d, n)| purely_periodic_generator(d, n).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn determinant_identity(p in periods(), lo in -12i64..0, hi in 1i64..12) {
        let s = CFSequence::periodic(&p).unwrap();
        let cs = s.convergents(lo, hi).unwrap();
        for w in cs.windows(2) {
            let sign = if w[1].index % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(&w[1].p * &w[0].q - &w[0].p * &w[1].q, BigInt::from(sign));
        }
    }

    #[test]
    fn error_sandwich_and_signs(g in generator()) {
        let period = cf_expand(&g).unwrap().pure_period().unwrap();
        prop_assert!(!period.is_empty());
        let s = CFSequence::periodic(&period).unwrap();
        for c in s.convergents(0, 12).unwrap() {
            let e = c.eval(&g);
            if c.index % 2 == 0 {
                prop_assert!(e.is_positive());
            } else {
                prop_assert!(e.is_negative());
            }
            if c.index >= 1 {
                let a = s.coeff(c.index).unwrap() as i64;
                let qi = BigRational::from_integer(c.q.abs());
                let abs = e.abs();
                let lo = QuadraticNumber::from_rational((BigRational::from_integer((a + 2).into()) * &qi).recip());
                let hi = QuadraticNumber::from_rational((BigRational::from_integer(a.into()) * &qi).recip());
                prop_assert!((&abs - &lo).is_positive());
                prop_assert!((&hi - &abs).is_positive());
            }
        }
    }

    #[test]
    fn shifted_expansion_matches_tail(g in generator(), k in 0usize..20) {
        let period = cf_expand(&g).unwrap().pure_period().unwrap();
        let s = CFSequence::periodic(&period).unwrap();
        let (d, _) = s.tail_values(k as i64).unwrap();
        let mut rot = period.clone();
        rot.rotate_left(k % period.len());
        prop_assert_eq!(cf_expand(&d).unwrap().pure_period().unwrap(), rot);
    }

    #[test]
    fn norms_periodic(g in generator(), k in 1usize..3) {
        let period = cf_expand(&g).unwrap().pure_period().unwrap();
        let l = period.len();
        let s = CFSequence::periodic(&period).unwrap();
        let cs = s.convergents(0, ((k + 1) * l) as i64).unwrap();
        for i in 0..l {
            let a = cs[i].eval(&g).norm().abs();
            let b = cs[i + k * l].eval(&g).norm().abs();
            prop_assert_eq!(a, b);
        }
        for c in cs.iter().filter(|c| c.index as usize <= 3 * l) {
            let n = c.eval(&g).norm();
            let signed = if c.index % 2 == 0 { n } else { -n };
            prop_assert_eq!(signed == BigRational::from_integer(1.into()), c.index as usize % l == 0);
        }
    }

    #[test]
    fn literal_round_trip(lp in periods(), lpre in prop::collection::vec(1u64..6, 0..3), rpre in prop::collection::vec(1u64..6, 0..3), rp in periods()) {
        let s = CFSequence::new(OneSided::new(lpre, lp).unwrap(), OneSided::new(rpre, rp).unwrap());
        let t: CFSequence = s.to_string().parse().unwrap();
        for i in -15..15 {
            prop_assert_eq!(t.get(i), s.get(i));
        }
    }
}
