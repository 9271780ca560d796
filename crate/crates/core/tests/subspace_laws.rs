use std::sync::Arc;

use flagforge_core::epcore::{EpSeq, EpSet};
use flagforge_core::exactnum::{intersect_spans, q, rank_of, Rational};
use flagforge_core::pairedspace::{
    finite_perp, same_span_modulo, Model, PairedSpaceModel, Side, Subspace, TruncatedModel, Vector,
};
use proptest::prelude::*;

fn models() -> Vec<Model> {
    let w_sum = PairedSpaceModel::new(vec![], vec![EpSeq::constant(q(1))], vec![], None).unwrap();
    let alt = PairedSpaceModel::new(
        vec![EpSeq::new(vec![q(2)], vec![q(1), q(0)]).unwrap()],
        vec![EpSeq::new(vec![], vec![q(0), q(1)]).unwrap()],
        vec![vec![q(3)]],
        None,
    )
    .unwrap();
    vec![PairedSpaceModel::plain(), PairedSpaceModel::dense_line(), Arc::new(w_sum), Arc::new(alt)]
}

#[derive(Clone, Debug)]
struct Shape {
    threshold: usize,
    period: usize,
    pre: Vec<bool>,
    res: Vec<bool>,
    corr: Vec<(Vec<i64>, Vec<i64>)>,
}

fn shape() -> impl Strategy<Value = Shape> {
    (0usize..4, 1usize..4).prop_flat_map(|(t, p)| {
        (
            Just(t),
            Just(p),
            prop::collection::vec(any::<bool>(), t),
            prop::collection::vec(any::<bool>(), p),
            prop::collection::vec(
                (prop::collection::vec(-2i64..3, 6), prop::collection::vec(-1i64..2, 1)),
                0..3,
            ),
        )
            .prop_map(|(threshold, period, pre, res, corr)| Shape { threshold, period, pre, res, corr })
    })
}

fn build(m: &Model, side: Side, s: &Shape) -> Subspace {
    let set = EpSet::new(
        s.threshold,
        s.period,
        (0..s.threshold).filter(|&i| s.pre[i]),
        (0..s.period).filter(|&r| s.res[r]),
    )
    .unwrap();
    let naug = m.n_augs(side);
    let corr = s
        .corr
        .iter()
        .map(|(b, a)| {
            Vector::from_parts(
                side,
                b.iter().enumerate().map(|(i, &c)| (i, q(c))),
                a.iter().take(naug).map(|&c| q(c)).chain(std::iter::repeat(q(0))).take(naug).collect(),
            )
        })
        .collect();
    Subspace::new(m, side, set, vec![], corr).unwrap()
}

fn levels(a: &Subspace, b: &Subspace) -> Vec<usize> {
    let (n0, p0) = a.window();
    let (n1, p1) = b.window();
    let n = n0.max(n1);
    let p = num_lcm(p0, p1);
    vec![n + p, n + 2 * p, n + 3 * p]
}

fn num_lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn triple_perp_and_closure(mi in 0usize..4, side_v in any::<bool>(), s in shape()) {
        let m = &models()[mi];
        let side = if side_v { Side::V } else { Side::VStar };
        let a = build(m, side, &s);
        let p = a.perp();
        prop_assert!(p.perp().perp().same_as(&p).unwrap());
        let c = a.closure();
        prop_assert!(c.contains(&a).unwrap());
        prop_assert!(c.closure().same_as(&c).unwrap());
        if m.is_pure_basis() {
            prop_assert!(a.is_closed());
        }
    }

    #[test]
    fn perp_reverses_inclusion(mi in 0usize..4, s in shape(), t in shape()) {
        let m = &models()[mi];
        let a = build(m, Side::V, &s);
        let b = a.sum(&build(m, Side::V, &t)).unwrap();
        prop_assert!(b.contains(&a).unwrap());
        prop_assert!(a.perp().contains(&b.perp()).unwrap());
    }

    #[test]
    fn intersection_and_sum_truncate(mi in 0usize..4, side_v in any::<bool>(), s in shape(), t in shape()) {
        let m = &models()[mi];
        let side = if side_v { Side::V } else { Side::VStar };
        let a = build(m, side, &s);
        let b = build(m, side, &t);
        let i = a.intersection(&b).unwrap();
        let su = a.sum(&b).unwrap();
        prop_assert!(a.contains(&i).unwrap() && b.contains(&i).unwrap());
        prop_assert!(su.contains(&a).unwrap() && su.contains(&b).unwrap());
        for n in levels(&a, &b) {
            let dim = n + m.n_augs(side);
            let ta = a.truncate(n);
            let tb = b.truncate(n);
            let ti = intersect_spans(&ta, &tb, dim);
            prop_assert!(same_span_modulo(&i.truncate(n), &ti, &[], dim));
            let mut all = ta.clone();
            all.extend(tb.clone());
            prop_assert!(same_span_modulo(&su.truncate(n), &all, &[], dim));
        }
    }

    #[test]
    fn perp_truncates_coherently(mi in 0usize..3, side_v in any::<bool>(), s in shape()) {
        let m = &models()[mi];
        let side = if side_v { Side::V } else { Side::VStar };
        let a = build(m, side, &s);
        let p = a.perp();
        for n in levels(&a, &p) {
            let t = TruncatedModel::new(m, n);
            let fp = finite_perp(&t, side, &a.truncate(n));
            let dim = t.dim(side.dual());
            prop_assert!(same_span_modulo(&p.truncate(n), &fp, t.radical(side.dual()), dim),
                "level {} perp {:?} of {:?}", n, p, a);
        }
    }

    #[test]
    fn members_of_generators(mi in 0usize..4, s in shape(), coeffs in prop::collection::vec(-3i64..4, 8)) {
        let m = &models()[mi];
        let a = build(m, Side::V, &s);
        let n = a.window().0 + a.window().1 + 2;
        let basis = a.truncate(n);
        let mut v = vec![Rational::from_integer(0.into()); n + m.n_augs(Side::V)];
        for (b, c) in basis.iter().zip(coeffs.iter()) {
            for (x, y) in v.iter_mut().zip(b) {
                *x += q(*c) * y;
            }
        }
        let vec = Vector::from_dense(Side::V, n, &v);
        prop_assert!(a.member(&vec).unwrap());
        prop_assert_eq!(rank_of(&basis, v.len()), basis.len());
    }
}
