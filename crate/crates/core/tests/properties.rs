#![allow(clippy::needless_range_loop)]

use loghen::hopf::{Algebra, AlgebraKind, Element};
use loghen::invariant::InvariantEngine;
use loghen::mtrace::TracePrime;
use loghen::tangle::{signature, ClosurePresentation, Convention, Role};
use proptest::prelude::*;

fn symmetric(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(-3i64..=3, n * (n + 1) / 2).prop_map(move |flat| {
        let mut m = vec![vec![0; n]; n];
        let mut it = flat.into_iter();
        for i in 0..n {
            for j in i..n {
                let x = it.next().unwrap();
                m[i][j] = x;
                m[j][i] = x;
            }
        }
        m
    })
}

// Tᵀ A T for an elementary T = I + c·e_{ij}.
fn congruence(a: &[Vec<i64>], i: usize, j: usize, c: i64) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut b = a.to_vec();
    for r in 0..n {
        b[r][j] += c * a[r][i];
    }
    let rows = b.clone();
    for k in 0..n {
        b[j][k] += c * rows[i][k];
    }
    b
}

fn element(alg: &'static Algebra, coeffs: &[i64]) -> Element {
    coeffs.iter().enumerate().fold(alg.zero(), |acc, (i, &c)| {
        acc + alg.scalar(alg.scalars().int(c)) * alg.basis(i as u32)
    })
}

fn word(strands: i64, len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec((1..strands, any::<bool>()).prop_map(|(g, pos)| if pos { g } else { -g }), 1..=len)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn signature_is_a_congruence_invariant(a in symmetric(4), ops in prop::collection::vec((0usize..4, 0usize..4, -2i64..=2), 0..6)) {
        let mut b = a.clone();
        for (i, j, c) in ops {
            if i != j {
                b = congruence(&b, i, j, c);
            }
        }
        prop_assert_eq!(signature(&a), signature(&b));
        let neg: Vec<Vec<i64>> = a.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        prop_assert_eq!(signature(&neg), -signature(&a));
    }

    #[test]
    fn presentation_round_trip(w in word(4, 8)) {
        let pres = ClosurePresentation::closure(4, &w, Role::Surgery).unwrap();
        let back = ClosurePresentation::from_json(&pres.to_json()).unwrap();
        prop_assert_eq!(pres.hash(), back.hash());
        let valid = pres.validate().unwrap();
        let lk = valid.linking_matrix();
        for (i, row) in lk.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                prop_assert_eq!(x, lk[j][i]);
            }
        }
        let framings: Vec<i64> = (0..lk.len()).map(|i| lk[i][i]).collect();
        prop_assert_eq!(framings, valid.writhes());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn modified_trace_is_cyclic(x in prop::collection::vec(-2i64..=2, 16), y in prop::collection::vec(-2i64..=2, 16)) {
        let alg = Algebra::get(AlgebraKind::Restricted, 2).unwrap();
        let tp = TracePrime::get(2).unwrap();
        let (x, y) = (element(alg, &x), element(alg, &y));
        let xy = &x * &y;
        prop_assert_eq!(tp.tr_prime(&xy), tp.tr_prime(&(&y * &x)));
        prop_assert_eq!(tp.tr_prime(&xy), tp.tr_prime_fast(&xy));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn invariant_survives_conjugation(w in word(3, 5), shift in 0usize..5) {
        let engine = InvariantEngine::new(2, Convention::A).unwrap();
        let mut v = w.clone();
        v.rotate_left(shift % w.len());
        let eval = |w: &[i64]| {
            let pres = ClosurePresentation::closure(3, w, Role::Surgery).unwrap();
            engine.h_log(&engine.input(&pres).unwrap()).unwrap().exact
        };
        prop_assert_eq!(eval(&w), eval(&v));
    }
}
