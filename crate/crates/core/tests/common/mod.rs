#![allow(dead_code)]

use periodfix::{Completion, Composition, CuspidalDatum, LExpr, LLeaf, Rational, RepLabel, RepRef};
use proptest::prelude::*;

/// Block sizes with a label choice per block; labels are tied to the block
/// size so that a datum is always valid, and choices 1 and 2 are dual.
pub fn datum_strategy(max_k: usize, max_part: usize, max_total: usize) -> impl Strategy<Value = CuspidalDatum> {
    (prop::collection::vec((1..=max_part, 0u8..4), 1..=max_k), any::<u32>())
        .prop_filter("total too large", move |(blocks, _)| blocks.iter().map(|b| b.0).sum::<usize>() <= max_total)
        .prop_map(|(blocks, seed)| {
            let total: usize = blocks.iter().map(|b| b.0).sum();
            let n = seed as usize % (total / 2 + 1);
            build(&blocks, n)
        })
}

/// As [`datum_strategy`] with `m = 0`.
pub fn equal_rank_strategy(max_k: usize, max_part: usize) -> impl Strategy<Value = CuspidalDatum> {
    prop::collection::vec((1..=max_part, 0u8..4), 1..=max_k)
        .prop_filter("odd total", |blocks| blocks.iter().map(|b| b.0).sum::<usize>() % 2 == 0)
        .prop_map(|blocks| {
            let total: usize = blocks.iter().map(|b| b.0).sum();
            build(&blocks, total / 2)
        })
}

pub fn build(blocks: &[(usize, u8)], n: usize) -> CuspidalDatum {
    let total: usize = blocks.iter().map(|b| b.0).sum();
    let labels = blocks
        .iter()
        .map(|&(p, c)| match c {
            0 => RepLabel::self_dual(format!("r{p}")),
            1 => RepLabel::new(format!("s{p}"), format!("t{p}")),
            2 => RepLabel::new(format!("t{p}"), format!("s{p}")),
            _ => RepLabel::self_dual(format!("u{p}")),
        })
        .collect();
    let parts = Composition::new(blocks.iter().map(|b| b.0).collect()).unwrap();
    CuspidalDatum::new(parts, labels, n, total - 2 * n).unwrap()
}

pub fn composition_strategy(max_total: usize) -> impl Strategy<Value = Composition> {
    (1..=max_total)
        .prop_flat_map(|total| prop::collection::vec(any::<bool>(), total - 1))
        .prop_map(|cuts| {
            // a cut after position i ends a block
            let mut parts = vec![1];
            for cut in cuts {
                if cut {
                    parts.push(1);
                } else {
                    *parts.last_mut().unwrap() += 1;
                }
            }
            Composition::new(parts).unwrap()
        })
}

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(a, b)| Rational::new(a, b))
}

fn rep() -> impl Strategy<Value = RepRef> {
    (prop::sample::select(vec!["a", "b", "c"]), any::<bool>(), any::<bool>())
        .prop_map(|(l, self_dual, dualized)| {
            let dual = if self_dual { l.to_string() } else { format!("{l}*") };
            RepRef::new(l, dual, dualized)
        })
}

fn places() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["S".to_string(), "T".to_string()])
}

fn completion() -> impl Strategy<Value = Completion> {
    prop_oneof![
        Just(Completion::Complete),
        places().prop_map(Completion::Partial),
        places().prop_map(Completion::Local),
    ]
}

pub fn leaf() -> impl Strategy<Value = LLeaf> {
    prop_oneof![
        4 => (rep(), rep(), prop_oneof![Just(Rational::new(1, 1)), rational()], completion())
            .prop_map(|(a, b, s, c)| LLeaf::rankin_selberg(a, b, s, c)),
        1 => (rep(), rep(), rational()).prop_map(|(a, b, s)| LLeaf::epsilon(a, b, s)),
        1 => places().prop_map(|places| LLeaf::Tamagawa { places }),
        1 => (Just(vec![1usize, 0, 2]).prop_shuffle(), places(), prop::option::of(Just("Phi".to_string())))
            .prop_map(|(sigma, places, schwartz)| LLeaf::LocalZeta { sigma, places, schwartz }),
        1 => places().prop_map(|places| LLeaf::Jacquet { parabolic: "Q".into(), places }),
        1 => rational().prop_map(LLeaf::Rational),
    ]
}

/// Trees built through the smart constructors.
pub fn expr() -> impl Strategy<Value = LExpr> {
    leaf().prop_map(LExpr::leaf).prop_recursive(4, 48, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..4).prop_map(LExpr::product),
            prop::collection::vec(inner.clone(), 0..4).prop_map(LExpr::sum),
            inner.prop_map(|e| e.inverse().unwrap_or(LExpr::Zero)),
        ]
    })
}
