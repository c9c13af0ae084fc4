mod support;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use translen_core::penner::{
    blocks_touched, build_penner, is_block_interval, penner_closed_form, penner_exact_bound, shadow,
    vanishing_certificate, BlockLabel, PennerSpec, ShadowMode,
};
use translen_core::exactmat::IntMatrix;

fn random_positive_spec(rng: &mut impl Rng, r: usize, m: usize) -> PennerSpec {
    let blocks: BTreeMap<BlockLabel, IntMatrix> = BlockLabel::ALL
        .iter()
        .map(|&l| {
            let entries = (0..r * r).map(|_| BigInt::from(rng.random_range(1..=3))).collect();
            (l, IntMatrix::new(r, r, entries).unwrap())
        })
        .collect();
    PennerSpec::with_blocks(r, m, blocks)
}

#[test]
fn block_interval_law() {
    let mut rng = support::rng(21);
    for r in 1..=3 {
        for m in 4..=20 {
            for spec in [PennerSpec::all_ones(r, m), random_positive_spec(&mut rng, r, m)] {
                for c in 1..=m {
                    let smax = m / 2 - 1;
                    let trace = shadow(&spec, c, smax).unwrap();
                    for (s, support) in trace.iter().enumerate() {
                        if c >= s + 2 && c + s < m {
                            assert!(is_block_interval(r, m, support, c - s, c + s), "r={r} m={m} c={c} s={s}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn pattern_mode_agrees_with_exact_for_positive_blocks() {
    let mut rng = support::rng(22);
    for _ in 0..40 {
        let r = rng.random_range(1..=3);
        let m = rng.random_range(4..=14);
        let mut spec = random_positive_spec(&mut rng, r, m);
        let c = rng.random_range(1..=m);
        let exact = shadow(&spec, c, m).unwrap();
        spec.mode = ShadowMode::Pattern;
        assert_eq!(shadow(&spec, c, m).unwrap(), exact);
    }
}

#[test]
fn column_support_of_built_matrix() {
    let mut rng = support::rng(23);
    for r in 1..=3 {
        for m in 4..=12 {
            let spec = random_positive_spec(&mut rng, r, m);
            let p = build_penner(&spec).unwrap();
            for n in 1..=m {
                let allowed: Vec<usize> = match n {
                    1 => vec![1, 2, m],
                    2 => vec![1, 2, 3],
                    _ if n == m => vec![1, 2, m - 1, m],
                    _ => vec![n - 1, n, n + 1],
                };
                let mut rows = Vec::new();
                for j in (n - 1) * r..n * r {
                    for i in 0..r * m {
                        if !p.get(i, j).is_zero() {
                            rows.push(i / r + 1);
                        }
                    }
                }
                rows.sort_unstable();
                rows.dedup();
                assert_eq!(rows, allowed, "r={r} m={m} column block {n}");
            }
        }
    }
}

#[test]
fn certificates_are_deterministic() {
    let mut rng = support::rng(24);
    let spec = random_positive_spec(&mut rng, 2, 11);
    assert_eq!(vanishing_certificate(&spec).unwrap(), vanishing_certificate(&spec.clone()).unwrap());
}

#[test]
fn zero_blocks_still_certify() {
    // Zero blocks only shrink supports, so the certificate survives.
    let mut spec = PennerSpec::all_ones(2, 9);
    spec.blocks.insert(BlockLabel::G, IntMatrix::zeros(2, 2));
    spec.blocks.insert(BlockLabel::B, IntMatrix::zeros(2, 2));
    let cert = vanishing_certificate(&spec).unwrap();
    assert!(cert.certified);
    let touched = blocks_touched(2, cert.support_trace.last().unwrap());
    assert!(!touched.is_empty());
    assert!(touched.iter().all(|b| (2..=8).contains(b)));
}

#[test]
fn bound_ordering_by_parity() {
    for m in 4..=200usize {
        let (exact, closed) = (penner_exact_bound(m), penner_closed_form(m));
        if m % 2 == 0 {
            assert_eq!(exact, closed);
        } else {
            assert!(exact > closed);
        }
    }
}
