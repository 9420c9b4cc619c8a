use proptest::prelude::*;
use proptest::sample::subsequence;
use reqlint_core::eval::{error_metrics, match_tables, precision_recall_f1, spearman, tree_importance, ConfusionCounts};
use reqlint_core::{
    clarity, compute_alpha, testability, AlphaConfig, AlphaProfile, ClarityInput, Criticality, Policy, RequirementType,
    SmellTable, SmellType, Template,
};

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(1000)
}

/// Valid (words, smelly, types) triples.
fn counts() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..400)
        .prop_flat_map(|w| (Just(w), 0..=w))
        .prop_flat_map(|(w, s)| (Just(w), Just(s), if s == 0 { 0..=0usize } else { 1..=s.min(9) }))
}

const CODES: [&str; 11] = ["CS", "SS", "LW", "EC", "CL", "AT", "LT", "EE", "ME", "SP", "MD"];

fn profile() -> impl Strategy<Value = AlphaProfile> {
    (
        subsequence(CODES.to_vec(), 1..=4),
        prop::sample::select(Criticality::ALL.to_vec()),
        prop::sample::select(RequirementType::ALL.to_vec()),
        prop::sample::select(Template::ALL.to_vec()),
    )
        .prop_map(|(d, c, r, t)| AlphaProfile::new(&d, c, r, t, Policy::Softened))
}

fn c(w: usize, s: usize, t: usize) -> f64 {
    clarity(ClarityInput::new(w, s, t)).unwrap()
}

fn table() -> impl Strategy<Value = SmellTable> {
    prop::collection::vec((0usize..9, prop::sample::select(vec!["call", "Call", "page", "can", "more", "this"])), 0..12)
        .prop_map(|items| {
            let mut t = SmellTable::new();
            for (i, w) in items {
                t.push(SmellType::ALL[i], w);
            }
            t
        })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn clarity_and_testability_ranges((w, s, t) in counts(), alpha in 0.0f64..1.0, n in 1usize..12) {
        let cl = c(w, s, t);
        prop_assert!((0.0..=1.0).contains(&cl));
        prop_assert_eq!(cl == 1.0, s == 0);
        let tv = testability(cl, alpha, n).unwrap();
        prop_assert!((0.0..=1.0).contains(&tv));
        prop_assert!(tv <= cl);
        prop_assert!((tv - cl / (1.0 + alpha).powi(n as i32 - 1)).abs() <= 1e-12);
    }

    #[test]
    fn clarity_falls_with_smelly_words((w, s, t) in counts()) {
        prop_assume!(s >= 1 && s < w);
        prop_assert!(c(w, s + 1, t) < c(w, s, t));
    }

    #[test]
    fn clarity_falls_with_smell_types(w in 10usize..400, s in 1usize..10) {
        prop_assume!(s < w);
        for t in 1..s.min(9) {
            prop_assert!(c(w, s, t + 1) < c(w, s, t));
        }
    }

    #[test]
    fn doubling_smelly_words_never_raises_testability(
        (w, s, t) in (2usize..400).prop_flat_map(|w| (Just(w), 1..=w / 2)).prop_flat_map(|(w, s)| (Just(w), Just(s), 1..=s.min(9))),
        alpha in 0.0f64..1.0,
        n in 1usize..8,
    ) {
        let once = testability(c(w, s, t), alpha, n).unwrap();
        let twice = testability(c(w, 2 * s, t), alpha, n).unwrap();
        prop_assert!(twice <= once);
    }

    #[test]
    fn testability_falls_with_sentences(cl in 0.01f64..=1.0, alpha in 0.001f64..1.0, n in 1usize..20) {
        prop_assert!(testability(cl, alpha, n + 1).unwrap() < testability(cl, alpha, n).unwrap());
        prop_assert_eq!(testability(cl, 0.0, n).unwrap(), cl);
    }

    #[test]
    fn hardened_alpha_dominates(p in profile(), cl in 0.0f64..=1.0, n in 1usize..8) {
        let soft = compute_alpha(&p).unwrap();
        let hard = compute_alpha(&p.with_policy(Policy::Hardened)).unwrap();
        prop_assert!(hard >= soft);
        prop_assert!((0.0..1.0).contains(&soft));
        prop_assert!((0.0..=1.0).contains(&hard));
        prop_assert!(testability(cl, hard, n).unwrap() <= testability(cl, soft, n).unwrap());
    }

    #[test]
    fn match_is_symmetric(a in table(), b in table()) {
        let ab = match_tables(&a, &b);
        let ba = match_tables(&b, &a);
        for i in 0..9 {
            prop_assert_eq!(ab[i].tp, ba[i].tp);
            prop_assert_eq!(ab[i].fp, ba[i].fn_);
            prop_assert_eq!(ab[i].fn_, ba[i].fp);
        }
    }

    #[test]
    fn prf_bounds(tp in 0u64..50, fp in 0u64..50, fn_ in 0u64..50) {
        let p = precision_recall_f1(ConfusionCounts::new(tp, fp, fn_));
        for v in [p.precision, p.recall, p.f1] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
        prop_assert!(p.f1 <= p.precision.max(p.recall) + 1e-15);
        prop_assert_eq!(p.f1 == 0.0, tp == 0);
    }

    #[test]
    fn rmse_squared_is_mse(v in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..100)) {
        let (y, p): (Vec<f64>, Vec<f64>) = v.into_iter().unzip();
        let m = error_metrics(&y, &p).unwrap();
        prop_assert!((m.rmse * m.rmse - m.mse).abs() <= 1e-12);
    }

    #[test]
    fn spearman_ignores_monotone_transforms(v in prop::collection::vec((0u8..20, 0u8..20), 3..60)) {
        let x: Vec<f64> = v.iter().map(|p| f64::from(p.0)).collect();
        let y: Vec<f64> = v.iter().map(|p| f64::from(p.1)).collect();
        let Ok(base) = spearman(&x, &y, 0, 1) else { return Ok(()) };
        let tx: Vec<f64> = x.iter().map(|a| a.powi(3) + a).collect();
        let ty: Vec<f64> = y.iter().map(|b| (b / 7.0).exp()).collect();
        prop_assert!((spearman(&tx, &ty, 0, 1).unwrap().rho - base.rho).abs() <= 1e-12);
    }
}

/// Largest SSE reduction over every (feature, midpoint) split of `idx`.
fn brute_best_gain(x: &[Vec<f64>], y: &[f64], idx: &[usize]) -> f64 {
    let sse = |ids: &[usize]| {
        let m = ids.iter().map(|&i| y[i]).sum::<f64>() / ids.len() as f64;
        ids.iter().map(|&i| (y[i] - m).powi(2)).sum::<f64>()
    };
    let parent = sse(idx);
    let mut best = f64::NEG_INFINITY;
    for f in 0..x[0].len() {
        let mut vals: Vec<f64> = idx.iter().map(|&i| x[i][f]).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        for w in vals.windows(2) {
            let cut = (w[0] + w[1]) / 2.0;
            let (l, r): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| x[i][f] <= cut);
            best = best.max(parent - sse(&l) - sse(&r));
        }
    }
    best
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn tree_splits_are_optimal(
        rows in prop::collection::vec((prop::collection::vec(0u8..4, 3), 0u8..10), 10..100),
        depth in 1usize..4,
    ) {
        let x: Vec<Vec<f64>> = rows.iter().map(|r| r.0.iter().map(|&v| f64::from(v)).collect()).collect();
        let y: Vec<f64> = rows.iter().map(|r| f64::from(r.1) / 10.0).collect();
        let tree = tree_importance(&x, &y, depth).unwrap();
        for node in &tree.nodes {
            prop_assert!(node.depth <= depth);
            if node.feature.is_some() {
                prop_assert!(node.gain >= brute_best_gain(&x, &y, &node.indices) - 1e-9);
            }
        }
        let s: f64 = tree.importances.iter().sum();
        prop_assert!(s == 0.0 || (s - 1.0).abs() < 1e-12);
    }
}

#[test]
fn alpha_below_one_except_the_all_maximum_corner() {
    let config = AlphaConfig::builtin();
    for code in config.domain_codes() {
        for &c in Criticality::ALL {
            for &r in RequirementType::ALL {
                for &t in Template::ALL {
                    for &p in Policy::ALL {
                        let a = config.alpha(&AlphaProfile::new(&[code], c, r, t, p)).unwrap();
                        let corner = code == "LT"
                            && p == Policy::Hardened
                            && c == Criticality::SafetyCritical
                            && r == RequirementType::Business
                            && t == Template::SingleSentence;
                        if corner {
                            assert!((a - 1.0).abs() < 1e-12);
                        } else {
                            assert!((0.0..1.0).contains(&a), "{code} {c} {r} {t} {p}: {a}");
                        }
                    }
                }
            }
        }
    }
}
