use std::collections::HashMap;

use ezr::baselines::{kpp_select, run_kpp, run_random, DecisionMetric};
use ezr::dataset::{parse_header, Cell, Dataset};
use ezr::ezr::rng_from_seed;
use ezr::labeler::Labeler;
use proptest::prelude::*;

fn line(xs: &[f64]) -> Dataset {
    let cols = parse_header(&["Pos", "Y-"]).unwrap();
    let body = xs.iter().enumerate().map(|(i, &x)| vec![Cell::Num(x), Cell::Num(i as f64)]).collect();
    Dataset::new("line", cols, body).unwrap()
}

#[test]
fn random_draws_uniform_pairs() {
    let d = line(&(0..10).map(f64::from).collect::<Vec<_>>());
    let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
    let n = 10_000;
    for seed in 0..n {
        let out = run_random(&d, 2, seed).unwrap();
        let (a, b) = (out.trace[0].0, out.trace[1].0);
        *counts.entry((a.min(b), a.max(b))).or_default() += 1;
    }
    assert_eq!(counts.len(), 45);
    let p = 1.0 / 45.0;
    let se = (p * (1.0 - p) / n as f64).sqrt();
    for (pair, c) in counts {
        let f = c as f64 / n as f64;
        assert!((f - p).abs() <= 3.0 * se, "{pair:?}: {f}");
    }
}

#[test]
fn kpp_second_pick_crosses_clusters() {
    let mut xs: Vec<f64> = (0..100).map(|i| i as f64 * 0.01).collect();
    xs.extend((0..100).map(|i| 10.0 + i as f64 * 0.01));
    let d = line(&xs);
    let l = Labeler::new(&d, 2);
    let crossed = (0..1000)
        .filter(|&s| {
            let picks = kpp_select(&l, 2, &mut rng_from_seed(s));
            (picks[0] < 100) != (picks[1] < 100)
        })
        .count();
    assert!(crossed >= 990, "{crossed}");
}

#[test]
fn identical_rows_still_pick_distinct() {
    let d = line(&[3.0; 12]);
    let l = Labeler::new(&d, 12);
    let mut picks = kpp_select(&l, 12, &mut rng_from_seed(4));
    picks.sort();
    assert_eq!(picks, (0..12).collect::<Vec<_>>());
}

#[test]
fn budget_one_and_bounds() {
    let d = line(&[1.0, 2.0, 3.0]);
    assert_eq!(run_kpp(&d, 1, 0).unwrap().labels_used, 1);
    assert_eq!(run_random(&d, 1, 0).unwrap().labels_used, 1);
    assert!(run_kpp(&d, 4, 0).is_err());
    assert!(run_random(&d, 0, 0).is_err());
}

fn mixed(rows: Vec<(f64, f64, u8)>) -> Dataset {
    let cols = parse_header(&["A", "B", "c", "Y-"]).unwrap();
    let body = rows
        .into_iter()
        .map(|(a, b, c)| vec![Cell::Num(a), Cell::Num(b), Cell::Sym(c.to_string()), Cell::Num(0.0)])
        .collect();
    Dataset::new("m", cols, body).unwrap()
}

proptest! {
    #[test]
    fn decision_metric_is_a_metric(rows in proptest::collection::vec((-5.0..5.0f64, 0.0..1.0f64, 0u8..3), 3..20)) {
        let d = mixed(rows);
        let l = Labeler::new(&d, 1);
        let m = DecisionMetric::new(&l);
        let n = d.len();
        for a in 0..n {
            prop_assert_eq!(m.distance(&l, a, a), 0.0);
            for b in 0..n {
                let ab = m.distance(&l, a, b);
                prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
                prop_assert_eq!(ab, m.distance(&l, b, a));
                for c in 0..n {
                    prop_assert!(ab <= m.distance(&l, a, c) + m.distance(&l, c, b) + 1e-12);
                }
            }
        }
    }

    #[test]
    fn baselines_stay_within_budget(budget in 1usize..20, seed in any::<u64>()) {
        let d = line(&(0..20).map(f64::from).collect::<Vec<_>>());
        for out in [run_random(&d, budget, seed).unwrap(), run_kpp(&d, budget, seed).unwrap()] {
            prop_assert_eq!(out.labels_used, budget);
            let mut ids: Vec<usize> = out.trace.iter().map(|t| t.0).collect();
            ids.sort();
            ids.dedup();
            prop_assert_eq!(ids.len(), budget);
        }
    }
}
