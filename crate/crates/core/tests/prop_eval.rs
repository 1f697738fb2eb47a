use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::sample::subsequence;

use xlstr::eval::{format_cell, ranks, report_table, Outcome, RunFlags, TableOptions};
use xlstr::langsim::TARGET_LANGUAGES;
use xlstr::{spearman, EvalReport, LanguageCode, Split};

fn tied(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec((0u8..6).prop_map(f64::from), n)
}

fn pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2usize..60).prop_flat_map(|n| (tied(n), proptest::collection::vec(-1.0f64..1.0, n)))
}

fn midranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|a| {
            let below = v.iter().filter(|b| *b < a).count() as f64;
            let same = v.iter().filter(|b| *b == a).count() as f64;
            below + (same + 1.0) / 2.0
        })
        .collect()
}

proptest! {
    #[test]
    fn symmetric((x, y) in pair()) {
        match (spearman(&x, &y), spearman(&y, &x)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn invariant_under_increasing_maps((x, y) in pair(), a in 0.01f64..10.0, b in -5.0f64..5.0, which in 0usize..3) {
        let f = |v: f64| match which {
            0 => a * v + b,
            1 => (a * v / 8.0).exp(),
            _ => v.powi(3) + a * v,
        };
        let fx: Vec<f64> = x.iter().map(|&v| f(v)).collect();
        match (spearman(&x, &y), spearman(&fx, &y)) {
            (Ok(p), Ok(q)) => prop_assert!((p - q).abs() < 1e-12),
            (Err(_), Err(_)) => {}
            (p, q) => prop_assert!(false, "{:?} vs {:?}", p, q),
        }
    }

    #[test]
    fn ranks_are_midranks(x in (1usize..80).prop_flat_map(tied)) {
        let r = ranks(&x).unwrap();
        prop_assert_eq!(&r, &midranks(&x));
        let n = x.len() as f64;
        prop_assert!((r.iter().sum::<f64>() - n * (n + 1.0) / 2.0).abs() < 1e-9);
    }
}

fn arb_outcomes() -> impl Strategy<Value = Vec<Outcome>> {
    let row = (
        proptest::sample::select(vec!["eng", "ms-all", "knn+eng(2,cellstate)"]),
        subsequence(TARGET_LANGUAGES.to_vec(), 1..=TARGET_LANGUAGES.len()),
    );
    proptest::collection::vec(row, 1..4).prop_flat_map(|rows| {
        let cells: usize = rows.iter().map(|r| r.1.len()).sum();
        (Just(rows), proptest::collection::vec(proptest::option::weighted(0.9, -1.0f64..=1.0), cells))
    })
    .prop_map(|(rows, mut rhos)| {
        let mut out = Vec::new();
        for (strategy, targets) in rows {
            for target in targets {
                let o = match rhos.pop().unwrap() {
                    Some(rho) => Outcome::Ok(EvalReport {
                        target,
                        split: Split::Test,
                        n: 10,
                        rho,
                        strategy: strategy.into(),
                        flags: RunFlags::default(),
                        seed: 0,
                        config_hash: None,
                    }),
                    None => Outcome::Failed { target, strategy: strategy.into(), error: "boom".into() },
                };
                out.push(o);
            }
        }
        out
    })
}

fn fields(line: &str) -> Vec<&str> {
    line.split(|c: char| c == '|' || c.is_whitespace()).filter(|s| !s.is_empty()).collect()
}

proptest! {
    #[test]
    fn averages_recompute_from_cells(
        outcomes in arb_outcomes(),
        excluded in subsequence(TARGET_LANGUAGES.to_vec(), 0..4),
    ) {
        let opts = TableOptions { exclude_from_avg: excluded.iter().copied().collect(), all_targets: false };
        let table = report_table(&outcomes, &opts);
        let mut lines = table.lines().skip(1);
        let header = fields(lines.next().unwrap());
        prop_assert_eq!(header[0], "strategy");
        prop_assert_eq!(*header.last().unwrap(), "avg");
        let columns: Vec<LanguageCode> = header[1..header.len() - 1].iter().map(|c| LanguageCode::new(c).unwrap()).collect();
        let shown: BTreeSet<LanguageCode> = outcomes.iter().map(Outcome::target).collect();
        prop_assert_eq!(columns.iter().copied().collect::<BTreeSet<_>>(), shown);

        for line in lines.take_while(|l| !l.is_empty()) {
            let f = fields(line);
            prop_assert_eq!(f.len(), columns.len() + 2);
            let in_scope: Vec<&str> = columns
                .iter()
                .zip(&f[1..f.len() - 1])
                .filter(|(l, _)| **l != LanguageCode::ENG && !opts.exclude_from_avg.contains(l))
                .map(|(_, c)| *c)
                .collect();
            let want = if in_scope.is_empty() || in_scope.contains(&"-") {
                "-".to_string()
            } else {
                let sum: f64 = in_scope.iter().map(|c| c.parse::<f64>().unwrap()).sum();
                format_cell(sum / in_scope.len() as f64)
            };
            prop_assert_eq!(f[f.len() - 1], want.as_str());
        }
    }
}
