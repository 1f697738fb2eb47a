use std::fs;
use std::path::{Path, PathBuf};

use proptest::prelude::*;

use xlstr::experiment::{run_experiment, run_suite, DevSource, ExperimentConfig, SuiteOptions};
use xlstr::langsim::TASK_LANGUAGES;
use xlstr::scorer::Optimizer;
use xlstr::{AssemblyStrategy, Execution, FeatureKind, LanguageCode, TrainConfig};

fn arb_strategy() -> impl Strategy<Value = AssemblyStrategy> {
    let feature = proptest::sample::select(FeatureKind::ALL.to_vec());
    let base = prop_oneof![
        Just(AssemblyStrategy::english_only()),
        Just(AssemblyStrategy::ms_all()),
        Just(AssemblyStrategy::ms_fam()),
        (1usize..9, feature.clone()).prop_map(|(k, f)| AssemblyStrategy::knn_plus_english(k, f).unwrap()),
        (1usize..9, feature).prop_map(|(k, f)| AssemblyStrategy::knn_single(k, f).unwrap()),
    ];
    (base, any::<bool>(), any::<bool>()).prop_map(|(s, a, r)| s.with_augment(a).with_romanize(r))
}

fn arb_train() -> impl Strategy<Value = TrainConfig> {
    (
        (1e-4f64..1.0, 1usize..256, 0usize..60, 0.0f64..0.1),
        (1usize..1000, 1usize..30, 0.0f64..0.01, any::<u64>(), any::<bool>()),
    )
        .prop_map(|((lr, bs, ep, wd), (ee, pat, thr, seed, adam))| TrainConfig {
            learning_rate: lr,
            batch_size: bs,
            max_epochs: ep,
            weight_decay: wd,
            eval_every: ee,
            patience: pat,
            improvement_threshold: thr,
            seed,
            optimizer: if adam { Optimizer::AdamW } else { Optimizer::Sgd },
        })
}

fn arb_config() -> impl Strategy<Value = ExperimentConfig> {
    (
        proptest::sample::select(TASK_LANGUAGES.to_vec()),
        arb_strategy(),
        prop_oneof![
            Just("identity".to_string()),
            "[a-z/]{1,12}\\.tsv".prop_map(|p| format!("dict:{p}")),
            "[a-z]{1,8}( -[a-z]{1,4}){0,2}".prop_map(|c| format!("cmd:{c}")),
        ],
        any::<bool>(),
        proptest::option::of("/[a-z0-9_/]{0,20}[a-z0-9]".prop_map(PathBuf::from)),
        arb_train(),
    )
        .prop_map(|(target, strategy, translator, own_dev, data_root, train)| ExperimentConfig {
            target,
            strategy,
            translator,
            dev: if own_dev { DevSource::Target } else { DevSource::Sources },
            data_root,
            train,
        })
}

proptest! {
    #[test]
    fn config_round_trip(cfg in arb_config()) {
        let text = cfg.to_text();
        let back = ExperimentConfig::parse(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(back.hash(), cfg.hash());
    }

    #[test]
    fn hash_ignores_data_root_only(cfg in arb_config(), root in "/[a-z]{1,10}", bump in 1u64..1000) {
        let moved = ExperimentConfig { data_root: Some(PathBuf::from(root)), ..cfg.clone() };
        prop_assert_eq!(moved.hash(), cfg.hash());
        let reseeded = cfg.clone().with_seed(cfg.seed().wrapping_add(bump));
        prop_assert_ne!(reseeded.hash(), cfg.hash());
        prop_assert_eq!(cfg.hash().len(), 16);
    }
}

fn mini_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/mini")
}

fn quick(target: LanguageCode, strategy: AssemblyStrategy, seed: u64) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(target, strategy).with_seed(seed);
    c.train.max_epochs = 3;
    c.train.eval_every = 4;
    c
}

#[test]
fn artifacts_carry_their_hash_and_never_collide() {
    let out = tempfile::tempdir().unwrap();
    let root = mini_root();
    let a = quick(LanguageCode::KIN, AssemblyStrategy::english_only(), 1);
    let b = a.clone().with_seed(2);
    let knn = AssemblyStrategy::knn_plus_english(2, FeatureKind::CellState).unwrap();
    let c = quick(LanguageCode::KIN, knn.with_augment(true), 1);
    let ra = run_experiment(&a, Some(&root), Some(out.path()), Execution::Parallel).unwrap();
    let rb = run_experiment(&b, Some(&root), Some(out.path()), Execution::Parallel).unwrap();
    let rc = run_experiment(&c, Some(&root), Some(out.path()), Execution::Parallel).unwrap();
    assert_ne!(ra.hash, rb.hash);
    assert!(out.path().join(&rc.hash).join("audit.json").is_file());
    for r in [&ra, &rb, &rc] {
        let dir = r.artifacts.as_ref().unwrap();
        assert_eq!(dir, &out.path().join(&r.hash));
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            let text = fs::read_to_string(&path).unwrap();
            assert!(text.contains(&r.hash), "{} lacks the config hash", path.display());
        }
    }
    let dirs: Vec<String> = fs::read_dir(out.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert_eq!(dirs.len(), 3, "{dirs:?}");
    assert!(dirs.iter().all(|d| !d.ends_with(".partial")));
}

#[test]
fn suite_outcomes_do_not_depend_on_order() {
    let knn = AssemblyStrategy::knn_plus_english(2, FeatureKind::CellState).unwrap();
    let cfgs = vec![
        quick(LanguageCode::KIN, knn.clone().with_augment(true), 0),
        quick(LanguageCode::AMH, AssemblyStrategy::ms_all().with_romanize(true), 0),
        quick(LanguageCode::IND, AssemblyStrategy::ms_fam(), 0),
        quick(LanguageCode::HAU, knn, 3),
    ];
    let opts = |parallelism| SuiteOptions {
        data_root: Some(mini_root()),
        parallelism,
        ..SuiteOptions::default()
    };
    let forward = run_suite(&cfgs, &opts(0));
    let reversed: Vec<ExperimentConfig> = cfgs.iter().rev().cloned().collect();
    let backward = run_suite(&reversed, &opts(3));
    let mut back = backward.outcomes.clone();
    back.reverse();
    assert_eq!(forward.outcomes, back);
    assert_eq!(forward.to_json(), run_suite(&cfgs, &opts(1)).to_json());
}
