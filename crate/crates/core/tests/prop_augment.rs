use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::sample::subsequence;

use xlstr::augment::{cross_translate, AugmentedSet, DictionaryTranslator, IdentityTranslator, Translator};
use xlstr::corpus::synth;
use xlstr::corpus::{Dataset, Origin};
use xlstr::langsim::TRAIN_LANGUAGES;
use xlstr::{Execution, LanguageCode, Split};

fn arb_sets() -> impl Strategy<Value = Vec<Dataset>> {
    (subsequence(TRAIN_LANGUAGES.to_vec(), 1..=4), proptest::collection::vec(0usize..30, 4), any::<u64>()).prop_map(
        |(langs, sizes, seed)| {
            langs
                .into_iter()
                .zip(sizes)
                .map(|(l, n)| synth::generate_dataset(l, Split::Train, n, seed))
                .collect()
        },
    )
}

// Either the identity mock or a word-substituting dictionary covering every
// pair, so translated text actually differs from the source.
fn translator(dict: bool) -> Box<dyn Translator> {
    if !dict {
        return Box::new(IdentityTranslator);
    }
    let mut d = DictionaryTranslator::new();
    for &a in &TRAIN_LANGUAGES {
        for &b in &TRAIN_LANGUAGES {
            if a != b {
                d.add_pair(a, b);
                for w in ["ba", "ka", "la", "ma"] {
                    d.insert(a, b, w, &format!("{w}{b}"));
                }
            }
        }
    }
    Box::new(d)
}

fn run(sets: &[Dataset], dict: bool, exec: Execution) -> AugmentedSet {
    let refs: Vec<&Dataset> = sets.iter().collect();
    cross_translate(&refs, translator(dict).as_ref(), exec).unwrap()
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn size_and_balance(sets in arb_sets(), dict in any::<bool>()) {
        let out = run(&sets, dict, Execution::Parallel);
        let total: usize = sets.iter().map(Dataset::len).sum();
        prop_assert_eq!(out.len(), sets.len() * total);
        prop_assert!(out.balance().values().all(|&n| n == total));
        prop_assert_eq!(out.audit.len(), out.len() - total);
    }

    #[test]
    fn translations_keep_score_multisets(sets in arb_sets(), dict in any::<bool>()) {
        let out = run(&sets, dict, Execution::Parallel);
        let mut by_pair: BTreeMap<(LanguageCode, LanguageCode), Vec<f64>> = BTreeMap::new();
        for t in &out.instances {
            if let Origin::TranslatedFrom { lang, .. } = &t.provenance.origin {
                prop_assert_ne!(*lang, t.instance.lang);
                by_pair.entry((*lang, t.instance.lang)).or_default().push(t.instance.score.unwrap());
            }
        }
        for src in &sets {
            let want = sorted(src.scores().unwrap());
            for tgt in sets.iter().filter(|d| d.lang() != src.lang()) {
                let got = by_pair.remove(&(src.lang(), tgt.lang())).unwrap_or_default();
                prop_assert_eq!(&sorted(got), &want);
            }
        }
        prop_assert!(by_pair.is_empty());
    }

    #[test]
    fn augmentation_is_deterministic(sets in arb_sets(), dict in any::<bool>()) {
        let a = run(&sets, dict, Execution::Parallel);
        let b = run(&sets, dict, Execution::Sequential);
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
