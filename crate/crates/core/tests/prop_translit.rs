use std::sync::LazyLock;

use proptest::prelude::*;

use xlstr::corpus::{Dataset, StrInstance};
use xlstr::translit::{romanize_dataset, Romanizer, Script, ScriptTable};
use xlstr::{Execution, LanguageCode, Split};

static BUNDLED: LazyLock<Romanizer> = LazyLock::new(Romanizer::bundled);

const SCRIPTS: [Script; 3] = [Script::Arabic, Script::Devanagari, Script::Ethiopic];

fn script_char() -> impl Strategy<Value = char> {
    prop_oneof![
        proptest::char::range('\u{0600}', '\u{06FF}'),
        proptest::char::range('\u{0900}', '\u{097F}'),
        proptest::char::range('\u{1200}', '\u{137F}'),
        proptest::char::range(' ', '~'),
        any::<char>(),
    ]
}

fn fuzzed() -> impl Strategy<Value = String> {
    proptest::collection::vec(script_char(), 0..60).prop_map(|v| v.into_iter().collect())
}

fn table_text(script: Script) -> impl Strategy<Value = String> {
    let sources: Vec<String> = ScriptTable::bundled(script).rules().iter().map(|r| r.source.clone()).collect();
    proptest::collection::vec(prop_oneof![4 => proptest::sample::select(sources), 1 => Just(" ".to_string())], 1..40)
        .prop_map(|parts| parts.concat())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn romanize_is_idempotent(s in fuzzed()) {
        let r = &*BUNDLED;
        let once = r.romanize_str(&s);
        prop_assert_eq!(r.romanize_str(&once), once);
    }

    #[test]
    fn table_text_becomes_ascii(text in proptest::sample::select(SCRIPTS.to_vec()).prop_flat_map(table_text)) {
        let r = &*BUNDLED;
        let out = r.romanize(&text);
        prop_assert!(out.text.is_ascii(), "{:?} -> {:?}", text, out.text);
        prop_assert_eq!(out.warnings, 0);
    }

    #[test]
    fn load_order_does_not_matter(s in fuzzed(), order in Just(SCRIPTS.to_vec()).prop_shuffle(), rev in any::<bool>()) {
        let tables = order.iter().map(|&sc| {
            let t = ScriptTable::bundled(sc);
            let mut rules = t.rules().to_vec();
            if rev {
                rules.reverse();
            }
            ScriptTable::new(sc, t.inherent().map(str::to_string), rules).unwrap()
        });
        let shuffled = Romanizer::new(tables).unwrap();
        prop_assert_eq!(shuffled.romanize_str(&s), BUNDLED.romanize_str(&s));
    }

    #[test]
    fn dataset_ids_and_scores_survive(rows in proptest::collection::vec((fuzzed(), fuzzed(), proptest::option::of(0.0f64..=1.0)), 1..20)) {
        let instances: Vec<StrInstance> = rows
            .into_iter()
            .enumerate()
            .map(|(i, (a, b, score))| StrInstance {
                pair_id: format!("hin-{i}"),
                sent1: format!("x{}", a.replace(['\n', '\r'], " ")),
                sent2: format!("y{}", b.replace(['\n', '\r'], " ")),
                lang: LanguageCode::HIN,
                split: Split::Test,
                score,
            })
            .collect();
        let ds = Dataset::new(LanguageCode::HIN, Split::Test, instances).unwrap();
        let (out, _) = romanize_dataset(&ds, &BUNDLED, Execution::Sequential);
        prop_assert_eq!(out.len(), ds.len());
        for (a, b) in ds.instances().iter().zip(out.instances()) {
            prop_assert_eq!(&a.pair_id, &b.pair_id);
            prop_assert_eq!(a.score, b.score);
        }
    }
}
