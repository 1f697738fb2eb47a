//! Deterministic synthetic STR corpora.
//!
//! Sentences are drawn from a per-language pseudo-vocabulary written in the
//! language's script (Ethiopic for amh, Devanagari for hin/mar, Arabic for
//! the Arabic varieties, Latin otherwise). The second sentence of a pair
//! keeps a random share of the first sentence's tokens and the gold score
//! follows that share with a little noise, so lexical overlap carries real
//! signal. None of this is natural language.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Corpus, CorpusError, Dataset, Split, StrInstance, SHARED_TASK_COUNTS};
use crate::langsim::LanguageCode;
use crate::parallel::{self, Execution};
use crate::scorer::char_ngram_cosine;

/// Which datasets to generate and how large they are.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthSpec {
    pub counts: Vec<(LanguageCode, Split, usize)>,
    pub seed: u64,
}

impl SynthSpec {
    /// Same languages, splits and sizes as the shared-task release.
    pub fn shared_task(seed: u64) -> Self {
        Self::scaled(seed, |n| n)
    }

    /// The small corpus bundled with the crate: shared-task availability,
    /// sizes divided by 25 with a floor of 8.
    pub fn mini(seed: u64) -> Self {
        Self::scaled(seed, |n| (n / 25).max(8))
    }

    fn scaled(seed: u64, f: impl Fn(usize) -> usize) -> Self {
        let mut counts = Vec::new();
        for (lang, per_split) in SHARED_TASK_COUNTS {
            for (split, n) in Split::ALL.into_iter().zip(per_split) {
                if let Some(n) = n {
                    counts.push((lang, split, f(n)));
                }
            }
        }
        SynthSpec { counts, seed }
    }
}

pub fn generate(spec: &SynthSpec, exec: Execution) -> Corpus {
    let datasets = parallel::map(exec, &spec.counts, |&(lang, split, n)| {
        generate_dataset(lang, split, n, spec.seed)
    });
    Corpus::from_datasets(datasets)
}

pub fn generate_dataset(lang: LanguageCode, split: Split, n: usize, seed: u64) -> Dataset {
    let vocab = vocabulary(lang, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, lang, split));
    let mut instances = Vec::with_capacity(n);
    for i in 0..n {
        let len = rng.gen_range(4..=12);
        let s1: Vec<&str> = (0..len).map(|_| vocab.choose(&mut rng).unwrap().as_str()).collect();
        let keep: f64 = rng.gen();
        let mut kept = 0usize;
        let mut s2: Vec<&str> = s1
            .iter()
            .map(|&w| {
                if rng.gen::<f64>() < keep {
                    kept += 1;
                    w
                } else {
                    vocab.choose(&mut rng).unwrap().as_str()
                }
            })
            .collect();
        let extra = rng.gen_range(0..=2);
        for _ in 0..extra {
            s2.push(vocab.choose(&mut rng).unwrap());
        }
        let share = kept as f64 / len as f64;
        let noise: f64 = rng.gen_range(-0.08..0.08);
        let score = ((0.05 + 0.9 * share + noise).clamp(0.0, 1.0) * 100.0).round() / 100.0;
        instances.push(StrInstance {
            pair_id: format!("{lang}-{split}-{i:05}"),
            sent1: s1.join(" "),
            sent2: s2.join(" "),
            lang,
            split,
            score: Some(score),
        });
    }
    Dataset::new(lang, split, instances).expect("generator output is valid")
}

fn stream_seed(seed: u64, lang: LanguageCode, split: Split) -> u64 {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for b in lang.as_str().bytes().chain(split.name().bytes()) {
        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn vocabulary(lang: LanguageCode, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, lang, Split::Train) ^ 0xabcd);
    let syllables = syllables(lang);
    (0..300)
        .map(|_| {
            let k = rng.gen_range(1..=3);
            (0..k).map(|_| syllables.choose(&mut rng).unwrap().as_str()).collect()
        })
        .collect()
}

fn syllables(lang: LanguageCode) -> Vec<String> {
    let chr = |c: u32| char::from_u32(c).unwrap();
    match lang.as_str() {
        // Ethiopic: first seven orders of common consonant rows.
        "amh" => [
            0x1200u32, 0x1208, 0x1210, 0x1218, 0x1228, 0x1230, 0x1238, 0x1240, 0x1260, 0x1270, 0x1278, 0x1290,
            0x1298, 0x12A0, 0x12A8, 0x12C8, 0x12D8, 0x12E8, 0x12F0, 0x1300, 0x1308, 0x1320, 0x1328, 0x1338,
        ]
        .into_iter()
        .flat_map(|row| (0..7u32).map(move |o| chr(row + o).to_string()))
        .collect(),
        // Devanagari: consonant, optionally with a vowel sign or a virama
        // conjunct.
        "hin" | "mar" => {
            let consonants: Vec<char> = (0x0915..=0x0939).map(chr).collect();
            let signs: Vec<char> = (0x093E..=0x094C).filter(|&c| c != 0x0945 && c != 0x0949).map(chr).collect();
            let mut out: Vec<String> = consonants.iter().map(|c| c.to_string()).collect();
            for &c in &consonants {
                for &s in &signs {
                    out.push(format!("{c}{s}"));
                }
            }
            for &c in consonants.iter().take(8) {
                out.push(format!("{c}\u{094D}{}", consonants[20]));
            }
            out
        }
        "arb" | "arq" | "ary" => (0x0628..=0x064A)
            .filter(|c| !(0x063B..=0x0640).contains(c))
            .map(|c| chr(c).to_string())
            .collect(),
        _ => {
            let cons = ["b", "d", "f", "g", "h", "k", "l", "m", "n", "p", "r", "s", "t", "v", "w", "y", "z"];
            let vows = ["a", "e", "i", "o", "u"];
            cons.iter()
                .flat_map(|c| vows.iter().map(move |v| format!("{c}{v}")))
                .collect()
        }
    }
}

/// Latin-script pairs whose gold score is exactly the character-trigram
/// cosine of the pair, i.e. one scorer feature predicts the gold perfectly.
pub fn monotone_pairs(lang: LanguageCode, split: Split, n: usize, seed: u64) -> Vec<StrInstance> {
    let vocab = vocabulary(LanguageCode::ENG, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, lang, split) ^ 0x5eed);
    (0..n)
        .map(|i| {
            let len = rng.gen_range(3..=10);
            let s1: Vec<&str> = (0..len).map(|_| vocab.choose(&mut rng).unwrap().as_str()).collect();
            let keep: f64 = rng.gen();
            let s2: Vec<&str> = s1
                .iter()
                .map(|&w| if rng.gen::<f64>() < keep { w } else { vocab.choose(&mut rng).unwrap().as_str() })
                .collect();
            let (sent1, sent2) = (s1.join(" "), s2.join(" "));
            let score = char_ngram_cosine(&sent1, &sent2, 3);
            StrInstance {
                pair_id: format!("{lang}-mono-{i:05}"),
                sent1,
                sent2,
                lang,
                split,
                score: Some(score),
            }
        })
        .collect()
}

/// `lang<TAB>split<TAB>count` lines, sorted, with a header.
pub fn manifest(corpus: &Corpus) -> String {
    let mut out = String::from("lang\tsplit\tcount\n");
    for ds in corpus.datasets() {
        out.push_str(&format!("{}\t{}\t{}\n", ds.lang(), ds.split(), ds.len()));
    }
    out
}

pub fn parse_manifest(text: &str) -> Result<BTreeMap<(LanguageCode, Split), usize>, CorpusError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (i == 0 && line.starts_with("lang")) {
            continue;
        }
        let bad = |reason: String| CorpusError::MalformedRow { line: i + 1, reason };
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 3 {
            return Err(bad(format!("expected 3 fields, found {}", f.len())));
        }
        let lang = LanguageCode::extension(f[0]).map_err(|e| bad(e.to_string()))?;
        let split: Split = f[1].parse()?;
        let n: usize = f[2].parse().map_err(|_| bad(format!("bad count {:?}", f[2])))?;
        out.insert((lang, split), n);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use LanguageCode as L;

    #[test]
    fn shared_task_sizes() {
        let c = generate(&SynthSpec::shared_task(7), Execution::default());
        let t = c.stats();
        assert_eq!(t.split_total(Split::Train), 15_123);
        assert_eq!(t.split_total(Split::Dev), 2_588);
        assert_eq!(t.split_total(Split::Test), 7_667);
        assert!(c.get(L::MAR, Split::Test).is_none());
    }

    #[test]
    fn deterministic_and_order_independent() {
        let spec = SynthSpec::mini(3);
        let a = generate(&spec, Execution::Sequential);
        let b = generate(&spec, Execution::Parallel);
        assert_eq!(a, b);
        let m = parse_manifest(&manifest(&a)).unwrap();
        assert_eq!(m[&(L::ENG, Split::Train)], 220);
        assert_eq!(m[&(L::ARB, Split::Dev)], 8);
    }

    #[test]
    fn bundled_mini_corpus_is_reproducible() {
        let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/mini");
        let bundled = Corpus::load_dir(&root, Execution::Parallel).unwrap();
        assert_eq!(bundled, generate(&SynthSpec::mini(0), Execution::Parallel));
        let listed = std::fs::read_to_string(root.join("manifest.tsv")).unwrap();
        assert_eq!(listed, manifest(&bundled));
    }

    #[test]
    fn monotone_gold_is_trigram_cosine() {
        for i in monotone_pairs(L::ENG, Split::Dev, 20, 4) {
            assert_eq!(i.score, Some(char_ngram_cosine(&i.sent1, &i.sent2, 3)));
        }
    }

    #[test]
    fn scripts_match_languages() {
        let ds = generate_dataset(L::AMH, Split::Dev, 3, 1);
        assert!(ds.instances()[0].sent1.chars().any(|c| ('\u{1200}'..='\u{137F}').contains(&c)));
        let ds = generate_dataset(L::HIN, Split::Dev, 3, 1);
        assert!(ds.instances()[0].sent1.chars().any(|c| ('\u{0900}'..='\u{097F}').contains(&c)));
        let ds = generate_dataset(L::ENG, Split::Dev, 3, 1);
        assert!(ds.instances()[0].sent1.is_ascii());
    }
}
