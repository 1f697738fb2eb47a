use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::{parse, AssemblyStrategy, Corpus, CorpusError, Split, StrInstance, StrategyKind};
use crate::langsim::{nearest_sources, LanguageCode, LanguageSimilarity};

/// Where a training instance came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "origin", rename_all = "kebab-case")]
pub enum Origin {
    Original,
    TranslatedFrom { lang: LanguageCode, pair_id: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Provenance {
    #[serde(flatten)]
    pub origin: Origin,
    pub romanized: bool,
}

impl Provenance {
    pub const ORIGINAL: Provenance = Provenance {
        origin: Origin::Original,
        romanized: false,
    };

    pub fn translated(lang: LanguageCode, pair_id: impl Into<String>) -> Self {
        Provenance {
            origin: Origin::TranslatedFrom {
                lang,
                pair_id: pair_id.into(),
            },
            romanized: false,
        }
    }

    pub fn is_original(&self) -> bool {
        self.origin == Origin::Original
    }

    /// Count bucket: `original`, `translated-from-hau`, with a
    /// `+romanized` suffix when applicable.
    pub fn label(&self) -> String {
        let base = match &self.origin {
            Origin::Original => "original".to_string(),
            Origin::TranslatedFrom { lang, .. } => format!("translated-from-{lang}"),
        };
        if self.romanized {
            base + "+romanized"
        } else {
            base
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaggedInstance {
    #[serde(flatten)]
    pub instance: StrInstance,
    pub provenance: Provenance,
}

/// A concatenated training corpus for one target language.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainSet {
    pub target: LanguageCode,
    pub strategy: AssemblyStrategy,
    /// Donor languages in concatenation order.
    pub sources: Vec<LanguageCode>,
    pub instances: Vec<TaggedInstance>,
    /// Candidates a kNN selection skipped for lack of similarity data.
    pub uncovered: Vec<LanguageCode>,
}

/// Summary written next to a serialized train set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainSetSidecar {
    pub target: LanguageCode,
    pub strategy: AssemblyStrategy,
    pub sources: Vec<LanguageCode>,
    pub instances: usize,
    pub provenance_counts: BTreeMap<String, usize>,
    pub language_counts: BTreeMap<LanguageCode, usize>,
    pub uncovered: Vec<LanguageCode>,
}

impl TrainSet {
    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn provenance_counts(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for t in &self.instances {
            *m.entry(t.provenance.label()).or_default() += 1;
        }
        m
    }

    pub fn language_counts(&self) -> BTreeMap<LanguageCode, usize> {
        let mut m = BTreeMap::new();
        for t in &self.instances {
            *m.entry(t.instance.lang).or_default() += 1;
        }
        m
    }

    pub fn plain_instances(&self) -> impl Iterator<Item = &StrInstance> {
        self.instances.iter().map(|t| &t.instance)
    }

    /// Checks that no original target-language instance slipped in.
    pub fn validate(&self) -> Result<(), CorpusError> {
        if let Some(t) = self
            .instances
            .iter()
            .find(|t| t.instance.lang == self.target && t.provenance.is_original())
        {
            return Err(CorpusError::InconsistentInstance {
                pair_id: t.instance.pair_id.clone(),
                reason: format!("original {} instance in a train set for {}", self.target, self.target),
            });
        }
        Ok(())
    }

    pub fn to_tsv(&self) -> String {
        parse::to_tsv(self.plain_instances())
    }

    pub fn sidecar(&self) -> TrainSetSidecar {
        TrainSetSidecar {
            target: self.target,
            strategy: self.strategy,
            sources: self.sources.clone(),
            instances: self.len(),
            provenance_counts: self.provenance_counts(),
            language_counts: self.language_counts(),
            uncovered: self.uncovered.clone(),
        }
    }
}

/// Donor languages chosen by a strategy, before any data is touched.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceSelection {
    pub sources: Vec<LanguageCode>,
    pub uncovered: Vec<LanguageCode>,
}

/// Applies a strategy's selection rule.
///
/// `available` are the languages with training data. English, when part of
/// the selection, always comes first; the rest follow selection order
/// (similarity for kNN, alphabetical for the multi-source kinds).
pub fn select_sources(
    strategy: &AssemblyStrategy,
    target: LanguageCode,
    available: &BTreeSet<LanguageCode>,
    sim: &LanguageSimilarity,
) -> Result<SourceSelection, CorpusError> {
    strategy.validate()?;
    let eng = LanguageCode::ENG;
    let mut uncovered = Vec::new();
    let sources: Vec<LanguageCode> = match strategy.kind {
        StrategyKind::EnglishOnly => {
            if target == eng {
                Vec::new()
            } else {
                vec![eng]
            }
        }
        StrategyKind::MsAll => english_first(available.iter().copied().filter(|&l| l != target)),
        StrategyKind::MsFam => english_first(sim.families().family_sources(target, available.iter().copied())),
        StrategyKind::KnnPlusEnglish { k } => {
            let matrix = sim.matrix(strategy.feature.expect("validated"))?;
            let pool = available.iter().copied().filter(|&l| l != eng);
            let sel = nearest_sources(target, k, matrix, pool)?;
            uncovered = sel.uncovered;
            let mut out = Vec::with_capacity(k + 1);
            if target != eng {
                out.push(eng);
            }
            out.extend(sel.languages);
            out
        }
        StrategyKind::KnnSingle { k } => {
            let matrix = sim.matrix(strategy.feature.expect("validated"))?;
            let sel = nearest_sources(target, k, matrix, available.iter().copied())?;
            uncovered = sel.uncovered;
            sel.languages
        }
    };
    if sources.is_empty() {
        return Err(CorpusError::NoSourcesSelected {
            target,
            strategy: strategy.descriptor(),
        });
    }
    Ok(SourceSelection { sources, uncovered })
}

fn english_first(langs: impl IntoIterator<Item = LanguageCode>) -> Vec<LanguageCode> {
    let mut v: Vec<LanguageCode> = langs.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    if let Some(pos) = v.iter().position(|&l| l == LanguageCode::ENG) {
        let eng = v.remove(pos);
        v.insert(0, eng);
    }
    v
}

/// Builds the training set for `target` from the corpus' training splits.
/// Augmentation and romanization are separate stages.
pub fn assemble(
    strategy: &AssemblyStrategy,
    target: LanguageCode,
    corpus: &Corpus,
    sim: &LanguageSimilarity,
) -> Result<TrainSet, CorpusError> {
    let available = corpus.languages(Split::Train);
    let selection = select_sources(strategy, target, &available, sim)?;
    let mut instances = Vec::new();
    for &lang in &selection.sources {
        let ds = corpus
            .get(lang, Split::Train)
            .ok_or(CorpusError::MissingDataset { lang, split: Split::Train })?;
        instances.extend(ds.instances().iter().map(|i| TaggedInstance {
            instance: i.clone(),
            provenance: Provenance::ORIGINAL,
        }));
    }
    let ts = TrainSet {
        target,
        strategy: *strategy,
        sources: selection.sources,
        instances,
        uncovered: selection.uncovered,
    };
    ts.validate()?;
    Ok(ts)
}
