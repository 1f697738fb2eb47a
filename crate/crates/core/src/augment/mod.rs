//! Balanced cross-translation augmentation.
//!
//! Every original instance of every input language is translated into each
//! of the other input languages, so with `L` languages holding `N`
//! originals in total each language ends up with `N` instances and the
//! augmented set has `L * N`. Gold scores are copied unchanged.

mod translator;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::corpus::{Dataset, Provenance, Split, StrInstance, TaggedInstance, TrainSet};
use crate::langsim::LanguageCode;
use crate::parallel::{self, Execution};
use crate::scorer::char_ngram_cosine;

pub use translator::{
    translator_from_spec, DictionaryTranslator, ExternalProcessTranslator, IdentityTranslator, Translator,
    TranslatorError,
};

#[derive(Debug, Error)]
pub enum AugmentError {
    #[error("translator {translator} cannot translate {src} -> {tgt}")]
    MissingCapability {
        translator: String,
        src: LanguageCode,
        tgt: LanguageCode,
    },
    #[error("translating {pair_id} {src} -> {tgt}: {message}")]
    TranslationFailure {
        pair_id: String,
        src: LanguageCode,
        tgt: LanguageCode,
        message: String,
    },
    #[error("{lang} {split} given; only training data is augmented")]
    NotTrainSplit { lang: LanguageCode, split: Split },
    #[error("language {0} given twice")]
    DuplicateLanguage(LanguageCode),
    #[error("train set already contains translated instances")]
    AlreadyAugmented,
}

/// Label-risk probe for one translated pair: character-trigram cosine
/// between the two translated sentences. A high probe with a low gold score
/// suggests the translation collapsed a meaningful difference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditRecord {
    pub pair_id: String,
    pub src: LanguageCode,
    pub tgt: LanguageCode,
    pub score: f64,
    pub probe: f64,
}

impl AuditRecord {
    pub fn is_suspicious(&self, min_probe: f64, max_score: f64) -> bool {
        self.probe >= min_probe && self.score <= max_score
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AugmentedSet {
    pub languages: Vec<LanguageCode>,
    /// Originals first (by language code, file order), then translations
    /// (by source code, file order, target code).
    pub instances: Vec<TaggedInstance>,
    /// One record per translated instance, aligned with the translations.
    pub audit: Vec<AuditRecord>,
}

impl AugmentedSet {
    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Instances per language tag.
    pub fn balance(&self) -> BTreeMap<LanguageCode, usize> {
        let mut m: BTreeMap<LanguageCode, usize> = self.languages.iter().map(|&l| (l, 0)).collect();
        for t in &self.instances {
            *m.entry(t.instance.lang).or_default() += 1;
        }
        m
    }

    pub fn is_balanced(&self) -> bool {
        let b = self.balance();
        b.values().collect::<BTreeSet<_>>().len() <= 1
    }

    pub fn suspicious(&self, min_probe: f64, max_score: f64) -> impl Iterator<Item = &AuditRecord> {
        self.audit.iter().filter(move |a| a.is_suspicious(min_probe, max_score))
    }
}

/// Translates every input dataset into every other input language.
pub fn cross_translate(
    sets: &[&Dataset],
    translator: &dyn Translator,
    exec: Execution,
) -> Result<AugmentedSet, AugmentError> {
    let mut by_lang: BTreeMap<LanguageCode, &[StrInstance]> = BTreeMap::new();
    for ds in sets {
        if ds.split() != Split::Train {
            return Err(AugmentError::NotTrainSplit {
                lang: ds.lang(),
                split: ds.split(),
            });
        }
        if by_lang.insert(ds.lang(), ds.instances()).is_some() {
            return Err(AugmentError::DuplicateLanguage(ds.lang()));
        }
    }
    translate_groups(&by_lang, translator, exec)
}

fn translate_groups(
    by_lang: &BTreeMap<LanguageCode, &[StrInstance]>,
    translator: &dyn Translator,
    exec: Execution,
) -> Result<AugmentedSet, AugmentError> {
    let langs: Vec<LanguageCode> = by_lang.keys().copied().collect();
    let pairs: Vec<(LanguageCode, LanguageCode)> = langs
        .iter()
        .flat_map(|&s| langs.iter().filter(move |&&t| t != s).map(move |&t| (s, t)))
        .collect();
    if let Some(&(src, tgt)) = pairs.iter().find(|(s, t)| !translator.supports(*s, *t)) {
        return Err(AugmentError::MissingCapability {
            translator: translator.name(),
            src,
            tgt,
        });
    }

    // One batch per ordered pair; pairs may run concurrently but results
    // come back in `pairs` order.
    let translated = parallel::try_map(exec, &pairs, |&(src, tgt)| {
        let originals = by_lang[&src];
        let texts: Vec<&str> = originals
            .iter()
            .flat_map(|i| [i.sent1.as_str(), i.sent2.as_str()])
            .collect();
        let out = translator.translate_batch(&texts, src, tgt).map_err(|e| {
            let pair_id = e
                .index
                .and_then(|k| originals.get(k / 2))
                .map_or_else(|| "?".to_string(), |i| i.pair_id.clone());
            AugmentError::TranslationFailure {
                pair_id,
                src,
                tgt,
                message: e.message,
            }
        })?;
        if out.len() != texts.len() {
            return Err(AugmentError::TranslationFailure {
                pair_id: "?".into(),
                src,
                tgt,
                message: format!("expected {} outputs, got {}", texts.len(), out.len()),
            });
        }
        Ok(out)
    })?;
    let by_pair: BTreeMap<(LanguageCode, LanguageCode), Vec<String>> = pairs.iter().copied().zip(translated).collect();

    let mut instances = Vec::new();
    for originals in by_lang.values() {
        instances.extend(originals.iter().map(|i| TaggedInstance {
            instance: i.clone(),
            provenance: Provenance::ORIGINAL,
        }));
    }
    let mut audit = Vec::new();
    for (&src, originals) in by_lang {
        for (k, orig) in originals.iter().enumerate() {
            for &tgt in langs.iter().filter(|&&t| t != src) {
                let out = &by_pair[&(src, tgt)];
                let (s1, s2) = (out[2 * k].clone(), out[2 * k + 1].clone());
                let score = orig.score.expect("training data is labeled");
                audit.push(AuditRecord {
                    pair_id: orig.pair_id.clone(),
                    src,
                    tgt,
                    score,
                    probe: char_ngram_cosine(&s1.to_lowercase(), &s2.to_lowercase(), 3),
                });
                instances.push(TaggedInstance {
                    instance: StrInstance {
                        pair_id: format!("{}@{tgt}", orig.pair_id),
                        sent1: non_empty(s1),
                        sent2: non_empty(s2),
                        lang: tgt,
                        split: Split::Train,
                        score: Some(score),
                    },
                    provenance: Provenance::translated(src, orig.pair_id.clone()),
                });
            }
        }
    }
    Ok(AugmentedSet {
        languages: langs,
        instances,
        audit,
    })
}

fn non_empty(s: String) -> String {
    if s.trim().is_empty() {
        "_".to_string()
    } else {
        s
    }
}

/// Replaces a train set's instances by their cross-translated union over its
/// source languages. The target is never among the sources, so nothing is
/// translated into it.
pub fn augment_train_set(
    ts: &TrainSet,
    translator: &dyn Translator,
    exec: Execution,
) -> Result<(TrainSet, Vec<AuditRecord>), AugmentError> {
    if ts.instances.iter().any(|t| !t.provenance.is_original()) {
        return Err(AugmentError::AlreadyAugmented);
    }
    let mut groups: BTreeMap<LanguageCode, Vec<StrInstance>> = BTreeMap::new();
    for t in &ts.instances {
        groups.entry(t.instance.lang).or_default().push(t.instance.clone());
    }
    let by_lang: BTreeMap<LanguageCode, &[StrInstance]> = groups.iter().map(|(l, v)| (*l, v.as_slice())).collect();
    let aug = translate_groups(&by_lang, translator, exec)?;
    let mut out = ts.clone();
    out.strategy = ts.strategy.with_augment(true);
    out.instances = aug.instances;
    Ok((out, aug.audit))
}
