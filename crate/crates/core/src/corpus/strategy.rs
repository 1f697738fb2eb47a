use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CorpusError;
use crate::langsim::FeatureKind;

/// How donor languages are chosen for a target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    /// English training data only.
    EnglishOnly,
    /// Every available training language except the target.
    MsAll,
    /// Training languages from the target's family.
    MsFam,
    /// English plus the `k` most similar non-English languages.
    KnnPlusEnglish { k: usize },
    /// The `k` most similar languages, English only if it is among them.
    KnnSingle { k: usize },
}

impl StrategyKind {
    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::EnglishOnly => "eng",
            StrategyKind::MsAll => "ms-all",
            StrategyKind::MsFam => "ms-fam",
            StrategyKind::KnnPlusEnglish { .. } => "knn+eng",
            StrategyKind::KnnSingle { .. } => "knn",
        }
    }

    pub fn k(self) -> Option<usize> {
        match self {
            StrategyKind::KnnPlusEnglish { k } | StrategyKind::KnnSingle { k } => Some(k),
            _ => None,
        }
    }

    pub fn is_knn(self) -> bool {
        self.k().is_some()
    }

    /// Builds a kind from its name and an optional `k`.
    pub fn from_parts(name: &str, k: Option<usize>) -> Result<Self, CorpusError> {
        let need_k = |k: Option<usize>| {
            k.ok_or_else(|| CorpusError::InvalidStrategy(format!("{name} needs k")))
        };
        let no_k = |kind: StrategyKind| match k {
            Some(_) => Err(CorpusError::InvalidStrategy(format!("{name} takes no k"))),
            None => Ok(kind),
        };
        match name.trim().to_ascii_lowercase().as_str() {
            "eng" | "english" | "english-only" => no_k(StrategyKind::EnglishOnly),
            "ms-all" | "msall" => no_k(StrategyKind::MsAll),
            "ms-fam" | "msfam" => no_k(StrategyKind::MsFam),
            "knn+eng" | "knn-eng" | "knnpluseng" => Ok(StrategyKind::KnnPlusEnglish { k: need_k(k)? }),
            "knn" | "knn-single" => Ok(StrategyKind::KnnSingle { k: need_k(k)? }),
            other => Err(CorpusError::InvalidStrategy(format!("unknown strategy {other:?}"))),
        }
    }
}

/// A complete, declarative recipe for building a training set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct AssemblyStrategy {
    pub kind: StrategyKind,
    pub feature: Option<FeatureKind>,
    /// Cross-translate the selected training sets.
    pub augment: bool,
    /// Romanize non-Latin scripts in training and evaluation data.
    pub romanize: bool,
}

impl AssemblyStrategy {
    pub fn new(kind: StrategyKind, feature: Option<FeatureKind>) -> Result<Self, CorpusError> {
        let s = AssemblyStrategy {
            kind,
            feature,
            augment: false,
            romanize: false,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn english_only() -> Self {
        Self::new(StrategyKind::EnglishOnly, None).unwrap()
    }

    pub fn ms_all() -> Self {
        Self::new(StrategyKind::MsAll, None).unwrap()
    }

    pub fn ms_fam() -> Self {
        Self::new(StrategyKind::MsFam, None).unwrap()
    }

    pub fn knn_plus_english(k: usize, feature: FeatureKind) -> Result<Self, CorpusError> {
        Self::new(StrategyKind::KnnPlusEnglish { k }, Some(feature))
    }

    pub fn knn_single(k: usize, feature: FeatureKind) -> Result<Self, CorpusError> {
        Self::new(StrategyKind::KnnSingle { k }, Some(feature))
    }

    pub fn with_augment(mut self, on: bool) -> Self {
        self.augment = on;
        self
    }

    pub fn with_romanize(mut self, on: bool) -> Self {
        self.romanize = on;
        self
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        match (self.kind.k(), self.feature) {
            (Some(0), _) => Err(CorpusError::InvalidStrategy("k must be at least 1".into())),
            (Some(_), None) => Err(CorpusError::InvalidStrategy(format!(
                "{} needs a feature kind",
                self.kind.name()
            ))),
            (None, Some(f)) => Err(CorpusError::InvalidStrategy(format!(
                "{} takes no feature kind (got {f})",
                self.kind.name()
            ))),
            _ => Ok(()),
        }
    }

    /// Compact descriptor such as `knn+eng(k=2,cellstate)+mt`.
    pub fn descriptor(&self) -> String {
        let mut s = self.kind.name().to_string();
        if let (Some(k), Some(f)) = (self.kind.k(), self.feature) {
            s.push_str(&format!("(k={k},{f})"));
        }
        if self.augment {
            s.push_str("+mt");
        }
        if self.romanize {
            s.push_str("+tl");
        }
        s
    }
}

impl fmt::Display for AssemblyStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

impl FromStr for AssemblyStrategy {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CorpusError::InvalidStrategy(format!("cannot parse strategy {s:?}"));
        let mut rest = s.trim();
        let mut romanize = false;
        let mut augment = false;
        if let Some(r) = rest.strip_suffix("+tl") {
            romanize = true;
            rest = r;
        }
        if let Some(r) = rest.strip_suffix("+mt") {
            augment = true;
            rest = r;
        }
        let (name, k, feature) = match rest.split_once('(') {
            Some((name, args)) => {
                let args = args.strip_suffix(')').ok_or_else(bad)?;
                let (k, feature) = args.split_once(',').ok_or_else(bad)?;
                let k: usize = k.trim().strip_prefix("k=").ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let feature: FeatureKind = feature.parse()?;
                (name, Some(k), Some(feature))
            }
            None => (rest, None, None),
        };
        let kind = StrategyKind::from_parts(name, k)?;
        Ok(AssemblyStrategy::new(kind, feature)?
            .with_augment(augment)
            .with_romanize(romanize))
    }
}

impl From<AssemblyStrategy> for String {
    fn from(s: AssemblyStrategy) -> String {
        s.descriptor()
    }
}

impl TryFrom<String> for AssemblyStrategy {
    type Error = CorpusError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}
