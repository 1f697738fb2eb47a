use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CorpusError;
use crate::langsim::LanguageCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Dev,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Dev, Split::Test];

    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Dev => "dev",
            Split::Test => "test",
        }
    }

    /// Whether every instance of this split must carry a gold score.
    pub fn requires_scores(self) -> bool {
        !matches!(self, Split::Test)
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Split {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "train" => Ok(Split::Train),
            "dev" | "validation" | "valid" => Ok(Split::Dev),
            "test" => Ok(Split::Test),
            _ => Err(CorpusError::InvalidArgument(format!("unknown split {s:?}"))),
        }
    }
}

/// One sentence pair with an optional relatedness score in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrInstance {
    pub pair_id: String,
    pub sent1: String,
    pub sent2: String,
    pub lang: LanguageCode,
    pub split: Split,
    pub score: Option<f64>,
}

impl StrInstance {
    pub fn validate(&self) -> Result<(), CorpusError> {
        for s in [&self.sent1, &self.sent2] {
            if s.trim().is_empty() {
                return Err(CorpusError::EmptySentence(self.pair_id.clone()));
            }
            if s.contains(['\n', '\r']) {
                return Err(CorpusError::MalformedRow {
                    line: 0,
                    reason: format!("{}: sentence contains a line break", self.pair_id),
                });
            }
        }
        if let Some(score) = self.score {
            if !(0.0..=1.0).contains(&score) {
                return Err(CorpusError::ScoreOutOfRange {
                    pair_id: self.pair_id.clone(),
                    value: score.to_string(),
                });
            }
        }
        Ok(())
    }
}

/// All instances of one language and split, in file order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    lang: LanguageCode,
    split: Split,
    instances: Vec<StrInstance>,
}

impl Dataset {
    pub fn new(lang: LanguageCode, split: Split, instances: Vec<StrInstance>) -> Result<Self, CorpusError> {
        let mut seen = HashSet::with_capacity(instances.len());
        for inst in &instances {
            inst.validate()?;
            if inst.lang != lang || inst.split != split {
                return Err(CorpusError::InconsistentInstance {
                    pair_id: inst.pair_id.clone(),
                    reason: format!(
                        "instance is {}/{} inside a {lang}/{split} dataset",
                        inst.lang, inst.split
                    ),
                });
            }
            if split.requires_scores() && inst.score.is_none() {
                return Err(CorpusError::MissingScore(inst.pair_id.clone()));
            }
            if !seen.insert(inst.pair_id.as_str()) {
                return Err(CorpusError::DuplicatePairId(inst.pair_id.clone()));
            }
        }
        Ok(Dataset { lang, split, instances })
    }

    pub fn empty(lang: LanguageCode, split: Split) -> Self {
        Dataset {
            lang,
            split,
            instances: Vec::new(),
        }
    }

    pub fn lang(&self) -> LanguageCode {
        self.lang
    }

    pub fn split(&self) -> Split {
        self.split
    }

    pub fn instances(&self) -> &[StrInstance] {
        &self.instances
    }

    pub fn into_instances(self) -> Vec<StrInstance> {
        self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn is_labeled(&self) -> bool {
        self.instances.iter().all(|i| i.score.is_some())
    }

    /// Gold scores, or `None` if any instance lacks one.
    pub fn scores(&self) -> Option<Vec<f64>> {
        self.instances.iter().map(|i| i.score).collect()
    }
}
