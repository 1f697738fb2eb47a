use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::{Dataset, Split};
use crate::langsim::{LanguageCode, TASK_LANGUAGES};

/// Instance counts of the shared-task release, `None` where a language has
/// no data for a split. Order follows [`TASK_LANGUAGES`]:
/// `[train, dev, test]` per language.
pub const SHARED_TASK_COUNTS: [(LanguageCode, [Option<usize>; 3]); 14] = [
    (LanguageCode::ENG, [Some(5500), Some(249), Some(2600)]),
    (LanguageCode::ESP, [Some(1562), Some(139), Some(140)]),
    (LanguageCode::AFR, [None, Some(375), Some(375)]),
    (LanguageCode::HIN, [None, Some(288), Some(968)]),
    (LanguageCode::PAN, [None, Some(242), Some(634)]),
    (LanguageCode::AMH, [Some(992), Some(95), Some(171)]),
    (LanguageCode::ARB, [None, Some(32), Some(595)]),
    (LanguageCode::ARQ, [Some(1261), Some(97), Some(583)]),
    (LanguageCode::ARY, [Some(924), Some(70), Some(425)]),
    (LanguageCode::HAU, [Some(1736), Some(212), Some(594)]),
    (LanguageCode::IND, [None, Some(144), Some(360)]),
    (LanguageCode::KIN, [Some(778), Some(222), Some(222)]),
    (LanguageCode::MAR, [Some(1200), Some(293), None]),
    (LanguageCode::TEL, [Some(1170), Some(130), None]),
];

/// Per language x split instance counts. A missing entry means no dataset
/// was supplied (rendered `-`), which is distinct from an empty dataset.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StatsTable {
    counts: BTreeMap<LanguageCode, BTreeMap<Split, usize>>,
}

pub fn stats<'a>(datasets: impl IntoIterator<Item = &'a Dataset>) -> StatsTable {
    let mut t = StatsTable::default();
    for ds in datasets {
        *t.counts
            .entry(ds.lang())
            .or_default()
            .entry(ds.split())
            .or_default() += ds.len();
    }
    t
}

impl StatsTable {
    /// Builds a table directly from counts (e.g. a manifest).
    pub fn from_counts(entries: impl IntoIterator<Item = (LanguageCode, Split, usize)>) -> Self {
        let mut t = StatsTable::default();
        for (l, s, n) in entries {
            *t.counts.entry(l).or_default().entry(s).or_default() += n;
        }
        t
    }

    /// The shared-task reference statistics.
    pub fn shared_task() -> Self {
        Self::from_counts(SHARED_TASK_COUNTS.iter().flat_map(|(l, c)| {
            Split::ALL
                .iter()
                .zip(c)
                .filter_map(move |(s, n)| n.map(|n| (*l, *s, n)))
        }))
    }

    pub fn count(&self, lang: LanguageCode, split: Split) -> Option<usize> {
        self.counts.get(&lang)?.get(&split).copied()
    }

    pub fn split_total(&self, split: Split) -> usize {
        self.counts.values().filter_map(|m| m.get(&split)).sum()
    }

    pub fn lang_total(&self, lang: LanguageCode) -> usize {
        self.counts.get(&lang).map_or(0, |m| m.values().sum())
    }

    pub fn grand_total(&self) -> usize {
        Split::ALL.iter().map(|&s| self.split_total(s)).sum()
    }

    pub fn languages(&self) -> impl Iterator<Item = LanguageCode> + '_ {
        self.counts.keys().copied()
    }

    /// Task languages in their usual column order, followed by any extra
    /// languages alphabetically.
    fn columns(&self) -> Vec<LanguageCode> {
        let mut cols: Vec<LanguageCode> = TASK_LANGUAGES.to_vec();
        cols.extend(self.counts.keys().filter(|l| !TASK_LANGUAGES.contains(l)));
        cols
    }

    /// Plain-text table with one row per split and one column per language.
    pub fn render(&self) -> String {
        let cols = self.columns();
        let mut out = format!("{:<6}", "");
        for c in &cols {
            write!(out, " {:>6}", c.as_str()).unwrap();
        }
        writeln!(out, " {:>7}", "total").unwrap();
        for split in Split::ALL {
            let label = match split {
                Split::Train => "Train",
                Split::Dev => "Dev",
                Split::Test => "Test",
            };
            write!(out, "{label:<6}").unwrap();
            for c in &cols {
                let cell = self.count(*c, split).map_or("-".to_string(), thousands);
                write!(out, " {cell:>6}").unwrap();
            }
            writeln!(out, " {:>7}", thousands(self.split_total(split))).unwrap();
        }
        out
    }

    /// JSON object `{lang: {split: count}}` plus per-split totals.
    pub fn to_json(&self) -> serde_json::Value {
        let totals: BTreeMap<&str, usize> = Split::ALL
            .iter()
            .map(|&s| (s.name(), self.split_total(s)))
            .collect();
        serde_json::json!({ "counts": self.counts, "totals": totals })
    }
}

/// `15123` -> `15,123`.
pub fn thousands(n: usize) -> String {
    let s = n.to_string();
    let mut out = String::with_capacity(s.len() + s.len() / 3);
    for (i, ch) in s.chars().enumerate() {
        if i > 0 && (s.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(ch);
    }
    out
}
