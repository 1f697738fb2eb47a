use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::LanguageCode;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    IndoEuropean,
    AfroAsiatic,
    /// A family with exactly one task language; never yields donors.
    Singleton(String),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::IndoEuropean => f.write_str("Indo-European"),
            Family::AfroAsiatic => f.write_str("Afro-Asiatic"),
            Family::Singleton(name) => write!(f, "{name} (singleton)"),
        }
    }
}

/// Language-to-family assignments used for family-restricted multi-source
/// training.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyTable {
    assignments: BTreeMap<LanguageCode, Family>,
}

impl FamilyTable {
    pub fn from_assignments(assignments: impl IntoIterator<Item = (LanguageCode, Family)>) -> Self {
        FamilyTable {
            assignments: assignments.into_iter().collect(),
        }
    }

    /// The grouping behind the family-restricted multi-source runs: Telugu
    /// sits with the Indo-European group, Indonesian and Kinyarwanda are
    /// singletons.
    pub fn operational() -> Self {
        use LanguageCode as L;
        let ie = [L::ENG, L::ESP, L::AFR, L::HIN, L::PAN, L::MAR, L::TEL]
            .map(|l| (l, Family::IndoEuropean));
        let aa = [L::AMH, L::ARB, L::ARQ, L::ARY, L::HAU].map(|l| (l, Family::AfroAsiatic));
        let singles = [
            (L::IND, Family::Singleton("Austronesian".into())),
            (L::KIN, Family::Singleton("Niger-Congo".into())),
        ];
        Self::from_assignments(ie.into_iter().chain(aa).chain(singles))
    }

    pub fn family(&self, lang: LanguageCode) -> Option<&Family> {
        self.assignments.get(&lang)
    }

    pub fn assignments(&self) -> &BTreeMap<LanguageCode, Family> {
        &self.assignments
    }

    /// All `available` languages in `target`'s family, minus `target`.
    /// Empty for singleton families and for languages outside the table.
    pub fn family_sources(
        &self,
        target: LanguageCode,
        available: impl IntoIterator<Item = LanguageCode>,
    ) -> BTreeSet<LanguageCode> {
        let family = match self.family(target) {
            Some(f @ (Family::IndoEuropean | Family::AfroAsiatic)) => f,
            _ => return BTreeSet::new(),
        };
        available
            .into_iter()
            .filter(|&l| l != target && self.family(l) == Some(family))
            .collect()
    }
}

impl Default for FamilyTable {
    fn default() -> Self {
        Self::operational()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langsim::{TASK_LANGUAGES, TRAIN_LANGUAGES};
    use LanguageCode as L;

    fn set(v: &[LanguageCode]) -> BTreeSet<LanguageCode> {
        v.iter().copied().collect()
    }

    #[test]
    fn total_over_task_languages() {
        let t = FamilyTable::operational();
        for l in TASK_LANGUAGES {
            assert!(t.family(l).is_some(), "{l}");
        }
    }

    #[test]
    fn family_source_sets() {
        let t = FamilyTable::operational();
        assert_eq!(t.family_sources(L::ARB, TRAIN_LANGUAGES), set(&[L::AMH, L::ARQ, L::ARY, L::HAU]));
        assert_eq!(t.family_sources(L::ENG, TRAIN_LANGUAGES), set(&[L::ESP, L::MAR, L::TEL]));
        assert!(t.family_sources(L::KIN, TASK_LANGUAGES).is_empty());
        assert!(t.family_sources(L::IND, TASK_LANGUAGES).is_empty());
    }
}
