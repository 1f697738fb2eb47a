use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::TranslitError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Script {
    Arabic,
    Devanagari,
    Ethiopic,
}

impl Script {
    pub const ALL: [Script; 3] = [Script::Arabic, Script::Devanagari, Script::Ethiopic];

    pub fn name(self) -> &'static str {
        match self {
            Script::Arabic => "arabic",
            Script::Devanagari => "devanagari",
            Script::Ethiopic => "ethiopic",
        }
    }

    fn fixture(self) -> &'static str {
        match self {
            Script::Arabic => include_str!("../../data/translit/arabic.tsv"),
            Script::Devanagari => include_str!("../../data/translit/devanagari.tsv"),
            Script::Ethiopic => include_str!("../../data/translit/ethiopic.tsv"),
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Script {
    type Err = TranslitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Script::ALL
            .into_iter()
            .find(|sc| sc.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| TranslitError::UnknownScript(s.to_string()))
    }
}

/// How a rule interacts with its neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleClass {
    /// Emitted as is.
    Plain,
    /// Carries the table's inherent vowel unless a sign or virama follows.
    Consonant,
    /// Dependent vowel sign; suppresses a preceding inherent vowel.
    Sign,
    /// Vowel killer; suppresses a preceding inherent vowel.
    Virama,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub source: String,
    pub output: String,
    pub class: RuleClass,
}

/// Grapheme rules for one script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptTable {
    script: Script,
    inherent: Option<String>,
    rules: Vec<Rule>,
}

impl ScriptTable {
    pub fn new(script: Script, inherent: Option<String>, mut rules: Vec<Rule>) -> Result<Self, TranslitError> {
        // Longest source first, then code point order: a canonical order that
        // no input permutation can change.
        rules.sort_by(|a, b| {
            b.source
                .chars()
                .count()
                .cmp(&a.source.chars().count())
                .then_with(|| a.source.cmp(&b.source))
        });
        let t = ScriptTable {
            script,
            inherent,
            rules,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn bundled(script: Script) -> Self {
        Self::parse(script.fixture()).expect("bundled table is well formed")
    }

    pub fn load(path: &Path) -> Result<Self, TranslitError> {
        let text = std::fs::read_to_string(path).map_err(|source| TranslitError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Parses `source<TAB>output[<TAB>class]` lines. `#` starts a comment
    /// line; `@script` and `@inherent` are directives.
    pub fn parse(text: &str) -> Result<Self, TranslitError> {
        let mut script = None;
        let mut inherent = None;
        let mut rules = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let bad = |reason: String| TranslitError::MalformedTable { line, reason };
            let raw = raw.trim_end_matches('\r');
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split('\t').collect();
            if let Some(directive) = fields[0].strip_prefix('@') {
                let value = fields.get(1).copied().unwrap_or("").trim();
                match directive {
                    "script" => script = Some(value.parse()?),
                    "inherent" => inherent = Some(value.to_string()),
                    other => return Err(bad(format!("unknown directive @{other}"))),
                }
                continue;
            }
            if fields.len() < 2 || fields.len() > 3 {
                return Err(bad(format!("expected 2 or 3 fields, found {}", fields.len())));
            }
            let class = match fields.get(2).copied().unwrap_or("") {
                "" => RuleClass::Plain,
                "consonant" => RuleClass::Consonant,
                "sign" => RuleClass::Sign,
                "virama" => RuleClass::Virama,
                other => return Err(bad(format!("unknown rule class {other:?}"))),
            };
            rules.push(Rule {
                source: fields[0].to_string(),
                output: fields[1].to_string(),
                class,
            });
        }
        let script = script.ok_or(TranslitError::MalformedTable {
            line: 0,
            reason: "missing @script directive".into(),
        })?;
        Self::new(script, inherent, rules)
    }

    pub fn script(&self) -> Script {
        self.script
    }

    pub fn inherent(&self) -> Option<&str> {
        self.inherent.as_deref()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Every character that appears in a rule source.
    pub fn covered(&self) -> BTreeSet<char> {
        self.rules.iter().flat_map(|r| r.source.chars()).collect()
    }

    /// Checks the structural guarantees romanization relies on:
    /// non-empty, unique sources; printable ASCII outputs; every character of
    /// a multi-character source also has a rule of its own, so no covered
    /// character can survive romanization; `@inherent` present iff consonant
    /// rules exist.
    pub fn validate(&self) -> Result<(), TranslitError> {
        let mut seen = BTreeSet::new();
        for r in &self.rules {
            if r.source.is_empty() {
                return Err(TranslitError::InvalidRule {
                    rule: r.source.clone(),
                    reason: "empty source".into(),
                });
            }
            if !seen.insert(r.source.as_str()) {
                return Err(TranslitError::ConflictingRule(r.source.clone()));
            }
            if let Some(c) = r.output.chars().find(|c| !(' '..='~').contains(c)) {
                return Err(TranslitError::InvalidRule {
                    rule: r.source.clone(),
                    reason: format!("output character {c:?} is not printable ASCII"),
                });
            }
        }
        for r in &self.rules {
            if let Some(c) = r.source.chars().find(|c| !seen.contains(c.to_string().as_str())) {
                return Err(TranslitError::InvalidRule {
                    rule: r.source.clone(),
                    reason: format!("{c:?} has no single-character rule"),
                });
            }
        }
        let has_consonants = self.rules.iter().any(|r| r.class == RuleClass::Consonant);
        if has_consonants != self.inherent.is_some() {
            return Err(TranslitError::InvalidRule {
                rule: String::new(),
                reason: "consonant rules require an @inherent vowel and vice versa".into(),
            });
        }
        Ok(())
    }
}
