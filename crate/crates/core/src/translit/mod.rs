//! Table-driven romanization of Arabic, Devanagari and Ethiopic text.
//!
//! Each script has a grapheme table mapping source sequences to ASCII.
//! Romanization applies the longest matching rule at each position.
//! Devanagari consonants carry an inherent vowel that a following vowel
//! sign or virama suppresses. Characters no table covers pass through
//! unchanged; non-Latin ones are counted as warnings.

mod table;

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;

use thiserror::Error;

use crate::corpus::{Dataset, StrInstance, TrainSet};
use crate::parallel::{self, Execution};

pub use table::{Rule, RuleClass, Script, ScriptTable};

#[derive(Debug, Error)]
pub enum TranslitError {
    #[error("unknown script {0:?}")]
    UnknownScript(String),
    #[error("malformed table at line {line}: {reason}")]
    MalformedTable { line: usize, reason: String },
    #[error("rule {rule:?}: {reason}")]
    InvalidRule { rule: String, reason: String },
    #[error("conflicting rules for {0:?}")]
    ConflictingRule(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone)]
struct Entry {
    output: String,
    class: RuleClass,
    inherent: Option<String>,
}

/// Result of one romanization call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Romanized {
    pub text: String,
    /// Non-Latin characters no table covers; they were passed through.
    pub warnings: usize,
}

/// A merged, immutable rule set built from one or more script tables.
#[derive(Debug, Clone)]
pub struct Romanizer {
    scripts: BTreeSet<Script>,
    rules: HashMap<String, Entry>,
    max_len: usize,
}

impl Romanizer {
    /// Merges tables. Tables are processed in script order, so the result
    /// does not depend on argument order; two tables claiming the same source
    /// sequence is an error.
    pub fn new(tables: impl IntoIterator<Item = ScriptTable>) -> Result<Self, TranslitError> {
        let mut tables: Vec<ScriptTable> = tables.into_iter().collect();
        tables.sort_by_key(|t| t.script());
        let mut scripts = BTreeSet::new();
        let mut rules = HashMap::new();
        let mut max_len = 0;
        for t in &tables {
            scripts.insert(t.script());
            for r in t.rules() {
                let entry = Entry {
                    output: r.output.clone(),
                    class: r.class,
                    inherent: t.inherent().map(str::to_string),
                };
                if rules.insert(r.source.clone(), entry).is_some() {
                    return Err(TranslitError::ConflictingRule(r.source.clone()));
                }
                max_len = max_len.max(r.source.chars().count());
            }
        }
        Ok(Romanizer { scripts, rules, max_len })
    }

    /// All three bundled tables.
    pub fn bundled() -> Self {
        Self::new(Script::ALL.map(ScriptTable::bundled)).expect("bundled tables are disjoint")
    }

    pub fn scripts(&self) -> &BTreeSet<Script> {
        &self.scripts
    }

    pub fn covers(&self, c: char) -> bool {
        let mut buf = [0u8; 4];
        self.rules.contains_key(&*c.encode_utf8(&mut buf))
    }

    /// Longest rule matching at the start of `chars`, with its length.
    fn lookup(&self, chars: &[char]) -> Option<(usize, &Entry)> {
        let mut key = String::new();
        let upper = self.max_len.min(chars.len());
        for len in (1..=upper).rev() {
            key.clear();
            key.extend(&chars[..len]);
            if let Some(e) = self.rules.get(&key) {
                return Some((len, e));
            }
        }
        None
    }

    pub fn romanize(&self, text: &str) -> Romanized {
        let chars: Vec<char> = text.chars().collect();
        let mut out = String::with_capacity(text.len());
        let mut warnings = 0;
        let mut pending: Option<&str> = None;
        let mut i = 0;
        while i < chars.len() {
            match self.lookup(&chars[i..]) {
                Some((len, e)) => {
                    let suppresses = matches!(e.class, RuleClass::Sign | RuleClass::Virama);
                    if let Some(v) = pending.take() {
                        if !suppresses {
                            out.push_str(v);
                        }
                    }
                    out.push_str(&e.output);
                    if e.class == RuleClass::Consonant {
                        pending = e.inherent.as_deref();
                    }
                    i += len;
                }
                None => {
                    if let Some(v) = pending.take() {
                        out.push_str(v);
                    }
                    let c = chars[i];
                    if !is_latin_or_neutral(c) {
                        warnings += 1;
                    }
                    out.push(c);
                    i += 1;
                }
            }
        }
        if let Some(v) = pending {
            out.push_str(v);
        }
        Romanized { text: out, warnings }
    }

    /// Convenience wrapper returning only the text.
    pub fn romanize_str(&self, text: &str) -> String {
        self.romanize(text).text
    }
}

/// Basic Latin, the Latin supplements and extensions, combining marks,
/// whitespace and general punctuation pass through without a warning.
fn is_latin_or_neutral(c: char) -> bool {
    c.is_ascii()
        || c.is_whitespace()
        || matches!(c as u32, 0x0080..=0x024F | 0x0300..=0x036F | 0x1E00..=0x1EFF | 0x2000..=0x206F)
}

/// Romanizes both sentences of every instance. Ids, scores and order are
/// untouched. Returns the new dataset and the total warning count.
pub fn romanize_dataset(ds: &Dataset, romanizer: &Romanizer, exec: Execution) -> (Dataset, usize) {
    let (instances, warnings) = romanize_instances(ds.instances(), romanizer, exec);
    let out = Dataset::new(ds.lang(), ds.split(), instances).expect("romanization keeps datasets valid");
    (out, warnings)
}

/// Romanizes a training set in place and marks every instance's
/// provenance as romanized.
pub fn romanize_train_set(ts: &mut TrainSet, romanizer: &Romanizer, exec: Execution) -> usize {
    let results = parallel::map(exec, &ts.instances, |t| romanize_instance(&t.instance, romanizer));
    let mut warnings = 0;
    for (t, (inst, w)) in ts.instances.iter_mut().zip(results) {
        t.instance = inst;
        t.provenance.romanized = true;
        warnings += w;
    }
    warnings
}

/// Romanizes loose instances, returning them with the total warning count.
pub fn romanize_instances(items: &[StrInstance], romanizer: &Romanizer, exec: Execution) -> (Vec<StrInstance>, usize) {
    let results = parallel::map(exec, items, |i| romanize_instance(i, romanizer));
    let warnings = results.iter().map(|(_, w)| w).sum();
    (results.into_iter().map(|(i, _)| i).collect(), warnings)
}

fn romanize_instance(inst: &StrInstance, romanizer: &Romanizer) -> (StrInstance, usize) {
    let a = romanizer.romanize(&inst.sent1);
    let b = romanizer.romanize(&inst.sent2);
    let mut out = inst.clone();
    // A sentence made only of marks with empty output would become empty;
    // keep a placeholder so the instance stays valid.
    out.sent1 = non_empty(a.text);
    out.sent2 = non_empty(b.text);
    (out, a.warnings + b.warnings)
}

fn non_empty(s: String) -> String {
    if s.trim().is_empty() {
        "_".to_string()
    } else {
        s
    }
}
