use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use thiserror::Error;

use crate::langsim::LanguageCode;

/// Failure inside a translator. `index` points into the batch when the
/// failure is attributable to one input.
#[derive(Debug, Error)]
#[error("{message}")]
pub struct TranslatorError {
    pub index: Option<usize>,
    pub message: String,
}

impl TranslatorError {
    pub fn new(message: impl Into<String>) -> Self {
        TranslatorError {
            index: None,
            message: message.into(),
        }
    }
}

/// A machine translation backend.
///
/// Implementations must be deterministic for identical inputs within a run
/// and total over the pairs [`Translator::supports`] accepts.
pub trait Translator: Send + Sync {
    fn name(&self) -> String;

    fn supports(&self, src: LanguageCode, tgt: LanguageCode) -> bool;

    fn translate(&self, text: &str, src: LanguageCode, tgt: LanguageCode) -> Result<String, TranslatorError>;

    /// Translates many texts for one language pair, in order.
    fn translate_batch(
        &self,
        texts: &[&str],
        src: LanguageCode,
        tgt: LanguageCode,
    ) -> Result<Vec<String>, TranslatorError> {
        texts
            .iter()
            .enumerate()
            .map(|(i, t)| {
                self.translate(t, src, tgt).map_err(|mut e| {
                    e.index.get_or_insert(i);
                    e
                })
            })
            .collect()
    }
}

/// Returns its input unchanged; supports every pair.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityTranslator;

impl Translator for IdentityTranslator {
    fn name(&self) -> String {
        "identity".into()
    }

    fn supports(&self, _: LanguageCode, _: LanguageCode) -> bool {
        true
    }

    fn translate(&self, text: &str, _: LanguageCode, _: LanguageCode) -> Result<String, TranslatorError> {
        Ok(text.to_string())
    }
}

/// Token-by-token lookup. Supports exactly the pairs it has a dictionary
/// for; unknown tokens are copied.
#[derive(Debug, Clone, Default)]
pub struct DictionaryTranslator {
    dicts: BTreeMap<(LanguageCode, LanguageCode), HashMap<String, String>>,
}

impl DictionaryTranslator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, src: LanguageCode, tgt: LanguageCode, from: &str, to: &str) {
        self.dicts
            .entry((src, tgt))
            .or_default()
            .insert(from.to_lowercase(), to.to_string());
    }

    /// Declares a pair without entries (every token is copied).
    pub fn add_pair(&mut self, src: LanguageCode, tgt: LanguageCode) {
        self.dicts.entry((src, tgt)).or_default();
    }

    /// Reads `src<TAB>tgt<TAB>word<TAB>translation` lines; `#` comments.
    pub fn parse(text: &str) -> Result<Self, TranslatorError> {
        let mut d = Self::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = line.split('\t').collect();
            let bad = |m: String| TranslatorError::new(format!("dictionary line {}: {m}", i + 1));
            if f.len() != 4 {
                return Err(bad(format!("expected 4 fields, found {}", f.len())));
            }
            let src = LanguageCode::extension(f[0]).map_err(|e| bad(e.to_string()))?;
            let tgt = LanguageCode::extension(f[1]).map_err(|e| bad(e.to_string()))?;
            d.insert(src, tgt, f[2], f[3]);
        }
        Ok(d)
    }

    pub fn load(path: &Path) -> Result<Self, TranslatorError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| TranslatorError::new(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn pairs(&self) -> impl Iterator<Item = &(LanguageCode, LanguageCode)> {
        self.dicts.keys()
    }
}

impl Translator for DictionaryTranslator {
    fn name(&self) -> String {
        "dictionary".into()
    }

    fn supports(&self, src: LanguageCode, tgt: LanguageCode) -> bool {
        self.dicts.contains_key(&(src, tgt))
    }

    fn translate(&self, text: &str, src: LanguageCode, tgt: LanguageCode) -> Result<String, TranslatorError> {
        let dict = self
            .dicts
            .get(&(src, tgt))
            .ok_or_else(|| TranslatorError::new(format!("no dictionary for {src}->{tgt}")))?;
        let out: Vec<&str> = text
            .split_whitespace()
            .map(|t| dict.get(&t.to_lowercase()).map_or(t, String::as_str))
            .collect();
        Ok(out.join(" "))
    }
}

/// Talks to an external MT program over stdin/stdout.
///
/// One process is started per batch. Each request line is
/// `SRC<TAB>TGT<TAB>text`; the program must answer with exactly one line
/// per request, in order, then exit when stdin closes.
#[derive(Debug, Clone)]
pub struct ExternalProcessTranslator {
    pub program: PathBuf,
    pub args: Vec<String>,
    pub timeout: Duration,
    /// `None` means every pair is accepted.
    pub pairs: Option<BTreeSet<(LanguageCode, LanguageCode)>>,
}

impl ExternalProcessTranslator {
    pub fn new(program: impl Into<PathBuf>, args: Vec<String>) -> Self {
        ExternalProcessTranslator {
            program: program.into(),
            args,
            timeout: Duration::from_secs(600),
            pairs: None,
        }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }
}

impl Translator for ExternalProcessTranslator {
    fn name(&self) -> String {
        format!("external:{}", self.program.display())
    }

    fn supports(&self, src: LanguageCode, tgt: LanguageCode) -> bool {
        self.pairs.as_ref().map_or(true, |p| p.contains(&(src, tgt)))
    }

    fn translate(&self, text: &str, src: LanguageCode, tgt: LanguageCode) -> Result<String, TranslatorError> {
        Ok(self.translate_batch(&[text], src, tgt)?.remove(0))
    }

    fn translate_batch(
        &self,
        texts: &[&str],
        src: LanguageCode,
        tgt: LanguageCode,
    ) -> Result<Vec<String>, TranslatorError> {
        if texts.is_empty() {
            return Ok(Vec::new());
        }
        let mut request = String::new();
        for (i, t) in texts.iter().enumerate() {
            if t.contains(['\n', '\r', '\t']) {
                return Err(TranslatorError {
                    index: Some(i),
                    message: "text contains a tab or line break".into(),
                });
            }
            request.push_str(&format!("{src}\t{tgt}\t{t}\n"));
        }
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| TranslatorError::new(format!("cannot start {}: {e}", self.program.display())))?;
        let mut stdin = child.stdin.take().expect("piped");
        let stdout = child.stdout.take().expect("piped");
        let writer = thread::spawn(move || stdin.write_all(request.as_bytes()));
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            let lines: std::io::Result<Vec<String>> = BufReader::new(stdout).lines().collect();
            let _ = tx.send(lines);
        });
        let lines = match rx.recv_timeout(self.timeout) {
            Ok(r) => r.map_err(|e| TranslatorError::new(format!("reading translator output: {e}"))),
            Err(_) => {
                let _ = child.kill();
                Err(TranslatorError::new(format!("translator timed out after {:?}", self.timeout)))
            }
        };
        let status = child.wait();
        let _ = writer.join();
        let lines = lines?;
        match status {
            Ok(s) if s.success() => {}
            Ok(s) => return Err(TranslatorError::new(format!("translator exited with {s}"))),
            Err(e) => return Err(TranslatorError::new(e.to_string())),
        }
        if lines.len() != texts.len() {
            return Err(TranslatorError {
                index: Some(lines.len().min(texts.len() - 1)),
                message: format!("expected {} lines from translator, got {}", texts.len(), lines.len()),
            });
        }
        Ok(lines)
    }
}

/// Builds a translator from a spec string: `identity`, `dict:<path>` or
/// `cmd:<program> [args...]`.
pub fn translator_from_spec(spec: &str) -> Result<Box<dyn Translator>, TranslatorError> {
    let spec = spec.trim();
    if spec == "identity" || spec == "mock" {
        return Ok(Box::new(IdentityTranslator));
    }
    if let Some(path) = spec.strip_prefix("dict:") {
        return Ok(Box::new(DictionaryTranslator::load(Path::new(path))?));
    }
    if let Some(cmd) = spec.strip_prefix("cmd:") {
        let mut parts = cmd.split_whitespace();
        let program = parts
            .next()
            .ok_or_else(|| TranslatorError::new("cmd: translator needs a program"))?;
        return Ok(Box::new(ExternalProcessTranslator::new(
            program,
            parts.map(str::to_string).collect(),
        )));
    }
    Err(TranslatorError::new(format!("unknown translator spec {spec:?}")))
}
