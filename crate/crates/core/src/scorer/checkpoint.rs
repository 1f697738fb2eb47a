use std::collections::BTreeMap;

use super::features::FEATURE_NAMES;
use super::model::ScorerParams;
use super::ScorerError;

pub const CHECKPOINT_MAGIC: &str = "xlstr-scorer v1";

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub params: ScorerParams,
    pub meta: BTreeMap<String, String>,
}

/// Text checkpoint: the magic line, `meta` lines, the feature order, the
/// bias and one line per weight. Values use the shortest exact decimal.
pub fn to_checkpoint(params: &ScorerParams, meta: &BTreeMap<String, String>) -> String {
    let mut out = format!("{CHECKPOINT_MAGIC}\n");
    for (k, v) in meta {
        out.push_str(&format!("meta\t{k}\t{v}\n"));
    }
    out.push_str(&format!("features\t{}\n", FEATURE_NAMES.join("\t")));
    out.push_str(&format!("bias\t{:?}\n", params.bias));
    for (name, w) in FEATURE_NAMES.iter().zip(&params.weights) {
        out.push_str(&format!("w\t{name}\t{w:?}\n"));
    }
    out
}

pub fn parse_checkpoint(text: &str) -> Result<Checkpoint, ScorerError> {
    let bad = |line: usize, reason: &str| ScorerError::MalformedCheckpoint {
        line,
        reason: reason.to_string(),
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim() == CHECKPOINT_MAGIC => {}
        _ => return Err(bad(1, "missing version line")),
    }
    let mut meta = BTreeMap::new();
    let mut features: Option<Vec<String>> = None;
    let mut bias = None;
    let mut weights = BTreeMap::new();
    for (i, line) in lines {
        let n = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(n, "not a number"));
        match f.as_slice() {
            ["meta", k, v] => {
                meta.insert(k.to_string(), v.to_string());
            }
            ["features", names @ ..] => features = Some(names.iter().map(|s| s.to_string()).collect()),
            ["bias", v] => bias = Some(num(v)?),
            ["w", name, v] => {
                weights.insert(name.to_string(), num(v)?);
            }
            _ => return Err(bad(n, "unrecognized line")),
        }
    }
    let features = features.ok_or_else(|| bad(0, "missing feature manifest"))?;
    if features.iter().map(String::as_str).ne(FEATURE_NAMES) {
        return Err(bad(0, "feature manifest does not match this build"));
    }
    let weights = FEATURE_NAMES
        .iter()
        .map(|name| weights.get(*name).copied().ok_or_else(|| bad(0, "missing weight")))
        .collect::<Result<Vec<_>, _>>()?;
    let params = ScorerParams::new(weights, bias.ok_or_else(|| bad(0, "missing bias"))?)?;
    Ok(Checkpoint { params, meta })
}
