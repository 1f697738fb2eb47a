//! Reading and writing STR data files.
//!
//! Two layouts are accepted:
//!
//! * the shared-task CSV, header `PairID,Text,Score` (Score may be absent for
//!   test data), where `Text` is a quoted field holding the two sentences
//!   separated by a newline;
//! * a four-column TSV `pair_id<TAB>sent1<TAB>sent2<TAB>score`, with an
//!   optional header row and `#` comment lines, used for synthetic fixtures
//!   and train-set dumps.

use super::{CorpusError, Dataset, Split, StrInstance};
use crate::langsim::LanguageCode;

pub fn parse_dataset(content: &[u8], lang: LanguageCode, split: Split) -> Result<Dataset, CorpusError> {
    let text = std::str::from_utf8(content).map_err(|e| {
        CorpusError::Encoding(format!("invalid UTF-8 at byte {}", e.valid_up_to()))
    })?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let first = text
        .lines()
        .find(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    let instances = if first.contains('\t') {
        parse_tsv(text, lang, split)?
    } else {
        parse_csv(text, lang, split)?
    };
    Dataset::new(lang, split, instances)
}

fn parse_csv(text: &str, lang: LanguageCode, split: Split) -> Result<Vec<StrInstance>, CorpusError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| csv_error(1, e))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim().eq_ignore_ascii_case(name));
    let (id_col, text_col) = match (col("PairID"), col("Text")) {
        (Some(i), Some(t)) => (i, t),
        _ => {
            return Err(CorpusError::MalformedRow {
                line: 1,
                reason: "header must contain PairID and Text columns".into(),
            })
        }
    };
    let score_col = col("Score");

    let mut out = Vec::new();
    for rec in rdr.records() {
        let line = rec.as_ref().ok().and_then(|r| r.position()).map_or(0, |p| p.line() as usize);
        let rec = rec.map_err(|e| csv_error(line, e))?;
        if rec.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let field = |i: usize| rec.get(i).unwrap_or("");
        let pair_id = field(id_col).trim().to_string();
        if pair_id.is_empty() {
            return Err(CorpusError::MalformedRow {
                line,
                reason: "empty PairID".into(),
            });
        }
        let parts: Vec<&str> = field(text_col)
            .split('\n')
            .map(|s| s.trim_end_matches('\r'))
            .collect();
        if parts.len() != 2 {
            return Err(CorpusError::MalformedRow {
                line,
                reason: format!("{pair_id}: Text holds {} sentences, expected 2", parts.len()),
            });
        }
        let score = parse_score(line, &pair_id, score_col.map(field).unwrap_or(""))?;
        out.push(StrInstance {
            pair_id,
            sent1: parts[0].to_string(),
            sent2: parts[1].to_string(),
            lang,
            split,
            score,
        });
    }
    Ok(out)
}

fn parse_tsv(text: &str, lang: LanguageCode, split: Split) -> Result<Vec<StrInstance>, CorpusError> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = rec.as_ref().ok().and_then(|r| r.position()).map_or(0, |p| p.line() as usize);
        let rec = rec.map_err(|e| csv_error(line, e))?;
        if rec.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let id = rec.get(0).unwrap_or("").trim();
        if i == 0 && (id.eq_ignore_ascii_case("pair_id") || id.eq_ignore_ascii_case("pairid")) {
            continue;
        }
        if rec.len() < 3 || rec.len() > 4 {
            return Err(CorpusError::MalformedRow {
                line,
                reason: format!("expected 3 or 4 tab-separated fields, found {}", rec.len()),
            });
        }
        let score = parse_score(line, id, rec.get(3).unwrap_or(""))?;
        out.push(StrInstance {
            pair_id: id.to_string(),
            sent1: rec[1].to_string(),
            sent2: rec[2].to_string(),
            lang,
            split,
            score,
        });
    }
    Ok(out)
}

fn parse_score(line: usize, pair_id: &str, raw: &str) -> Result<Option<f64>, CorpusError> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Ok(None);
    }
    let v: f64 = raw.parse().map_err(|_| CorpusError::MalformedRow {
        line,
        reason: format!("{pair_id}: score {raw:?} is not a number"),
    })?;
    if !v.is_finite() || !(0.0..=1.0).contains(&v) {
        return Err(CorpusError::ScoreOutOfRange {
            pair_id: pair_id.to_string(),
            value: raw.to_string(),
        });
    }
    Ok(Some(v))
}

fn csv_error(line: usize, e: csv::Error) -> CorpusError {
    CorpusError::MalformedRow {
        line,
        reason: e.to_string(),
    }
}

/// Serializes in the shared-task CSV layout. The Score column is written
/// whenever at least one instance has a score.
pub fn to_csv(ds: &Dataset) -> String {
    let with_score = ds.instances().iter().any(|i| i.score.is_some());
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let header: &[&str] = if with_score {
        &["PairID", "Text", "Score"]
    } else {
        &["PairID", "Text"]
    };
    w.write_record(header).expect("in-memory write");
    for inst in ds.instances() {
        let text = format!("{}\n{}", inst.sent1, inst.sent2);
        if with_score {
            let score = inst.score.map(format_score).unwrap_or_default();
            w.write_record([inst.pair_id.as_str(), &text, &score])
        } else {
            w.write_record([inst.pair_id.as_str(), &text])
        }
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Serializes instances in the four-column TSV layout with a header row.
pub fn to_tsv<'a>(instances: impl IntoIterator<Item = &'a StrInstance>) -> String {
    let mut w = csv::WriterBuilder::new()
        .delimiter(b'\t')
        .from_writer(Vec::new());
    w.write_record(["pair_id", "sent1", "sent2", "score"])
        .expect("in-memory write");
    for inst in instances {
        let score = inst.score.map(format_score).unwrap_or_default();
        w.write_record([inst.pair_id.as_str(), &inst.sent1, &inst.sent2, &score])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Shortest decimal that reads back to the same `f64`.
pub fn format_score(v: f64) -> String {
    format!("{v}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use LanguageCode as L;

    #[test]
    fn parses_shared_task_row() {
        let csv = "PairID,Text,Score\neng-25,\"It is better known as a walk.\nIt is also known as a walk .\",0.88\n";
        let ds = parse_dataset(csv.as_bytes(), L::ENG, Split::Dev).unwrap();
        assert_eq!(ds.len(), 1);
        let i = &ds.instances()[0];
        assert_eq!(i.pair_id, "eng-25");
        assert_eq!(i.sent1, "It is better known as a walk.");
        assert_eq!(i.sent2, "It is also known as a walk .");
        assert_eq!(format!("{:.2}", i.score.unwrap()), "0.88");
    }

    #[test]
    fn crlf_line_endings() {
        let csv = "PairID,Text,Score\r\neng-1,\"a b\r\nc d\",0.5\r\n";
        let ds = parse_dataset(csv.as_bytes(), L::ENG, Split::Train).unwrap();
        assert_eq!(ds.instances()[0].sent1, "a b");
        assert_eq!(ds.instances()[0].sent2, "c d");
    }

    #[test]
    fn score_out_of_range() {
        let csv = "PairID,Text,Score\neng-1,\"a\nb\",1.30\n";
        assert!(matches!(
            parse_dataset(csv.as_bytes(), L::ENG, Split::Train),
            Err(CorpusError::ScoreOutOfRange { .. })
        ));
    }

    #[test]
    fn header_only_is_empty() {
        let ds = parse_dataset(b"PairID,Text,Score\n", L::ENG, Split::Train).unwrap();
        assert!(ds.is_empty());
        assert!(parse_dataset(b"", L::ENG, Split::Train).unwrap().is_empty());
    }

    #[test]
    fn wrong_sentence_count() {
        let one = "PairID,Text,Score\neng-1,\"just one\",0.5\n";
        assert!(matches!(
            parse_dataset(one.as_bytes(), L::ENG, Split::Train),
            Err(CorpusError::MalformedRow { .. })
        ));
        let three = "PairID,Text,Score\neng-1,\"a\nb\nc\",0.5\n";
        assert!(matches!(
            parse_dataset(three.as_bytes(), L::ENG, Split::Train),
            Err(CorpusError::MalformedRow { .. })
        ));
    }

    #[test]
    fn duplicate_ids_and_bad_utf8() {
        let dup = "PairID,Text,Score\neng-1,\"a\nb\",0.5\neng-1,\"c\nd\",0.5\n";
        assert!(matches!(
            parse_dataset(dup.as_bytes(), L::ENG, Split::Train),
            Err(CorpusError::DuplicatePairId(_))
        ));
        assert!(matches!(
            parse_dataset(b"PairID,Text\n\xff\xfe", L::ENG, Split::Test),
            Err(CorpusError::Encoding(_))
        ));
    }

    #[test]
    fn test_split_without_scores() {
        let csv = "PairID,Text\nkin-1,\"a\nb\"\n";
        let ds = parse_dataset(csv.as_bytes(), L::KIN, Split::Test).unwrap();
        assert_eq!(ds.instances()[0].score, None);
        assert!(!ds.is_labeled());
        assert!(matches!(
            parse_dataset(csv.as_bytes(), L::KIN, Split::Dev),
            Err(CorpusError::MissingScore(_))
        ));
    }

    #[test]
    fn tsv_fallback() {
        let tsv = "pair_id\tsent1\tsent2\tscore\nx-1\tone two\tthree\t0.25\nx-2\tfour\tfive six\t1\n";
        let ds = parse_dataset(tsv.as_bytes(), L::HAU, Split::Train).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.instances()[1].score, Some(1.0));
        let again = parse_dataset(to_tsv(ds.instances()).as_bytes(), L::HAU, Split::Train).unwrap();
        assert_eq!(again, ds);
    }

    #[test]
    fn csv_round_trip_with_quotes() {
        let csv = "PairID,Text,Score\neng-1,\"He said \"\"hi\"\", twice\nok\",0.333\n";
        let ds = parse_dataset(csv.as_bytes(), L::ENG, Split::Train).unwrap();
        assert_eq!(ds.instances()[0].sent1, "He said \"hi\", twice");
        let again = parse_dataset(to_csv(&ds).as_bytes(), L::ENG, Split::Train).unwrap();
        assert_eq!(again, ds);
    }
}
