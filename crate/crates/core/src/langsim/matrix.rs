use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use super::{FeatureKind, LangsimError, LanguageCode};

/// Pairwise language similarities for one feature kind.
///
/// Rows are the languages a selection is made *for*; columns are the
/// candidate donors. A missing cell means the feature does not cover that
/// pair; it is never read as zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityMatrix {
    feature: FeatureKind,
    rows: Vec<LanguageCode>,
    cols: Vec<LanguageCode>,
    values: Vec<Option<f64>>,
}

impl SimilarityMatrix {
    pub fn new(
        feature: FeatureKind,
        rows: Vec<LanguageCode>,
        cols: Vec<LanguageCode>,
        values: Vec<Option<f64>>,
    ) -> Result<Self, LangsimError> {
        if has_duplicates(&rows) || has_duplicates(&cols) {
            return Err(malformed(0, "duplicate language label"));
        }
        if values.len() != rows.len() * cols.len() {
            return Err(malformed(0, "value count does not match rows x cols"));
        }
        if let Some(v) = values.iter().flatten().find(|v| !in_range(**v)) {
            return Err(malformed(0, format!("value {v} outside [-1, 1]")));
        }
        Ok(SimilarityMatrix {
            feature,
            rows,
            cols,
            values,
        })
    }

    /// Loads the matrix bundled with the crate for `feature`.
    pub fn bundled(feature: FeatureKind) -> Self {
        let m = Self::parse(feature.fixture()).expect("bundled similarity fixture is well formed");
        debug_assert_eq!(m.feature, feature);
        m
    }

    pub fn load(path: &Path) -> Result<Self, LangsimError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Parses the text matrix format:
    ///
    /// ```text
    /// feature=<kind>
    /// <TAB>col1<TAB>col2...
    /// row<TAB>v1<TAB>v2...      (NA for an uncovered cell)
    /// ```
    ///
    /// The leading tab on the header line is optional. Lines starting with
    /// `#` and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, LangsimError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
            .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));

        let (n, first) = lines.next().ok_or_else(|| malformed(1, "empty matrix file"))?;
        let kind = first
            .strip_prefix("feature=")
            .ok_or_else(|| malformed(n, "first line must be `feature=<kind>`"))?;
        let feature: FeatureKind = kind.trim().parse()?;

        let (n, header) = lines
            .next()
            .ok_or_else(|| malformed(n, "missing column header line"))?;
        let cols = header
            .split('\t')
            .map(str::trim)
            .filter(|c| !c.is_empty())
            .map(|c| parse_code(n, c))
            .collect::<Result<Vec<_>, _>>()?;
        if cols.is_empty() {
            return Err(malformed(n, "no column languages"));
        }
        if has_duplicates(&cols) {
            return Err(malformed(n, "duplicate column language"));
        }

        let mut rows = Vec::new();
        let mut values = Vec::new();
        for (n, line) in lines {
            let mut cells = line.split('\t');
            let label = cells.next().unwrap_or_default().trim();
            let row = parse_code(n, label)?;
            if rows.contains(&row) {
                return Err(malformed(n, format!("duplicate row language {row}")));
            }
            let cells: Vec<&str> = cells.collect();
            if cells.len() != cols.len() {
                return Err(malformed(
                    n,
                    format!("row {row} has {} cells, expected {}", cells.len(), cols.len()),
                ));
            }
            for cell in cells {
                values.push(parse_cell(n, cell.trim())?);
            }
            rows.push(row);
        }
        Ok(SimilarityMatrix {
            feature,
            rows,
            cols,
            values,
        })
    }

    pub fn feature(&self) -> FeatureKind {
        self.feature
    }

    pub fn rows(&self) -> &[LanguageCode] {
        &self.rows
    }

    pub fn cols(&self) -> &[LanguageCode] {
        &self.cols
    }

    pub fn has_row(&self, lang: LanguageCode) -> bool {
        self.rows.contains(&lang)
    }

    /// Similarity of donor `col` for language `row`, if covered.
    pub fn get(&self, row: LanguageCode, col: LanguageCode) -> Option<f64> {
        let r = self.rows.iter().position(|&l| l == row)?;
        let c = self.cols.iter().position(|&l| l == col)?;
        self.values[r * self.cols.len() + c]
    }

    /// Writes the matrix back in the same text format `parse` reads.
    pub fn to_text(&self) -> String {
        let mut out = format!("feature={}\n", self.feature.name());
        for c in &self.cols {
            write!(out, "\t{c}").unwrap();
        }
        out.push('\n');
        for (r, row) in self.rows.iter().enumerate() {
            out.push_str(row.as_str());
            for c in 0..self.cols.len() {
                match self.values[r * self.cols.len() + c] {
                    Some(v) => write!(out, "\t{v:.2}").unwrap(),
                    None => out.push_str("\tNA"),
                }
            }
            out.push('\n');
        }
        out
    }
}

fn in_range(v: f64) -> bool {
    v.is_finite() && (-1.0..=1.0).contains(&v)
}

fn has_duplicates(v: &[LanguageCode]) -> bool {
    v.iter().collect::<BTreeSet<_>>().len() != v.len()
}

fn malformed(line: usize, reason: impl Into<String>) -> LangsimError {
    LangsimError::MalformedMatrixFile {
        line,
        reason: reason.into(),
    }
}

fn parse_code(line: usize, s: &str) -> Result<LanguageCode, LangsimError> {
    LanguageCode::extension(s).map_err(|_| malformed(line, format!("bad language code {s:?}")))
}

fn parse_cell(line: usize, s: &str) -> Result<Option<f64>, LangsimError> {
    if s == "NA" || s == "-" {
        return Ok(None);
    }
    let v: f64 = s
        .parse()
        .map_err(|_| malformed(line, format!("non-numeric cell {s:?}")))?;
    if !in_range(v) {
        return Err(malformed(line, format!("value {s} outside [-1, 1]")));
    }
    Ok(Some(v))
}
