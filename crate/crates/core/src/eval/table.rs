use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::EvalReport;
use crate::langsim::{Family, FamilyTable, LanguageCode, TARGET_LANGUAGES};

/// One cell of a result grid: a report or a failed run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Outcome {
    Ok(EvalReport),
    Failed {
        target: LanguageCode,
        strategy: String,
        error: String,
    },
}

impl Outcome {
    pub fn target(&self) -> LanguageCode {
        match self {
            Outcome::Ok(r) => r.target,
            Outcome::Failed { target, .. } => *target,
        }
    }

    pub fn strategy(&self) -> &str {
        match self {
            Outcome::Ok(r) => &r.strategy,
            Outcome::Failed { strategy, .. } => strategy,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TableOptions {
    /// Left out of the avg column in addition to eng.
    pub exclude_from_avg: BTreeSet<LanguageCode>,
    /// Show every shared-task test language, not only those with results.
    pub all_targets: bool,
}

/// Two decimals; negative zero prints as `0.00`.
pub fn format_cell(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

const GROUPS: [&str; 3] = ["Indo-European", "Afro-Asiatic", "Other"];

fn group_of(families: &FamilyTable, lang: LanguageCode) -> usize {
    match families.family(lang) {
        Some(Family::IndoEuropean) => 0,
        Some(Family::AfroAsiatic) => 1,
        _ => 2,
    }
}

/// Renders reports as a strategy x language grid.
///
/// Rows follow the first appearance of each strategy. Languages are grouped
/// Indo-European / Afro-Asiatic / Other, in shared-task order within a group.
/// Cells hold rho to two decimals; failed runs and missing cells show `-`.
/// The avg column is the mean of the row's rounded cells over every shown
/// language except eng and the excluded ones, and is `-` if any of those
/// cells is missing. Failures are listed below the table.
pub fn report_table(outcomes: &[Outcome], opts: &TableOptions) -> String {
    let families = FamilyTable::operational();
    let mut langs: BTreeSet<LanguageCode> = outcomes.iter().map(Outcome::target).collect();
    if opts.all_targets {
        langs.extend(TARGET_LANGUAGES);
    }
    let order = |l: &LanguageCode| TARGET_LANGUAGES.iter().position(|t| t == l).unwrap_or(usize::MAX);
    let mut columns: Vec<LanguageCode> = langs.into_iter().collect();
    columns.sort_by_key(|l| (group_of(&families, *l), order(l), *l));

    let mut rows: Vec<&str> = Vec::new();
    let mut cells: BTreeMap<(&str, LanguageCode), Option<String>> = BTreeMap::new();
    let mut errors = Vec::new();
    for o in outcomes {
        let s = o.strategy();
        if !rows.contains(&s) {
            rows.push(s);
        }
        let cell = match o {
            Outcome::Ok(r) => Some(format_cell(r.rho)),
            Outcome::Failed { target, error, .. } => {
                errors.push(format!("{s} / {target}: {error}"));
                None
            }
        };
        cells.insert((s, o.target()), cell);
    }

    let avg_cols: Vec<LanguageCode> = columns
        .iter()
        .copied()
        .filter(|l| *l != LanguageCode::ENG && !opts.exclude_from_avg.contains(l))
        .collect();

    let label_w = rows.iter().map(|r| r.len()).max().unwrap_or(0).max("strategy".len());
    const W: usize = 5;
    let mut out = String::new();

    // Group header: each group name spans its columns.
    let mut line = format!("{:label_w$}", "");
    let mut spans: Vec<(usize, usize)> = Vec::new();
    for l in &columns {
        let g = group_of(&families, *l);
        match spans.last_mut() {
            Some((lg, n)) if *lg == g => *n += 1,
            _ => spans.push((g, 1)),
        }
    }
    for (g, n) in &spans {
        let width = n * (W + 1) - 1;
        let _ = write!(line, " | {:<width$}", truncate(GROUPS[*g], width));
    }
    out.push_str(line.trim_end());
    out.push('\n');

    let mut line = format!("{:label_w$}", "strategy");
    let mut start = 0;
    for (_, n) in &spans {
        line.push_str(" |");
        for l in &columns[start..start + n] {
            let _ = write!(line, " {:>W$}", l.as_str());
        }
        start += n;
    }
    let _ = write!(line, " | {:>W$}", "avg");
    out.push_str(&line);
    out.push('\n');

    for r in &rows {
        let mut line = format!("{r:label_w$}");
        let mut start = 0;
        for (_, n) in &spans {
            line.push_str(" |");
            for l in &columns[start..start + n] {
                let c = cells.get(&(*r, *l)).cloned().flatten().unwrap_or_else(|| "-".into());
                let _ = write!(line, " {c:>W$}");
            }
            start += n;
        }
        let avg = row_average(&avg_cols, |l| cells.get(&(*r, l)).cloned().flatten());
        let _ = write!(line, " | {:>W$}", avg.map_or_else(|| "-".to_string(), format_cell));
        out.push_str(&line);
        out.push('\n');
    }

    if !errors.is_empty() {
        out.push_str("\nerrors:\n");
        for (i, e) in errors.iter().enumerate() {
            let _ = writeln!(out, "  [{}] {e}", i + 1);
        }
    }
    out
}

fn truncate(s: &str, width: usize) -> &str {
    &s[..s.len().min(width)]
}

/// Mean of the rendered cells, so the avg column can be recomputed by hand
/// from what the table shows.
fn row_average(cols: &[LanguageCode], cell: impl Fn(LanguageCode) -> Option<String>) -> Option<f64> {
    if cols.is_empty() {
        return None;
    }
    let mut sum = 0.0;
    for &l in cols {
        sum += cell(l)?.parse::<f64>().ok()?;
    }
    Some(sum / cols.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Split;
    use crate::eval::RunFlags;
    use LanguageCode as L;

    fn rep(target: LanguageCode, strategy: &str, rho: f64) -> Outcome {
        Outcome::Ok(EvalReport {
            target,
            split: Split::Test,
            n: 10,
            rho,
            strategy: strategy.into(),
            flags: RunFlags::default(),
            seed: 0,
            config_hash: None,
        })
    }

    fn data_rows(t: &str) -> Vec<&str> {
        t.lines().skip(2).take_while(|l| !l.is_empty()).collect()
    }

    #[test]
    fn single_cell() {
        let t = report_table(&[rep(L::KIN, "eng+esp+hau", 0.68)], &TableOptions::default());
        assert!(t.lines().next().unwrap().contains("Other"));
        let rows = data_rows(&t);
        assert_eq!(rows.len(), 1);
        assert!(rows[0].contains("0.68"), "{t}");
    }

    #[test]
    fn empty_is_header_only() {
        let t = report_table(&[], &TableOptions::default());
        assert_eq!(t.lines().count(), 2);
        assert!(t.contains("avg"));
    }

    #[test]
    fn average_of_cells_excludes_english() {
        let t = report_table(
            &[rep(L::ENG, "ms-all", 0.99), rep(L::AFR, "ms-all", 0.80), rep(L::HAU, "ms-all", 0.60)],
            &TableOptions::default(),
        );
        let row = data_rows(&t)[0];
        assert!(row.trim_end().ends_with("0.70"), "{t}");
    }

    #[test]
    fn failures_render_as_dash_with_appendix() {
        let t = report_table(
            &[
                rep(L::AFR, "ms-fam", 0.81),
                Outcome::Failed {
                    target: L::IND,
                    strategy: "ms-fam".into(),
                    error: "no sources".into(),
                },
            ],
            &TableOptions::default(),
        );
        let row = data_rows(&t)[0];
        assert!(row.contains(" - "), "{t}");
        assert!(row.trim_end().ends_with('-'));
        assert!(t.contains("errors:\n  [1] ms-fam / ind: no sources"));
        let opts = TableOptions {
            exclude_from_avg: [L::IND].into_iter().collect(),
            all_targets: false,
        };
        let t = report_table(&[rep(L::AFR, "x", 0.81), rep(L::IND, "x", 0.1)], &opts);
        assert!(data_rows(&t)[0].trim_end().ends_with("0.81"));
    }

    #[test]
    fn columns_follow_groups() {
        let t = report_table(&[], &TableOptions { all_targets: true, ..Default::default() });
        let header = t.lines().nth(1).unwrap();
        let codes: Vec<&str> = header.split_whitespace().filter(|w| w.len() == 3).collect();
        assert_eq!(
            codes,
            ["eng", "esp", "afr", "hin", "pan", "amh", "arb", "arq", "ary", "hau", "ind", "kin", "avg"]
        );
        assert_eq!(format_cell(-0.001), "0.00");
        assert_eq!(format_cell(-0.05), "-0.05");
    }
}
