use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use super::{parse, stats, CorpusError, Dataset, Split, StatsTable};
use crate::langsim::LanguageCode;
use crate::parallel::{self, Execution};

/// All datasets available to an experiment, keyed by language and split.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    datasets: BTreeMap<(LanguageCode, Split), Dataset>,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_datasets(datasets: impl IntoIterator<Item = Dataset>) -> Self {
        let mut c = Corpus::new();
        for ds in datasets {
            c.insert(ds);
        }
        c
    }

    /// Adds a dataset, returning any one it replaced.
    pub fn insert(&mut self, ds: Dataset) -> Option<Dataset> {
        self.datasets.insert((ds.lang(), ds.split()), ds)
    }

    pub fn get(&self, lang: LanguageCode, split: Split) -> Option<&Dataset> {
        self.datasets.get(&(lang, split))
    }

    pub fn require(&self, lang: LanguageCode, split: Split) -> Result<&Dataset, CorpusError> {
        self.get(lang, split).ok_or(CorpusError::MissingDataset { lang, split })
    }

    pub fn datasets(&self) -> impl Iterator<Item = &Dataset> {
        self.datasets.values()
    }

    /// Languages with a non-empty dataset for `split`.
    pub fn languages(&self, split: Split) -> BTreeSet<LanguageCode> {
        self.datasets
            .iter()
            .filter(|((_, s), ds)| *s == split && !ds.is_empty())
            .map(|((l, _), _)| *l)
            .collect()
    }

    pub fn stats(&self) -> StatsTable {
        stats(self.datasets())
    }

    pub fn len(&self) -> usize {
        self.datasets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.datasets.is_empty()
    }

    /// Loads every dataset found under `root`.
    ///
    /// Recognized layouts, per language and split: `<root>/<lang>/<split>.csv`,
    /// `<root>/<lang>/<split>.tsv`, `<root>/<lang>/<lang>_<split>.csv`
    /// (also `.tsv` and `_with_labels.csv`) and `<root>/<lang>_<split>.csv`.
    /// Directories and files whose names are not language codes are ignored.
    pub fn load_dir(root: &Path, exec: Execution) -> Result<Self, CorpusError> {
        let files = discover(root)?;
        let loaded = parallel::try_map(exec, &files, |(lang, split, path)| {
            let bytes = fs::read(path).map_err(|e| CorpusError::io(path, e))?;
            parse::parse_dataset(&bytes, *lang, *split).map_err(|e| CorpusError::InFile {
                path: path.clone(),
                source: Box::new(e),
            })
        })?;
        Ok(Self::from_datasets(loaded))
    }

    /// Writes every dataset as `<root>/<lang>/<split>.csv`.
    pub fn write_dir(&self, root: &Path) -> Result<(), CorpusError> {
        for ds in self.datasets() {
            let dir = root.join(ds.lang().as_str());
            fs::create_dir_all(&dir).map_err(|e| CorpusError::io(&dir, e))?;
            let path = dir.join(format!("{}.csv", ds.split()));
            fs::write(&path, parse::to_csv(ds)).map_err(|e| CorpusError::io(&path, e))?;
        }
        Ok(())
    }
}

fn discover(root: &Path) -> Result<Vec<(LanguageCode, Split, PathBuf)>, CorpusError> {
    let entries = fs::read_dir(root).map_err(|e| CorpusError::io(root, e))?;
    let mut found: BTreeMap<(LanguageCode, Split), PathBuf> = BTreeMap::new();
    let mut names: Vec<PathBuf> = entries
        .map(|e| e.map(|e| e.path()).map_err(|e| CorpusError::io(root, e)))
        .collect::<Result<_, _>>()?;
    names.sort();
    for path in names {
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        if path.is_dir() {
            let Ok(lang) = LanguageCode::extension(name) else {
                continue;
            };
            for split in Split::ALL {
                let candidates: [String; 5] = [
                    format!("{split}.csv"),
                    format!("{split}.tsv"),
                    format!("{lang}_{split}.csv"),
                    format!("{lang}_{split}.tsv"),
                    format!("{lang}_{split}_with_labels.csv"),
                ];
                if let Some(p) = candidates.iter().map(|c| path.join(c)).find(|p| p.is_file()) {
                    found.entry((lang, split)).or_insert(p);
                }
            }
        } else if let Some((lang, split)) = flat_name(name) {
            found.entry((lang, split)).or_insert(path);
        }
    }
    Ok(found.into_iter().map(|((l, s), p)| (l, s, p)).collect())
}

fn flat_name(name: &str) -> Option<(LanguageCode, Split)> {
    let stem = name.strip_suffix(".csv").or_else(|| name.strip_suffix(".tsv"))?;
    let (lang, split) = stem.split_once('_')?;
    Some((LanguageCode::extension(lang).ok()?, split.parse().ok()?))
}
