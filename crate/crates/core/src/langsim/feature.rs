use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::LangsimError;

/// Which language representation a similarity matrix was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum FeatureKind {
    /// Averaged encoder cell states of a multilingual MT model.
    CellState,
    /// Learned lang2vec vectors.
    L2vLrn,
    /// Phonology.
    L2vPho,
    /// Syntax.
    L2vSyn,
    /// Phonetic inventory.
    L2vInv,
    /// Family membership.
    L2vFam,
    /// Geography.
    L2vGeo,
}

impl FeatureKind {
    pub const ALL: [FeatureKind; 7] = [
        FeatureKind::CellState,
        FeatureKind::L2vLrn,
        FeatureKind::L2vPho,
        FeatureKind::L2vSyn,
        FeatureKind::L2vInv,
        FeatureKind::L2vFam,
        FeatureKind::L2vGeo,
    ];

    /// Machine name, used in files, configs and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            FeatureKind::CellState => "cellstate",
            FeatureKind::L2vLrn => "l2v-lrn",
            FeatureKind::L2vPho => "l2v-pho",
            FeatureKind::L2vSyn => "l2v-syn",
            FeatureKind::L2vInv => "l2v-inv",
            FeatureKind::L2vFam => "l2v-fam",
            FeatureKind::L2vGeo => "l2v-geo",
        }
    }

    /// Display label for tables.
    pub fn label(self) -> &'static str {
        match self {
            FeatureKind::CellState => "CellState",
            FeatureKind::L2vLrn => "L2V-LRN",
            FeatureKind::L2vPho => "L2V-Pho",
            FeatureKind::L2vSyn => "L2V-Syn",
            FeatureKind::L2vInv => "L2V-Inv",
            FeatureKind::L2vFam => "L2V-Fam",
            FeatureKind::L2vGeo => "L2V-Geo",
        }
    }

    /// Contents of the bundled matrix file for this feature.
    pub fn fixture(self) -> &'static str {
        match self {
            FeatureKind::CellState => include_str!("../../data/similarity/cellstate.tsv"),
            FeatureKind::L2vLrn => include_str!("../../data/similarity/l2v-lrn.tsv"),
            FeatureKind::L2vPho => include_str!("../../data/similarity/l2v-pho.tsv"),
            FeatureKind::L2vSyn => include_str!("../../data/similarity/l2v-syn.tsv"),
            FeatureKind::L2vInv => include_str!("../../data/similarity/l2v-inv.tsv"),
            FeatureKind::L2vFam => include_str!("../../data/similarity/l2v-fam.tsv"),
            FeatureKind::L2vGeo => include_str!("../../data/similarity/l2v-geo.tsv"),
        }
    }
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FeatureKind {
    type Err = LangsimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .trim()
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        let kind = match norm.as_str() {
            "cellstate" | "cellstates" | "langcellstates" | "knn" => FeatureKind::CellState,
            "l2vlrn" | "lrn" => FeatureKind::L2vLrn,
            "l2vpho" | "l2vphon" | "pho" | "phon" | "phonology" => FeatureKind::L2vPho,
            "l2vsyn" | "syn" | "syntax" => FeatureKind::L2vSyn,
            "l2vinv" | "inv" | "inventory" => FeatureKind::L2vInv,
            "l2vfam" | "fam" | "family" => FeatureKind::L2vFam,
            "l2vgeo" | "geo" | "geography" => FeatureKind::L2vGeo,
            _ => return Err(LangsimError::UnknownFeature(s.to_string())),
        };
        Ok(kind)
    }
}

impl From<FeatureKind> for String {
    fn from(k: FeatureKind) -> String {
        k.name().to_string()
    }
}

impl TryFrom<String> for FeatureKind {
    type Error = LangsimError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in FeatureKind::ALL {
            assert_eq!(k.name().parse::<FeatureKind>().unwrap(), k);
            assert_eq!(k.label().parse::<FeatureKind>().unwrap(), k);
        }
        assert_eq!("cell_state".parse::<FeatureKind>().unwrap(), FeatureKind::CellState);
        assert!(matches!(
            "wals".parse::<FeatureKind>(),
            Err(LangsimError::UnknownFeature(_))
        ));
    }
}
