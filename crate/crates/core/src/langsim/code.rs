use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LangsimError;

/// A three-letter lowercase ISO 639-3 language identifier.
///
/// Ordering is alphabetical on the code, which is also the tie-break order
/// used by source selection.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LanguageCode([u8; 3]);

macro_rules! codes {
    ($($name:ident = $lit:literal),* $(,)?) => {
        $(pub const $name: LanguageCode = LanguageCode(*$lit);)*
    };
}

impl LanguageCode {
    codes! {
        AFR = b"afr", AMH = b"amh", ARB = b"arb", ARQ = b"arq", ARY = b"ary",
        ENG = b"eng", ESP = b"esp", HAU = b"hau", HIN = b"hin", IND = b"ind",
        KIN = b"kin", MAR = b"mar", PAN = b"pan", TEL = b"tel",
    }

    /// Parses a code that must belong to the task registry.
    pub fn new(code: &str) -> Result<Self, LangsimError> {
        let lang = Self::extension(code)?;
        if !TASK_LANGUAGES.contains(&lang) {
            return Err(LangsimError::UnregisteredLanguage(code.to_string()));
        }
        Ok(lang)
    }

    /// Parses a well-formed code without requiring registry membership.
    /// Use this to register languages outside the fourteen task languages.
    pub fn extension(code: &str) -> Result<Self, LangsimError> {
        let bytes = code.as_bytes();
        if bytes.len() != 3 || !bytes.iter().all(u8::is_ascii_lowercase) {
            return Err(LangsimError::InvalidCode(code.to_string()));
        }
        Ok(LanguageCode([bytes[0], bytes[1], bytes[2]]))
    }

    pub fn as_str(&self) -> &str {
        // only ever constructed from ASCII lowercase bytes
        std::str::from_utf8(&self.0).expect("ascii language code")
    }

    pub fn is_registered(&self) -> bool {
        TASK_LANGUAGES.contains(self)
    }
}

/// The fourteen task languages, in the column order of the dataset
/// statistics table.
pub const TASK_LANGUAGES: [LanguageCode; 14] = [
    LanguageCode::ENG,
    LanguageCode::ESP,
    LanguageCode::AFR,
    LanguageCode::HIN,
    LanguageCode::PAN,
    LanguageCode::AMH,
    LanguageCode::ARB,
    LanguageCode::ARQ,
    LanguageCode::ARY,
    LanguageCode::HAU,
    LanguageCode::IND,
    LanguageCode::KIN,
    LanguageCode::MAR,
    LanguageCode::TEL,
];

/// Languages that ship labelled training data (the supervised track).
pub const TRAIN_LANGUAGES: [LanguageCode; 9] = [
    LanguageCode::ENG,
    LanguageCode::ESP,
    LanguageCode::AMH,
    LanguageCode::ARQ,
    LanguageCode::ARY,
    LanguageCode::HAU,
    LanguageCode::KIN,
    LanguageCode::MAR,
    LanguageCode::TEL,
];

/// Cross-lingual evaluation targets, in result-table column order.
pub const TARGET_LANGUAGES: [LanguageCode; 12] = [
    LanguageCode::ENG,
    LanguageCode::ESP,
    LanguageCode::AFR,
    LanguageCode::HIN,
    LanguageCode::PAN,
    LanguageCode::AMH,
    LanguageCode::ARB,
    LanguageCode::ARQ,
    LanguageCode::ARY,
    LanguageCode::HAU,
    LanguageCode::IND,
    LanguageCode::KIN,
];

impl fmt::Display for LanguageCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for LanguageCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

impl FromStr for LanguageCode {
    type Err = LangsimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LanguageCode::new(s)
    }
}

impl Serialize for LanguageCode {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for LanguageCode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        LanguageCode::extension(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_registered_codes() {
        assert_eq!(LanguageCode::new("kin").unwrap(), LanguageCode::KIN);
        assert_eq!("eng".parse::<LanguageCode>().unwrap().to_string(), "eng");
    }

    #[test]
    fn rejects_malformed_and_unregistered() {
        for bad in ["", "en", "engl", "ENG", "e1g", "ñaa"] {
            assert!(matches!(
                LanguageCode::new(bad),
                Err(LangsimError::InvalidCode(_))
            ));
        }
        assert!(matches!(
            LanguageCode::new("deu"),
            Err(LangsimError::UnregisteredLanguage(_))
        ));
        let deu = LanguageCode::extension("deu").unwrap();
        assert!(!deu.is_registered());
    }

    #[test]
    fn orders_alphabetically() {
        let mut v = vec![LanguageCode::KIN, LanguageCode::AFR, LanguageCode::HAU];
        v.sort();
        assert_eq!(v, vec![LanguageCode::AFR, LanguageCode::HAU, LanguageCode::KIN]);
    }
}
