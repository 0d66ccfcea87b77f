//! Bundled WEAT stimulus packs in seven languages.
//!
//! Each pack is a JSON file `{"language": .., "categories": {name: [words]}}`
//! compiled into the binary. The word lists are kept exactly as printed,
//! repeats included; repeats are collapsed when the pack is loaded and the
//! number dropped is kept on each [`WordSet`].

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::association::WordSet;
use crate::error::{Error, Result};

/// Categories every pack must define.
pub const REQUIRED_CATEGORIES: [&str; 6] = [
    "flowers",
    "insects",
    "instruments",
    "weapons",
    "pleasant",
    "unpleasant",
];

pub const LANGUAGES: [&str; 7] = ["zh", "en", "de", "pl", "pt", "es", "tr"];

const BUNDLED: [(&str, &str); 7] = [
    ("zh", include_str!("../data/packs/zh.json")),
    ("en", include_str!("../data/packs/en.json")),
    ("de", include_str!("../data/packs/de.json")),
    ("pl", include_str!("../data/packs/pl.json")),
    ("pt", include_str!("../data/packs/pt.json")),
    ("es", include_str!("../data/packs/es.json")),
    ("tr", include_str!("../data/packs/tr.json")),
];

#[derive(Serialize, Deserialize)]
struct PackFile {
    language: String,
    categories: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StimulusPack {
    pub language: String,
    pub categories: BTreeMap<String, WordSet>,
    printed: BTreeMap<String, Vec<String>>,
}

impl StimulusPack {
    /// Validates a raw category map: the six required categories must be
    /// present and every set must be non-empty after trimming.
    pub fn new(
        language: impl Into<String>,
        categories: BTreeMap<String, Vec<String>>,
    ) -> Result<Self> {
        let language = language.into();
        for name in REQUIRED_CATEGORIES {
            if !categories.contains_key(name) {
                return Err(Error::MissingCategory(name.to_owned()));
            }
        }
        let sets = categories
            .iter()
            .map(|(name, words)| Ok((name.clone(), WordSet::new(name, &language, words)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(StimulusPack {
            language,
            categories: sets,
            printed: categories,
        })
    }

    pub fn category(&self, name: &str) -> Result<&WordSet> {
        self.categories
            .get(name)
            .ok_or_else(|| Error::MissingCategory(name.to_owned()))
    }

    /// The word lists as they appear in the source file, repeats included.
    pub fn printed(&self, name: &str) -> Option<&[String]> {
        self.printed.get(name).map(Vec::as_slice)
    }

    /// Total repeats collapsed over all categories.
    pub fn duplicates_removed(&self) -> usize {
        self.categories.values().map(|s| s.duplicates_removed).sum()
    }

    /// Categories with fewer than the recommended minimum of words.
    pub fn undersized(&self) -> Vec<&str> {
        self.categories
            .iter()
            .filter(|(_, s)| !s.meets_minimum())
            .map(|(n, _)| n.as_str())
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&PackFile {
            language: self.language.clone(),
            categories: self.printed.clone(),
        })?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PackFile = serde_json::from_str(text)?;
        let pack = StimulusPack::new(file.language, file.categories)?;
        for name in pack.undersized() {
            log::warn!(
                "pack {}: category {name} has fewer than {} words",
                pack.language,
                crate::association::MIN_SET_SIZE
            );
        }
        Ok(pack)
    }
}

pub fn load_pack(language: &str) -> Result<StimulusPack> {
    let tag = language.trim().to_lowercase();
    let (_, text) = BUNDLED
        .iter()
        .find(|(l, _)| *l == tag)
        .ok_or_else(|| Error::UnsupportedLanguage(language.to_owned()))?;
    StimulusPack::from_json(text)
}

pub fn load_custom_pack(path: impl AsRef<Path>) -> Result<StimulusPack> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    StimulusPack::from_json(&text)
}
