//! Word-set sources: inline lists, `@file` lists, and stimulus packs.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Serialize;
use valnorm::association::WordSet;
use valnorm::stimuli::{load_custom_pack, load_pack, StimulusPack};

#[derive(Args, Clone, Debug, Default, Serialize)]
pub struct PackArgs {
    /// Bundled stimulus pack (zh, en, de, pl, pt, es, tr).
    #[arg(long, conflicts_with = "pack_file")]
    pub pack: Option<String>,

    /// Custom pack in the JSON layout `{language, categories: {name: [words]}}`.
    #[arg(long)]
    pub pack_file: Option<PathBuf>,
}

impl PackArgs {
    pub fn load(&self) -> Result<Option<StimulusPack>> {
        Ok(match (&self.pack, &self.pack_file) {
            (Some(lang), _) => Some(load_pack(lang)?),
            (None, Some(path)) => Some(load_custom_pack(path)?),
            (None, None) => None,
        })
    }
}

/// `@path` reads one word per line; anything else is a comma-separated list.
pub fn parse_source(spec: &str) -> Result<Vec<String>> {
    let words: Vec<String> = match spec.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .with_context(|| format!("reading word list {path}"))?
            .lines()
            .map(|l| l.trim().to_owned())
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect(),
        None => spec
            .split(',')
            .map(|w| w.trim().to_owned())
            .filter(|w| !w.is_empty())
            .collect(),
    };
    Ok(words)
}

/// One word set from an explicit flag, falling back to a pack category.
pub fn word_set(
    name: &str,
    explicit: Option<&str>,
    pack: Option<&StimulusPack>,
    category: &str,
    language: &str,
) -> Result<WordSet> {
    if let Some(spec) = explicit {
        return Ok(WordSet::new(name, language, parse_source(spec)?)?);
    }
    match pack {
        Some(p) => Ok(p.category(category)?.clone()),
        None => bail!(valnorm::Error::Invalid(format!(
            "no words for {name}: pass --{} or a pack with category {category}",
            name.to_lowercase()
        ))),
    }
}
