//! Language tags, translation directions and the [`Segment`] text unit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lang {
    Zh,
    En,
}

impl Lang {
    pub fn as_str(self) -> &'static str {
        match self {
            Lang::Zh => "zh",
            Lang::En => "en",
        }
    }

    /// Human-readable name used inside prompts.
    pub fn display_name(self) -> &'static str {
        match self {
            Lang::Zh => "Chinese",
            Lang::En => "English",
        }
    }

    pub fn other(self) -> Lang {
        match self {
            Lang::Zh => Lang::En,
            Lang::En => Lang::Zh,
        }
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Lang {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "zh" => Ok(Lang::Zh),
            "en" => Ok(Lang::En),
            other => Err(format!("unsupported language tag `{other}`")),
        }
    }
}

/// Translation direction. Serialized as `zh-en` / `en-zh`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "zh-en", alias = "zh→en", alias = "zh2en")]
    ZhEn,
    #[serde(rename = "en-zh", alias = "en→zh", alias = "en2zh")]
    EnZh,
}

impl Direction {
    pub const ALL: [Direction; 2] = [Direction::ZhEn, Direction::EnZh];

    pub fn source(self) -> Lang {
        match self {
            Direction::ZhEn => Lang::Zh,
            Direction::EnZh => Lang::En,
        }
    }

    pub fn target(self) -> Lang {
        self.source().other()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::ZhEn => "zh-en",
            Direction::EnZh => "en-zh",
        }
    }

    pub(crate) fn ordinal(self) -> u64 {
        match self {
            Direction::ZhEn => 0,
            Direction::EnZh => 1,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "zh-en" | "zh→en" | "zh2en" => Ok(Direction::ZhEn),
            "en-zh" | "en→zh" | "en2zh" => Ok(Direction::EnZh),
            other => Err(format!("unknown direction `{other}` (expected zh-en or en-zh)")),
        }
    }
}

/// A piece of text tagged with its language.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    pub text: String,
    pub lang: Lang,
}

impl Segment {
    pub fn new(text: impl Into<String>, lang: Lang) -> Self {
        Self {
            text: text.into(),
            lang,
        }
    }

    pub fn zh(text: impl Into<String>) -> Self {
        Self::new(text, Lang::Zh)
    }

    pub fn en(text: impl Into<String>) -> Self {
        Self::new(text, Lang::En)
    }

    pub fn is_blank(&self) -> bool {
        self.text.trim().is_empty()
    }
}
