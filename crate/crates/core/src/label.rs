//! Ternary labels and the affect dimensions they are attached to.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A ternary polarity. The declaration order (`Negative < Neutral < Positive`)
/// is the tie-breaking order used everywhere a label must be chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Label {
    Negative,
    Neutral,
    Positive,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::Negative, Label::Neutral, Label::Positive];

    pub fn value(self) -> i8 {
        match self {
            Label::Negative => -1,
            Label::Neutral => 0,
            Label::Positive => 1,
        }
    }

    /// Position in [`Label::ALL`], used as the class index by the classifiers.
    pub fn index(self) -> usize {
        (self.value() + 1) as usize
    }

    pub fn from_index(index: usize) -> Option<Label> {
        Label::ALL.get(index).copied()
    }

    pub fn negate(self) -> Label {
        match self {
            Label::Negative => Label::Positive,
            Label::Neutral => Label::Neutral,
            Label::Positive => Label::Negative,
        }
    }
}

impl From<Label> for i8 {
    fn from(label: Label) -> i8 {
        label.value()
    }
}

impl TryFrom<i8> for Label {
    type Error = Error;

    fn try_from(value: i8) -> Result<Self, Self::Error> {
        match value {
            -1 => Ok(Label::Negative),
            0 => Ok(Label::Neutral),
            1 => Ok(Label::Positive),
            other => Err(Error::Invalid(format!("label must be -1, 0 or 1, got {other}"))),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// The four annotated verb dimensions of a connotation frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameDimension {
    SentimentAgent,
    SentimentTheme,
    Power,
    Agency,
}

impl FrameDimension {
    pub const ALL: [FrameDimension; 4] = [
        FrameDimension::SentimentAgent,
        FrameDimension::SentimentTheme,
        FrameDimension::Power,
        FrameDimension::Agency,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FrameDimension::SentimentAgent => "sentiment-agent",
            FrameDimension::SentimentTheme => "sentiment-theme",
            FrameDimension::Power => "power",
            FrameDimension::Agency => "agency",
        }
    }
}

impl fmt::Display for FrameDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FrameDimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FrameDimension::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| Error::UnknownCategory(s.to_string()))
    }
}

/// Dimensions along which entities are scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntityDimension {
    Sentiment,
    Power,
    Agency,
}

impl EntityDimension {
    pub const ALL: [EntityDimension; 3] = [
        EntityDimension::Sentiment,
        EntityDimension::Power,
        EntityDimension::Agency,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EntityDimension::Sentiment => "sentiment",
            EntityDimension::Power => "power",
            EntityDimension::Agency => "agency",
        }
    }
}

impl fmt::Display for EntityDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EntityDimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EntityDimension::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| Error::UnknownCategory(s.to_string()))
    }
}

/// Syntactic role of an entity with respect to a verb.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Agent,
    Theme,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Agent => "agent",
            Role::Theme => "theme",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "agent" => Ok(Role::Agent),
            "theme" => Ok(Role::Theme),
            other => Err(Error::UnknownCategory(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_order_matches_tie_break_order() {
        assert!(Label::Negative < Label::Neutral);
        assert!(Label::Neutral < Label::Positive);
        for (i, l) in Label::ALL.iter().enumerate() {
            assert_eq!(l.index(), i);
            assert_eq!(Label::from_index(i), Some(*l));
        }
    }

    #[test]
    fn label_serializes_as_integer() {
        assert_eq!(serde_json::to_string(&Label::Negative).unwrap(), "-1");
        let l: Label = serde_json::from_str("1").unwrap();
        assert_eq!(l, Label::Positive);
        assert!(serde_json::from_str::<Label>("2").is_err());
    }

    #[test]
    fn dimensions_parse_from_their_names() {
        for d in FrameDimension::ALL {
            assert_eq!(d.as_str().parse::<FrameDimension>().unwrap(), d);
        }
        assert!("valence".parse::<EntityDimension>().is_err());
    }
}
