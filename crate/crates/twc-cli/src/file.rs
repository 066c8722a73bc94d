//! Channel files: one JSON document per channel, tagged by `kind`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use twc_core::TwoWayChannel;
use twc_madb::MadbChannel;
use twc_memory::{IsdMemorySpec, MemoryChannelSpec};

use crate::CliError;

/// Two-user channel as a row-stochastic matrix: rows `(x1, x2)` with `x1`
/// major, columns `(y1, y2)` with `y1` major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwcMatrix {
    pub nx1: usize,
    pub nx2: usize,
    pub ny1: usize,
    pub ny2: usize,
    pub matrix: Vec<Vec<f64>>,
}

impl From<&TwoWayChannel> for TwcMatrix {
    fn from(ch: &TwoWayChannel) -> Self {
        Self { nx1: ch.nx1(), nx2: ch.nx2(), ny1: ch.ny1(), ny2: ch.ny2(), matrix: ch.rows() }
    }
}

impl TwcMatrix {
    pub fn channel(&self) -> twc_core::Result<TwoWayChannel> {
        TwoWayChannel::new(self.nx1, self.nx2, self.ny1, self.ny2, self.matrix.clone())
    }
}

/// A channel with memory, either given by output tables or in
/// injective-semideterministic form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MemoryModel {
    Tables(MemoryChannelSpec),
    Isd(IsdMemorySpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelFile {
    Twc(TwcMatrix),
    Madb(MadbChannel),
    Memory(MemoryModel),
}

impl ChannelFile {
    pub fn twc(ch: &TwoWayChannel) -> Self {
        Self::Twc(ch.into())
    }

    /// Parse and validate a document.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let file: Self =
            serde_json::from_str(text).map_err(|e| CliError::Input(format!("invalid channel file: {e}")))?;
        file.validate()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("channel files serialize");
        s.push('\n');
        s
    }

    fn validate(&self) -> Result<(), CliError> {
        match self {
            Self::Twc(m) => {
                m.channel()?;
            }
            Self::Madb(_) => {}
            Self::Memory(MemoryModel::Tables(s)) => {
                s.validate()?;
            }
            Self::Memory(MemoryModel::Isd(s)) => {
                s.validate()?;
            }
        }
        Ok(())
    }
}
