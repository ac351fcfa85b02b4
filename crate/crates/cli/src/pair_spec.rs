//! The pair file: `{"alphabet": [...], "p1": [...], "p2": [...]}`.

use std::fs;
use std::path::Path;

use devex_core::{HypothesisPair, Pmf};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub alphabet: Vec<String>,
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
}

impl PairSpec {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| CliError::Parse {
            path: path.to_owned(),
            source,
        })
    }

    pub fn to_pair(&self) -> Result<HypothesisPair, CliError> {
        let p1 =
            Pmf::new(self.alphabet.clone(), self.p1.clone()).map_err(|source| CliError::Field {
                field: "p1",
                source,
            })?;
        let p2 =
            Pmf::new(self.alphabet.clone(), self.p2.clone()).map_err(|source| CliError::Field {
                field: "p2",
                source,
            })?;
        Ok(HypothesisPair::new(p1, p2)?)
    }
}
