//! JSON group descriptions.
//!
//! ```json
//! {"kind": "permutation", "degree": 4, "generators": ["(0 1)", "(0 1 2 3)"]}
//! {"kind": "direct_product", "parts": [{"kind": "alternating", "n": 5}, {"kind": "cyclic", "n": 2}]}
//! ```
//!
//! Unknown keys and unknown kinds are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupDescription {
    Permutation { degree: usize, generators: Vec<String> },
    Cyclic { n: usize },
    Symmetric { n: usize },
    Alternating { n: usize },
    Dihedral { n: usize },
    Sl2 { q: u32 },
    DirectProduct { parts: Vec<GroupDescription> },
}

impl GroupDescription {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptions serialize")
    }

    /// Explicit description listing the generators of `group`.
    pub fn from_group(group: &FiniteGroup) -> Self {
        GroupDescription::Permutation {
            degree: group.degree(),
            generators: group.generators().iter().map(|g| g.to_string()).collect(),
        }
    }

    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupDescription::Permutation { degree, generators } => {
                let gens = generators
                    .iter()
                    .map(|s| Permutation::parse_cycles(s, *degree))
                    .collect::<Result<Vec<_>>>()?;
                FiniteGroup::new(*degree, gens)
            }
            GroupDescription::Cyclic { n } => FiniteGroup::cyclic(*n),
            GroupDescription::Symmetric { n } => FiniteGroup::symmetric(*n),
            GroupDescription::Alternating { n } => FiniteGroup::alternating(*n),
            GroupDescription::Dihedral { n } => FiniteGroup::dihedral(*n),
            GroupDescription::Sl2 { q } => FiniteGroup::sl2(*q),
            GroupDescription::DirectProduct { parts } => {
                let groups = parts.iter().map(|p| p.build()).collect::<Result<Vec<_>>>()?;
                FiniteGroup::direct_product(&groups)
            }
        }
    }
}

/// Parses and builds a group from a JSON file.
pub fn load_group(path: &Path) -> Result<FiniteGroup> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    GroupDescription::from_json(&text)?.build()
}
