use serde::{Deserialize, Serialize};

use super::FiniteGroup;
use crate::error::{Error, Result};

pub const GROUP_DOC_VERSION: u32 = 1;

/// Serialized form of a [`FiniteGroup`]: the flattened row-major table plus
/// generators and optional labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub version: u32,
    pub order: usize,
    pub gens: Vec<usize>,
    pub mul: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl FiniteGroup {
    pub fn to_doc(&self) -> GroupDoc {
        GroupDoc {
            version: GROUP_DOC_VERSION,
            order: self.order,
            gens: self.gens.clone(),
            mul: self.mul.clone(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_doc(doc: &GroupDoc) -> Result<Self> {
        if doc.version != GROUP_DOC_VERSION {
            return Err(Error::Document(format!("unsupported version {}", doc.version)));
        }
        FiniteGroup::from_table(doc.order, doc.mul.clone(), doc.gens.clone(), doc.labels.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("group documents always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: GroupDoc = serde_json::from_str(s).map_err(|e| Error::Document(e.to_string()))?;
        Self::from_doc(&doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let g = FiniteGroup::dihedral(4).unwrap();
        let s = g.to_json();
        let back = FiniteGroup::from_json(&s).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_json(), s);
        let c = FiniteGroup::cyclic(5).unwrap();
        assert_eq!(FiniteGroup::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn rejects_other_versions() {
        let mut doc = FiniteGroup::cyclic(3).unwrap().to_doc();
        doc.version = 7;
        assert!(FiniteGroup::from_doc(&doc).is_err());
        assert!(FiniteGroup::from_json("{").is_err());
    }
}
