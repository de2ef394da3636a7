//! Group description files (schema version `v1`) and builtin lookup.
//!
//! ```json
//! {
//!   "version": "v1",
//!   "name": "S3",
//!   "degree": 3,
//!   "generators": [[1, 2, 0], [1, 0, 2]],
//!   "normal_subgroups": {"A3": [[1, 2, 0]]},
//!   "automorphisms": []
//! }
//! ```
//!
//! Permutations are image lists on `0..degree`. A normal subgroup is given by
//! generators. An automorphism is given by the images of the group's
//! generators, in order.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::builtins::{builtin, Builtin};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Group, GroupMap};
use crate::perm::Perm;

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    pub version: String,
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Vec<u32>>,
    #[serde(default)]
    pub normal_subgroups: BTreeMap<String, Vec<Vec<u32>>>,
    #[serde(default)]
    pub automorphisms: Vec<Vec<Vec<u32>>>,
}

/// A group with its named normal subgroups and a list of automorphisms.
#[derive(Clone, Debug)]
pub struct LoadedGroup {
    pub group: Group,
    pub normals: Vec<(String, Group)>,
    pub automorphisms: Vec<GroupMap>,
}

impl LoadedGroup {
    pub fn normal(&self, name: &str) -> Result<Group> {
        self.normals.iter().find(|(n, _)| n == name).map(|(_, g)| g.clone()).ok_or_else(|| {
            let known: Vec<&str> = self.normals.iter().map(|(n, _)| n.as_str()).collect();
            Error::Usage(format!("{} has no normal subgroup {name:?}; known: {}", self.group.name(), known.join(", ")))
        })
    }

    pub fn from_builtin(b: &Builtin) -> Result<LoadedGroup> {
        let normals = b.normals.iter().map(|(n, _)| Ok((n.clone(), b.normal_group(n)?))).collect::<Result<_>>()?;
        Ok(LoadedGroup { group: b.group.clone(), normals, automorphisms: vec![] })
    }

    /// The abelian group acted on, with its automorphisms: a builtin's action
    /// instance if present, else the group itself with the given automorphisms.
    pub fn action(name: &str) -> Result<(Group, Vec<GroupMap>)> {
        let loaded = load_source(name)?;
        if let Some(b) = name.strip_prefix("builtin:") {
            if let Some(a) = &builtin(b)?.action {
                return Ok((a.target.clone(), a.automorphisms.clone()));
            }
        }
        Ok((loaded.group.clone(), loaded.automorphisms))
    }

    pub fn to_json(&self) -> GroupJson {
        let g = &self.group;
        let perm = |p: &Perm| p.images().to_vec();
        let normal_subgroups = self
            .normals
            .iter()
            .map(|(n, h)| {
                let set = g.embed(h).expect("normal subgroup of the group");
                (n.clone(), g.generators_of_set(&set).iter().map(|&x| perm(g.element(x))).collect())
            })
            .collect();
        let automorphisms = self.automorphisms.iter().map(|a| g.gen_indices().iter().map(|&s| perm(g.element(a.apply(s)))).collect()).collect();
        GroupJson {
            version: SCHEMA_VERSION.into(),
            name: g.name().to_string(),
            degree: g.degree(),
            generators: g.generators().iter().map(perm).collect(),
            normal_subgroups,
            automorphisms,
        }
    }
}

fn to_perm(degree: usize, images: &[u32], what: &str) -> Result<Perm> {
    if images.len() != degree {
        return Err(Error::Usage(format!("{what}: expected {degree} images, got {}", images.len())));
    }
    Perm::from_images(images.to_vec()).ok_or_else(|| Error::Usage(format!("{what}: not a permutation of 0..{degree}")))
}

impl GroupJson {
    /// Parse, reporting line and column of syntax errors.
    pub fn parse(text: &str) -> Result<GroupJson> {
        let j: GroupJson =
            serde_json::from_str(text).map_err(|e| Error::Usage(format!("malformed group JSON at line {}, column {}: {e}", e.line(), e.column())))?;
        if j.version != SCHEMA_VERSION {
            return Err(Error::Usage(format!("unsupported group schema version {:?} (expected {SCHEMA_VERSION:?})", j.version)));
        }
        Ok(j)
    }

    pub fn build(&self) -> Result<LoadedGroup> {
        let gens = self.generators.iter().enumerate().map(|(i, p)| to_perm(self.degree, p, &format!("generator {i}"))).collect::<Result<Vec<_>>>()?;
        let group: Group = Arc::new(FiniteGroup::new(self.name.clone(), self.degree, gens)?);
        let mut normals = Vec::new();
        for (name, hg) in &self.normal_subgroups {
            let idx = hg
                .iter()
                .map(|p| {
                    let q = to_perm(self.degree, p, &format!("normal subgroup {name}"))?;
                    group.index_of(&q).ok_or_else(|| Error::Usage(format!("normal subgroup {name}: generator not in the group")))
                })
                .collect::<Result<Vec<_>>>()?;
            let h = Arc::new(group.subgroup(name.clone(), &idx));
            if !group.is_normal(&h) {
                return Err(Error::Structure(format!("{name} is not normal in {}", group.name())));
            }
            normals.push((name.clone(), h));
        }
        let mut automorphisms = Vec::new();
        for (i, a) in self.automorphisms.iter().enumerate() {
            if a.len() != group.gen_indices().len() {
                return Err(Error::Usage(format!("automorphism {i}: need one image per generator")));
            }
            let imgs = a
                .iter()
                .map(|p| group.index_of(&to_perm(self.degree, p, &format!("automorphism {i}"))?).ok_or_else(|| Error::Usage(format!("automorphism {i}: image not in the group"))))
                .collect::<Result<Vec<_>>>()?;
            let map = GroupMap::from_generator_images(&group, &group, &imgs)?;
            if !map.is_automorphism() {
                return Err(Error::Structure(format!("automorphism {i} is not bijective")));
            }
            automorphisms.push(map);
        }
        Ok(LoadedGroup { group, normals, automorphisms })
    }
}

/// `builtin:NAME` or a path to a `v1` group file.
pub fn load_source(src: &str) -> Result<LoadedGroup> {
    if let Some(name) = src.strip_prefix("builtin:") {
        return LoadedGroup::from_builtin(builtin(name)?.as_ref());
    }
    load_path(Path::new(src))
}

pub fn load_path(path: &Path) -> Result<LoadedGroup> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
    GroupJson::parse(&text)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_round_trip() {
        for name in ["S3", "SL23", "D8", "SL23_semi_C2", "C6"] {
            let g = load_source(&format!("builtin:{name}")).unwrap();
            let j = g.to_json();
            let text = serde_json::to_string_pretty(&j).unwrap();
            let back = GroupJson::parse(&text).unwrap().build().unwrap();
            assert_eq!(back.group.order(), g.group.order());
            assert_eq!(back.to_json(), j, "{name}");
        }
    }

    #[test]
    fn malformed_input_reports_position() {
        let err = GroupJson::parse("{\n  \"version\": \"v1\",\n  \"name\": 3\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let bad = r#"{"version":"v1","name":"x","degree":3,"generators":[[0,0,1]]}"#;
        assert!(GroupJson::parse(bad).unwrap().build().is_err());
    }

    #[test]
    fn automorphisms_load() {
        let text = r#"{"version":"v1","name":"V4","degree":4,"generators":[[1,0,3,2],[2,3,0,1]],"automorphisms":[[[2,3,0,1],[1,0,3,2]]]}"#;
        let g = GroupJson::parse(text).unwrap().build().unwrap();
        assert_eq!(g.automorphisms.len(), 1);
        assert_eq!(g.to_json().automorphisms.len(), 1);
    }
}
