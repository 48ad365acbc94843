//! Finite categories: objects, morphisms, a total composition table, and
//! exhaustive validation of the category laws.

use std::collections::BTreeMap;

use crate::error::Error;

/// Index of an object in a [`FinCategory`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjId(pub usize);

/// Index of a morphism in a [`FinCategory`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorId(pub usize);

#[derive(Clone, Debug)]
struct MorData {
    name: String,
    src: ObjId,
    dst: ObjId,
}

/// A finite category with explicitly tabulated composition.
#[derive(Clone, Debug)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<MorData>,
    /// `compose[g][f] = g ∘ f` when `dst(f) = src(g)`.
    compose: Vec<Vec<Option<MorId>>>,
    identities: Vec<MorId>,
}

impl FinCategory {
    /// Builds a category from raw data and checks the category laws
    /// exhaustively. `compose` entries are `(g, f, g_after_f)` triples.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<(String, String, String)>,
        compose: Vec<(String, String, String)>,
        identities: Vec<(String, String)>,
    ) -> Result<Self, Error> {
        let obj_index: BTreeMap<&str, usize> =
            objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        if obj_index.len() != objects.len() {
            return Err(Error::InvalidSite("duplicate object identifiers".into()));
        }
        let mut mors = Vec::new();
        let mut mor_index: BTreeMap<&str, usize> = BTreeMap::new();
        for (name, src, dst) in &morphisms {
            let src = *obj_index
                .get(src.as_str())
                .ok_or_else(|| Error::UnknownObject(src.clone()))?;
            let dst = *obj_index
                .get(dst.as_str())
                .ok_or_else(|| Error::UnknownObject(dst.clone()))?;
            if mor_index.insert(name.as_str(), mors.len()).is_some() {
                return Err(Error::InvalidSite(format!(
                    "duplicate morphism identifier {name:?}"
                )));
            }
            mors.push(MorData { name: name.clone(), src: ObjId(src), dst: ObjId(dst) });
        }
        let n = mors.len();
        let mut table = vec![vec![None; n]; n];
        for (g, f, gf) in &compose {
            let g = *mor_index
                .get(g.as_str())
                .ok_or_else(|| Error::UnknownMorphism(g.clone()))?;
            let f = *mor_index
                .get(f.as_str())
                .ok_or_else(|| Error::UnknownMorphism(f.clone()))?;
            let gf = *mor_index
                .get(gf.as_str())
                .ok_or_else(|| Error::UnknownMorphism(gf.clone()))?;
            table[g][f] = Some(MorId(gf));
        }
        let mut ids = vec![None; objects.len()];
        for (obj, m) in &identities {
            let o = *obj_index
                .get(obj.as_str())
                .ok_or_else(|| Error::UnknownObject(obj.clone()))?;
            let m = *mor_index
                .get(m.as_str())
                .ok_or_else(|| Error::UnknownMorphism(m.clone()))?;
            ids[o] = Some(MorId(m));
        }
        let identities = ids
            .into_iter()
            .enumerate()
            .map(|(o, id)| {
                id.ok_or_else(|| {
                    Error::InvalidSite(format!("object {:?} has no identity", objects[o]))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let cat = FinCategory { objects, morphisms: mors, compose: table, identities };
        let report = cat.law_violations();
        if let Some(first) = report.into_iter().next() {
            return Err(Error::InvalidSite(first));
        }
        Ok(cat)
    }

    /// Builds the poset category of a reflexive-transitive relation given by
    /// `leq` pairs `(a, b)` meaning `a ≤ b` (a morphism `a → b`). Identities
    /// and composition are derived.
    pub fn poset(objects: Vec<String>, leq: &[(&str, &str)]) -> Result<Self, Error> {
        let obj_index: BTreeMap<&str, usize> =
            objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        let n = objects.len();
        let mut rel = vec![vec![false; n]; n];
        for i in 0..n {
            rel[i][i] = true;
        }
        for (a, b) in leq {
            let a = *obj_index.get(a).ok_or_else(|| Error::UnknownObject(a.to_string()))?;
            let b = *obj_index.get(b).ok_or_else(|| Error::UnknownObject(b.to_string()))?;
            rel[a][b] = true;
        }
        // Transitive closure.
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if rel[i][k] && rel[k][j] {
                        rel[i][j] = true;
                    }
                }
            }
        }
        let mut morphisms = Vec::new();
        let mut by_pair = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                if rel[i][j] {
                    by_pair.insert((i, j), MorId(morphisms.len()));
                    morphisms.push(MorData {
                        name: format!("{}<={}", objects[i], objects[j]),
                        src: ObjId(i),
                        dst: ObjId(j),
                    });
                }
            }
        }
        let m = morphisms.len();
        let mut table = vec![vec![None; m]; m];
        for (g_idx, g) in morphisms.iter().enumerate() {
            for (f_idx, f) in morphisms.iter().enumerate() {
                if f.dst == g.src {
                    table[g_idx][f_idx] = Some(by_pair[&(f.src.0, g.dst.0)]);
                }
            }
        }
        let identities = (0..n).map(|i| by_pair[&(i, i)]).collect();
        Ok(FinCategory { objects, morphisms, compose: table, identities })
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> {
        (0..self.objects.len()).map(ObjId)
    }

    pub fn object_name(&self, o: ObjId) -> &str {
        &self.objects[o.0]
    }

    pub fn object_by_name(&self, name: &str) -> Result<ObjId, Error> {
        self.objects
            .iter()
            .position(|o| o == name)
            .map(ObjId)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn morphisms(&self) -> impl Iterator<Item = MorId> {
        (0..self.morphisms.len()).map(MorId)
    }

    pub fn morphism_name(&self, m: MorId) -> &str {
        &self.morphisms[m.0].name
    }

    pub fn morphism_by_name(&self, name: &str) -> Result<MorId, Error> {
        self.morphisms
            .iter()
            .position(|m| m.name == name)
            .map(MorId)
            .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }

    pub fn src(&self, m: MorId) -> ObjId {
        self.morphisms[m.0].src
    }

    pub fn dst(&self, m: MorId) -> ObjId {
        self.morphisms[m.0].dst
    }

    pub fn identity(&self, o: ObjId) -> MorId {
        self.identities[o.0]
    }

    /// `g ∘ f` (apply `f` first). Panics when not composable.
    pub fn compose(&self, g: MorId, f: MorId) -> MorId {
        self.compose[g.0][f.0].expect("morphisms are not composable")
    }

    pub fn composable(&self, g: MorId, f: MorId) -> bool {
        self.dst(f) == self.src(g)
    }

    /// All morphisms `a → b`.
    pub fn hom(&self, a: ObjId, b: ObjId) -> Vec<MorId> {
        self.morphisms()
            .filter(|&m| self.src(m) == a && self.dst(m) == b)
            .collect()
    }

    pub fn morphisms_into(&self, b: ObjId) -> Vec<MorId> {
        self.morphisms().filter(|&m| self.dst(m) == b).collect()
    }

    /// Whether every hom set has at most one element.
    pub fn is_poset(&self) -> bool {
        self.objects().all(|a| {
            self.objects().all(|b| self.hom(a, b).len() <= 1)
        })
    }

    /// Exhaustive check of identity and associativity laws; returns a list
    /// of human-readable violations (empty = valid category).
    pub fn law_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for o in self.objects() {
            let e = self.identity(o);
            if self.src(e) != o || self.dst(e) != o {
                out.push(format!(
                    "identity of {:?} is not an endomorphism",
                    self.object_name(o)
                ));
            }
        }
        for f in self.morphisms() {
            for g in self.morphisms() {
                let defined = self.compose[g.0][f.0];
                if self.composable(g, f) {
                    match defined {
                        None => out.push(format!(
                            "composite {} ∘ {} is undefined",
                            self.morphism_name(g),
                            self.morphism_name(f)
                        )),
                        Some(gf) => {
                            if self.src(gf) != self.src(f) || self.dst(gf) != self.dst(g) {
                                out.push(format!(
                                    "composite {} ∘ {} has wrong endpoints",
                                    self.morphism_name(g),
                                    self.morphism_name(f)
                                ));
                            }
                        }
                    }
                } else if defined.is_some() {
                    out.push(format!(
                        "composite {} ∘ {} defined for non-composable pair",
                        self.morphism_name(g),
                        self.morphism_name(f)
                    ));
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for f in self.morphisms() {
            let left = self.compose(self.identity(self.dst(f)), f);
            let right = self.compose(f, self.identity(self.src(f)));
            if left != f || right != f {
                out.push(format!("identity law fails at {}", self.morphism_name(f)));
            }
        }
        for f in self.morphisms() {
            for g in self.morphisms() {
                if !self.composable(g, f) {
                    continue;
                }
                for h in self.morphisms() {
                    if !self.composable(h, g) {
                        continue;
                    }
                    let a = self.compose(self.compose(h, g), f);
                    let b = self.compose(h, self.compose(g, f));
                    if a != b {
                        out.push(format!(
                            "associativity fails at {} ∘ {} ∘ {}",
                            self.morphism_name(h),
                            self.morphism_name(g),
                            self.morphism_name(f)
                        ));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_builder_closes_transitively() {
        let cat = FinCategory::poset(
            vec!["a".into(), "b".into(), "c".into()],
            &[("a", "b"), ("b", "c")],
        )
        .unwrap();
        assert!(cat.is_poset());
        let a = cat.object_by_name("a").unwrap();
        let c = cat.object_by_name("c").unwrap();
        assert_eq!(cat.hom(a, c).len(), 1);
        assert!(cat.law_violations().is_empty());
    }

    #[test]
    fn bad_composition_table_is_rejected() {
        // Two-object category with a missing composite: f: a -> b but
        // id_b ∘ f absent from the table.
        let r = FinCategory::new(
            vec!["a".into(), "b".into()],
            vec![
                ("ida".into(), "a".into(), "a".into()),
                ("idb".into(), "b".into(), "b".into()),
                ("f".into(), "a".into(), "b".into()),
            ],
            vec![
                ("ida".into(), "ida".into(), "ida".into()),
                ("idb".into(), "idb".into(), "idb".into()),
                ("f".into(), "ida".into(), "f".into()),
            ],
            vec![("a".into(), "ida".into()), ("b".into(), "idb".into())],
        );
        assert!(r.is_err());
    }
}
