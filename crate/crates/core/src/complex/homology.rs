//! Homology presheaves and sheaves of a complex, induced maps, and the
//! quasi-isomorphism / τ-local-equivalence tests.

use crate::exactalg::{homology_of_pair, induced_map, Homology, ModuleMap};
use crate::site::sheafify::{sheafify, sheafify_map};
use crate::site::{ModPresheaf, ModPresheafMorphism, ObjId};

use super::{Complex, ComplexMorphism};

/// The degree-`n` homology of a complex as a presheaf, keeping the
/// per-object cycle data needed to induce maps.
#[derive(Clone, Debug)]
pub struct HomologyPresheaf {
    pub presheaf: ModPresheaf,
    /// Per-object subquotient data, indexed by object id.
    pub data: Vec<Homology>,
}

/// Computes `H_n(K)` objectwise, with induced restriction maps.
pub fn homology(k: &Complex, n: i64) -> HomologyPresheaf {
    let cat = k.site().category();
    let d_in = k.differential(n + 1);
    let d_out = k.differential(n);
    let data: Vec<Homology> = cat
        .objects()
        .map(|c| {
            homology_of_pair(&d_in.component(c), &d_out.component(c))
                .expect("complex differentials compose to zero")
        })
        .collect();
    let values: Vec<_> = data.iter().map(|h| h.module.clone()).collect();
    let level = k.level(n);
    let restrictions: Vec<ModuleMap> = cat
        .morphisms()
        .map(|f| {
            let (a, b) = (cat.src(f), cat.dst(f));
            induced_map(&data[b.0], &data[a.0], level.restriction(f))
        })
        .collect();
    let presheaf = ModPresheaf::new(cat, k.ring(), values, restrictions)
        .expect("homology presheaf is functorial");
    HomologyPresheaf { presheaf, data }
}

/// The sheafified homology `a_τ H_n(K)`.
pub fn homology_sheaf(k: &Complex, n: i64) -> ModPresheaf {
    let h = homology(k, n);
    sheafify(k.site(), &h.presheaf).sheaf
}

/// The map `H_n(f)` induced on homology presheaves.
pub fn homology_map(
    f: &ComplexMorphism,
    n: i64,
) -> (HomologyPresheaf, HomologyPresheaf, ModPresheafMorphism) {
    let cat = f.source().site().category();
    let hs = homology(f.source(), n);
    let ht = homology(f.target(), n);
    let comp = f.component(n);
    let components: Vec<ModuleMap> = cat
        .objects()
        .map(|c| induced_map(&hs.data[c.0], &ht.data[c.0], comp.component(c)))
        .collect();
    let map = ModPresheafMorphism::new(cat, &hs.presheaf, &ht.presheaf, components)
        .expect("induced homology map is natural");
    (hs, ht, map)
}

/// Degrees worth checking for a pair of complexes: the union window padded
/// by one on each side.
fn check_range(f: &ComplexMorphism) -> std::ops::RangeInclusive<i64> {
    let lo = f.source().lo().min(f.target().lo()) - 1;
    let hi = f.source().hi().max(f.target().hi()) + 1;
    lo..=hi
}

/// Per-degree verdicts for `H_n(f)` being an objectwise isomorphism.
pub fn is_quasi_iso(f: &ComplexMorphism) -> Vec<(i64, bool)> {
    check_range(f)
        .map(|n| {
            let (_, _, map) = homology_map(f, n);
            (n, map.is_objectwise_isomorphism())
        })
        .collect()
}

/// Per-degree verdicts for `a_τ H_n(f)` being an isomorphism.
pub fn is_local_equivalence(f: &ComplexMorphism) -> Vec<(i64, bool)> {
    let site = f.source().site();
    check_range(f)
        .map(|n| {
            let (hs, ht, map) = homology_map(f, n);
            let sheafified = sheafify_map(site, &hs.presheaf, &ht.presheaf, &map);
            (n, sheafified.is_objectwise_isomorphism())
        })
        .collect()
}

pub fn all_degrees_pass(verdicts: &[(i64, bool)]) -> bool {
    verdicts.iter().all(|&(_, ok)| ok)
}

/// The homology module of a plain module complex at one object (used for
/// terminal-site complexes).
pub fn homology_at(k: &Complex, n: i64, c: ObjId) -> crate::exactalg::FpModule {
    homology(k, n).presheaf.value(c).clone()
}
