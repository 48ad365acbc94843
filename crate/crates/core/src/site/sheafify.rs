//! Sheafification by the plus construction applied twice, matching-family
//! modules, sheaf-condition checks, and generalized-cover testing.

use crate::exactalg::{FpModule, Matrix, ModuleMap};

use super::category::{MorId, ObjId};
use super::presheaf::{
    ModPresheaf, ModPresheafMorphism, SetPresheaf, SetPresheafMorphism,
};
use super::sieve::Sieve;
use super::Site;

/// The module of matching families of a presheaf along a sieve, together
/// with its inclusion into the ambient product.
#[derive(Clone, Debug)]
pub struct MatchData {
    /// Sieve members in canonical order; component `i` of a family lives
    /// in `F(dom members[i])`.
    pub members: Vec<MorId>,
    /// Generator offsets of each component inside the ambient product.
    pub offsets: Vec<usize>,
    pub ambient: FpModule,
    /// Matching families as a finitely presented module.
    pub module: FpModule,
    /// Inclusion of the matching module into the ambient product.
    pub inclusion: ModuleMap,
}

/// Computes the matching-family module `Match(S, F)`: families
/// `(x_f)_{f ∈ S}` with `F(g)(x_f) = x_{f∘g}` for all `g` into `dom f`.
pub fn matching(site: &Site, f: &ModPresheaf, sieve: &Sieve) -> MatchData {
    let cat = site.category();
    let ring = f.ring();
    let members: Vec<MorId> = sieve.members().collect();
    let mut offsets = Vec::with_capacity(members.len());
    let mut ambient = FpModule::zero(ring);
    for &m in &members {
        offsets.push(ambient.generators());
        ambient = ambient.direct_sum(f.value(cat.src(m)));
    }
    // Compatibility constraints: one block row per (member, precomposable
    // morphism) pair.
    let mut pair_target = FpModule::zero(ring);
    let mut rows: Vec<(usize, MorId, usize)> = Vec::new(); // (member idx, g, row offset)
    for (i, &mem) in members.iter().enumerate() {
        for g in cat.morphisms_into(cat.src(mem)) {
            rows.push((i, g, pair_target.generators()));
            pair_target = pair_target.direct_sum(f.value(cat.src(g)));
        }
    }
    let mut compat = Matrix::zero(ring, pair_target.generators(), ambient.generators());
    for &(i, g, row0) in &rows {
        let mem = members[i];
        let composed = cat.compose(mem, g);
        let j = members.iter().position(|&m| m == composed).expect("sieve is closed");
        let block_rows = f.value(cat.src(g)).generators();
        // + x_{mem ∘ g}
        for r in 0..block_rows {
            let col = offsets[j] + r;
            compat.set(row0 + r, col, ring.add(compat.get(row0 + r, col), &ring.one()));
        }
        // − F(g)(x_mem)
        let rg = f.restriction(g).matrix();
        for r in 0..block_rows {
            for c in 0..rg.cols() {
                let col = offsets[i] + c;
                let v = ring.sub(compat.get(row0 + r, col), rg.get(r, c));
                compat.set(row0 + r, col, v);
            }
        }
    }
    let compat_map = ModuleMap::new(ambient.clone(), pair_target, compat)
        .expect("compatibility map is well defined");
    let (module, inclusion) = compat_map.kernel();
    MatchData { members, offsets, ambient, module, inclusion }
}

/// One application of the plus construction, with its unit.
pub struct PlusData {
    pub presheaf: ModPresheaf,
    pub unit: ModPresheafMorphism,
    pub matches: Vec<MatchData>,
}

pub fn plus(site: &Site, f: &ModPresheaf) -> PlusData {
    let cat = site.category();
    let ring = f.ring();
    let matches: Vec<MatchData> = cat
        .objects()
        .map(|c| matching(site, f, site.minimal_sieve(c)))
        .collect();
    let values: Vec<FpModule> = matches.iter().map(|m| m.module.clone()).collect();
    let restrictions: Vec<ModuleMap> = cat
        .morphisms()
        .map(|h| {
            let (a, b) = (cat.src(h), cat.dst(h));
            let (ma, mb) = (&matches[a.0], &matches[b.0]);
            // Ambient-level restriction: component at g ∈ M(a) is the
            // component of the family at h ∘ g ∈ M(b).
            let mut amb = Matrix::zero(ring, ma.ambient.generators(), mb.ambient.generators());
            for (i, &g) in ma.members.iter().enumerate() {
                let composed = cat.compose(h, g);
                let j = mb
                    .members
                    .iter()
                    .position(|&m| m == composed)
                    .expect("pullback of the minimal sieve covers");
                let block = f.value(cat.src(g)).generators();
                for r in 0..block {
                    amb.set(ma.offsets[i] + r, mb.offsets[j] + r, ring.one());
                }
            }
            let image = amb.mul(mb.inclusion.matrix());
            let lifted = lift_into(&ma.inclusion, &image);
            ModuleMap::new(mb.module.clone(), ma.module.clone(), lifted)
                .expect("plus restriction is well defined")
        })
        .collect();
    let presheaf = ModPresheaf::new(cat, ring, values, restrictions)
        .expect("plus construction is functorial");
    let unit_components: Vec<ModuleMap> = cat
        .objects()
        .map(|c| {
            let mc = &matches[c.0];
            let mut stack = Matrix::zero(ring, mc.ambient.generators(), f.value(c).generators());
            for (i, &g) in mc.members.iter().enumerate() {
                let rg = f.restriction(g).matrix();
                for r in 0..rg.rows() {
                    for col in 0..rg.cols() {
                        stack.set(mc.offsets[i] + r, col, rg.get(r, col).clone());
                    }
                }
            }
            let lifted = lift_into(&mc.inclusion, &stack);
            ModuleMap::new(f.value(c).clone(), mc.module.clone(), lifted)
                .expect("plus unit is well defined")
        })
        .collect();
    let unit = ModPresheafMorphism::new(cat, f, &presheaf, unit_components)
        .expect("plus unit is natural");
    PlusData { presheaf, unit, matches }
}

/// Lifts columns of `image` through the (injective) inclusion of a kernel.
fn lift_into(inclusion: &ModuleMap, image: &Matrix) -> Matrix {
    inclusion
        .preimage(image)
        .expect("columns lie in the matching submodule")
}

/// A sheafification result: the sheaf and the unit morphism from the input.
pub struct Sheafification {
    pub sheaf: ModPresheaf,
    pub unit: ModPresheafMorphism,
}

/// Sheafification as the plus construction applied twice.
pub fn sheafify(site: &Site, f: &ModPresheaf) -> Sheafification {
    let first = plus(site, f);
    let second = plus(site, &first.presheaf);
    let unit = second.unit.compose(&first.unit);
    Sheafification { sheaf: second.presheaf, unit }
}

/// The sheafification of a presheaf morphism, as a morphism between the
/// (deterministically re-computed) sheafifications of source and target.
pub fn sheafify_map(
    site: &Site,
    source: &ModPresheaf,
    target: &ModPresheaf,
    map: &ModPresheafMorphism,
) -> ModPresheafMorphism {
    let (f1, g1) = (plus(site, source), plus(site, target));
    let m1 = plus_map(site, source, map, &f1, &g1);
    let (f2, g2) = (plus(site, &f1.presheaf), plus(site, &g1.presheaf));
    plus_map(site, &f1.presheaf, &m1, &f2, &g2)
}

fn plus_map(
    site: &Site,
    source: &ModPresheaf,
    map: &ModPresheafMorphism,
    plus_src: &PlusData,
    plus_tgt: &PlusData,
) -> ModPresheafMorphism {
    let cat = site.category();
    let ring = source.ring();
    let components: Vec<ModuleMap> = cat
        .objects()
        .map(|c| {
            let (ms, mt) = (&plus_src.matches[c.0], &plus_tgt.matches[c.0]);
            let mut amb =
                Matrix::zero(ring, mt.ambient.generators(), ms.ambient.generators());
            for (i, &g) in ms.members.iter().enumerate() {
                debug_assert_eq!(mt.members[i], g);
                let comp = map.component(cat.src(g)).matrix();
                for r in 0..comp.rows() {
                    for col in 0..comp.cols() {
                        amb.set(mt.offsets[i] + r, ms.offsets[i] + col, comp.get(r, col).clone());
                    }
                }
            }
            let image = amb.mul(ms.inclusion.matrix());
            let lifted = lift_into(&mt.inclusion, &image);
            ModuleMap::new(ms.module.clone(), mt.module.clone(), lifted)
                .expect("plus of a morphism is well defined")
        })
        .collect();
    ModPresheafMorphism::new(cat, &plus_src.presheaf, &plus_tgt.presheaf, components)
        .expect("plus of a morphism is natural")
}

/// Whether `F` satisfies the sheaf condition for the sieve generated by a
/// declared family: the canonical map into the matching module is an
/// isomorphism.
pub fn satisfies_sheaf_condition(
    site: &Site,
    f: &ModPresheaf,
    c: ObjId,
    family: &[MorId],
) -> bool {
    let cat = site.category();
    let ring = f.ring();
    let sieve = Sieve::generated(cat, c, family);
    let data = matching(site, f, &sieve);
    let mut stack = Matrix::zero(ring, data.ambient.generators(), f.value(c).generators());
    for (i, &g) in data.members.iter().enumerate() {
        let rg = f.restriction(g).matrix();
        for r in 0..rg.rows() {
            for col in 0..rg.cols() {
                stack.set(data.offsets[i] + r, col, rg.get(r, col).clone());
            }
        }
    }
    let Some(lifted) = data.inclusion.preimage(&stack) else { return false };
    match ModuleMap::new(f.value(c).clone(), data.module.clone(), lifted) {
        Ok(canonical) => canonical.is_isomorphism(),
        Err(_) => false,
    }
}

/// Whether `F` is a sheaf: the condition holds for every declared family
/// and for the minimal covering sieve of every object.
pub fn is_sheaf(site: &Site, f: &ModPresheaf) -> bool {
    let cat = site.category();
    cat.objects().all(|c| {
        site.coverage()
            .families(c)
            .iter()
            .all(|fam| satisfies_sheaf_condition(site, f, c, fam))
    })
}

/// Whether a set-presheaf morphism is a generalized cover, i.e. locally
/// surjective: every section of the target restricts into the image along
/// the minimal covering sieve.
pub fn is_generalized_cover(
    site: &Site,
    source: &SetPresheaf,
    target: &SetPresheaf,
    map: &SetPresheafMorphism,
) -> bool {
    let cat = site.category();
    cat.objects().all(|c| {
        (0..target.size(c)).all(|s| {
            site.minimal_sieve(c).members().all(|g| {
                let restricted = target.restrict(g, s);
                let d = cat.src(g);
                (0..source.size(d)).any(|i| map.apply(d, i) == restricted)
            })
        })
    })
}
