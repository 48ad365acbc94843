//! Čech nerves and hypercovers: construction by iterated matching objects,
//! independent verification, the associated chain complex, acyclicity
//! checking, and descent testing.

use std::sync::Arc;

use crate::complex::{homology_map, homology_sheaf, Complex, ComplexMorphism};
use crate::error::Error;
use crate::exactalg::Ring;
use crate::simplicial::{
    compatible_tuples, linearize, linearize_map, matching_object, moore, tuple_presheaf,
    AugmentedSimplicial, SimplicialSetPresheaf,
};
use crate::site::sheafify::{is_generalized_cover, sheafify_map};
use crate::site::{MorId, ObjId, SetPresheafMorphism, Site};

mod descent;
mod sr;

pub use descent::{descent_check, DescentReport, DescentVerdict};
pub use sr::{sr_decompose, SrDecomposition, SrPresheaf};

/// A truncated hypercover of a site object: an augmented simplicial set
/// presheaf whose levels carry certified decompositions into coproducts of
/// representables and whose matching comparisons are generalized covers.
#[derive(Clone, Debug)]
pub struct Hypercover {
    site: Arc<Site>,
    base_object: ObjId,
    /// The base `y(c)` as a one-summand coproduct.
    base: SrPresheaf,
    augmented: AugmentedSimplicial,
    /// Per-level decomposition certificates.
    levels: Vec<SrPresheaf>,
}

impl Hypercover {
    pub fn site(&self) -> &Arc<Site> {
        &self.site
    }

    pub fn base_object(&self) -> ObjId {
        self.base_object
    }

    pub fn augmented(&self) -> &AugmentedSimplicial {
        &self.augmented
    }

    pub fn truncation(&self) -> i64 {
        self.augmented.body.truncation()
    }

    /// The representable summand objects of level `n`.
    pub fn level_components(&self, n: i64) -> &[ObjId] {
        self.levels[n as usize].components()
    }

    pub fn level(&self, n: i64) -> &SrPresheaf {
        &self.levels[n as usize]
    }

    pub fn base(&self) -> &SrPresheaf {
        &self.base
    }

    /// Independent re-verification of the hypercover conditions.
    pub fn verify(&self) -> HypercoverReport {
        verify_hypercover(&self.site, &self.augmented)
    }
}

/// The first declared covering family of `c` other than the identity
/// singleton, if any.
fn nontrivial_family(site: &Site, c: ObjId) -> Option<&[MorId]> {
    let cat = site.category();
    site.coverage()
        .families(c)
        .iter()
        .find(|fam| !(fam.len() == 1 && fam[0] == cat.identity(c)))
        .map(Vec::as_slice)
}

/// The tuple of an `(n−1)`-simplex `e` under the degeneracy `s_i`, as
/// forced by the simplicial identities.
fn degenerate_tuple(
    aug: &AugmentedSimplicial,
    n: i64,
    i: i64,
    o: ObjId,
    e: usize,
) -> Vec<usize> {
    (0..=n)
        .map(|j| {
            if j == i || j == i + 1 {
                e
            } else if j < i {
                let de = aug.face_or_augmentation(n - 1, j, o, e);
                aug.body.degeneracy(n - 2, i - 1).apply(o, de)
            } else {
                let de = aug.face_or_augmentation(n - 1, j - 1, o, e);
                aug.body.degeneracy(n - 2, i).apply(o, de)
            }
        })
        .collect()
}

/// Appends level `n`: decompose the matching object into representables,
/// refine components through declared covering families (`depth` rounds,
/// skipping components that carry degenerate simplices so the degeneracy
/// sections survive), and install projection faces.
fn extend_level(
    site: &Site,
    aug: &AugmentedSimplicial,
    n: i64,
    depth: u32,
) -> Result<(AugmentedSimplicial, SrPresheaf), Error> {
    let cat = site.category();
    let below = aug.body.level(n - 1);
    let tuples = compatible_tuples(cat, aug, n);
    let mn = tuple_presheaf(cat, below, &tuples)?;
    let dec = sr_decompose(cat, &mn).map_err(|_| {
        Error::MissingFiberProduct(format!(
            "the level-{n} matching object is not a finite coproduct of representables"
        ))
    })?;
    let find_tuple = |o: ObjId, t: &[usize]| {
        tuples[o.0]
            .iter()
            .position(|u| u == t)
            .expect("degenerate tuples are boundary-compatible")
    };
    // Mark components containing a degenerate simplex.
    let mut touched = vec![false; dec.components.len()];
    for i in 0..n {
        for o in cat.objects() {
            for e in 0..below.size(o) {
                let t = degenerate_tuple(aug, n, i, o, e);
                touched[dec.assignment[o.0][find_tuple(o, &t)].0] = true;
            }
        }
    }
    // Summands `(component, object, anchor element of the matching object)`.
    let mut summands: Vec<(usize, ObjId, usize)> = dec
        .components
        .iter()
        .enumerate()
        .map(|(k, &(c, gen))| (k, c, gen))
        .collect();
    for _ in 0..depth {
        let mut next = Vec::new();
        for &(k, c, anchor) in &summands {
            match nontrivial_family(site, c) {
                Some(fam) if !touched[k] => {
                    for &h in fam {
                        next.push((k, cat.src(h), mn.restrict(h, anchor)));
                    }
                }
                _ => next.push((k, c, anchor)),
            }
        }
        summands = next;
    }
    let cert =
        SrPresheaf::coproduct(cat, summands.iter().map(|&(_, c, _)| c).collect());
    let level = cert.presheaf().clone();
    // Image of each level element in the matching object.
    let to_mn: Vec<Vec<usize>> = cat
        .objects()
        .map(|o| {
            (0..level.size(o))
                .map(|e| {
                    let (s, f) = cert.element(o, e);
                    mn.restrict(f, summands[s].2)
                })
                .collect()
        })
        .collect();
    let faces: Vec<SetPresheafMorphism> = (0..=n)
        .map(|i| {
            let comps = cat
                .objects()
                .map(|o| {
                    (0..level.size(o))
                        .map(|e| tuples[o.0][to_mn[o.0][e]][i as usize])
                        .collect()
                })
                .collect();
            SetPresheafMorphism::new(cat, &level, below, comps)
        })
        .collect::<Result<_, _>>()?;
    // Unrefined components lift uniquely; degenerate simplices only ever
    // land in those by the `touched` rule.
    let unrefined: Vec<Option<usize>> = dec
        .components
        .iter()
        .enumerate()
        .map(|(k, &(c, gen))| {
            let hits: Vec<usize> = summands
                .iter()
                .enumerate()
                .filter(|(_, s)| s.0 == k)
                .map(|(i, _)| i)
                .collect();
            match hits.as_slice() {
                [s] if summands[*s].1 == c && summands[*s].2 == gen => Some(*s),
                _ => None,
            }
        })
        .collect();
    let degeneracies: Vec<SetPresheafMorphism> = (0..n)
        .map(|i| {
            let comps = cat
                .objects()
                .map(|o| {
                    (0..below.size(o))
                        .map(|e| {
                            let t = degenerate_tuple(aug, n, i, o, e);
                            let (k, f) = dec.assignment[o.0][find_tuple(o, &t)];
                            let s = unrefined[k]
                                .expect("degenerate components are kept unrefined");
                            cert.index_of(o, s, f)
                        })
                        .collect()
                })
                .collect();
            SetPresheafMorphism::new(cat, below, &level, comps)
        })
        .collect::<Result<_, _>>()?;
    let body = aug.body.with_level(cat, level, faces, degeneracies)?;
    let next =
        AugmentedSimplicial::new(cat, body, aug.base.clone(), aug.augmentation.clone())?;
    Ok((next, cert))
}

/// The Čech nerve of a covering family `{uᵢ: cᵢ → c}`, truncated at the
/// given level. Level 0 is `⊔ y(cᵢ)`; each further level is the matching
/// object, decomposed into representables (iterated fiber products, which
/// on a poset site are meets). With `depth ≥ 1`, components of the
/// non-degenerate part are additionally refined through declared covering
/// families, producing a split refinement of the plain nerve.
pub fn cech_nerve(
    site: &Arc<Site>,
    c: ObjId,
    family: &[MorId],
    truncation: i64,
    depth: u32,
) -> Result<Hypercover, Error> {
    let cat = site.category();
    for &u in family {
        if cat.dst(u) != c {
            return Err(Error::NotHypercover(format!(
                "covering morphism {} does not land in {}",
                cat.morphism_name(u),
                cat.object_name(c)
            )));
        }
    }
    let base = SrPresheaf::coproduct(cat, vec![c]);
    let x0 =
        SrPresheaf::coproduct(cat, family.iter().map(|&u| cat.src(u)).collect());
    let aug_components: Vec<Vec<usize>> = cat
        .objects()
        .map(|o| {
            (0..x0.presheaf().size(o))
                .map(|e| {
                    let (s, f) = x0.element(o, e);
                    base.index_of(o, 0, cat.compose(family[s], f))
                })
                .collect()
        })
        .collect();
    let augmentation =
        SetPresheafMorphism::new(cat, x0.presheaf(), base.presheaf(), aug_components)?;
    let body =
        SimplicialSetPresheaf::new(cat, vec![x0.presheaf().clone()], vec![], vec![])?;
    let mut aug =
        AugmentedSimplicial::new(cat, body, base.presheaf().clone(), augmentation)?;
    let mut levels = vec![x0];
    for n in 1..=truncation {
        let (next, cert) = extend_level(site, &aug, n, depth)?;
        aug = next;
        levels.push(cert);
    }
    Ok(Hypercover { site: site.clone(), base_object: c, base, augmented: aug, levels })
}

/// The verdict for one level of a candidate hypercover.
#[derive(Clone, Debug)]
pub struct LevelVerdict {
    pub level: i64,
    /// Whether the level decomposes as a finite coproduct of representables.
    pub semi_representable: bool,
    /// Whether the comparison to the matching object (the augmentation at
    /// level 0) is a generalized cover.
    pub comparison_is_cover: bool,
}

/// Per-level verdicts for the two hypercover conditions.
#[derive(Clone, Debug)]
pub struct HypercoverReport {
    pub verdicts: Vec<LevelVerdict>,
}

impl HypercoverReport {
    pub fn passes(&self) -> bool {
        self.verdicts
            .iter()
            .all(|v| v.semi_representable && v.comparison_is_cover)
    }

    /// The first level at which either condition fails.
    pub fn first_failure(&self) -> Option<i64> {
        self.verdicts
            .iter()
            .find(|v| !(v.semi_representable && v.comparison_is_cover))
            .map(|v| v.level)
    }
}

/// Checks the hypercover conditions for every level of an augmented
/// simplicial set presheaf, independently of how it was built.
pub fn verify_hypercover(site: &Site, x: &AugmentedSimplicial) -> HypercoverReport {
    let cat = site.category();
    let verdicts = (0..=x.body.truncation())
        .map(|n| {
            let semi = sr_decompose(cat, x.body.level(n)).is_ok();
            let (matching, comparison) =
                matching_object(cat, x, n).expect("level within truncation");
            let cover =
                is_generalized_cover(site, x.body.level(n), &matching, &comparison);
            LevelVerdict { level: n, semi_representable: semi, comparison_is_cover: cover }
        })
        .collect();
    HypercoverReport { verdicts }
}

/// The chain complex `Λ(c_•)` of a hypercover — the Moore complex of the
/// levelwise linearization — with its augmentation to `Λ(c)` in degree 0.
pub fn chain_of_hypercover(x: &Hypercover, ring: Ring) -> (Complex, ComplexMorphism) {
    let site = x.site();
    let cat = site.category();
    let lx = linearize(site, ring, &x.augmented.body);
    let k = moore(&lx);
    let base_lin = x.augmented.base.linearize(cat, ring);
    let aug_map = linearize_map(
        cat,
        ring,
        x.augmented.body.level(0),
        &x.augmented.base,
        &x.augmented.augmentation,
    );
    let target = Complex::new(site.clone(), ring, 0, vec![base_lin], vec![])
        .expect("a single level is a complex");
    let aug = ComplexMorphism::new(k.clone(), target, 0, vec![aug_map])
        .expect("the augmentation coequalizes the two faces");
    (k, aug)
}

/// The acyclicity verdict for a hypercover: the sheafified augmentation is
/// an isomorphism on `H₀` and the sheafified homology vanishes in degrees
/// `1 ≤ n ≤ N − 1`.
#[derive(Clone, Debug)]
pub struct AcyclicityReport {
    pub base_comparison_is_isomorphism: bool,
    pub vanishing: Vec<(i64, bool)>,
}

impl AcyclicityReport {
    pub fn passes(&self) -> bool {
        self.base_comparison_is_isomorphism && self.vanishing.iter().all(|&(_, ok)| ok)
    }
}

/// Checks `a_τH₀Λ(c_•) ≅ a_τΛ(c)` via the augmentation and `a_τH_n = 0`
/// for `1 ≤ n ≤ N − 1`.
pub fn check_acyclicity(x: &Hypercover, ring: Ring) -> AcyclicityReport {
    let (k, aug) = chain_of_hypercover(x, ring);
    let site = x.site();
    let (hs, ht, map) = homology_map(&aug, 0);
    let sheafified = sheafify_map(site, &hs.presheaf, &ht.presheaf, &map);
    let vanishing = (1..x.truncation())
        .map(|n| (n, homology_sheaf(&k, n).is_zero()))
        .collect();
    AcyclicityReport {
        base_comparison_is_isomorphism: sheafified.is_objectwise_isomorphism(),
        vanishing,
    }
}
