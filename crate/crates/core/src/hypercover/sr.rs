//! Finite coproducts of representables and the certification that an
//! arbitrary set presheaf decomposes as one.

use crate::error::Error;
use crate::site::{FinCategory, MorId, ObjId, SetPresheaf};

/// A finite coproduct of representables `⊔ₛ y(cₛ)` with element-level
/// bookkeeping: every element is a pair of a summand and a morphism into
/// the summand object.
#[derive(Clone, Debug)]
pub struct SrPresheaf {
    components: Vec<ObjId>,
    presheaf: SetPresheaf,
    /// `elems[o][e] = (summand s, f: o → components[s])`.
    elems: Vec<Vec<(usize, MorId)>>,
}

impl SrPresheaf {
    /// Builds `⊔ₛ y(components[s])`, elements ordered summand-major and
    /// named `s.f` after the summand and the morphism.
    pub fn coproduct(cat: &FinCategory, components: Vec<ObjId>) -> Self {
        let mut values: Vec<Vec<String>> = vec![Vec::new(); cat.object_count()];
        let mut elems: Vec<Vec<(usize, MorId)>> = vec![Vec::new(); cat.object_count()];
        for o in cat.objects() {
            for (s, &c) in components.iter().enumerate() {
                for f in cat.hom(o, c) {
                    values[o.0].push(format!("{s}.{}", cat.morphism_name(f)));
                    elems[o.0].push((s, f));
                }
            }
        }
        let restrictions: Vec<Vec<usize>> = cat
            .morphisms()
            .map(|g| {
                let (a, b) = (cat.src(g), cat.dst(g));
                elems[b.0]
                    .iter()
                    .map(|&(s, f)| {
                        let moved = cat.compose(f, g);
                        elems[a.0]
                            .iter()
                            .position(|&(s2, f2)| s2 == s && f2 == moved)
                            .expect("composite stays in the hom set")
                    })
                    .collect()
            })
            .collect();
        let presheaf = SetPresheaf::new(cat, values, restrictions)
            .expect("coproduct of representables is functorial");
        SrPresheaf { components, presheaf, elems }
    }

    pub fn components(&self) -> &[ObjId] {
        &self.components
    }

    pub fn presheaf(&self) -> &SetPresheaf {
        &self.presheaf
    }

    /// The summand and structure morphism of the `e`-th element at `o`.
    pub fn element(&self, o: ObjId, e: usize) -> (usize, MorId) {
        self.elems[o.0][e]
    }

    /// The element index of `(summand, f)` at `o`.
    pub fn index_of(&self, o: ObjId, summand: usize, f: MorId) -> usize {
        self.elems[o.0]
            .iter()
            .position(|&(s, g)| s == summand && g == f)
            .expect("element present in the coproduct")
    }

    /// The index, at the summand object, of the summand's generator.
    pub fn generator(&self, cat: &FinCategory, summand: usize) -> usize {
        let c = self.components[summand];
        self.index_of(c, summand, cat.identity(c))
    }
}

/// A certified decomposition of a set presheaf as a finite coproduct of
/// representables.
#[derive(Clone, Debug)]
pub struct SrDecomposition {
    /// Per component: the representing object and the generator's element
    /// index at that object.
    pub components: Vec<(ObjId, usize)>,
    /// `assignment[o][e] = (component k, f)` with `p(f)(generator_k) = e`.
    pub assignment: Vec<Vec<(usize, MorId)>>,
}

/// Certifies that `p ≅ ⊔ₖ y(cₖ)` by greedy orbit peeling: repeatedly pick
/// an element that is not a proper restriction of any remaining element,
/// and remove its (necessarily free) orbit of restrictions.
pub fn sr_decompose(cat: &FinCategory, p: &SetPresheaf) -> Result<SrDecomposition, Error> {
    let mut remaining: Vec<Vec<bool>> =
        cat.objects().map(|o| vec![true; p.size(o)]).collect();
    let mut assignment: Vec<Vec<Option<(usize, MorId)>>> =
        cat.objects().map(|o| vec![None; p.size(o)]).collect();
    let mut components: Vec<(ObjId, usize)> = Vec::new();
    loop {
        let mut generator = None;
        'search: for c in cat.objects() {
            for e in 0..p.size(c) {
                if !remaining[c.0][e] {
                    continue;
                }
                let is_restriction = cat.morphisms().any(|f| {
                    cat.src(f) == c
                        && f != cat.identity(c)
                        && (0..p.size(cat.dst(f)))
                            .any(|e2| remaining[cat.dst(f).0][e2] && p.restrict(f, e2) == e)
                });
                if !is_restriction {
                    generator = Some((c, e));
                    break 'search;
                }
            }
        }
        let Some((c, e)) = generator else {
            if remaining.iter().any(|v| v.iter().any(|&b| b)) {
                return Err(Error::NotSemiRepresentable(
                    "no element generates the remainder freely".into(),
                ));
            }
            break;
        };
        let k = components.len();
        for f in cat.morphisms_into(c) {
            let a = cat.src(f);
            let img = p.restrict(f, e);
            if !remaining[a.0][img] {
                return Err(Error::NotSemiRepresentable(format!(
                    "the orbit of {:?} at {} is not free",
                    p.value(c)[e],
                    cat.object_name(c)
                )));
            }
            remaining[a.0][img] = false;
            assignment[a.0][img] = Some((k, f));
        }
        components.push((c, e));
    }
    let assignment = assignment
        .into_iter()
        .map(|v| v.into_iter().map(|a| a.expect("every element assigned")).collect())
        .collect();
    Ok(SrDecomposition { components, assignment })
}
