//! Sieves, coverages, and the minimal covering sieve of each object.

use std::collections::{BTreeMap, BTreeSet};

use super::category::{FinCategory, MorId, ObjId};
use crate::error::Error;

/// A sieve on an object: a set of morphisms into it closed under
/// precomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sieve {
    object: ObjId,
    members: BTreeSet<MorId>,
}

impl Sieve {
    pub fn empty(object: ObjId) -> Self {
        Sieve { object, members: BTreeSet::new() }
    }

    /// The maximal sieve: every morphism into the object.
    pub fn maximal(cat: &FinCategory, object: ObjId) -> Self {
        Sieve { object, members: cat.morphisms_into(object).into_iter().collect() }
    }

    /// The sieve generated by a family of morphisms into `object`:
    /// all composites `f ∘ g`.
    pub fn generated(cat: &FinCategory, object: ObjId, family: &[MorId]) -> Self {
        let mut members = BTreeSet::new();
        for &f in family {
            assert_eq!(cat.dst(f), object, "family member has wrong target");
            for g in cat.morphisms_into(cat.src(f)) {
                members.insert(cat.compose(f, g));
            }
        }
        Sieve { object, members }
    }

    pub fn object(&self) -> ObjId {
        self.object
    }

    pub fn members(&self) -> impl Iterator<Item = MorId> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, m: MorId) -> bool {
        self.members.contains(&m)
    }

    pub fn contains_sieve(&self, other: &Sieve) -> bool {
        other.members.is_subset(&self.members)
    }

    pub fn intersect(&self, other: &Sieve) -> Sieve {
        assert_eq!(self.object, other.object);
        Sieve {
            object: self.object,
            members: self.members.intersection(&other.members).copied().collect(),
        }
    }

    /// The pullback sieve `h^* S` on `src(h)`: morphisms `g` with
    /// `h ∘ g ∈ S`.
    pub fn pullback(&self, cat: &FinCategory, h: MorId) -> Sieve {
        assert_eq!(cat.dst(h), self.object, "pullback along a morphism elsewhere");
        let d = cat.src(h);
        let members = cat
            .morphisms_into(d)
            .into_iter()
            .filter(|&g| self.members.contains(&cat.compose(h, g)))
            .collect();
        Sieve { object: d, members }
    }

    /// Whether the set is closed under precomposition.
    pub fn is_sieve(&self, cat: &FinCategory) -> bool {
        self.members.iter().all(|&f| {
            cat.morphisms_into(cat.src(f))
                .into_iter()
                .all(|g| self.members.contains(&cat.compose(f, g)))
        })
    }
}

/// A coverage: for each object, declared covering families of morphisms
/// into it.
#[derive(Clone, Debug, Default)]
pub struct Coverage {
    families: BTreeMap<usize, Vec<Vec<MorId>>>,
}

impl Coverage {
    pub fn new() -> Self {
        Coverage::default()
    }

    /// The trivial coverage: only identity singleton families.
    pub fn trivial(cat: &FinCategory) -> Self {
        let mut cov = Coverage::new();
        for o in cat.objects() {
            cov.add_family(o, vec![cat.identity(o)]);
        }
        cov
    }

    pub fn add_family(&mut self, object: ObjId, family: Vec<MorId>) {
        self.families.entry(object.0).or_default().push(family);
    }

    pub fn families(&self, object: ObjId) -> &[Vec<MorId>] {
        self.families
            .get(&object.0)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Objects that have at least one declared family.
    pub fn covered_objects(&self) -> impl Iterator<Item = ObjId> + '_ {
        self.families.keys().map(|&o| ObjId(o))
    }
}

/// Computes the minimal covering sieve of every object: the greatest
/// fixpoint of refining each declared family through the minimal sieves of
/// its members' domains. A sieve covers an object iff it contains the
/// minimal one.
pub fn minimal_covering_sieves(cat: &FinCategory, cov: &Coverage) -> Vec<Sieve> {
    let mut m: Vec<Sieve> = cat.objects().map(|o| Sieve::maximal(cat, o)).collect();
    loop {
        let mut changed = false;
        let mut next = Vec::with_capacity(m.len());
        for c in cat.objects() {
            let mut sieve = Sieve::maximal(cat, c);
            for family in cov.families(c) {
                let generated = Sieve::generated(cat, c, family);
                // Refine: composites f ∘ g with f in the generated sieve
                // and g in the current minimal sieve of dom(f).
                let mut refined = BTreeSet::new();
                for f in generated.members() {
                    for g in m[cat.src(f).0].members() {
                        refined.insert(cat.compose(f, g));
                    }
                }
                sieve = sieve.intersect(&Sieve { object: c, members: refined });
            }
            if sieve != m[c.0] {
                changed = true;
            }
            next.push(sieve);
        }
        m = next;
        if !changed {
            return m;
        }
    }
}

/// Validation report for a category-plus-coverage pair.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the category laws, family well-formedness, presence of covers,
/// and pullback-stability of the generated covering sieves.
pub fn validate_site(cat: &FinCategory, cov: &Coverage) -> ValidationReport {
    let mut violations = cat.law_violations();
    for c in cat.objects() {
        if cov.families(c).is_empty() {
            violations.push(format!(
                "object {:?} has no declared covering family",
                cat.object_name(c)
            ));
            continue;
        }
        for family in cov.families(c) {
            for &f in family {
                if cat.dst(f) != c {
                    violations.push(format!(
                        "family member {} does not target {:?}",
                        cat.morphism_name(f),
                        cat.object_name(c)
                    ));
                }
            }
        }
    }
    if !violations.is_empty() {
        return ValidationReport { violations };
    }
    // Pullback stability at the generated-sieve level: pulling any covering
    // sieve back along any morphism yields a covering sieve.
    let minimal = minimal_covering_sieves(cat, cov);
    for c in cat.objects() {
        for family in cov.families(c) {
            let sieve = Sieve::generated(cat, c, family);
            for h in cat.morphisms_into(c) {
                let pulled = sieve.pullback(cat, h);
                let d = cat.src(h);
                if !pulled.contains_sieve(&minimal[d.0]) {
                    violations.push(format!(
                        "pullback of a covering sieve of {:?} along {} does not cover {:?}",
                        cat.object_name(c),
                        cat.morphism_name(h),
                        cat.object_name(d)
                    ));
                }
            }
        }
    }
    ValidationReport { violations }
}

/// Errors out (rather than reporting) when the site is invalid.
pub fn require_valid(cat: &FinCategory, cov: &Coverage) -> Result<(), Error> {
    let report = validate_site(cat, cov);
    match report.violations.into_iter().next() {
        None => Ok(()),
        Some(first) => Err(Error::InvalidSite(first)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_coverage_has_maximal_minimal_sieves() {
        let cat =
            FinCategory::poset(vec!["a".into(), "b".into()], &[("a", "b")]).unwrap();
        let cov = Coverage::trivial(&cat);
        assert!(validate_site(&cat, &cov).is_valid());
        let m = minimal_covering_sieves(&cat, &cov);
        for o in cat.objects() {
            assert_eq!(m[o.0], Sieve::maximal(&cat, o));
        }
    }

    #[test]
    fn missing_cover_is_reported() {
        let cat = FinCategory::poset(vec!["a".into()], &[]).unwrap();
        let cov = Coverage::new();
        let report = validate_site(&cat, &cov);
        assert!(!report.is_valid());
        assert!(report.violations[0].contains("\"a\""));
    }
}
