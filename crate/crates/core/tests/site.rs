//! Site validation, sheafification, generalized covers, and stalks on the
//! bundled fixtures.

use finsite::exactalg::{modules_isomorphic, FpModule, Ring};
use finsite::fixtures::{
    constant_presheaf, obj, pseudocircle_site, terminal_site,
};
use finsite::site::sheafify::{
    is_generalized_cover, is_sheaf, satisfies_sheaf_condition, sheafify,
};
use finsite::site::{
    validate_site, Coverage, FinCategory, ModPresheaf, SetPresheaf, SetPresheafMorphism,
};

#[test]
fn bundled_sites_are_valid() {
    let t = terminal_site();
    assert!(validate_site(t.category(), t.coverage()).is_valid());
    let p = pseudocircle_site();
    assert!(validate_site(p.category(), p.coverage()).is_valid());
}

#[test]
fn coverage_without_covers_is_invalid() {
    let cat = FinCategory::poset(vec!["u".into(), "v".into()], &[("u", "v")]).unwrap();
    let mut cov = Coverage::new();
    cov.add_family(cat.object_by_name("v").unwrap(), vec![cat.identity(cat.object_by_name("v").unwrap())]);
    let report = validate_site(&cat, &cov);
    assert!(!report.is_valid());
    assert!(report.violations.iter().any(|v| v.contains("\"u\"")));
}

#[test]
fn pseudocircle_minimal_sieves() {
    let site = pseudocircle_site();
    let cat = site.category();
    // M(X) consists of all six morphisms from proper subopens.
    let x = obj(&site, "X").unwrap();
    let mx = site.minimal_sieve(x);
    assert_eq!(mx.len(), 6);
    assert!(!mx.contains(cat.identity(x)));
    // M(AB) = the three morphisms from O, A, B.
    let ab = obj(&site, "AB").unwrap();
    assert_eq!(site.minimal_sieve(ab).len(), 3);
    // M(O) is empty (the empty family covers O).
    let o = obj(&site, "O").unwrap();
    assert!(site.minimal_sieve(o).is_empty());
    // Irreducible opens keep their identities.
    for name in ["A", "B", "Ux", "Uy"] {
        let c = obj(&site, name).unwrap();
        assert!(site.minimal_sieve(c).contains(cat.identity(c)));
    }
}

#[test]
fn pseudocircle_points_are_the_irreducible_opens() {
    let site = pseudocircle_site();
    let names: Vec<&str> = site.points().iter().map(|p| p.name()).collect();
    assert_eq!(names, vec!["A", "B", "Ux", "Uy"]);
    // Points in X: all four; in AB: only a and b.
    assert_eq!(site.points_in(obj(&site, "X").unwrap()).len(), 4);
    assert_eq!(site.points_in(obj(&site, "AB").unwrap()).len(), 2);
    assert_eq!(site.points_in(obj(&site, "O").unwrap()).len(), 0);
}

#[test]
fn sheafify_on_terminal_site_is_identity() {
    let site = terminal_site();
    let f = constant_presheaf(&site, Ring::integers());
    let s = sheafify(&site, &f);
    assert!(s.unit.is_objectwise_isomorphism());
}

#[test]
fn sheafified_constant_presheaf_counts_components() {
    let site = pseudocircle_site();
    let z = Ring::integers();
    let f = constant_presheaf(&site, z);
    let s = sheafify(&site, &f);
    let expect = |name: &str, rank: usize| {
        let c = obj(&site, name).unwrap();
        assert!(
            modules_isomorphic(s.sheaf.value(c), &FpModule::free(z, rank)).unwrap(),
            "a(Z)({name}) should be Z^{rank}, got {}",
            s.sheaf.value(c).describe()
        );
    };
    // Locally constant functions: one copy of Z per connected component.
    expect("O", 0);
    expect("A", 1);
    expect("B", 1);
    expect("AB", 2);
    expect("Ux", 1);
    expect("Uy", 1);
    expect("X", 1);
    assert!(is_sheaf(&site, &s.sheaf));
    assert!(!is_sheaf(&site, &f));
}

#[test]
fn sheafify_is_idempotent() {
    let site = pseudocircle_site();
    let f = constant_presheaf(&site, Ring::integers());
    let s = sheafify(&site, &f);
    let again = sheafify(&site, &s.sheaf);
    assert!(again.unit.is_objectwise_isomorphism());
}

#[test]
fn sheaf_condition_distinguishes_cover_sizes() {
    let site = pseudocircle_site();
    let cat = site.category();
    let f = constant_presheaf(&site, Ring::integers());
    let ab = obj(&site, "AB").unwrap();
    // The identity family is always fine, and the {A, B} family glues for
    // the constant presheaf because sections must agree on the empty open.
    assert!(satisfies_sheaf_condition(&site, &f, ab, &[cat.identity(ab)]));
    let fam = vec![
        cat.morphism_by_name("A<=AB").unwrap(),
        cat.morphism_by_name("B<=AB").unwrap(),
    ];
    assert!(satisfies_sheaf_condition(&site, &f, ab, &fam));
    // The constant presheaf fails to be a sheaf only at O, where the empty
    // family demands the zero module.
    let o = obj(&site, "O").unwrap();
    assert!(!satisfies_sheaf_condition(&site, &f, o, &[]));
}

/// Builds the disjoint union of representables on a poset site, plus the
/// canonical map to the representable of `target`.
fn reps_over(
    site: &finsite::site::Site,
    summands: &[&str],
    target: &str,
) -> (SetPresheaf, SetPresheaf, SetPresheafMorphism) {
    let cat = site.category();
    let tgt = cat.object_by_name(target).unwrap();
    let values: Vec<Vec<String>> = cat
        .objects()
        .map(|d| {
            summands
                .iter()
                .enumerate()
                .filter(|(_, s)| {
                    !cat.hom(d, cat.object_by_name(s).unwrap()).is_empty()
                })
                .map(|(i, _)| format!("s{i}"))
                .collect()
        })
        .collect();
    let idx_at = |d: finsite::site::ObjId| -> Vec<usize> {
        summands
            .iter()
            .enumerate()
            .filter(|(_, s)| !cat.hom(d, cat.object_by_name(s).unwrap()).is_empty())
            .map(|(i, _)| i)
            .collect()
    };
    let restrictions: Vec<Vec<usize>> = cat
        .morphisms()
        .map(|f| {
            let (a, b) = (cat.src(f), cat.dst(f));
            let (ia, ib) = (idx_at(a), idx_at(b));
            ib.iter()
                .map(|i| ia.iter().position(|j| j == i).unwrap())
                .collect()
        })
        .collect();
    let source = SetPresheaf::new(cat, values, restrictions).unwrap();
    let targetp = SetPresheaf::representable(cat, tgt);
    // Every summand element at d maps to the unique morphism d -> target.
    let components: Vec<Vec<usize>> = cat
        .objects()
        .map(|d| {
            // In a poset the representable has at most one element per object.
            (0..source.size(d)).map(|_| 0).collect()
        })
        .collect();
    let map = SetPresheafMorphism::new(cat, &source, &targetp, components).unwrap();
    (source, targetp, map)
}

#[test]
fn generalized_cover_detection() {
    let site = pseudocircle_site();
    let cat = site.category();
    // Identity is a cover.
    let yx = SetPresheaf::representable(cat, obj(&site, "X").unwrap());
    let id = SetPresheafMorphism::new(
        cat,
        &yx,
        &yx,
        cat.objects().map(|d| (0..yx.size(d)).collect()).collect(),
    )
    .unwrap();
    assert!(is_generalized_cover(&site, &yx, &yx, &id));
    // Ux ⊔ Uy -> X is a cover.
    let (src, tgt, map) = reps_over(&site, &["Ux", "Uy"], "X");
    assert!(is_generalized_cover(&site, &src, &tgt, &map));
    // Ux alone is not (nothing restricts to Uy).
    let (src, tgt, map) = reps_over(&site, &["Ux"], "X");
    assert!(!is_generalized_cover(&site, &src, &tgt, &map));
    // Empty presheaf into a representable is not a cover.
    let empty = SetPresheaf::empty(cat);
    let m = SetPresheafMorphism::new(
        cat,
        &empty,
        &yx,
        vec![Vec::new(); cat.object_count()],
    )
    .unwrap();
    assert!(!is_generalized_cover(&site, &empty, &yx, &m));
}

#[test]
fn stalks_of_constant_and_mixed_presheaves() {
    let site = pseudocircle_site();
    let z = Ring::integers();
    let f = constant_presheaf(&site, z);
    for p in site.points() {
        let s = site.stalk(&f, p).unwrap();
        assert!(modules_isomorphic(&s, &FpModule::free(z, 1)).unwrap());
    }
    // The sheafified constant presheaf has stalk Z at the point a even
    // though a(Z)(AB) = Z^2.
    let a_sheaf = sheafify(&site, &f).sheaf;
    let pa = site.point_by_name("A").unwrap();
    assert!(modules_isomorphic(
        &site.stalk(&a_sheaf, pa).unwrap(),
        &FpModule::free(z, 1)
    )
    .unwrap());
    // Stalks commute with direct sums.
    let sum = f.direct_sum(site.category(), &f);
    let s = site.stalk(&sum, pa).unwrap();
    assert!(modules_isomorphic(&s, &FpModule::free(z, 2)).unwrap());
}

#[test]
fn sheafify_preserves_zero_on_empty_open() {
    // A presheaf with value Z at O still sheafifies to 0 there, because
    // the empty family covers O.
    let site = pseudocircle_site();
    let z = Ring::integers();
    let f = constant_presheaf(&site, z);
    let s = sheafify(&site, &f);
    assert!(s.sheaf.value(obj(&site, "O").unwrap()).is_zero());
}

#[test]
fn sheafify_functor_on_morphisms() {
    use finsite::site::sheafify::sheafify_map;
    use finsite::site::ModPresheafMorphism;
    let site = pseudocircle_site();
    let z = Ring::integers();
    let f = constant_presheaf(&site, z);
    let id = ModPresheafMorphism::identity(&f);
    let sid = sheafify_map(&site, &f, &f, &id);
    assert!(sid.is_objectwise_isomorphism());
    let zero = ModPresheafMorphism::zero(&f, &f);
    let szero = sheafify_map(&site, &f, &f, &zero);
    assert!(szero.is_zero_map());
}

#[test]
fn constant_f2_presheaf_sheafifies_like_z() {
    let site = pseudocircle_site();
    let f2 = Ring::prime_field(2).unwrap();
    let f = ModPresheaf::constant(site.category(), FpModule::free(f2, 1));
    let s = sheafify(&site, &f);
    assert!(modules_isomorphic(
        s.sheaf.value(obj(&site, "AB").unwrap()),
        &FpModule::free(f2, 2)
    )
    .unwrap());
}
