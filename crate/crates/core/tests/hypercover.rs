use std::sync::Arc;

use finsite::complex::{homology, homology_sheaf, Complex};
use finsite::exactalg::{modules_isomorphic, FpModule, Ring};
use finsite::fixtures::{constant_presheaf, obj, pseudocircle_site};
use finsite::hypercover::{
    cech_nerve, chain_of_hypercover, check_acyclicity, descent_check, sr_decompose,
    verify_hypercover, Hypercover, SrPresheaf,
};
use finsite::simplicial::{AugmentedSimplicial, SimplicialSetPresheaf};
use finsite::site::sheafify::sheafify;
use finsite::site::{
    FinCategory, ModPresheaf, ModPresheafMorphism, SetPresheaf, SetPresheafMorphism,
    Site,
};
use once_cell::sync::Lazy;

static Z: Lazy<Ring> = Lazy::new(Ring::integers);

fn pseudocircle_nerve(truncation: i64, depth: u32) -> (Arc<Site>, Hypercover) {
    let site = Arc::new(pseudocircle_site());
    let cat = site.category();
    let x = obj(&site, "X").unwrap();
    let family = vec![
        cat.morphism_by_name("Ux<=X").unwrap(),
        cat.morphism_by_name("Uy<=X").unwrap(),
    ];
    let nerve = cech_nerve(&site, x, &family, truncation, depth).unwrap();
    (site, nerve)
}

fn component_names(site: &Site, nerve: &Hypercover, n: i64) -> Vec<String> {
    let cat = site.category();
    let mut names: Vec<String> = nerve
        .level_components(n)
        .iter()
        .map(|&c| cat.object_name(c).to_string())
        .collect();
    names.sort();
    names
}

#[test]
fn identity_cover_gives_the_constant_nerve() {
    let site = Arc::new(pseudocircle_site());
    let cat = site.category();
    let x = obj(&site, "X").unwrap();
    let nerve = cech_nerve(&site, x, &[cat.identity(x)], 3, 0).unwrap();
    for n in 0..=3 {
        assert_eq!(nerve.level_components(n), &[x]);
        for o in cat.objects() {
            assert_eq!(
                nerve.augmented().body.level(n).size(o),
                cat.hom(o, x).len()
            );
        }
    }
    assert!(nerve.verify().passes());
}

#[test]
fn empty_cover_of_the_empty_open_is_a_hypercover() {
    let site = Arc::new(pseudocircle_site());
    let cat = site.category();
    let o_empty = obj(&site, "O").unwrap();
    let nerve = cech_nerve(&site, o_empty, &[], 3, 0).unwrap();
    for n in 0..=3 {
        assert!(nerve.level_components(n).is_empty());
        for o in cat.objects() {
            assert_eq!(nerve.augmented().body.level(n).size(o), 0);
        }
    }
    assert!(nerve.verify().passes());
}

#[test]
fn pseudocircle_nerve_levels_are_the_expected_meets() {
    let (site, nerve) = pseudocircle_nerve(2, 0);
    assert_eq!(component_names(&site, &nerve, 0), ["Ux", "Uy"]);
    assert_eq!(component_names(&site, &nerve, 1), ["AB", "AB", "Ux", "Uy"]);
    // Triple meets: one summand per vertex triple, AB for the mixed ones.
    assert_eq!(
        component_names(&site, &nerve, 2),
        ["AB", "AB", "AB", "AB", "AB", "AB", "Ux", "Uy"]
    );
    assert!(nerve.verify().passes());
}

#[test]
fn refined_nerve_splits_the_intersections() {
    let (site, nerve) = pseudocircle_nerve(2, 1);
    assert_eq!(component_names(&site, &nerve, 0), ["Ux", "Uy"]);
    assert_eq!(
        component_names(&site, &nerve, 1),
        ["A", "A", "B", "B", "Ux", "Uy"]
    );
    // The degenerate part stays; the rest splits through {A, B} and the
    // empty cover of O removes the purely mixed components.
    assert_eq!(
        component_names(&site, &nerve, 2),
        ["A", "A", "A", "A", "A", "A", "B", "B", "B", "B", "B", "B", "Ux", "Uy"]
    );
    assert!(nerve.verify().passes());
}

fn identity_map(cat: &FinCategory, p: &SetPresheaf) -> SetPresheafMorphism {
    let components = cat.objects().map(|o| (0..p.size(o)).collect()).collect();
    SetPresheafMorphism::new(cat, p, p, components).unwrap()
}

#[test]
fn nerve_missing_nondegenerate_simplices_fails_verification() {
    let (site, nerve) = pseudocircle_nerve(1, 0);
    let cat = site.category();
    // Replace level 1 by the degenerate part only.
    let x0 = nerve.augmented().body.level(0).clone();
    let id = || identity_map(cat, &x0);
    let body = SimplicialSetPresheaf::new(
        cat,
        vec![x0.clone(), x0.clone()],
        vec![vec![id(), id()]],
        vec![vec![id()]],
    )
    .unwrap();
    let crippled = AugmentedSimplicial::new(
        cat,
        body,
        nerve.augmented().base.clone(),
        nerve.augmented().augmentation.clone(),
    )
    .unwrap();
    let report = verify_hypercover(&site, &crippled);
    assert_eq!(report.first_failure(), Some(1));
}

#[test]
fn empty_augmented_object_over_x_fails_at_level_zero() {
    let site = Arc::new(pseudocircle_site());
    let cat = site.category();
    let x = obj(&site, "X").unwrap();
    let empty = SetPresheaf::empty(cat);
    let base = SetPresheaf::representable(cat, x);
    let aug = SetPresheafMorphism::new(
        cat,
        &empty,
        &base,
        cat.objects().map(|_| vec![]).collect(),
    )
    .unwrap();
    let body = SimplicialSetPresheaf::new(cat, vec![empty.clone()], vec![], vec![]).unwrap();
    let augmented = AugmentedSimplicial::new(cat, body, base, aug).unwrap();
    let report = verify_hypercover(&site, &augmented);
    assert_eq!(report.first_failure(), Some(0));
}

#[test]
fn sr_decompose_certifies_coproducts_and_rejects_overlaps() {
    let site = Arc::new(pseudocircle_site());
    let cat = site.category();
    let parts = vec![
        obj(&site, "Ux").unwrap(),
        obj(&site, "AB").unwrap(),
        obj(&site, "AB").unwrap(),
    ];
    let p = SrPresheaf::coproduct(cat, parts.clone());
    let dec = sr_decompose(cat, p.presheaf()).unwrap();
    let mut found: Vec<&str> =
        dec.components.iter().map(|&(c, _)| cat.object_name(c)).collect();
    found.sort();
    assert_eq!(found, ["AB", "AB", "Ux"]);
    // Two elements restricting to the same element cannot split freely.
    let arrow = finsite::fixtures::arrow_site();
    let acat = arrow.category();
    let values = vec![vec!["u".into()], vec!["w".into(), "w2".into()]];
    let restrictions = acat
        .morphisms()
        .map(|f| {
            if acat.src(f) == acat.dst(f) {
                (0..values[acat.src(f).0].len()).collect()
            } else {
                vec![0, 0]
            }
        })
        .collect();
    let bad = SetPresheaf::new(acat, values, restrictions).unwrap();
    assert!(sr_decompose(acat, &bad).is_err());
}

#[test]
fn chain_of_the_nerve_starts_at_the_covering_sum() {
    let (site, nerve) = pseudocircle_nerve(2, 0);
    let cat = site.category();
    let (chain, _aug) = chain_of_hypercover(&nerve, *Z);
    let expected = ModPresheaf::representable(cat, *Z, obj(&site, "Ux").unwrap())
        .direct_sum(cat, &ModPresheaf::representable(cat, *Z, obj(&site, "Uy").unwrap()));
    for o in cat.objects() {
        assert!(modules_isomorphic(chain.level(0).value(o), expected.value(o)).unwrap());
    }
}

#[test]
fn constant_nerve_chain_is_a_resolution_of_the_representable() {
    let site = Arc::new(pseudocircle_site());
    let cat = site.category();
    let x = obj(&site, "X").unwrap();
    let nerve = cech_nerve(&site, x, &[cat.identity(x)], 3, 0).unwrap();
    let (chain, _) = chain_of_hypercover(&nerve, *Z);
    let lambda_x = ModPresheaf::representable(cat, *Z, x);
    for o in cat.objects() {
        assert!(modules_isomorphic(
            homology(&chain, 0).presheaf.value(o),
            lambda_x.value(o)
        )
        .unwrap());
    }
    for n in 1..=2 {
        assert!(homology(&chain, n).presheaf.is_zero(), "degree {n}");
    }
    assert!(check_acyclicity(&nerve, *Z).passes());
}

#[test]
fn pseudocircle_acyclicity_at_truncation_four() {
    let (_, nerve) = pseudocircle_nerve(4, 0);
    let report = check_acyclicity(&nerve, *Z);
    assert!(report.base_comparison_is_isomorphism);
    assert_eq!(
        report.vanishing,
        vec![(1, true), (2, true), (3, true)]
    );
}

#[test]
fn sheafification_is_essential_for_acyclicity() {
    let (site, nerve) = pseudocircle_nerve(2, 1);
    let (chain, _) = chain_of_hypercover(&nerve, *Z);
    // The mixed loop through {A} and {B} is a nontrivial unsheafified
    // cycle at the empty open, but dies locally.
    let h1 = homology(&chain, 1).presheaf;
    assert!(!h1.is_zero());
    assert!(!h1.value(obj(&site, "O").unwrap()).is_zero());
    assert!(homology_sheaf(&chain, 1).is_zero());
    assert!(check_acyclicity(&nerve, *Z).passes());
}

#[test]
fn zero_complex_satisfies_descent() {
    let (site, nerve) = pseudocircle_nerve(2, 0);
    let report = descent_check(&Complex::zero(site.clone(), *Z), &nerve).unwrap();
    assert!(report.passes());
}

#[test]
fn constant_presheaf_fails_descent_exactly_on_the_refined_nerve() {
    let (site, refined) = pseudocircle_nerve(2, 1);
    let k = Complex::new(
        site.clone(),
        *Z,
        0,
        vec![constant_presheaf(&site, *Z)],
        vec![],
    )
    .unwrap();
    let report = descent_check(&k, &refined).unwrap();
    assert!(!report.passes());
    let obstructions = report.obstructions();
    assert_eq!(obstructions.len(), 1);
    assert_eq!(obstructions[0].degree, -1);
    assert!(obstructions[0].source.is_zero());
    assert!(modules_isomorphic(&obstructions[0].target, &FpModule::free(*Z, 1)).unwrap());
    // The plain nerve sees only the presheaf-level Čech cohomology, which
    // vanishes for a constant coefficient.
    let (_, plain) = pseudocircle_nerve(2, 0);
    assert!(descent_check(&k, &plain).unwrap().passes());
}

#[test]
fn sheaves_satisfy_degree_zero_descent() {
    let (site, nerve) = pseudocircle_nerve(2, 0);
    let sheaf = sheafify(&site, &constant_presheaf(&site, *Z)).sheaf;
    let k = Complex::new(site.clone(), *Z, 0, vec![sheaf], vec![]).unwrap();
    let report = descent_check(&k, &nerve).unwrap();
    let degree_zero = report.verdicts.iter().find(|v| v.degree == 0).unwrap();
    assert!(degree_zero.is_isomorphism);
}

#[test]
fn descent_verdicts_are_homotopy_invariant() {
    let (site, nerve) = pseudocircle_nerve(2, 1);
    let c = constant_presheaf(&site, *Z);
    let k = Complex::new(site.clone(), *Z, 0, vec![c.clone()], vec![]).unwrap();
    // Direct sum with an acyclic disk hanging below degree 0: same homotopy
    // type, same verdicts.
    let disk = Complex::new(
        site.clone(),
        *Z,
        -1,
        vec![c.clone(), c.clone()],
        vec![ModPresheafMorphism::identity(&c)],
    )
    .unwrap();
    let kp = k.direct_sum(&disk);
    let a = descent_check(&k, &nerve).unwrap();
    let b = descent_check(&kp, &nerve).unwrap();
    let verdicts = |r: &finsite::hypercover::DescentReport| {
        r.verdicts
            .iter()
            .map(|v| (v.degree, v.is_isomorphism))
            .collect::<Vec<_>>()
    };
    assert_eq!(verdicts(&a), verdicts(&b));
}
