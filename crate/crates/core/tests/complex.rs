use std::sync::Arc;

use finsite::complex::bicomplex::{tot_prod, tot_sum, Bicomplex};
use finsite::complex::generators::{
    build_generator, generator_morphism, sphere_disk_retract, GeneratorKind,
    GeneratorMorphismKind,
};
use finsite::complex::homology::{all_degrees_pass, homology_at};
use finsite::complex::{
    dghom, homology, is_quasi_iso, module_complex, rlp_solve, Complex, ComplexMorphism,
    HomModule, LiftSquare,
};
use finsite::exactalg::{modules_isomorphic, FpModule, Matrix, Ring};
use once_cell::sync::Lazy;

static Z: Lazy<Ring> = Lazy::new(Ring::integers);
use finsite::fixtures::{
    arrow_site, chain_site, constant_presheaf, obj, pseudocircle_site, terminal_site,
};
use finsite::site::{ModPresheaf, ModPresheafMorphism, ObjId, Site};


fn morphisms_equal(f: &ComplexMorphism, g: &ComplexMorphism) -> bool {
    let lo = f.source().lo().min(g.source().lo()) - 1;
    let hi = f.source().hi().max(g.source().hi()) + 1;
    (lo..=hi).all(|n| f.component(n).equals(&g.component(n)))
}

#[test]
fn sphere_homology_is_the_representable() {
    let site = Arc::new(arrow_site());
    let cat = site.category();
    for c in cat.objects() {
        let s = build_generator(&site, *Z, GeneratorKind::Sphere, 2, c).unwrap();
        let rep = ModPresheaf::representable(cat, *Z, c);
        let h2 = homology(&s, 2).presheaf;
        for o in cat.objects() {
            assert!(modules_isomorphic(h2.value(o), rep.value(o)).unwrap());
        }
        for n in [-1, 0, 1, 3] {
            assert!(homology(&s, n).presheaf.is_zero());
        }
    }
}

#[test]
fn disk_is_acyclic() {
    let site = Arc::new(arrow_site());
    for c in site.category().objects() {
        let d = build_generator(&site, *Z, GeneratorKind::Disk, 1, c).unwrap();
        for n in -1..=2 {
            assert!(homology(&d, n).presheaf.is_zero());
        }
    }
}

#[test]
fn simplex_and_boundary_homology() {
    let site = Arc::new(arrow_site());
    let cat = site.category();
    let c = obj(&site, "b").unwrap();
    let rep = ModPresheaf::representable(cat, *Z, c);
    let simplex = build_generator(&site, *Z, GeneratorKind::Simplex, 1, c).unwrap();
    let boundary =
        build_generator(&site, *Z, GeneratorKind::SimplexBoundary, 1, c).unwrap();
    // Δ¹ has the homology of a point in degree 0; ∂Δ¹ is two points.
    assert!(homology(&simplex, 1).presheaf.is_zero());
    for o in cat.objects() {
        let r = rep.value(o).free_rank();
        let h0 = homology(&simplex, 0).presheaf;
        assert_eq!(h0.value(o).invariants(), (r, vec![]));
        let b0 = homology(&boundary, 0).presheaf;
        assert_eq!(b0.value(o).invariants(), (2 * r, vec![]));
    }
}

#[test]
fn retract_identities_hold_on_all_fixture_sites() {
    let sites = [terminal_site(), arrow_site(), chain_site(), pseudocircle_site()];
    for site in sites {
        let site = Arc::new(site);
        for c in site.category().objects() {
            for n in [-1, 0, 1, 2] {
                let r = sphere_disk_retract(&site, *Z, n, c).unwrap();
                let sphere = r.sphere_to_disk.source().clone();
                let disk = r.sphere_to_disk.target().clone();
                assert!(morphisms_equal(
                    &r.top_out.compose(&r.top_in),
                    &ComplexMorphism::identity(&sphere)
                ));
                assert!(morphisms_equal(
                    &r.bottom_out.compose(&r.bottom_in),
                    &ComplexMorphism::identity(&disk)
                ));
                assert!(morphisms_equal(
                    &r.boundary_to_simplex.compose(&r.top_in),
                    &r.bottom_in.compose(&r.sphere_to_disk)
                ));
                assert!(morphisms_equal(
                    &r.sphere_to_disk.compose(&r.top_out),
                    &r.bottom_out.compose(&r.boundary_to_simplex)
                ));
            }
        }
    }
}

#[test]
fn module_complex_homology_and_truncation() {
    // Z --2--> Z --0--> Z in degrees 0, 1, 2.
    let k = module_complex(
        *Z,
        0,
        vec![FpModule::free(*Z, 1), FpModule::free(*Z, 1), FpModule::free(*Z, 1)],
        vec![Matrix::from_i64(*Z, &[&[2]]), Matrix::from_i64(*Z, &[&[0]])],
    )
    .unwrap();
    let star = ObjId(0);
    assert_eq!(homology_at(&k, 0, star).invariants(), (0, vec![Z.from_i64(2)]));
    assert_eq!(homology_at(&k, 1, star).invariants(), (0, vec![]));
    assert_eq!(homology_at(&k, 2, star).invariants(), (1, vec![]));
    let t = k.truncate_above(1);
    assert!(homology_at(&t, 0, star).is_zero());
    assert_eq!(homology_at(&t, 1, star).invariants(), (0, vec![]));
    assert_eq!(homology_at(&t, 2, star).invariants(), (1, vec![]));
}

#[test]
fn shift_moves_homology() {
    let k = module_complex(
        *Z,
        0,
        vec![FpModule::free(*Z, 1), FpModule::free(*Z, 1)],
        vec![Matrix::from_i64(*Z, &[&[2]])],
    )
    .unwrap();
    let shifted = k.shift(3);
    let star = ObjId(0);
    for n in -1..=2 {
        assert!(modules_isomorphic(
            &homology_at(&k, n, star),
            &homology_at(&shifted, n - 3, star)
        ).unwrap());
    }
}

#[test]
fn dghom_out_of_a_representable_sphere_recovers_evaluation() {
    let site = Arc::new(arrow_site());
    // K: constant Λ in degrees 0 and 1 with d = multiplication by 2.
    let f = constant_presheaf(&site, *Z);
    let d = ModPresheafMorphism::identity(&f).scale(&Z.from_i64(2));
    let k = Complex::new(site.clone(), *Z, 0, vec![f.clone(), f.clone()], vec![d]).unwrap();
    for c in site.category().objects() {
        let s = build_generator(&site, *Z, GeneratorKind::Sphere, 0, c).unwrap();
        let h = dghom(&s, &k);
        let at_c = k.at_object(c);
        let star = ObjId(0);
        for n in -1..=2 {
            assert!(modules_isomorphic(
                &homology_at(&h, n, star),
                &homology_at(&at_c, n, star)
            ).unwrap());
        }
    }
}

#[test]
fn dghom_out_of_a_disk_is_acyclic() {
    let site = Arc::new(arrow_site());
    let f = constant_presheaf(&site, *Z);
    let d = ModPresheafMorphism::identity(&f).scale(&Z.from_i64(2));
    let k = Complex::new(site.clone(), *Z, 0, vec![f.clone(), f.clone()], vec![d]).unwrap();
    let c = obj(&site, "a").unwrap();
    let disk = build_generator(&site, *Z, GeneratorKind::Disk, 1, c).unwrap();
    let h = dghom(&disk, &k);
    let star = ObjId(0);
    for n in h.lo() - 1..=h.hi() + 1 {
        assert!(homology_at(&h, n, star).is_zero(), "degree {n} not acyclic");
    }
}

#[test]
fn hom_module_satisfies_yoneda() {
    let site = arrow_site();
    let cat = site.category();
    let target = ModPresheaf::constant(cat, FpModule::cyclic(*Z, 4));
    for c in cat.objects() {
        let rep = ModPresheaf::representable(cat, *Z, c);
        let hom = HomModule::new(&site, &rep, &target);
        assert!(modules_isomorphic(&hom.module, target.value(c)).unwrap());
    }
}

#[test]
fn hom_module_coordinates_roundtrip() {
    let site = arrow_site();
    let cat = site.category();
    let rep = ModPresheaf::representable(cat, *Z, obj(&site, "b").unwrap());
    let target = ModPresheaf::constant(cat, FpModule::free(*Z, 1));
    let hom = HomModule::new(&site, &rep, &target);
    for gen in hom.generator_morphisms(&site) {
        let coords = hom.express(&gen).expect("generator expressible");
        let back = hom.from_coords(&site, &coords);
        assert!(gen.equals(&back));
    }
}

fn identity_square(site: &Arc<Site>) -> Bicomplex {
    let f = constant_presheaf(site, *Z);
    let id = ModPresheafMorphism::identity(&f);
    Bicomplex::new(
        site.clone(),
        *Z,
        0,
        0,
        vec![vec![f.clone(), f.clone()], vec![f.clone(), f.clone()]],
        vec![vec![id.clone(), id.clone()]],
        vec![vec![id.clone(), id.clone()]],
    )
    .unwrap()
}

#[test]
fn totalization_of_identity_square_is_acyclic() {
    let site = Arc::new(arrow_site());
    let b = identity_square(&site);
    // Construction already certifies D² = 0, which exercises the Koszul
    // sign; without it the total differential would not square to zero.
    let t = tot_sum(&b);
    for n in -1..=3 {
        assert!(homology(&t, n).presheaf.is_zero(), "degree {n}");
    }
    let p = tot_prod(&b);
    assert_eq!(p.lo(), t.lo());
    assert_eq!(p.hi(), t.hi());
}

#[test]
fn single_row_bicomplex_totalizes_to_the_row() {
    let site = Arc::new(arrow_site());
    let f = constant_presheaf(&site, *Z);
    let d = ModPresheafMorphism::identity(&f).scale(&Z.from_i64(3));
    let b = Bicomplex::new(
        site.clone(),
        *Z,
        0,
        0,
        vec![vec![f.clone()], vec![f.clone()]],
        vec![vec![d.clone()]],
        vec![],
    )
    .unwrap();
    let t = tot_sum(&b);
    let row = Complex::new(site.clone(), *Z, 0, vec![f.clone(), f], vec![d]).unwrap();
    for n in -1..=2 {
        for o in site.category().objects() {
            assert!(modules_isomorphic(
                homology(&t, n).presheaf.value(o),
                homology(&row, n).presheaf.value(o)
            ).unwrap());
        }
    }
}

#[test]
fn rlp_finds_the_identity_lift() {
    let site = Arc::new(arrow_site());
    let c = obj(&site, "a").unwrap();
    let i = generator_morphism(&site, *Z, GeneratorMorphismKind::SphereToDisk, 1, c).unwrap();
    let disk = i.target().clone();
    let f = ComplexMorphism::identity(&disk);
    let v = ComplexMorphism::identity(&disk);
    let u = i.compose(&ComplexMorphism::identity(i.source()));
    let square = LiftSquare { i: &i, f: &f, u: &u, v: &v };
    let h = rlp_solve(&square).unwrap().expect("identity square lifts");
    assert!(morphisms_equal(&h.compose(&i), &u));
    assert!(morphisms_equal(&f.compose(&h), &v));
}

#[test]
fn rlp_reports_unsolvable_squares() {
    let site = Arc::new(arrow_site());
    let c = obj(&site, "a").unwrap();
    // Lift S⁰ → D¹ against X = S⁰ → 0: forces h₀ = id and h₀ = 0 at once.
    let i = generator_morphism(&site, *Z, GeneratorMorphismKind::SphereToDisk, 1, c).unwrap();
    let sphere = i.source().clone();
    let zero = Complex::zero(site.clone(), *Z);
    let f = ComplexMorphism::zero(sphere.clone(), zero.clone());
    let u = ComplexMorphism::identity(&sphere);
    let v = ComplexMorphism::zero(i.target().clone(), zero);
    let square = LiftSquare { i: &i, f: &f, u: &u, v: &v };
    assert!(rlp_solve(&square).unwrap().is_none());
}

#[test]
fn rlp_rejects_non_commuting_squares() {
    let site = Arc::new(arrow_site());
    let c = obj(&site, "a").unwrap();
    let i = generator_morphism(&site, *Z, GeneratorMorphismKind::SphereToDisk, 1, c).unwrap();
    let disk = i.target().clone();
    let f = ComplexMorphism::identity(&disk);
    let v = ComplexMorphism::identity(&disk);
    let u = ComplexMorphism::zero(i.source().clone(), disk);
    let square = LiftSquare { i: &i, f: &f, u: &u, v: &v };
    assert!(rlp_solve(&square).is_err());
}

#[test]
fn rlp_lifts_against_a_trivial_fibration() {
    // f: D¹ ⊕ S⁰ → S⁰, projection plus identity: degreewise surjective
    // quasi-isomorphism, so every generating cofibration lifts against it.
    let site = Arc::new(arrow_site());
    let c = obj(&site, "a").unwrap();
    let disk = build_generator(&site, *Z, GeneratorKind::Disk, 1, c).unwrap();
    let sphere = build_generator(&site, *Z, GeneratorKind::Sphere, 0, c).unwrap();
    let x = disk.direct_sum(&sphere);
    // Degree 0 component: project onto the sphere summand.
    let cat = site.category();
    let comps = cat
        .objects()
        .map(|o| {
            let src = x.level(0).value(o).clone();
            let tgt = sphere.level(0).value(o).clone();
            let g = tgt.generators();
            let m = Matrix::zero(*Z, g, src.generators());
            let mut m = m;
            // Source generators: disk block first, then sphere block.
            let disk_g = disk.level(0).value(o).generators();
            for j in 0..g {
                m.set(j, disk_g + j, Z.one());
            }
            finsite::exactalg::ModuleMap::new(src, tgt, m).unwrap()
        })
        .collect();
    let f0 = ModPresheafMorphism::new(cat, &x.level(0), &sphere.level(0), comps).unwrap();
    let f1 = ModPresheafMorphism::zero(&x.level(1), &sphere.level(1));
    let f = ComplexMorphism::new(x.clone(), sphere.clone(), 0, vec![f0, f1]).unwrap();
    assert!(f.is_degreewise_surjective());
    assert!(all_degrees_pass(&is_quasi_iso(&f)));
    for n in [0, 1] {
        let i =
            generator_morphism(&site, *Z, GeneratorMorphismKind::SphereToDisk, n, c).unwrap();
        let u = ComplexMorphism::zero(i.source().clone(), x.clone());
        let v = ComplexMorphism::zero(i.target().clone(), sphere.clone());
        let square = LiftSquare { i: &i, f: &f, u: &u, v: &v };
        assert!(rlp_solve(&square).unwrap().is_some());
    }
    // A nonzero square: u includes S⁰ into the degree-0 disk generator of
    // X, so f ∘ u = 0 and v = 0; the lift must use the degree-1 generator.
    let i = generator_morphism(&site, *Z, GeneratorMorphismKind::SphereToDisk, 1, c).unwrap();
    let s0 = i.source().clone();
    let u_comp = ModPresheafMorphism::new(
        cat,
        &s0.level(0),
        &x.level(0),
        cat.objects()
            .map(|o| {
                let src = s0.level(0).value(o).clone();
                let tgt = x.level(0).value(o).clone();
                let mut m = Matrix::zero(*Z, tgt.generators(), src.generators());
                for j in 0..src.generators() {
                    m.set(j, j, Z.one());
                }
                finsite::exactalg::ModuleMap::new(src, tgt, m).unwrap()
            })
            .collect(),
    )
    .unwrap();
    let u = ComplexMorphism::new(s0.clone(), x.clone(), 0, vec![u_comp]).unwrap();
    let v = ComplexMorphism::zero(i.target().clone(), sphere.clone());
    let square = LiftSquare { i: &i, f: &f, u: &u, v: &v };
    let h = rlp_solve(&square).unwrap().expect("trivial fibration lifts");
    assert!(morphisms_equal(&h.compose(&i), &u));
    assert!(morphisms_equal(&f.compose(&h), &v));
}
