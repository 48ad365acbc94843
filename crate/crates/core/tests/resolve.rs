use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use finsite::complex::{
    all_degrees_pass, block_morphism, generators::generator_morphism,
    generators::GeneratorMorphismKind, homology_map, is_quasi_iso, module_complex,
    Complex, ComplexMorphism, TERMINAL_SITE,
};
use finsite::exactalg::{modules_isomorphic, FpModule, Matrix, ModuleMap, Ring};
use finsite::fixtures::{
    arrow_site, chain_site, constant_cyclic_presheaf, constant_presheaf,
    random_connective_complex, random_natural_map, random_sum_of_representables,
    terminal_site,
};
use finsite::resolve::{
    certify_cofibration, certify_semi_representable, cofibrant_replace, kan_extend,
    sr_resolution, sr_step, sr_step_map, CofibrationVerdict, ComplexDiagram,
    ResolutionStrategy,
};
use finsite::site::{
    presheaf_cokernel, ModPresheaf, ModPresheafMorphism, MorId, ObjId, Site,
};
use finsite::Error;

fn s0(site: &Arc<Site>, f: &ModPresheaf) -> Complex {
    Complex::new(site.clone(), f.ring(), 0, vec![f.clone()], Vec::new())
        .expect("one-level complex")
}

#[test]
fn zero_presheaf_steps_are_trivial() {
    let site = Arc::new(terminal_site());
    let zero = ModPresheaf::zero(site.category(), Ring::integers());
    for strategy in [ResolutionStrategy::PaperExact, ResolutionStrategy::Economical] {
        let step = sr_step(&site, &zero, strategy).expect("zero step");
        assert!(step.cover.presheaf().is_zero());
        assert!(step.kernel.is_zero());
    }
}

#[test]
fn paper_exact_step_over_f2_indexes_nonzero_sections() {
    let site = Arc::new(terminal_site());
    let ring = Ring::prime_field(2).expect("prime");
    let f = constant_presheaf(&site, ring);
    let step = sr_step(&site, &f, ResolutionStrategy::PaperExact).expect("finite sections");
    assert_eq!(step.cover.components(), &[ObjId(0)]);
    assert!(step.epi.is_objectwise_surjective());
    assert!(step.kernel.is_zero());
}

#[test]
fn paper_exact_step_over_integers_is_infeasible() {
    let site = Arc::new(terminal_site());
    let f = constant_presheaf(&site, Ring::integers());
    let err = sr_step(&site, &f, ResolutionStrategy::PaperExact).unwrap_err();
    assert!(matches!(err, Error::StrategyInfeasible(_)));
}

#[test]
fn economical_resolution_of_z_mod_two() {
    let site = Arc::new(terminal_site());
    let f = constant_cyclic_presheaf(&site, Ring::integers(), 2);
    let res = sr_resolution(&site, &f, 3, ResolutionStrategy::Economical)
        .expect("economical resolution");
    assert!(res.fully_resolved);
    assert_eq!(res.complex.lo(), 0);
    assert_eq!(res.complex.hi(), 1);
    for n in 0..=1 {
        assert_eq!(res.complex.level(n).value(ObjId(0)).invariants(), (1, Vec::new()));
    }
    let d = res.complex.differential(1);
    let entry = d.component(ObjId(0)).matrix().get(0, 0).clone();
    let ring = Ring::integers();
    assert!(entry == ring.from_i64(2) || entry == ring.from_i64(-2));
    assert!(all_degrees_pass(&is_quasi_iso(&res.augmentation)));
}

#[test]
fn resolution_of_a_sum_of_representables_terminates_at_once() {
    let site = Arc::new(arrow_site());
    let cat = site.category();
    let ring = Ring::integers();
    let f = ModPresheaf::representable(cat, ring, ObjId(0))
        .direct_sum(cat, &ModPresheaf::representable(cat, ring, ObjId(1)));
    let res = sr_resolution(&site, &f, 3, ResolutionStrategy::Economical)
        .expect("economical resolution");
    assert!(res.fully_resolved);
    assert!(all_degrees_pass(&is_quasi_iso(&res.augmentation)));
}

#[test]
fn random_resolutions_match_homology_in_window() {
    let site = Arc::new(arrow_site());
    let ring = Ring::prime_field(2).expect("prime");
    let cat = site.category();
    for seed in 0..6u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_sum_of_representables(&site, ring, &mut rng, 2);
        let b = random_sum_of_representables(&site, ring, &mut rng, 2);
        let phi = random_natural_map(&site, &a, &b, &mut rng);
        let (f, _) = presheaf_cokernel(cat, &b, &phi);
        let depth = 3;
        let res = sr_resolution(&site, &f, depth, ResolutionStrategy::Economical)
            .expect("economical resolution");
        for n in 0..=(depth as i64 - 2) {
            let (_, _, map) = homology_map(&res.augmentation, n);
            assert!(map.is_objectwise_isomorphism(), "seed {seed} degree {n}");
        }
    }
}

#[test]
fn paper_exact_step_maps_respect_zero_and_monos() {
    let site = Arc::new(arrow_site());
    let cat = site.category();
    let ring = Ring::prime_field(2).expect("prime");
    let f = ModPresheaf::representable(cat, ring, ObjId(0));
    let lb = ModPresheaf::representable(cat, ring, ObjId(1));
    let (_, g, incl) = block_morphism(
        cat,
        ring,
        &[&f],
        &[&f, &lb],
        &[(0, 0, &ModPresheafMorphism::identity(&f), ring.one())],
    );
    let step_f = sr_step(&site, &f, ResolutionStrategy::PaperExact).expect("step");
    let step_g = sr_step(&site, &g, ResolutionStrategy::PaperExact).expect("step");
    let psi = sr_step_map(&site, &step_f, &step_g, &incl, ResolutionStrategy::PaperExact);
    assert!(psi.is_objectwise_injective());
    assert!(step_g.epi.compose(&psi).equals(&incl.compose(&step_f.epi)));
    let zero = ModPresheafMorphism::zero(&f, &g);
    let psi0 = sr_step_map(&site, &step_f, &step_g, &zero, ResolutionStrategy::PaperExact);
    assert!(psi0.is_zero_map());
}

#[test]
fn cofibrant_replacement_of_zero_is_zero() {
    let site = Arc::new(arrow_site());
    let k = Complex::zero(site, Ring::integers());
    let cr = cofibrant_replace(&k, 2, ResolutionStrategy::Economical).expect("replace");
    assert!(cr.qk.is_zero_object());
    assert!(cr.fully_resolved);
}

#[test]
fn cofibrant_replacement_of_z_mod_two() {
    let site = Arc::new(terminal_site());
    let k = s0(&site, &constant_cyclic_presheaf(&site, Ring::integers(), 2));
    let cr = cofibrant_replace(&k, 3, ResolutionStrategy::Economical).expect("replace");
    assert!(cr.fully_resolved);
    assert_eq!(cr.qk.lo(), 0);
    assert_eq!(cr.qk.hi(), 1);
    for n in 0..=1 {
        assert_eq!(cr.qk.level(n).value(ObjId(0)).invariants(), (1, Vec::new()));
    }
    assert!(cr.map.is_degreewise_surjective());
    assert!(all_degrees_pass(&is_quasi_iso(&cr.map)));
}

#[test]
fn cofibrant_replacement_of_a_representable_keeps_its_summand() {
    let site = Arc::new(arrow_site());
    let ring = Ring::prime_field(2).expect("prime");
    let a = ObjId(0);
    let k = s0(&site, &ModPresheaf::representable(site.category(), ring, a));
    let cr = cofibrant_replace(&k, 2, ResolutionStrategy::PaperExact).expect("replace");
    let (degree, comps) = &cr.level_components[0];
    assert_eq!(*degree, 0);
    assert!(comps.contains(&a));
    assert!(cr.map.is_degreewise_surjective());
    assert!(all_degrees_pass(&is_quasi_iso(&cr.map)));
}

#[test]
fn random_cofibrant_replacements_over_f2() {
    let site = Arc::new(arrow_site());
    let ring = Ring::prime_field(2).expect("prime");
    for seed in 0..5u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let k = random_connective_complex(&site, ring, &mut rng, 2, 2);
        let depth = 3;
        let cr = cofibrant_replace(&k, depth, ResolutionStrategy::Economical)
            .expect("replace");
        assert!(cr.map.is_degreewise_surjective(), "seed {seed}");
        let top = cr.valid_hi.min(cr.qk.hi());
        for n in k.lo()..=top {
            let (_, _, map) = homology_map(&cr.map, n);
            assert!(map.is_objectwise_isomorphism(), "seed {seed} degree {n}");
        }
        for n in cr.qk.lo()..=cr.qk.hi() {
            let comps = certify_semi_representable(&site, &cr.qk.level(n))
                .expect("levels are semi-representable");
            let recorded = cr
                .level_components
                .iter()
                .find(|(m, _)| *m == n)
                .map(|(_, c)| c.len())
                .unwrap_or(0);
            assert_eq!(comps.len(), recorded, "seed {seed} degree {n}");
        }
        let from_zero = ComplexMorphism::zero(
            Complex::zero(site.clone(), ring),
            cr.qk.clone(),
        );
        assert!(certify_cofibration(&site, &from_zero).is_certified(), "seed {seed}");
    }
}

#[test]
fn certify_accepts_zero_into_a_representable() {
    let site = Arc::new(chain_site());
    let ring = Ring::integers();
    let k = s0(&site, &ModPresheaf::representable(site.category(), ring, ObjId(2)));
    let f = ComplexMorphism::zero(Complex::zero(site.clone(), ring), k);
    match certify_cofibration(&site, &f) {
        CofibrationVerdict::Certified(cert) => {
            assert_eq!(cert.cokernel_components[0].1, vec![ObjId(2)]);
        }
        CofibrationVerdict::Refused(why) => panic!("refused: {why}"),
    }
}

#[test]
fn certify_accepts_sphere_into_disk() {
    let site = Arc::new(arrow_site());
    let ring = Ring::prime_field(2).expect("prime");
    let f = generator_morphism(&site, ring, GeneratorMorphismKind::SphereToDisk, 1, ObjId(0))
        .expect("generator morphism");
    assert!(certify_cofibration(&site, &f).is_certified());
}

#[test]
fn certify_refuses_a_non_injective_map() {
    let site = Arc::new(terminal_site());
    let ring = Ring::integers();
    let z = constant_presheaf(&site, ring);
    let z2 = constant_cyclic_presheaf(&site, ring, 2);
    let comp = ModuleMap::new(
        z.value(ObjId(0)).clone(),
        z2.value(ObjId(0)).clone(),
        Matrix::identity(ring, 1),
    )
    .expect("projection is well defined");
    let proj = ModPresheafMorphism::new(site.category(), &z, &z2, vec![comp])
        .expect("projection is natural");
    let f = ComplexMorphism::new(s0(&site, &z), s0(&site, &z2), 0, vec![proj])
        .expect("chain map");
    match certify_cofibration(&site, &f) {
        CofibrationVerdict::Refused(why) => assert!(why.contains("injective")),
        CofibrationVerdict::Certified(_) => panic!("non-injective map certified"),
    }
}

/// A diagram of degree-zero complexes with random values and maps.
fn random_degree_zero_diagram(site: &Site, ring: Ring, seed: u64) -> ComplexDiagram {
    use rand::Rng;
    let cat = site.category();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<FpModule> = cat
        .objects()
        .map(|_| FpModule::free(ring, rng.gen_range(1..=2)))
        .collect();
    let objects: Vec<Complex> = values
        .iter()
        .map(|m| module_complex(ring, 0, vec![m.clone()], Vec::new()).expect("level"))
        .collect();
    let tcat = TERMINAL_SITE.category();
    let mut maps: Vec<Option<ComplexMorphism>> = vec![None; cat.morphism_count()];
    for o in cat.objects() {
        maps[cat.identity(o).0] = Some(ComplexMorphism::identity(&objects[o.0]));
    }
    // Covering relations first, composites from them.
    let mut remaining: Vec<MorId> =
        cat.morphisms().filter(|&f| maps[f.0].is_none()).collect();
    while !remaining.is_empty() {
        remaining.retain(|&f| {
            let (a, b) = (cat.src(f), cat.dst(f));
            // If this arrow factors through a filled pair, compose; if it
            // has no proper factorization, draw it at random.
            let factor = cat.morphisms().find_map(|g| {
                if g == f || cat.src(g) != a || g == cat.identity(a) {
                    return None;
                }
                let mid = cat.dst(g);
                cat.hom(mid, b)
                    .into_iter()
                    .find(|&h| h != cat.identity(mid) && cat.compose(h, g) == f)
                    .map(|h| (g, h))
            });
            let built = match factor {
                Some((g, h)) => match (&maps[g.0], &maps[h.0]) {
                    (Some(mg), Some(mh)) => Some(mh.compose(mg)),
                    _ => None,
                },
                None => {
                    let mut m = Matrix::zero(
                        ring,
                        values[b.0].generators(),
                        values[a.0].generators(),
                    );
                    for i in 0..m.rows() {
                        for j in 0..m.cols() {
                            m.set(i, j, ring.from_i64(rng.gen_range(-2..=2)));
                        }
                    }
                    let map =
                        ModuleMap::new(values[a.0].clone(), values[b.0].clone(), m)
                            .expect("free modules accept any matrix");
                    let comp = ModPresheafMorphism::new(
                        tcat,
                        &objects[a.0].level(0),
                        &objects[b.0].level(0),
                        vec![map],
                    )
                    .expect("one-object morphism");
                    Some(
                        ComplexMorphism::new(
                            objects[a.0].clone(),
                            objects[b.0].clone(),
                            0,
                            vec![comp],
                        )
                        .expect("degree-zero chain map"),
                    )
                }
            };
            match built {
                Some(map) => {
                    maps[f.0] = Some(map);
                    false
                }
                None => true,
            }
        });
    }
    let morphisms = maps.into_iter().map(|m| m.expect("all arrows assigned")).collect();
    ComplexDiagram::new(cat, objects, morphisms).expect("diagram is functorial")
}

#[test]
fn kan_extension_recovers_diagram_values_on_representables() {
    for (site, seeds) in [
        (Arc::new(arrow_site()), 0..5u64),
        (Arc::new(chain_site()), 5..10u64),
    ] {
        let ring = Ring::integers();
        let cat = site.category();
        for seed in seeds {
            let gamma = random_degree_zero_diagram(&site, ring, seed);
            for c in cat.objects() {
                let k = s0(
                    &site,
                    &ModPresheaf::representable(cat, ring, c),
                );
                let extended = kan_extend(&gamma, &k);
                let expected = gamma.object(c);
                for n in expected.lo()..=expected.hi() {
                    assert!(
                        modules_isomorphic(
                            extended.level(n).value(ObjId(0)),
                            expected.level(n).value(ObjId(0)),
                        )
                        .expect("same ring"),
                        "seed {seed} object {:?} degree {n}",
                        cat.object_name(c)
                    );
                }
            }
        }
    }
}

#[test]
fn kan_extension_on_a_two_degree_diagram() {
    let site = Arc::new(arrow_site());
    let cat = site.category();
    let ring = Ring::integers();
    let za = module_complex(
        ring,
        0,
        vec![FpModule::free(ring, 1), FpModule::free(ring, 1)],
        vec![Matrix::from_i64(ring, &[&[2]])],
    )
    .expect("two-level complex");
    let zb = module_complex(ring, 0, vec![FpModule::cyclic(ring, 2)], Vec::new())
        .expect("one-level complex");
    let tcat = TERMINAL_SITE.category();
    let proj = ModuleMap::new(
        za.level(0).value(ObjId(0)).clone(),
        zb.level(0).value(ObjId(0)).clone(),
        Matrix::identity(ring, 1),
    )
    .expect("projection");
    let comp = ModPresheafMorphism::new(tcat, &za.level(0), &zb.level(0), vec![proj])
        .expect("one-object morphism");
    let f = ComplexMorphism::new(za.clone(), zb.clone(), 0, vec![comp]).expect("chain map");
    let mut morphisms = vec![
        ComplexMorphism::identity(&za),
        ComplexMorphism::identity(&zb),
    ];
    // Order morphism slots by id: identities first is not guaranteed, so
    // place by lookup.
    let mut slots: Vec<Option<ComplexMorphism>> = vec![None; cat.morphism_count()];
    slots[cat.identity(ObjId(0)).0] = Some(morphisms.remove(0));
    slots[cat.identity(ObjId(1)).0] = Some(morphisms.remove(0));
    slots[cat.morphism_by_name("a<=b").expect("arrow").0] = Some(f);
    let gamma = ComplexDiagram::new(
        cat,
        vec![za.clone(), zb],
        slots.into_iter().map(|s| s.expect("assigned")).collect(),
    )
    .expect("functorial diagram");
    let k = s0(&site, &ModPresheaf::representable(cat, ring, ObjId(0)));
    let extended = kan_extend(&gamma, &k);
    for n in 0..=1 {
        assert!(modules_isomorphic(
            extended.level(n).value(ObjId(0)),
            za.level(n).value(ObjId(0)),
        )
        .expect("same ring"));
    }
    assert_eq!(
        finsite::complex::homology_at(&extended, 0, ObjId(0)).invariants(),
        (0, vec![Ring::integers().from_i64(2)])
    );
}

#[test]
fn kan_extension_is_additive_and_kills_zero() {
    let site = Arc::new(arrow_site());
    let cat = site.category();
    let ring = Ring::integers();
    let gamma = random_degree_zero_diagram(&site, ring, 42);
    assert!(kan_extend(&gamma, &Complex::zero(site.clone(), ring)).is_zero_object());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let k1 = random_connective_complex(&site, ring, &mut rng, 1, 2);
    let k2 = random_connective_complex(&site, ring, &mut rng, 1, 2);
    let sum = kan_extend(&gamma, &k1.direct_sum(&k2));
    let parts = kan_extend(&gamma, &k1).direct_sum(&kan_extend(&gamma, &k2));
    let lo = sum.lo().min(parts.lo());
    let hi = sum.hi().max(parts.hi());
    for n in lo..=hi {
        assert!(modules_isomorphic(
            sum.level(n).value(ObjId(0)),
            parts.level(n).value(ObjId(0)),
        )
        .expect("same ring"));
        assert!(modules_isomorphic(
            &finsite::complex::homology_at(&sum, n, ObjId(0)),
            &finsite::complex::homology_at(&parts, n, ObjId(0)),
        )
        .expect("same ring"));
    }
}

#[test]
fn diagram_construction_rejects_non_functorial_assignments() {
    let site = Arc::new(arrow_site());
    let cat = site.category();
    let ring = Ring::integers();
    let m = module_complex(ring, 0, vec![FpModule::free(ring, 1)], Vec::new())
        .expect("level");
    let zero_id = ComplexMorphism::zero(m.clone(), m.clone());
    let mut slots: Vec<Option<ComplexMorphism>> = vec![None; cat.morphism_count()];
    slots[cat.identity(ObjId(0)).0] = Some(zero_id);
    slots[cat.identity(ObjId(1)).0] = Some(ComplexMorphism::identity(&m));
    slots[cat.morphism_by_name("a<=b").expect("arrow").0] =
        Some(ComplexMorphism::zero(m.clone(), m.clone()));
    let err = ComplexDiagram::new(
        cat,
        vec![m.clone(), m],
        slots.into_iter().map(|s| s.expect("assigned")).collect(),
    )
    .unwrap_err();
    assert!(matches!(err, Error::NotFunctorial(_)));
}
