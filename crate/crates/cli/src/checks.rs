//! Seeded self-check suites for the `check` subcommand.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use finsite::complex::{homology_map, ComplexMorphism};
use finsite::exactalg::{
    modules_isomorphic, smith_normal_form, FpModule, Matrix, Ring,
};
use finsite::fixtures::{arrow_site, obj, pseudocircle_site, random_connective_complex};
use finsite::godement::{hypercohomology, HypercohomologyMethod};
use finsite::hypercover::{cech_nerve, descent_check};
use finsite::resolve::{cofibrant_replace, ResolutionStrategy};
use finsite::site::{ModPresheaf, Site};

fn constant_complex(site: &Arc<Site>, ring: Ring) -> finsite::complex::Complex {
    let level = ModPresheaf::constant(site.category(), FpModule::free(ring, 1));
    finsite::complex::Complex::new(site.clone(), ring, 0, vec![level], vec![]).unwrap()
}

fn random_matrix<R: Rng>(ring: Ring, rng: &mut R) -> Matrix {
    let rows = rng.gen_range(1..=4);
    let cols = rng.gen_range(1..=4);
    let mut m = Matrix::zero(ring, rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, ring.from_i64(rng.gen_range(-5..=5)));
        }
    }
    m
}

fn smith_roundtrip(seed: u64) -> bool {
    let ring = Ring::integers();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..25 {
        let m = random_matrix(ring, &mut rng);
        let snf = smith_normal_form(&m);
        if &snf.u().mul(&m).mul(snf.v()) != snf.d() {
            return false;
        }
        let factors = snf.invariant_factors();
        for pair in factors.windows(2) {
            if !(&pair[1] / &pair[0]).is_integer() {
                return false;
            }
        }
    }
    true
}

fn descent_obstruction() -> bool {
    let site = Arc::new(pseudocircle_site());
    let cat = site.category();
    let x = obj(&site, "X").unwrap();
    let family = vec![
        cat.morphism_by_name("Ux<=X").unwrap(),
        cat.morphism_by_name("Uy<=X").unwrap(),
    ];
    let refined = match cech_nerve(&site, x, &family, 2, 1) {
        Ok(n) => n,
        Err(_) => return false,
    };
    let k = constant_complex(&site, Ring::integers());
    let report = match descent_check(&k, &refined) {
        Ok(r) => r,
        Err(_) => return false,
    };
    let obstructions = report.obstructions();
    match obstructions.as_slice() {
        [v] => {
            v.degree == -1
                && v.source.is_zero()
                && modules_isomorphic(&v.target, &FpModule::free(Ring::integers(), 1))
                    .unwrap_or(false)
        }
        _ => false,
    }
}

fn hypercohomology_agreement() -> bool {
    let site = Arc::new(pseudocircle_site());
    let x = obj(&site, "X").unwrap();
    let ring = Ring::integers();
    let k = constant_complex(&site, ring);
    let expected = [Some(1usize), Some(1), None];
    for (n, rank) in (0..3).zip(expected) {
        let a = match hypercohomology(&k, x, n, HypercohomologyMethod::Godement) {
            Ok(m) => m,
            Err(_) => return false,
        };
        let b = match hypercohomology(&k, x, n, HypercohomologyMethod::CechColimit) {
            Ok(m) => m,
            Err(_) => return false,
        };
        if !modules_isomorphic(&a, &b).unwrap_or(false) {
            return false;
        }
        let ok = match rank {
            Some(r) => modules_isomorphic(&a, &FpModule::free(ring, r)).unwrap_or(false),
            None => a.is_zero(),
        };
        if !ok {
            return false;
        }
    }
    true
}

fn cofibrant_replacement(seed: u64) -> bool {
    let site = Arc::new(arrow_site());
    let ring = Ring::prime_field(2).unwrap();
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..5 {
        let k = random_connective_complex(&site, ring, &mut rng, 2, 2);
        let rep = match cofibrant_replace(&k, 3, ResolutionStrategy::Economical) {
            Ok(r) => r,
            Err(_) => return false,
        };
        if !rep.map.is_degreewise_surjective() {
            return false;
        }
        let top = rep.valid_hi.min(k.hi().max(rep.qk.hi()));
        for n in k.lo()..=top {
            let (_, _, induced) = homology_map(&rep.map, n);
            if !induced.is_objectwise_isomorphism() {
                return false;
            }
        }
        let zero = finsite::complex::Complex::zero(site.clone(), ring);
        let incl = ComplexMorphism::zero(zero, rep.qk.clone());
        if !finsite::resolve::certify_cofibration(&site, &incl).is_certified() {
            return false;
        }
    }
    true
}

/// Runs every suite with the given seed; each entry is a suite name with
/// its verdict.
pub fn run_all(seed: u64) -> Vec<(String, bool)> {
    vec![
        ("smith-roundtrip".to_string(), smith_roundtrip(seed)),
        ("descent-obstruction".to_string(), descent_obstruction()),
        ("hypercohomology-agreement".to_string(), hypercohomology_agreement()),
        ("cofibrant-replacement".to_string(), cofibrant_replacement(seed)),
    ]
}
