//! Bundled sites and presheaves used by tests, the property suites and the
//! command-line examples.

use std::sync::Arc;

use rand::Rng;

use crate::complex::{Complex, HomModule};
use crate::error::Error;
use crate::exactalg::{FpModule, Matrix, Ring};
use crate::site::{
    presheaf_kernel, Coverage, FinCategory, ModPresheaf, ModPresheafMorphism, Site,
};

/// The terminal site: one object, its identity, and the trivial coverage.
pub fn terminal_site() -> Site {
    let cat = FinCategory::poset(vec!["*".into()], &[]).expect("valid poset");
    let cov = Coverage::trivial(&cat);
    Site::new(cat, cov).expect("terminal site is valid")
}

/// The open-set site of the pseudocircle, the 4-point model of the circle
/// with points `a`, `b`, `x`, `y`.
///
/// Objects are the seven opens: `O` (empty), `A = {a}`, `B = {b}`,
/// `AB = {a,b}`, `Ux = {a,b,x}`, `Uy = {a,b,y}`, and `X` itself. Covers:
/// identities everywhere, `{Ux, Uy}` covers `X`, `{A, B}` covers `AB`, and
/// the empty family covers `O`.
pub fn pseudocircle_site() -> Site {
    let cat = FinCategory::poset(
        vec![
            "O".into(),
            "A".into(),
            "B".into(),
            "AB".into(),
            "Ux".into(),
            "Uy".into(),
            "X".into(),
        ],
        &[
            ("O", "A"),
            ("O", "B"),
            ("A", "AB"),
            ("B", "AB"),
            ("AB", "Ux"),
            ("AB", "Uy"),
            ("Ux", "X"),
            ("Uy", "X"),
        ],
    )
    .expect("valid poset");
    let mut cov = Coverage::trivial(&cat);
    let m = |name: &str| cat.morphism_by_name(name).expect("known morphism");
    let o = |name: &str| cat.object_by_name(name).expect("known object");
    cov.add_family(o("X"), vec![m("Ux<=X"), m("Uy<=X")]);
    cov.add_family(o("AB"), vec![m("A<=AB"), m("B<=AB")]);
    cov.add_family(o("O"), vec![]);
    Site::new(cat, cov).expect("pseudocircle site is valid")
}

/// A two-object site `a → b` with the trivial coverage, used for random
/// presheaf fixtures.
pub fn arrow_site() -> Site {
    let cat = FinCategory::poset(vec!["a".into(), "b".into()], &[("a", "b")])
        .expect("valid poset");
    let cov = Coverage::trivial(&cat);
    Site::new(cat, cov).expect("arrow site is valid")
}

/// A three-object chain `a → b → c` with the trivial coverage.
pub fn chain_site() -> Site {
    let cat = FinCategory::poset(
        vec!["a".into(), "b".into(), "c".into()],
        &[("a", "b"), ("b", "c")],
    )
    .expect("valid poset");
    let cov = Coverage::trivial(&cat);
    Site::new(cat, cov).expect("chain site is valid")
}

/// The constant presheaf `Λ` on a site.
pub fn constant_presheaf(site: &Site, ring: Ring) -> ModPresheaf {
    ModPresheaf::constant(site.category(), FpModule::free(ring, 1))
}

/// The constant presheaf `Λ/n` on a site.
pub fn constant_cyclic_presheaf(site: &Site, ring: Ring, n: i64) -> ModPresheaf {
    ModPresheaf::constant(site.category(), FpModule::cyclic(ring, n))
}

/// Convenience: look up an object id by name.
pub fn obj(site: &Site, name: &str) -> Result<crate::site::ObjId, Error> {
    site.category().object_by_name(name)
}

/// A random direct sum of representables with between 0 and `max_parts`
/// summands.
pub fn random_sum_of_representables<R: Rng>(
    site: &Site,
    ring: Ring,
    rng: &mut R,
    max_parts: usize,
) -> ModPresheaf {
    let cat = site.category();
    let parts = rng.gen_range(0..=max_parts);
    let mut acc = ModPresheaf::zero(cat, ring);
    for _ in 0..parts {
        let c = crate::site::ObjId(rng.gen_range(0..cat.object_count()));
        acc = acc.direct_sum(cat, &ModPresheaf::representable(cat, ring, c));
    }
    acc
}

/// A random natural map `source → target` with small hom-module
/// coordinates.
pub fn random_natural_map<R: Rng>(
    site: &Site,
    source: &ModPresheaf,
    target: &ModPresheaf,
    rng: &mut R,
) -> ModPresheafMorphism {
    let hom = HomModule::new(site, source, target);
    let g = hom.module.generators();
    let mut coords = Matrix::zero(source.ring(), g, 1);
    for i in 0..g {
        coords.set(i, 0, source.ring().from_i64(rng.gen_range(-2..=2)));
    }
    hom.from_coords(site, &coords)
}

/// A random bounded connective complex with levels that are direct sums of
/// representables; differentials are random natural maps forced through
/// kernels so that `d² = 0`.
pub fn random_connective_complex<R: Rng>(
    site: &Arc<Site>,
    ring: Ring,
    rng: &mut R,
    length: usize,
    max_parts: usize,
) -> Complex {
    let cat = site.category();
    let levels: Vec<ModPresheaf> = (0..=length)
        .map(|_| random_sum_of_representables(site, ring, rng, max_parts))
        .collect();
    let mut diffs: Vec<ModPresheafMorphism> = Vec::new();
    for n in 1..=length {
        let d = if n == 1 {
            random_natural_map(site, &levels[1], &levels[0], rng)
        } else {
            let (cycles, inclusion) = presheaf_kernel(cat, &levels[n - 1], &diffs[n - 2]);
            let g = random_natural_map(site, &levels[n], &cycles, rng);
            inclusion.compose(&g)
        };
        diffs.push(d);
    }
    Complex::new(site.clone(), ring, 0, levels, diffs)
        .expect("kernel-forced differentials square to zero")
}
