//! The generating complexes `S^n Λ(c)`, `D^n Λ(c)`, `Δ^n Λ(c)`,
//! `∂Δ^n Λ(c)`, the generating morphism families, and the retract
//! presenting the sphere-to-disk inclusion through the simplex pair.

use std::sync::Arc;

use crate::error::Error;
use crate::exactalg::{Matrix, ModuleMap, Ring};
use crate::site::{ModPresheaf, ModPresheafMorphism, ObjId, Site};

use super::{Complex, ComplexMorphism};

/// The kind of a generating complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// `Λ(c)` in degree `n`.
    Sphere,
    /// `Λ(c)` in degrees `n` and `n−1`, identity differential.
    Disk,
    /// `Λ(c)` in degree `n`, `Λ(c)²` in degree `n−1`, differential
    /// `x ↦ (x, −x)`.
    Simplex,
    /// `Λ(c)²` concentrated in degree `n−1`.
    SimplexBoundary,
}

/// The kind of a generating morphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorMorphismKind {
    /// `S^{n−1}Λ(c) → D^nΛ(c)`, identity in degree `n−1`.
    SphereToDisk,
    /// `0 → D^nΛ(c)`.
    ZeroToDisk,
    /// `∂Δ^nΛ(c) → Δ^nΛ(c)`, identity in degree `n−1`.
    BoundaryToSimplex,
}

fn representable(site: &Arc<Site>, ring: Ring, c: ObjId) -> ModPresheaf {
    ModPresheaf::representable(site.category(), ring, c)
}

fn double(site: &Arc<Site>, ring: Ring, c: ObjId) -> ModPresheaf {
    let r = representable(site, ring, c);
    r.direct_sum(site.category(), &r)
}

/// Builds a generating complex at degree `n` and object `c`.
pub fn build_generator(
    site: &Arc<Site>,
    ring: Ring,
    kind: GeneratorKind,
    n: i64,
    c: ObjId,
) -> Result<Complex, Error> {
    let cat = site.category();
    if c.0 >= cat.object_count() {
        return Err(Error::UnknownObject(format!("#{}", c.0)));
    }
    let r = representable(site, ring, c);
    match kind {
        GeneratorKind::Sphere => {
            Complex::new(site.clone(), ring, n, vec![r], vec![])
        }
        GeneratorKind::Disk => {
            let d = ModPresheafMorphism::identity(&r);
            Complex::new(site.clone(), ring, n - 1, vec![r.clone(), r], vec![d])
        }
        GeneratorKind::Simplex => {
            let bottom = double(site, ring, c);
            // x ↦ (x, −x) objectwise.
            let components = cat
                .objects()
                .map(|o| {
                    let top = r.value(o).clone();
                    let g = top.generators();
                    let id = Matrix::identity(ring, g);
                    let m = id.vstack(&id.neg());
                    ModuleMap::new(top, bottom.value(o).clone(), m)
                        .expect("free modules accept any matrix")
                })
                .collect();
            let d = ModPresheafMorphism::new(cat, &r, &bottom, components)
                .expect("simplex differential is natural");
            Complex::new(site.clone(), ring, n - 1, vec![bottom, r], vec![d])
        }
        GeneratorKind::SimplexBoundary => {
            let bottom = double(site, ring, c);
            Complex::new(site.clone(), ring, n - 1, vec![bottom], vec![])
        }
    }
}

/// Builds a generating morphism at degree `n` and object `c`.
pub fn generator_morphism(
    site: &Arc<Site>,
    ring: Ring,
    kind: GeneratorMorphismKind,
    n: i64,
    c: ObjId,
) -> Result<ComplexMorphism, Error> {
    match kind {
        GeneratorMorphismKind::SphereToDisk => {
            let s = build_generator(site, ring, GeneratorKind::Sphere, n - 1, c)?;
            let d = build_generator(site, ring, GeneratorKind::Disk, n, c)?;
            let comp = ModPresheafMorphism::identity(&s.level(n - 1));
            ComplexMorphism::new(s, d, n - 1, vec![comp])
        }
        GeneratorMorphismKind::ZeroToDisk => {
            let d = build_generator(site, ring, GeneratorKind::Disk, n, c)?;
            let z = Complex::zero(site.clone(), ring);
            Ok(ComplexMorphism::zero(z, d))
        }
        GeneratorMorphismKind::BoundaryToSimplex => {
            let b = build_generator(site, ring, GeneratorKind::SimplexBoundary, n, c)?;
            let t = build_generator(site, ring, GeneratorKind::Simplex, n, c)?;
            let comp = ModPresheafMorphism::identity(&b.level(n - 1));
            ComplexMorphism::new(b, t, n - 1, vec![comp])
        }
    }
}

/// The retract diagram exhibiting `S^nΛ(c) → D^{n+1}Λ(c)` as a retract of
/// `∂Δ^{n+1}Λ(c) → Δ^{n+1}Λ(c)`:
///
/// ```text
///   S^n  ──in──▶ ∂Δ^{n+1} ──out──▶ S^n
///    │              │               │
///   i_disk      i_simplex         i_disk
///    ▼              ▼               ▼
/// D^{n+1} ──r──▶ Δ^{n+1}  ──s──▶ D^{n+1}
/// ```
///
/// Both row composites are identities and both squares commute.
pub struct RetractDiagram {
    pub sphere_to_disk: ComplexMorphism,
    pub boundary_to_simplex: ComplexMorphism,
    pub top_in: ComplexMorphism,
    pub top_out: ComplexMorphism,
    pub bottom_in: ComplexMorphism,
    pub bottom_out: ComplexMorphism,
}

/// Builds the retract diagram at degree `n+1` over object `c`.
pub fn sphere_disk_retract(
    site: &Arc<Site>,
    ring: Ring,
    n: i64,
    c: ObjId,
) -> Result<RetractDiagram, Error> {
    let cat = site.category();
    let sphere = build_generator(site, ring, GeneratorKind::Sphere, n, c)?;
    let disk = build_generator(site, ring, GeneratorKind::Disk, n + 1, c)?;
    let boundary = build_generator(site, ring, GeneratorKind::SimplexBoundary, n + 1, c)?;
    let simplex = build_generator(site, ring, GeneratorKind::Simplex, n + 1, c)?;

    let r = representable(site, ring, c);
    // (id, −id): one copy into the double.
    let diag = |target: &ModPresheaf| {
        let comps = cat
            .objects()
            .map(|o| {
                let g = r.value(o).generators();
                let m = Matrix::identity(ring, g).vstack(&Matrix::identity(ring, g).neg());
                ModuleMap::new(r.value(o).clone(), target.value(o).clone(), m)
                    .expect("free modules accept any matrix")
            })
            .collect();
        ModPresheafMorphism::new(cat, &r, target, comps).expect("diagonal is natural")
    };
    // First projection out of the double.
    let proj = |source: &ModPresheaf| {
        let comps = cat
            .objects()
            .map(|o| {
                let g = r.value(o).generators();
                let m = Matrix::identity(ring, g).hstack(&Matrix::zero(ring, g, g));
                ModuleMap::new(source.value(o).clone(), r.value(o).clone(), m)
                    .expect("free modules accept any matrix")
            })
            .collect();
        ModPresheafMorphism::new(cat, source, &r, comps).expect("projection is natural")
    };

    let sphere_to_disk =
        generator_morphism(site, ring, GeneratorMorphismKind::SphereToDisk, n + 1, c)?;
    let boundary_to_simplex =
        generator_morphism(site, ring, GeneratorMorphismKind::BoundaryToSimplex, n + 1, c)?;

    // Top row: S^n → ∂Δ^{n+1} by (id, −id), back by the first projection.
    let top_in = ComplexMorphism::new(
        sphere.clone(),
        boundary.clone(),
        n,
        vec![diag(&boundary.level(n))],
    )?;
    let top_out = ComplexMorphism::new(
        boundary.clone(),
        sphere.clone(),
        n,
        vec![proj(&boundary.level(n))],
    )?;
    // Bottom row: D^{n+1} → Δ^{n+1} is (id, −id) in degree n and the
    // identity in degree n+1; back by the first projection and identity.
    let bottom_in = ComplexMorphism::new(
        disk.clone(),
        simplex.clone(),
        n,
        vec![diag(&simplex.level(n)), ModPresheafMorphism::identity(&r)],
    )?;
    let bottom_out = ComplexMorphism::new(
        simplex.clone(),
        disk.clone(),
        n,
        vec![proj(&simplex.level(n)), ModPresheafMorphism::identity(&r)],
    )?;
    Ok(RetractDiagram {
        sphere_to_disk,
        boundary_to_simplex,
        top_in,
        top_out,
        bottom_in,
        bottom_out,
    })
}
