//! Finite sites: categories with coverages, presheaves, sheafification,
//! generalized covers, points and stalks.

pub mod category;
pub mod point;
pub mod presheaf;
pub mod sheafify;
pub mod sieve;

pub use category::{FinCategory, MorId, ObjId};
pub use point::Point;
pub use presheaf::{
    presheaf_cokernel, presheaf_kernel, ModPresheaf, ModPresheafMorphism, SetPresheaf,
    SetPresheafMorphism,
};
pub use sieve::{
    minimal_covering_sieves, validate_site, Coverage, Sieve, ValidationReport,
};

use crate::error::Error;

/// A validated finite site: category, coverage, the minimal covering sieve
/// of every object, and the site's points.
#[derive(Clone, Debug)]
pub struct Site {
    category: FinCategory,
    coverage: Coverage,
    minimal: Vec<Sieve>,
    points: Vec<Point>,
}

impl Site {
    /// Validates the data and, for poset sites, derives the points: one per
    /// irreducible object (an object whose minimal covering sieve contains
    /// its identity, so no proper family refines it away).
    pub fn new(category: FinCategory, coverage: Coverage) -> Result<Self, Error> {
        sieve::require_valid(&category, &coverage)?;
        let minimal = minimal_covering_sieves(&category, &coverage);
        let points = if category.is_poset() {
            category
                .objects()
                .filter(|&c| minimal[c.0].contains(category.identity(c)))
                .map(|c| Point::new(category.object_name(c).to_string(), c))
                .collect()
        } else {
            Vec::new()
        };
        Ok(Site { category, coverage, minimal, points })
    }

    /// As [`Site::new`] but with explicitly declared points.
    pub fn with_points(
        category: FinCategory,
        coverage: Coverage,
        points: Vec<Point>,
    ) -> Result<Self, Error> {
        let mut site = Site::new(category, coverage)?;
        for p in &points {
            if p.object().0 >= site.category.object_count() {
                return Err(Error::UnknownPoint(p.name().to_string()));
            }
        }
        site.points = points;
        Ok(site)
    }

    pub fn category(&self) -> &FinCategory {
        &self.category
    }

    pub fn coverage(&self) -> &Coverage {
        &self.coverage
    }

    /// The minimal covering sieve of an object; a sieve covers iff it
    /// contains this one.
    pub fn minimal_sieve(&self, o: ObjId) -> &Sieve {
        &self.minimal[o.0]
    }

    pub fn is_covering_sieve(&self, s: &Sieve) -> bool {
        s.contains_sieve(&self.minimal[s.object().0])
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// The points lying in `c`: those whose minimal neighborhood maps
    /// into `c`.
    pub fn points_in(&self, c: ObjId) -> Vec<&Point> {
        self.points
            .iter()
            .filter(|p| !self.category.hom(p.object(), c).is_empty())
            .collect()
    }

    pub fn point_by_name(&self, name: &str) -> Result<&Point, Error> {
        self.points
            .iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }
}
