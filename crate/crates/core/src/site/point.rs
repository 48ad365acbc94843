//! Points of a site and stalks of presheaves.

use crate::error::Error;
use crate::exactalg::{FpModule, ModuleMap};

use super::category::ObjId;
use super::presheaf::ModPresheaf;
use super::Site;

/// A point of the site, recorded by its minimal neighborhood object. The
/// stalk of a presheaf at the point is its value there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    name: String,
    object: ObjId,
}

impl Point {
    pub fn new(name: String, object: ObjId) -> Self {
        Point { name, object }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The minimal neighborhood: the object whose value is the stalk.
    pub fn object(&self) -> ObjId {
        self.object
    }
}

impl Site {
    /// The stalk of a module presheaf at a point.
    pub fn stalk(&self, f: &ModPresheaf, p: &Point) -> Result<FpModule, Error> {
        self.require_point(p)?;
        Ok(f.value(p.object()).clone())
    }

    /// The germ map `F(c) → stalk_p(F)` for a point lying in `c`.
    pub fn germ(&self, f: &ModPresheaf, p: &Point, c: ObjId) -> Result<ModuleMap, Error> {
        self.require_point(p)?;
        let homs = self.category().hom(p.object(), c);
        match homs.as_slice() {
            [m] => Ok(f.restriction(*m).clone()),
            [] => Err(Error::UnknownPoint(format!(
                "point {} does not lie in {}",
                p.name(),
                self.category().object_name(c)
            ))),
            _ => Err(Error::UnknownPoint(format!(
                "point {} has ambiguous germ maps into {}",
                p.name(),
                self.category().object_name(c)
            ))),
        }
    }

    fn require_point(&self, p: &Point) -> Result<(), Error> {
        if self.points().iter().any(|q| q == p) {
            Ok(())
        } else {
            Err(Error::UnknownPoint(p.name().to_string()))
        }
    }
}
