//! Exact linear algebra over the coefficient rings `Z`, `Q` and `F_p`:
//! Smith normal form, linear solving, and finitely presented modules.

pub mod matrix;
pub mod module;
pub mod ring;
pub mod smith;

pub use matrix::Matrix;
pub use module::{
    homology_of_pair, induced_map, modules_isomorphic, FpModule, Homology, ModuleMap,
};
pub use ring::{Ring, RingKind};
pub use smith::{kernel_basis, smith_normal_form, solve, SmithForm};
