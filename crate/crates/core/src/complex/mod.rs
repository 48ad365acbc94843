//! Bounded chain complexes of module presheaves: construction, morphisms,
//! shifts, good truncation, homology, totalizations, the dg hom complex,
//! generators, and the lifting-property solver.

pub mod bicomplex;
pub mod generators;
pub mod hom;
pub mod homology;
pub mod rlp;

pub use bicomplex::{block_morphism, sum_with_offsets, tot_prod, tot_sum, Bicomplex};
pub use hom::{dghom, HomModule};
pub use homology::{
    all_degrees_pass, homology, homology_at, homology_map, homology_sheaf,
    is_local_equivalence, is_quasi_iso, HomologyPresheaf,
};
pub use rlp::{rlp_solve, LiftSquare};

use std::sync::Arc;

use once_cell::sync::Lazy;

use crate::error::Error;
use crate::exactalg::Ring;
use crate::site::{
    presheaf_kernel, ModPresheaf, ModPresheafMorphism, ObjId, Site,
};

/// The one-object site used to treat plain complexes of `Λ`-modules as
/// presheaf complexes.
pub static TERMINAL_SITE: Lazy<Arc<Site>> =
    Lazy::new(|| Arc::new(crate::fixtures::terminal_site()));

/// A bounded chain complex of module presheaves. Differentials decrease
/// the degree; levels outside the window `[lo, hi]` are zero.
#[derive(Clone, Debug)]
pub struct Complex {
    site: Arc<Site>,
    ring: Ring,
    lo: i64,
    /// Level `lo + i` of the complex.
    levels: Vec<ModPresheaf>,
    /// `diffs[i]: K_{lo+1+i} → K_{lo+i}`.
    diffs: Vec<ModPresheafMorphism>,
}

impl Complex {
    /// Builds a complex and checks `d ∘ d = 0`.
    pub fn new(
        site: Arc<Site>,
        ring: Ring,
        lo: i64,
        levels: Vec<ModPresheaf>,
        diffs: Vec<ModPresheafMorphism>,
    ) -> Result<Self, Error> {
        if !levels.is_empty() {
            assert_eq!(diffs.len(), levels.len() - 1, "differential count mismatch");
        } else {
            assert!(diffs.is_empty());
        }
        let k = Complex { site, ring, lo, levels, diffs };
        for n in k.lo + 2..=k.hi() {
            let square = k.differential(n - 1).compose(&k.differential(n));
            if !square.is_zero_map() {
                return Err(Error::CompositionNonzero(format!("d∘d ≠ 0 at degree {n}")));
            }
        }
        Ok(k)
    }

    /// The zero complex (empty window).
    pub fn zero(site: Arc<Site>, ring: Ring) -> Self {
        Complex { site, ring, lo: 0, levels: Vec::new(), diffs: Vec::new() }
    }

    pub fn site(&self) -> &Arc<Site> {
        &self.site
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.levels.len() as i64 - 1
    }

    pub fn is_zero_object(&self) -> bool {
        self.levels.iter().all(ModPresheaf::is_zero)
    }

    /// The level at degree `n` (zero presheaf outside the window).
    pub fn level(&self, n: i64) -> ModPresheaf {
        if n < self.lo || n > self.hi() {
            ModPresheaf::zero(self.site.category(), self.ring)
        } else {
            self.levels[(n - self.lo) as usize].clone()
        }
    }

    /// The differential `K_n → K_{n−1}` (zero map outside the window).
    pub fn differential(&self, n: i64) -> ModPresheafMorphism {
        let i = n - self.lo;
        if i >= 1 && (i as usize) < self.levels.len() {
            self.diffs[(i - 1) as usize].clone()
        } else {
            ModPresheafMorphism::zero(&self.level(n), &self.level(n - 1))
        }
    }

    /// The shifted complex `K[p]` with `(K[p])_n = K_{p+n}` and the
    /// differential rescaled by `(−1)^p`.
    pub fn shift(&self, p: i64) -> Complex {
        let sign = if p.rem_euclid(2) == 0 { self.ring.one() } else { self.ring.from_i64(-1) };
        Complex {
            site: self.site.clone(),
            ring: self.ring,
            lo: self.lo - p,
            levels: self.levels.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(&sign)).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Complex) -> Complex {
        assert_eq!(self.ring, other.ring);
        if self.levels.is_empty() {
            return other.clone();
        }
        if other.levels.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let cat = self.site.category();
        let levels: Vec<ModPresheaf> =
            (lo..=hi).map(|n| self.level(n).direct_sum(cat, &other.level(n))).collect();
        let diffs: Vec<ModPresheafMorphism> = (lo + 1..=hi)
            .map(|n| self.differential(n).direct_sum(&other.differential(n)))
            .collect();
        Complex { site: self.site.clone(), ring: self.ring, lo, levels, diffs }
    }

    /// Good truncation `τ≥n`: degrees above `n` unchanged, cycles at `n`,
    /// zero below. Homology is preserved in degrees ≥ `n`.
    pub fn truncate_above(&self, n: i64) -> Complex {
        if n > self.hi() {
            return Complex::zero(self.site.clone(), self.ring);
        }
        if n <= self.lo {
            return self.clone();
        }
        let cat = self.site.category();
        // Cycles at n: kernel of d_n.
        let level_n = self.level(n);
        let d_n = self.differential(n);
        let (cycles, inclusion) = presheaf_kernel(cat, &level_n, &d_n);
        let mut levels = vec![cycles.clone()];
        let mut diffs = Vec::new();
        // d_{n+1} factors through the cycles.
        if n + 1 <= self.hi() {
            let above = self.level(n + 1);
            let d = self.differential(n + 1);
            let components = cat
                .objects()
                .map(|o| {
                    let lifted = inclusion
                        .component(o)
                        .preimage(d.component(o).matrix())
                        .expect("boundaries are cycles");
                    crate::exactalg::ModuleMap::new(
                        above.value(o).clone(),
                        cycles.value(o).clone(),
                        lifted,
                    )
                    .expect("factored differential is well defined")
                })
                .collect();
            let factored = ModPresheafMorphism::new(cat, &above, &cycles, components)
                .expect("factored differential is natural");
            diffs.push(factored);
            levels.push(above);
            for m in n + 2..=self.hi() {
                diffs.push(self.differential(m));
                levels.push(self.level(m));
            }
        }
        Complex { site: self.site.clone(), ring: self.ring, lo: n, levels, diffs }
    }

    /// Evaluation at an object: the complex of modules `K(c)` (a complex
    /// on the terminal site).
    pub fn at_object(&self, c: ObjId) -> Complex {
        let term = TERMINAL_SITE.clone();
        let tcat = term.category();
        let levels: Vec<ModPresheaf> = (self.lo..=self.hi())
            .map(|n| {
                let value = self.level(n).value(c).clone();
                ModPresheaf::new(
                    tcat,
                    self.ring,
                    vec![value.clone()],
                    vec![crate::exactalg::ModuleMap::identity(value)],
                )
                .expect("one-object presheaf is functorial")
            })
            .collect();
        let diffs: Vec<ModPresheafMorphism> = (self.lo + 1..=self.hi())
            .map(|n| {
                let src = &levels[(n - self.lo) as usize];
                let tgt = &levels[(n - 1 - self.lo) as usize];
                let comp = self.differential(n).component(c).clone();
                ModPresheafMorphism::new(tcat, src, tgt, vec![comp])
                    .expect("evaluation differential is natural")
            })
            .collect();
        Complex { site: term, ring: self.ring, lo: self.lo, levels, diffs }
    }
}

/// Builds a complex of plain `Λ`-modules (on the terminal site) from
/// module levels and differential matrices.
pub fn module_complex(
    ring: Ring,
    lo: i64,
    levels: Vec<crate::exactalg::FpModule>,
    diff_matrices: Vec<crate::exactalg::Matrix>,
) -> Result<Complex, Error> {
    let site = TERMINAL_SITE.clone();
    let cat = site.category();
    let presheaves: Vec<ModPresheaf> = levels
        .iter()
        .map(|m| {
            ModPresheaf::new(
                cat,
                ring,
                vec![m.clone()],
                vec![crate::exactalg::ModuleMap::identity(m.clone())],
            )
            .expect("one-object presheaf is functorial")
        })
        .collect();
    let mut diffs = Vec::new();
    for (i, mat) in diff_matrices.into_iter().enumerate() {
        let map = crate::exactalg::ModuleMap::new(
            levels[i + 1].clone(),
            levels[i].clone(),
            mat,
        )?;
        diffs.push(
            ModPresheafMorphism::new(cat, &presheaves[i + 1], &presheaves[i], vec![map])
                .expect("module complex differential is natural"),
        );
    }
    Complex::new(site, ring, lo, presheaves, diffs)
}

/// A chain map between bounded complexes, commuting with differentials.
#[derive(Clone, Debug)]
pub struct ComplexMorphism {
    source: Complex,
    target: Complex,
    lo: i64,
    /// Component at degree `lo + i`.
    components: Vec<ModPresheafMorphism>,
}

impl ComplexMorphism {
    pub fn new(
        source: Complex,
        target: Complex,
        lo: i64,
        components: Vec<ModPresheafMorphism>,
    ) -> Result<Self, Error> {
        let f = ComplexMorphism { source, target, lo, components };
        let from = f.source.lo().min(f.target.lo());
        let to = f.source.hi().max(f.target.hi());
        for n in from..=to {
            let left = f.target.differential(n).compose(&f.component(n));
            let right = f.component(n - 1).compose(&f.source.differential(n));
            if !left.equals(&right) {
                return Err(Error::NonCommutingSquare(format!(
                    "chain map does not commute with d at degree {n}"
                )));
            }
        }
        Ok(f)
    }

    pub fn zero(source: Complex, target: Complex) -> Self {
        ComplexMorphism { source, target, lo: 0, components: Vec::new() }
    }

    pub fn identity(k: &Complex) -> Self {
        let components =
            (k.lo()..=k.hi()).map(|n| ModPresheafMorphism::identity(&k.level(n))).collect();
        ComplexMorphism {
            source: k.clone(),
            target: k.clone(),
            lo: k.lo(),
            components,
        }
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    /// The component at degree `n` (zero map outside the stored range).
    pub fn component(&self, n: i64) -> ModPresheafMorphism {
        let i = n - self.lo;
        if i >= 0 && (i as usize) < self.components.len() {
            self.components[i as usize].clone()
        } else {
            ModPresheafMorphism::zero(&self.source.level(n), &self.target.level(n))
        }
    }

    pub fn compose(&self, other: &ComplexMorphism) -> ComplexMorphism {
        let lo = self.source.lo().min(other.source.lo());
        let hi = self.source.hi().max(other.source.hi());
        let components =
            (lo..=hi).map(|n| self.component(n).compose(&other.component(n))).collect();
        ComplexMorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            lo,
            components,
        }
    }

    pub fn is_degreewise_surjective(&self) -> bool {
        let lo = self.target.lo();
        let hi = self.target.hi();
        (lo..=hi).all(|n| self.component(n).is_objectwise_surjective())
    }

    pub fn is_degreewise_injective(&self) -> bool {
        let lo = self.source.lo();
        let hi = self.source.hi();
        (lo..=hi).all(|n| self.component(n).is_objectwise_injective())
    }
}
