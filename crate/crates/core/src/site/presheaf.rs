//! Set- and module-valued presheaves on a finite category, with
//! functoriality checked at construction.

use crate::error::Error;
use crate::exactalg::{FpModule, Matrix, ModuleMap, Ring};

use super::category::{FinCategory, MorId, ObjId};

/// A finite-set-valued presheaf: value sets per object, restriction maps
/// per morphism (contravariant: `f: a → b` restricts `F(b) → F(a)`).
#[derive(Clone, Debug)]
pub struct SetPresheaf {
    /// Element names per object.
    values: Vec<Vec<String>>,
    /// For morphism `f: a → b`, `restrictions[f][i]` is the index in
    /// `F(a)` of the restriction of the `i`-th element of `F(b)`.
    restrictions: Vec<Vec<usize>>,
}

impl SetPresheaf {
    pub fn new(
        cat: &FinCategory,
        values: Vec<Vec<String>>,
        restrictions: Vec<Vec<usize>>,
    ) -> Result<Self, Error> {
        assert_eq!(values.len(), cat.object_count());
        assert_eq!(restrictions.len(), cat.morphism_count());
        let f = SetPresheaf { values, restrictions };
        f.check_functorial(cat)?;
        Ok(f)
    }

    fn check_functorial(&self, cat: &FinCategory) -> Result<(), Error> {
        for m in cat.morphisms() {
            let (a, b) = (cat.src(m), cat.dst(m));
            let r = &self.restrictions[m.0];
            if r.len() != self.values[b.0].len() {
                return Err(Error::NotFunctorial(format!(
                    "restriction along {} has wrong domain size",
                    cat.morphism_name(m)
                )));
            }
            if r.iter().any(|&i| i >= self.values[a.0].len()) {
                return Err(Error::NotFunctorial(format!(
                    "restriction along {} exits the value set",
                    cat.morphism_name(m)
                )));
            }
        }
        for o in cat.objects() {
            let id = cat.identity(o);
            for (i, &ri) in self.restrictions[id.0].iter().enumerate() {
                if ri != i {
                    return Err(Error::NotFunctorial(format!(
                        "identity of {:?} does not act as identity",
                        cat.object_name(o)
                    )));
                }
            }
        }
        for f in cat.morphisms() {
            for g in cat.morphisms() {
                if !cat.composable(g, f) {
                    continue;
                }
                let gf = cat.compose(g, f);
                let n = self.values[cat.dst(g).0].len();
                for i in 0..n {
                    let via = self.restrictions[f.0][self.restrictions[g.0][i]];
                    if via != self.restrictions[gf.0][i] {
                        return Err(Error::NotFunctorial(format!(
                            "restriction along {} ∘ {} differs from the composite",
                            cat.morphism_name(g),
                            cat.morphism_name(f)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The representable presheaf `y(c)`: `d ↦ Hom(d, c)`.
    pub fn representable(cat: &FinCategory, c: ObjId) -> Self {
        let homs: Vec<Vec<MorId>> = cat.objects().map(|d| cat.hom(d, c)).collect();
        let values = homs
            .iter()
            .map(|h| h.iter().map(|&m| cat.morphism_name(m).to_string()).collect())
            .collect();
        let restrictions = cat
            .morphisms()
            .map(|f| {
                let (a, b) = (cat.src(f), cat.dst(f));
                homs[b.0]
                    .iter()
                    .map(|&h| {
                        let composed = cat.compose(h, f);
                        homs[a.0].iter().position(|&x| x == composed).unwrap()
                    })
                    .collect()
            })
            .collect();
        SetPresheaf { values, restrictions }
    }

    /// The empty presheaf.
    pub fn empty(cat: &FinCategory) -> Self {
        SetPresheaf {
            values: vec![Vec::new(); cat.object_count()],
            restrictions: vec![Vec::new(); cat.morphism_count()],
        }
    }

    pub fn value(&self, o: ObjId) -> &[String] {
        &self.values[o.0]
    }

    pub fn size(&self, o: ObjId) -> usize {
        self.values[o.0].len()
    }

    /// Index in `F(src(f))` of the restriction of element `i ∈ F(dst(f))`.
    pub fn restrict(&self, f: MorId, i: usize) -> usize {
        self.restrictions[f.0][i]
    }

    /// Free `Λ`-linearization: the free module on each value set, with 0/1
    /// restriction matrices.
    pub fn linearize(&self, cat: &FinCategory, ring: Ring) -> ModPresheaf {
        let values: Vec<FpModule> =
            self.values.iter().map(|v| FpModule::free(ring, v.len())).collect();
        let restrictions = cat
            .morphisms()
            .map(|f| {
                let (a, b) = (cat.src(f), cat.dst(f));
                let mut m =
                    Matrix::zero(ring, self.values[a.0].len(), self.values[b.0].len());
                for (i, &ri) in self.restrictions[f.0].iter().enumerate() {
                    m.set(ri, i, ring.add(m.get(ri, i), &ring.one()));
                }
                ModuleMap::new(values[b.0].clone(), values[a.0].clone(), m)
                    .expect("free modules have no relations")
            })
            .collect();
        ModPresheaf { ring, values, restrictions }
    }
}

/// A morphism of set presheaves: per-object maps, natural in the site.
#[derive(Clone, Debug)]
pub struct SetPresheafMorphism {
    /// `components[c][i]` = index in `G(c)` of the image of the `i`-th
    /// element of `F(c)`.
    components: Vec<Vec<usize>>,
}

impl SetPresheafMorphism {
    pub fn new(
        cat: &FinCategory,
        source: &SetPresheaf,
        target: &SetPresheaf,
        components: Vec<Vec<usize>>,
    ) -> Result<Self, Error> {
        assert_eq!(components.len(), cat.object_count());
        for o in cat.objects() {
            if components[o.0].len() != source.size(o)
                || components[o.0].iter().any(|&i| i >= target.size(o))
            {
                return Err(Error::Shape(format!(
                    "component at {:?} has wrong shape",
                    cat.object_name(o)
                )));
            }
        }
        for f in cat.morphisms() {
            let (a, b) = (cat.src(f), cat.dst(f));
            for i in 0..source.size(b) {
                let down_then_map = components[a.0][source.restrict(f, i)];
                let map_then_down = target.restrict(f, components[b.0][i]);
                if down_then_map != map_then_down {
                    return Err(Error::NotFunctorial(format!(
                        "naturality fails along {}",
                        cat.morphism_name(f)
                    )));
                }
            }
        }
        Ok(SetPresheafMorphism { components })
    }

    pub fn apply(&self, o: ObjId, i: usize) -> usize {
        self.components[o.0][i]
    }

    pub fn component(&self, o: ObjId) -> &[usize] {
        &self.components[o.0]
    }
}

/// A presheaf of finitely presented `Λ`-modules.
#[derive(Clone, Debug)]
pub struct ModPresheaf {
    ring: Ring,
    values: Vec<FpModule>,
    /// For `f: a → b`, the restriction `F(b) → F(a)`.
    restrictions: Vec<ModuleMap>,
}

impl ModPresheaf {
    pub fn new(
        cat: &FinCategory,
        ring: Ring,
        values: Vec<FpModule>,
        restrictions: Vec<ModuleMap>,
    ) -> Result<Self, Error> {
        assert_eq!(values.len(), cat.object_count());
        assert_eq!(restrictions.len(), cat.morphism_count());
        let f = ModPresheaf { ring, values, restrictions };
        f.check_functorial(cat)?;
        Ok(f)
    }

    fn check_functorial(&self, cat: &FinCategory) -> Result<(), Error> {
        for m in cat.morphisms() {
            let (a, b) = (cat.src(m), cat.dst(m));
            let r = &self.restrictions[m.0];
            if r.source().generators() != self.values[b.0].generators()
                || r.target().generators() != self.values[a.0].generators()
            {
                return Err(Error::NotFunctorial(format!(
                    "restriction along {} has wrong shape",
                    cat.morphism_name(m)
                )));
            }
        }
        for o in cat.objects() {
            let id = cat.identity(o);
            if !self.restrictions[id.0]
                .equals(&ModuleMap::identity(self.values[o.0].clone()))
            {
                return Err(Error::NotFunctorial(format!(
                    "identity of {:?} does not restrict as identity",
                    cat.object_name(o)
                )));
            }
        }
        for f in cat.morphisms() {
            for g in cat.morphisms() {
                if !cat.composable(g, f) {
                    continue;
                }
                let gf = cat.compose(g, f);
                let composite = self.restrictions[f.0].compose(&self.restrictions[g.0]);
                if !composite.equals(&self.restrictions[gf.0]) {
                    return Err(Error::NotFunctorial(format!(
                        "restriction along {} ∘ {} differs from the composite",
                        cat.morphism_name(g),
                        cat.morphism_name(f)
                    )));
                }
            }
        }
        Ok(())
    }

    /// The zero presheaf.
    pub fn zero(cat: &FinCategory, ring: Ring) -> Self {
        let values: Vec<FpModule> =
            (0..cat.object_count()).map(|_| FpModule::zero(ring)).collect();
        let restrictions = cat
            .morphisms()
            .map(|f| {
                ModuleMap::zero(values[cat.dst(f).0].clone(), values[cat.src(f).0].clone())
            })
            .collect();
        ModPresheaf { ring, values, restrictions }
    }

    /// The constant presheaf with a fixed value module and identity
    /// restrictions.
    pub fn constant(cat: &FinCategory, value: FpModule) -> Self {
        let ring = value.ring();
        let values = vec![value; cat.object_count()];
        let restrictions = cat
            .morphisms()
            .map(|f| ModuleMap::identity(values[cat.src(f).0].clone()))
            .collect();
        ModPresheaf { ring, values, restrictions }
    }

    /// The free presheaf `Λ(c)` on the representable at `c`.
    pub fn representable(cat: &FinCategory, ring: Ring, c: ObjId) -> Self {
        SetPresheaf::representable(cat, c).linearize(cat, ring)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn value(&self, o: ObjId) -> &FpModule {
        &self.values[o.0]
    }

    pub fn restriction(&self, f: MorId) -> &ModuleMap {
        &self.restrictions[f.0]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(FpModule::is_zero)
    }

    pub fn direct_sum(&self, cat: &FinCategory, other: &ModPresheaf) -> ModPresheaf {
        assert_eq!(self.ring, other.ring);
        let values: Vec<FpModule> = cat
            .objects()
            .map(|o| self.values[o.0].direct_sum(&other.values[o.0]))
            .collect();
        let restrictions = cat
            .morphisms()
            .map(|f| self.restrictions[f.0].direct_sum(&other.restrictions[f.0]))
            .collect();
        ModPresheaf { ring: self.ring, values, restrictions }
    }
}

/// A morphism of module presheaves: a `ModuleMap` per object, natural in
/// the site (checked at construction).
#[derive(Clone, Debug)]
pub struct ModPresheafMorphism {
    components: Vec<ModuleMap>,
}

impl ModPresheafMorphism {
    pub fn new(
        cat: &FinCategory,
        source: &ModPresheaf,
        target: &ModPresheaf,
        components: Vec<ModuleMap>,
    ) -> Result<Self, Error> {
        assert_eq!(components.len(), cat.object_count());
        for o in cat.objects() {
            let c = &components[o.0];
            if c.source().generators() != source.value(o).generators()
                || c.target().generators() != target.value(o).generators()
            {
                return Err(Error::Shape(format!(
                    "component at {:?} has wrong shape",
                    cat.object_name(o)
                )));
            }
        }
        for f in cat.morphisms() {
            let (a, b) = (cat.src(f), cat.dst(f));
            let down_then_map = components[a.0].compose(source.restriction(f));
            let map_then_down = target.restriction(f).compose(&components[b.0]);
            if !down_then_map.equals(&map_then_down) {
                return Err(Error::NotFunctorial(format!(
                    "naturality fails along {}",
                    cat.morphism_name(f)
                )));
            }
        }
        Ok(ModPresheafMorphism { components })
    }

    pub fn zero(source: &ModPresheaf, target: &ModPresheaf) -> Self {
        let components = source
            .values
            .iter()
            .zip(&target.values)
            .map(|(s, t)| ModuleMap::zero(s.clone(), t.clone()))
            .collect();
        ModPresheafMorphism { components }
    }

    pub fn identity(f: &ModPresheaf) -> Self {
        ModPresheafMorphism {
            components: f.values.iter().map(|v| ModuleMap::identity(v.clone())).collect(),
        }
    }

    pub fn component(&self, o: ObjId) -> &ModuleMap {
        &self.components[o.0]
    }

    pub fn components(&self) -> &[ModuleMap] {
        &self.components
    }

    pub fn compose(&self, other: &ModPresheafMorphism) -> ModPresheafMorphism {
        ModPresheafMorphism {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(f, g)| f.compose(g))
                .collect(),
        }
    }

    pub fn add(&self, other: &ModPresheafMorphism) -> ModPresheafMorphism {
        ModPresheafMorphism {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(f, g)| f.add(g))
                .collect(),
        }
    }

    pub fn neg(&self) -> ModPresheafMorphism {
        ModPresheafMorphism {
            components: self.components.iter().map(ModuleMap::neg).collect(),
        }
    }

    pub fn direct_sum(&self, other: &ModPresheafMorphism) -> ModPresheafMorphism {
        ModPresheafMorphism {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(f, g)| f.direct_sum(g))
                .collect(),
        }
    }

    pub fn is_zero_map(&self) -> bool {
        self.components.iter().all(ModuleMap::is_zero_map)
    }

    pub fn equals(&self, other: &ModPresheafMorphism) -> bool {
        self.components
            .iter()
            .zip(&other.components)
            .all(|(f, g)| f.equals(g))
    }

    pub fn is_objectwise_isomorphism(&self) -> bool {
        self.components.iter().all(ModuleMap::is_isomorphism)
    }

    pub fn scale(&self, c: &num::rational::BigRational) -> ModPresheafMorphism {
        ModPresheafMorphism {
            components: self.components.iter().map(|m| m.scale(c)).collect(),
        }
    }

    pub fn is_objectwise_surjective(&self) -> bool {
        self.components.iter().all(ModuleMap::is_surjective)
    }

    pub fn is_objectwise_injective(&self) -> bool {
        self.components.iter().all(ModuleMap::is_injective)
    }
}

/// The kernel of a presheaf morphism, with its inclusion into the source.
///
/// Restriction maps are induced by lifting through the objectwise kernel
/// inclusions.
pub fn presheaf_kernel(
    cat: &FinCategory,
    source: &ModPresheaf,
    map: &ModPresheafMorphism,
) -> (ModPresheaf, ModPresheafMorphism) {
    let ring = source.ring();
    let object_kernels: Vec<(FpModule, ModuleMap)> =
        cat.objects().map(|o| map.component(o).kernel()).collect();
    let values: Vec<FpModule> = object_kernels.iter().map(|(k, _)| k.clone()).collect();
    let restrictions: Vec<ModuleMap> = cat
        .morphisms()
        .map(|f| {
            let (a, b) = (cat.src(f), cat.dst(f));
            let (_, incl_b) = &object_kernels[b.0];
            let (_, incl_a) = &object_kernels[a.0];
            let image = source.restriction(f).matrix().mul(incl_b.matrix());
            let lifted = incl_a
                .preimage(&image)
                .expect("restriction of a kernel element stays in the kernel");
            ModuleMap::new(values[b.0].clone(), values[a.0].clone(), lifted)
                .expect("kernel restriction is well defined")
        })
        .collect();
    let kernel = ModPresheaf::new(cat, ring, values, restrictions)
        .expect("kernel presheaf is functorial");
    let inclusion = ModPresheafMorphism {
        components: object_kernels.into_iter().map(|(_, i)| i).collect(),
    };
    (kernel, inclusion)
}

/// The cokernel of a presheaf morphism, with the projection from the
/// target.
pub fn presheaf_cokernel(
    cat: &FinCategory,
    target: &ModPresheaf,
    map: &ModPresheafMorphism,
) -> (ModPresheaf, ModPresheafMorphism) {
    let ring = target.ring();
    let object_cokernels: Vec<(FpModule, ModuleMap)> =
        cat.objects().map(|o| map.component(o).cokernel()).collect();
    let values: Vec<FpModule> = object_cokernels.iter().map(|(k, _)| k.clone()).collect();
    let restrictions: Vec<ModuleMap> = cat
        .morphisms()
        .map(|f| {
            let (a, b) = (cat.src(f), cat.dst(f));
            // Lift cokernel generators at the source object back to the
            // target, restrict, and project down again.  Any choice of lift
            // works because restrictions carry the image at `b` into the
            // image at `a`.
            let proj_a = &object_cokernels[a.0].1;
            let proj_b = &object_cokernels[b.0].1;
            let section = proj_b
                .preimage(&Matrix::identity(ring, values[b.0].generators()))
                .expect("cokernel projection is surjective");
            let matrix = proj_a
                .matrix()
                .mul(target.restriction(f).matrix())
                .mul(&section);
            ModuleMap::new(values[b.0].clone(), values[a.0].clone(), matrix)
                .expect("cokernel restriction is well defined")
        })
        .collect();
    let coker = ModPresheaf::new(cat, ring, values, restrictions)
        .expect("cokernel presheaf is functorial");
    let projection = ModPresheafMorphism {
        components: object_cokernels.into_iter().map(|(_, p)| p).collect(),
    };
    (coker, projection)
}
