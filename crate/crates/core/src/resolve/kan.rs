//! Left Kan extension along the Yoneda embedding: a diagram of complexes
//! of `Λ`-modules is extended to presheaf complexes by degreewise coends.

use crate::complex::{tot_sum, Bicomplex, Complex, ComplexMorphism, TERMINAL_SITE};
use crate::error::Error;
use crate::exactalg::{FpModule, Matrix, ModuleMap, Ring};
use crate::site::{FinCategory, ModPresheaf, ModPresheafMorphism, ObjId};

/// A functor from the site's category to bounded complexes of plain
/// `Λ`-modules, with functoriality checked at construction.
#[derive(Clone, Debug)]
pub struct ComplexDiagram {
    objects: Vec<Complex>,
    morphisms: Vec<ComplexMorphism>,
}

impl ComplexDiagram {
    /// Builds a diagram: one complex per object, one chain map per
    /// morphism (`f: a → b` is assigned a map `γ(a) → γ(b)`). Identities
    /// and composites are verified.
    pub fn new(
        cat: &FinCategory,
        objects: Vec<Complex>,
        morphisms: Vec<ComplexMorphism>,
    ) -> Result<Self, Error> {
        assert_eq!(objects.len(), cat.object_count());
        assert_eq!(morphisms.len(), cat.morphism_count());
        for k in &objects {
            assert_eq!(
                k.site().category().object_count(),
                1,
                "diagram values must be complexes of plain modules"
            );
        }
        let d = ComplexDiagram { objects, morphisms };
        for o in cat.objects() {
            let id = &d.morphisms[cat.identity(o).0];
            if !chain_maps_agree(id, &ComplexMorphism::identity(&d.objects[o.0])) {
                return Err(Error::NotFunctorial(format!(
                    "identity of {:?} is not assigned the identity map",
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
                let composite = d.morphisms[g.0].compose(&d.morphisms[f.0]);
                if !chain_maps_agree(&composite, &d.morphisms[gf.0]) {
                    return Err(Error::NotFunctorial(format!(
                        "assignment along {} ∘ {} differs from the composite",
                        cat.morphism_name(g),
                        cat.morphism_name(f)
                    )));
                }
            }
        }
        Ok(d)
    }

    pub fn object(&self, o: ObjId) -> &Complex {
        &self.objects[o.0]
    }

    pub fn morphism(&self, f: crate::site::MorId) -> &ComplexMorphism {
        &self.morphisms[f.0]
    }
}

fn chain_maps_agree(a: &ComplexMorphism, b: &ComplexMorphism) -> bool {
    let lo = a.source().lo().min(b.source().lo()).min(a.target().lo());
    let hi = a.source().hi().max(b.source().hi()).max(a.target().hi());
    (lo..=hi).all(|n| a.component(n).equals(&b.component(n)))
}

/// One coend cell: the coequalizer at a fixed bidegree.
struct CoendCell {
    module: FpModule,
    proj: ModuleMap,
    /// A section of `proj` on generators: cokernel coordinates back to the
    /// object-indexed sum.
    section: Matrix,
}

/// The left Kan extension `γ_*(K)`: the degreewise coend
/// `⊕_c K_q(c) ⊗ γ(c)_r` modulo the morphism relations, totalized over
/// `(q, r)`.
pub fn kan_extend(gamma: &ComplexDiagram, k: &Complex) -> Complex {
    let cat = k.site().category();
    let ring = k.ring();
    let term = TERMINAL_SITE.clone();
    let tobj = ObjId(0);
    let windows: Vec<(i64, i64)> = cat
        .objects()
        .map(|c| (gamma.object(c).lo(), gamma.object(c).hi()))
        .collect();
    let r_lo = windows.iter().filter(|(lo, hi)| lo <= hi).map(|&(lo, _)| lo).min();
    let r_hi = windows.iter().filter(|(lo, hi)| lo <= hi).map(|&(_, hi)| hi).max();
    let (Some(r_lo), Some(r_hi)) = (r_lo, r_hi) else {
        return Complex::zero(term, ring);
    };
    if k.lo() > k.hi() {
        return Complex::zero(term, ring);
    }
    let cells: Vec<Vec<CoendCell>> = (k.lo()..=k.hi())
        .map(|q| {
            (r_lo..=r_hi).map(|r| coend_cell(cat, ring, gamma, k, q, r)).collect()
        })
        .collect();
    let levels: Vec<Vec<ModPresheaf>> = cells
        .iter()
        .map(|row| row.iter().map(|c| wrap_module(ring, &c.module)).collect())
        .collect();
    let np = cells.len();
    let nq = cells[0].len();
    let horiz: Vec<Vec<ModPresheafMorphism>> = (1..np)
        .map(|i| {
            let q = k.lo() + i as i64;
            (0..nq)
                .map(|j| {
                    let big = block_diag_over_objects(cat, ring, |c| {
                        kron(
                            ring,
                            k.differential(q).component(c).matrix(),
                            &identity_of(ring, gamma.object(c).level(r_lo + j as i64).value(tobj)),
                        )
                    });
                    descend(
                        &cells[i][j],
                        &cells[i - 1][j],
                        &big,
                        &levels[i][j],
                        &levels[i - 1][j],
                    )
                })
                .collect()
        })
        .collect();
    let vert: Vec<Vec<ModPresheafMorphism>> = (1..nq)
        .map(|j| {
            let r = r_lo + j as i64;
            (0..np)
                .map(|i| {
                    let q = k.lo() + i as i64;
                    let big = block_diag_over_objects(cat, ring, |c| {
                        kron(
                            ring,
                            &identity_of(ring, k.level(q).value(c)),
                            gamma.object(c).differential(r).component(tobj).matrix(),
                        )
                    });
                    descend(
                        &cells[i][j],
                        &cells[i][j - 1],
                        &big,
                        &levels[i][j],
                        &levels[i][j - 1],
                    )
                })
                .collect()
        })
        .collect();
    let bicomplex = Bicomplex::new(term, ring, k.lo(), r_lo, levels, horiz, vert)
        .expect("coend differentials commute and square to zero");
    tot_sum(&bicomplex)
}

/// The coequalizer of `⊕_{f: a→b non-id} K_q(b)⊗γ(a)_r ⇉ ⊕_c K_q(c)⊗γ(c)_r`.
fn coend_cell(
    cat: &FinCategory,
    ring: Ring,
    gamma: &ComplexDiagram,
    k: &Complex,
    q: i64,
    r: i64,
) -> CoendCell {
    let tobj = ObjId(0);
    let mut total = FpModule::zero(ring);
    let mut offsets = Vec::with_capacity(cat.object_count());
    let tensors: Vec<FpModule> = cat
        .objects()
        .map(|c| k.level(q).value(c).tensor(gamma.object(c).level(r).value(tobj)))
        .collect();
    for t in &tensors {
        offsets.push(total.generators());
        total = total.direct_sum(t);
    }
    let mut source = FpModule::zero(ring);
    let mut cols: Vec<Matrix> = Vec::new();
    let kq = k.level(q);
    for f in cat.morphisms() {
        let (a, b) = (cat.src(f), cat.dst(f));
        if f == cat.identity(a) {
            continue;
        }
        let kb = kq.value(b);
        let ga_level = gamma.object(a).level(r);
        let ga = ga_level.value(tobj);
        let block_src = kb.tensor(ga);
        // α: restrict the complex side, landing in the source-object block.
        let alpha = kron(ring, kq.restriction(f).matrix(), &identity_of(ring, ga));
        // β: push the diagram side forward, landing in the target-object
        // block.
        let beta = kron(
            ring,
            &identity_of(ring, kb),
            gamma.morphism(f).component(r).component(tobj).matrix(),
        );
        for col in 0..block_src.generators() {
            let mut v = Matrix::zero(ring, total.generators(), 1);
            for row in 0..alpha.rows() {
                v.set(offsets[a.0] + row, 0, alpha.get(row, col).clone());
            }
            for row in 0..beta.rows() {
                let cur = v.get(offsets[b.0] + row, 0).clone();
                v.set(offsets[b.0] + row, 0, ring.sub(&cur, beta.get(row, col)));
            }
            cols.push(v);
        }
        source = source.direct_sum(&block_src);
    }
    let m = Matrix::from_columns(ring, total.generators(), &cols);
    let relation_map = ModuleMap::new(source, total.clone(), m)
        .expect("coend relations are well defined");
    let (module, proj) = relation_map.cokernel();
    let section = proj
        .preimage(&Matrix::identity(ring, module.generators()))
        .expect("cokernel projection is surjective");
    CoendCell { module, proj, section }
}

/// Carries a map between object-indexed sums down to the coequalizers.
fn descend(
    src: &CoendCell,
    tgt: &CoendCell,
    big: &Matrix,
    src_level: &ModPresheaf,
    tgt_level: &ModPresheaf,
) -> ModPresheafMorphism {
    let matrix = tgt.proj.matrix().mul(big).mul(&src.section);
    let map = ModuleMap::new(src.module.clone(), tgt.module.clone(), matrix)
        .expect("induced coend map is well defined");
    wrap_map(src_level, tgt_level, map)
}

fn block_diag_over_objects<F>(cat: &FinCategory, ring: Ring, mut block: F) -> Matrix
where
    F: FnMut(ObjId) -> Matrix,
{
    let mut acc = Matrix::zero(ring, 0, 0);
    for c in cat.objects() {
        acc = acc.block_diag(&block(c));
    }
    acc
}

fn identity_of(ring: Ring, m: &FpModule) -> Matrix {
    Matrix::identity(ring, m.generators())
}

/// The Kronecker product matching the generator order of `FpModule::tensor`
/// (first factor major).
fn kron(ring: Ring, a: &Matrix, b: &Matrix) -> Matrix {
    let mut m = Matrix::zero(ring, a.rows() * b.rows(), a.cols() * b.cols());
    for i1 in 0..a.rows() {
        for j1 in 0..a.cols() {
            let x = a.get(i1, j1);
            for i2 in 0..b.rows() {
                for j2 in 0..b.cols() {
                    m.set(
                        i1 * b.rows() + i2,
                        j1 * b.cols() + j2,
                        ring.mul(x, b.get(i2, j2)),
                    );
                }
            }
        }
    }
    m
}

fn wrap_module(ring: Ring, m: &FpModule) -> ModPresheaf {
    let tcat = TERMINAL_SITE.category();
    ModPresheaf::new(tcat, ring, vec![m.clone()], vec![ModuleMap::identity(m.clone())])
        .expect("one-object presheaf is functorial")
}

fn wrap_map(src: &ModPresheaf, tgt: &ModPresheaf, map: ModuleMap) -> ModPresheafMorphism {
    let tcat = TERMINAL_SITE.category();
    ModPresheafMorphism::new(tcat, src, tgt, vec![map])
        .expect("one-object morphism is natural")
}
