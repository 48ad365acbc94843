//! Descent testing: compares `K(c)` with the product total complex of the
//! cosimplicial complex `K(c₀) → K(c₁) → …` attached to a hypercover.

use num::rational::BigRational;

use crate::complex::bicomplex::{block_morphism, sum_with_offsets, tot_prod};
use crate::complex::{homology_map, Bicomplex, Complex, ComplexMorphism, TERMINAL_SITE};
use crate::error::Error;
use crate::exactalg::{FpModule, Matrix, ModuleMap};
use crate::site::{ModPresheaf, ModPresheafMorphism, ObjId};

use super::Hypercover;

/// The comparison on `H_n` for one valid degree.
#[derive(Clone, Debug)]
pub struct DescentVerdict {
    pub degree: i64,
    pub is_isomorphism: bool,
    /// `H_n K(c)`.
    pub source: FpModule,
    /// `H_n` of the product total complex `K(c_•)`.
    pub target: FpModule,
}

/// Per-degree descent verdicts over the validity window
/// `hi(K) − N + 1 ≤ n ≤ hi(K)`.
#[derive(Clone, Debug)]
pub struct DescentReport {
    pub verdicts: Vec<DescentVerdict>,
}

impl DescentReport {
    pub fn passes(&self) -> bool {
        self.verdicts.iter().all(|v| v.is_isomorphism)
    }

    /// The verdicts at which the comparison fails.
    pub fn obstructions(&self) -> Vec<&DescentVerdict> {
        self.verdicts.iter().filter(|v| !v.is_isomorphism).collect()
    }
}

/// Wraps a module map as a presheaf morphism on the terminal site.
fn on_terminal(map: &ModuleMap) -> ModPresheafMorphism {
    let tcat = TERMINAL_SITE.category();
    let src = ModPresheaf::constant(tcat, map.source().clone());
    let tgt = ModPresheaf::constant(tcat, map.target().clone());
    ModPresheafMorphism::new(tcat, &src, &tgt, vec![map.clone()])
        .expect("one-object naturality is automatic")
}

/// Tests whether `K(c) → K(c_•)` is a quasi-isomorphism in every valid
/// degree, where `K(⊔ᵢdᵢ) := ∏ᵢK(dᵢ)` and `K(c_•)` is the product total
/// complex of the cosimplicial complex of the hypercover's levels.
pub fn descent_check(k: &Complex, x: &Hypercover) -> Result<DescentReport, Error> {
    let ring = k.ring();
    let tcat = TERMINAL_SITE.category();
    let obj = ObjId(0);
    let big_n = x.truncation();
    let (q_lo, q_hi) = (k.lo(), k.hi());
    let n_rows = (q_hi - q_lo + 1).max(0) as usize;
    // The evaluation ∏ᵢ K_deg(dᵢ) of chain level `deg` on hypercover level
    // `q`, as constant presheaves on the terminal site.
    let column_parts = |q: i64, deg: i64| -> Vec<ModPresheaf> {
        let lvl = k.level(deg);
        x.level(q)
            .components()
            .iter()
            .map(|&d| ModPresheaf::constant(tcat, lvl.value(d).clone()))
            .collect()
    };
    // Bicomplex window: horizontal p = −(cosimplicial degree) ∈ [−N, 0],
    // vertical = chain degree of K.
    let levels: Vec<Vec<ModPresheaf>> = (0..=big_n)
        .map(|i| {
            let q = big_n - i;
            (0..n_rows as i64)
                .map(|j| {
                    let parts = column_parts(q, q_lo + j);
                    let refs: Vec<&ModPresheaf> = parts.iter().collect();
                    sum_with_offsets(tcat, ring, &refs).0
                })
                .collect()
        })
        .collect();
    // Vertical differentials: blockwise K differentials on each column.
    let vert: Vec<Vec<ModPresheafMorphism>> = (1..n_rows as i64)
        .map(|j| {
            (0..=big_n)
                .map(|i| {
                    let q = big_n - i;
                    let deg = q_lo + j;
                    let d = k.differential(deg);
                    let blocks_owned: Vec<ModPresheafMorphism> = x
                        .level(q)
                        .components()
                        .iter()
                        .map(|&c| on_terminal(d.component(c)))
                        .collect();
                    let blocks: Vec<(usize, usize, &ModPresheafMorphism, BigRational)> =
                        blocks_owned
                            .iter()
                            .enumerate()
                            .map(|(s, m)| (s, s, m, ring.one()))
                            .collect();
                    let src = column_parts(q, deg);
                    let tgt = column_parts(q, deg - 1);
                    block_morphism(
                        tcat,
                        ring,
                        &src.iter().collect::<Vec<_>>(),
                        &tgt.iter().collect::<Vec<_>>(),
                        &blocks,
                    )
                    .2
                })
                .collect()
        })
        .collect();
    // Horizontal differentials: the alternating coface sum. The block from
    // source summand s to target summand t restricts K along the structure
    // morphism under which face i of t's generator lies in summand s.
    let cat = x.site().category();
    let horiz: Vec<Vec<ModPresheafMorphism>> = (1..=big_n)
        .map(|i| {
            let q = big_n - i;
            (0..n_rows as i64)
                .map(|j| {
                    let deg = q_lo + j;
                    let lvl = k.level(deg);
                    let upper = x.level(q + 1);
                    let lower = x.level(q);
                    let mut blocks_owned: Vec<(usize, usize, ModPresheafMorphism, BigRational)> =
                        Vec::new();
                    for t in 0..upper.components().len() {
                        let o_t = upper.components()[t];
                        let gen = upper.generator(cat, t);
                        for face in 0..=(q + 1) {
                            let img =
                                x.augmented().body.face(q + 1, face).apply(o_t, gen);
                            let (s, g) = lower.element(o_t, img);
                            let sign = if face % 2 == 0 {
                                ring.one()
                            } else {
                                ring.from_i64(-1)
                            };
                            blocks_owned.push((
                                t,
                                s,
                                on_terminal(lvl.restriction(g)),
                                sign,
                            ));
                        }
                    }
                    let blocks: Vec<(usize, usize, &ModPresheafMorphism, BigRational)> =
                        blocks_owned
                            .iter()
                            .map(|(t, s, m, sg)| (*t, *s, m, sg.clone()))
                            .collect();
                    let src = column_parts(q, deg);
                    let tgt = column_parts(q + 1, deg);
                    block_morphism(
                        tcat,
                        ring,
                        &src.iter().collect::<Vec<_>>(),
                        &tgt.iter().collect::<Vec<_>>(),
                        &blocks,
                    )
                    .2
                })
                .collect()
        })
        .collect();
    let bicomplex = Bicomplex::new(
        TERMINAL_SITE.clone(),
        ring,
        -big_n,
        q_lo,
        levels,
        horiz,
        vert,
    )?;
    let tot = tot_prod(&bicomplex);
    // Comparison K(c) → Tot: into the p = 0 block, which sits last on its
    // antidiagonal, by the product of restrictions along the augmentation.
    let kc = k.at_object(x.base_object());
    let components: Vec<ModPresheafMorphism> = (q_lo..=q_hi)
        .map(|deg| {
            let lvl = k.level(deg);
            let src = kc.level(deg);
            let tgt = tot.level(deg);
            let total = tgt.value(obj).generators();
            let p0_gens: usize = x
                .level(0)
                .components()
                .iter()
                .map(|&d| lvl.value(d).generators())
                .sum();
            let mut mat = Matrix::zero(ring, total, src.value(obj).generators());
            let mut row = total - p0_gens;
            for s in 0..x.level(0).components().len() {
                let o_s = x.level(0).components()[s];
                let gen = x.level(0).generator(cat, s);
                let base_elt = x.augmented().augmentation.apply(o_s, gen);
                let (_, m) = x.base().element(o_s, base_elt);
                let r = lvl.restriction(m).matrix();
                for rr in 0..r.rows() {
                    for cc in 0..r.cols() {
                        mat.set(row + rr, cc, r.get(rr, cc).clone());
                    }
                }
                row += r.rows();
            }
            let map = ModuleMap::new(src.value(obj).clone(), tgt.value(obj).clone(), mat)
                .expect("comparison respects relations");
            ModPresheafMorphism::new(tcat, &src, &tgt, vec![map])
                .expect("one-object naturality is automatic")
        })
        .collect();
    let comparison = ComplexMorphism::new(kc.clone(), tot.clone(), q_lo, components)?;
    let verdicts = ((q_hi - big_n + 1)..=q_hi)
        .map(|n| {
            let (hs, ht, map) = homology_map(&comparison, n);
            DescentVerdict {
                degree: n,
                is_isomorphism: map.component(obj).is_isomorphism(),
                source: hs.presheaf.value(obj).clone(),
                target: ht.presheaf.value(obj).clone(),
            }
        })
        .collect();
    Ok(DescentReport { verdicts })
}
