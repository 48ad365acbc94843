//! Bicomplexes of module presheaves and their totalizations.

use num::rational::BigRational;

use crate::error::Error;
use crate::exactalg::{ModuleMap, Matrix, Ring};
use crate::site::{FinCategory, ModPresheaf, ModPresheafMorphism};

use super::Complex;

/// The direct sum of several presheaves, with per-part per-object
/// generator offsets.
pub fn sum_with_offsets(
    cat: &FinCategory,
    ring: Ring,
    parts: &[&ModPresheaf],
) -> (ModPresheaf, Vec<Vec<usize>>) {
    let mut total = ModPresheaf::zero(cat, ring);
    let mut offsets = Vec::with_capacity(parts.len());
    for part in parts {
        offsets.push(cat.objects().map(|o| total.value(o).generators()).collect());
        total = total.direct_sum(cat, part);
    }
    (total, offsets)
}

/// Assembles a presheaf morphism between direct sums from blocks
/// `(target part, source part, map, scalar)`; overlapping blocks add.
pub fn block_morphism(
    cat: &FinCategory,
    ring: Ring,
    sources: &[&ModPresheaf],
    targets: &[&ModPresheaf],
    blocks: &[(usize, usize, &ModPresheafMorphism, BigRational)],
) -> (ModPresheaf, ModPresheaf, ModPresheafMorphism) {
    let (src_sum, src_off) = sum_with_offsets(cat, ring, sources);
    let (tgt_sum, tgt_off) = sum_with_offsets(cat, ring, targets);
    let components: Vec<ModuleMap> = cat
        .objects()
        .map(|o| {
            let mut m = Matrix::zero(
                ring,
                tgt_sum.value(o).generators(),
                src_sum.value(o).generators(),
            );
            for (ti, si, map, scalar) in blocks {
                let comp = map.component(o).matrix();
                let (r0, c0) = (tgt_off[*ti][o.0], src_off[*si][o.0]);
                for r in 0..comp.rows() {
                    for c in 0..comp.cols() {
                        let v = ring.add(
                            m.get(r0 + r, c0 + c),
                            &ring.mul(scalar, comp.get(r, c)),
                        );
                        m.set(r0 + r, c0 + c, v);
                    }
                }
            }
            ModuleMap::new(src_sum.value(o).clone(), tgt_sum.value(o).clone(), m)
                .expect("block morphism is well defined")
        })
        .collect();
    let morphism = ModPresheafMorphism::new(cat, &src_sum, &tgt_sum, components)
        .expect("block morphism is natural");
    (src_sum, tgt_sum, morphism)
}

/// A bounded bicomplex: a rectangular window of presheaf levels with
/// commuting horizontal and vertical differentials (Koszul signs are
/// introduced by the totalization).
#[derive(Clone, Debug)]
pub struct Bicomplex {
    site: std::sync::Arc<crate::site::Site>,
    ring: Ring,
    p_lo: i64,
    q_lo: i64,
    /// `levels[i][j]` is the level at `(p_lo + i, q_lo + j)`.
    levels: Vec<Vec<ModPresheaf>>,
    /// `horiz[i][j]: (p,q) → (p−1,q)` for `i ≥ 1` (stored at `i−1`).
    horiz: Vec<Vec<ModPresheafMorphism>>,
    /// `vert[i][j]: (p,q) → (p,q−1)` for `j ≥ 1` (stored at `j−1`).
    vert: Vec<Vec<ModPresheafMorphism>>,
}

impl Bicomplex {
    /// Builds a bicomplex, checking that rows and columns are complexes
    /// and that every square commutes.
    pub fn new(
        site: std::sync::Arc<crate::site::Site>,
        ring: Ring,
        p_lo: i64,
        q_lo: i64,
        levels: Vec<Vec<ModPresheaf>>,
        horiz: Vec<Vec<ModPresheafMorphism>>,
        vert: Vec<Vec<ModPresheafMorphism>>,
    ) -> Result<Self, Error> {
        let b = Bicomplex { site, ring, p_lo, q_lo, levels, horiz, vert };
        let (np, nq) = b.extent();
        for i in 2..np {
            for j in 0..nq {
                if !b.h(i - 1, j).compose(&b.h(i, j)).is_zero_map() {
                    return Err(Error::CompositionNonzero(format!(
                        "horizontal d² ≠ 0 at ({i}, {j})"
                    )));
                }
            }
        }
        for i in 0..np {
            for j in 2..nq {
                if !b.v(i, j - 1).compose(&b.v(i, j)).is_zero_map() {
                    return Err(Error::CompositionNonzero(format!(
                        "vertical d² ≠ 0 at ({i}, {j})"
                    )));
                }
            }
        }
        for i in 1..np {
            for j in 1..nq {
                let a = b.v(i - 1, j).compose(&b.h(i, j));
                let c = b.h(i, j - 1).compose(&b.v(i, j));
                if !a.equals(&c) {
                    return Err(Error::NonCommutingSquare(format!(
                        "bicomplex square at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(b)
    }

    fn extent(&self) -> (usize, usize) {
        let np = self.levels.len();
        let nq = if np == 0 { 0 } else { self.levels[0].len() };
        (np, nq)
    }

    fn h(&self, i: usize, j: usize) -> &ModPresheafMorphism {
        &self.horiz[i - 1][j]
    }

    fn v(&self, i: usize, j: usize) -> &ModPresheafMorphism {
        &self.vert[j - 1][i]
    }

    pub fn level(&self, i: usize, j: usize) -> &ModPresheaf {
        &self.levels[i][j]
    }

    /// The total complex with `D = d_h + (−1)^p d_v` on the summand at
    /// horizontal degree `p`. On a bounded window the sum and product
    /// totalizations coincide; both entry points are provided.
    pub fn tot(&self) -> Complex {
        let cat = self.site.category();
        let (np, nq) = self.extent();
        if np == 0 || nq == 0 {
            return Complex::zero(self.site.clone(), self.ring);
        }
        let lo = self.p_lo + self.q_lo;
        let hi = self.p_lo + np as i64 - 1 + self.q_lo + nq as i64 - 1;
        // Summands on each antidiagonal, in increasing p.
        let diag: Vec<Vec<(usize, usize)>> = (lo..=hi)
            .map(|n| {
                (0..np)
                    .filter_map(|i| {
                        let q = n - (self.p_lo + i as i64) - self.q_lo;
                        if q >= 0 && (q as usize) < nq {
                            Some((i, q as usize))
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect();
        let mut sums = Vec::new();
        let mut diffs = Vec::new();
        for n in lo..=hi {
            let idx = (n - lo) as usize;
            let parts: Vec<&ModPresheaf> =
                diag[idx].iter().map(|&(i, j)| self.level(i, j)).collect();
            if n == lo {
                sums.push(sum_with_offsets(cat, self.ring, &parts).0);
                continue;
            }
            let prev: Vec<&ModPresheaf> =
                diag[idx - 1].iter().map(|&(i, j)| self.level(i, j)).collect();
            let mut blocks: Vec<(usize, usize, &ModPresheafMorphism, BigRational)> =
                Vec::new();
            for (s, &(i, j)) in diag[idx].iter().enumerate() {
                if i >= 1 {
                    let t = diag[idx - 1]
                        .iter()
                        .position(|&(a, b)| (a, b) == (i - 1, j))
                        .expect("horizontal target on previous antidiagonal");
                    blocks.push((t, s, self.h(i, j), self.ring.one()));
                }
                if j >= 1 {
                    let t = diag[idx - 1]
                        .iter()
                        .position(|&(a, b)| (a, b) == (i, j - 1))
                        .expect("vertical target on previous antidiagonal");
                    let p = self.p_lo + i as i64;
                    let sign = if p.rem_euclid(2) == 0 {
                        self.ring.one()
                    } else {
                        self.ring.from_i64(-1)
                    };
                    blocks.push((t, s, self.v(i, j), sign));
                }
            }
            let (src, _tgt, d) = block_morphism(cat, self.ring, &parts, &prev, &blocks);
            sums.push(src);
            diffs.push(d);
        }
        Complex::new(self.site.clone(), self.ring, lo, sums, diffs)
            .expect("totalization squares to zero")
    }
}

/// Sum totalization of a bounded bicomplex.
pub fn tot_sum(b: &Bicomplex) -> Complex {
    b.tot()
}

/// Product totalization; identical to the sum on a bounded window. Callers
/// tracking an unbounded direction must restrict attention to the validity
/// range they compute from their window arithmetic.
pub fn tot_prod(b: &Bicomplex) -> Complex {
    b.tot()
}
