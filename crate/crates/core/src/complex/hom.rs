//! The module of presheaf morphisms `Hom(F, G)` as a finitely presented
//! module, and the dg hom complex of two presheaf complexes.

use num::rational::BigRational;
use num::Zero;

use crate::exactalg::{kernel_basis, solve, FpModule, Matrix, ModuleMap, Ring};
use crate::site::{ModPresheaf, ModPresheafMorphism, Site};

use super::{module_complex, Complex};

/// `Hom(F, G)` as a finitely presented `Λ`-module, with conversions
/// between coordinates and actual presheaf morphisms.
#[derive(Clone, Debug)]
pub struct HomModule {
    ring: Ring,
    source: ModPresheaf,
    target: ModPresheaf,
    /// Presentation of the hom module.
    pub module: FpModule,
    /// Columns are natural families in flattened matrix coordinates; one
    /// per generator of `module`.
    ngen: Matrix,
    /// Flattened generators of the "zero as a map" submodule.
    wgen: Matrix,
    /// Flattened-coordinate offset of each object's block.
    offsets: Vec<usize>,
}

impl HomModule {
    /// Computes the module of natural maps `F → G`.
    pub fn new(site: &Site, source: &ModPresheaf, target: &ModPresheaf) -> Self {
        let cat = site.category();
        let ring = source.ring();
        let gf: Vec<usize> = cat.objects().map(|o| source.value(o).generators()).collect();
        let gg: Vec<usize> = cat.objects().map(|o| target.value(o).generators()).collect();
        let mut offsets = Vec::with_capacity(cat.object_count());
        let mut dim = 0;
        for o in cat.objects() {
            offsets.push(dim);
            dim += gg[o.0] * gf[o.0];
        }
        // Unknowns: flattened components, then slack columns for each
        // congruence (well-definedness per object, naturality per morphism).
        let mut eq_rows = 0;
        for o in cat.objects() {
            eq_rows += gg[o.0] * source.value(o).relations().cols();
        }
        for f in cat.morphisms() {
            let (a, b) = (cat.src(f), cat.dst(f));
            eq_rows += gg[a.0] * gf[b.0];
        }
        let mut slack_cols = 0;
        for o in cat.objects() {
            slack_cols +=
                target.value(o).relations().cols() * source.value(o).relations().cols();
        }
        for f in cat.morphisms() {
            let a = cat.src(f);
            slack_cols += target.value(a).relations().cols() * gf[cat.dst(f).0];
        }
        let mut sys = Matrix::zero(ring, eq_rows, dim + slack_cols);
        let mut row = 0;
        let mut slack = dim;
        // Well-definedness at c: φ_c · R_F(c) − R_G(c) · S_c = 0.
        for o in cat.objects() {
            let rf = source.value(o).relations();
            let rg = target.value(o).relations();
            for col in 0..rf.cols() {
                for i in 0..gg[o.0] {
                    for k in 0..gf[o.0] {
                        sys.set(row, offsets[o.0] + i * gf[o.0] + k, rf.get(k, col).clone());
                    }
                    for m in 0..rg.cols() {
                        sys.set(row, slack + m * rf.cols() + col, ring.neg(rg.get(i, m)));
                    }
                    row += 1;
                }
            }
            slack += rg.cols() * rf.cols();
        }
        // Naturality along f: a → b: φ_a · F(f) − G(f) · φ_b − R_G(a) · T = 0.
        for f in cat.morphisms() {
            let (a, b) = (cat.src(f), cat.dst(f));
            let ff = source.restriction(f).matrix();
            let gf_mat = target.restriction(f).matrix();
            let rg = target.value(a).relations();
            for j in 0..gf[b.0] {
                for i in 0..gg[a.0] {
                    // φ_a coefficients: (φ_a F(f))[i][j] = Σ_k φ_a[i][k] F(f)[k][j]
                    for k in 0..gf[a.0] {
                        let v = ring.add(
                            sys.get(row, offsets[a.0] + i * gf[a.0] + k),
                            ff.get(k, j),
                        );
                        sys.set(row, offsets[a.0] + i * gf[a.0] + k, v);
                    }
                    // φ_b coefficients: −(G(f) φ_b)[i][j] = −Σ_k G(f)[i][k] φ_b[k][j]
                    for k in 0..gg[b.0] {
                        let v = ring.sub(
                            sys.get(row, offsets[b.0] + k * gf[b.0] + j),
                            gf_mat.get(i, k),
                        );
                        sys.set(row, offsets[b.0] + k * gf[b.0] + j, v);
                    }
                    for m in 0..rg.cols() {
                        sys.set(row, slack + m * gf[b.0] + j, ring.neg(rg.get(i, m)));
                    }
                    row += 1;
                }
            }
            slack += rg.cols() * gf[b.0];
        }
        debug_assert_eq!(row, eq_rows);
        debug_assert_eq!(slack, dim + slack_cols);
        let ngen = kernel_basis(&sys).top_rows(dim);
        // The submodule of maps that are zero: φ_c = R_G(c) · U_c.
        let mut wcols = Vec::new();
        for o in cat.objects() {
            let rg = target.value(o).relations();
            for r in 0..rg.cols() {
                for j in 0..gf[o.0] {
                    let mut col = Matrix::zero(ring, dim, 1);
                    for i in 0..gg[o.0] {
                        col.set(offsets[o.0] + i * gf[o.0] + j, 0, rg.get(i, r).clone());
                    }
                    wcols.push(col);
                }
            }
        }
        let wgen = Matrix::from_columns(ring, dim, &wcols);
        let relations =
            kernel_basis(&ngen.hstack(&wgen.neg())).top_rows(ngen.cols());
        let module = FpModule::new(ring, ngen.cols(), relations);
        HomModule {
            ring,
            source: source.clone(),
            target: target.clone(),
            module,
            ngen,
            wgen,
            offsets,
        }
    }

    /// The presheaf morphism with the given flattened coordinates.
    fn unflatten(&self, site: &Site, flat: &Matrix) -> ModPresheafMorphism {
        let cat = site.category();
        let components: Vec<ModuleMap> = cat
            .objects()
            .map(|o| {
                let (gs, gt) = (
                    self.source.value(o).generators(),
                    self.target.value(o).generators(),
                );
                let mut m = Matrix::zero(self.ring, gt, gs);
                for i in 0..gt {
                    for j in 0..gs {
                        m.set(i, j, flat.get(self.offsets[o.0] + i * gs + j, 0).clone());
                    }
                }
                ModuleMap::new(self.source.value(o).clone(), self.target.value(o).clone(), m)
                    .expect("natural family is well defined")
            })
            .collect();
        ModPresheafMorphism::new(cat, &self.source, &self.target, components)
            .expect("natural family is natural")
    }

    fn flatten(&self, map: &ModPresheafMorphism) -> Matrix {
        let dim = self.ngen.rows();
        let mut flat = Matrix::zero(self.ring, dim, 1);
        for (o, &off) in self.offsets.iter().enumerate() {
            let comp = map.components()[o].matrix();
            let gs = comp.cols();
            for i in 0..comp.rows() {
                for j in 0..gs {
                    flat.set(off + i * gs + j, 0, comp.get(i, j).clone());
                }
            }
        }
        flat
    }

    /// The generator morphisms of the hom module.
    pub fn generator_morphisms(&self, site: &Site) -> Vec<ModPresheafMorphism> {
        (0..self.ngen.cols())
            .map(|j| self.unflatten(site, &self.ngen.column(j)))
            .collect()
    }

    /// The morphism represented by module coordinates `a`.
    pub fn from_coords(&self, site: &Site, a: &Matrix) -> ModPresheafMorphism {
        self.unflatten(site, &self.ngen.mul(a))
    }

    /// Module coordinates of a morphism.
    pub fn express(&self, map: &ModPresheafMorphism) -> Option<Matrix> {
        let flat = self.flatten(map);
        let sol = solve(&self.ngen.hstack(&self.wgen), &flat)?;
        Some(sol.top_rows(self.ngen.cols()))
    }
}

/// The dg hom complex `dghom(K, K′)` as a complex of plain `Λ`-modules:
/// degree `n` is the product over `p` of `Hom(K_p, K′_{p+n})`, with the
/// Koszul differential.
pub fn dghom(k: &Complex, kp: &Complex) -> Complex {
    let site = k.site();
    let ring = k.ring();
    if k.is_zero_object() || kp.is_zero_object() {
        return Complex::zero(super::TERMINAL_SITE.clone(), ring);
    }
    let lo = kp.lo() - k.hi();
    let hi = kp.hi() - k.lo();
    // Hom modules per (degree n, source degree p).
    let homs: Vec<Vec<(i64, HomModule)>> = (lo..=hi)
        .map(|n| {
            (k.lo()..=k.hi())
                .filter(|p| p + n >= kp.lo() && p + n <= kp.hi())
                .map(|p| (p, HomModule::new(site, &k.level(p), &kp.level(p + n))))
                .collect()
        })
        .collect();
    let levels: Vec<FpModule> = homs
        .iter()
        .map(|row| {
            row.iter()
                .fold(FpModule::zero(ring), |acc, (_, h)| acc.direct_sum(&h.module))
        })
        .collect();
    let mut diffs = Vec::new();
    for n in lo + 1..=hi {
        let src_row = &homs[(n - lo) as usize];
        let tgt_row = &homs[(n - 1 - lo) as usize];
        let tgt_offsets: Vec<usize> = {
            let mut acc = 0;
            tgt_row
                .iter()
                .map(|(_, h)| {
                    let o = acc;
                    acc += h.module.generators();
                    o
                })
                .collect()
        };
        let rows: usize = tgt_row.iter().map(|(_, h)| h.module.generators()).sum();
        let cols: usize = src_row.iter().map(|(_, h)| h.module.generators()).sum();
        let mut d = Matrix::zero(ring, rows, cols);
        let sign: BigRational = if n.rem_euclid(2) == 0 { ring.one() } else { ring.from_i64(-1) };
        let mut col0 = 0;
        for (p, h) in src_row {
            for (g, gen) in h.generator_morphisms(site).iter().enumerate() {
                // Post-composition: d′_{p+n} ∘ φ lands in Hom(K_p, K′_{p+n−1}).
                let post = kp.differential(p + n).compose(gen);
                if let Some(t) = tgt_row.iter().position(|(q, _)| q == p) {
                    let coords = tgt_row[t]
                        .1
                        .express(&post)
                        .expect("composite of natural maps is natural");
                    add_block(&mut d, &coords, tgt_offsets[t], col0 + g, &ring, &ring.one());
                }
                // Pre-composition: −(−1)^n φ ∘ d_{p+1} lands in
                // Hom(K_{p+1}, K′_{p+n}).
                let pre = gen.compose(&k.differential(p + 1));
                if let Some(t) = tgt_row.iter().position(|(q, _)| *q == p + 1) {
                    let coords = tgt_row[t]
                        .1
                        .express(&pre)
                        .expect("composite of natural maps is natural");
                    let s = ring.neg(&sign);
                    add_block(&mut d, &coords, tgt_offsets[t], col0 + g, &ring, &s);
                }
            }
            col0 += h.module.generators();
        }
        diffs.push(d);
    }
    module_complex(ring, lo, levels, diffs).expect("dg hom differential squares to zero")
}

fn add_block(
    d: &mut Matrix,
    coords: &Matrix,
    row0: usize,
    col: usize,
    ring: &Ring,
    scalar: &BigRational,
) {
    if scalar.is_zero() {
        return;
    }
    for r in 0..coords.rows() {
        let v = ring.add(d.get(row0 + r, col), &ring.mul(scalar, coords.get(r, 0)));
        d.set(row0 + r, col, v);
    }
}
