//! Right-lifting-property solver: finds a diagonal filler for a commuting
//! square of complex morphisms, or certifies that none exists, by solving
//! one exact linear system over `Λ`.

use std::collections::BTreeMap;

use num::rational::BigRational;
use num::Zero;

use crate::error::Error;
use crate::exactalg::{solve, Matrix, ModuleMap, Ring};
use crate::site::ModPresheafMorphism;

use super::ComplexMorphism;

/// A commuting square
///
/// ```text
///   A ──u──▶ X
///   │        │
///   i        f
///   ▼        ▼
///   B ──v──▶ Y
/// ```
pub struct LiftSquare<'a> {
    pub i: &'a ComplexMorphism,
    pub f: &'a ComplexMorphism,
    pub u: &'a ComplexMorphism,
    pub v: &'a ComplexMorphism,
}

/// Incrementally built sparse linear system over a ring.
struct System {
    ring: Ring,
    ncols: usize,
    rows: Vec<BTreeMap<usize, BigRational>>,
    rhs: Vec<BigRational>,
}

impl System {
    fn new(ring: Ring) -> Self {
        System { ring, ncols: 0, rows: Vec::new(), rhs: Vec::new() }
    }

    fn new_vars(&mut self, count: usize) -> usize {
        let base = self.ncols;
        self.ncols += count;
        base
    }

    fn new_row(&mut self, rhs: BigRational) -> usize {
        self.rows.push(BTreeMap::new());
        self.rhs.push(rhs);
        self.rows.len() - 1
    }

    fn add(&mut self, row: usize, col: usize, val: &BigRational) {
        if val.is_zero() {
            return;
        }
        let ring = self.ring;
        let entry = self.rows[row].entry(col).or_insert_with(|| ring.zero());
        *entry = ring.add(entry, val);
    }

    fn solve(&self) -> Option<Matrix> {
        let mut a = Matrix::zero(self.ring, self.rows.len(), self.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            for (&c, v) in row {
                a.set(r, c, v.clone());
            }
        }
        let mut b = Matrix::zero(self.ring, self.rows.len(), 1);
        for (r, v) in self.rhs.iter().enumerate() {
            b.set(r, 0, v.clone());
        }
        solve(&a, &b)
    }
}

/// Allocates `rows · cols` congruence equations together with the slack
/// variables absorbing the given relation matrix; the caller fills in the
/// unknown-variable coefficients and right-hand sides afterwards.
fn congruence_rows(
    sys: &mut System,
    rows: usize,
    cols: usize,
    relations: &Matrix,
) -> (usize, usize) {
    // Returns (first equation row, slack base). One equation per entry.
    let first = sys.rows.len();
    for _ in 0..rows * cols {
        sys.new_row(BigRational::zero());
    }
    let slack = sys.new_vars(relations.cols() * cols);
    // relations · S subtracted from each column of the congruence.
    for j in 0..cols {
        for i in 0..rows {
            let row = first + j * rows + i;
            for m in 0..relations.cols() {
                let v = sys.ring.neg(relations.get(i, m));
                sys.add(row, slack + m * cols + j, &v);
            }
        }
    }
    (first, slack)
}

/// Attempts to find a diagonal lift for the square. Returns
/// `Ok(Some(h))` with a verified lift, `Ok(None)` when the linear system
/// has no solution, or an error when the square does not commute.
pub fn rlp_solve(square: &LiftSquare<'_>) -> Result<Option<ComplexMorphism>, Error> {
    let LiftSquare { i, f, u, v } = square;
    let b = i.target();
    let x = f.source();
    let site = b.site().clone();
    let cat = site.category();
    let ring = b.ring();
    // The square must commute: f ∘ u = v ∘ i.
    let lo = i.source().lo().min(b.lo()).min(x.lo()).min(f.target().lo()) - 1;
    let hi = i.source().hi().max(b.hi()).max(x.hi()).max(f.target().hi()) + 1;
    for n in lo..=hi {
        let left = f.component(n).compose(&u.component(n));
        let right = v.component(n).compose(&i.component(n));
        if !left.equals(&right) {
            return Err(Error::NonCommutingSquare(format!("lift square at degree {n}")));
        }
    }

    let deg_lo = b.lo().min(x.lo());
    let deg_hi = b.hi().max(x.hi());
    let mut sys = System::new(ring);
    // Unknown h_n(c) blocks, row-major.
    let mut var_base: BTreeMap<(i64, usize), usize> = BTreeMap::new();
    for n in deg_lo..=deg_hi {
        for c in cat.objects() {
            let rows = x.level(n).value(c).generators();
            let cols = b.level(n).value(c).generators();
            let base = sys.new_vars(rows * cols);
            var_base.insert((n, c.0), base);
        }
    }
    let h_var = |vb: &BTreeMap<(i64, usize), usize>, n: i64, c: usize, i_: usize, j: usize, cols: usize| {
        vb[&(n, c)] + i_ * cols + j
    };

    for n in deg_lo..=deg_hi {
        for c in cat.objects() {
            let xm = x.level(n).value(c).clone();
            let bm = b.level(n).value(c).clone();
            let (gx, gb) = (xm.generators(), bm.generators());
            // (1) Well-definedness: h · R_B ≡ 0 (mod R_X).
            let rb = bm.relations();
            let (row0, _) = congruence_rows(&mut sys, gx, rb.cols(), xm.relations());
            for j in 0..rb.cols() {
                for r in 0..gx {
                    for k in 0..gb {
                        let col = h_var(&var_base, n, c.0, r, k, gb);
                        let coeff = rb.get(k, j).clone();
                        sys.add(row0 + j * gx + r, col, &coeff);
                    }
                }
            }
            // (3) h ∘ i ≡ u (mod R_X).
            let im = i.component(n).component(c).matrix().clone();
            let um = u.component(n).component(c).matrix().clone();
            let (row0, _) = congruence_rows(&mut sys, gx, im.cols(), xm.relations());
            for j in 0..im.cols() {
                for r in 0..gx {
                    for k in 0..gb {
                        let col = h_var(&var_base, n, c.0, r, k, gb);
                        let coeff = im.get(k, j).clone();
                        sys.add(row0 + j * gx + r, col, &coeff);
                    }
                    sys.rhs[row0 + j * gx + r] = um.get(r, j).clone();
                }
            }
            // (4) f ∘ h ≡ v (mod R_Y).
            let ym = f.target().level(n).value(c).clone();
            let fm = f.component(n).component(c).matrix().clone();
            let vm = v.component(n).component(c).matrix().clone();
            let gy = ym.generators();
            let (row0, _) = congruence_rows(&mut sys, gy, gb, ym.relations());
            for j in 0..gb {
                for r in 0..gy {
                    for k in 0..gx {
                        let col = h_var(&var_base, n, c.0, k, j, gb);
                        let coeff = fm.get(r, k).clone();
                        sys.add(row0 + j * gy + r, col, &coeff);
                    }
                    sys.rhs[row0 + j * gy + r] = vm.get(r, j).clone();
                }
            }
            // (5) chain compatibility: d_X ∘ h_n − h_{n−1} ∘ d_B ≡ 0.
            let x_lower = x.level(n - 1).value(c).clone();
            let gx1 = x_lower.generators();
            let dx = x.differential(n).component(c).matrix().clone();
            let db = b.differential(n).component(c).matrix().clone();
            let gb1 = b.level(n - 1).value(c).generators();
            let (row0, _) = congruence_rows(&mut sys, gx1, gb, x_lower.relations());
            for j in 0..gb {
                for r in 0..gx1 {
                    for k in 0..gx {
                        let col = h_var(&var_base, n, c.0, k, j, gb);
                        sys.add(row0 + j * gx1 + r, col, dx.get(r, k));
                    }
                    if n - 1 >= deg_lo {
                        for k in 0..gb1 {
                            let col = h_var(&var_base, n - 1, c.0, r, k, gb1);
                            let coeff = ring.neg(db.get(k, j));
                            sys.add(row0 + j * gx1 + r, col, &coeff);
                        }
                    }
                }
            }
        }
        // (2) Naturality of h_n along each site morphism.
        for m in cat.morphisms() {
            let (a_o, b_o) = (cat.src(m), cat.dst(m));
            let xa = x.level(n).value(a_o).clone();
            let gxa = xa.generators();
            let gxb = x.level(n).value(b_o).generators();
            let gba = b.level(n).value(a_o).generators();
            let gbb = b.level(n).value(b_o).generators();
            let bres = b.level(n).restriction(m).matrix().clone();
            let xres = x.level(n).restriction(m).matrix().clone();
            let (row0, _) = congruence_rows(&mut sys, gxa, gbb, xa.relations());
            for j in 0..gbb {
                for r in 0..gxa {
                    // h_n(a) ∘ B(m): coefficient on h_n(a)[r][k] is B(m)[k][j].
                    for k in 0..gba {
                        let col = h_var(&var_base, n, a_o.0, r, k, gba);
                        sys.add(row0 + j * gxa + r, col, bres.get(k, j));
                    }
                    // −X(m) ∘ h_n(b): coefficient on h_n(b)[k][j] is −X(m)[r][k].
                    for k in 0..gxb {
                        let col = h_var(&var_base, n, b_o.0, k, j, gbb);
                        let coeff = ring.neg(xres.get(r, k));
                        sys.add(row0 + j * gxa + r, col, &coeff);
                    }
                }
            }
        }
    }

    let Some(sol) = sys.solve() else { return Ok(None) };
    // Extract the lift and re-verify it through the checked constructors.
    let mut components = Vec::new();
    for n in deg_lo..=deg_hi {
        let src = b.level(n);
        let tgt = x.level(n);
        let comps: Vec<ModuleMap> = cat
            .objects()
            .map(|c| {
                let (gx, gb) = (tgt.value(c).generators(), src.value(c).generators());
                let mut m = Matrix::zero(ring, gx, gb);
                for r in 0..gx {
                    for j in 0..gb {
                        m.set(r, j, sol.get(h_var(&var_base, n, c.0, r, j, gb), 0).clone());
                    }
                }
                ModuleMap::new(src.value(c).clone(), tgt.value(c).clone(), m)
                    .expect("solved lift is well defined")
            })
            .collect();
        components.push(
            ModPresheafMorphism::new(cat, &src, &tgt, comps)
                .expect("solved lift is natural"),
        );
    }
    let h = ComplexMorphism::new((*b).clone(), (*x).clone(), deg_lo, components)?;
    Ok(Some(h))
}
