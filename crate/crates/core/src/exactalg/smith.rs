//! Smith normal form over the integers, rank normal form over fields,
//! and the linear solving / kernel machinery built on top of them.

use num::rational::BigRational;
use num::{One, Signed, Zero};

use super::matrix::Matrix;
use super::ring::{Ring, RingKind};
use crate::error::Error;

/// The decomposition `D = U · M · V` with `U`, `V` invertible over the ring
/// and `D` diagonal with the divisibility chain `d_1 | d_2 | …`.
///
/// Over a field all nonzero diagonal entries are `1` (rank normal form).
#[derive(Clone, Debug)]
pub struct SmithForm {
    ring: Ring,
    d: Matrix,
    u: Matrix,
    u_inv: Matrix,
    v: Matrix,
    rank: usize,
}

impl SmithForm {
    pub fn d(&self) -> &Matrix {
        &self.d
    }

    pub fn u(&self) -> &Matrix {
        &self.u
    }

    /// The inverse of `U`, tracked alongside the reduction.
    pub fn u_inv(&self) -> &Matrix {
        &self.u_inv
    }

    pub fn v(&self) -> &Matrix {
        &self.v
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The nonzero diagonal entries `d_1 | d_2 | …`.
    pub fn invariant_factors(&self) -> Vec<BigRational> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// The invariant factors that are not units, i.e. the torsion data.
    pub fn torsion_factors(&self) -> Vec<BigRational> {
        self.invariant_factors()
            .into_iter()
            .filter(|d| !d.is_one())
            .collect()
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }
}

/// Computes the Smith normal form of `m`.
///
/// Over `Z` this is the classical invariant-factor decomposition; over `Q`
/// and `F_p` the field path reduces to rank normal form (all invariant
/// factors `1`).
pub fn smith_normal_form(m: &Matrix) -> SmithForm {
    match m.ring().kind() {
        RingKind::Integers => integer_smith(m),
        RingKind::Rationals | RingKind::PrimeField => field_rank_form(m),
    }
}

/// The integer reduction path. Rejects matrices over `Q`, which must use
/// the rank-only field path instead.
pub fn integer_path(m: &Matrix) -> Result<SmithForm, Error> {
    match m.ring().kind() {
        RingKind::Rationals => Err(Error::FieldPathMismatch),
        RingKind::Integers => Ok(integer_smith(m)),
        RingKind::PrimeField => Ok(field_rank_form(m)),
    }
}

fn integer_smith(m: &Matrix) -> SmithForm {
    let ring = m.ring();
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = Tracked::identity(ring, rows);
    let mut v = Matrix::identity(ring, cols);

    let bound = rows.min(cols);
    let mut t = 0;
    while t < bound {
        let Some((pi, pj)) = smallest_pivot(&a, t) else { break };
        swap_rows(&mut a, &mut u, t, pi);
        swap_cols(&mut a, &mut v, t, pj);

        loop {
            // Clear the pivot column.
            let mut dirty = false;
            for i in t + 1..rows {
                if !a.get(i, t).is_zero() {
                    let q = div_round(a.get(i, t), a.get(t, t));
                    row_op(&mut a, &mut u, i, t, &q);
                    if !a.get(i, t).is_zero() {
                        // Remainder became the new, smaller pivot candidate.
                        swap_rows(&mut a, &mut u, t, i);
                        dirty = true;
                    }
                }
            }
            // Clear the pivot row.
            for j in t + 1..cols {
                if !a.get(t, j).is_zero() {
                    let q = div_round(a.get(t, j), a.get(t, t));
                    col_op(&mut a, &mut v, j, t, &q);
                    if !a.get(t, j).is_zero() {
                        swap_cols(&mut a, &mut v, t, j);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // Row and column are clear; enforce that the pivot divides the
            // remaining block, otherwise fold an offending row in and redo.
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| {
                    !remainder(a.get(i, j), a.get(t, t)).is_zero()
                });
            match offender {
                Some((i, _)) => {
                    add_row(&mut a, &mut u, t, i);
                }
                None => break,
            }
        }

        if a.get(t, t).is_negative() {
            negate_row(&mut a, &mut u, t);
        }
        t += 1;
    }

    let rank = t;
    SmithForm { ring, d: a, u: u.fwd, u_inv: u.inv, v, rank }
}

fn field_rank_form(m: &Matrix) -> SmithForm {
    let ring = m.ring();
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = Tracked::identity(ring, rows);
    let mut v = Matrix::identity(ring, cols);

    let bound = rows.min(cols);
    let mut t = 0;
    while t < bound {
        let Some((pi, pj)) = smallest_pivot(&a, t) else { break };
        swap_rows(&mut a, &mut u, t, pi);
        swap_cols(&mut a, &mut v, t, pj);
        // Scale the pivot to 1.
        let inv = ring.inv(a.get(t, t)).expect("nonzero pivot over a field");
        scale_row(&mut a, &mut u, t, &inv);
        for i in t + 1..rows {
            let f = a.get(i, t).clone();
            if !f.is_zero() {
                row_op(&mut a, &mut u, i, t, &f);
            }
        }
        for j in t + 1..cols {
            let f = a.get(t, j).clone();
            if !f.is_zero() {
                col_op(&mut a, &mut v, j, t, &f);
            }
        }
        t += 1;
    }
    SmithForm { ring, d: a, u: u.fwd, u_inv: u.inv, v, rank: t }
}

/// `U` together with its inverse, kept in sync: every elementary row
/// operation applied to `U` is mirrored as the inverse column operation on
/// `U⁻¹`.
struct Tracked {
    fwd: Matrix,
    inv: Matrix,
}

impl Tracked {
    fn identity(ring: Ring, n: usize) -> Self {
        Tracked { fwd: Matrix::identity(ring, n), inv: Matrix::identity(ring, n) }
    }
}

/// Solves `A·X = B` exactly, returning the canonical particular solution
/// (all free parameters zero), or `None` when no solution exists.
pub fn solve(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    assert_eq!(a.rows(), b.rows(), "shape mismatch in solve");
    let ring = a.ring();
    let snf = smith_normal_form(a);
    let c = snf.u().mul(b);
    let mut y = Matrix::zero(ring, a.cols(), b.cols());
    for col in 0..b.cols() {
        for i in 0..a.rows() {
            let ci = c.get(i, col);
            if i < snf.rank() {
                match ring.div_exact(ci, snf.d().get(i, i)) {
                    Ok(q) => y.set(i, col, q),
                    Err(_) => return None,
                }
            } else if !ci.is_zero() {
                return None;
            }
        }
    }
    Some(snf.v().mul(&y))
}

/// A matrix whose columns form a basis of `ker(A)` (a lattice basis over `Z`).
pub fn kernel_basis(a: &Matrix) -> Matrix {
    let snf = smith_normal_form(a);
    let v = snf.v();
    v.submatrix(0, v.rows(), snf.rank(), v.cols())
}

/// Division with symmetric remainder, used to shrink entries during SNF.
fn div_round(a: &BigRational, b: &BigRational) -> BigRational {
    let (an, bn) = (a.numer(), b.numer());
    let q = an / bn;
    let r = an - &q * bn;
    // Prefer the quotient leaving the smaller remainder.
    let q = if &r.abs() * 2 > bn.abs() {
        if (r.is_negative()) == (bn.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    };
    BigRational::from_integer(q)
}

fn remainder(a: &BigRational, b: &BigRational) -> BigRational {
    BigRational::from_integer(a.numer() % b.numer())
}

fn smallest_pivot(a: &Matrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let e = a.get(i, j);
            if e.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a.get(bi, bj).abs() <= e.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

fn swap_rows(a: &mut Matrix, u: &mut Tracked, r0: usize, r1: usize) {
    if r0 == r1 {
        return;
    }
    for j in 0..a.cols() {
        let x = a.get(r0, j).clone();
        let y = a.get(r1, j).clone();
        a.set(r0, j, y);
        a.set(r1, j, x);
    }
    for j in 0..u.fwd.cols() {
        let x = u.fwd.get(r0, j).clone();
        let y = u.fwd.get(r1, j).clone();
        u.fwd.set(r0, j, y);
        u.fwd.set(r1, j, x);
    }
    for i in 0..u.inv.rows() {
        let x = u.inv.get(i, r0).clone();
        let y = u.inv.get(i, r1).clone();
        u.inv.set(i, r0, y);
        u.inv.set(i, r1, x);
    }
}

fn swap_cols(a: &mut Matrix, v: &mut Matrix, c0: usize, c1: usize) {
    if c0 == c1 {
        return;
    }
    for i in 0..a.rows() {
        let x = a.get(i, c0).clone();
        let y = a.get(i, c1).clone();
        a.set(i, c0, y);
        a.set(i, c1, x);
    }
    for i in 0..v.rows() {
        let x = v.get(i, c0).clone();
        let y = v.get(i, c1).clone();
        v.set(i, c0, y);
        v.set(i, c1, x);
    }
}

/// `row_i -= q · row_t`, mirrored into `U` (and as `col_t += q · col_i`
/// on `U⁻¹`).
fn row_op(a: &mut Matrix, u: &mut Tracked, i: usize, t: usize, q: &BigRational) {
    let ring = a.ring();
    for j in 0..a.cols() {
        let v = ring.sub(a.get(i, j), &ring.mul(q, a.get(t, j)));
        a.set(i, j, v);
    }
    for j in 0..u.fwd.cols() {
        let v = ring.sub(u.fwd.get(i, j), &ring.mul(q, u.fwd.get(t, j)));
        u.fwd.set(i, j, v);
    }
    for r in 0..u.inv.rows() {
        let v = ring.add(u.inv.get(r, t), &ring.mul(q, u.inv.get(r, i)));
        u.inv.set(r, t, v);
    }
}

/// `col_j -= q · col_t`, mirrored into `V`.
fn col_op(a: &mut Matrix, v: &mut Matrix, j: usize, t: usize, q: &BigRational) {
    let ring = a.ring();
    for i in 0..a.rows() {
        let w = ring.sub(a.get(i, j), &ring.mul(q, a.get(i, t)));
        a.set(i, j, w);
    }
    for i in 0..v.rows() {
        let w = ring.sub(v.get(i, j), &ring.mul(q, v.get(i, t)));
        v.set(i, j, w);
    }
}

/// `row_t += row_i`, mirrored into `U` (and as `col_i -= col_t` on `U⁻¹`).
fn add_row(a: &mut Matrix, u: &mut Tracked, t: usize, i: usize) {
    let ring = a.ring();
    for j in 0..a.cols() {
        let v = ring.add(a.get(t, j), a.get(i, j));
        a.set(t, j, v);
    }
    for j in 0..u.fwd.cols() {
        let v = ring.add(u.fwd.get(t, j), u.fwd.get(i, j));
        u.fwd.set(t, j, v);
    }
    for r in 0..u.inv.rows() {
        let v = ring.sub(u.inv.get(r, i), u.inv.get(r, t));
        u.inv.set(r, i, v);
    }
}

fn negate_row(a: &mut Matrix, u: &mut Tracked, t: usize) {
    let ring = a.ring();
    for j in 0..a.cols() {
        let v = ring.neg(a.get(t, j));
        a.set(t, j, v);
    }
    for j in 0..u.fwd.cols() {
        let v = ring.neg(u.fwd.get(t, j));
        u.fwd.set(t, j, v);
    }
    for r in 0..u.inv.rows() {
        let v = ring.neg(u.inv.get(r, t));
        u.inv.set(r, t, v);
    }
}

fn scale_row(a: &mut Matrix, u: &mut Tracked, t: usize, f: &BigRational) {
    let ring = a.ring();
    let f_inv = ring.inv(f).expect("row scaling uses a unit");
    for j in 0..a.cols() {
        let v = ring.mul(a.get(t, j), f);
        a.set(t, j, v);
    }
    for j in 0..u.fwd.cols() {
        let v = ring.mul(u.fwd.get(t, j), f);
        u.fwd.set(t, j, v);
    }
    for r in 0..u.inv.rows() {
        let v = ring.mul(u.inv.get(r, t), &f_inv);
        u.inv.set(r, t, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_decomposition(m: &Matrix) {
        let snf = smith_normal_form(m);
        assert_eq!(&snf.u().mul(m).mul(snf.v()), snf.d());
        assert_eq!(snf.u().mul(snf.u_inv()), Matrix::identity(m.ring(), m.rows()));
        if m.ring().is_field() {
            assert!(!snf.u().determinant().is_zero());
            assert!(!snf.v().determinant().is_zero());
        } else {
            assert!(snf.u().determinant().abs().is_one());
            assert!(snf.v().determinant().abs().is_one());
        }
        let factors = snf.invariant_factors();
        for w in factors.windows(2) {
            assert!(
                remainder(&w[1], &w[0]).is_zero() || m.ring().is_field(),
                "divisibility chain broken"
            );
        }
    }

    #[test]
    fn two_by_two_example() {
        let z = Ring::integers();
        let m = Matrix::from_i64(z, &[&[2, 4], &[6, 8]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.invariant_factors(), vec![z.from_i64(2), z.from_i64(4)]);
        check_decomposition(&m);
    }

    #[test]
    fn identity_and_zero_cases() {
        let z = Ring::integers();
        let id = Matrix::identity(z, 3);
        let snf = smith_normal_form(&id);
        assert_eq!(snf.invariant_factors(), vec![z.one(); 3]);
        let zero = Matrix::zero(z, 2, 3);
        assert_eq!(smith_normal_form(&zero).rank(), 0);
    }

    #[test]
    fn field_path_gives_units() {
        let q = Ring::rationals();
        let m = Matrix::from_i64(q, &[&[2, 4], &[6, 8]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.rank(), 2);
        assert_eq!(snf.invariant_factors(), vec![q.one(), q.one()]);
        check_decomposition(&m);
        assert!(integer_path(&m).is_err());
    }

    #[test]
    fn solve_and_kernel() {
        let z = Ring::integers();
        let a = Matrix::from_i64(z, &[&[2, 0], &[0, 3]]);
        let b = Matrix::from_i64(z, &[&[4], &[9]]);
        let x = solve(&a, &b).unwrap();
        assert_eq!(a.mul(&x), b);
        // 2x = 3 has no integer solution.
        let b2 = Matrix::from_i64(z, &[&[3], &[3]]);
        assert!(solve(&a, &b2).is_none());

        let k = kernel_basis(&Matrix::from_i64(z, &[&[1, 2, 3]]));
        assert_eq!(k.cols(), 2);
        assert!(Matrix::from_i64(z, &[&[1, 2, 3]]).mul(&k).is_zero());
    }
}
