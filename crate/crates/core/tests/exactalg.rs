//! Oracle and property tests for the exact linear algebra layer.

use finsite::exactalg::{
    homology_of_pair, kernel_basis, modules_isomorphic, smith_normal_form, solve, FpModule,
    Matrix, ModuleMap, Ring,
};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, ring: Ring, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zero(ring, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, ring.from_i64(rng.gen_range(-5..=5)));
        }
    }
    m
}

/// Invariant factors by the gcd-of-minors formula: `d_1 … d_k` equals the
/// gcd of all `k × k` minors. Entirely independent of the pivoting code.
fn minors_oracle(m: &Matrix) -> Vec<BigRational> {
    let bound = m.rows().min(m.cols());
    let mut gcds = vec![BigInt::one()]; // g_0 = 1
    for k in 1..=bound {
        let mut g = BigInt::zero();
        for rows in subsets(m.rows(), k) {
            for cols in subsets(m.cols(), k) {
                let mut sub = Matrix::zero(m.ring(), k, k);
                for (a, &i) in rows.iter().enumerate() {
                    for (b, &j) in cols.iter().enumerate() {
                        sub.set(a, b, m.get(i, j).clone());
                    }
                }
                g = g.gcd(sub.determinant().numer());
            }
        }
        gcds.push(g);
    }
    let mut out = Vec::new();
    for k in 1..=bound {
        if gcds[k].is_zero() {
            break;
        }
        out.push(BigRational::from_integer(&gcds[k] / &gcds[k - 1]));
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if k > n {
        return vec![];
    }
    let mut out = Vec::new();
    for first in 0..=n - k {
        for mut rest in subsets(n - first - 1, k - 1) {
            for r in rest.iter_mut() {
                *r += first + 1;
            }
            let mut s = vec![first];
            s.extend(rest);
            out.push(s);
        }
    }
    out
}

#[test]
fn smith_matches_minors_oracle_on_200_random_matrices() {
    let z = Ring::integers();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..200 {
        let rows = rng.gen_range(1..=4);
        let cols = rng.gen_range(1..=4);
        let m = random_matrix(&mut rng, z, rows, cols);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.invariant_factors(), minors_oracle(&m), "matrix {m:?}");
        // And the decomposition itself is exact with unimodular transforms.
        assert_eq!(&snf.u().mul(&m).mul(snf.v()), snf.d());
        assert!(snf.u().determinant().abs().is_one());
        assert!(snf.v().determinant().abs().is_one());
        let d = snf.invariant_factors();
        for w in d.windows(2) {
            assert!((w[1].numer() % w[0].numer()).is_zero());
        }
    }
}

/// Naive homology oracle for pairs of free modules `Z^a -> Z^b -> Z^c`:
/// express the image inside a kernel lattice basis and read off invariants
/// of the coefficient matrix with the minors oracle.
fn naive_free_homology(d_in: &Matrix, d_out: &Matrix) -> (usize, Vec<BigRational>) {
    let k = kernel_basis(d_out);
    let y = solve(&k, d_in).expect("image lies in the kernel");
    let factors = minors_oracle(&y);
    let torsion: Vec<BigRational> =
        factors.iter().filter(|f| !f.is_one()).cloned().collect();
    (k.cols() - factors.len(), torsion)
}

#[test]
fn homology_of_pair_matches_naive_oracle() {
    let z = Ring::integers();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..100 {
        let a = rng.gen_range(1..=4);
        let b = rng.gen_range(1..=4);
        let c = rng.gen_range(1..=4);
        let d_out_m = random_matrix(&mut rng, z, c, b);
        // Build d_in through the kernel so the composite vanishes.
        let kb = kernel_basis(&d_out_m);
        let coeff = random_matrix(&mut rng, z, kb.cols(), a);
        let d_in_m = kb.mul(&coeff);

        let ma = FpModule::free(z, a);
        let mb = FpModule::free(z, b);
        let mc = FpModule::free(z, c);
        let d_in = ModuleMap::new(ma, mb.clone(), d_in_m.clone()).unwrap();
        let d_out = ModuleMap::new(mb, mc, d_out_m.clone()).unwrap();
        let h = homology_of_pair(&d_in, &d_out).unwrap();
        let (free_rank, torsion) = naive_free_homology(&d_in_m, &d_out_m);
        assert_eq!(h.module.free_rank(), free_rank);
        assert_eq!(h.module.torsion(), &torsion[..]);
    }
}

#[test]
fn isomorphism_is_invariant_under_presentation_change() {
    let z = Ring::integers();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..50 {
        let g = rng.gen_range(1..=3);
        let r = rng.gen_range(0..=3);
        let rel = random_matrix(&mut rng, z, g, r);
        let m = FpModule::new(z, g, rel.clone());
        // Add a generator together with a relation killing it.
        let bigger = FpModule::new(z, g + 1, rel.block_diag(&Matrix::identity(z, 1)));
        assert!(modules_isomorphic(&m, &bigger).unwrap());
    }
}

#[test]
fn ring_mismatch_is_detected() {
    let a = FpModule::zero(Ring::integers());
    let b = FpModule::zero(Ring::rationals());
    assert!(modules_isomorphic(&a, &b).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_decomposition_is_exact(
        rows in 1usize..5,
        cols in 1usize..5,
        seed in any::<u64>(),
    ) {
        let z = Ring::integers();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(&mut rng, z, rows, cols);
        let snf = smith_normal_form(&m);
        prop_assert_eq!(&snf.u().mul(&m).mul(snf.v()), snf.d());
        prop_assert!(snf.u().determinant().abs().is_one());
        prop_assert!(snf.v().determinant().abs().is_one());
        let d = snf.invariant_factors();
        for w in d.windows(2) {
            prop_assert!((w[1].numer() % w[0].numer()).is_zero());
        }
        // Kernel columns really are killed by the matrix.
        let k = kernel_basis(&m);
        prop_assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn solve_returns_actual_solutions(
        rows in 1usize..4,
        cols in 1usize..4,
        seed in any::<u64>(),
    ) {
        let z = Ring::integers();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, z, rows, cols);
        // Build a solvable right-hand side from a known solution.
        let x = random_matrix(&mut rng, z, cols, 1);
        let b = a.mul(&x);
        let found = solve(&a, &b).expect("constructed system is solvable");
        prop_assert_eq!(a.mul(&found), b);
    }

    #[test]
    fn isomorphism_is_an_equivalence(
        g in 1usize..4,
        r in 0usize..4,
        seed in any::<u64>(),
    ) {
        let z = Ring::integers();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m1 = FpModule::new(z, g, random_matrix(&mut rng, z, g, r));
        let m2 = FpModule::new(z, g, random_matrix(&mut rng, z, g, r));
        let m3 = FpModule::new(z, g, random_matrix(&mut rng, z, g, r));
        prop_assert!(modules_isomorphic(&m1, &m1).unwrap());
        prop_assert_eq!(
            modules_isomorphic(&m1, &m2).unwrap(),
            modules_isomorphic(&m2, &m1).unwrap()
        );
        if modules_isomorphic(&m1, &m2).unwrap() && modules_isomorphic(&m2, &m3).unwrap() {
            prop_assert!(modules_isomorphic(&m1, &m3).unwrap());
        }
    }
}
