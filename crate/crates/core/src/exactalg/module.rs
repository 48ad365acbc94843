//! Finitely presented modules over `Z`, `Q` or `F_p`, maps between
//! presentations, and subquotient constructions (kernels, cokernels,
//! homology of a pair with induced maps).

use num::rational::BigRational;
use num::One;

use super::matrix::Matrix;
use super::ring::{Ring, RingKind};
use super::smith::{kernel_basis, smith_normal_form, solve};
use crate::error::Error;

/// A finitely presented module: `Λ^generators / im(relations)`.
///
/// The columns of `relations` are the relators. Isomorphism invariants
/// (free rank and torsion coefficients, sorted by divisibility and
/// normalized positive) are computed at construction; two modules compare
/// equal iff their invariants match.
#[derive(Clone, Debug)]
pub struct FpModule {
    ring: Ring,
    generators: usize,
    relations: Matrix,
    free_rank: usize,
    torsion: Vec<BigRational>,
}

impl PartialEq for FpModule {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.free_rank == other.free_rank
            && self.torsion == other.torsion
    }
}

impl Eq for FpModule {}

impl FpModule {
    pub fn new(ring: Ring, generators: usize, relations: Matrix) -> Self {
        assert_eq!(relations.rows(), generators, "relation matrix row mismatch");
        assert_eq!(relations.ring(), ring, "relation matrix ring mismatch");
        let snf = smith_normal_form(&relations);
        let free_rank = generators - snf.rank();
        let torsion = snf.torsion_factors();
        FpModule { ring, generators, relations, free_rank, torsion }
    }

    pub fn zero(ring: Ring) -> Self {
        FpModule::new(ring, 0, Matrix::zero(ring, 0, 0))
    }

    pub fn free(ring: Ring, n: usize) -> Self {
        FpModule::new(ring, n, Matrix::zero(ring, n, 0))
    }

    /// The cyclic module `Λ/(n)`.
    pub fn cyclic(ring: Ring, n: i64) -> Self {
        FpModule::new(ring, 1, Matrix::from_i64(ring, &[&[n]]))
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigRational] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Free rank plus torsion coefficients, the full isomorphism invariant.
    pub fn invariants(&self) -> (usize, Vec<BigRational>) {
        (self.free_rank, self.torsion.clone())
    }

    /// Human-readable shape such as `Z^2 + Z/2 + Z/4` or `0`.
    pub fn describe(&self) -> String {
        let tag = self.ring.tag();
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push(tag.clone()),
            r => parts.push(format!("{tag}^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("{tag}/{t}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    pub fn direct_sum(&self, other: &FpModule) -> FpModule {
        assert_eq!(self.ring, other.ring, "ring mismatch in direct sum");
        FpModule::new(
            self.ring,
            self.generators + other.generators,
            self.relations.block_diag(&other.relations),
        )
    }

    /// Tensor product of presentations: generators multiply, relations are
    /// `R ⊗ id` and `id ⊗ R′`.
    pub fn tensor(&self, other: &FpModule) -> FpModule {
        assert_eq!(self.ring, other.ring, "ring mismatch in tensor");
        let ring = self.ring;
        let g = self.generators * other.generators;
        let mut cols = Vec::new();
        for r in 0..self.relations.cols() {
            for j in 0..other.generators {
                let mut col = Matrix::zero(ring, g, 1);
                for i in 0..self.generators {
                    col.set(i * other.generators + j, 0, self.relations.get(i, r).clone());
                }
                cols.push(col);
            }
        }
        for r in 0..other.relations.cols() {
            for i in 0..self.generators {
                let mut col = Matrix::zero(ring, g, 1);
                for j in 0..other.generators {
                    col.set(i * other.generators + j, 0, other.relations.get(j, r).clone());
                }
                cols.push(col);
            }
        }
        FpModule::new(ring, g, Matrix::from_columns(ring, g, &cols))
    }

    /// A minimal presentation of the same module, together with the pair
    /// of mutually inverse isomorphisms: `to_old` carries reduced
    /// generators into the original presentation and `from_old` carries
    /// original generators to reduced coordinates.
    ///
    /// Keeping presentations reduced is what stops generator counts from
    /// compounding across iterated kernel and subquotient constructions.
    pub fn reduced(&self) -> (FpModule, Matrix, Matrix) {
        let ring = self.ring;
        let g = self.generators;
        let snf = smith_normal_form(&self.relations);
        // In the basis `y = Ux` the relations are diagonal; coordinates
        // with a unit invariant factor vanish and are dropped.
        let kept: Vec<usize> = (0..g)
            .filter(|&i| i >= snf.rank() || !snf.d().get(i, i).is_one())
            .collect();
        let torsion_count = kept.iter().filter(|&&i| i < snf.rank()).count();
        let mut relations = Matrix::zero(ring, kept.len(), torsion_count);
        let mut col = 0;
        for (pos, &i) in kept.iter().enumerate() {
            if i < snf.rank() {
                relations.set(pos, col, snf.d().get(i, i).clone());
                col += 1;
            }
        }
        let mut to_old = Matrix::zero(ring, g, kept.len());
        let mut from_old = Matrix::zero(ring, kept.len(), g);
        for (pos, &i) in kept.iter().enumerate() {
            for r in 0..g {
                to_old.set(r, pos, snf.u_inv().get(r, i).clone());
            }
            for c in 0..g {
                from_old.set(pos, c, snf.u().get(i, c).clone());
            }
        }
        (FpModule::new(ring, kept.len(), relations), to_old, from_old)
    }

    /// Whether the generator-coordinate column `x` represents zero.
    pub fn element_is_zero(&self, x: &Matrix) -> bool {
        assert_eq!(x.rows(), self.generators);
        assert_eq!(x.cols(), 1);
        solve(&self.relations, x).is_some()
    }

    pub fn elements_equal(&self, x: &Matrix, y: &Matrix) -> bool {
        self.element_is_zero(&x.sub(y))
    }

    /// Enumerates canonical coset representatives of every element.
    ///
    /// Only possible when the module is finite: over a prime field, or when
    /// the module is zero.
    pub fn enumerate_elements(&self) -> Result<Vec<Matrix>, Error> {
        if self.is_zero() {
            return Ok(vec![Matrix::zero(self.ring, self.generators, 1)]);
        }
        if self.ring.kind() != RingKind::PrimeField {
            return Err(Error::StrategyInfeasible(format!(
                "module {} over {} is infinite",
                self.describe(),
                self.ring.tag()
            )));
        }
        let p = self.ring.characteristic();
        let snf = smith_normal_form(&self.relations);
        // Over a field the quotient is spanned by the coordinates past the
        // rank, in the basis carried by U: x = U^{-1} y.
        let u_inv = snf.u_inv();
        let dim = self.generators - snf.rank();
        let mut out = Vec::new();
        let total = (p as usize).checked_pow(dim as u32).ok_or_else(|| {
            Error::StrategyInfeasible("element enumeration overflow".into())
        })?;
        for idx in 0..total {
            let mut y = Matrix::zero(self.ring, self.generators, 1);
            let mut k = idx;
            for d in 0..dim {
                let digit = (k % p as usize) as i64;
                k /= p as usize;
                y.set(snf.rank() + d, 0, self.ring.from_i64(digit));
            }
            out.push(u_inv.mul(&y));
        }
        Ok(out)
    }
}

/// Whether two finitely presented modules over the same ring are isomorphic.
pub fn modules_isomorphic(a: &FpModule, b: &FpModule) -> Result<bool, Error> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch(a.ring().tag(), b.ring().tag()));
    }
    Ok(a == b)
}

/// A map of finitely presented modules given by a matrix on generators.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    source: FpModule,
    target: FpModule,
    matrix: Matrix,
}

impl ModuleMap {
    /// Builds a map and checks well-definedness: the matrix must carry
    /// source relations into target relations.
    pub fn new(source: FpModule, target: FpModule, matrix: Matrix) -> Result<Self, Error> {
        assert_eq!(matrix.rows(), target.generators(), "matrix row mismatch");
        assert_eq!(matrix.cols(), source.generators(), "matrix column mismatch");
        let image_of_relations = matrix.mul(source.relations());
        if solve(target.relations(), &image_of_relations).is_none() {
            return Err(Error::IllDefinedMap(format!(
                "source relations do not map into target relations ({} -> {})",
                source.describe(),
                target.describe()
            )));
        }
        Ok(ModuleMap { source, target, matrix })
    }

    pub fn zero(source: FpModule, target: FpModule) -> Self {
        let m = Matrix::zero(source.ring(), target.generators(), source.generators());
        ModuleMap { source, target, matrix: m }
    }

    pub fn identity(module: FpModule) -> Self {
        let m = Matrix::identity(module.ring(), module.generators());
        ModuleMap { source: module.clone(), target: module, matrix: m }
    }

    pub fn source(&self) -> &FpModule {
        &self.source
    }

    pub fn target(&self) -> &FpModule {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn ring(&self) -> Ring {
        self.source.ring()
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &ModuleMap) -> ModuleMap {
        assert_eq!(other.target, self.source, "composition mismatch");
        ModuleMap {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.add(&other.matrix),
        }
    }

    pub fn sub(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.sub(&other.matrix),
        }
    }

    pub fn neg(&self) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.neg(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.scale(c),
        }
    }

    /// Whether the map is zero as a map of modules (not merely as a matrix).
    pub fn is_zero_map(&self) -> bool {
        solve(self.target.relations(), &self.matrix).is_some()
    }

    pub fn equals(&self, other: &ModuleMap) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.sub(other).is_zero_map()
    }

    pub fn direct_sum(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap {
            source: self.source.direct_sum(&other.source),
            target: self.target.direct_sum(&other.target),
            matrix: self.matrix.block_diag(&other.matrix),
        }
    }

    /// The kernel as a module together with its inclusion into the source.
    pub fn kernel(&self) -> (FpModule, ModuleMap) {
        let ring = self.ring();
        let g_src = self.source.generators();
        // Solutions of F·x ≡ 0 in the target: x-projections of
        // ker [F | -R_target].
        let block = self.matrix.hstack(&self.target.relations().neg());
        let sols = kernel_basis(&block);
        let kgen = sols.top_rows(g_src);
        // Relations among those generators: coefficient vectors landing in
        // the source relations.
        let rel_block = kgen.hstack(&self.source.relations().neg());
        let rel_sols = kernel_basis(&rel_block);
        let relations = rel_sols.top_rows(kgen.cols());
        let (kernel, to_old, _) = FpModule::new(ring, kgen.cols(), relations).reduced();
        let incl = ModuleMap {
            source: kernel.clone(),
            target: self.source.clone(),
            matrix: kgen.mul(&to_old),
        };
        (kernel, incl)
    }

    /// The cokernel together with the projection from the target.
    pub fn cokernel(&self) -> (FpModule, ModuleMap) {
        let relations = self.matrix.hstack(self.target.relations());
        let (coker, _, from_old) =
            FpModule::new(self.ring(), self.target.generators(), relations).reduced();
        let proj = ModuleMap {
            source: self.target.clone(),
            target: coker.clone(),
            matrix: from_old,
        };
        (coker, proj)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().0.is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().0.is_zero()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// A preimage of the target-generator-coordinate columns `y`, when one
    /// exists.
    pub fn preimage(&self, y: &Matrix) -> Option<Matrix> {
        let block = self.matrix.hstack(self.target.relations());
        let sol = solve(&block, y)?;
        Some(sol.top_rows(self.source.generators()))
    }

    /// A retraction `r` with `r ∘ self = id`, when the map splits.
    pub fn retraction(&self) -> Option<ModuleMap> {
        // Unknown matrix R (g_src × g_tgt) with R·F ≡ id mod source
        // relations and R well defined: R·R_tgt ≡ 0 mod source relations.
        // Solve generator by generator over the module of candidate maps:
        // this is a linear system in the entries of R and slack columns.
        let ring = self.ring();
        let gs = self.source.generators();
        let gt = self.target.generators();
        let rs = self.source.relations();
        // Unknowns: entries of R (row-major, gs*gt), then slack coefficients
        // expressing each congruence via source relators.
        let f = &self.matrix;
        let rt = self.target.relations();
        let n_r = gs * gt;
        let cong_cols = gs + rt.cols(); // congruences: R·F = id, R·R_tgt = 0
        let n_slack = rs.cols() * cong_cols;
        let rows = gs * cong_cols;
        let mut a = Matrix::zero(ring, rows, n_r + n_slack);
        let mut b = Matrix::zero(ring, rows, 1);
        // Congruence block 1: (R·F)[i][j] + (rs·S1)[i][j] = δ_ij.
        // Congruence block 2: (R·R_tgt)[i][j] + (rs·S2)[i][j] = 0.
        let targets: Vec<&Matrix> = vec![f, rt];
        let mut row = 0;
        let mut cong = 0;
        for t in &targets {
            for j in 0..t.cols() {
                for i in 0..gs {
                    // Coefficient of R[i][k] is t[k][j].
                    for k in 0..gt {
                        a.set(row, i * gt + k, t.get(k, j).clone());
                    }
                    // Slack: + rs[i][m] * S[m][cong]
                    for m in 0..rs.cols() {
                        a.set(row, n_r + cong * rs.cols() + m, rs.get(i, m).clone());
                    }
                    if std::ptr::eq(*t, f) && i == j {
                        b.set(row, 0, ring.one());
                    }
                    row += 1;
                }
                cong += 1;
            }
        }
        let sol = solve(&a, &b)?;
        let mut r = Matrix::zero(ring, gs, gt);
        for i in 0..gs {
            for k in 0..gt {
                r.set(i, k, sol.get(i * gt + k, 0).clone());
            }
        }
        Some(ModuleMap {
            source: self.target.clone(),
            target: self.source.clone(),
            matrix: r,
        })
    }
}

/// Homology of a composable pair, with the data needed to induce maps.
#[derive(Clone, Debug)]
pub struct Homology {
    /// `ker(d_out)/im(d_in)` with its computed invariants.
    pub module: FpModule,
    /// Columns are cycle representatives in the middle module's generator
    /// coordinates, one per homology generator.
    pub cycles: Matrix,
    /// The middle module the cycles live in.
    pub ambient: FpModule,
    /// Incoming differential, kept for class computations.
    d_in: ModuleMap,
}

impl Homology {
    /// The homology class of a cycle `x` (middle-module coordinates), in
    /// homology-generator coordinates. `None` if `x` is not a cycle
    /// combination of the chosen representatives (should not happen for
    /// true cycles).
    pub fn class_of(&self, x: &Matrix) -> Option<Matrix> {
        let block = self
            .cycles
            .hstack(self.d_in.matrix())
            .hstack(self.ambient.relations());
        let sol = solve(&block, x)?;
        Some(sol.top_rows(self.cycles.cols()))
    }
}

/// Computes `ker(d_out)/im(d_in)` at the middle module.
///
/// Errors when the composite `d_out ∘ d_in` is nonzero.
pub fn homology_of_pair(d_in: &ModuleMap, d_out: &ModuleMap) -> Result<Homology, Error> {
    if d_in.target() != d_out.source()
        || d_in.target().generators() != d_out.source().generators()
    {
        return Err(Error::Shape("middle modules differ".into()));
    }
    if !d_out.compose(d_in).is_zero_map() {
        return Err(Error::CompositionNonzero(format!(
            "d_out ∘ d_in ≠ 0 at {}",
            d_in.target().describe()
        )));
    }
    let ring = d_in.ring();
    let middle = d_in.target().clone();
    let g = middle.generators();
    // Cycle generators: x with d_out(x) ≡ 0.
    let block = d_out.matrix().hstack(&d_out.target().relations().neg());
    let zgen = kernel_basis(&block).top_rows(g);
    // Relations: combinations of cycles lying in im(d_in) + relations.
    let rel_block = zgen
        .hstack(&d_in.matrix().neg())
        .hstack(&middle.relations().neg());
    let relations = kernel_basis(&rel_block).top_rows(zgen.cols());
    let (module, to_old, _) = FpModule::new(ring, zgen.cols(), relations).reduced();
    let cycles = zgen.mul(&to_old);
    Ok(Homology { module, cycles, ambient: middle, d_in: d_in.clone() })
}

/// The map `H(f)` induced on homology by a chain map square.
///
/// `f` must carry the source pair's middle module to the target pair's and
/// commute with both differentials (the caller guarantees this; here it is
/// used, not checked).
pub fn induced_map(source_h: &Homology, target_h: &Homology, f: &ModuleMap) -> ModuleMap {
    let image = f.matrix().mul(&source_h.cycles);
    let mut cols = Vec::new();
    for j in 0..image.cols() {
        let class = target_h
            .class_of(&image.column(j))
            .expect("image of a cycle is a cycle");
        cols.push(class);
    }
    let matrix = Matrix::from_columns(
        f.ring(),
        target_h.module.generators(),
        &cols,
    );
    ModuleMap::new(source_h.module.clone(), target_h.module.clone(), matrix)
        .expect("induced map is well defined")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Ring {
        Ring::integers()
    }

    #[test]
    fn invariants_classify() {
        // Z/2 ⊕ Z/3 ≅ Z/6.
        let a = FpModule::cyclic(z(), 2).direct_sum(&FpModule::cyclic(z(), 3));
        let b = FpModule::cyclic(z(), 6);
        assert!(modules_isomorphic(&a, &b).unwrap());
        assert!(!modules_isomorphic(&FpModule::free(z(), 1), &b).unwrap());
        assert!(modules_isomorphic(&FpModule::zero(z()), &FpModule::zero(z())).unwrap());
    }

    #[test]
    fn homology_of_multiplication_by_two() {
        let zz = FpModule::free(z(), 1);
        let times2 = ModuleMap::new(zz.clone(), zz.clone(), Matrix::from_i64(z(), &[&[2]]))
            .unwrap();
        let zero_out = ModuleMap::zero(zz.clone(), FpModule::zero(z()));
        let h = homology_of_pair(&times2, &zero_out).unwrap();
        assert_eq!(h.module, FpModule::cyclic(z(), 2));
    }

    #[test]
    fn homology_trivial_cases() {
        let zk = FpModule::free(z(), 3);
        let zin = ModuleMap::zero(FpModule::zero(z()), zk.clone());
        let zout = ModuleMap::zero(zk.clone(), FpModule::zero(z()));
        let h = homology_of_pair(&zin, &zout).unwrap();
        assert_eq!(h.module, FpModule::free(z(), 3));

        let id = ModuleMap::identity(zk.clone());
        let h2 = homology_of_pair(&id, &zout).unwrap();
        assert!(h2.module.is_zero());
    }

    #[test]
    fn composition_nonzero_is_an_error() {
        let zz = FpModule::free(z(), 1);
        let id = ModuleMap::identity(zz.clone());
        assert!(matches!(
            homology_of_pair(&id, &id),
            Err(Error::CompositionNonzero(_))
        ));
    }

    #[test]
    fn kernel_and_cokernel() {
        let zz = FpModule::free(z(), 1);
        let times2 = ModuleMap::new(zz.clone(), zz.clone(), Matrix::from_i64(z(), &[&[2]]))
            .unwrap();
        assert!(times2.is_injective());
        assert!(!times2.is_surjective());
        let (coker, _) = times2.cokernel();
        assert_eq!(coker, FpModule::cyclic(z(), 2));

        // Projection Z -> Z/2 has kernel 2Z ≅ Z.
        let z2 = FpModule::cyclic(z(), 2);
        let proj = ModuleMap::new(zz.clone(), z2, Matrix::from_i64(z(), &[&[1]])).unwrap();
        let (ker, incl) = proj.kernel();
        assert_eq!(ker, FpModule::free(z(), 1));
        assert!(proj.compose(&incl).is_zero_map());
    }

    #[test]
    fn ill_defined_maps_are_rejected() {
        // Z/2 -> Z sending the generator to 1 is not well defined.
        let z2 = FpModule::cyclic(z(), 2);
        let zz = FpModule::free(z(), 1);
        assert!(ModuleMap::new(z2, zz, Matrix::from_i64(z(), &[&[1]])).is_err());
    }

    #[test]
    fn retraction_of_split_injection() {
        // Z -> Z^2, e -> (1, 0) splits; Z ->x2 Z does not.
        let zz = FpModule::free(z(), 1);
        let z2 = FpModule::free(z(), 2);
        let inc = ModuleMap::new(zz.clone(), z2, Matrix::from_i64(z(), &[&[1], &[0]]))
            .unwrap();
        let r = inc.retraction().unwrap();
        assert!(r.compose(&inc).equals(&ModuleMap::identity(zz.clone())));
        let times2 = ModuleMap::new(zz.clone(), zz.clone(), Matrix::from_i64(z(), &[&[2]]))
            .unwrap();
        assert!(times2.retraction().is_none());
    }

    #[test]
    fn enumeration_over_f2() {
        let f2 = Ring::prime_field(2).unwrap();
        let m = FpModule::free(f2, 2);
        let elems = m.enumerate_elements().unwrap();
        assert_eq!(elems.len(), 4);
        // All distinct as elements.
        for (i, x) in elems.iter().enumerate() {
            for y in elems.iter().skip(i + 1) {
                assert!(!m.elements_equal(x, y));
            }
        }
    }

    #[test]
    fn tensor_of_cyclics() {
        // Z/2 ⊗ Z/3 = 0, Z/2 ⊗ Z/2 = Z/2.
        let a = FpModule::cyclic(z(), 2);
        let b = FpModule::cyclic(z(), 3);
        assert!(a.tensor(&b).is_zero());
        assert_eq!(a.tensor(&a), FpModule::cyclic(z(), 2));
    }
}
