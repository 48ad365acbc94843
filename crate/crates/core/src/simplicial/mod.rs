//! Truncated simplicial objects in set- and module-presheaves: Moore and
//! normalized complexes, the Dold-Kan inverse, free linearization, and
//! matching objects of augmented simplicial objects.

use std::sync::Arc;

use crate::complex::bicomplex::block_morphism;
use crate::complex::{Complex, ComplexMorphism};
use crate::error::Error;
use crate::exactalg::{ModuleMap, Ring};
use crate::site::{
    presheaf_kernel, FinCategory, ModPresheaf, ModPresheafMorphism, SetPresheaf,
    SetPresheafMorphism, Site,
};

mod shapes;

pub use shapes::{degeneracy_map, epi_mono_factor, face_map, monotone_surjections};

/// A module-presheaf-valued simplicial object truncated at level `N`.
#[derive(Clone, Debug)]
pub struct SimplicialModPresheaf {
    site: Arc<Site>,
    ring: Ring,
    /// Levels `X_0 .. X_N`.
    levels: Vec<ModPresheaf>,
    /// `faces[n - 1][i]: X_n → X_{n−1}` for `1 ≤ n ≤ N`, `0 ≤ i ≤ n`.
    faces: Vec<Vec<ModPresheafMorphism>>,
    /// `degeneracies[n][i]: X_n → X_{n+1}` for `0 ≤ n < N`, `0 ≤ i ≤ n`.
    degeneracies: Vec<Vec<ModPresheafMorphism>>,
}

impl SimplicialModPresheaf {
    /// Builds a truncated simplicial object, checking every simplicial
    /// identity expressible within the truncation.
    pub fn new(
        site: Arc<Site>,
        ring: Ring,
        levels: Vec<ModPresheaf>,
        faces: Vec<Vec<ModPresheafMorphism>>,
        degeneracies: Vec<Vec<ModPresheafMorphism>>,
    ) -> Result<Self, Error> {
        let x = SimplicialModPresheaf { site, ring, levels, faces, degeneracies };
        let n_max = x.truncation();
        assert_eq!(x.faces.len() as i64, n_max);
        assert_eq!(x.degeneracies.len() as i64, n_max);
        for n in 1..=n_max {
            assert_eq!(x.faces[(n - 1) as usize].len() as i64, n + 1);
        }
        for n in 0..n_max {
            assert_eq!(x.degeneracies[n as usize].len() as i64, n + 1);
        }
        // d_i d_j = d_{j−1} d_i for i < j.
        for n in 2..=n_max {
            for j in 1..=n {
                for i in 0..j {
                    let lhs = x.face(n - 1, i).compose(x.face(n, j));
                    let rhs = x.face(n - 1, j - 1).compose(x.face(n, i));
                    if !lhs.equals(&rhs) {
                        return Err(Error::SimplicialIdentity(format!(
                            "d_{i} d_{j} ≠ d_{} d_{i} at level {n}",
                            j - 1
                        )));
                    }
                }
            }
        }
        // s_i s_j = s_{j+1} s_i for i ≤ j.
        for n in 0..n_max.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    let lhs = x.degeneracy(n + 1, i).compose(x.degeneracy(n, j));
                    let rhs = x.degeneracy(n + 1, j + 1).compose(x.degeneracy(n, i));
                    if !lhs.equals(&rhs) {
                        return Err(Error::SimplicialIdentity(format!(
                            "s_{i} s_{j} ≠ s_{} s_{i} at level {n}",
                            j + 1
                        )));
                    }
                }
            }
        }
        // d_i s_j relations.
        for n in 0..n_max {
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = x.face(n + 1, i).compose(x.degeneracy(n, j));
                    let expected = if i == j || i == j + 1 {
                        ModPresheafMorphism::identity(x.level(n))
                    } else if i < j {
                        x.degeneracy(n - 1, j - 1).compose(x.face(n, i))
                    } else {
                        x.degeneracy(n - 1, j).compose(x.face(n, i - 1))
                    };
                    if !lhs.equals(&expected) {
                        return Err(Error::SimplicialIdentity(format!(
                            "d_{i} s_{j} violates the mixed identity at level {n}"
                        )));
                    }
                }
            }
        }
        Ok(x)
    }

    pub fn site(&self) -> &Arc<Site> {
        &self.site
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// The truncation level `N`.
    pub fn truncation(&self) -> i64 {
        self.levels.len() as i64 - 1
    }

    pub fn level(&self, n: i64) -> &ModPresheaf {
        &self.levels[n as usize]
    }

    /// The face `d_i: X_n → X_{n−1}`.
    pub fn face(&self, n: i64, i: i64) -> &ModPresheafMorphism {
        &self.faces[(n - 1) as usize][i as usize]
    }

    /// The degeneracy `s_i: X_n → X_{n+1}`.
    pub fn degeneracy(&self, n: i64, i: i64) -> &ModPresheafMorphism {
        &self.degeneracies[n as usize][i as usize]
    }

    /// Levelwise direct sum.
    pub fn direct_sum(&self, other: &SimplicialModPresheaf) -> SimplicialModPresheaf {
        let cat = self.site.category();
        assert_eq!(self.truncation(), other.truncation());
        let levels = self
            .levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| a.direct_sum(cat, b))
            .collect();
        let zip2 = |ours: &[Vec<ModPresheafMorphism>], theirs: &[Vec<ModPresheafMorphism>]| {
            ours.iter()
                .zip(theirs)
                .map(|(a, b)| a.iter().zip(b).map(|(f, g)| f.direct_sum(g)).collect())
                .collect()
        };
        SimplicialModPresheaf {
            site: self.site.clone(),
            ring: self.ring,
            levels,
            faces: zip2(&self.faces, &other.faces),
            degeneracies: zip2(&self.degeneracies, &other.degeneracies),
        }
    }
}

/// The Moore complex: level `n` is `X_n`, differential `Σ (−1)^i d_i`.
pub fn moore(x: &SimplicialModPresheaf) -> Complex {
    let ring = x.ring();
    let diffs = (1..=x.truncation())
        .map(|n| {
            let mut d = x.face(n, 0).clone();
            for i in 1..=n {
                let sign =
                    if i % 2 == 0 { ring.one() } else { ring.from_i64(-1) };
                d = d.add(&x.face(n, i).scale(&sign));
            }
            d
        })
        .collect();
    Complex::new(x.site().clone(), ring, 0, x.levels.clone(), diffs)
        .expect("Moore differential squares to zero")
}

/// The normalized chain complex `N(X)_n = ∩_{i<n} ker d_i` with
/// differential `(−1)^n d_n`, together with its inclusion into the Moore
/// complex (a quasi-isomorphism).
pub fn normalize(x: &SimplicialModPresheaf) -> (Complex, ComplexMorphism) {
    let site = x.site().clone();
    let cat = site.category();
    let ring = x.ring();
    let m = moore(x);
    // Kernels and their inclusions into X_n.
    let mut kernels: Vec<(ModPresheaf, ModPresheafMorphism)> =
        vec![(x.level(0).clone(), ModPresheafMorphism::identity(x.level(0)))];
    for n in 1..=x.truncation() {
        let sources = [x.level(n)];
        let targets: Vec<&ModPresheaf> = (0..n).map(|_| x.level(n - 1)).collect();
        let blocks: Vec<_> = (0..n)
            .map(|i| (i as usize, 0usize, x.face(n, i), ring.one()))
            .collect();
        let (_, _, stacked) = block_morphism(cat, ring, &sources, &targets, &blocks);
        kernels.push(presheaf_kernel(cat, x.level(n), &stacked));
    }
    // Differential (−1)^n d_n restricted to the kernel, factored through
    // the lower kernel.
    let mut diffs = Vec::new();
    for n in 1..=x.truncation() {
        let (upper, incl_up) = &kernels[n as usize];
        let (lower, incl_low) = &kernels[(n - 1) as usize];
        let sign = if n % 2 == 0 { ring.one() } else { ring.from_i64(-1) };
        let restricted = x.face(n, n).scale(&sign).compose(incl_up);
        let components: Vec<ModuleMap> = cat
            .objects()
            .map(|o| {
                let lifted = incl_low
                    .component(o)
                    .preimage(restricted.component(o).matrix())
                    .expect("normalized boundaries stay normalized");
                ModuleMap::new(upper.value(o).clone(), lower.value(o).clone(), lifted)
                    .expect("factored differential is well defined")
            })
            .collect();
        diffs.push(
            ModPresheafMorphism::new(cat, upper, lower, components)
                .expect("normalized differential is natural"),
        );
    }
    let levels: Vec<ModPresheaf> = kernels.iter().map(|(k, _)| k.clone()).collect();
    let n_complex = Complex::new(site.clone(), ring, 0, levels, diffs)
        .expect("normalized differential squares to zero");
    let inclusion = ComplexMorphism::new(
        n_complex.clone(),
        m,
        0,
        kernels.into_iter().map(|(_, incl)| incl).collect(),
    )
    .expect("normalized inclusion is a chain map");
    (n_complex, inclusion)
}

/// The Dold-Kan inverse: `Γ(C)_n = ⊕_{σ: [n]↠[k]} C_k` with the standard
/// structure maps, truncated at level `N`. Requires `C` connective; the
/// chosen signs make `N ∘ Γ` the identity on the nose.
pub fn gamma(c: &Complex, n_max: i64) -> Result<SimplicialModPresheaf, Error> {
    for n in c.lo()..0 {
        if !c.level(n).is_zero() {
            return Err(Error::OutsideValidity(n, 0, i64::MAX));
        }
    }
    let site = c.site().clone();
    let cat = site.category();
    let ring = c.ring();
    let top = n_max.min(c.hi()).max(0);
    // Per-level summand indices: `(k, σ)` with `σ: [n] ↠ [k]`.
    let summands: Vec<Vec<(usize, Vec<usize>)>> = (0..=n_max)
        .map(|n| {
            let mut out = Vec::new();
            for k in 0..=(n.min(top)) as usize {
                for s in monotone_surjections(n as usize, k) {
                    out.push((k, s));
                }
            }
            out
        })
        .collect();
    let c_levels: Vec<ModPresheaf> = (0..=top).map(|k| c.level(k)).collect();
    let c_ids: Vec<ModPresheafMorphism> =
        c_levels.iter().map(ModPresheafMorphism::identity).collect();
    let c_diffs: Vec<ModPresheafMorphism> =
        (0..=top).map(|k| c.differential(k)).collect();
    // A structure map Γ_m → Γ_{m'} induced by θ: [m'] → [m].
    let induced = |m: usize, mp: usize, theta: &[usize]| -> ModPresheafMorphism {
        let sources: Vec<&ModPresheaf> =
            summands[m].iter().map(|(k, _)| &c_levels[*k]).collect();
        let targets: Vec<&ModPresheaf> =
            summands[mp].iter().map(|(k, _)| &c_levels[*k]).collect();
        let mut blocks = Vec::new();
        for (s, (k, sigma)) in summands[m].iter().enumerate() {
            let composite: Vec<usize> = theta.iter().map(|&j| sigma[j]).collect();
            let (tau, delta) = epi_mono_factor(&composite);
            let kp = delta.len() - 1;
            let t = summands[mp]
                .iter()
                .position(|(q, s2)| *q == kp && *s2 == tau)
                .expect("factorization lands in the summand list");
            if kp == *k {
                blocks.push((t, s, &c_ids[*k], ring.one()));
            } else if kp + 1 == *k && delta.iter().enumerate().all(|(i, &v)| v == i) {
                // δ omits exactly the top element: contributes (−1)^k d.
                let sign = if *k % 2 == 0 { ring.one() } else { ring.from_i64(-1) };
                blocks.push((t, s, &c_diffs[*k], sign));
            }
        }
        block_morphism(cat, ring, &sources, &targets, &blocks).2
    };
    let levels: Vec<ModPresheaf> = (0..=n_max as usize)
        .map(|n| {
            summands[n]
                .iter()
                .fold(ModPresheaf::zero(cat, ring), |acc, (k, _)| {
                    acc.direct_sum(cat, &c_levels[*k])
                })
        })
        .collect();
    let faces = (1..=n_max as usize)
        .map(|n| {
            (0..=n)
                .map(|i| induced(n, n - 1, &face_map(n, i)))
                .collect()
        })
        .collect();
    let degeneracies = (0..n_max as usize)
        .map(|n| {
            (0..=n)
                .map(|i| induced(n, n + 1, &degeneracy_map(n, i)))
                .collect()
        })
        .collect();
    SimplicialModPresheaf::new(site, ring, levels, faces, degeneracies)
}

/// A set-presheaf-valued simplicial object truncated at level `N`.
#[derive(Clone, Debug)]
pub struct SimplicialSetPresheaf {
    levels: Vec<SetPresheaf>,
    faces: Vec<Vec<SetPresheafMorphism>>,
    degeneracies: Vec<Vec<SetPresheafMorphism>>,
}

impl SimplicialSetPresheaf {
    /// Builds a truncated simplicial set presheaf, checking the simplicial
    /// identities pointwise.
    pub fn new(
        cat: &FinCategory,
        levels: Vec<SetPresheaf>,
        faces: Vec<Vec<SetPresheafMorphism>>,
        degeneracies: Vec<Vec<SetPresheafMorphism>>,
    ) -> Result<Self, Error> {
        let x = SimplicialSetPresheaf { levels, faces, degeneracies };
        let n_max = x.truncation();
        let same = |f: &dyn Fn(usize, usize) -> usize,
                    g: &dyn Fn(usize, usize) -> usize,
                    level: i64|
         -> bool {
            cat.objects().all(|o| {
                (0..x.levels[level as usize].size(o)).all(|e| f(o.0, e) == g(o.0, e))
            })
        };
        for n in 2..=n_max {
            for j in 1..=n {
                for i in 0..j {
                    let lhs = |o: usize, e: usize| {
                        x.face(n - 1, i)
                            .apply(crate::site::ObjId(o), x.face(n, j).apply(crate::site::ObjId(o), e))
                    };
                    let rhs = |o: usize, e: usize| {
                        x.face(n - 1, j - 1)
                            .apply(crate::site::ObjId(o), x.face(n, i).apply(crate::site::ObjId(o), e))
                    };
                    if !same(&lhs, &rhs, n) {
                        return Err(Error::SimplicialIdentity(format!(
                            "d_{i} d_{j} ≠ d_{} d_{i} at level {n}",
                            j - 1
                        )));
                    }
                }
            }
        }
        for n in 0..n_max.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    let lhs = |o: usize, e: usize| {
                        x.degeneracy(n + 1, i)
                            .apply(crate::site::ObjId(o), x.degeneracy(n, j).apply(crate::site::ObjId(o), e))
                    };
                    let rhs = |o: usize, e: usize| {
                        x.degeneracy(n + 1, j + 1)
                            .apply(crate::site::ObjId(o), x.degeneracy(n, i).apply(crate::site::ObjId(o), e))
                    };
                    if !same(&lhs, &rhs, n) {
                        return Err(Error::SimplicialIdentity(format!(
                            "s_{i} s_{j} ≠ s_{} s_{i} at level {n}",
                            j + 1
                        )));
                    }
                }
            }
        }
        for n in 0..n_max {
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = |o: usize, e: usize| {
                        x.face(n + 1, i)
                            .apply(crate::site::ObjId(o), x.degeneracy(n, j).apply(crate::site::ObjId(o), e))
                    };
                    let ok = if i == j || i == j + 1 {
                        same(&lhs, &|_o, e| e, n)
                    } else if i < j {
                        let rhs = |o: usize, e: usize| {
                            x.degeneracy(n - 1, j - 1)
                                .apply(crate::site::ObjId(o), x.face(n, i).apply(crate::site::ObjId(o), e))
                        };
                        same(&lhs, &rhs, n)
                    } else {
                        let rhs = |o: usize, e: usize| {
                            x.degeneracy(n - 1, j)
                                .apply(crate::site::ObjId(o), x.face(n, i - 1).apply(crate::site::ObjId(o), e))
                        };
                        same(&lhs, &rhs, n)
                    };
                    if !ok {
                        return Err(Error::SimplicialIdentity(format!(
                            "d_{i} s_{j} violates the mixed identity at level {n}"
                        )));
                    }
                }
            }
        }
        Ok(x)
    }

    pub fn truncation(&self) -> i64 {
        self.levels.len() as i64 - 1
    }

    pub fn level(&self, n: i64) -> &SetPresheaf {
        &self.levels[n as usize]
    }

    pub fn face(&self, n: i64, i: i64) -> &SetPresheafMorphism {
        &self.faces[(n - 1) as usize][i as usize]
    }

    pub fn degeneracy(&self, n: i64, i: i64) -> &SetPresheafMorphism {
        &self.degeneracies[n as usize][i as usize]
    }

    /// A new truncation with one more level appended; re-checks every
    /// simplicial identity.
    pub fn with_level(
        &self,
        cat: &FinCategory,
        level: SetPresheaf,
        faces: Vec<SetPresheafMorphism>,
        degeneracies: Vec<SetPresheafMorphism>,
    ) -> Result<Self, Error> {
        let mut ls = self.levels.clone();
        ls.push(level);
        let mut fs = self.faces.clone();
        fs.push(faces);
        let mut ds = self.degeneracies.clone();
        ds.push(degeneracies);
        SimplicialSetPresheaf::new(cat, ls, fs, ds)
    }
}

/// Linearizes a set-presheaf morphism into the free modules on its source
/// and target.
pub fn linearize_map(
    cat: &FinCategory,
    ring: Ring,
    source: &SetPresheaf,
    target: &SetPresheaf,
    map: &SetPresheafMorphism,
) -> ModPresheafMorphism {
    let src = source.linearize(cat, ring);
    let tgt = target.linearize(cat, ring);
    let components: Vec<ModuleMap> = cat
        .objects()
        .map(|o| {
            let mut m =
                crate::exactalg::Matrix::zero(ring, target.size(o), source.size(o));
            for i in 0..source.size(o) {
                let j = map.apply(o, i);
                m.set(j, i, ring.add(m.get(j, i), &ring.one()));
            }
            ModuleMap::new(src.value(o).clone(), tgt.value(o).clone(), m)
                .expect("free modules accept any matrix")
        })
        .collect();
    ModPresheafMorphism::new(cat, &src, &tgt, components)
        .expect("linearization preserves naturality")
}

/// Free `Λ`-linearization of a simplicial set presheaf.
pub fn linearize(
    site: &Arc<Site>,
    ring: Ring,
    x: &SimplicialSetPresheaf,
) -> SimplicialModPresheaf {
    let cat = site.category();
    let levels: Vec<ModPresheaf> =
        x.levels.iter().map(|l| l.linearize(cat, ring)).collect();
    let faces = (1..=x.truncation())
        .map(|n| {
            (0..=n)
                .map(|i| linearize_map(cat, ring, x.level(n), x.level(n - 1), x.face(n, i)))
                .collect()
        })
        .collect();
    let degeneracies = (0..x.truncation())
        .map(|n| {
            (0..=n)
                .map(|i| {
                    linearize_map(cat, ring, x.level(n), x.level(n + 1), x.degeneracy(n, i))
                })
                .collect()
        })
        .collect();
    SimplicialModPresheaf::new(site.clone(), ring, levels, faces, degeneracies)
        .expect("linearization preserves the simplicial identities")
}

/// A simplicial set presheaf with an augmentation coequalizing `d₀, d₁`.
#[derive(Clone, Debug)]
pub struct AugmentedSimplicial {
    pub body: SimplicialSetPresheaf,
    pub base: SetPresheaf,
    pub augmentation: SetPresheafMorphism,
}

impl AugmentedSimplicial {
    pub fn new(
        cat: &FinCategory,
        body: SimplicialSetPresheaf,
        base: SetPresheaf,
        augmentation: SetPresheafMorphism,
    ) -> Result<Self, Error> {
        if body.truncation() >= 1 {
            for o in cat.objects() {
                for e in 0..body.level(1).size(o) {
                    let via0 = augmentation.apply(o, body.face(1, 0).apply(o, e));
                    let via1 = augmentation.apply(o, body.face(1, 1).apply(o, e));
                    if via0 != via1 {
                        return Err(Error::SimplicialIdentity(
                            "augmentation does not coequalize d₀, d₁".into(),
                        ));
                    }
                }
            }
        }
        Ok(AugmentedSimplicial { body, base, augmentation })
    }

    /// The face `X_n → X_{n−1}` where level `−1` means the base: index `i`
    /// picks `d_i`, and at `n = 0` every face is the augmentation.
    pub(crate) fn face_or_augmentation(&self, n: i64, i: i64, o: crate::site::ObjId, e: usize) -> usize {
        if n == 0 {
            self.augmentation.apply(o, e)
        } else {
            self.body.face(n, i).apply(o, e)
        }
    }

    /// Extends the truncation by one coskeletal level: the new top level is
    /// the matching object, with projection faces and the degeneracies
    /// forced by the simplicial identities.
    pub fn coskeletal_extend(&self, cat: &FinCategory) -> Result<AugmentedSimplicial, Error> {
        let n = self.body.truncation() + 1;
        let below = self.body.level(n - 1);
        let tuples = compatible_tuples(cat, self, n);
        let level = tuple_presheaf(cat, below, &tuples)?;
        let find = |o: crate::site::ObjId, t: &[usize]| {
            tuples[o.0]
                .iter()
                .position(|u| u == t)
                .expect("constructed tuple is compatible")
        };
        // Faces are the projections.
        let new_faces: Vec<SetPresheafMorphism> = (0..=n)
            .map(|i| {
                let components = cat
                    .objects()
                    .map(|o| tuples[o.0].iter().map(|t| t[i as usize]).collect())
                    .collect();
                SetPresheafMorphism::new(cat, &level, below, components)
            })
            .collect::<Result<_, _>>()?;
        // Degeneracies: entry j of s_i(e) is s_{i−1} d_j e for j < i, e for
        // j ∈ {i, i+1}, and s_i d_{j−1} e for j > i + 1.
        let new_degens: Vec<SetPresheafMorphism> = (0..n)
            .map(|i| {
                let components = cat
                    .objects()
                    .map(|o| {
                        (0..below.size(o))
                            .map(|e| {
                                let t: Vec<usize> = (0..=n)
                                    .map(|j| {
                                        if j == i || j == i + 1 {
                                            e
                                        } else if j < i {
                                            let de =
                                                self.face_or_augmentation(n - 1, j, o, e);
                                            self.body.degeneracy(n - 2, i - 1).apply(o, de)
                                        } else {
                                            let de = self
                                                .face_or_augmentation(n - 1, j - 1, o, e);
                                            self.body.degeneracy(n - 2, i).apply(o, de)
                                        }
                                    })
                                    .collect();
                                find(o, &t)
                            })
                            .collect()
                    })
                    .collect();
                SetPresheafMorphism::new(cat, below, &level, components)
            })
            .collect::<Result<_, _>>()?;
        let body = self.body.with_level(cat, level, new_faces, new_degens)?;
        AugmentedSimplicial::new(cat, body, self.base.clone(), self.augmentation.clone())
    }
}

/// All boundary-compatible tuples `(x_0, …, x_n)` of `(n−1)`-simplices,
/// per object; needs the truncation only up to level `n − 1`.
pub(crate) fn compatible_tuples(
    cat: &FinCategory,
    x: &AugmentedSimplicial,
    n: i64,
) -> Vec<Vec<Vec<usize>>> {
    let below = x.body.level(n - 1);
    let mut tuples: Vec<Vec<Vec<usize>>> = Vec::with_capacity(cat.object_count());
    for o in cat.objects() {
        let m = below.size(o);
        let mut acc: Vec<Vec<usize>> = vec![vec![]];
        for _slot in 0..=n {
            let mut next = Vec::new();
            for t in &acc {
                for cand in 0..m {
                    let j = t.len() as i64;
                    let ok = (0..j).all(|i| {
                        x.face_or_augmentation(n - 1, i, o, cand)
                            == x.face_or_augmentation(n - 1, j - 1, o, t[i as usize])
                    });
                    if ok {
                        let mut t2 = t.clone();
                        t2.push(cand);
                        next.push(t2);
                    }
                }
            }
            acc = next;
        }
        tuples.push(acc);
    }
    tuples
}

/// The presheaf of boundary tuples, with componentwise restrictions.
pub(crate) fn tuple_presheaf(
    cat: &FinCategory,
    below: &SetPresheaf,
    tuples: &[Vec<Vec<usize>>],
) -> Result<SetPresheaf, Error> {
    let values: Vec<Vec<String>> = cat
        .objects()
        .map(|o| {
            tuples[o.0]
                .iter()
                .map(|t| {
                    let names: Vec<&str> =
                        t.iter().map(|&i| below.value(o)[i].as_str()).collect();
                    format!("({})", names.join(","))
                })
                .collect()
        })
        .collect();
    let restrictions: Vec<Vec<usize>> = cat
        .morphisms()
        .map(|f| {
            let (a, b) = (cat.src(f), cat.dst(f));
            tuples[b.0]
                .iter()
                .map(|t| {
                    let moved: Vec<usize> =
                        t.iter().map(|&i| below.restrict(f, i)).collect();
                    tuples[a.0]
                        .iter()
                        .position(|u| *u == moved)
                        .expect("restriction preserves compatibility")
                })
                .collect()
        })
        .collect();
    SetPresheaf::new(cat, values, restrictions)
}

/// The `n`-th matching object of an augmented simplicial set presheaf,
/// together with the comparison map `X_n → M_n`: tuples
/// `(x_0, …, x_n)` of `(n−1)`-simplices with `d_i x_j = d_{j−1} x_i` for
/// `i < j` (the level `−1` faces being the augmentation). For `n = 0` the
/// matching object is the base and the comparison is the augmentation.
pub fn matching_object(
    cat: &FinCategory,
    x: &AugmentedSimplicial,
    n: i64,
) -> Result<(SetPresheaf, SetPresheafMorphism), Error> {
    if n > x.body.truncation() {
        return Err(Error::OutsideValidity(n, 0, x.body.truncation()));
    }
    if n == 0 {
        return Ok((x.base.clone(), x.augmentation.clone()));
    }
    let below = x.body.level(n - 1);
    let tuples = compatible_tuples(cat, x, n);
    let matching = tuple_presheaf(cat, below, &tuples)?;
    let components: Vec<Vec<usize>> = cat
        .objects()
        .map(|o| {
            (0..x.body.level(n).size(o))
                .map(|e| {
                    let boundary: Vec<usize> =
                        (0..=n).map(|i| x.body.face(n, i).apply(o, e)).collect();
                    tuples[o.0]
                        .iter()
                        .position(|t| *t == boundary)
                        .expect("boundaries are compatible tuples")
                })
                .collect()
        })
        .collect();
    let comparison =
        SetPresheafMorphism::new(cat, x.body.level(n), &matching, components)?;
    Ok((matching, comparison))
}
