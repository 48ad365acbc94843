//! Input schemas and their validation: JSON descriptions of sites,
//! presheaves, complexes and diagrams are checked field-by-field before any
//! computation starts, and violations name the offending path.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use finsite::complex::{module_complex, Complex, ComplexMorphism, TERMINAL_SITE};
use finsite::exactalg::{FpModule, Matrix, ModuleMap, Ring};
use finsite::resolve::ComplexDiagram;
use finsite::site::{
    Coverage, FinCategory, ModPresheaf, ModPresheafMorphism, ObjId, Site,
};

/// A command failure, split by exit code: malformed input (exit 2) versus a
/// mathematical failure (exit 1).
pub enum Failure {
    Input(String),
    Math(String),
}

pub fn input<E: Display>(path: &str, e: E) -> Failure {
    Failure::Input(format!("{path}: {e}"))
}

pub fn math<E: Display>(e: E) -> Failure {
    Failure::Math(e.to_string())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input(&path.display().to_string(), e))?;
    serde_json::from_str(&text).map_err(|e| input(&path.display().to_string(), e))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SiteSpec {
    objects: Vec<String>,
    #[serde(default)]
    le: Vec<(String, String)>,
    #[serde(default)]
    covers: Vec<CoverSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverSpec {
    object: String,
    by: Vec<String>,
}

/// Parses a site file into its category and coverage without validating
/// the site axioms (the `site-validate` command reports on those).
pub fn load_site_raw(path: &Path) -> Result<(FinCategory, Coverage), Failure> {
    let file = path.display().to_string();
    let spec: SiteSpec = read_json(path)?;
    let pairs: Vec<(&str, &str)> =
        spec.le.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let cat = FinCategory::poset(spec.objects.clone(), &pairs)
        .map_err(|e| input(&format!("{file}: le"), e))?;
    let mut cov = Coverage::trivial(&cat);
    for (i, cover) in spec.covers.iter().enumerate() {
        let c = cat
            .object_by_name(&cover.object)
            .map_err(|e| input(&format!("{file}: covers[{i}].object"), e))?;
        let mut family = Vec::new();
        for (j, u) in cover.by.iter().enumerate() {
            let uo = cat
                .object_by_name(u)
                .map_err(|e| input(&format!("{file}: covers[{i}].by[{j}]"), e))?;
            match cat.hom(uo, c).as_slice() {
                [m] => family.push(*m),
                _ => {
                    return Err(Failure::Input(format!(
                        "{file}: covers[{i}].by[{j}]: no unique morphism {u} -> {}",
                        cover.object
                    )))
                }
            }
        }
        cov.add_family(c, family);
    }
    Ok((cat, cov))
}

pub fn load_site(path: &Path) -> Result<Arc<Site>, Failure> {
    let (cat, cov) = load_site_raw(path)?;
    Site::new(cat, cov)
        .map(Arc::new)
        .map_err(|e| input(&path.display().to_string(), e))
}

pub fn parse_ring(tag: &str, p: Option<u64>) -> Result<Ring, Failure> {
    match tag {
        "Z" => Ok(Ring::integers()),
        "Q" => Ok(Ring::rationals()),
        "Fp" => {
            let p = p.ok_or_else(|| {
                Failure::Input("--p: required together with --ring Fp".to_string())
            })?;
            Ring::prime_field(p).map_err(|e| input("--p", e))
        }
        other => Err(Failure::Input(format!(
            "--ring: unknown ring {other:?}; expected Z, Q or Fp"
        ))),
    }
}

/// Parses an inclusive `lo..hi` degree window.
pub fn parse_window(s: &str) -> Result<(i64, i64), Failure> {
    let err = || {
        Failure::Input(format!(
            "--window: cannot parse {s:?}; expected lo..hi with integer bounds"
        ))
    };
    let (lo, hi) = s.split_once("..").ok_or_else(err)?;
    let lo: i64 = lo.trim().parse().map_err(|_| err())?;
    let hi: i64 = hi.trim().parse().map_err(|_| err())?;
    if lo > hi {
        return Err(err());
    }
    Ok((lo, hi))
}

#[derive(Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModuleSpec {
    Free(usize),
    Cyclic(i64),
    Presentation {
        generators: usize,
        #[serde(default)]
        relations: Vec<Vec<i64>>,
    },
}

fn build_module(ring: Ring, spec: &ModuleSpec, path: &str) -> Result<FpModule, Failure> {
    match spec {
        ModuleSpec::Free(n) => Ok(FpModule::free(ring, *n)),
        ModuleSpec::Cyclic(n) => Ok(FpModule::cyclic(ring, *n)),
        ModuleSpec::Presentation { generators, relations } => {
            let cols: Vec<Matrix> = relations
                .iter()
                .enumerate()
                .map(|(i, rel)| {
                    if rel.len() != *generators {
                        return Err(Failure::Input(format!(
                            "{path}.relations[{i}]: expected {generators} entries, got {}",
                            rel.len()
                        )));
                    }
                    let mut col = Matrix::zero(ring, *generators, 1);
                    for (r, &v) in rel.iter().enumerate() {
                        col.set(r, 0, ring.from_i64(v));
                    }
                    Ok(col)
                })
                .collect::<Result<_, _>>()?;
            Ok(FpModule::new(ring, *generators, Matrix::from_columns(ring, *generators, &cols)))
        }
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PresheafSpec {
    Zero,
    Constant(ModuleSpec),
    ConstantCyclic(i64),
    Representable(String),
    Sum(Vec<PresheafSpec>),
}

pub fn build_presheaf(
    site: &Site,
    ring: Ring,
    spec: &PresheafSpec,
    path: &str,
) -> Result<ModPresheaf, Failure> {
    let cat = site.category();
    match spec {
        PresheafSpec::Zero => Ok(ModPresheaf::zero(cat, ring)),
        PresheafSpec::Constant(m) => {
            Ok(ModPresheaf::constant(cat, build_module(ring, m, path)?))
        }
        PresheafSpec::ConstantCyclic(n) => {
            Ok(ModPresheaf::constant(cat, FpModule::cyclic(ring, *n)))
        }
        PresheafSpec::Representable(name) => {
            let c = cat
                .object_by_name(name)
                .map_err(|e| input(&format!("{path}.representable"), e))?;
            Ok(ModPresheaf::representable(cat, ring, c))
        }
        PresheafSpec::Sum(parts) => {
            let mut acc = ModPresheaf::zero(cat, ring);
            for (i, part) in parts.iter().enumerate() {
                acc = acc.direct_sum(
                    cat,
                    &build_presheaf(site, ring, part, &format!("{path}.sum[{i}]"))?,
                );
            }
            Ok(acc)
        }
    }
}

pub fn load_presheaf(path: &Path, site: &Site, ring: Ring) -> Result<ModPresheaf, Failure> {
    let spec: PresheafSpec = read_json(path)?;
    build_presheaf(site, ring, &spec, &path.display().to_string())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexSpec {
    #[serde(default)]
    lo: i64,
    levels: Vec<PresheafSpec>,
    /// `differentials[i]` maps level `lo + i + 1` to level `lo + i`:
    /// a row-major integer matrix per object, omitted objects are zero.
    #[serde(default)]
    differentials: Vec<BTreeMap<String, Vec<Vec<i64>>>>,
}

fn int_matrix(
    ring: Ring,
    rows: usize,
    cols: usize,
    data: &[Vec<i64>],
    path: &str,
) -> Result<Matrix, Failure> {
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return Err(Failure::Input(format!(
            "{path}: expected a {rows}x{cols} matrix"
        )));
    }
    let mut m = Matrix::zero(ring, rows, cols);
    for (r, row) in data.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            m.set(r, c, ring.from_i64(v));
        }
    }
    Ok(m)
}

pub fn load_complex(path: &Path, site: &Arc<Site>, ring: Ring) -> Result<Complex, Failure> {
    let file = path.display().to_string();
    let spec: ComplexSpec = read_json(path)?;
    let cat = site.category();
    let levels: Vec<ModPresheaf> = spec
        .levels
        .iter()
        .enumerate()
        .map(|(i, l)| build_presheaf(site, ring, l, &format!("{file}: levels[{i}]")))
        .collect::<Result<_, _>>()?;
    if !levels.is_empty() && spec.differentials.len() != levels.len() - 1 {
        return Err(Failure::Input(format!(
            "{file}: differentials: expected {} entries, got {}",
            levels.len() - 1,
            spec.differentials.len()
        )));
    }
    let diffs: Vec<ModPresheafMorphism> = spec
        .differentials
        .iter()
        .enumerate()
        .map(|(i, entry)| {
            let dpath = format!("{file}: differentials[{i}]");
            for name in entry.keys() {
                cat.object_by_name(name).map_err(|e| input(&dpath, e))?;
            }
            let components: Vec<ModuleMap> = cat
                .objects()
                .map(|o| {
                    let src = levels[i + 1].value(o).clone();
                    let tgt = levels[i].value(o).clone();
                    let matrix = match entry.get(cat.object_name(o)) {
                        None => Matrix::zero(ring, tgt.generators(), src.generators()),
                        Some(data) => int_matrix(
                            ring,
                            tgt.generators(),
                            src.generators(),
                            data,
                            &format!("{dpath}.{}", cat.object_name(o)),
                        )?,
                    };
                    ModuleMap::new(src, tgt, matrix)
                        .map_err(|e| input(&format!("{dpath}.{}", cat.object_name(o)), e))
                })
                .collect::<Result<_, _>>()?;
            ModPresheafMorphism::new(cat, &levels[i + 1], &levels[i], components)
                .map_err(|e| input(&dpath, e))
        })
        .collect::<Result<_, _>>()?;
    Complex::new(site.clone(), ring, spec.lo, levels, diffs)
        .map_err(|e| input(&file, e))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleComplexSpec {
    #[serde(default)]
    lo: i64,
    levels: Vec<ModuleSpec>,
    #[serde(default)]
    differentials: Vec<Vec<Vec<i64>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapSpec {
    #[serde(default)]
    lo: i64,
    components: Vec<Vec<Vec<i64>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramSpec {
    /// One complex of plain modules per site object, keyed by name.
    objects: BTreeMap<String, ModuleComplexSpec>,
    /// One chain map per non-identity morphism, keyed by morphism name;
    /// `f: a → b` is assigned a map `objects[a] → objects[b]`.
    #[serde(default)]
    morphisms: BTreeMap<String, MapSpec>,
}

fn build_module_complex(
    ring: Ring,
    spec: &ModuleComplexSpec,
    path: &str,
) -> Result<Complex, Failure> {
    let levels: Vec<FpModule> = spec
        .levels
        .iter()
        .enumerate()
        .map(|(i, m)| build_module(ring, m, &format!("{path}.levels[{i}]")))
        .collect::<Result<_, _>>()?;
    if !levels.is_empty() && spec.differentials.len() != levels.len() - 1 {
        return Err(Failure::Input(format!(
            "{path}.differentials: expected {} entries, got {}",
            levels.len() - 1,
            spec.differentials.len()
        )));
    }
    let diffs: Vec<Matrix> = spec
        .differentials
        .iter()
        .enumerate()
        .map(|(i, data)| {
            int_matrix(
                ring,
                levels[i].generators(),
                levels[i + 1].generators(),
                data,
                &format!("{path}.differentials[{i}]"),
            )
        })
        .collect::<Result<_, _>>()?;
    module_complex(ring, spec.lo, levels, diffs).map_err(|e| input(path, e))
}

pub fn load_diagram(
    path: &Path,
    site: &Arc<Site>,
    ring: Ring,
) -> Result<ComplexDiagram, Failure> {
    let file = path.display().to_string();
    let spec: DiagramSpec = read_json(path)?;
    let cat = site.category();
    for name in spec.objects.keys() {
        cat.object_by_name(name)
            .map_err(|e| input(&format!("{file}: objects"), e))?;
    }
    let objects: Vec<Complex> = cat
        .objects()
        .map(|o| {
            let name = cat.object_name(o);
            let entry = spec.objects.get(name).ok_or_else(|| {
                Failure::Input(format!("{file}: objects: missing entry for {name:?}"))
            })?;
            build_module_complex(ring, entry, &format!("{file}: objects.{name}"))
        })
        .collect::<Result<_, _>>()?;
    let pt = ObjId(0);
    let tcat = TERMINAL_SITE.category();
    let morphisms: Vec<ComplexMorphism> = cat
        .morphisms()
        .map(|f| {
            let (a, b) = (cat.src(f), cat.dst(f));
            if f == cat.identity(a) {
                return Ok(ComplexMorphism::identity(&objects[a.0]));
            }
            let name = cat.morphism_name(f);
            let entry = spec.morphisms.get(name).ok_or_else(|| {
                Failure::Input(format!("{file}: morphisms: missing entry for {name:?}"))
            })?;
            let mpath = format!("{file}: morphisms.{name}");
            let src = &objects[a.0];
            let tgt = &objects[b.0];
            let components: Vec<ModPresheafMorphism> = entry
                .components
                .iter()
                .enumerate()
                .map(|(i, data)| {
                    let n = entry.lo + i as i64;
                    let src_level = src.level(n);
                    let tgt_level = tgt.level(n);
                    let matrix = int_matrix(
                        ring,
                        tgt_level.value(pt).generators(),
                        src_level.value(pt).generators(),
                        data,
                        &format!("{mpath}.components[{i}]"),
                    )?;
                    let map = ModuleMap::new(
                        src_level.value(pt).clone(),
                        tgt_level.value(pt).clone(),
                        matrix,
                    )
                    .map_err(|e| input(&format!("{mpath}.components[{i}]"), e))?;
                    ModPresheafMorphism::new(tcat, &src_level, &tgt_level, vec![map])
                        .map_err(|e| input(&format!("{mpath}.components[{i}]"), e))
                })
                .collect::<Result<_, _>>()?;
            ComplexMorphism::new(src.clone(), tgt.clone(), entry.lo, components)
                .map_err(|e| input(&mpath, e))
        })
        .collect::<Result<_, _>>()?;
    ComplexDiagram::new(cat, objects, morphisms)
        .map_err(|e| input(&file, e))
}
