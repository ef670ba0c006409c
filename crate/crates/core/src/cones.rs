//! The positivity cone family and the Hermitian-preserving family.
//!
//! At order zero the cone `K` is the positive semidefinite operators (the
//! nonnegative reals for the trivial type). At `a -> b` it is the completely
//! `K`-preserving maps: those that keep every `K` input inside `K` even when
//! applied in parallel with an identity of matching order. `H` is the
//! analogous family built on Hermitian operators, where plain preservation
//! already suffices.
//!
//! Two membership procedures are provided. The `choi` method decides via the
//! spectrum of the Choi matrix, elevating the cone/PSD correspondence to a
//! decision procedure. The `definitional` method replays the definition with
//! sampled probe systems: it can refute membership and report a reproducible
//! witness, but exhausting its budget only yields `inconclusive` — the
//! quantifier it samples is infinite.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::choi::{choi, choi_dim, unchoi};
use crate::error::{Error, Result};
use crate::linmap::{hilbert_dim, identity_map, C64, CMatrix, TypedMap};
use crate::parallel::parmap;
use crate::registry::SystemRegistry;
use crate::types::{Shape, Type};

/// Default spectral tolerance for membership decisions.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Default number of sampled inputs per probe type in definitional mode.
pub const DEFAULT_PROBE_BUDGET: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Member,
    NonMember,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipMethod {
    Choi,
    Definitional,
}

/// Which cone family a check or generator refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeFamily {
    K,
    H,
}

/// The probe that exposed a definitional violation; regenerate the offending
/// input by rerunning the sampler with the recorded seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeWitness {
    pub probe_type: String,
    pub probe_seed: u64,
}

/// Outcome of a cone membership check.
///
/// `min_eigenvalue` carries the offending (or confirming) spectrum edge:
/// for the choi method, the smallest eigenvalue of the Choi matrix; for
/// definitional refutations, the smallest eigenvalue observed at the
/// violating base case. Non-member verdicts are always reproducible, via
/// the spectrum at order zero or the recorded probe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeVerdict {
    pub decision: Decision,
    pub method: MembershipMethod,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_eigenvalue: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ProbeWitness>,
}

impl ConeVerdict {
    pub fn is_member(&self) -> bool {
        self.decision == Decision::Member
    }
}

/// Spectral summary of a square matrix viewed as a Hermitian candidate.
pub(crate) struct PsdStats {
    /// max-abs deviation from the adjoint
    pub defect: f64,
    /// smallest eigenvalue of the Hermitian part
    pub min_eigenvalue: f64,
    /// spectral radius of the Hermitian part
    pub radius: f64,
}

pub(crate) fn psd_stats(c: &CMatrix) -> PsdStats {
    let adj = c.adjoint();
    let defect = (c - &adj).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let herm = (c + adj) * C64::new(0.5, 0.0);
    let eigs = crate::eigen::hermitian_eigenvalues(&herm);
    let mut min_eigenvalue = f64::INFINITY;
    let mut radius: f64 = 0.0;
    for l in &eigs {
        min_eigenvalue = min_eigenvalue.min(*l);
        radius = radius.max(l.abs());
    }
    if !min_eigenvalue.is_finite() {
        min_eigenvalue = 0.0; // 0x0 matrix cannot occur, but stay total
    }
    PsdStats { defect, min_eigenvalue, radius }
}

fn psd_accepts(stats: &PsdStats, tol: f64) -> bool {
    let scale = stats.radius.max(1.0);
    stats.defect <= tol * scale && stats.min_eigenvalue >= -tol * scale
}

/// The 1, `E_ii`, `E_ij + E_ji`, `i(E_ij - E_ji)` basis of Hermitian
/// `d x d` matrices (real-spanning, `d*d` elements).
pub fn hermitian_basis(d: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(d * d);
    let one = C64::new(1.0, 0.0);
    let i_unit = C64::new(0.0, 1.0);
    for i in 0..d {
        let mut m = CMatrix::zeros(d, d);
        m[(i, i)] = one;
        out.push(m);
    }
    for i in 0..d {
        for j in (i + 1)..d {
            let mut sym = CMatrix::zeros(d, d);
            sym[(i, j)] = one;
            sym[(j, i)] = one;
            out.push(sym);
            let mut asym = CMatrix::zeros(d, d);
            asym[(i, j)] = i_unit;
            asym[(j, i)] = -i_unit;
            out.push(asym);
        }
    }
    out
}

/// A finite real-spanning generator set of `H(a)`: the Hermitian basis of
/// the Choi space of `a`, pulled back through the linearization. For
/// elementary `a` this is literally the Hermitian matrix basis.
pub fn hermitian_generators(a: &Type, registry: &Arc<SystemRegistry>) -> Result<Vec<TypedMap>> {
    let d = choi_dim(a, registry)?;
    hermitian_basis(d)
        .into_iter()
        .map(|h| unchoi(&h, a, registry))
        .collect()
}

/// Hermitian-preservation check.
///
/// Elementary maps are compared against their adjoint (for `I`, the scalar
/// must be real). An arrow map must keep every generator of `H(input)`
/// inside `H(output)`, recursively; preservation on a real-spanning set
/// extends to all of `H` by real-linearity.
pub fn in_h(m: &TypedMap, tol: f64) -> Result<bool> {
    match m.ty() {
        Type::Elementary(_) => {
            if m.ty().is_trivial() {
                return Ok(m.matrix()[(0, 0)].im.abs() <= tol);
            }
            let defect = (m.matrix() - m.matrix().adjoint())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            Ok(defect <= tol)
        }
        Type::Arrow(a, _) => {
            for rho in hermitian_generators(a, m.registry())? {
                if !in_h(&m.apply(&rho)?, tol)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Cone membership via the Choi spectrum: member exactly when the Choi
/// matrix is Hermitian and its minimum eigenvalue clears
/// `-tol * max(1, spectral radius)`.
pub fn in_k_choi(m: &TypedMap, tol: f64) -> Result<ConeVerdict> {
    let stats = psd_stats(&choi(m)?);
    let decision = if psd_accepts(&stats, tol) {
        Decision::Member
    } else {
        Decision::NonMember
    };
    Ok(ConeVerdict {
        decision,
        method: MembershipMethod::Choi,
        tolerance: tol,
        min_eigenvalue: Some(stats.min_eigenvalue),
        witness: None,
    })
}

/// Cone membership by replaying the definition with sampled probes.
///
/// Order zero is an exact positive-semidefiniteness decision. At higher
/// orders the check runs `probes` sampled inputs against an identity
/// extension for every probe structure of the required order; a violation
/// refutes membership with a reproducible witness, while a clean run is
/// only `inconclusive` — the definition quantifies over infinitely many
/// probe systems.
pub fn in_k_definitional(
    m: &TypedMap,
    tol: f64,
    probes: u32,
    seed: u64,
) -> Result<ConeVerdict> {
    let verdict = |decision, min_eig, witness| ConeVerdict {
        decision,
        method: MembershipMethod::Definitional,
        tolerance: tol,
        min_eigenvalue: min_eig,
        witness,
    };

    if m.ty().is_elementary() {
        let stats = psd_stats(m.matrix());
        let decision = if psd_accepts(&stats, tol) {
            Decision::Member
        } else {
            Decision::NonMember
        };
        return Ok(verdict(decision, Some(stats.min_eigenvalue), None));
    }

    let (a, b) = m.ty().decompose_arrow()?;
    let order = m.ty().order();
    for (shape_index, z) in probe_types(order - 1, m.registry())?.into_iter().enumerate() {
        let extended_reg = Arc::new(m.registry().extended_with(
            z.labels().into_iter().map(|l| (l.clone(), 2)),
        )?);
        let m_ext = m.with_registry(extended_reg.clone())?;
        let id_z = identity_map(&z, &extended_reg)?;
        let extension = parmap(&m_ext, &id_z)?;
        let input_ty = a.partype(&z);
        let _output_ty = b.partype(&z);
        for p in 0..probes {
            let probe_seed = mix_seed(seed, shape_index as u64, p as u64);
            let rho = random_k_choi_free(&input_ty, probe_seed, &extended_reg)?;
            let out = extension.apply(&rho)?;
            let inner = in_k_definitional(&out, tol, probes, mix_seed(probe_seed, 0x9e37, 1))?;
            if inner.decision == Decision::NonMember {
                return Ok(verdict(
                    Decision::NonMember,
                    inner.min_eigenvalue,
                    Some(ProbeWitness { probe_type: z.to_string(), probe_seed }),
                ));
            }
        }
    }
    Ok(verdict(Decision::Inconclusive, None, None))
}

/// Dispatch on the method; `probes`/`seed` only matter definitionally.
pub fn in_k(
    m: &TypedMap,
    tol: f64,
    method: MembershipMethod,
    probes: u32,
    seed: u64,
) -> Result<ConeVerdict> {
    match method {
        MembershipMethod::Choi => in_k_choi(m, tol),
        MembershipMethod::Definitional => in_k_definitional(m, tol, probes, seed),
    }
}

/// Probe types for order `k` checks: every tree shape of height exactly
/// `k`, instantiated with fresh qubit labels. Deterministic for a given
/// registry, so recorded witnesses reproduce.
fn probe_types(height: u32, registry: &SystemRegistry) -> Result<Vec<Type>> {
    let shapes = Shape::enumerate_exact(height);
    let mut out = Vec::with_capacity(shapes.len());
    for shape in shapes {
        let labels = registry.fresh_labels(shape.leaf_count());
        let mut supply = labels.into_iter();
        let z = shape.instantiate(&mut supply).expect("enough fresh labels");
        out.push(z);
    }
    Ok(out)
}

fn mix_seed(seed: u64, lane: u64, index: u64) -> u64 {
    // splitmix64 over the packed inputs
    let mut z = seed
        .wrapping_add(lane.wrapping_mul(0x9e3779b97f4a7c15))
        .wrapping_add(index.wrapping_mul(0xbf58476d1ce4e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// How a random cone element was produced. Elements that came through the
/// Choi linearization are flagged so tests validating that linearization
/// can quarantine them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorRoute {
    /// `G† G` over a random complex rectangle (order 0).
    Gram,
    /// Random Kraus set `Σ K_i · K_i†` (order 1).
    Kraus,
    /// Sum of measure-and-prepare dyads `Σ |N_t⟩⟨P_t|` over lower-order
    /// cone elements (order >= 2, linearization-free).
    MeasurePrepare,
    /// Composition through an intermediate system (order >= 2,
    /// linearization-free).
    Compose,
    /// `unchoi` of a random PSD matrix (order >= 2, flagged).
    ChoiGenerated,
    /// Difference of two K elements (H family).
    Span,
}

impl GeneratorRoute {
    pub fn is_choi_generated(self) -> bool {
        matches!(self, GeneratorRoute::ChoiGenerated)
    }
}

/// A generated cone element plus its construction route.
#[derive(Clone, Debug)]
pub struct GeneratedElement {
    pub map: TypedMap,
    pub route: GeneratorRoute,
    /// True if any step of the construction went through the Choi
    /// linearization.
    pub choi_generated: bool,
}

/// Draw a pseudo-random element of the requested cone, deterministic per
/// seed.
pub fn random_cone_element(
    x: &Type,
    cone: ConeFamily,
    seed: u64,
    registry: &Arc<SystemRegistry>,
) -> Result<TypedMap> {
    Ok(random_cone_element_tagged(x, cone, seed, registry)?.map)
}

/// As [`random_cone_element`], also reporting the construction route.
pub fn random_cone_element_tagged(
    x: &Type,
    cone: ConeFamily,
    seed: u64,
    registry: &Arc<SystemRegistry>,
) -> Result<GeneratedElement> {
    registry.check_type(x)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match cone {
        ConeFamily::K => random_k_element(x, &mut rng, registry, true, 0),
        ConeFamily::H => {
            let plus = random_k_element(x, &mut rng, registry, true, 0)?;
            let minus = random_k_element(x, &mut rng, registry, true, 0)?;
            let alpha = C64::new(rng.gen_range(0.2..1.5), 0.0);
            let beta = C64::new(rng.gen_range(0.2..1.5), 0.0);
            let map = plus.map.scale(alpha).sub(&minus.map.scale(beta))?;
            Ok(GeneratedElement {
                map,
                route: GeneratorRoute::Span,
                choi_generated: plus.choi_generated || minus.choi_generated,
            })
        }
    }
}

/// Linearization-free K sampling, used for definitional probe inputs.
fn random_k_choi_free(x: &Type, seed: u64, registry: &Arc<SystemRegistry>) -> Result<TypedMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_k_element(x, &mut rng, registry, false, 0)?.map)
}

/// Positive rescaling keeps cone membership and keeps every generated map at
/// unit max-abs, so absolute tolerances behave uniformly downstream.
fn normalized(element: GeneratedElement) -> GeneratedElement {
    let peak = element.map.max_abs();
    if peak > 0.0 {
        GeneratedElement {
            map: element.map.scale(C64::new(1.0 / peak, 0.0)),
            ..element
        }
    } else {
        element
    }
}

fn random_k_element(
    x: &Type,
    rng: &mut ChaCha8Rng,
    registry: &Arc<SystemRegistry>,
    allow_choi: bool,
    depth: u32,
) -> Result<GeneratedElement> {
    random_k_unnormalized(x, rng, registry, allow_choi, depth).map(normalized)
}

fn random_k_unnormalized(
    x: &Type,
    rng: &mut ChaCha8Rng,
    registry: &Arc<SystemRegistry>,
    allow_choi: bool,
    depth: u32,
) -> Result<GeneratedElement> {
    match x.order() {
        0 => {
            let d = hilbert_dim(x, registry)?;
            let map = TypedMap::new(x.clone(), registry.clone(), gram_psd(d, rng))?;
            Ok(GeneratedElement { map, route: GeneratorRoute::Gram, choi_generated: false })
        }
        1 => {
            let (a, b) = x.decompose_arrow()?;
            let da = hilbert_dim(a, registry)?;
            let db = hilbert_dim(b, registry)?;
            let count = rng.gen_range(1..=4usize);
            let scale = C64::new(1.0 / ((count * da) as f64).sqrt(), 0.0);
            let mut matrix = CMatrix::zeros(db * db, da * da);
            for _ in 0..count {
                let k = random_complex(db, da, rng) * scale;
                let conj = k.map(|z| z.conj());
                matrix += k.kronecker(&conj);
            }
            let map = TypedMap::new(x.clone(), registry.clone(), matrix)?;
            Ok(GeneratedElement { map, route: GeneratorRoute::Kraus, choi_generated: false })
        }
        _ => {
            let route = if allow_choi && depth == 0 {
                match rng.gen_range(0..3u8) {
                    0 => GeneratorRoute::MeasurePrepare,
                    1 => GeneratorRoute::Compose,
                    _ => GeneratorRoute::ChoiGenerated,
                }
            } else {
                GeneratorRoute::MeasurePrepare
            };
            match route {
                GeneratorRoute::MeasurePrepare => {
                    measure_prepare(x, rng, registry, depth).map(|map| GeneratedElement {
                        map,
                        route,
                        choi_generated: false,
                    })
                }
                GeneratorRoute::Compose => {
                    let (a, b) = x.decompose_arrow()?;
                    let mid = intermediate_type(registry);
                    let first =
                        random_k_element(&Type::arrow(a.clone(), mid.clone()), rng, registry, false, depth + 1)?;
                    let second =
                        random_k_element(&Type::arrow(mid, b.clone()), rng, registry, false, depth + 1)?;
                    let map = second.map.compose(&first.map)?;
                    Ok(GeneratedElement {
                        map,
                        route,
                        choi_generated: first.choi_generated || second.choi_generated,
                    })
                }
                GeneratorRoute::ChoiGenerated => {
                    let d = choi_dim(x, registry)?;
                    let map = unchoi(&gram_psd(d, rng), x, registry)?;
                    Ok(GeneratedElement { map, route, choi_generated: true })
                }
                _ => unreachable!("route chosen above"),
            }
        }
    }
}

/// `Σ_t |N_t⟩⟨P_t|` with `N_t` in `K(output)` and `P_t` in `K(input)`:
/// measure along a cone element, prepare a cone element. Stays inside K
/// because the pairing against a cone element is nonnegative on the cone.
fn measure_prepare(
    x: &Type,
    rng: &mut ChaCha8Rng,
    registry: &Arc<SystemRegistry>,
    depth: u32,
) -> Result<TypedMap> {
    let (a, b) = x.decompose_arrow()?;
    let terms = rng.gen_range(1..=3usize);
    let mut result = TypedMap::zero(x.clone(), registry.clone())?;
    for _ in 0..terms {
        let effect = random_k_element(a, rng, registry, false, depth + 1)?.map;
        let prepared = random_k_element(b, rng, registry, false, depth + 1)?.map;
        let column = prepared.vectorize();
        let row = effect.vectorize();
        let mut dyad = CMatrix::zeros(column.len(), row.len());
        for i in 0..column.len() {
            for j in 0..row.len() {
                dyad[(i, j)] = column[i] * row[j].conj();
            }
        }
        result = result.add(&TypedMap::new(x.clone(), registry.clone(), dyad)?)?;
    }
    Ok(result)
}

/// Intermediate system for the compose route: the first registered label,
/// or the trivial type for an empty registry.
fn intermediate_type(registry: &SystemRegistry) -> Type {
    match registry.labels().next() {
        Some(label) => Type::Elementary(vec![label.clone()]),
        None => Type::trivial(),
    }
}

fn random_complex(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// `G† G / d` for a random `k x d` complex Gaussian `G`; exactly PSD.
fn gram_psd(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let k = rng.gen_range(1..=d.max(1));
    let g = random_complex(k, d, rng);
    let gram = g.adjoint() * &g;
    gram / C64::new(d as f64, 0.0)
}

/// Split a Hermitian-preserving map into a difference of two cone members
/// by the sign decomposition of its Choi spectrum.
pub fn jordan_decompose(m: &TypedMap, tol: f64) -> Result<(TypedMap, TypedMap)> {
    if !in_h(m, tol)? {
        return Err(Error::NotHermitianPreserving(tol));
    }
    let c = choi(m)?;
    let herm = (&c + c.adjoint()) * C64::new(0.5, 0.0);
    let d = herm.nrows();
    let eig = crate::eigen::hermitian_eigen(&herm);
    let mut plus = CMatrix::zeros(d, d);
    let mut minus = CMatrix::zeros(d, d);
    for (idx, lambda) in eig.values.iter().enumerate() {
        let v = eig.vectors.column(idx);
        let outer = v * v.adjoint();
        if *lambda >= 0.0 {
            plus += outer * C64::new(*lambda, 0.0);
        } else {
            minus += outer * C64::new(-lambda, 0.0);
        }
    }
    let registry = m.registry();
    Ok((
        unchoi(&plus, m.ty(), registry)?,
        unchoi(&minus, m.ty(), registry)?,
    ))
}

/// Real Hilbert-Schmidt pairing of two Choi matrices. Members of a
/// self-dual cone pair nonnegatively with every member.
pub fn dual_pair_check(m: &TypedMap, n: &TypedMap) -> Result<f64> {
    if m.ty() != n.ty() {
        return Err(Error::TypeMismatch { expected: m.ty().clone(), found: n.ty().clone() });
    }
    let cm = choi(m)?;
    let cn = choi(n)?;
    Ok((cm.adjoint() * cn).diagonal().sum().re)
}
