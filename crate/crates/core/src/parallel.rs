//! The parallel product on maps.
//!
//! Two maps combine by the same four clauses as their types: elementary
//! operands take a Kronecker product; an operand of lower order is held
//! fixed and appended to the other's output; equal-order arrows act
//! componentwise on factored inputs, extended linearly to the whole domain.
//!
//! The linear extension in the equal-order clause is realized concretely by
//! [`ParallelIso`]: the matrix `Φ` whose columns are the products of
//! canonical basis pairs. Products of basis elements span the product space,
//! so `Φ` is invertible, and the clause becomes the similarity
//! `Φ_out · (M ⊗ N) · Φ_in⁻¹`. Invertibility is verified numerically at
//! construction rather than assumed; a singular `Φ` is reported as a
//! spanning failure, never regularized.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::linmap::{canonical_basis, space_dim, CMatrix, TypedMap};
use crate::registry::SystemRegistry;
use crate::types::{ProductCase, Type};

/// `Φ` counts as invertible when `σ_min > SPANNING_TOLERANCE · σ_max`.
pub const SPANNING_TOLERANCE: f64 = 1e-8;

/// Which side of the product a fixed map occupies in [`append_fixed`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// The change of basis between `L(x) ⊗ L(y)` coordinates and `L(x ⊠ y)`
/// coordinates. Column `i·dim(y) + j` is the vectorized product of the
/// `i`-th and `j`-th canonical basis elements.
#[derive(Debug)]
pub struct ParallelIso {
    left: Type,
    right: Type,
    registry: Arc<SystemRegistry>,
    matrix: CMatrix,
    inverse: CMatrix,
    sigma_min: f64,
    sigma_max: f64,
}

impl ParallelIso {
    pub fn left(&self) -> &Type {
        &self.left
    }

    pub fn right(&self) -> &Type {
        &self.right
    }

    pub fn registry(&self) -> &Arc<SystemRegistry> {
        &self.registry
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn inverse(&self) -> &CMatrix {
        &self.inverse
    }

    /// Extreme singular values observed at construction.
    pub fn singular_extremes(&self) -> (f64, f64) {
        (self.sigma_min, self.sigma_max)
    }

    pub fn condition_number(&self) -> f64 {
        self.sigma_max / self.sigma_min
    }
}

type IsoKey = (Type, Type, SystemRegistry);

/// Φ matrices are memoized per (type pair, registry). The cache is an
/// idempotent table: concurrent builders may duplicate work but always
/// insert identical values, and the first insert wins.
static ISO_CACHE: Lazy<Mutex<HashMap<IsoKey, Arc<ParallelIso>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// The basis-product isomorphism for `x ⊠ y` over `registry`, memoized.
pub fn parallel_iso(x: &Type, y: &Type, registry: &Arc<SystemRegistry>) -> Result<Arc<ParallelIso>> {
    registry.check_type(x)?;
    registry.check_type(y)?;
    let key = (x.clone(), y.clone(), (**registry).clone());
    if let Some(hit) = ISO_CACHE.lock().expect("iso cache poisoned").get(&key) {
        return Ok(hit.clone());
    }
    let built = Arc::new(build_iso(x, y, registry)?);
    let mut cache = ISO_CACHE.lock().expect("iso cache poisoned");
    Ok(cache.entry(key).or_insert(built).clone())
}

fn build_iso(x: &Type, y: &Type, registry: &Arc<SystemRegistry>) -> Result<ParallelIso> {
    let bx = canonical_basis(x, registry)?;
    let by = canonical_basis(y, registry)?;
    let pair_dim = bx.len() * by.len();
    let product_ty = x.partype(y);
    let product_dim = space_dim(&product_ty, registry)?;
    assert_eq!(
        product_dim, pair_dim,
        "dimension law: space_dim(x ⊠ y) = space_dim(x) · space_dim(y)"
    );

    let mut phi = CMatrix::zeros(product_dim, pair_dim);
    for (i, ex) in bx.iter().enumerate() {
        for (j, ey) in by.iter().enumerate() {
            let prod = parmap(ex, ey)?;
            phi.set_column(i * by.len() + j, &prod.vectorize());
        }
    }

    // Singular values via the Gram spectrum; tiny negative eigenvalues are
    // rounding and clamp to zero.
    let gram = phi.adjoint() * &phi;
    let eigs = crate::eigen::hermitian_eigenvalues(&gram);
    let mut sigma_min = f64::INFINITY;
    let mut sigma_max: f64 = 0.0;
    for lambda in &eigs {
        let sigma = lambda.max(0.0).sqrt();
        sigma_min = sigma_min.min(sigma);
        sigma_max = sigma_max.max(sigma);
    }
    let singular = Error::SpanningFailure {
        left: x.clone(),
        right: y.clone(),
        sigma_min,
        sigma_max,
    };
    if sigma_max == 0.0 || sigma_min <= SPANNING_TOLERANCE * sigma_max {
        return Err(singular);
    }
    let inverse = phi.clone().lu().try_inverse().ok_or(singular)?;

    Ok(ParallelIso {
        left: x.clone(),
        right: y.clone(),
        registry: registry.clone(),
        matrix: phi,
        inverse,
        sigma_min,
        sigma_max,
    })
}

/// The parallel product of two maps over a common registry. The result has
/// type `partype(type(m), type(n))`.
pub fn parmap(m: &TypedMap, n: &TypedMap) -> Result<TypedMap> {
    m.check_same_registry(n)?;
    let registry = m.registry();
    let x = m.ty();
    let y = n.ty();
    let product_ty = x.partype(y);

    let matrix = match x.product_case(y) {
        // Word concatenation aligns the tensor factors, so the product of
        // elementary operands is exactly the Kronecker product.
        ProductCase::Elementary => m.matrix().kronecker(n.matrix()),
        // (m ⊠ n)(σ) = m ⊠ n(σ): feed σ to n, append m on the left.
        ProductCase::AsymmetricLeft => {
            let (_, d) = y.decompose_arrow()?;
            append_fixed(m, Side::Left, d)? * n.matrix()
        }
        // (m ⊠ n)(ρ ⊠ σ) = m(ρ) ⊠ n(σ), extended linearly through Φ.
        ProductCase::Symmetric => {
            let (a, b) = x.decompose_arrow()?;
            let (c, d) = y.decompose_arrow()?;
            let phi_in = parallel_iso(a, c, registry)?;
            let phi_out = parallel_iso(b, d, registry)?;
            phi_out.matrix() * m.matrix().kronecker(n.matrix()) * phi_in.inverse()
        }
        // (m ⊠ n)(ρ) = m(ρ) ⊠ n: feed ρ to m, append n on the right.
        ProductCase::AsymmetricRight => {
            let (_, b) = x.decompose_arrow()?;
            append_fixed(n, Side::Right, b)? * m.matrix()
        }
    };
    TypedMap::new(product_ty, registry.clone(), matrix)
}

/// Matrix of the linear map `τ ↦ fixed ⊠ τ` (`Side::Left`) or
/// `τ ↦ τ ⊠ fixed` (`Side::Right`) for `τ` ranging over `L(var_ty)`, built
/// column by column over the canonical basis.
///
/// The product is bilinear for every type pair, so the matrix is
/// well-defined unconditionally; the asymmetric product clauses use it with
/// the output side of the higher-order operand.
pub fn append_fixed(fixed: &TypedMap, side: Side, var_ty: &Type) -> Result<CMatrix> {
    let registry = fixed.registry();
    registry.check_type(var_ty)?;
    let basis = canonical_basis(var_ty, registry)?;
    let product_ty = match side {
        Side::Left => fixed.ty().partype(var_ty),
        Side::Right => var_ty.partype(fixed.ty()),
    };
    let rows = space_dim(&product_ty, registry)?;
    let mut out = CMatrix::zeros(rows, basis.len());
    for (k, e) in basis.iter().enumerate() {
        let prod = match side {
            Side::Left => parmap(fixed, e)?,
            Side::Right => parmap(e, fixed)?,
        };
        out.set_column(k, &prod.vectorize());
    }
    Ok(out)
}
