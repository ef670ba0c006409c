//! A recursive Choi linearization: a linear bijection from each map space
//! onto operators on a composite Hilbert space.
//!
//! The construction is by induction on the type. Elementary maps already are
//! operators, and are their own image. For `x = a -> b`, a map is first
//! conjugated into an operator-to-operator map between the Choi spaces of
//! `a` and `b` (already linearized by induction), and then the standard
//! Choi matrix of that map is taken:
//!
//! ```text
//! C(M) = Σ_ij E_ij ⊗ (choi_b ∘ M ∘ unchoi_a)(E_ij)
//! ```
//!
//! The Choi dimension multiplies along arrows, so the image space of type
//! `x` has dimension `space_dim(x)` and the linearization is a bijection.
//! Under it, membership in the positivity cone family corresponds to
//! positive semidefiniteness; that correspondence is validated empirically
//! by the test suite rather than assumed.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linmap::{canonical_basis, space_dim, vectorize_matrix, CMatrix, TypedMap};
use crate::registry::SystemRegistry;
use crate::types::Type;

/// Side length of the Choi matrix of type `x`: 1 for `I`, the Hilbert
/// dimension for elementary types, multiplicative along arrows.
pub fn choi_dim(x: &Type, registry: &SystemRegistry) -> Result<usize> {
    match x {
        Type::Elementary(_) => crate::linmap::hilbert_dim(x, registry),
        Type::Arrow(a, b) => Ok(choi_dim(a, registry)? * choi_dim(b, registry)?),
    }
}

/// The Choi matrix of a typed map, of shape `choi_dim(x) x choi_dim(x)`.
pub fn choi(m: &TypedMap) -> Result<CMatrix> {
    match m.ty() {
        Type::Elementary(_) => Ok(m.matrix().clone()),
        Type::Arrow(a, b) => {
            let registry = m.registry();
            let da = choi_dim(a, registry)?;
            let db = choi_dim(b, registry)?;
            let mut c = CMatrix::zeros(da * db, da * db);
            for i in 0..da {
                for j in 0..da {
                    let mut unit = CMatrix::zeros(da, da);
                    unit[(i, j)] = crate::linmap::C64::new(1.0, 0.0);
                    let rho = unchoi(&unit, a, registry)?;
                    let block = choi(&m.apply(&rho)?)?;
                    c.view_mut((i * db, j * db), (db, db)).copy_from(&block);
                }
            }
            Ok(c)
        }
    }
}

/// Inverse of [`choi`]: rebuild the typed map whose Choi matrix is `c`.
pub fn unchoi(c: &CMatrix, x: &Type, registry: &Arc<SystemRegistry>) -> Result<TypedMap> {
    let d = choi_dim(x, registry)?;
    if c.nrows() != d || c.ncols() != d {
        return Err(Error::ChoiShape {
            ty: x.clone(),
            expected: d,
            rows: c.nrows(),
            cols: c.ncols(),
        });
    }
    match x {
        Type::Elementary(_) => TypedMap::new(x.clone(), registry.clone(), c.clone()),
        Type::Arrow(a, b) => {
            let da = choi_dim(a, registry)?;
            let db = choi_dim(b, registry)?;
            let basis_a = canonical_basis(a, registry)?;
            let (rows, cols) = crate::linmap::matrix_shape(x, registry)?;
            debug_assert_eq!(cols, basis_a.len());
            let mut matrix = CMatrix::zeros(rows, cols);
            for (k, e) in basis_a.iter().enumerate() {
                // Coefficients of the input in Choi-space coordinates pick
                // out a weighted sum of blocks of `c`.
                let coeff = choi(e)?;
                let mut image = CMatrix::zeros(db, db);
                for i in 0..da {
                    for j in 0..da {
                        let w = coeff[(i, j)];
                        if w != crate::linmap::C64::new(0.0, 0.0) {
                            image += c.view((i * db, j * db), (db, db)) * w;
                        }
                    }
                }
                let out = unchoi(&image, b, registry)?;
                matrix.set_column(k, &out.vectorize());
            }
            TypedMap::new(x.clone(), registry.clone(), matrix)
        }
    }
}

/// The linearization of one type, materialized as an explicit matrix from
/// `L(x)` coordinates to vectorized Choi-space operators.
///
/// [`choi`]/[`unchoi`] never need this matrix; it exists so the bijection
/// itself can be inspected and tested. Only build it for types whose space
/// dimension is moderate.
#[derive(Debug)]
pub struct ChoiLinearization {
    ty: Type,
    registry: Arc<SystemRegistry>,
    choi_dim: usize,
    forward: CMatrix,
}

impl ChoiLinearization {
    pub fn ty(&self) -> &Type {
        &self.ty
    }

    pub fn choi_dim(&self) -> usize {
        self.choi_dim
    }

    /// Columns are the vectorized Choi matrices of the canonical basis.
    pub fn forward(&self) -> &CMatrix {
        &self.forward
    }

    pub fn apply(&self, m: &TypedMap) -> Result<CMatrix> {
        if m.ty() != &self.ty {
            return Err(Error::TypeMismatch { expected: self.ty.clone(), found: m.ty().clone() });
        }
        let v = &self.forward * m.vectorize();
        Ok(crate::linmap::devectorize_matrix(&v, self.choi_dim, self.choi_dim))
    }

    pub fn invert(&self, c: &CMatrix) -> Result<TypedMap> {
        unchoi(c, &self.ty, &self.registry)
    }
}

/// Build the explicit linearization matrix for `x`.
pub fn choi_linearization(x: &Type, registry: &Arc<SystemRegistry>) -> Result<ChoiLinearization> {
    let d = choi_dim(x, registry)?;
    let n = space_dim(x, registry)?;
    let mut forward = CMatrix::zeros(d * d, n);
    for (k, e) in canonical_basis(x, registry)?.iter().enumerate() {
        forward.set_column(k, &vectorize_matrix(&choi(e)?));
    }
    Ok(ChoiLinearization { ty: x.clone(), registry: registry.clone(), choi_dim: d, forward })
}
