//! Concrete matrices for every map space.
//!
//! Each type `x` is assigned a finite-dimensional complex space `L(x)`:
//! scalars for `I`, operators on the word's Hilbert space for elementary
//! types, and linear maps `L(a) -> L(b)` for `a -> b`. A [`TypedMap`] stores
//! an element of `L(x)` as a dense matrix in the fixed canonical coordinates.
//!
//! # Coordinate convention (`rowmajor-v1`)
//!
//! Hilbert-space tensor factors are ordered left to right as in the word.
//! The canonical basis of an elementary space is the matrix units `E_ij` in
//! row-major index order (`i` outer, `j` inner); vectorization stacks rows.
//! The canonical basis of `L(a -> b)` is the matrix-unit basis of
//! `space_dim(b) x space_dim(a)` matrices in the same row-major order. One
//! global convention keeps every Kronecker-based formula reproducible.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::registry::SystemRegistry;
use crate::types::Type;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Version tag of the coordinate convention; serialized map files carry it.
pub const COORDINATE_CONVENTION: &str = "rowmajor-v1";

/// Dimension of the Hilbert space of an elementary type: the product of the
/// component dimensions, 1 for `I`.
pub fn hilbert_dim(t: &Type, reg: &SystemRegistry) -> Result<usize> {
    match t {
        Type::Elementary(labels) => {
            let mut dim = 1usize;
            for label in labels {
                let d = reg
                    .dim_of(label)
                    .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
                dim *= d as usize;
            }
            Ok(dim)
        }
        Type::Arrow(..) => Err(Error::NotAnArrow(t.clone())),
    }
}

/// Dimension of the map space `L(t)`: 1 for `I`, the squared Hilbert
/// dimension for other elementary types, and the product of the component
/// space dimensions for arrows.
pub fn space_dim(t: &Type, reg: &SystemRegistry) -> Result<usize> {
    match t {
        Type::Elementary(_) => {
            let h = hilbert_dim(t, reg)?;
            Ok(h * h)
        }
        Type::Arrow(a, b) => Ok(space_dim(a, reg)? * space_dim(b, reg)?),
    }
}

/// Matrix shape of a typed map: `(h, h)` over the Hilbert space for
/// elementary types, `(space_dim(b), space_dim(a))` for `a -> b`.
pub fn matrix_shape(t: &Type, reg: &SystemRegistry) -> Result<(usize, usize)> {
    match t {
        Type::Elementary(_) => {
            let h = hilbert_dim(t, reg)?;
            Ok((h, h))
        }
        Type::Arrow(a, b) => Ok((space_dim(b, reg)?, space_dim(a, reg)?)),
    }
}

/// An element of `L(x)`: a type, a registry snapshot, and the matrix of the
/// element in canonical coordinates.
#[derive(Clone, Debug)]
pub struct TypedMap {
    ty: Type,
    registry: Arc<SystemRegistry>,
    fingerprint: u64,
    matrix: CMatrix,
}

impl TypedMap {
    /// Wrap a matrix, checking the shape contract and entry finiteness.
    pub fn new(ty: Type, registry: Arc<SystemRegistry>, matrix: CMatrix) -> Result<Self> {
        let (rows, cols) = matrix_shape(&ty, &registry)?;
        if matrix.nrows() != rows || matrix.ncols() != cols {
            return Err(Error::MatrixShape {
                ty,
                rows,
                cols,
                found_rows: matrix.nrows(),
                found_cols: matrix.ncols(),
            });
        }
        for i in 0..rows {
            for j in 0..cols {
                let z = matrix[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFiniteEntry(i, j));
                }
            }
        }
        let fingerprint = registry.fingerprint();
        Ok(TypedMap { ty, registry, fingerprint, matrix })
    }

    /// The zero element of `L(ty)`.
    pub fn zero(ty: Type, registry: Arc<SystemRegistry>) -> Result<Self> {
        let (rows, cols) = matrix_shape(&ty, &registry)?;
        Self::new(ty, registry, CMatrix::zeros(rows, cols))
    }

    /// A scalar of the trivial type.
    pub fn scalar(value: C64, registry: Arc<SystemRegistry>) -> Self {
        let matrix = CMatrix::from_element(1, 1, value);
        Self::new(Type::trivial(), registry, matrix).expect("1x1 matches L(I)")
    }

    pub fn ty(&self) -> &Type {
        &self.ty
    }

    pub fn registry(&self) -> &Arc<SystemRegistry> {
        &self.registry
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn registry_fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn same_registry(&self, other: &TypedMap) -> bool {
        self.fingerprint == other.fingerprint
    }

    pub(crate) fn check_same_registry(&self, other: &TypedMap) -> Result<()> {
        if self.same_registry(other) {
            Ok(())
        } else {
            Err(Error::RegistryMismatch)
        }
    }

    /// Rebuild the map against a registry that must agree on every label the
    /// type mentions (used when probe systems extend a registry).
    pub fn with_registry(&self, registry: Arc<SystemRegistry>) -> Result<Self> {
        for label in self.ty.labels() {
            match (self.registry.dim_of(label), registry.dim_of(label)) {
                (Some(a), Some(b)) if a == b => {}
                _ => return Err(Error::RegistryMismatch),
            }
        }
        Self::new(self.ty.clone(), registry, self.matrix.clone())
    }

    /// Row-major coordinates of the map, consistent with `canonical_basis`.
    pub fn vectorize(&self) -> CVector {
        vectorize_matrix(&self.matrix)
    }

    /// Inverse of [`TypedMap::vectorize`].
    pub fn devectorize(v: &CVector, ty: Type, registry: Arc<SystemRegistry>) -> Result<Self> {
        let (rows, cols) = matrix_shape(&ty, &registry)?;
        if v.len() != rows * cols {
            return Err(Error::VectorLength { ty, expected: rows * cols, found: v.len() });
        }
        let matrix = CMatrix::from_fn(rows, cols, |i, j| v[i * cols + j]);
        Self::new(ty, registry, matrix)
    }

    /// Apply an arrow-typed map to an argument of its input type.
    pub fn apply(&self, rho: &TypedMap) -> Result<TypedMap> {
        self.check_same_registry(rho)?;
        let (a, b) = self.ty.decompose_arrow()?;
        if rho.ty != *a {
            return Err(Error::TypeMismatch { expected: a.clone(), found: rho.ty.clone() });
        }
        let out = &self.matrix * rho.vectorize();
        TypedMap::devectorize(&out, b.clone(), self.registry.clone())
    }

    /// `self ∘ inner`: the output type of `inner` must equal the input type
    /// of `self`; the result has type `input(inner) -> output(self)`.
    pub fn compose(&self, inner: &TypedMap) -> Result<TypedMap> {
        self.check_same_registry(inner)?;
        let (b1, c) = self.ty.decompose_arrow()?;
        let (a, b2) = inner.ty.decompose_arrow()?;
        if b1 != b2 {
            return Err(Error::TypeMismatch { expected: b1.clone(), found: b2.clone() });
        }
        let matrix = &self.matrix * &inner.matrix;
        TypedMap::new(Type::arrow(a.clone(), c.clone()), self.registry.clone(), matrix)
    }

    /// Hilbert-Schmidt inner product, conjugate-linear in `self`. Computed on
    /// coordinates, which for elementary types equals `Tr(self† other)`.
    pub fn hs_inner(&self, other: &TypedMap) -> Result<C64> {
        self.check_same_registry(other)?;
        if self.ty != other.ty {
            return Err(Error::TypeMismatch {
                expected: self.ty.clone(),
                found: other.ty.clone(),
            });
        }
        Ok(self.vectorize().dotc(&other.vectorize()))
    }

    /// Frobenius-style max-abs of the matrix (handy for tolerances).
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Entry-wise max-abs difference with another map of the same type.
    pub fn max_abs_diff(&self, other: &TypedMap) -> Result<f64> {
        if self.ty != other.ty {
            return Err(Error::TypeMismatch {
                expected: self.ty.clone(),
                found: other.ty.clone(),
            });
        }
        Ok((&self.matrix - &other.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }

    pub fn scale(&self, factor: C64) -> TypedMap {
        TypedMap {
            ty: self.ty.clone(),
            registry: self.registry.clone(),
            fingerprint: self.fingerprint,
            matrix: &self.matrix * factor,
        }
    }

    pub fn add(&self, other: &TypedMap) -> Result<TypedMap> {
        self.check_same_registry(other)?;
        if self.ty != other.ty {
            return Err(Error::TypeMismatch {
                expected: self.ty.clone(),
                found: other.ty.clone(),
            });
        }
        Ok(TypedMap {
            ty: self.ty.clone(),
            registry: self.registry.clone(),
            fingerprint: self.fingerprint,
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn sub(&self, other: &TypedMap) -> Result<TypedMap> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }
}

/// Row-major stacking of a matrix into a coordinate vector.
pub fn vectorize_matrix(m: &CMatrix) -> CVector {
    let (rows, cols) = (m.nrows(), m.ncols());
    CVector::from_fn(rows * cols, |k, _| m[(k / cols, k % cols)])
}

/// Inverse of [`vectorize_matrix`] for a given shape.
pub fn devectorize_matrix(v: &CVector, rows: usize, cols: usize) -> CMatrix {
    assert_eq!(v.len(), rows * cols, "coordinate length must match shape");
    CMatrix::from_fn(rows, cols, |i, j| v[i * cols + j])
}

/// The canonical ordered basis of `L(ty)`: matrix units of the map's shape in
/// row-major index order. Orthonormal under the Hilbert-Schmidt product.
pub fn canonical_basis(ty: &Type, registry: &Arc<SystemRegistry>) -> Result<Vec<TypedMap>> {
    let (rows, cols) = matrix_shape(ty, registry)?;
    let mut out = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            let mut m = CMatrix::zeros(rows, cols);
            m[(i, j)] = C64::new(1.0, 0.0);
            out.push(TypedMap::new(ty.clone(), registry.clone(), m)?);
        }
    }
    Ok(out)
}

/// The identity map of type `z -> z`.
pub fn identity_map(z: &Type, registry: &Arc<SystemRegistry>) -> Result<TypedMap> {
    let d = space_dim(z, registry)?;
    TypedMap::new(
        Type::arrow(z.clone(), z.clone()),
        registry.clone(),
        CMatrix::identity(d, d),
    )
}
