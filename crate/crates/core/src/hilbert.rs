//! Dense complex linear algebra over a finite-dimensional Hilbert space.
//!
//! Inner products are conjugate-linear in the first slot:
//! `inner(x, y) = Σ conj(x_k) y_k`, so `inner(z1, z2) = conj(z1) z2` on the
//! complex line and `<ψ|φ>` reads left to right as in Dirac notation.
//!
//! Arithmetic operators (`+`, `-`, scalar `*`) on borrowed kets, bras and
//! matrices panic on shape mismatch, like `ndarray`. The named functions
//! (`inner`, `Matrix::matmul`, ...) return [`Result`] instead.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Complex = Complex64;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);
pub const I: Complex = Complex::new(0.0, 1.0);

/// Multiplies by the imaginary unit without rounding: `(a + bi)·i = -b + ai`.
#[inline]
pub fn times_i(z: Complex) -> Complex {
    Complex::new(-z.im, z.re)
}

fn check_finite(entries: &[Complex]) -> Result<()> {
    match entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimMismatch { expected, found })
    }
}

/// Absolute and relative tolerance for residual comparisons.
///
/// A residual `r` measured at scale `s` passes iff `r <= atol + rtol * s`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            atol: 1e-12,
            rtol: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(atol: f64, rtol: f64) -> Result<Self> {
        if !(atol >= 0.0 && rtol >= 0.0 && atol.is_finite() && rtol.is_finite()) {
            return Err(Error::InvalidArgument {
                detail: format!("tolerances must be finite and non-negative (atol {atol}, rtol {rtol})"),
            });
        }
        Ok(Tolerance { atol, rtol })
    }

    pub fn bound(&self, scale: f64) -> f64 {
        self.atol + self.rtol * scale
    }

    pub fn accepts(&self, residual: f64, scale: f64) -> bool {
        residual <= self.bound(scale)
    }

    /// Failure with margin: `residual > 10 · bound(scale)`.
    pub fn clearly_rejects(&self, residual: f64, scale: f64) -> bool {
        residual > 10.0 * self.bound(scale)
    }
}

/// A column vector `|ψ⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    entries: Vec<Complex>,
}

/// A row vector `⟨ψ|`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bra {
    entries: Vec<Complex>,
}

macro_rules! vector_common {
    ($ty:ident) => {
        impl $ty {
            pub fn new(entries: Vec<Complex>) -> Result<Self> {
                if entries.is_empty() {
                    return Err(Error::EmptyDimension);
                }
                check_finite(&entries)?;
                Ok($ty { entries })
            }

            pub fn from_real(values: &[f64]) -> Result<Self> {
                Self::new(values.iter().map(|&x| Complex::new(x, 0.0)).collect())
            }

            pub fn zero(dim: usize) -> Self {
                assert!(dim >= 1, "dimension must be at least 1");
                $ty {
                    entries: vec![ZERO; dim],
                }
            }

            /// The `k`-th standard basis vector (0-based).
            pub fn basis(dim: usize, k: usize) -> Self {
                assert!(k < dim, "basis index {k} out of range for dimension {dim}");
                let mut v = Self::zero(dim);
                v.entries[k] = ONE;
                v
            }

            pub fn dim(&self) -> usize {
                self.entries.len()
            }

            pub fn entries(&self) -> &[Complex] {
                &self.entries
            }

            pub fn into_entries(self) -> Vec<Complex> {
                self.entries
            }

            pub fn scale(&self, c: Complex) -> Self {
                $ty {
                    entries: self.entries.iter().map(|&z| c * z).collect(),
                }
            }

            /// Euclidean norm.
            pub fn norm(&self) -> f64 {
                self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
            }

            pub fn is_zero(&self, atol: f64) -> bool {
                self.norm() <= atol
            }

            /// Euclidean distance to `other`.
            pub fn distance(&self, other: &Self) -> Result<f64> {
                check_dim(self.dim(), other.dim())?;
                Ok(self
                    .entries
                    .iter()
                    .zip(&other.entries)
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt())
            }

            pub fn checked_add(&self, other: &Self) -> Result<Self> {
                check_dim(self.dim(), other.dim())?;
                Ok(self + other)
            }

            pub fn checked_sub(&self, other: &Self) -> Result<Self> {
                check_dim(self.dim(), other.dim())?;
                Ok(self - other)
            }
        }

        impl Add for &$ty {
            type Output = $ty;
            fn add(self, rhs: &$ty) -> $ty {
                assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in addition");
                $ty {
                    entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
                }
            }
        }

        impl Sub for &$ty {
            type Output = $ty;
            fn sub(self, rhs: &$ty) -> $ty {
                assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in subtraction");
                $ty {
                    entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
                }
            }
        }

        impl Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $ty {
                    entries: self.entries.iter().map(|z| -z).collect(),
                }
            }
        }

        impl Mul<&$ty> for Complex {
            type Output = $ty;
            fn mul(self, rhs: &$ty) -> $ty {
                rhs.scale(self)
            }
        }
    };
}

vector_common!(Ket);
vector_common!(Bra);

impl Ket {
    /// `⟨ψ|`, the entrywise conjugate as a row vector.
    pub fn adjoint(&self) -> Bra {
        Bra {
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn normalized(&self) -> Option<Ket> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(Complex::new(1.0 / n, 0.0)))
    }

    /// The outer product `|self⟩⟨other|`.
    pub fn outer(&self, other: &Ket) -> Result<Operator> {
        check_dim(self.dim(), other.dim())?;
        let d = self.dim();
        let mut data = Vec::with_capacity(d * d);
        for x in &self.entries {
            for y in &other.entries {
                data.push(x * y.conj());
            }
        }
        Ok(Operator(Matrix { rows: d, cols: d, data }))
    }
}

impl Bra {
    /// The ket `|ψ⟩` whose bra is `self`.
    pub fn adjoint(&self) -> Ket {
        Ket {
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    /// The pairing `⟨self|ket⟩ = Σ b_k k_k` (no conjugation, the bra already is one).
    pub fn pair(&self, ket: &Ket) -> Result<Complex> {
        check_dim(self.dim(), ket.dim())?;
        Ok(self.entries.iter().zip(&ket.entries).map(|(b, k)| b * k).sum())
    }

    /// `⟨self|·A` as a row vector.
    pub fn apply(&self, op: &Operator) -> Result<Bra> {
        check_dim(self.dim(), op.dim())?;
        let d = self.dim();
        let entries = (0..d)
            .map(|j| (0..d).map(|k| self.entries[k] * op.get(k, j)).sum())
            .collect();
        Ok(Bra { entries })
    }

    /// `|ket⟩⟨self|`.
    pub fn outer_with(&self, ket: &Ket) -> Result<Operator> {
        ket.outer(&self.adjoint())
    }
}

/// `⟨x|y⟩`, conjugate-linear in `x`.
pub fn inner(x: &Ket, y: &Ket) -> Result<Complex> {
    check_dim(x.dim(), y.dim())?;
    Ok(x.entries.iter().zip(&y.entries).map(|(a, b)| a.conj() * b).sum())
}

pub fn norm(x: &Ket) -> f64 {
    x.norm()
}

/// `x ⊕ y`, concatenation.
pub fn direct_sum_ket(x: &Ket, y: &Ket) -> Ket {
    let mut entries = x.entries.clone();
    entries.extend_from_slice(&y.entries);
    Ket { entries }
}

/// Splits `x` into its first `head` entries and the rest.
pub fn split_ket(x: &Ket, head: usize) -> Result<(Ket, Ket)> {
    if head == 0 || head >= x.dim() {
        return Err(Error::Shape {
            detail: format!("cannot split a dimension-{} ket after {head} entries", x.dim()),
        });
    }
    Ok((
        Ket { entries: x.entries[..head].to_vec() },
        Ket { entries: x.entries[head..].to_vec() },
    ))
}

/// Kronecker product `x ⊗ y`.
pub fn tensor_ket(x: &Ket, y: &Ket) -> Ket {
    let entries = x
        .entries
        .iter()
        .flat_map(|a| y.entries.iter().map(move |b| a * b))
        .collect();
    Ket { entries }
}

/// A dense `rows × cols` complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyDimension);
        }
        if data.len() != rows * cols {
            return Err(Error::Shape {
                detail: format!("{} entries for a {rows}x{cols} matrix", data.len()),
            });
        }
        check_finite(&data)?;
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Complex>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|row| row.len() != c) {
            return Err(Error::Shape {
                detail: format!("row {bad} has {} entries, expected {c}", rows[bad].len()),
            });
        }
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Matrix whose columns are the given kets.
    pub fn from_columns(columns: &[Ket]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Ket::dim);
        for col in columns {
            check_dim(rows, col.dim())?;
        }
        if cols == 0 {
            return Err(Error::EmptyDimension);
        }
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for col in columns {
                data.push(col.entries[i]);
            }
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "dimension must be at least 1");
        Matrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.data[i * self.cols + j]
    }

    pub fn data(&self) -> &[Complex] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Ket {
        Ket {
            entries: (0..self.rows).map(|i| self.get(i, j)).collect(),
        }
    }

    pub fn row_vecs(&self) -> Vec<Vec<Complex>> {
        self.data.chunks(self.cols).map(<[Complex]>::to_vec).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).conj());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape {
                detail: format!(
                    "cannot multiply {}x{} by {}x{}",
                    self.rows, self.cols, other.rows, other.cols
                ),
            });
        }
        let mut data = vec![ZERO; self.rows * other.cols];
        for i in 0..self.rows {
            let out = &mut data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.get(i, k);
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in out.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn apply(&self, x: &Ket) -> Result<Ket> {
        check_dim(self.cols, x.dim())?;
        let entries = self
            .data
            .chunks(self.cols)
            .map(|row| row.iter().zip(&x.entries).map(|(a, b)| a * b).sum())
            .collect();
        Ok(Ket { entries })
    }

    pub fn scale(&self, c: Complex) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| c * z).collect(),
        }
    }

    /// Largest absolute entry.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm of `self - other`.
    pub fn max_distance(&self, other: &Matrix) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape {
                detail: format!(
                    "cannot compare {}x{} with {}x{}",
                    self.rows, self.cols, other.rows, other.cols
                ),
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `‖V†V − I‖_max`, the deviation from having orthonormal columns.
    pub fn isometry_defect(&self) -> f64 {
        let gram = self.adjoint().matmul(self).expect("V†V is always defined");
        gram.max_distance(&Matrix::identity(self.cols))
            .expect("gram matrix is square")
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = vec![ZERO; rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        data[(i * other.rows + k) * cols + j * other.cols + l] = a * other.get(k, l);
                    }
                }
            }
        }
        Matrix { rows, cols, data }
    }

    /// Block-diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let rows = self.rows + other.rows;
        let cols = self.cols + other.cols;
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[i * cols + j] = self.get(i, j);
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.data[(self.rows + i) * cols + self.cols + j] = other.get(i, j);
            }
        }
        m
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch in addition");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch in subtraction");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// A square matrix acting on a single Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator(Matrix);

impl Operator {
    /// Operator of dimension `dim` from row-major entries.
    pub fn new(dim: usize, data: Vec<Complex>) -> Result<Self> {
        Ok(Operator(Matrix::new(dim, dim, data)?))
    }

    pub fn from_rows(rows: Vec<Vec<Complex>>) -> Result<Self> {
        Operator::try_from(Matrix::from_rows(rows)?)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Operator::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn identity(dim: usize) -> Self {
        Operator(Matrix::identity(dim))
    }

    pub fn zero(dim: usize) -> Self {
        Operator(Matrix::zeros(dim, dim))
    }

    /// Diagonal operator with the given entries.
    pub fn diagonal(entries: &[Complex]) -> Result<Self> {
        let d = entries.len();
        if d == 0 {
            return Err(Error::EmptyDimension);
        }
        let mut m = Matrix::zeros(d, d);
        for (i, &z) in entries.iter().enumerate() {
            m.data[i * d + i] = z;
        }
        check_finite(&m.data)?;
        Ok(Operator(m))
    }

    pub fn pauli_x() -> Self {
        Operator::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    pub fn pauli_y() -> Self {
        Operator::from_rows(vec![vec![ZERO, -I], vec![I, ZERO]]).unwrap()
    }

    pub fn pauli_z() -> Self {
        Operator::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.0.get(i, j)
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn adjoint(&self) -> Operator {
        Operator(self.0.adjoint())
    }

    pub fn matmul(&self, other: &Operator) -> Result<Operator> {
        check_dim(self.dim(), other.dim())?;
        Ok(Operator(self.0.matmul(&other.0)?))
    }

    pub fn apply(&self, x: &Ket) -> Result<Ket> {
        self.0.apply(x)
    }

    pub fn scale(&self, c: Complex) -> Operator {
        Operator(self.0.scale(c))
    }

    /// `i·A`, computed exactly.
    pub fn times_i(&self) -> Operator {
        Operator(Matrix {
            rows: self.0.rows,
            cols: self.0.cols,
            data: self.0.data.iter().map(|&z| times_i(z)).collect(),
        })
    }

    pub fn max_norm(&self) -> f64 {
        self.0.max_norm()
    }

    pub fn max_distance(&self, other: &Operator) -> Result<f64> {
        check_dim(self.dim(), other.dim())?;
        self.0.max_distance(&other.0)
    }

    /// `‖A† − A‖_max`.
    pub fn hermitian_defect(&self) -> f64 {
        self.adjoint().max_distance(self).unwrap()
    }

    /// `‖A† + A‖_max`.
    pub fn antihermitian_defect(&self) -> f64 {
        (&self.adjoint() + self).max_norm()
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        self.0.isometry_defect()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    pub fn is_antihermitian(&self, tol: f64) -> bool {
        self.antihermitian_defect() <= tol
    }
}

impl TryFrom<Matrix> for Operator {
    type Error = Error;
    fn try_from(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Shape {
                detail: format!("operator must be square, got {}x{}", m.rows, m.cols),
            });
        }
        Ok(Operator(m))
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator(&self.0 + &rhs.0)
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator(&self.0 - &rhs.0)
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(Complex::new(-1.0, 0.0))
    }
}

impl Mul<&Operator> for Complex {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        rhs.scale(self)
    }
}

/// `A†`.
pub fn adjoint_op(a: &Operator) -> Operator {
    a.adjoint()
}

pub fn adjoint_ket(x: &Ket) -> Bra {
    x.adjoint()
}

pub fn adjoint_bra(b: &Bra) -> Ket {
    b.adjoint()
}

/// Block-diagonal `A ⊕ B`.
pub fn direct_sum_op(a: &Operator, b: &Operator) -> Operator {
    Operator(a.0.direct_sum(&b.0))
}

/// Kronecker product `A ⊗ B`.
pub fn tensor_op(a: &Operator, b: &Operator) -> Operator {
    Operator(a.0.kron(&b.0))
}

impl fmt::Display for Ket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, z) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{z}")?;
        }
        write!(f, ")")
    }
}
