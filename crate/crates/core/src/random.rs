//! Seeded generators for kets, operators, unitaries and isometries.
//!
//! All sampling goes through [`Rng`], a ChaCha8 stream seeded from a `u64`,
//! which produces the same sequence on every platform. Trial `i` of a check
//! seeded with `s` uses the stream seeded with `s + i` (wrapping).

use nalgebra::DMatrix;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::hilbert::{Complex, Ket, Matrix, Operator};

pub type Rng = ChaCha8Rng;

/// Name of the generator recorded in every report.
pub const RNG_NAME: &str = "chacha8";

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn trial_seed(base: u64, trial: u64) -> u64 {
    base.wrapping_add(trial)
}

/// Standard complex normal: independent real and imaginary parts of variance 1/2.
pub fn complex_normal(rng: &mut Rng) -> Complex {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn real_normal(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

pub fn uniform(rng: &mut Rng) -> f64 {
    rng.random::<f64>()
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(Error::EmptyDimension)
    } else {
        Ok(())
    }
}

fn ginibre(rows: usize, cols: usize, rng: &mut Rng) -> Matrix {
    let data = (0..rows * cols).map(|_| complex_normal(rng)).collect();
    Matrix::new(rows, cols, data).expect("gaussian entries are finite")
}

/// Gaussian ket, optionally rescaled to unit norm.
pub fn random_ket(dim: usize, rng: &mut Rng, normalized: bool) -> Result<Ket> {
    check_dim(dim)?;
    loop {
        let k = Ket::new((0..dim).map(|_| complex_normal(rng)).collect())?;
        if !normalized {
            return Ok(k);
        }
        if let Some(unit) = k.normalized() {
            return Ok(unit);
        }
    }
}

pub fn random_scalar(rng: &mut Rng) -> Complex {
    complex_normal(rng)
}

/// Gaussian operator with i.i.d. standard complex normal entries.
pub fn random_operator(dim: usize, rng: &mut Rng) -> Result<Operator> {
    check_dim(dim)?;
    Operator::try_from(ginibre(dim, dim, rng))
}

/// `(M + M†)/2` for a Gaussian `M`; exactly self-adjoint.
pub fn random_hermitian(dim: usize, rng: &mut Rng) -> Result<Operator> {
    let m = random_operator(dim, rng)?;
    let half = Complex::new(0.5, 0.0);
    Ok((&m + &m.adjoint()).scale(half))
}

/// `i·H` for a random Hermitian `H`; exactly anti-self-adjoint.
pub fn random_antihermitian(dim: usize, rng: &mut Rng) -> Result<Operator> {
    Ok(random_hermitian(dim, rng)?.times_i())
}

/// Orthonormalises the columns of a Gaussian matrix by QR and fixes the
/// phase of each column by `r_jj / |r_jj|`, which makes the result
/// Haar-distributed.
fn haar_columns(rows: usize, cols: usize, rng: &mut Rng) -> Matrix {
    let g = ginibre(rows, cols, rng);
    let dm = DMatrix::from_row_slice(rows, cols, g.data());
    let qr = dm.qr();
    let q = qr.q();
    let r = qr.r();
    let mut data = Vec::with_capacity(rows * cols);
    let phases: Vec<Complex> = (0..cols)
        .map(|j| {
            let d = r[(j, j)];
            let n = d.norm();
            if n > 0.0 {
                d / n
            } else {
                Complex::new(1.0, 0.0)
            }
        })
        .collect();
    for i in 0..rows {
        for (j, phase) in phases.iter().enumerate() {
            data.push(q[(i, j)] * phase);
        }
    }
    Matrix::new(rows, cols, data).expect("QR of a finite matrix is finite")
}

/// Haar-random unitary of dimension `dim`.
pub fn random_unitary(dim: usize, rng: &mut Rng) -> Result<Operator> {
    check_dim(dim)?;
    Operator::try_from(haar_columns(dim, dim, rng))
}

/// Random `dim_to × dim_from` matrix with orthonormal columns.
pub fn random_isometry(dim_from: usize, dim_to: usize, rng: &mut Rng) -> Result<Matrix> {
    check_dim(dim_from)?;
    if dim_to < dim_from {
        return Err(Error::NoIsometry {
            from: dim_from,
            to: dim_to,
        });
    }
    Ok(haar_columns(dim_to, dim_from, rng))
}

/// Real diagonal entries for a commuting family.
pub fn random_real_diagonal(dim: usize, rng: &mut Rng) -> Result<Operator> {
    check_dim(dim)?;
    let d: Vec<Complex> = (0..dim).map(|_| Complex::new(real_normal(rng), 0.0)).collect();
    Operator::diagonal(&d)
}
