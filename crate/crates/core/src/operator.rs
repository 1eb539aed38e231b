//! The operator ternary product `[A, B, C] = A B† C`, commutator identities
//! and the operator law checks.
//!
//! The commutator is a separate function; brackets are never overloaded.

use std::fmt;
use std::str::FromStr;

use crate::env::Env;
use crate::error::{Error, Result};
use crate::hilbert::Operator;
use crate::random::{
    random_hermitian, random_operator, random_real_diagonal, random_unitary, Rng,
};
use crate::report::{run_trials, CheckParams, CheckReport, Sample};

/// `A · B† · C`.
pub fn tern_op(a: &Operator, b: &Operator, c: &Operator) -> Result<Operator> {
    a.matmul(&b.adjoint())?.matmul(c)
}

/// `AB − BA`.
pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    Ok(&a.matmul(b)? - &b.matmul(a)?)
}

/// Residual and scale (max-norm) of `lhs` against `rhs`.
fn compare(lhs: &Operator, rhs: &Operator) -> Result<(f64, f64)> {
    Ok((lhs.max_distance(rhs)?, lhs.max_norm().max(rhs.max_norm())))
}

fn max_pair(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0.max(b.0), a.1.max(b.1))
}

/// Both sides of `[A,[B,C]] = [[A,B],C] + [B,[A,C]]`.
fn jacobi_leibniz_sides(a: &Operator, b: &Operator, c: &Operator) -> Result<(Operator, Operator)> {
    let lhs = commutator(a, &commutator(b, c)?)?;
    let rhs = &commutator(&commutator(a, b)?, c)? + &commutator(b, &commutator(a, c)?)?;
    Ok((lhs, rhs))
}

/// Max-norm residual of the binary Jacobi–Leibniz identity.
pub fn jacobi_leibniz_residual(a: &Operator, b: &Operator, c: &Operator) -> Result<f64> {
    let (lhs, rhs) = jacobi_leibniz_sides(a, b, c)?;
    lhs.max_distance(&rhs)
}

/// Both sides of
/// `[A₁,[A₂,A₃,A₄]] = [[A₁,A₂],A₃,A₄] − [A₂,[A₁†,A₃],A₄] + [A₂,A₃,[A₁,A₄]]`.
fn gen_jacobi_leibniz_sides(
    a1: &Operator,
    a2: &Operator,
    a3: &Operator,
    a4: &Operator,
) -> Result<(Operator, Operator)> {
    let lhs = commutator(a1, &tern_op(a2, a3, a4)?)?;
    let first = tern_op(&commutator(a1, a2)?, a3, a4)?;
    let second = tern_op(a2, &commutator(&a1.adjoint(), a3)?, a4)?;
    let third = tern_op(a2, a3, &commutator(a1, a4)?)?;
    Ok((lhs, &(&first - &second) + &third))
}

/// Max-norm residual of the generalized (ternary) Jacobi–Leibniz identity.
pub fn gen_jacobi_leibniz_residual(
    a1: &Operator,
    a2: &Operator,
    a3: &Operator,
    a4: &Operator,
) -> Result<f64> {
    let (lhs, rhs) = gen_jacobi_leibniz_sides(a1, a2, a3, a4)?;
    lhs.max_distance(&rhs)
}

/// Both sides of the all-plus Leibniz rule for `[D, -]` over `[-,-,-]`.
fn derivation_sides(
    d: &Operator,
    a2: &Operator,
    a3: &Operator,
    a4: &Operator,
) -> Result<(Operator, Operator)> {
    let lhs = commutator(d, &tern_op(a2, a3, a4)?)?;
    let rhs = &(&tern_op(&commutator(d, a2)?, a3, a4)? + &tern_op(a2, &commutator(d, a3)?, a4)?)
        + &tern_op(a2, a3, &commutator(d, a4)?)?;
    Ok((lhs, rhs))
}

/// Residuals of the two Mal'cev identities `‖[U,V,V] − U‖`, `‖[V,V,U] − U‖`.
pub fn heap_residuals(u: &Operator, v: &Operator) -> Result<(f64, f64)> {
    Ok((
        tern_op(u, v, v)?.max_distance(u)?,
        tern_op(v, v, u)?.max_distance(u)?,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpLaw {
    ParaAssocOp,
    HeapUnitary,
    AdjointLaw,
    JacobiLeibniz,
    GenJacobiLeibniz,
    IDerivation,
    CompatClosure,
}

impl OpLaw {
    pub const ALL: [OpLaw; 7] = [
        OpLaw::ParaAssocOp,
        OpLaw::HeapUnitary,
        OpLaw::AdjointLaw,
        OpLaw::JacobiLeibniz,
        OpLaw::GenJacobiLeibniz,
        OpLaw::IDerivation,
        OpLaw::CompatClosure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OpLaw::ParaAssocOp => "para-assoc-op",
            OpLaw::HeapUnitary => "heap-unitary",
            OpLaw::AdjointLaw => "adjoint-law",
            OpLaw::JacobiLeibniz => "jacobi-leibniz",
            OpLaw::GenJacobiLeibniz => "gen-jacobi-leibniz",
            OpLaw::IDerivation => "i-derivation",
            OpLaw::CompatClosure => "compat-closure",
        }
    }
}

impl fmt::Display for OpLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OpLaw {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        OpLaw::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::UnknownLaw {
                name: s.to_string(),
                valid: OpLaw::ALL.map(OpLaw::name).join(", "),
            })
    }
}

fn ops(dim: usize, n: usize, rng: &mut Rng) -> Result<Vec<Operator>> {
    (0..n).map(|_| random_operator(dim, rng)).collect()
}

fn witness(names: &[&str], ops: &[&Operator]) -> Result<Env> {
    let mut env = Env::new(ops[0].dim())?;
    for (name, a) in names.iter().zip(ops) {
        env.insert_op(name, (*a).clone())?;
    }
    Ok(env)
}

/// Runs `law` over seeded samples of Gaussian operators (Haar unitaries for
/// `heap-unitary`, Hermitian generators for `i-derivation`, a commuting
/// self-adjoint family for `compat-closure`).
pub fn check_op_law(law: OpLaw, params: &CheckParams) -> Result<CheckReport> {
    let dim = params.dim;
    run_trials(law.name(), params, |rng| match law {
        OpLaw::ParaAssocOp => {
            let v = ops(dim, 5, rng)?;
            let (a, b, c, d, e) = (&v[0], &v[1], &v[2], &v[3], &v[4]);
            let left = tern_op(&tern_op(a, b, c)?, d, e)?;
            let middle = tern_op(a, &tern_op(d, c, b)?, e)?;
            let right = tern_op(a, b, &tern_op(c, d, e)?)?;
            let (r, s) = max_pair(compare(&left, &middle)?, compare(&left, &right)?);
            Ok(Sample::new(r, s, witness(&["A", "B", "C", "D", "E"], &[a, b, c, d, e])?))
        }
        OpLaw::HeapUnitary => {
            let u = random_unitary(dim, rng)?;
            let v = random_unitary(dim, rng)?;
            let right = compare(&tern_op(&u, &v, &v)?, &u)?;
            let left = compare(&tern_op(&v, &v, &u)?, &u)?;
            let (r, s) = max_pair(right, left);
            Ok(Sample::new(r, s, witness(&["U", "V"], &[&u, &v])?))
        }
        OpLaw::AdjointLaw => {
            let v = ops(dim, 3, rng)?;
            let (a, b, c) = (&v[0], &v[1], &v[2]);
            let lhs = tern_op(a, b, c)?.adjoint();
            let rhs = tern_op(&c.adjoint(), &b.adjoint(), &a.adjoint())?;
            let (r, s) = compare(&lhs, &rhs)?;
            Ok(Sample::new(r, s, witness(&["A", "B", "C"], &[a, b, c])?))
        }
        OpLaw::JacobiLeibniz => {
            let v = ops(dim, 3, rng)?;
            let (lhs, rhs) = jacobi_leibniz_sides(&v[0], &v[1], &v[2])?;
            let (r, s) = compare(&lhs, &rhs)?;
            Ok(Sample::new(r, s, witness(&["A", "B", "C"], &[&v[0], &v[1], &v[2]])?))
        }
        OpLaw::GenJacobiLeibniz => {
            let v = ops(dim, 4, rng)?;
            let (lhs, rhs) = gen_jacobi_leibniz_sides(&v[0], &v[1], &v[2], &v[3])?;
            let (r, s) = compare(&lhs, &rhs)?;
            let env = witness(&["A1", "A2", "A3", "A4"], &[&v[0], &v[1], &v[2], &v[3]])?;
            Ok(Sample::new(r, s, env))
        }
        OpLaw::IDerivation => {
            let h = random_hermitian(dim, rng)?;
            let d = h.times_i();
            let v = ops(dim, 3, rng)?;
            let (lhs, rhs) = derivation_sides(&d, &v[0], &v[1], &v[2])?;
            let (r, s) = compare(&lhs, &rhs)?;
            let env = witness(&["H", "A2", "A3", "A4"], &[&h, &v[0], &v[1], &v[2]])?;
            Ok(Sample::new(r, s, env))
        }
        OpLaw::CompatClosure => {
            let u = random_unitary(dim, rng)?;
            let family: Vec<Operator> = (0..3)
                .map(|_| {
                    let diag = random_real_diagonal(dim, rng)?;
                    u.matmul(&diag)?.matmul(&u.adjoint())
                })
                .collect::<Result<_>>()?;
            let (a, b, c) = (&family[0], &family[1], &family[2]);
            let product = tern_op(a, b, c)?;
            let self_adjoint = compare(&product.adjoint(), &product)?;
            let reversed = compare(&product, &tern_op(c, b, a)?)?;
            let (r, s) = max_pair(self_adjoint, reversed);
            Ok(Sample::new(r, s, witness(&["A", "B", "C"], &[a, b, c])?))
        }
    })
}
