//! The vector ternary product `[ψ₁, ψ₂, ψ₃] = |ψ₁⟩⟨ψ₂|ψ₃⟩`, its dual on
//! bras, its direct-sum and tensor-product forms, and the law checks.
//!
//! The product is linear in slots 1 and 3, conjugate-linear in slot 2 and
//! para-associative, so `(H, [-,-,-])` is a semiheap. It is not a heap: the
//! Mal'cev identities `[a,b,b] = a` and `[b,b,a] = a` fail for generic `b`.

use std::fmt;
use std::str::FromStr;

use crate::env::Env;
use crate::error::{Error, Result};
use crate::hilbert::{direct_sum_ket, inner, tensor_ket, Bra, Ket};
use crate::random::{random_ket, random_scalar, Rng};
use crate::report::{run_trials, CheckParams, CheckReport, Sample};

/// `[k1, k2, k3] = k1 · ⟨k2|k3⟩`.
pub fn tern_vec(k1: &Ket, k2: &Ket, k3: &Ket) -> Result<Ket> {
    if k1.dim() != k2.dim() {
        return Err(Error::DimMismatch {
            expected: k1.dim(),
            found: k2.dim(),
        });
    }
    Ok(k1.scale(inner(k2, k3)?))
}

/// `[⟨ψ₃|, ⟨ψ₂|, ⟨ψ₁|] = ⟨ψ₃|ψ₂⟩ ⟨ψ₁|`.
pub fn tern_dual(b3: &Bra, b2: &Bra, b1: &Bra) -> Result<Bra> {
    if b1.dim() != b3.dim() {
        return Err(Error::DimMismatch {
            expected: b3.dim(),
            found: b1.dim(),
        });
    }
    Ok(b1.scale(b3.pair(&b2.adjoint())?))
}

/// Ternary product on `H₁ ⊕ H₂`, taken summand by summand:
/// `[ψ₁⊕φ₁, ψ₂⊕φ₂, ψ₃⊕φ₃] = [ψ₁,ψ₂,ψ₃] ⊕ [φ₁,φ₂,φ₃]`.
///
/// This is not `tern_vec` on the concatenated vectors, which would add the
/// cross terms `ψ₁⟨φ₂|φ₃⟩ ⊕ φ₁⟨ψ₂|ψ₃⟩`.
pub fn tern_vec_dsum(pairs: [(&Ket, &Ket); 3]) -> Result<Ket> {
    let [(p1, q1), (p2, q2), (p3, q3)] = pairs;
    let first = tern_vec(p1, p2, p3)?;
    let second = tern_vec(q1, q2, q3)?;
    Ok(direct_sum_ket(&first, &second))
}

/// Ternary product on `H₁ ⊗ H₂` for product vectors:
/// `[ψ₁⊗φ₁, ψ₂⊗φ₂, ψ₃⊗φ₃] = [ψ₁,ψ₂,ψ₃] ⊗ [φ₁,φ₂,φ₃]`.
pub fn tern_vec_tensor(pairs: [(&Ket, &Ket); 3]) -> Result<Ket> {
    let [(p1, q1), (p2, q2), (p3, q3)] = pairs;
    Ok(tensor_ket(&tern_vec(p1, p2, p3)?, &tern_vec(q1, q2, q3)?))
}

/// Laws checked on the vector ternary algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VecLaw {
    ParaAssocVector,
    MalcevRight,
    MalcevLeft,
    Projection,
    Linearity1,
    Linearity2Conj,
    Linearity3,
    ZeroAbsorb,
    NormBound,
    DualCompat,
    DsumSplit,
    TensorSplit,
}

impl VecLaw {
    pub const ALL: [VecLaw; 12] = [
        VecLaw::ParaAssocVector,
        VecLaw::MalcevRight,
        VecLaw::MalcevLeft,
        VecLaw::Projection,
        VecLaw::Linearity1,
        VecLaw::Linearity2Conj,
        VecLaw::Linearity3,
        VecLaw::ZeroAbsorb,
        VecLaw::NormBound,
        VecLaw::DualCompat,
        VecLaw::DsumSplit,
        VecLaw::TensorSplit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VecLaw::ParaAssocVector => "para-assoc-vector",
            VecLaw::MalcevRight => "malcev-right",
            VecLaw::MalcevLeft => "malcev-left",
            VecLaw::Projection => "projection",
            VecLaw::Linearity1 => "linearity-1",
            VecLaw::Linearity2Conj => "linearity-2-conj",
            VecLaw::Linearity3 => "linearity-3",
            VecLaw::ZeroAbsorb => "zero-absorb",
            VecLaw::NormBound => "norm-bound",
            VecLaw::DualCompat => "dual-compat",
            VecLaw::DsumSplit => "dsum-split",
            VecLaw::TensorSplit => "tensor-split",
        }
    }
}

impl fmt::Display for VecLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VecLaw {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        VecLaw::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::UnknownLaw {
                name: s.to_string(),
                valid: VecLaw::ALL.map(VecLaw::name).join(", "),
            })
    }
}

fn kets(dim: usize, n: usize, rng: &mut Rng, normalized: bool) -> Result<Vec<Ket>> {
    (0..n).map(|_| random_ket(dim, rng, normalized)).collect()
}

fn witness(names: &[&str], kets: &[&Ket]) -> Result<Env> {
    let mut env = Env::new(kets[0].dim())?;
    for (name, k) in names.iter().zip(kets) {
        env.insert_ket(name, (*k).clone())?;
    }
    Ok(env)
}

/// Residual `‖lhs − rhs‖` with scale `max(‖lhs‖, ‖rhs‖)`.
fn compare(lhs: &Ket, rhs: &Ket) -> Result<(f64, f64)> {
    Ok((lhs.distance(rhs)?, lhs.norm().max(rhs.norm())))
}

fn max_pair(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0.max(b.0), a.1.max(b.1))
}

/// Runs `law` over `params.trials` seeded samples at `params.dim`.
///
/// Kets are unnormalized standard complex Gaussians. With
/// `params.normalized`, the repeated argument of the Mal'cev laws (and all
/// arguments of the other laws) is drawn with unit norm instead.
pub fn check_law(law: VecLaw, params: &CheckParams) -> Result<CheckReport> {
    let dim = params.dim;
    let normalized = params.normalized;
    run_trials(law.name(), params, |rng| {
        match law {
            VecLaw::ParaAssocVector => {
                let v = kets(dim, 5, rng, normalized)?;
                let (a, b, c, d, e) = (&v[0], &v[1], &v[2], &v[3], &v[4]);
                let left = tern_vec(&tern_vec(a, b, c)?, d, e)?;
                let middle = tern_vec(a, &tern_vec(d, c, b)?, e)?;
                let right = tern_vec(a, b, &tern_vec(c, d, e)?)?;
                let (r, s) = max_pair(compare(&left, &middle)?, compare(&left, &right)?);
                Ok(Sample::new(r, s, witness(&["a", "b", "c", "d", "e"], &[a, b, c, d, e])?))
            }
            VecLaw::MalcevRight | VecLaw::MalcevLeft => {
                let a = random_ket(dim, rng, false)?;
                let b = random_ket(dim, rng, normalized)?;
                let lhs = match law {
                    VecLaw::MalcevRight => tern_vec(&a, &b, &b)?,
                    _ => tern_vec(&b, &b, &a)?,
                };
                let (r, s) = compare(&lhs, &a)?;
                Ok(Sample::new(r, s, witness(&["a", "b"], &[&a, &b])?))
            }
            VecLaw::Projection => {
                // [b,b,a] = P_b a with P_b = |b⟩⟨b| formed as a matrix
                let a = random_ket(dim, rng, false)?;
                let b = random_ket(dim, rng, true)?;
                let projected = b.outer(&b)?.apply(&a)?;
                let (r, s) = compare(&tern_vec(&b, &b, &a)?, &projected)?;
                Ok(Sample::new(r, s, witness(&["a", "b"], &[&a, &b])?))
            }
            VecLaw::Linearity1 | VecLaw::Linearity2Conj | VecLaw::Linearity3 => {
                let v = kets(dim, 4, rng, normalized)?;
                let c = random_scalar(rng);
                let (x, xp, y, z) = (&v[0], &v[1], &v[2], &v[3]);
                let mixed = x + &(c * xp);
                let (lhs, rhs) = match law {
                    VecLaw::Linearity1 => (
                        tern_vec(&mixed, y, z)?,
                        &tern_vec(x, y, z)? + &(c * &tern_vec(xp, y, z)?),
                    ),
                    VecLaw::Linearity2Conj => (
                        tern_vec(y, &mixed, z)?,
                        &tern_vec(y, x, z)? + &(c.conj() * &tern_vec(y, xp, z)?),
                    ),
                    _ => (
                        tern_vec(y, z, &mixed)?,
                        &tern_vec(y, z, x)? + &(c * &tern_vec(y, z, xp)?),
                    ),
                };
                let (r, s) = compare(&lhs, &rhs)?;
                let env = witness(&["x", "xp", "y", "z"], &[x, xp, y, z])?.with_scalar("c", c)?;
                Ok(Sample::new(r, s, env))
            }
            VecLaw::ZeroAbsorb => {
                let v = kets(dim, 3, rng, normalized)?;
                let zero = Ket::zero(dim);
                let r = [
                    tern_vec(&zero, &v[1], &v[2])?,
                    tern_vec(&v[0], &zero, &v[2])?,
                    tern_vec(&v[0], &v[1], &zero)?,
                ]
                .iter()
                .map(Ket::norm)
                .fold(0.0, f64::max);
                Ok(Sample::new(r, 0.0, witness(&["a", "b", "c"], &[&v[0], &v[1], &v[2]])?))
            }
            VecLaw::NormBound => {
                let v = kets(dim, 3, rng, normalized)?;
                let (a, b, c) = (&v[0], &v[1], &v[2]);
                let n = tern_vec(a, b, c)?.norm();
                let bound = a.norm() * b.norm() * c.norm();
                let exact = inner(b, c)?.norm() * a.norm();
                let r = (n - bound).max(0.0).max((n - exact).abs());
                Ok(Sample::new(r, bound, witness(&["a", "b", "c"], &[a, b, c])?))
            }
            VecLaw::DualCompat => {
                let v = kets(dim, 3, rng, normalized)?;
                let (a, b, c) = (&v[0], &v[1], &v[2]);
                let lhs = tern_vec(a, b, c)?.adjoint();
                let rhs = tern_dual(&c.adjoint(), &b.adjoint(), &a.adjoint())?;
                let r = lhs.distance(&rhs)?;
                let s = lhs.norm().max(rhs.norm());
                Ok(Sample::new(r, s, witness(&["a", "b", "c"], &[a, b, c])?))
            }
            VecLaw::DsumSplit => {
                let p = kets(dim, 3, rng, normalized)?;
                let q = kets(dim + 1, 3, rng, normalized)?;
                let joined: Vec<Ket> = p.iter().zip(&q).map(|(x, y)| direct_sum_ket(x, y)).collect();
                // each summand embedded in H₁ ⊕ H₂ and multiplied there
                let first: Vec<Ket> = p.iter().map(|x| direct_sum_ket(x, &Ket::zero(dim + 1))).collect();
                let second: Vec<Ket> = q.iter().map(|y| direct_sum_ket(&Ket::zero(dim), y)).collect();
                let whole = &tern_vec(&first[0], &first[1], &first[2])?
                    + &tern_vec(&second[0], &second[1], &second[2])?;
                let split = tern_vec_dsum([(&p[0], &q[0]), (&p[1], &q[1]), (&p[2], &q[2])])?;
                let (r, s) = compare(&whole, &split)?;
                let env = witness(&["a", "b", "c"], &[&joined[0], &joined[1], &joined[2]])?;
                Ok(Sample::new(r, s, env))
            }
            VecLaw::TensorSplit => {
                let p = kets(dim, 3, rng, normalized)?;
                let q = kets(dim, 3, rng, normalized)?;
                let joined: Vec<Ket> = p.iter().zip(&q).map(|(x, y)| tensor_ket(x, y)).collect();
                let whole = tern_vec(&joined[0], &joined[1], &joined[2])?;
                let split = tern_vec_tensor([(&p[0], &q[0]), (&p[1], &q[1]), (&p[2], &q[2])])?;
                let (r, s) = compare(&whole, &split)?;
                let env = witness(&["a", "b", "c"], &[&joined[0], &joined[1], &joined[2]])?;
                Ok(Sample::new(r, s, env))
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{Complex, Tolerance, I, ONE, ZERO};

    fn up() -> Ket {
        Ket::basis(2, 0)
    }

    fn down() -> Ket {
        Ket::basis(2, 1)
    }

    #[test]
    fn spin_basis_products() {
        assert_eq!(tern_vec(&up(), &down(), &down()).unwrap(), up());
        assert_eq!(tern_vec(&up(), &up(), &up()).unwrap(), up());
        assert_eq!(tern_vec(&down(), &up(), &up()).unwrap(), down());
        assert_eq!(tern_vec(&up(), &up(), &down()).unwrap(), Ket::zero(2));
    }

    #[test]
    fn spin_space_general_formula() {
        // [a↑, b↑, c↑ + d↓] = a·conj(b)·c ↑ with a=2, b=i, c=1, d=5
        let a = Complex::new(2.0, 0.0);
        let b = I;
        let c = ONE;
        let d = Complex::new(5.0, 0.0);
        let third = &(c * &up()) + &(d * &down());
        let out = tern_vec(&(a * &up()), &(b * &up()), &third).unwrap();
        assert_eq!(out, Complex::new(0.0, -2.0) * &up());
    }

    #[test]
    fn zero_is_absorbing() {
        let k = Ket::new(vec![Complex::new(0.3, 1.0), Complex::new(-2.0, 0.1)]).unwrap();
        let z = Ket::zero(2);
        assert_eq!(tern_vec(&z, &k, &k).unwrap(), z);
        assert_eq!(tern_vec(&k, &z, &k).unwrap(), z);
        assert_eq!(tern_vec(&k, &k, &z).unwrap(), z);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(tern_vec(&Ket::zero(2), &Ket::zero(3), &Ket::zero(3)).is_err());
        assert!(tern_vec(&Ket::zero(2), &Ket::zero(2), &Ket::zero(3)).is_err());
        assert!(tern_dual(&Ket::zero(2).adjoint(), &Ket::zero(2).adjoint(), &Ket::zero(1).adjoint()).is_err());
    }

    #[test]
    fn dual_product_examples() {
        let out = tern_dual(&up().adjoint(), &down().adjoint(), &up().adjoint()).unwrap();
        assert_eq!(out, Bra::zero(2));
        let out = tern_dual(&up().adjoint(), &up().adjoint(), &down().adjoint()).unwrap();
        assert_eq!(out, down().adjoint());
    }

    #[test]
    fn complex_line_product() {
        // conj(z2) appears in the middle: 2 · conj(i) · 3 = -6i
        let k = |z: Complex| Ket::new(vec![z]).unwrap();
        let out = tern_vec(&k(Complex::new(2.0, 0.0)), &k(I), &k(Complex::new(3.0, 0.0))).unwrap();
        assert_eq!(out, k(Complex::new(0.0, -6.0)));
    }

    #[test]
    fn direct_sum_examples() {
        let z = Ket::zero(3);
        let out = tern_vec_dsum([(&up(), &z), (&up(), &z), (&up(), &z)]).unwrap();
        assert_eq!(out, direct_sum_ket(&up(), &z));
        let a = Ket::new(vec![Complex::new(1.0, 2.0), ZERO]).unwrap();
        let out = tern_vec_dsum([(&a, &z), (&down(), &z), (&down(), &z)]).unwrap();
        assert_eq!(out, direct_sum_ket(&a, &z));
    }

    #[test]
    fn direct_sum_product_differs_from_concatenated_product() {
        let mut r = crate::random::rng(12);
        let p: Vec<Ket> = (0..3).map(|_| random_ket(2, &mut r, false).unwrap()).collect();
        let q: Vec<Ket> = (0..3).map(|_| random_ket(3, &mut r, false).unwrap()).collect();
        let joined: Vec<Ket> = p.iter().zip(&q).map(|(x, y)| direct_sum_ket(x, y)).collect();
        let concatenated = tern_vec(&joined[0], &joined[1], &joined[2]).unwrap();
        let split = tern_vec_dsum([(&p[0], &q[0]), (&p[1], &q[1]), (&p[2], &q[2])]).unwrap();
        assert!(concatenated.distance(&split).unwrap() > 1e-3);
    }

    #[test]
    fn direct_sum_product_is_para_associative() {
        let mut r = crate::random::rng(13);
        for _ in 0..50 {
            let p: Vec<Ket> = (0..5).map(|_| random_ket(2, &mut r, false).unwrap()).collect();
            let q: Vec<Ket> = (0..5).map(|_| random_ket(3, &mut r, false).unwrap()).collect();
            let x: Vec<Ket> = p.iter().zip(&q).map(|(a, b)| direct_sum_ket(a, b)).collect();
            let prod = |a: &Ket, b: &Ket, c: &Ket| {
                let (a1, a2) = crate::hilbert::split_ket(a, 2).unwrap();
                let (b1, b2) = crate::hilbert::split_ket(b, 2).unwrap();
                let (c1, c2) = crate::hilbert::split_ket(c, 2).unwrap();
                tern_vec_dsum([(&a1, &a2), (&b1, &b2), (&c1, &c2)]).unwrap()
            };
            let left = prod(&prod(&x[0], &x[1], &x[2]), &x[3], &x[4]);
            let middle = prod(&x[0], &prod(&x[3], &x[2], &x[1]), &x[4]);
            let right = prod(&x[0], &x[1], &prod(&x[2], &x[3], &x[4]));
            assert!(left.distance(&middle).unwrap() < 1e-12 * left.norm().max(1.0));
            assert!(left.distance(&right).unwrap() < 1e-12 * left.norm().max(1.0));
        }
    }

    #[test]
    fn tensor_examples() {
        let out = tern_vec_tensor([(&up(), &up()), (&up(), &up()), (&up(), &up())]).unwrap();
        assert_eq!(out, tensor_ket(&up(), &up()));
        let z = Ket::zero(2);
        let out = tern_vec_tensor([(&up(), &up()), (&z, &up()), (&up(), &up())]).unwrap();
        assert_eq!(out, Ket::zero(4));
    }

    #[test]
    fn harmonic_oscillator_truncation() {
        let n = 6;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let out = tern_vec(&Ket::basis(n, a), &Ket::basis(n, b), &Ket::basis(n, c)).unwrap();
                    let expected = if b == c { Ket::basis(n, a) } else { Ket::zero(n) };
                    assert_eq!(out, expected);
                }
            }
        }
    }

    /// Both sides of each para-associativity equality have the same
    /// linear/conjugate-linear type in every slot, so agreement on all
    /// basis quintuples proves the identity at that dimension.
    #[test]
    fn para_associativity_exhaustive_on_basis() {
        for dim in 1..=3 {
            let basis: Vec<Ket> = (0..dim).map(|k| Ket::basis(dim, k)).collect();
            let mut idx = [0usize; 5];
            loop {
                let [a, b, c, d, e] = idx.map(|i| &basis[i]);
                let left = tern_vec(&tern_vec(a, b, c).unwrap(), d, e).unwrap();
                let middle = tern_vec(a, &tern_vec(d, c, b).unwrap(), e).unwrap();
                let right = tern_vec(a, b, &tern_vec(c, d, e).unwrap()).unwrap();
                assert_eq!(left, middle);
                assert_eq!(left, right);
                // closed form: a · δ_bc · δ_de
                let expected = if idx[1] == idx[2] && idx[3] == idx[4] { a.clone() } else { Ket::zero(dim) };
                assert_eq!(left, expected);
                let mut k = 0;
                while k < 5 {
                    idx[k] += 1;
                    if idx[k] < dim {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == 5 {
                    break;
                }
            }
        }
    }

    #[test]
    fn law_names_round_trip() {
        for law in VecLaw::ALL {
            assert_eq!(law.name().parse::<VecLaw>().unwrap(), law);
        }
        assert_eq!("nope".parse::<VecLaw>().unwrap_err().code(), "unknown-law");
    }

    #[test]
    fn para_associativity_passes() {
        let report = check_law(VecLaw::ParaAssocVector, &CheckParams::new(4, 1000, 42)).unwrap();
        assert!(report.pass, "{}", report.summary());
        assert!(report.max_residual < 1e-12 * report.scale.max(1.0));
    }

    #[test]
    fn malcev_checks() {
        let generic = CheckParams::new(3, 1, 7);
        let left = check_law(VecLaw::MalcevLeft, &generic).unwrap();
        assert!(left.fails_clearly());
        assert!(left.counterexample.is_some());
        let right = check_law(VecLaw::MalcevRight, &CheckParams::new(3, 500, 7).normalized(true)).unwrap();
        assert!(right.pass, "{}", right.summary());
    }

    #[test]
    fn remaining_laws_pass() {
        for law in [
            VecLaw::Projection,
            VecLaw::Linearity1,
            VecLaw::Linearity2Conj,
            VecLaw::Linearity3,
            VecLaw::ZeroAbsorb,
            VecLaw::NormBound,
            VecLaw::DualCompat,
            VecLaw::DsumSplit,
            VecLaw::TensorSplit,
        ] {
            let report = check_law(law, &CheckParams::new(3, 100, 5).with_tol(Tolerance::default())).unwrap();
            assert!(report.pass, "{}", report.summary());
        }
    }
}
