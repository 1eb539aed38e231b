//! Isometries, unitary and projective group actions, and their
//! homomorphism residuals against the vector and operator semiheaps.
//!
//! Finite groups are given by Cayley table. A projective representation
//! carries its Schur factor `ω` as an explicit table, so the cocycle
//! condition on `ω` and the product law `U(g₁)U(g₂) = ω(g₁,g₂) U(g₁g₂)` are
//! checked independently of each other.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::env::{from_pair, op_from_pairs, op_to_pairs, to_pair, Env, Pair};
use crate::error::{Error, Result};
use crate::hilbert::{Complex, Ket, Matrix, Operator, Tolerance, ONE};
use crate::operator::tern_op;
use crate::random::{random_isometry, random_ket, random_operator, random_unitary, rng, trial_seed};
use crate::report::{run_trials, CheckParams, CheckReport, Sample};
use crate::vector::tern_vec;

/// `‖V†V − I‖_max ≤ tol`.
pub fn is_isometry(v: &Matrix, tol: f64) -> bool {
    v.isometry_defect() <= tol
}

/// Residual and scale of `V[k1,k2,k3]` against `[Vk1, Vk2, Vk3]`.
fn hom_defect_vec(v: &Matrix, k1: &Ket, k2: &Ket, k3: &Ket) -> Result<(f64, f64)> {
    let lhs = v.apply(&tern_vec(k1, k2, k3)?)?;
    let rhs = tern_vec(&v.apply(k1)?, &v.apply(k2)?, &v.apply(k3)?)?;
    Ok((lhs.distance(&rhs)?, lhs.norm().max(rhs.norm())))
}

/// `‖V·[k1,k2,k3] − [Vk1, Vk2, Vk3]‖`; small whenever `V` is an isometry.
pub fn hom_residual_vec(v: &Matrix, k1: &Ket, k2: &Ket, k3: &Ket) -> Result<f64> {
    Ok(hom_defect_vec(v, k1, k2, k3)?.0)
}

fn require_unitary(u: &Operator, tol: &Tolerance) -> Result<()> {
    let deviation = u.unitarity_defect();
    if tol.accepts(deviation, 1.0) {
        Ok(())
    } else {
        Err(Error::NotUnitary { deviation })
    }
}

/// Similarity action `A ↦ U†AU`.
pub fn rho_op(u: &Operator, a: &Operator, tol: &Tolerance) -> Result<Operator> {
    require_unitary(u, tol)?;
    u.adjoint().matmul(a)?.matmul(u)
}

fn hom_defect_op(u: &Operator, a: &Operator, b: &Operator, c: &Operator) -> Result<(f64, f64)> {
    let tol = Tolerance::new(f64::MAX, 0.0)?;
    let lhs = rho_op(u, &tern_op(a, b, c)?, &tol)?;
    let rhs = tern_op(&rho_op(u, a, &tol)?, &rho_op(u, b, &tol)?, &rho_op(u, c, &tol)?)?;
    Ok((lhs.max_distance(&rhs)?, lhs.max_norm().max(rhs.max_norm())))
}

/// `‖ρ_U([A,B,C]) − [ρ_U A, ρ_U B, ρ_U C]‖_max`.
pub fn hom_residual_op(
    u: &Operator,
    a: &Operator,
    b: &Operator,
    c: &Operator,
    tol: &Tolerance,
) -> Result<f64> {
    require_unitary(u, tol)?;
    Ok(hom_defect_op(u, a, b, c)?.0)
}

/// Homomorphism check for Haar unitaries on kets; each trial also checks the
/// inverse `U†`.
pub fn check_unitary_action(params: &CheckParams) -> Result<CheckReport> {
    let dim = params.dim;
    run_trials("hom-unitary", params, |r| {
        let u = random_unitary(dim, r)?;
        let k: Vec<Ket> = (0..3).map(|_| random_ket(dim, r, false)).collect::<Result<_>>()?;
        let forward = hom_defect_vec(u.as_matrix(), &k[0], &k[1], &k[2])?;
        let inverse = hom_defect_vec(&u.as_matrix().adjoint(), &k[0], &k[1], &k[2])?;
        let env = Env::new(dim)?
            .with_op("U", u)?
            .with_ket("a", k[0].clone())?
            .with_ket("b", k[1].clone())?
            .with_ket("c", k[2].clone())?;
        Ok(Sample::new(forward.0.max(inverse.0), forward.1.max(inverse.1), env))
    })
}

/// Homomorphism check for random tall isometries `ℂ^dim → ℂ^dim_to`.
pub fn check_isometry_action(params: &CheckParams, dim_to: usize) -> Result<CheckReport> {
    let dim = params.dim;
    run_trials("hom-isometry", params, |r| {
        let v = random_isometry(dim, dim_to, r)?;
        let k: Vec<Ket> = (0..3).map(|_| random_ket(dim, r, false)).collect::<Result<_>>()?;
        let (res, scale) = hom_defect_vec(&v, &k[0], &k[1], &k[2])?;
        // V does not fit an Env (not square); the witness records the kets
        let env = Env::new(dim)?
            .with_ket("a", k[0].clone())?
            .with_ket("b", k[1].clone())?
            .with_ket("c", k[2].clone())?;
        Ok(Sample::new(res, scale, env))
    })
}

/// Homomorphism check for a fixed linear map `V` on random ket triples.
pub fn check_linear_map_action(name: &str, v: &Matrix, params: &CheckParams) -> Result<CheckReport> {
    let dim = v.cols();
    if params.dim != dim {
        return Err(Error::DimMismatch {
            expected: dim,
            found: params.dim,
        });
    }
    run_trials(name, params, |r| {
        let k: Vec<Ket> = (0..3).map(|_| random_ket(dim, r, false)).collect::<Result<_>>()?;
        let (res, scale) = hom_defect_vec(v, &k[0], &k[1], &k[2])?;
        let env = Env::new(dim)?
            .with_ket("a", k[0].clone())?
            .with_ket("b", k[1].clone())?
            .with_ket("c", k[2].clone())?;
        Ok(Sample::new(res, scale, env))
    })
}

/// Similarity-action homomorphism check on random operator triples.
pub fn check_similarity_action(params: &CheckParams) -> Result<CheckReport> {
    let dim = params.dim;
    run_trials("hom-op-action", params, |r| {
        let u = random_unitary(dim, r)?;
        let a: Vec<Operator> = (0..3).map(|_| random_operator(dim, r)).collect::<Result<_>>()?;
        let (res, scale) = hom_defect_op(&u, &a[0], &a[1], &a[2])?;
        let env = Env::new(dim)?
            .with_op("U", u)?
            .with_op("A", a[0].clone())?
            .with_op("B", a[1].clone())?
            .with_op("C", a[2].clone())?;
        Ok(Sample::new(res, scale, env))
    })
}

/// A finite group given by its Cayley table, `cayley[g][h] = g·h`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteGroup {
    cayley: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates that the table is a Latin square, is associative and has
    /// `identity` as a two-sided unit.
    pub fn new(cayley: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let n = cayley.len();
        let invalid = |detail: String| Error::InvalidGroup { detail };
        if n == 0 {
            return Err(invalid("empty Cayley table".into()));
        }
        for (g, row) in cayley.iter().enumerate() {
            if row.len() != n {
                return Err(invalid(format!("row {g} has {} entries, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&h| h >= n) {
                return Err(invalid(format!("entry {bad} in row {g} is out of range")));
            }
        }
        if identity >= n {
            return Err(invalid(format!("identity {identity} is out of range")));
        }
        for g in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for h in 0..n {
                seen_row[cayley[g][h]] = true;
                seen_col[cayley[h][g]] = true;
            }
            if seen_row.contains(&false) || seen_col.contains(&false) {
                return Err(invalid(format!("not a Latin square at row/column {g}")));
            }
            if cayley[identity][g] != g || cayley[g][identity] != g {
                return Err(invalid(format!("{identity} is not an identity for {g}")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if cayley[cayley[a][b]][c] != cayley[a][cayley[b][c]] {
                        return Err(invalid(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let inverses = (0..n)
            .map(|g| (0..n).find(|&h| cayley[g][h] == identity).expect("Latin square has inverses"))
            .collect();
        Ok(FiniteGroup {
            cayley,
            identity,
            inverses,
        })
    }

    /// `ℤₙ` with `g·h = g + h mod n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        FiniteGroup::new((0..n).map(|g| (0..n).map(|h| (g + h) % n).collect()).collect(), 0)
    }

    /// `ℤ₂ × ℤ₂` with elements `e, a, b, ab` at indices 0..4.
    pub fn klein_four() -> Self {
        FiniteGroup::new((0..4).map(|g| (0..4).map(|h| g ^ h).collect()).collect(), 0)
            .expect("xor table is a group")
    }

    pub fn order(&self) -> usize {
        self.cayley.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.cayley[g][h]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn cayley(&self) -> &[Vec<usize>] {
        &self.cayley
    }
}

/// Default tolerance for the unit-modulus checks on `ω` entries.
const MODULUS_TOL: f64 = 1e-12;

/// A Schur factor `ω: G × G → U(1)` stored as a table.
#[derive(Clone, Debug, PartialEq)]
pub struct Cocycle {
    group: FiniteGroup,
    omega: Vec<Vec<Complex>>,
}

impl Cocycle {
    /// Requires `|ω(g,h)| = 1` for all pairs and `ω(e,e) = 1`. The cocycle
    /// condition itself is left to [`cocycle_check`].
    pub fn new(group: FiniteGroup, omega: Vec<Vec<Complex>>) -> Result<Self> {
        let n = group.order();
        let invalid = |detail: String| Error::InvalidCocycle { detail };
        if omega.len() != n || omega.iter().any(|row| row.len() != n) {
            return Err(invalid(format!("omega must be {n}x{n}")));
        }
        for (g, row) in omega.iter().enumerate() {
            for (h, w) in row.iter().enumerate() {
                if !w.re.is_finite() || !w.im.is_finite() || (w.norm() - 1.0).abs() > MODULUS_TOL {
                    return Err(invalid(format!("|omega({g}, {h})| = {} is not 1", w.norm())));
                }
            }
        }
        let e = group.identity();
        if (omega[e][e] - ONE).norm() > MODULUS_TOL {
            return Err(invalid(format!("omega(e, e) = {} is not 1", omega[e][e])));
        }
        Ok(Cocycle { group, omega })
    }

    pub fn trivial(group: FiniteGroup) -> Self {
        let n = group.order();
        Cocycle {
            group,
            omega: vec![vec![ONE; n]; n],
        }
    }

    /// Reads `ω(g₁,g₂) = tr(U(g₁g₂)† U(g₁)U(g₂)) / d` off a unitary assignment.
    pub fn from_products(group: FiniteGroup, ops: &[Operator]) -> Result<Self> {
        let n = group.order();
        if ops.len() != n {
            return Err(Error::InvalidRepresentation {
                detail: format!("{} operators for a group of order {n}", ops.len()),
            });
        }
        let d = ops[0].dim() as f64;
        let mut omega = vec![vec![ONE; n]; n];
        for g in 0..n {
            for h in 0..n {
                let product = ops[g].matmul(&ops[h])?;
                let target = ops[group.mul(g, h)].adjoint().matmul(&product)?;
                let trace: Complex = (0..target.dim()).map(|i| target.get(i, i)).sum();
                omega[g][h] = trace / d;
            }
        }
        Cocycle::new(group, omega)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn omega(&self, g: usize, h: usize) -> Complex {
        self.omega[g][h]
    }

    pub fn table(&self) -> &[Vec<Complex>] {
        &self.omega
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CocycleReport {
    pub order: usize,
    pub triples: usize,
    /// Max of `|ω(g₁,g₂)ω(g₁g₂,g₃) − ω(g₁,g₂g₃)ω(g₂,g₃)|`.
    pub cocycle_residual: f64,
    /// First triple attaining a failing cocycle residual.
    pub worst_triple: Option<(usize, usize, usize)>,
    /// Max of `|ω(g,e) − 1|` and `|ω(e,g) − 1|`.
    pub normalization_residual: f64,
    /// Max of `|ω(g,g⁻¹) − ω(g⁻¹,g)|`.
    pub inverse_residual: f64,
    pub tolerance: Tolerance,
    pub pass: bool,
}

/// Checks the 2-cocycle condition over all `|G|³` triples plus the
/// normalization consequences `ω(g,e) = ω(e,g) = 1` and `ω(g,g⁻¹) = ω(g⁻¹,g)`.
pub fn cocycle_check(c: &Cocycle, tol: &Tolerance) -> CocycleReport {
    let g = &c.group;
    let n = g.order();
    let e = g.identity();
    let bound = tol.bound(1.0);
    let mut cocycle_residual: f64 = 0.0;
    let mut worst_triple = None;
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                let lhs = c.omega(a, b) * c.omega(g.mul(a, b), d);
                let rhs = c.omega(a, g.mul(b, d)) * c.omega(b, d);
                let r = (lhs - rhs).norm();
                if r > bound && worst_triple.is_none() {
                    worst_triple = Some((a, b, d));
                }
                cocycle_residual = cocycle_residual.max(r);
            }
        }
    }
    let mut normalization_residual: f64 = 0.0;
    let mut inverse_residual: f64 = 0.0;
    for x in 0..n {
        normalization_residual = normalization_residual
            .max((c.omega(x, e) - ONE).norm())
            .max((c.omega(e, x) - ONE).norm());
        let xi = g.inverse(x);
        inverse_residual = inverse_residual.max((c.omega(x, xi) - c.omega(xi, x)).norm());
    }
    let pass = cocycle_residual <= bound && normalization_residual <= bound && inverse_residual <= bound;
    CocycleReport {
        order: n,
        triples: n * n * n,
        cocycle_residual,
        worst_triple,
        normalization_residual,
        inverse_residual,
        tolerance: *tol,
        pass,
    }
}

/// A map `g ↦ U(g)` into the unitaries, multiplicative up to `ω`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveRep {
    cocycle: Cocycle,
    ops: Vec<Operator>,
}

impl ProjectiveRep {
    /// Requires one unitary per element, a common dimension, and `U(e) = 𝟙`.
    pub fn new(cocycle: Cocycle, ops: Vec<Operator>, tol: &Tolerance) -> Result<Self> {
        let n = cocycle.group().order();
        let invalid = |detail: String| Error::InvalidRepresentation { detail };
        if ops.len() != n {
            return Err(invalid(format!("{} operators for a group of order {n}", ops.len())));
        }
        let dim = ops[0].dim();
        for (g, u) in ops.iter().enumerate() {
            if u.dim() != dim {
                return Err(invalid(format!("U({g}) has dimension {}, expected {dim}", u.dim())));
            }
            let deviation = u.unitarity_defect();
            if !tol.accepts(deviation, 1.0) {
                return Err(invalid(format!("U({g}) is not unitary (deviation {deviation:e})")));
            }
        }
        let e = cocycle.group().identity();
        let deviation = ops[e].max_distance(&Operator::identity(dim))?;
        if !tol.accepts(deviation, 1.0) {
            return Err(invalid(format!("U(e) is not the identity (deviation {deviation:e})")));
        }
        Ok(ProjectiveRep { cocycle, ops })
    }

    /// The Pauli projective representation of `ℤ₂ × ℤ₂`:
    /// `e ↦ I, a ↦ X, b ↦ Z, ab ↦ XZ`, with `ω` read off the products.
    pub fn pauli_klein_four() -> Self {
        let ops = pauli_klein_ops();
        let cocycle = Cocycle::from_products(FiniteGroup::klein_four(), &ops).expect("Pauli products");
        ProjectiveRep::new(cocycle, ops, &Tolerance::default()).expect("Pauli matrices are unitary")
    }

    pub fn dim(&self) -> usize {
        self.ops[0].dim()
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn group(&self) -> &FiniteGroup {
        self.cocycle.group()
    }

    pub fn op(&self, g: usize) -> &Operator {
        &self.ops[g]
    }

    pub fn ops(&self) -> &[Operator] {
        &self.ops
    }
}

/// `[I, X, Z, XZ]`.
pub fn pauli_klein_ops() -> Vec<Operator> {
    let x = Operator::pauli_x();
    let z = Operator::pauli_z();
    let xz = x.matmul(&z).unwrap();
    vec![Operator::identity(2), x, z, xz]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectiveRepReport {
    pub dim: usize,
    /// Max of `‖U(g₁)U(g₂) − ω(g₁,g₂)U(g₁g₂)‖_max` over all pairs.
    pub product_residual: f64,
    pub product_scale: f64,
    /// First pair (row-major) whose product law fails.
    pub first_failure: Option<(usize, usize)>,
    /// Max ket-semiheap homomorphism residual of `ψ ↦ U(g)ψ` over all `g`.
    pub hom_residual: f64,
    pub hom_scale: f64,
    pub hom_trials: u64,
    pub seed: u64,
    pub cocycle: CocycleReport,
    pub tolerance: Tolerance,
    pub pass: bool,
}

/// Checks the product law against the stored `ω` table and, for every
/// group element, that the induced ket action is a semiheap homomorphism
/// on `trials` seeded triples.
pub fn projective_rep_check(
    rep: &ProjectiveRep,
    trials: u64,
    seed: u64,
    tol: &Tolerance,
) -> Result<ProjectiveRepReport> {
    let g = rep.group();
    let n = g.order();
    let dim = rep.dim();
    let mut product_residual: f64 = 0.0;
    let mut product_scale: f64 = 0.0;
    let mut first_failure = None;
    for a in 0..n {
        for b in 0..n {
            let lhs = rep.op(a).matmul(rep.op(b))?;
            let rhs = rep.op(g.mul(a, b)).scale(rep.cocycle.omega(a, b));
            let r = lhs.max_distance(&rhs)?;
            let s = lhs.max_norm().max(rhs.max_norm());
            if !tol.accepts(r, s) && first_failure.is_none() {
                first_failure = Some((a, b));
            }
            product_residual = product_residual.max(r);
            product_scale = product_scale.max(s);
        }
    }

    let mut hom_residual: f64 = 0.0;
    let mut hom_scale: f64 = 0.0;
    for t in 0..trials {
        let mut r = rng(trial_seed(seed, t));
        let k: Vec<Ket> = (0..3).map(|_| random_ket(dim, &mut r, false)).collect::<Result<_>>()?;
        for u in rep.ops() {
            let (res, scale) = hom_defect_vec(u.as_matrix(), &k[0], &k[1], &k[2])?;
            hom_residual = hom_residual.max(res);
            hom_scale = hom_scale.max(scale);
        }
    }

    let cocycle = cocycle_check(&rep.cocycle, tol);
    let pass = first_failure.is_none()
        && tol.accepts(product_residual, product_scale)
        && tol.accepts(hom_residual, hom_scale)
        && cocycle.pass;
    Ok(ProjectiveRepReport {
        dim,
        product_residual,
        product_scale,
        first_failure,
        hom_residual,
        hom_scale,
        hom_trials: trials,
        seed,
        cocycle,
        tolerance: *tol,
        pass,
    })
}

/// Group / representation file:
/// `{"order": n, "identity": 0, "cayley": [[...]], "omega": [[[re,im],...]], "ops": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub order: usize,
    pub identity: usize,
    pub cayley: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<Vec<Pair>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ops: Option<Vec<Vec<Vec<Pair>>>>,
}

impl GroupFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn from_rep(rep: &ProjectiveRep) -> Self {
        let g = rep.group();
        GroupFile {
            order: g.order(),
            identity: g.identity(),
            cayley: g.cayley().to_vec(),
            omega: Some(
                rep.cocycle()
                    .table()
                    .iter()
                    .map(|row| row.iter().copied().map(to_pair).collect())
                    .collect(),
            ),
            ops: Some(rep.ops().iter().map(op_to_pairs).collect()),
        }
    }

    pub fn group(&self) -> Result<FiniteGroup> {
        if self.cayley.len() != self.order {
            return Err(Error::InvalidGroup {
                detail: format!("order {} but Cayley table has {} rows", self.order, self.cayley.len()),
            });
        }
        FiniteGroup::new(self.cayley.clone(), self.identity)
    }

    /// The stored `ω`, or the trivial cocycle when absent.
    pub fn cocycle(&self) -> Result<Cocycle> {
        let group = self.group()?;
        match &self.omega {
            Some(table) => Cocycle::new(
                group,
                table
                    .iter()
                    .map(|row| row.iter().copied().map(from_pair).collect())
                    .collect(),
            ),
            None => Ok(Cocycle::trivial(group)),
        }
    }

    pub fn representation(&self, tol: &Tolerance) -> Result<ProjectiveRep> {
        let cocycle = self.cocycle()?;
        let ops = self.ops.as_ref().ok_or_else(|| Error::InvalidRepresentation {
            detail: "file has no \"ops\"".into(),
        })?;
        let dim = ops.first().map_or(0, Vec::len);
        let ops = ops
            .iter()
            .enumerate()
            .map(|(g, rows)| op_from_pairs(&format!("ops[{g}]"), dim, rows))
            .collect::<Result<Vec<_>>>()?;
        ProjectiveRep::new(cocycle, ops, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::ZERO;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    #[test]
    fn isometry_examples() {
        assert!(is_isometry(&Matrix::identity(3), 1e-12));
        let embed = Matrix::from_columns(&[Ket::basis(3, 0), Ket::basis(3, 1)]).unwrap();
        assert!(is_isometry(&embed, 1e-12));
        assert!(!is_isometry(&Matrix::identity(2).scale(c(2.0)), 1e-12));
    }

    #[test]
    fn hom_residual_examples() {
        let mut r = rng(5);
        let k: Vec<Ket> = (0..3).map(|_| random_ket(3, &mut r, false).unwrap()).collect();
        assert_eq!(hom_residual_vec(&Matrix::identity(3), &k[0], &k[1], &k[2]).unwrap(), 0.0);
        let u = random_unitary(3, &mut r).unwrap();
        let (res, scale) = hom_defect_vec(u.as_matrix(), &k[0], &k[1], &k[2]).unwrap();
        assert!(res <= 1e-12 * scale.max(1.0));
        // 2I: V[a,b,c] = 2a⟨b|c⟩ but [2a,2b,2c] = 8a⟨b|c⟩
        let two = Matrix::identity(3).scale(c(2.0));
        let expected = 6.0 * crate::vector::tern_vec(&k[0], &k[1], &k[2]).unwrap().norm();
        let res = hom_residual_vec(&two, &k[0], &k[1], &k[2]).unwrap();
        assert!((res - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn rho_op_examples() {
        let a = random_operator(3, &mut rng(1)).unwrap();
        let tol = Tolerance::default();
        assert_eq!(rho_op(&Operator::identity(3), &a, &tol).unwrap(), a);
        let out = rho_op(&Operator::pauli_x(), &Operator::pauli_z(), &tol).unwrap();
        assert_eq!(out, -&Operator::pauli_z());
        let err = rho_op(&Operator::identity(3).scale(c(2.0)), &a, &tol).unwrap_err();
        assert_eq!(err.code(), "not-unitary");
    }

    #[test]
    fn group_validation() {
        assert!(FiniteGroup::cyclic(5).is_ok());
        // not a Latin square
        assert!(FiniteGroup::new(vec![vec![0, 1], vec![1, 1]], 0).is_err());
        // wrong identity
        assert!(FiniteGroup::new(vec![vec![0, 1], vec![1, 0]], 1).is_err());
        // Latin square with identity 0 that is not associative
        let loop_table = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::new(loop_table, 0).unwrap_err();
        assert!(err.to_string().contains("associative"), "{err}");
        let g = FiniteGroup::cyclic(6).unwrap();
        for x in 0..6 {
            assert_eq!(g.mul(x, g.inverse(x)), 0);
        }
    }

    #[test]
    fn cocycle_examples() {
        let tol = Tolerance::default();
        let z2 = FiniteGroup::cyclic(2).unwrap();
        assert!(cocycle_check(&Cocycle::trivial(FiniteGroup::cyclic(4).unwrap()), &tol).pass);

        let twisted = Cocycle::new(z2.clone(), vec![vec![c(1.0), c(1.0)], vec![c(1.0), c(-1.0)]]).unwrap();
        let report = cocycle_check(&twisted, &tol);
        assert!(report.pass);
        assert_eq!(report.triples, 8);
        assert_eq!(report.cocycle_residual, 0.0);

        let broken = Cocycle::new(z2, vec![vec![c(1.0), c(-1.0)], vec![c(1.0), c(1.0)]]).unwrap();
        let report = cocycle_check(&broken, &tol);
        assert!(!report.pass);
        assert_eq!(report.normalization_residual, 2.0);
    }

    #[test]
    fn cocycle_construction_validates_modulus() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        assert!(Cocycle::new(z2.clone(), vec![vec![c(1.0), c(2.0)], vec![c(1.0), c(1.0)]]).is_err());
        assert!(Cocycle::new(z2.clone(), vec![vec![c(-1.0), c(1.0)], vec![c(1.0), c(1.0)]]).is_err());
        assert!(Cocycle::new(z2, vec![vec![c(1.0)]]).is_err());
    }

    /// ω for e, a, b, ab ↦ I, X, Z, XZ, worked out by hand: ZX = −XZ,
    /// (XZ)X = −Z, Z(XZ) = −X, (XZ)(XZ) = −I; every other product has ω = 1.
    fn pauli_omega_by_hand() -> Vec<Vec<Complex>> {
        let mut w = vec![vec![c(1.0); 4]; 4];
        w[2][1] = c(-1.0);
        w[3][1] = c(-1.0);
        w[2][3] = c(-1.0);
        w[3][3] = c(-1.0);
        w
    }

    #[test]
    fn pauli_projective_representation() {
        let rep = ProjectiveRep::pauli_klein_four();
        assert_eq!(rep.cocycle().table(), pauli_omega_by_hand().as_slice());
        let tol = Tolerance::default();
        let report = projective_rep_check(&rep, 50, 3, &tol).unwrap();
        assert!(report.pass, "{report:?}");
        assert_eq!(report.cocycle.triples, 64);
        assert_eq!(report.cocycle.cocycle_residual, 0.0);
        assert_eq!(report.product_residual, 0.0);
    }

    #[test]
    fn pauli_assignment_with_trivial_cocycle_fails_at_b_a() {
        let rep = ProjectiveRep::new(
            Cocycle::trivial(FiniteGroup::klein_four()),
            pauli_klein_ops(),
            &Tolerance::default(),
        )
        .unwrap();
        let report = projective_rep_check(&rep, 10, 0, &Tolerance::default()).unwrap();
        assert!(!report.pass);
        assert_eq!(report.first_failure, Some((2, 1)));
        assert!(report.cocycle.pass);
    }

    #[test]
    fn unitary_representation_of_z2() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let rep = ProjectiveRep::new(
            Cocycle::trivial(z2),
            vec![Operator::identity(2), Operator::pauli_x()],
            &Tolerance::default(),
        )
        .unwrap();
        assert!(projective_rep_check(&rep, 10, 0, &Tolerance::default()).unwrap().pass);
    }

    #[test]
    fn representation_validation() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let tol = Tolerance::default();
        let not_unitary = Operator::diagonal(&[c(2.0), ZERO]).unwrap();
        assert!(ProjectiveRep::new(Cocycle::trivial(z2.clone()), vec![Operator::identity(2), not_unitary], &tol).is_err());
        assert!(ProjectiveRep::new(Cocycle::trivial(z2.clone()), vec![Operator::pauli_x(), Operator::identity(2)], &tol).is_err());
        assert!(ProjectiveRep::new(Cocycle::trivial(z2), vec![Operator::identity(2)], &tol).is_err());
    }

    #[test]
    fn group_file_round_trip() {
        let rep = ProjectiveRep::pauli_klein_four();
        let text = serde_json::to_string(&GroupFile::from_rep(&rep)).unwrap();
        let file: GroupFile = serde_json::from_str(&text).unwrap();
        assert_eq!(file.representation(&Tolerance::default()).unwrap(), rep);
    }

    #[test]
    fn action_law_reports() {
        assert!(check_unitary_action(&CheckParams::new(4, 100, 1)).unwrap().pass);
        assert!(check_isometry_action(&CheckParams::new(2, 100, 1), 5).unwrap().pass);
        assert!(check_similarity_action(&CheckParams::new(4, 100, 1)).unwrap().pass);
        let two = Matrix::identity(2).scale(c(2.0));
        let report = check_linear_map_action("hom-scaled", &two, &CheckParams::new(2, 20, 1)).unwrap();
        assert!(report.fails_clearly());
    }
}
