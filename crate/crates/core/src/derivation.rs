//! Derivations of the vector ternary product and the generalized ternary
//! Leibniz rule.
//!
//! `D` is a derivation when `D[a,b,c] = [Da,b,c] + [a,Db,c] + [a,b,Dc]`.
//! Expanding the brackets shows the residual is `‖a‖·|⟨b|(D + D†)c⟩|`, so the
//! randomized test and the algebraic test `D† = −D` must agree; both are run.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::env::Env;
use crate::error::{Error, Result};
use crate::hilbert::{Complex, Ket, Operator, Tolerance};
use crate::operator::commutator;
use crate::random::{random_antihermitian, random_hermitian, random_ket, random_operator, rng, trial_seed, Rng};
use crate::report::{run_trials, CheckParams, CheckReport, Sample};
use crate::vector::tern_vec;

fn check_dims(a: &Operator, kets: [&Ket; 3]) -> Result<()> {
    for k in kets {
        if k.dim() != a.dim() {
            return Err(Error::DimMismatch {
                expected: a.dim(),
                found: k.dim(),
            });
        }
    }
    Ok(())
}

/// Residual and scale of the three-term Leibniz rule.
fn leibniz_defect(d: &Operator, k1: &Ket, k2: &Ket, k3: &Ket) -> Result<(f64, f64)> {
    check_dims(d, [k1, k2, k3])?;
    let lhs = d.apply(&tern_vec(k1, k2, k3)?)?;
    let t1 = tern_vec(&d.apply(k1)?, k2, k3)?;
    let t2 = tern_vec(k1, &d.apply(k2)?, k3)?;
    let t3 = tern_vec(k1, k2, &d.apply(k3)?)?;
    let rhs = &(&t1 + &t2) + &t3;
    let scale = lhs.norm().max(t1.norm() + t2.norm() + t3.norm());
    Ok((lhs.distance(&rhs)?, scale))
}

/// `‖D[k1,k2,k3] − ([Dk1,k2,k3] + [k1,Dk2,k3] + [k1,k2,Dk3])‖`.
pub fn leibniz_residual(d: &Operator, k1: &Ket, k2: &Ket, k3: &Ket) -> Result<f64> {
    Ok(leibniz_defect(d, k1, k2, k3)?.0)
}

fn gen_leibniz_defect(a: &Operator, k1: &Ket, k2: &Ket, k3: &Ket) -> Result<(f64, f64)> {
    check_dims(a, [k1, k2, k3])?;
    let lhs = a.apply(&tern_vec(k1, k2, k3)?)?;
    let t1 = tern_vec(&a.apply(k1)?, k2, k3)?;
    let t2 = tern_vec(k1, &a.adjoint().apply(k2)?, k3)?;
    let t3 = tern_vec(k1, k2, &a.apply(k3)?)?;
    let rhs = &(&t1 - &t2) + &t3;
    let scale = lhs.norm().max(t1.norm() + t2.norm() + t3.norm());
    Ok((lhs.distance(&rhs)?, scale))
}

/// `‖A[k1,k2,k3] − ([Ak1,k2,k3] − [k1,A†k2,k3] + [k1,k2,Ak3])‖`; holds for
/// every operator `A`.
pub fn gen_leibniz_residual(a: &Operator, k1: &Ket, k2: &Ket, k3: &Ket) -> Result<f64> {
    Ok(gen_leibniz_defect(a, k1, k2, k3)?.0)
}

fn distributivity_defect(a: &Operator, k1: &Ket, k2: &Ket, k3: &Ket) -> Result<(f64, f64)> {
    check_dims(a, [k1, k2, k3])?;
    let lhs = a.apply(&tern_vec(k1, k2, k3)?)?;
    let rhs = tern_vec(&a.apply(k1)?, k2, k3)?;
    Ok((lhs.distance(&rhs)?, lhs.norm().max(rhs.norm())))
}

/// `‖A[k1,k2,k3] − [Ak1,k2,k3]‖`.
pub fn distributivity_residual(a: &Operator, k1: &Ket, k2: &Ket, k3: &Ket) -> Result<f64> {
    Ok(distributivity_defect(a, k1, k2, k3)?.0)
}

/// Verdict of [`is_derivation`]: the randomized Leibniz check and the direct
/// test `‖D + D†‖_max ≤ atol + rtol·‖D‖_max`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivationVerdict {
    pub report: CheckReport,
    pub antihermitian_defect: f64,
    pub algebraic: bool,
}

impl DerivationVerdict {
    pub fn randomized(&self) -> bool {
        self.report.pass
    }

    pub fn agree(&self) -> bool {
        self.report.pass == self.algebraic
    }

    pub fn is_derivation(&self) -> bool {
        self.report.pass && self.algebraic
    }
}

fn algebraic_test(d: &Operator, tol: &Tolerance) -> (f64, bool) {
    let defect = d.antihermitian_defect();
    (defect, tol.accepts(defect, d.max_norm()))
}

/// Samples `params.trials` triples and checks the Leibniz rule for `D`.
pub fn is_derivation(d: &Operator, params: &CheckParams) -> Result<DerivationVerdict> {
    if params.dim != d.dim() {
        return Err(Error::DimMismatch {
            expected: d.dim(),
            found: params.dim,
        });
    }
    let dim = d.dim();
    let report = run_trials("derivation", params, |r| {
        let k: Vec<Ket> = (0..3).map(|_| random_ket(dim, r, false)).collect::<Result<_>>()?;
        let (res, scale) = leibniz_defect(d, &k[0], &k[1], &k[2])?;
        let env = Env::new(dim)?
            .with_op("D", d.clone())?
            .with_ket("a", k[0].clone())?
            .with_ket("b", k[1].clone())?
            .with_ket("c", k[2].clone())?;
        Ok(Sample::new(res, scale, env))
    })?;
    let (antihermitian_defect, algebraic) = algebraic_test(d, &params.tol);
    Ok(DerivationVerdict {
        report,
        antihermitian_defect,
        algebraic,
    })
}

/// `H ↦ iH`.
pub fn derivation_from_observable(h: &Operator, tol: &Tolerance) -> Result<Operator> {
    let deviation = h.hermitian_defect();
    if !tol.accepts(deviation, h.max_norm()) {
        return Err(Error::NotSelfAdjoint { deviation });
    }
    Ok(h.times_i())
}

/// `D ↦ −iD`, inverse of [`derivation_from_observable`].
pub fn observable_from_derivation(d: &Operator, tol: &Tolerance) -> Result<Operator> {
    let (deviation, ok) = algebraic_test(d, tol);
    if !ok {
        return Err(Error::NotDerivation { deviation });
    }
    Ok(-&d.times_i())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LieClosureReport {
    /// Anti-self-adjointness defect of `[D1, D2]`.
    pub commutator_defect: f64,
    /// Anti-self-adjointness defect of `a·D1 + b·D2`.
    pub combination_defect: f64,
    /// Anti-self-adjointness defect of `i·D1`, expected to be large.
    pub control_defect: f64,
    pub control_rejected: bool,
    /// `D1 = 0`, so the negative control cannot fail.
    pub control_vacuous: bool,
    pub pass: bool,
}

/// Closure of derivations under the commutator and real combinations, with
/// the complex combination `i·D1` as a negative control.
pub fn lie_closure_check(
    d1: &Operator,
    d2: &Operator,
    a: f64,
    b: f64,
    tol: &Tolerance,
) -> Result<LieClosureReport> {
    for d in [d1, d2] {
        let (deviation, ok) = algebraic_test(d, tol);
        if !ok {
            return Err(Error::NotDerivation { deviation });
        }
    }
    let c = commutator(d1, d2)?;
    let commutator_defect = c.antihermitian_defect();
    let combo = &d1.scale(Complex::new(a, 0.0)) + &d2.scale(Complex::new(b, 0.0));
    let combination_defect = combo.antihermitian_defect();
    let control = d1.times_i();
    let control_defect = control.antihermitian_defect();
    let control_vacuous = d1.max_norm() == 0.0;
    let control_rejected = tol.clearly_rejects(control_defect, control.max_norm());
    let pass = tol.accepts(commutator_defect, c.max_norm())
        && tol.accepts(combination_defect, combo.max_norm())
        && (control_rejected || control_vacuous);
    Ok(LieClosureReport {
        commutator_defect,
        combination_defect,
        control_defect,
        control_rejected,
        control_vacuous,
        pass,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivLaw {
    GenLeibniz,
    Distributivity,
    Derivation,
}

impl DerivLaw {
    pub const ALL: [DerivLaw; 3] = [DerivLaw::GenLeibniz, DerivLaw::Distributivity, DerivLaw::Derivation];

    pub fn name(self) -> &'static str {
        match self {
            DerivLaw::GenLeibniz => "gen-leibniz",
            DerivLaw::Distributivity => "distributivity",
            DerivLaw::Derivation => "derivation",
        }
    }
}

impl fmt::Display for DerivLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DerivLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DerivLaw::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::UnknownLaw {
                name: s.to_string(),
                valid: DerivLaw::ALL.iter().map(|l| l.name()).collect::<Vec<_>>().join(", "),
            })
    }
}

/// Randomized law check. `derivation` samples `D = iH` afresh each trial;
/// the other two sample a generic operator.
pub fn check_deriv_law(law: DerivLaw, params: &CheckParams) -> Result<CheckReport> {
    let dim = params.dim;
    run_trials(law.name(), params, |r| {
        let a = match law {
            DerivLaw::Derivation => random_antihermitian(dim, r)?,
            _ => random_operator(dim, r)?,
        };
        let k: Vec<Ket> = (0..3).map(|_| random_ket(dim, r, false)).collect::<Result<_>>()?;
        let (res, scale) = match law {
            DerivLaw::GenLeibniz => gen_leibniz_defect(&a, &k[0], &k[1], &k[2])?,
            DerivLaw::Distributivity => distributivity_defect(&a, &k[0], &k[1], &k[2])?,
            DerivLaw::Derivation => leibniz_defect(&a, &k[0], &k[1], &k[2])?,
        };
        let env = Env::new(dim)?
            .with_op(if law == DerivLaw::Derivation { "D" } else { "A" }, a)?
            .with_ket("a", k[0].clone())?
            .with_ket("b", k[1].clone())?
            .with_ket("c", k[2].clone())?;
        Ok(Sample::new(res, scale, env))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SampleKind {
    /// `iH`, `H` Hermitian.
    IHermitian,
    /// `H` Hermitian, nonzero.
    Hermitian,
    /// Ginibre.
    Generic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub samples: u64,
    pub triples_per_sample: u64,
    pub seed: u64,
    pub dims: (usize, usize),
    /// Samples where the randomized and algebraic criteria differ.
    pub disagreements: u64,
    /// `iH` samples rejected by either criterion.
    pub i_hermitian_rejected: u64,
    /// Hermitian samples accepted by either criterion.
    pub hermitian_accepted: u64,
    /// Pairs of derivations whose commutator or real combination is not a
    /// derivation.
    pub closure_failures: u64,
    pub pass: bool,
}

fn pick_dim(r: &mut Rng, dims: (usize, usize)) -> usize {
    use rand::Rng as _;
    r.random_range(dims.0..=dims.1)
}

/// Draws `samples` candidates cycling through [`SampleKind`]s at dimensions
/// in `dims` and cross-checks both derivation criteria on each. Every third
/// sample also checks Lie closure on a fresh pair of `iH`s.
pub fn classify_derivations(
    samples: u64,
    triples_per_sample: u64,
    dims: (usize, usize),
    seed: u64,
    tol: &Tolerance,
) -> Result<ClassificationReport> {
    if dims.0 == 0 || dims.0 > dims.1 {
        return Err(Error::InvalidArgument {
            detail: format!("invalid dimension range {}..={}", dims.0, dims.1),
        });
    }
    let outcomes: Vec<(SampleKind, bool, bool, bool)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(trial_seed(seed, i));
            let dim = pick_dim(&mut r, dims);
            let kind = match i % 3 {
                0 => SampleKind::IHermitian,
                1 => SampleKind::Hermitian,
                _ => SampleKind::Generic,
            };
            let d = match kind {
                SampleKind::IHermitian => random_antihermitian(dim, &mut r)?,
                SampleKind::Hermitian => random_hermitian(dim, &mut r)?,
                SampleKind::Generic => random_operator(dim, &mut r)?,
            };
            let params = CheckParams::new(dim, triples_per_sample, trial_seed(seed ^ 0x5eed, i)).with_tol(*tol);
            let verdict = is_derivation(&d, &params)?;
            let closure_ok = if kind == SampleKind::IHermitian {
                let d2 = random_antihermitian(dim, &mut r)?;
                let a = crate::random::real_normal(&mut r);
                let b = crate::random::real_normal(&mut r);
                lie_closure_check(&d, &d2, a, b, tol)?.pass
            } else {
                true
            };
            Ok((kind, verdict.randomized(), verdict.algebraic, closure_ok))
        })
        .collect::<Result<_>>()?;

    let mut report = ClassificationReport {
        samples,
        triples_per_sample,
        seed,
        dims,
        disagreements: 0,
        i_hermitian_rejected: 0,
        hermitian_accepted: 0,
        closure_failures: 0,
        pass: false,
    };
    for (kind, randomized, algebraic, closure_ok) in outcomes {
        report.disagreements += u64::from(randomized != algebraic);
        match kind {
            SampleKind::IHermitian => report.i_hermitian_rejected += u64::from(!randomized || !algebraic),
            SampleKind::Hermitian => report.hermitian_accepted += u64::from(randomized || algebraic),
            SampleKind::Generic => {}
        }
        report.closure_failures += u64::from(!closure_ok);
    }
    report.pass = report.disagreements == 0
        && report.i_hermitian_rejected == 0
        && report.hermitian_accepted == 0
        && report.closure_failures == 0;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::I;

    fn up() -> Ket {
        Ket::basis(2, 0)
    }

    fn down() -> Ket {
        Ket::basis(2, 1)
    }

    #[test]
    fn leibniz_examples() {
        let iz = Operator::pauli_z().times_i();
        assert_eq!(leibniz_residual(&iz, &up(), &up(), &up()).unwrap(), 0.0);
        assert_eq!(leibniz_residual(&Operator::pauli_z(), &up(), &up(), &up()).unwrap(), 2.0);
        let mut r = rng(3);
        let k: Vec<Ket> = (0..3).map(|_| random_ket(3, &mut r, false).unwrap()).collect();
        assert_eq!(leibniz_residual(&Operator::zero(3), &k[0], &k[1], &k[2]).unwrap(), 0.0);
    }

    #[test]
    fn leibniz_residual_matches_closed_form() {
        // ‖a‖·|⟨b|(D + D†)c⟩|
        let mut r = rng(8);
        let d = random_operator(4, &mut r).unwrap();
        let k: Vec<Ket> = (0..3).map(|_| random_ket(4, &mut r, false).unwrap()).collect();
        let sym = &d + &d.adjoint();
        let expected = k[0].norm() * crate::hilbert::inner(&k[1], &sym.apply(&k[2]).unwrap()).unwrap().norm();
        let got = leibniz_residual(&d, &k[0], &k[1], &k[2]).unwrap();
        assert!((got - expected).abs() <= 1e-12 * expected.max(1.0));
    }

    #[test]
    fn gen_leibniz_examples() {
        let mut r = rng(4);
        let k: Vec<Ket> = (0..3).map(|_| random_ket(3, &mut r, false).unwrap()).collect();
        assert_eq!(gen_leibniz_residual(&Operator::identity(3), &k[0], &k[1], &k[2]).unwrap(), 0.0);
        assert_eq!(gen_leibniz_residual(&Operator::pauli_x(), &up(), &down(), &down()).unwrap(), 0.0);
    }

    #[test]
    fn distributivity_examples() {
        assert_eq!(distributivity_residual(&Operator::pauli_x(), &up(), &down(), &down()).unwrap(), 0.0);
        let mut r = rng(4);
        let k: Vec<Ket> = (0..3).map(|_| random_ket(3, &mut r, false).unwrap()).collect();
        assert_eq!(distributivity_residual(&Operator::zero(3), &k[0], &k[1], &k[2]).unwrap(), 0.0);
    }

    #[test]
    fn dim_mismatch_is_an_error() {
        let err = leibniz_residual(&Operator::pauli_z(), &up(), &Ket::basis(3, 0), &up()).unwrap_err();
        assert_eq!(err.code(), "dim-mismatch");
    }

    #[test]
    fn is_derivation_examples() {
        let mut r = rng(21);
        let params = CheckParams::new(4, 200, 5);
        let h = random_hermitian(4, &mut r).unwrap();
        let v = is_derivation(&h.times_i(), &params).unwrap();
        assert!(v.is_derivation() && v.agree());
        let v = is_derivation(&h, &params).unwrap();
        assert!(!v.randomized() && !v.algebraic);
        assert!(v.report.counterexample.is_some());
        let v = is_derivation(&Operator::zero(4), &params).unwrap();
        assert!(v.is_derivation());
    }

    #[test]
    fn observable_bijection_is_exact() {
        let tol = Tolerance::default();
        let d = derivation_from_observable(&Operator::pauli_z(), &tol).unwrap();
        assert_eq!(d, Operator::pauli_z().scale(I));
        assert_eq!(derivation_from_observable(&Operator::zero(2), &tol).unwrap(), Operator::zero(2));
        for seed in 0..20 {
            let h = random_hermitian(5, &mut rng(seed)).unwrap();
            let d = derivation_from_observable(&h, &tol).unwrap();
            assert_eq!(observable_from_derivation(&d, &tol).unwrap(), h);
        }
        let err = derivation_from_observable(&random_operator(3, &mut rng(0)).unwrap(), &tol).unwrap_err();
        assert_eq!(err.code(), "not-self-adjoint");
    }

    #[test]
    fn lie_closure_examples() {
        let tol = Tolerance::default();
        let ix = Operator::pauli_x().times_i();
        let iy = Operator::pauli_y().times_i();
        let report = lie_closure_check(&ix, &iy, 0.3, -1.7, &tol).unwrap();
        assert!(report.pass && report.control_rejected);
        assert_eq!(commutator(&ix, &iy).unwrap(), Operator::pauli_z().scale(Complex::new(0.0, -2.0)));
        let report = lie_closure_check(&ix, &iy, 0.0, 0.0, &tol).unwrap();
        assert!(report.pass);
        let err = lie_closure_check(&Operator::pauli_x(), &iy, 1.0, 1.0, &tol).unwrap_err();
        assert_eq!(err.code(), "not-derivation");
        let zero = Operator::zero(2);
        assert!(lie_closure_check(&zero, &iy, 1.0, 1.0, &tol).unwrap().control_vacuous);
    }

    #[test]
    fn law_reports() {
        for law in DerivLaw::ALL {
            let report = check_deriv_law(law, &CheckParams::new(4, 300, 11)).unwrap();
            assert!(report.pass, "{}", report.summary());
        }
        assert_eq!("gen-leibniz".parse::<DerivLaw>().unwrap(), DerivLaw::GenLeibniz);
        assert!("leibniz".parse::<DerivLaw>().is_err());
    }

    #[test]
    fn small_classification_agrees() {
        let report = classify_derivations(300, 4, (2, 8), 1, &Tolerance::default()).unwrap();
        assert!(report.pass, "{report:?}");
    }
}
