//! Decomposition of `A|ψ⟩` into vector ternary products of basis kets:
//!
//! `A|ψ⟩ = Σ cₙ a_{ml} [|l⟩, |m⟩, |n⟩]` with `a_{ml} = ⟨l|A|m⟩` and
//! `cₙ = ⟨n|ψ⟩`, so that `A = Σ a_{ml} |l⟩⟨m|`.
//!
//! Indices are 0-based in memory and 1-based in JSON.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::env::{from_pair, ket_from_pairs, ket_to_pairs, to_pair, Env, Pair};
use crate::error::{Error, Result};
use crate::hilbert::{inner, Complex, Ket, Matrix, Operator, Tolerance, ONE, ZERO};
use crate::random::{random_ket, random_operator, random_unitary};
use crate::report::{run_trials, CheckParams, CheckReport, Sample};
use crate::vector::tern_vec;

/// Gram defect allowed when validating a basis.
pub const BASIS_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct OrthonormalBasis {
    vectors: Vec<Ket>,
    name: Option<String>,
}

impl OrthonormalBasis {
    /// Requires `dim` vectors of dimension `dim` with `|⟨eᵢ|eⱼ⟩ − δᵢⱼ| ≤ tol`.
    pub fn new(vectors: Vec<Ket>, tol: f64) -> Result<Self> {
        let invalid = |detail: String| Error::InvalidBasis { detail };
        let dim = vectors.len();
        if dim == 0 {
            return Err(invalid("no vectors".into()));
        }
        if let Some((i, v)) = vectors.iter().enumerate().find(|(_, v)| v.dim() != dim) {
            return Err(invalid(format!("vector {} has dimension {}, expected {dim}", i + 1, v.dim())));
        }
        for i in 0..dim {
            for j in i..dim {
                let g = inner(&vectors[i], &vectors[j])?;
                let expected = if i == j { ONE } else { ZERO };
                let defect = (g - expected).norm();
                if defect > tol {
                    return Err(invalid(format!(
                        "<e{}|e{}> is off by {defect:e}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(OrthonormalBasis { vectors, name: None })
    }

    pub fn standard(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        Ok(OrthonormalBasis {
            vectors: (0..dim).map(|k| Ket::basis(dim, k)).collect(),
            name: Some("standard".into()),
        })
    }

    /// The columns of `u`.
    pub fn from_unitary(u: &Operator) -> Result<Self> {
        let m = u.as_matrix();
        OrthonormalBasis::new((0..m.cols()).map(|j| m.column(j)).collect(), BASIS_TOL)
    }

    /// Attaches a name used instead of the inline vectors in JSON.
    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vector(&self, k: usize) -> &Ket {
        &self.vectors[k]
    }

    pub fn vectors(&self) -> &[Ket] {
        &self.vectors
    }
}

/// `coeff · [e_l, e_m, e_n]`, 0-based.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TripletTerm {
    pub coeff: Complex,
    pub l: usize,
    pub m: usize,
    pub n: usize,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    c: Pair,
    l: usize,
    m: usize,
    n: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TripletSum {
    basis: OrthonormalBasis,
    terms: Vec<TripletTerm>,
    /// Terms dropped because `|coeff| ≤ atol`.
    pub pruned_small: usize,
    /// Terms dropped because `m ≠ n`, where `⟨e_m|e_n⟩ = 0` by orthonormality.
    pub pruned_orthogonal: usize,
}

impl TripletSum {
    /// Terms are sorted by `(l, m, n)`; duplicate triples are rejected.
    pub fn new(basis: OrthonormalBasis, mut terms: Vec<TripletTerm>) -> Result<Self> {
        let dim = basis.dim();
        for t in &terms {
            if t.l >= dim || t.m >= dim || t.n >= dim {
                return Err(Error::Shape {
                    detail: format!("term ({}, {}, {}) out of range for dim {dim}", t.l + 1, t.m + 1, t.n + 1),
                });
            }
            if !t.coeff.re.is_finite() || !t.coeff.im.is_finite() {
                return Err(Error::InvalidArgument {
                    detail: "non-finite coefficient".into(),
                });
            }
        }
        terms.sort_by_key(|t| (t.l, t.m, t.n));
        if let Some(w) = terms.windows(2).find(|w| (w[0].l, w[0].m, w[0].n) == (w[1].l, w[1].m, w[1].n)) {
            return Err(Error::InvalidArgument {
                detail: format!("duplicate term ({}, {}, {})", w[0].l + 1, w[0].m + 1, w[0].n + 1),
            });
        }
        Ok(TripletSum {
            basis,
            terms,
            pruned_small: 0,
            pruned_orthogonal: 0,
        })
    }

    pub fn basis(&self) -> &OrthonormalBasis {
        &self.basis
    }

    pub fn terms(&self) -> &[TripletTerm] {
        &self.terms
    }

    /// `Σ |coeff|`.
    pub fn mass(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).sum()
    }

    pub fn to_json_value(&self) -> Value {
        let basis = match self.basis.name() {
            Some(name) => Value::String(name.to_string()),
            None => json!(self.basis.vectors().iter().map(ket_to_pairs).collect::<Vec<_>>()),
        };
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|t| TermJson {
                c: to_pair(t.coeff),
                l: t.l + 1,
                m: t.m + 1,
                n: t.n + 1,
            })
            .collect();
        json!({
            "basis": basis,
            "pruned_orthogonal": self.pruned_orthogonal,
            "pruned_small": self.pruned_small,
            "terms": terms,
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("value serializes")
    }

    /// Parses the JSON layout of [`TripletSum::to_json_value`]. A named basis
    /// other than `"standard"` needs `dim` to be resolvable, so only
    /// `"standard"` and inline bases are accepted, with `dim` taken from the
    /// argument for the former.
    pub fn from_json_value(value: &Value, dim: usize) -> Result<Self> {
        let basis = match value.get("basis") {
            Some(Value::String(s)) if s == "standard" => OrthonormalBasis::standard(dim)?,
            Some(Value::String(s)) => {
                return Err(Error::InvalidBasis {
                    detail: format!("unknown named basis \"{s}\""),
                })
            }
            Some(inline) => {
                let vectors: Vec<Vec<Pair>> = serde_json::from_value(inline.clone())?;
                let kets = vectors
                    .iter()
                    .enumerate()
                    .map(|(i, v)| ket_from_pairs(&format!("basis[{}]", i + 1), vectors.len(), v))
                    .collect::<Result<Vec<_>>>()?;
                OrthonormalBasis::new(kets, BASIS_TOL)?
            }
            None => {
                return Err(Error::InvalidBasis {
                    detail: "missing \"basis\"".into(),
                })
            }
        };
        let raw: Vec<TermJson> = serde_json::from_value(value.get("terms").cloned().unwrap_or(Value::Null))?;
        let terms = raw
            .into_iter()
            .map(|t| {
                if t.l == 0 || t.m == 0 || t.n == 0 {
                    return Err(Error::Shape {
                        detail: "term indices are 1-based".into(),
                    });
                }
                Ok(TripletTerm {
                    coeff: from_pair(t.c),
                    l: t.l - 1,
                    m: t.m - 1,
                    n: t.n - 1,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        TripletSum::new(basis, terms)
    }
}

/// All raw terms `(l, m, n)` with `a_{ml} ≠ 0`, before any pruning. There
/// are `dim · nnz(a)` of them.
pub fn raw_terms(a: &Operator, psi: &Ket, basis: &OrthonormalBasis) -> Result<Vec<TripletTerm>> {
    let dim = basis.dim();
    for found in [a.dim(), psi.dim()] {
        if found != dim {
            return Err(Error::DimMismatch { expected: dim, found });
        }
    }
    let c: Vec<Complex> = basis.vectors().iter().map(|e| inner(e, psi)).collect::<Result<_>>()?;
    let images: Vec<Ket> = basis.vectors().iter().map(|e| a.apply(e)).collect::<Result<_>>()?;
    let mut terms = Vec::new();
    for l in 0..dim {
        for (m, image) in images.iter().enumerate() {
            let a_ml = inner(basis.vector(l), image)?;
            if a_ml == ZERO {
                continue;
            }
            for (n, &c_n) in c.iter().enumerate() {
                terms.push(TripletTerm {
                    coeff: c_n * a_ml,
                    l,
                    m,
                    n,
                });
            }
        }
    }
    Ok(terms)
}

/// Expands `A|ψ⟩` over `basis`, dropping terms with `|coeff| ≤ atol` and
/// terms with `m ≠ n`, whose bracket vanishes.
pub fn expand(a: &Operator, psi: &Ket, basis: &OrthonormalBasis, atol: f64) -> Result<TripletSum> {
    let raw = raw_terms(a, psi, basis)?;
    let mut pruned_small = 0;
    let mut pruned_orthogonal = 0;
    let mut terms = Vec::new();
    for t in raw {
        if t.coeff.norm() <= atol {
            pruned_small += 1;
        } else if t.m != t.n {
            pruned_orthogonal += 1;
        } else {
            terms.push(t);
        }
    }
    let mut sum = TripletSum::new(basis.clone(), terms)?;
    sum.pruned_small = pruned_small;
    sum.pruned_orthogonal = pruned_orthogonal;
    Ok(sum)
}

/// `Σ coeff · [e_l, e_m, e_n]`, summed in term order.
pub fn evaluate(ts: &TripletSum) -> Result<Ket> {
    let mut acc = Ket::zero(ts.basis.dim());
    for t in &ts.terms {
        let b = ts.basis();
        let bracket = tern_vec(b.vector(t.l), b.vector(t.m), b.vector(t.n))?;
        acc = &acc + &(t.coeff * &bracket);
    }
    Ok(acc)
}

/// Relative reconstruction tolerance.
pub fn reconstruction_tolerance() -> Tolerance {
    Tolerance::new(0.0, 1e-11).expect("valid tolerance")
}

/// Reconstruction residual and scale `max(‖Aψ‖, Σ|coeff|)`.
pub fn reconstruction_defect(a: &Operator, psi: &Ket, basis: &OrthonormalBasis, atol: f64) -> Result<(f64, f64)> {
    let ts = expand(a, psi, basis, atol)?;
    let direct = a.apply(psi)?;
    let rebuilt = evaluate(&ts)?;
    Ok((rebuilt.distance(&direct)?, direct.norm().max(ts.mass())))
}

/// Randomized reconstruction check; odd trials use a Haar-rotated basis.
/// Terms are pruned at `atol = 0` so that the residual measures the
/// reconstruction alone.
pub fn check_reconstruction(params: &CheckParams) -> Result<CheckReport> {
    let dim = params.dim;
    run_trials("kerner-reconstruction", params, |r| {
        let a = random_operator(dim, r)?;
        let psi = random_ket(dim, r, false)?;
        let u = random_unitary(dim, r)?;
        let rotated = crate::random::uniform(r) < 0.5;
        let basis = if rotated {
            OrthonormalBasis::from_unitary(&u)?
        } else {
            OrthonormalBasis::standard(dim)?
        };
        let (res, scale) = reconstruction_defect(&a, &psi, &basis, 0.0)?;
        let mut env = Env::new(dim)?.with_op("A", a)?.with_ket("psi", psi)?;
        if rotated {
            env = env.with_op("U", u)?;
        }
        Ok(Sample::new(res, scale, env))
    })
}

/// Basis vectors as the columns of a matrix.
pub fn basis_matrix(basis: &OrthonormalBasis) -> Matrix {
    Matrix::from_columns(basis.vectors()).expect("basis vectors share a dimension")
}
