use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::eval::{eval, Value};
use super::parser::{parse, Expr};
use crate::env::Env;
use crate::error::{Error, Result};
use crate::random::{
    random_antihermitian, random_hermitian, random_ket, random_operator, random_scalar, random_unitary, rng, Rng,
};
use crate::report::{run_trials, CheckParams, CheckReport, Sample};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    Ket,
    Bra,
    Op,
    Scalar,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Constraint {
    #[default]
    None,
    Normalized,
    Unitary,
    Hermitian,
    Antihermitian,
}

impl VarKind {
    fn name(self) -> &'static str {
        match self {
            VarKind::Ket => "ket",
            VarKind::Bra => "bra",
            VarKind::Op => "op",
            VarKind::Scalar => "scalar",
        }
    }
}

impl Constraint {
    fn name(self) -> &'static str {
        match self {
            Constraint::None => "none",
            Constraint::Normalized => "normalized",
            Constraint::Unitary => "unitary",
            Constraint::Hermitian => "hermitian",
            Constraint::Antihermitian => "antihermitian",
        }
    }
}

/// How to sample one free variable of an identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarSpec {
    pub name: String,
    pub kind: VarKind,
    /// Ignored for scalars.
    #[serde(default)]
    pub dim: usize,
    #[serde(default)]
    pub constraint: Constraint,
}

impl VarSpec {
    pub fn new(name: &str, kind: VarKind, dim: usize, constraint: Constraint) -> Result<Self> {
        let spec = VarSpec {
            name: name.to_string(),
            kind,
            dim,
            constraint,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |detail: &str| Error::VarSpec {
            spec: self.to_string(),
            detail: detail.to_string(),
        };
        let valid_name = self.name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            && self.name != "i"
            && self.name != "adj";
        if !valid_name {
            return Err(bad("name must be an identifier other than `i` and `adj`"));
        }
        if self.kind != VarKind::Scalar && self.dim == 0 {
            return Err(bad("dimension must be at least 1"));
        }
        let compatible = match self.constraint {
            Constraint::None => true,
            Constraint::Normalized => self.kind == VarKind::Ket,
            Constraint::Unitary | Constraint::Hermitian | Constraint::Antihermitian => self.kind == VarKind::Op,
        };
        if !compatible {
            return Err(bad(&format!(
                "constraint {} does not apply to kind {}",
                self.constraint.name(),
                self.kind.name()
            )));
        }
        Ok(())
    }

    fn sample(&self, r: &mut Rng) -> Result<Value> {
        let d = self.dim;
        Ok(match (self.kind, self.constraint) {
            (VarKind::Scalar, _) => Value::Scalar(random_scalar(r)),
            (VarKind::Ket, c) => Value::Ket(random_ket(d, r, c == Constraint::Normalized)?),
            (VarKind::Bra, _) => Value::Bra(random_ket(d, r, false)?.adjoint()),
            (VarKind::Op, Constraint::Unitary) => Value::Op(random_unitary(d, r)?),
            (VarKind::Op, Constraint::Hermitian) => Value::Op(random_hermitian(d, r)?),
            (VarKind::Op, Constraint::Antihermitian) => Value::Op(random_antihermitian(d, r)?),
            (VarKind::Op, _) => Value::Op(random_operator(d, r)?),
        })
    }
}

impl fmt::Display for VarSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.kind.name())?;
        if self.kind != VarKind::Scalar {
            write!(f, "[{}]", self.dim)?;
        }
        if self.constraint != Constraint::None {
            write!(f, "{{{}}}", self.constraint.name())?;
        }
        Ok(())
    }
}

/// `name:kind[dim]{constraint}`; `[dim]` may be omitted for scalars and
/// `{constraint}` defaults to `none`.
impl FromStr for VarSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |detail: &str| Error::VarSpec {
            spec: s.to_string(),
            detail: detail.to_string(),
        };
        let s_trim = s.trim();
        let (name, rest) = s_trim.split_once(':').ok_or_else(|| bad("expected `name:kind`"))?;
        let (rest, constraint) = match rest.split_once('{') {
            Some((head, tail)) => {
                let c = tail.strip_suffix('}').ok_or_else(|| bad("unterminated `{`"))?;
                let constraint = serde_json::from_value(serde_json::Value::String(c.trim().to_string()))
                    .map_err(|_| bad(&format!("unknown constraint `{c}`")))?;
                (head, constraint)
            }
            None => (rest, Constraint::None),
        };
        let (kind, dim) = match rest.split_once('[') {
            Some((head, tail)) => {
                let d = tail.strip_suffix(']').ok_or_else(|| bad("unterminated `[`"))?;
                let dim: usize = d.trim().parse().map_err(|_| bad(&format!("bad dimension `{d}`")))?;
                (head, Some(dim))
            }
            None => (rest, None),
        };
        let kind: VarKind = serde_json::from_value(serde_json::Value::String(kind.trim().to_string()))
            .map_err(|_| bad(&format!("unknown kind `{}`", kind.trim())))?;
        let dim = match (kind, dim) {
            (VarKind::Scalar, d) => d.unwrap_or(0),
            (_, Some(d)) => d,
            (_, None) => return Err(bad("missing `[dim]`")),
        };
        VarSpec::new(name.trim(), kind, dim, constraint).map_err(|e| match e {
            Error::VarSpec { detail, .. } => bad(&detail),
            other => other,
        })
    }
}

/// Comma-separated list of [`VarSpec`]s. Commas inside `[..]` or `{..}`
/// do not split.
pub fn parse_var_specs(text: &str) -> Result<Vec<VarSpec>> {
    let mut specs = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (k, c) in text.char_indices() {
        match c {
            '[' | '{' => depth += 1,
            ']' | '}' => depth -= 1,
            ',' if depth == 0 => {
                specs.push(text[start..k].parse()?);
                start = k + 1;
            }
            _ => {}
        }
    }
    if !text[start..].trim().is_empty() || !specs.is_empty() {
        specs.push(text[start..].parse()?);
    }
    Ok(specs)
}

fn side(name: &'static str) -> impl Fn(Error) -> Error {
    move |e| Error::Side {
        side: name,
        source: Box::new(e),
    }
}

/// All non-scalar variables share one dimension, which is returned (1 when
/// every variable is a scalar).
fn common_dim(vars: &[VarSpec]) -> Result<usize> {
    let mut dim = None;
    for (k, v) in vars.iter().enumerate() {
        v.validate()?;
        if vars[..k].iter().any(|w| w.name == v.name) {
            return Err(Error::VarSpec {
                spec: v.to_string(),
                detail: "variable declared twice".into(),
            });
        }
        if v.kind == VarKind::Scalar {
            continue;
        }
        match dim {
            None => dim = Some(v.dim),
            Some(d) if d != v.dim => {
                return Err(Error::VarSpec {
                    spec: v.to_string(),
                    detail: format!("all variables must share one dimension, found {d} and {}", v.dim),
                })
            }
            _ => {}
        }
    }
    Ok(dim.unwrap_or(1))
}

fn sample_env(vars: &[VarSpec], dim: usize, r: &mut Rng) -> Result<Env> {
    let mut env = Env::new(dim)?;
    for v in vars {
        match v.sample(r)? {
            Value::Scalar(z) => env.insert_scalar(&v.name, z)?,
            Value::Ket(k) => env.insert_ket(&v.name, k)?,
            Value::Bra(b) => env.insert_bra(&v.name, b)?,
            Value::Op(a) => env.insert_op(&v.name, a)?,
        }
    }
    Ok(env)
}

fn check_bound(e: &Expr, vars: &[VarSpec]) -> Result<()> {
    for (name, pos) in e.var_positions() {
        if !vars.iter().any(|v| v.name == name) {
            return Err(Error::Unbound {
                line: pos.line,
                column: pos.column,
                name,
            });
        }
    }
    Ok(())
}

/// Samples the free variables per their specs and compares both sides.
/// `params.dim` is ignored; the dimension comes from `vars`.
pub fn verify_named(name: &str, lhs: &str, rhs: &str, vars: &[VarSpec], params: &CheckParams) -> Result<CheckReport> {
    let l = parse(lhs).map_err(side("lhs"))?;
    let r = parse(rhs).map_err(side("rhs"))?;
    check_bound(&l, vars).map_err(side("lhs"))?;
    check_bound(&r, vars).map_err(side("rhs"))?;
    let dim = common_dim(vars)?;
    let params = CheckParams { dim, ..*params };
    params.validate()?;

    // one probe evaluation settles typing before any numbers are compared
    let probe = sample_env(vars, dim, &mut rng(params.seed))?;
    let lv = eval(&l, &probe).map_err(side("lhs"))?;
    let rv = eval(&r, &probe).map_err(side("rhs"))?;
    if lv.kind() != rv.kind() {
        return Err(Error::KindMismatch {
            lhs: lv.kind().to_string(),
            rhs: rv.kind().to_string(),
        });
    }

    run_trials(name, &params, |g| {
        let env = sample_env(vars, dim, g)?;
        let a = eval(&l, &env).map_err(side("lhs"))?;
        let b = eval(&r, &env).map_err(side("rhs"))?;
        Ok(Sample::new(a.distance(&b)?, a.norm().max(b.norm()), env))
    })
}

pub fn verify_identity(lhs: &str, rhs: &str, vars: &[VarSpec], params: &CheckParams) -> Result<CheckReport> {
    verify_named(&format!("{lhs} = {rhs}"), lhs, rhs, vars, params)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Pass,
    Fail,
}

/// One line of an identity corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub vars: Vec<VarSpec>,
    pub expect: Expect,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub const CORPUS_DEFAULT_TRIALS: u64 = 200;

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusOutcome {
    pub entry: CorpusEntry,
    pub report: Result<CheckReport>,
}

impl CorpusOutcome {
    /// The report exists and its verdict is the expected one.
    pub fn matched(&self) -> bool {
        match &self.report {
            Ok(r) => r.pass == (self.entry.expect == Expect::Pass),
            Err(_) => false,
        }
    }

    pub fn summary(&self) -> String {
        let verdict = if self.matched() { "ok" } else { "MISMATCH" };
        let expect = match self.entry.expect {
            Expect::Pass => "pass",
            Expect::Fail => "fail",
        };
        match &self.report {
            Ok(r) => format!(
                "{verdict} {} expect={expect} got={} max_residual={:.3e} bound={:.3e}",
                self.entry.name,
                if r.pass { "pass" } else { "fail" },
                r.max_residual,
                r.tolerance.bound(r.scale)
            ),
            Err(e) => format!("{verdict} {} expect={expect} error: {e}", self.entry.name),
        }
    }
}

/// JSON lines; blank lines and lines starting with `#` are skipped.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(k, l)| serde_json::from_str(l).map_err(|e| Error::Json(format!("line {}: {e}", k + 1))))
        .collect()
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<CorpusEntry>> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_corpus(&text)
}

pub fn run_entry(entry: &CorpusEntry, tol: crate::hilbert::Tolerance) -> CorpusOutcome {
    let params = CheckParams::new(1, entry.trials.unwrap_or(CORPUS_DEFAULT_TRIALS), entry.seed.unwrap_or(0)).with_tol(tol);
    CorpusOutcome {
        entry: entry.clone(),
        report: verify_named(&entry.name, &entry.lhs, &entry.rhs, &entry.vars, &params),
    }
}

pub fn run_corpus(entries: &[CorpusEntry], tol: crate::hilbert::Tolerance) -> Vec<CorpusOutcome> {
    entries.iter().map(|e| run_entry(e, tol)).collect()
}

/// The corpus shipped with the crate.
pub const SHIPPED_CORPUS: &str = include_str!("../../data/identities.jsonl");
