//! Named bindings of kets, bras, operators and scalars at a common dimension.
//!
//! JSON layout (operators row-major, complex numbers as `[re, im]`):
//!
//! ```json
//! {"dim": 2,
//!  "kets": {"up": [[1,0],[0,0]]},
//!  "bras": {},
//!  "ops": {"X": [[[0,0],[1,0]],[[1,0],[0,0]]]},
//!  "scalars": {"z": [0,1]}}
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{Bra, Complex, Ket, Operator};

pub type Pair = [f64; 2];

pub(crate) fn to_pair(z: Complex) -> Pair {
    [z.re, z.im]
}

pub(crate) fn from_pair(p: Pair) -> Complex {
    Complex::new(p[0], p[1])
}

pub(crate) fn ket_to_pairs(k: &Ket) -> Vec<Pair> {
    k.entries().iter().copied().map(to_pair).collect()
}

pub(crate) fn op_to_pairs(a: &Operator) -> Vec<Vec<Pair>> {
    a.as_matrix()
        .row_vecs()
        .into_iter()
        .map(|row| row.into_iter().map(to_pair).collect())
        .collect()
}

pub(crate) fn ket_from_pairs(name: &str, dim: usize, entries: &[Pair]) -> Result<Ket> {
    if entries.len() != dim {
        return Err(Error::EnvObject {
            name: name.to_string(),
            detail: format!("length {} does not match dim {dim}", entries.len()),
        });
    }
    Ket::new(entries.iter().copied().map(from_pair).collect()).map_err(|e| Error::EnvObject {
        name: name.to_string(),
        detail: e.to_string(),
    })
}

pub(crate) fn op_from_pairs(name: &str, dim: usize, rows: &[Vec<Pair>]) -> Result<Operator> {
    let bad_shape = rows.len() != dim || rows.iter().any(|r| r.len() != dim);
    if bad_shape {
        return Err(Error::EnvObject {
            name: name.to_string(),
            detail: format!("operator is not {dim}x{dim}"),
        });
    }
    Operator::new(dim, rows.iter().flatten().copied().map(from_pair).collect()).map_err(|e| {
        Error::EnvObject {
            name: name.to_string(),
            detail: e.to_string(),
        }
    })
}

#[derive(Serialize, Deserialize)]
struct EnvFile {
    dim: usize,
    #[serde(default)]
    kets: BTreeMap<String, Vec<Pair>>,
    #[serde(default)]
    bras: BTreeMap<String, Vec<Pair>>,
    #[serde(default)]
    ops: BTreeMap<String, Vec<Vec<Pair>>>,
    #[serde(default)]
    scalars: BTreeMap<String, Pair>,
}

/// A value bound in an [`Env`].
#[derive(Clone, Debug, PartialEq)]
pub enum Binding<'a> {
    Ket(&'a Ket),
    Bra(&'a Bra),
    Op(&'a Operator),
    Scalar(Complex),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Env {
    dim: usize,
    kets: BTreeMap<String, Ket>,
    bras: BTreeMap<String, Bra>,
    ops: BTreeMap<String, Operator>,
    scalars: BTreeMap<String, Complex>,
}

impl Env {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        Ok(Env {
            dim,
            kets: BTreeMap::new(),
            bras: BTreeMap::new(),
            ops: BTreeMap::new(),
            scalars: BTreeMap::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn claim(&self, name: &str) -> Result<()> {
        if self.lookup(name).is_some() {
            return Err(Error::EnvObject {
                name: name.to_string(),
                detail: "name is bound twice".into(),
            });
        }
        Ok(())
    }

    fn check(&self, name: &str, dim: usize) -> Result<()> {
        if dim != self.dim {
            return Err(Error::EnvObject {
                name: name.to_string(),
                detail: format!("dimension {dim} does not match dim {}", self.dim),
            });
        }
        self.claim(name)
    }

    pub fn insert_ket(&mut self, name: &str, k: Ket) -> Result<()> {
        self.check(name, k.dim())?;
        self.kets.insert(name.to_string(), k);
        Ok(())
    }

    pub fn insert_bra(&mut self, name: &str, b: Bra) -> Result<()> {
        self.check(name, b.dim())?;
        self.bras.insert(name.to_string(), b);
        Ok(())
    }

    pub fn insert_op(&mut self, name: &str, a: Operator) -> Result<()> {
        self.check(name, a.dim())?;
        self.ops.insert(name.to_string(), a);
        Ok(())
    }

    pub fn insert_scalar(&mut self, name: &str, z: Complex) -> Result<()> {
        self.claim(name)?;
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::EnvObject {
                name: name.to_string(),
                detail: "scalar is not finite".into(),
            });
        }
        self.scalars.insert(name.to_string(), z);
        Ok(())
    }

    /// Builder-style [`Env::insert_ket`] for tests and witnesses.
    pub fn with_ket(mut self, name: &str, k: Ket) -> Result<Self> {
        self.insert_ket(name, k)?;
        Ok(self)
    }

    pub fn with_op(mut self, name: &str, a: Operator) -> Result<Self> {
        self.insert_op(name, a)?;
        Ok(self)
    }

    pub fn with_scalar(mut self, name: &str, z: Complex) -> Result<Self> {
        self.insert_scalar(name, z)?;
        Ok(self)
    }

    pub fn lookup(&self, name: &str) -> Option<Binding<'_>> {
        if let Some(k) = self.kets.get(name) {
            Some(Binding::Ket(k))
        } else if let Some(b) = self.bras.get(name) {
            Some(Binding::Bra(b))
        } else if let Some(a) = self.ops.get(name) {
            Some(Binding::Op(a))
        } else {
            self.scalars.get(name).map(|&z| Binding::Scalar(z))
        }
    }

    pub fn ket(&self, name: &str) -> Option<&Ket> {
        self.kets.get(name)
    }

    pub fn op(&self, name: &str) -> Option<&Operator> {
        self.ops.get(name)
    }

    pub fn kets(&self) -> &BTreeMap<String, Ket> {
        &self.kets
    }

    pub fn ops(&self) -> &BTreeMap<String, Operator> {
        &self.ops
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: EnvFile = serde_json::from_str(text)?;
        Env::from_file(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Env::from_json_str(&text)
    }

    fn from_file(file: EnvFile) -> Result<Self> {
        let mut env = Env::new(file.dim)?;
        for (name, entries) in &file.kets {
            let k = ket_from_pairs(name, file.dim, entries)?;
            env.insert_ket(name, k)?;
        }
        for (name, entries) in &file.bras {
            let b = ket_from_pairs(name, file.dim, entries)?;
            env.insert_bra(name, Bra::new(b.into_entries())?)?;
        }
        for (name, rows) in &file.ops {
            let a = op_from_pairs(name, file.dim, rows)?;
            env.insert_op(name, a)?;
        }
        for (name, &p) in &file.scalars {
            env.insert_scalar(name, from_pair(p))?;
        }
        Ok(env)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let file = EnvFile {
            dim: self.dim,
            kets: self.kets.iter().map(|(n, k)| (n.clone(), ket_to_pairs(k))).collect(),
            bras: self
                .bras
                .iter()
                .map(|(n, b)| (n.clone(), b.entries().iter().copied().map(to_pair).collect()))
                .collect(),
            ops: self.ops.iter().map(|(n, a)| (n.clone(), op_to_pairs(a))).collect(),
            scalars: self.scalars.iter().map(|(n, &z)| (n.clone(), to_pair(z))).collect(),
        };
        serde_json::to_value(file).expect("env serialization cannot fail")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("value serializes")
    }
}

/// The two-level spin space with `up`, `down` and the Pauli operators.
pub fn spin_env() -> Env {
    let mut env = Env::new(2).unwrap();
    env.insert_ket("up", Ket::basis(2, 0)).unwrap();
    env.insert_ket("down", Ket::basis(2, 1)).unwrap();
    env.insert_op("X", Operator::pauli_x()).unwrap();
    env.insert_op("Y", Operator::pauli_y()).unwrap();
    env.insert_op("Z", Operator::pauli_z()).unwrap();
    env.insert_op("I", Operator::identity(2)).unwrap();
    env
}
