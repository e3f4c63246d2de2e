//! JSON documents: module specs, sequence files and reports.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::{build, Algebra, RingSpec};
use crate::catalog;
use crate::complex::ModuleComplex;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::module::{cokernel_of_lambda_matrix, LambdaMatrix, Module, ModuleRep};

/// A module given by generator actions, by a presentation matrix over the
/// ring, or by a catalog shorthand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModuleSpec {
    /// One `dim x dim` matrix per ring generator.
    Actions {
        dim: usize,
        actions: Vec<Vec<Vec<i64>>>,
    },
    /// `Λ^rows / im(A)` with `entries[i][j]` the coefficient vector of `A_ij`.
    Presentation {
        rows: usize,
        cols: usize,
        entries: Vec<Vec<Vec<i64>>>,
    },
    Catalog {
        name: String,
    },
}

fn matrix(p: u32, rows: usize, cols: usize, data: &[Vec<i64>]) -> Result<Matrix> {
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidModule(format!(
            "expected a {rows}x{cols} matrix"
        )));
    }
    Ok(Matrix::from_rows(p, data))
}

impl ModuleSpec {
    pub fn build(&self, alg: &Algebra) -> Result<Module> {
        match self {
            ModuleSpec::Actions { dim, actions } => {
                let mats = actions
                    .iter()
                    .map(|a| matrix(alg.p(), *dim, *dim, a))
                    .collect::<Result<Vec<_>>>()?;
                ModuleRep::new(alg, *dim, mats)
            }
            ModuleSpec::Presentation {
                rows,
                cols,
                entries,
            } => {
                let f = alg.field();
                if entries.len() != *rows {
                    return Err(Error::InvalidModule(format!(
                        "expected {rows} rows of entries"
                    )));
                }
                let reduced: Vec<Vec<Vec<u32>>> = entries
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|e| e.iter().map(|&v| f.from_i64(v)).collect())
                            .collect()
                    })
                    .collect();
                let a = LambdaMatrix::from_entries(alg, *rows, *cols, &reduced)?;
                Ok(cokernel_of_lambda_matrix(alg, &a).0)
            }
            ModuleSpec::Catalog { name } => catalog::module(alg, name),
        }
    }

    pub fn from_module(m: &Module) -> Self {
        ModuleSpec::Actions {
            dim: m.dim(),
            actions: m.actions().iter().map(to_i64_rows).collect(),
        }
    }
}

pub fn to_i64_rows(m: &Matrix) -> Vec<Vec<i64>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|&v| v as i64).collect())
        .collect()
}

pub fn load_module(alg: &Algebra, path: &Path) -> Result<Module> {
    let text = fs::read_to_string(path)?;
    let spec: ModuleSpec = serde_json::from_str(&text)?;
    spec.build(alg)
}

/// A ring given either by catalog id or by a full spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RingRef {
    Id(String),
    Spec(RingSpec),
}

impl RingRef {
    pub fn build(&self, p_override: Option<u32>) -> Result<Algebra> {
        match self {
            RingRef::Id(id) => catalog::ring(id, p_override),
            RingRef::Spec(s) => build(s),
        }
    }
}

/// A complex of modules written from its highest position down:
/// `modules[0]` sits at position `top`, and `maps[i]` goes from
/// `modules[i]` to `modules[i+1]` (a `dim target x dim source` matrix).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceFile {
    pub ring: RingRef,
    pub top: i64,
    pub modules: Vec<ModuleSpec>,
    pub maps: Vec<Vec<Vec<i64>>>,
}

impl SequenceFile {
    pub fn to_complex(&self, alg: &Algebra) -> Result<ModuleComplex> {
        let mods = self
            .modules
            .iter()
            .map(|s| s.build(alg))
            .collect::<Result<Vec<_>>>()?;
        if self.maps.len() + 1 != mods.len().max(1) {
            return Err(Error::Contract(
                "a sequence needs one map between adjacent modules".to_string(),
            ));
        }
        let mut maps = Vec::new();
        for (i, m) in self.maps.iter().enumerate() {
            maps.push(matrix(alg.p(), mods[i + 1].dim(), mods[i].dim(), m)?);
        }
        let n = mods.len() as i64;
        let lo = self.top - (n - 1).max(0);
        let mut modules = mods;
        modules.reverse();
        maps.reverse();
        ModuleComplex::new(lo, modules, maps)
    }

    pub fn from_complex(ring: RingRef, c: &ModuleComplex) -> Self {
        SequenceFile {
            ring,
            top: c.hi(),
            modules: c
                .modules
                .iter()
                .rev()
                .map(ModuleSpec::from_module)
                .collect(),
            maps: c.maps.iter().rev().map(to_i64_rows).collect(),
        }
    }
}

/// Output document of every command. Running `command` again with the same
/// inputs reproduces `results` exactly; only `timing_ms` varies.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub ring: Option<RingSpec>,
    pub command: Vec<String>,
    pub seed: Option<u64>,
    pub limits: serde_json::Value,
    pub results: serde_json::Value,
    pub timing_ms: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::is_isomorphic;

    #[test]
    fn module_spec_roundtrip() {
        let alg = catalog::ring("R1q5", None).unwrap();
        let m = catalog::module(&alg, "tr:k").unwrap();
        let spec = ModuleSpec::from_module(&m);
        let text = serde_json::to_string(&spec).unwrap();
        let back: ModuleSpec = serde_json::from_str(&text).unwrap();
        let m2 = back.build(&alg).unwrap();
        assert!(m.same_as(&m2));
    }

    #[test]
    fn presentation_spec() {
        let alg = catalog::ring("R2q5", None).unwrap();
        let spec: ModuleSpec = serde_json::from_str(
            r#"{"kind":"presentation","rows":1,"cols":1,"entries":[[[0,1]]]}"#,
        )
        .unwrap();
        let m = spec.build(&alg).unwrap();
        assert!(is_isomorphic(&m, &catalog::module(&alg, "k").unwrap()).is_yes());
    }

    #[test]
    fn bad_actions_rejected() {
        let alg = catalog::ring("R2q5", None).unwrap();
        let spec = ModuleSpec::Actions {
            dim: 1,
            actions: vec![vec![vec![1]]],
        };
        assert!(spec.build(&alg).is_err());
    }

    #[test]
    fn sequence_file_roundtrip() {
        let alg = catalog::ring("R2q5", None).unwrap();
        let seq: SequenceFile = serde_json::from_str(
            r#"{"ring":"R2q5","top":1,
                "modules":[{"kind":"catalog","name":"k"},{"kind":"catalog","name":"free:1"},{"kind":"catalog","name":"k"}],
                "maps":[[[0],[1]],[[1,0]]]}"#,
        )
        .unwrap();
        let c = seq.to_complex(&alg).unwrap();
        assert_eq!((c.lo, c.hi()), (-1, 1));
        assert!(c.is_exact_at(&[-2, -1, 0, 1, 2]));
        let again = SequenceFile::from_complex(RingRef::Id("R2q5".into()), &c);
        let c2 = again.to_complex(&alg).unwrap();
        assert_eq!(c2.maps, c.maps);
    }
}
