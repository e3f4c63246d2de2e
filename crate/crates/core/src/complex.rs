//! Complexes of free modules and of general modules, minimal free
//! resolutions, exactness checks, dualization, Ext, Betti and Bass numbers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::module::{
    free_module, hom_module, minimal_generators, residue_field, HomSpace, LambdaMatrix, Module,
    ModuleMap, ModuleRep,
};

/// A minimal free resolution `… → F_2 → F_1 → F_0 (→ M)`, computed lazily.
#[derive(Clone, Debug)]
pub struct Resolution {
    alg: Algebra,
    ranks: Vec<usize>,
    /// `diffs[i]` is `d_{i+1}: F_{i+1} → F_i`.
    diffs: Vec<LambdaMatrix>,
    /// Kernel of the last map computed, inside `F_{ranks.len()-1}`.
    pending: Subspace,
}

impl Resolution {
    pub fn of_module(m: &Module) -> Self {
        let pres = m.presentation();
        let alg = m.algebra().clone();
        let mut res = Resolution {
            ranks: vec![pres.generators.len()],
            diffs: Vec::new(),
            pending: pres.kernel.clone(),
            alg,
        };
        // The minimal presentation already carries the first differential.
        res.push(pres.relations.clone());
        res
    }

    /// Resolution of `coker(first)` that starts with the given (possibly
    /// non-minimal) map `F_1 → F_0` and continues minimally.
    pub fn from_presentation(alg: &Algebra, first: &LambdaMatrix) -> Self {
        let mut res = Resolution {
            alg: alg.clone(),
            ranks: vec![first.rows()],
            diffs: Vec::new(),
            pending: Subspace::zero(alg.p(), 0),
        };
        res.push(first.clone());
        res
    }

    fn push(&mut self, d: LambdaMatrix) {
        self.pending = Subspace::kernel(&d.big(&self.alg));
        self.ranks.push(d.cols());
        self.diffs.push(d);
    }

    /// Makes sure `d_1..d_n` (hence `F_0..F_n`) are available.
    pub fn extend_to(&mut self, n: usize) {
        while self.diffs.len() < n {
            let r = *self.ranks.last().unwrap();
            let gens = minimal_generators(&self.alg, r, &self.pending);
            let d = LambdaMatrix::from_vectors(&self.alg, r, &gens);
            self.push(d);
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    /// Ranks `β_0..β_n`.
    pub fn betti(&mut self, n: usize) -> Vec<usize> {
        self.extend_to(n);
        self.ranks[..=n].to_vec()
    }

    pub fn rank(&mut self, i: usize) -> usize {
        self.extend_to(i);
        self.ranks[i]
    }

    /// `d_i: F_i → F_{i-1}` for `i ≥ 1`.
    pub fn diff(&mut self, i: usize) -> &LambdaMatrix {
        assert!(i >= 1, "differentials start at d_1");
        self.extend_to(i);
        &self.diffs[i - 1]
    }

    /// `F_n → … → F_0` as a free complex at positions `0..=n`.
    pub fn to_complex(&mut self, n: usize) -> FreeComplex {
        self.extend_to(n);
        FreeComplex {
            alg: self.alg.clone(),
            lo: 0,
            ranks: self.ranks[..=n].to_vec(),
            diffs: self.diffs[..n].to_vec(),
        }
    }
}

pub fn minimal_free_resolution(m: &Module, steps: usize) -> (FreeComplex, Vec<usize>) {
    let mut res = Resolution::of_module(m);
    let c = res.to_complex(steps);
    let betti = c.ranks.clone();
    (c, betti)
}

/// `dim_k Ext^i(M, N)` for `0 ≤ i ≤ bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtTable {
    pub bound: usize,
    pub dims: Vec<usize>,
}

impl ExtTable {
    /// Whether `Ext^i` vanishes for all `1 ≤ i ≤ j`.
    pub fn vanishes_through(&self, j: usize) -> bool {
        self.dims.iter().skip(1).take(j).all(|&d| d == 0)
    }

    /// Largest `m ≤ bound` with `Ext^1..Ext^m` all zero.
    pub fn vanishing_prefix(&self) -> usize {
        self.dims.iter().skip(1).take_while(|&&d| d == 0).count()
    }
}

/// Rank of `Hom(F_{i-1}, N) → Hom(F_i, N)`.
fn dual_rank(d: &LambdaMatrix, n: &ModuleRep) -> usize {
    d.transpose().on_module(n).rank()
}

/// Ext from a resolution: `Ext^i = β_i·dim N − rank δ_{i+1} − rank δ_i`.
pub fn ext_from_resolution(res: &mut Resolution, n: &Module, bound: usize) -> ExtTable {
    res.extend_to(bound + 1);
    let diffs: Vec<&LambdaMatrix> = res.diffs[..=bound].iter().collect();
    let ranks: Vec<usize> = diffs.par_iter().map(|d| dual_rank(d, n)).collect();
    let dims = (0..=bound)
        .map(|i| {
            let before = if i == 0 { 0 } else { ranks[i - 1] };
            res.ranks[i] * n.dim() - ranks[i] - before
        })
        .collect();
    ExtTable { bound, dims }
}

pub fn ext_dims(m: &Module, n: &Module, bound: usize) -> ExtTable {
    ext_from_resolution(&mut Resolution::of_module(m), n, bound)
}

/// `Ext^i(M, Λ)`.
pub fn ext_to_ring(m: &Module, bound: usize) -> ExtTable {
    ext_dims(m, &free_module(m.algebra(), 1), bound)
}

/// Bass numbers `μ^i(N) = dim_k Ext^i(k, N)`.
pub fn bass_numbers(n: &Module, bound: usize) -> Vec<usize> {
    ext_dims(&residue_field(n.algebra()), n, bound).dims
}

/// A complex of free modules `F_hi → … → F_lo` with matrices over Λ.
/// `diffs[k]` maps position `lo+k+1` to `lo+k`.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    pub alg: Algebra,
    pub lo: i64,
    pub ranks: Vec<usize>,
    pub diffs: Vec<LambdaMatrix>,
}

impl FreeComplex {
    pub fn new(
        alg: &Algebra,
        lo: i64,
        ranks: Vec<usize>,
        diffs: Vec<LambdaMatrix>,
    ) -> Result<Self> {
        if diffs.len() + 1 != ranks.len().max(1) {
            return Err(Error::Contract(
                "a complex needs one map between adjacent terms".to_string(),
            ));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.rows() != ranks[k] || d.cols() != ranks[k + 1] {
                return Err(Error::Contract(format!(
                    "map into position {} has the wrong shape",
                    lo + k as i64
                )));
            }
        }
        let c = FreeComplex {
            alg: alg.clone(),
            lo,
            ranks,
            diffs,
        };
        if let Some(pos) = c.first_nonzero_composite() {
            return Err(Error::Invariant(format!(
                "composite of differentials into position {pos} is nonzero"
            )));
        }
        Ok(c)
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn rank_at(&self, pos: i64) -> usize {
        if pos < self.lo || pos > self.hi() {
            0
        } else {
            self.ranks[(pos - self.lo) as usize]
        }
    }

    /// Differential leaving position `pos`.
    pub fn diff_from(&self, pos: i64) -> Option<&LambdaMatrix> {
        if pos <= self.lo || pos > self.hi() {
            None
        } else {
            Some(&self.diffs[(pos - self.lo - 1) as usize])
        }
    }

    fn first_nonzero_composite(&self) -> Option<i64> {
        (1..self.diffs.len()).find_map(|k| {
            let comp = self.diffs[k - 1].mul(&self.alg, &self.diffs[k]);
            (!comp.is_zero()).then_some(self.lo + k as i64 - 1)
        })
    }

    /// `Hom_Λ(−, Λ)` of the complex: positions negated, maps transposed.
    pub fn dual(&self) -> FreeComplex {
        let mut ranks = self.ranks.clone();
        ranks.reverse();
        let diffs = self.diffs.iter().rev().map(|d| d.transpose()).collect();
        FreeComplex {
            alg: self.alg.clone(),
            lo: -self.hi(),
            ranks,
            diffs,
        }
    }

    /// Exactness at the given positions, by ranks of the k-linear maps.
    /// Terms beyond the ends are zero.
    pub fn exactness(&self, positions: &[i64]) -> Vec<ExactnessAt> {
        let d = self.alg.dim();
        positions
            .par_iter()
            .map(|&pos| {
                let dim = self.rank_at(pos) * d;
                let out_rank = self.diff_from(pos).map_or(0, |m| m.big(&self.alg).rank());
                let im_dim = self
                    .diff_from(pos + 1)
                    .map_or(0, |m| m.big(&self.alg).rank());
                ExactnessAt::new(pos, dim, dim - out_rank, im_dim)
            })
            .collect()
    }

    pub fn to_module_complex(&self) -> ModuleComplex {
        let modules: Vec<Module> = self
            .ranks
            .iter()
            .map(|&r| free_module(&self.alg, r))
            .collect();
        let maps = self.diffs.iter().map(|d| d.big(&self.alg)).collect();
        ModuleComplex {
            lo: self.lo,
            modules,
            maps,
        }
    }

    /// Entries as nested coefficient vectors, one per differential.
    pub fn diff_entries(&self) -> Vec<Vec<Vec<Vec<u32>>>> {
        self.diffs.iter().map(|d| d.to_entries()).collect()
    }
}

/// Homology report at one position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessAt {
    pub position: i64,
    pub dim: usize,
    pub kernel_dim: usize,
    pub image_dim: usize,
    /// `dim ker − dim im`.
    pub defect: usize,
    pub exact: bool,
}

impl ExactnessAt {
    fn new(position: i64, dim: usize, kernel_dim: usize, image_dim: usize) -> Self {
        let defect = kernel_dim.saturating_sub(image_dim);
        ExactnessAt {
            position,
            dim,
            kernel_dim,
            image_dim,
            defect,
            exact: kernel_dim == image_dim,
        }
    }
}

/// A complex of modules `M_hi → … → M_lo`; `maps[k]` goes from position
/// `lo+k+1` to `lo+k`.
#[derive(Clone, Debug)]
pub struct ModuleComplex {
    pub lo: i64,
    pub modules: Vec<Module>,
    pub maps: Vec<Matrix>,
}

impl ModuleComplex {
    /// Validated constructor: maps must be Λ-linear and compose to zero.
    pub fn new(lo: i64, modules: Vec<Module>, maps: Vec<Matrix>) -> Result<Self> {
        if modules.is_empty() {
            if maps.is_empty() {
                return Ok(ModuleComplex { lo, modules, maps });
            }
            return Err(Error::Contract("maps given without modules".to_string()));
        }
        if maps.len() + 1 != modules.len() {
            return Err(Error::Contract(
                "a complex needs one map between adjacent terms".to_string(),
            ));
        }
        for (k, m) in maps.iter().enumerate() {
            let pos = lo + k as i64;
            ModuleMap::new(&modules[k + 1], &modules[k], m.clone())
                .map_err(|e| Error::InvalidModule(format!("map into position {pos}: {e}")))?;
        }
        for k in 1..maps.len() {
            if !maps[k - 1].mul(&maps[k]).is_zero() {
                return Err(Error::Invariant(format!(
                    "composite of maps into position {} is nonzero",
                    lo + k as i64 - 1
                )));
            }
        }
        Ok(ModuleComplex { lo, modules, maps })
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.modules.len() as i64 - 1
    }

    pub fn module_at(&self, pos: i64) -> Option<&Module> {
        if pos < self.lo || pos > self.hi() {
            None
        } else {
            Some(&self.modules[(pos - self.lo) as usize])
        }
    }

    fn map_from(&self, pos: i64) -> Option<&Matrix> {
        if pos <= self.lo || pos > self.hi() {
            None
        } else {
            Some(&self.maps[(pos - self.lo - 1) as usize])
        }
    }

    pub fn positions(&self) -> Vec<i64> {
        (self.lo..=self.hi()).collect()
    }

    /// Exactness at each requested position, with implicit zero modules and
    /// zero maps beyond the ends.
    pub fn check_exactness(&self, positions: &[i64]) -> Vec<ExactnessAt> {
        positions
            .iter()
            .map(|&pos| {
                let dim = self.module_at(pos).map_or(0, |m| m.dim());
                let kernel_dim = dim - self.map_from(pos).map_or(0, |m| m.rank());
                let image_dim = self.map_from(pos + 1).map_or(0, |m| m.rank());
                ExactnessAt::new(pos, dim, kernel_dim, image_dim)
            })
            .collect()
    }

    pub fn is_exact_at(&self, positions: &[i64]) -> bool {
        self.check_exactness(positions).iter().all(|e| e.exact)
    }
}

/// Term-wise `Hom_Λ(−, Λ)`; position `q` becomes `−q`.
pub fn apply_dual(alg: &Algebra, c: &ModuleComplex) -> ModuleComplex {
    if c.modules.is_empty() {
        return ModuleComplex {
            lo: -c.lo,
            modules: Vec::new(),
            maps: Vec::new(),
        };
    }
    let lam = free_module(alg, 1);
    let spaces: Vec<HomSpace> = c.modules.iter().map(|m| HomSpace::new(m, &lam)).collect();
    let duals: Vec<Module> = c.modules.iter().map(|m| hom_module(m, &lam).0).collect();
    // Map Hom(M_k, Λ) → Hom(M_{k+1}, Λ), f ↦ f∘d, in HomSpace coordinates.
    let dual_maps: Vec<Matrix> = c
        .maps
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let (src, tgt) = (&spaces[k], &spaces[k + 1]);
            let cols: Vec<Vec<u32>> = (0..src.dim())
                .map(|i| {
                    let f = src.basis_map(i);
                    let composed = ModuleMap {
                        source: c.modules[k + 1].clone(),
                        target: lam.clone(),
                        mat: f.mat.mul(d),
                    };
                    tgt.space.coords(&tgt.tuple_of(&composed))
                })
                .collect();
            Matrix::from_columns(alg.p(), tgt.dim(), &cols)
        })
        .collect();
    let n = c.modules.len();
    let modules: Vec<Module> = (0..n).rev().map(|k| duals[k].clone()).collect();
    // In the dual, index j holds the dual of original index n-1-j; the map
    // from dual index j+1 to j is the dual of the original map from index
    // n-1-j to n-2-j.
    let maps: Vec<Matrix> = (0..n - 1).map(|j| dual_maps[n - 2 - j].clone()).collect();
    ModuleComplex {
        lo: -c.hi(),
        modules,
        maps,
    }
}

/// Cohomology dimensions of `Hom(F, Λ)` for a resolution `F` of `M`,
/// computed through [`apply_dual`] on module complexes.
pub fn ext_to_ring_via_dual_complex(m: &Module, bound: usize) -> Vec<usize> {
    let alg = m.algebra();
    let (f, _) = minimal_free_resolution(m, bound + 1);
    let mc = f.to_module_complex();
    let dual = apply_dual(alg, &mc);
    // Position −i of the dual holds Hom(F_i, Λ).
    let positions: Vec<i64> = (0..=bound as i64).map(|i| -i).collect();
    dual.check_exactness(&positions)
        .iter()
        .map(|e| e.defect)
        .collect()
}

/// Verifies that a resolution is exact at every interior position and that
/// `H_0 ≅ M` dimensionally; a self-test of the engine.
pub fn resolution_self_check(m: &Module, steps: usize) -> bool {
    let (f, _) = minimal_free_resolution(m, steps);
    let positions: Vec<i64> = (1..steps as i64).collect();
    let interior_ok = f.exactness(&positions).iter().all(|e| e.exact);
    let d = m.algebra().dim();
    let h0 = f.rank_at(0) * d - f.diff_from(1).map_or(0, |x| x.big(&f.alg).rank());
    interior_ok && h0 == m.dim()
}
