//! (m,n)-torsionfree classification, the pushforward of a torsionfree module
//! into free modules, the projective splice characterizing `𝒢_mn`, its
//! verifier, and G-dimension reports.
//!
//! `𝒢_mn` consists of the modules `M` with `Ext^i(M,Λ) = 0` for `1 ≤ i ≤ m`
//! and `Ext^j(tr M,Λ) = 0` for `1 ≤ j ≤ n`. Infinite `m`, `n` are replaced by
//! a finite certification bound.

use serde::{Deserialize, Serialize};

use crate::complex::{
    apply_dual, ext_from_resolution, ext_to_ring, ExactnessAt, FreeComplex, ModuleComplex,
    Resolution,
};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::module::{
    cokernel_of_lambda_matrix, free_module, transpose, LambdaMatrix, Module, ModuleMap,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionfreeVerdict {
    pub bound: usize,
    /// Largest `m ≤ bound` with `M ∈ 𝒢_{m0}`.
    pub m_max: usize,
    /// Largest `n ≤ bound` with `M ∈ 𝒢_{0n}`.
    pub n_max: usize,
    /// `dim Ext^i(M, Λ)` for `0 ≤ i ≤ bound`.
    pub ext_module: Vec<usize>,
    /// `dim Ext^i(tr M, Λ)` for `0 ≤ i ≤ bound`.
    pub ext_transpose: Vec<usize>,
    pub transpose_dim: usize,
    pub totally_reflexive_up_to_bound: bool,
}

impl TorsionfreeVerdict {
    pub fn contains(&self, m: usize, n: usize) -> bool {
        m <= self.m_max && n <= self.n_max
    }

    /// Why `M ∉ 𝒢_mn`, naming the first nonvanishing Ext.
    pub fn failure(&self, m: usize, n: usize) -> Option<String> {
        if m > self.bound || n > self.bound {
            return Some(format!(
                "requested ({m},{n}) exceeds the certification bound {}",
                self.bound
            ));
        }
        if m > self.m_max {
            let i = self.m_max + 1;
            return Some(format!(
                "Ext^{i}(M,Λ) ≠ 0 (dimension {})",
                self.ext_module[i]
            ));
        }
        if n > self.n_max {
            let j = self.n_max + 1;
            return Some(format!(
                "Ext^{j}(tr M,Λ) ≠ 0 (dimension {})",
                self.ext_transpose[j]
            ));
        }
        None
    }
}

pub fn torsionfree_classify(m: &Module, bound: usize) -> Result<TorsionfreeVerdict> {
    if bound == 0 {
        return Err(Error::Contract(
            "classification bound must be at least 1".to_string(),
        ));
    }
    let e = ext_to_ring(m, bound);
    let t = transpose(m);
    let et = ext_to_ring(&t, bound);
    let m_max = e.vanishing_prefix();
    let n_max = et.vanishing_prefix();
    Ok(TorsionfreeVerdict {
        bound,
        m_max,
        n_max,
        totally_reflexive_up_to_bound: m_max == bound && n_max == bound,
        ext_module: e.dims,
        ext_transpose: et.dims,
        transpose_dim: t.dim(),
    })
}

/// Resolution of `tr M` whose first map is the transpose of the minimal
/// presentation of `M`; its dual continues the presentation of `M` to the
/// right.
fn transpose_resolution(m: &Module, steps: usize) -> Resolution {
    let rel = &m.presentation().relations;
    let mut g = Resolution::from_presentation(m.algebra(), &rel.transpose());
    g.extend_to(steps);
    g
}

/// `0 → M → P_{-1} → … → P_{-n}` built by dualizing a resolution of `tr M`.
#[derive(Clone, Debug)]
pub struct Pushforward {
    pub n: usize,
    /// Positions `0` (the module) down to `-n`.
    pub sequence: ModuleComplex,
    /// Exactness at positions `0, -1, …, -(n-1)`.
    pub exactness: Vec<ExactnessAt>,
    /// `dim Ext^j(tr M, Λ)` for `1 ≤ j ≤ n`.
    pub transpose_ext: Vec<usize>,
    /// Whether `P_{-1}* → M*` is onto.
    pub dual_surjective: bool,
}

impl Pushforward {
    /// Number of leading positions at which the sequence is exact.
    pub fn exact_prefix(&self) -> usize {
        self.exactness.iter().take_while(|e| e.exact).count()
    }
}

pub fn pushforward(m: &Module, n: usize) -> Result<Pushforward> {
    if n == 0 {
        return Err(Error::Contract(
            "pushforward length must be at least 1".to_string(),
        ));
    }
    let alg = m.algebra();
    let mut g = transpose_resolution(m, n + 1);
    let ranks = g.betti(n + 1);
    // P_{-j} = G_{j+1}^*, maps e_{j+2}^T.
    let mut modules: Vec<Module> = (1..=n)
        .rev()
        .map(|j| free_module(alg, ranks[j + 1]))
        .collect();
    modules.push(m.clone());
    let mut maps: Vec<Matrix> = (1..n)
        .rev()
        .map(|j| g.diff(j + 2).transpose().big(alg))
        .collect();
    let first = g.diff(2).transpose().big(alg);
    maps.push(m.presentation().descend(&first));
    let sequence = ModuleComplex::new(-(n as i64), modules, maps)?;
    let positions: Vec<i64> = (0..n as i64).map(|j| -j).collect();
    let exactness = sequence.check_exactness(&positions);
    let transpose_ext = ext_from_resolution(&mut g, &free_module(alg, 1), n).dims[1..].to_vec();
    let dual = apply_dual(alg, &sequence);
    let dual_surjective = dual.check_exactness(&[0])[0].exact;
    Ok(Pushforward {
        n,
        sequence,
        exactness,
        transpose_ext,
        dual_surjective,
    })
}

/// A complex `P_{m+1} → … → P_0 → P_{-1} → … → P_{-n}` of free modules with
/// the data certifying that `im(P_0 → P_{-1}) ≅ M`.
#[derive(Clone, Debug)]
pub struct FreeSplice {
    pub m: usize,
    pub n: usize,
    pub complex: FreeComplex,
    pub exactness: Vec<ExactnessAt>,
    pub dual_exactness: Vec<ExactnessAt>,
    /// `im ∂` (for `n = 0`, the cokernel of `P_1 → P_0`).
    pub image: Module,
    /// Isomorphism `M → im ∂`.
    pub witness: ModuleMap,
}

/// Splices the minimal resolution of `M` (through `P_{m+1}`) with the dual
/// of a resolution of `tr M` (through `P_{-n}`), without checking anything.
pub fn splice(m: &Module, mm: usize, n: usize) -> FreeComplex {
    let alg = m.algebra();
    let mut f = Resolution::of_module(m);
    let fr = f.betti(mm + 1);
    let mut g = transpose_resolution(m, n + 1);
    let gr = g.betti(n + 1);
    // Ranks from position -n up to m+1.
    let mut ranks: Vec<usize> = (1..=n).rev().map(|j| gr[j + 1]).collect();
    ranks.extend(fr.iter().copied());
    let mut diffs: Vec<LambdaMatrix> = (0..n).rev().map(|j| g.diff(j + 2).transpose()).collect();
    for i in 1..=mm + 1 {
        diffs.push(f.diff(i).clone());
    }
    FreeComplex {
        alg: alg.clone(),
        lo: -(n as i64),
        ranks,
        diffs,
    }
}

fn interior(lo: i64, hi: i64) -> Vec<i64> {
    (lo + 1..hi).collect()
}

pub fn build_free_splice(m: &Module, mm: usize, n: usize) -> Result<FreeSplice> {
    let verdict = torsionfree_classify(m, mm.max(n).max(1))?;
    if let Some(why) = verdict.failure(mm, n) {
        return Err(Error::Precondition(format!(
            "module is not ({mm},{n})-torsionfree: {why}"
        )));
    }
    let alg = m.algebra();
    let complex = splice(m, mm, n);
    let exactness = complex.exactness(&interior(complex.lo, complex.hi()));
    let dual = complex.dual();
    let dual_exactness = dual.exactness(&interior(dual.lo, dual.hi()));
    if let Some(bad) = exactness.iter().chain(&dual_exactness).find(|e| !e.exact) {
        return Err(Error::Invariant(format!(
            "spliced sequence of a certified module is not exact at position {} (defect {})",
            bad.position, bad.defect
        )));
    }
    let pres = m.presentation();
    let (image, mat) = if n == 0 {
        let (q, proj) = cokernel_of_lambda_matrix(alg, &pres.relations);
        let w = pres.descend(&proj.mat);
        (q, w)
    } else {
        let d = complex
            .diff_from(0)
            .expect("map out of position 0")
            .big(alg);
        let span = Subspace::span(&d);
        let target = free_module(alg, complex.rank_at(-1));
        let img = target.restrict(&span);
        let w = span.coords_matrix(&pres.descend(&d));
        (img, w)
    };
    let witness = ModuleMap::unchecked(m, &image, mat);
    if !(witness.is_iso() && witness.is_linear()) {
        return Err(Error::Invariant(
            "canonical map from the module to im ∂ is not an isomorphism".to_string(),
        ));
    }
    Ok(FreeSplice {
        m: mm,
        n,
        complex,
        exactness,
        dual_exactness,
        image,
        witness,
    })
}

/// Which term conditions a sequence must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermCondition {
    /// Every term lies in `𝒢_mn`.
    AllInGmn,
    /// Terms at positions `≥ 0` lie in `𝒢_{m0}`, those at negative positions
    /// in `𝒢_{0n}`.
    Split,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermMembership {
    pub position: i64,
    pub dim: usize,
    pub m_max: usize,
    pub n_max: usize,
    pub required_m: usize,
    pub required_n: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpliceVerdict {
    pub m: usize,
    pub n: usize,
    pub condition: TermCondition,
    pub exactness: Vec<ExactnessAt>,
    pub dual_exactness: Vec<ExactnessAt>,
    pub memberships: Vec<TermMembership>,
    /// Exactness, dual exactness and term conditions all hold.
    pub passed: bool,
    pub image_dim: usize,
    /// Direct classification of `im ∂`.
    pub image_verdict: TorsionfreeVerdict,
    pub image_in_gmn: bool,
    /// A passing sequence must have `im ∂ ∈ 𝒢_mn`.
    pub agrees: bool,
}

/// `im ∂` of a module complex: the image of the map out of position 0, or
/// the cokernel of the map into position 0 when nothing sits below it.
pub fn image_of_boundary(c: &ModuleComplex) -> Result<Module> {
    let m0 = c
        .module_at(0)
        .ok_or_else(|| Error::Contract("sequence has no term at position 0".to_string()))?;
    if c.lo < 0 {
        let target = c.module_at(-1).expect("term at -1");
        let d = &c.maps[(-1 - c.lo) as usize];
        let span = target.module_span(d);
        Ok(target.restrict(&span))
    } else if c.hi() >= 1 {
        let d = &c.maps[(0 - c.lo) as usize];
        Ok(m0.quotient(d).0)
    } else {
        Ok(m0.clone())
    }
}

pub fn verify_free_splice(
    c: &ModuleComplex,
    mm: usize,
    n: usize,
    condition: TermCondition,
) -> Result<SpliceVerdict> {
    if c.lo != -(n as i64) || c.hi() != mm as i64 + 1 {
        return Err(Error::Contract(format!(
            "sequence must span positions {} down to -{n}, found {} down to {}",
            mm + 1,
            c.hi(),
            c.lo
        )));
    }
    let alg = c.modules[0].algebra().clone();
    let exactness = c.check_exactness(&interior(c.lo, c.hi()));
    let dual = apply_dual(&alg, c);
    let dual_exactness = dual.check_exactness(&interior(dual.lo, dual.hi()));
    let bound = mm.max(n).max(1);
    let mut memberships = Vec::new();
    for pos in c.positions() {
        let g = c.module_at(pos).expect("position in range");
        let v = torsionfree_classify(g, bound)?;
        let (rm, rn) = match condition {
            TermCondition::AllInGmn => (mm, n),
            TermCondition::Split if pos >= 0 => (mm, 0),
            TermCondition::Split => (0, n),
        };
        memberships.push(TermMembership {
            position: pos,
            dim: g.dim(),
            m_max: v.m_max,
            n_max: v.n_max,
            required_m: rm,
            required_n: rn,
            ok: v.contains(rm, rn),
        });
    }
    let passed = exactness.iter().all(|e| e.exact)
        && dual_exactness.iter().all(|e| e.exact)
        && memberships.iter().all(|t| t.ok);
    let image = image_of_boundary(c)?;
    let image_verdict = torsionfree_classify(&image, bound)?;
    let image_in_gmn = image_verdict.contains(mm, n);
    Ok(SpliceVerdict {
        m: mm,
        n,
        condition,
        exactness,
        dual_exactness,
        memberships,
        passed,
        image_dim: image.dim(),
        agrees: !passed || image_in_gmn,
        image_verdict,
        image_in_gmn,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GdimVerdict {
    /// Totally reflexive as far as the bound certifies.
    Zero {
        up_to: usize,
    },
    /// `Ext^i(M,Λ)` vanishes beyond `sup` but the module is not totally
    /// reflexive; over an artinian ring finite G-dimension forces 0, so this
    /// is never emitted for the supported rings.
    Conditional {
        sup: usize,
    },
    InfiniteUpTo {
        bound: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GdimReport {
    pub bound: usize,
    pub ext: Vec<usize>,
    /// `sup{0 ≤ i ≤ B : Ext^i(M,Λ) ≠ 0}`.
    pub sup_with_zero: Option<usize>,
    /// `sup{1 ≤ i ≤ B : Ext^i(M,Λ) ≠ 0}`.
    pub sup_positive: Option<usize>,
    /// Some verified vanishing window follows the supremum.
    pub tail_zero: bool,
    pub verdict: GdimVerdict,
    /// The sup formula with `sup ∅ = 0` for nonzero `M`.
    pub formula_value: usize,
    /// For a zero verdict, the formula must give 0.
    pub formula_holds: bool,
}

pub fn gdim_report(m: &Module, bound: usize) -> Result<GdimReport> {
    if bound < 2 {
        return Err(Error::Contract(
            "G-dimension bound must be at least 2".to_string(),
        ));
    }
    let v = torsionfree_classify(m, bound)?;
    let ext = v.ext_module.clone();
    let sup_with_zero = ext.iter().rposition(|&d| d != 0);
    let sup_positive = sup_with_zero.filter(|&s| s > 0);
    let tail_zero = sup_with_zero.is_none_or(|s| s < bound);
    let verdict = if v.totally_reflexive_up_to_bound {
        GdimVerdict::Zero { up_to: bound }
    } else {
        GdimVerdict::InfiniteUpTo { bound }
    };
    let formula_value = sup_positive.unwrap_or(0);
    let formula_holds = !matches!(verdict, GdimVerdict::Zero { .. }) || formula_value == 0;
    Ok(GdimReport {
        bound,
        ext,
        sup_with_zero,
        sup_positive,
        tail_zero,
        verdict,
        formula_value,
        formula_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{module, ring};
    use crate::module::{direct_sum, residue_field};

    #[test]
    fn classification_examples() {
        let r2 = ring("R2q5", None).unwrap();
        let v = torsionfree_classify(&free_module(&r2, 1), 4).unwrap();
        assert_eq!((v.m_max, v.n_max), (4, 4));
        let v = torsionfree_classify(&residue_field(&r2), 6).unwrap();
        assert_eq!((v.m_max, v.n_max), (6, 6));
        assert!(v.totally_reflexive_up_to_bound);
        let r1 = ring("R1q5", None).unwrap();
        let v = torsionfree_classify(&residue_field(&r1), 4).unwrap();
        assert_eq!(v.m_max, 0);
        assert!(v.failure(1, 0).unwrap().contains("Ext^1(M,Λ)"));
    }

    #[test]
    fn pushforward_examples() {
        let r2 = ring("R2q5", None).unwrap();
        let pf = pushforward(&residue_field(&r2), 2).unwrap();
        assert_eq!(pf.exact_prefix(), 2);
        assert!(pf.dual_surjective);
        let lam = free_module(&r2, 1);
        let pf = pushforward(&lam, 2).unwrap();
        assert_eq!(
            pf.sequence
                .modules
                .iter()
                .map(|m| m.dim())
                .collect::<Vec<_>>(),
            vec![0, 2, 2]
        );
        assert!(pf.exactness.iter().all(|e| e.exact));
        // k over R1 embeds in the socle, so it is torsionless but not
        // reflexive: exact at 0, not at -1.
        let r1 = ring("R1q5", None).unwrap();
        let pf = pushforward(&residue_field(&r1), 2).unwrap();
        assert!(pf.exactness[0].exact);
        assert!(!pf.exactness[1].exact);
        assert_eq!(pf.transpose_ext[0], 0);
        assert!(pf.transpose_ext[1] > 0);
    }

    #[test]
    fn pushforward_exactness_tracks_transpose_ext() {
        let r1 = ring("R1q5", None).unwrap();
        for spec in ["k", "cyclic:x", "tr:k", "syzygy:1:tr:k"] {
            let m = module(&r1, spec).unwrap();
            let pf = pushforward(&m, 3).unwrap();
            for j in 0..3 {
                assert_eq!(
                    pf.exactness[j].exact,
                    pf.transpose_ext[j] == 0,
                    "{spec} at {j}"
                );
            }
        }
    }

    #[test]
    fn splice_examples() {
        let r2 = ring("R2q5", None).unwrap();
        let k = residue_field(&r2);
        let s = build_free_splice(&k, 1, 1).unwrap();
        assert_eq!(s.complex.ranks, vec![1, 1, 1, 1]);
        let x = r2.basis_elem(1);
        assert!(s
            .complex
            .diffs
            .iter()
            .all(|d| d.entry(0, 0) == x.as_slice()));
        let lam = free_module(&r2, 1);
        // A free module splices as Λ → Λ through the identity.
        let s = build_free_splice(&lam, 2, 2).unwrap();
        assert_eq!(s.complex.ranks, vec![0, 1, 1, 0, 0, 0]);
        let sum = direct_sum(&r2, &[k.clone(), lam]);
        let s = build_free_splice(&sum, 1, 1).unwrap();
        assert_eq!(s.complex.ranks, vec![2, 2, 1, 1]);
        let r1 = ring("R1q5", None).unwrap();
        match build_free_splice(&residue_field(&r1), 1, 0) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("Ext^1(M,Λ)")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn splice_verify_roundtrip() {
        let r2 = ring("R2q5", None).unwrap();
        let s = build_free_splice(&residue_field(&r2), 1, 1).unwrap();
        let c = s.complex.to_module_complex();
        for cond in [TermCondition::AllInGmn, TermCondition::Split] {
            let v = verify_free_splice(&c, 1, 1, cond).unwrap();
            assert!(v.passed && v.image_in_gmn && v.agrees);
        }
        assert!(verify_free_splice(&c, 2, 1, TermCondition::Split).is_err());
    }

    #[test]
    fn zero_maps_fail_verification() {
        let r2 = ring("R2q5", None).unwrap();
        let k = residue_field(&r2);
        let lam = free_module(&r2, 1);
        // positions 1, 0, -1: Λ → k → Λ with zero maps.
        let c = ModuleComplex::new(
            -1,
            vec![lam.clone(), k, lam],
            vec![Matrix::zeros(5, 2, 1), Matrix::zeros(5, 1, 2)],
        )
        .unwrap();
        let v = verify_free_splice(&c, 0, 1, TermCondition::AllInGmn).unwrap();
        assert!(!v.passed);
    }

    #[test]
    fn exact_sequence_with_inexact_dual_is_rejected() {
        // Over R1 the resolution of k is exact but its dual is not, since
        // Ext^1(k,Λ) ≠ 0.
        let r1 = ring("R1q5", None).unwrap();
        let c = splice(&residue_field(&r1), 1, 0).to_module_complex();
        let v = verify_free_splice(&c, 1, 0, TermCondition::AllInGmn).unwrap();
        assert!(v.exactness.iter().all(|e| e.exact));
        assert!(v.dual_exactness.iter().any(|e| !e.exact));
        assert!(!v.passed);
        assert!(!v.image_in_gmn);
        assert!(v.agrees);
    }

    #[test]
    fn gdim_examples() {
        let r2 = ring("R2q5", None).unwrap();
        let g = gdim_report(&residue_field(&r2), 6).unwrap();
        assert_eq!(g.verdict, GdimVerdict::Zero { up_to: 6 });
        assert_eq!(g.sup_positive, None);
        assert!(g.formula_holds);
        let g = gdim_report(&free_module(&r2, 1), 4).unwrap();
        assert!(matches!(g.verdict, GdimVerdict::Zero { .. }));
        let r1 = ring("R1q5", None).unwrap();
        let g = gdim_report(&residue_field(&r1), 6).unwrap();
        assert_eq!(g.verdict, GdimVerdict::InfiniteUpTo { bound: 6 });
        assert!(g.ext[1..].iter().all(|&d| d > 0));
        assert!(gdim_report(&residue_field(&r1), 1).is_err());
    }
}
