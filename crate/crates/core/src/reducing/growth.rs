//! Growth estimates for Betti numbers, Bass numbers and Ext lengths, and a
//! heuristic search for chains of reductions lowering complexity.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::complex::Resolution;
use crate::error::Result;
use crate::module::{syzygy_power, Module};

use super::ext1::{Enumeration, Ext1Space};
use super::search::SearchLimits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthKind {
    Betti,
    Bass,
    ExtLengths,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GrowthVerdict {
    /// Tail dominated by `α·i^{degree-1}`; degree 0 means eventually zero.
    Poly {
        degree: usize,
    },
    Exponential,
    Inconclusive,
}

impl GrowthVerdict {
    /// Degree as a comparable value; exponential growth ranks above every
    /// polynomial.
    pub fn rank(&self) -> Option<usize> {
        match self {
            GrowthVerdict::Poly { degree } => Some(*degree),
            GrowthVerdict::Exponential => Some(usize::MAX),
            GrowthVerdict::Inconclusive => None,
        }
    }
}

/// An estimate from a finite window; never a proof of the asymptotic class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthEstimate {
    pub kind: GrowthKind,
    pub values: Vec<usize>,
    pub window_start: usize,
    pub fitted_degree: Option<usize>,
    pub exponential_flag: bool,
    pub verdict: GrowthVerdict,
}

pub const MIN_TAIL: usize = 6;
pub const RATIO_EPSILON: f64 = 0.15;

/// Estimates the growth class of `values[window_start..]` (default: the last
/// half or the last `MIN_TAIL` values, whichever is longer, never index 0).
pub fn growth_estimate(
    values: &[usize],
    kind: GrowthKind,
    window_start: Option<usize>,
) -> GrowthEstimate {
    let len = values.len();
    let start = window_start.unwrap_or_else(|| len.saturating_sub(MIN_TAIL.max(len / 2)).max(1));
    let mut est = GrowthEstimate {
        kind,
        values: values.to_vec(),
        window_start: start,
        fitted_degree: None,
        exponential_flag: false,
        verdict: GrowthVerdict::Inconclusive,
    };
    let tail: Vec<(usize, usize)> = values.iter().copied().enumerate().skip(start).collect();
    if tail.len() < MIN_TAIL {
        return est;
    }
    if tail.iter().all(|&(_, v)| v == 0) {
        est.fitted_degree = Some(0);
        est.verdict = GrowthVerdict::Poly { degree: 0 };
        return est;
    }
    if tail.iter().any(|&(_, v)| v == 0) {
        return est;
    }
    est.exponential_flag = tail
        .windows(2)
        .all(|w| w[1].1 as f64 >= (1.0 + RATIO_EPSILON) * w[0].1 as f64);
    if est.exponential_flag {
        est.verdict = GrowthVerdict::Exponential;
        return est;
    }
    let pts: Vec<(f64, f64)> = tail
        .iter()
        .map(|&(i, v)| ((i.max(1) as f64).ln(), (v as f64).ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let degree = (1.0 + slope).round().max(1.0) as usize;
    est.fitted_degree = Some(degree);
    est.verdict = GrowthVerdict::Poly { degree };
    est
}

/// Complexity estimate from Betti numbers `β_0..β_bound`.
pub fn cx_estimate(m: &Module, bound: usize) -> GrowthEstimate {
    let betti = Resolution::of_module(m).betti(bound);
    growth_estimate(&betti, GrowthKind::Betti, None)
}

#[derive(Clone, Debug)]
pub struct ComplexityStep {
    pub n: usize,
    pub coords: Vec<u32>,
    pub middle: Module,
    pub estimate: GrowthEstimate,
}

/// Chain `0 → M_{i-1} → M_i → Ω^n M_{i-1} → 0` with strictly decreasing
/// complexity estimates, found heuristically.
#[derive(Clone, Debug)]
pub struct ComplexityChain {
    pub start: GrowthEstimate,
    pub steps: Vec<ComplexityStep>,
    /// The last estimate in the chain is `poly(0)`.
    pub reached_zero: bool,
}

impl ComplexityChain {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "heuristic": true,
            "start": self.start.verdict,
            "reached_zero": self.reached_zero,
            "length": self.steps.len(),
            "steps": self.steps.iter().map(|s| json!({
                "n": s.n,
                "coords": s.coords,
                "middle_dim": s.middle.dim(),
                "estimate": s.estimate.verdict,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Greedy search: at each step takes the first extension (in the fixed
/// candidate order) whose middle term has a strictly smaller estimate.
pub fn reducible_complexity_search(
    m: &Module,
    limits: &SearchLimits,
    bound: usize,
) -> Result<ComplexityChain> {
    limits.validate()?;
    let start = cx_estimate(m, bound);
    let mut chain = ComplexityChain {
        reached_zero: start.verdict == GrowthVerdict::Poly { degree: 0 },
        start: start.clone(),
        steps: Vec::new(),
    };
    let mut cur = m.clone();
    let mut cur_rank = start.verdict.rank();
    for depth in 0..limits.max_steps {
        if chain.reached_zero {
            break;
        }
        let Some(r) = cur_rank else { break };
        let mut found = None;
        'shapes: for n in 0..=limits.n_max {
            let space = Ext1Space::new(&syzygy_power(&cur, n), &cur);
            let en = Enumeration::new(
                space.dim(),
                m.p(),
                limits.cap,
                limits.samples,
                limits.seed ^ depth as u64,
                true,
            );
            for i in 0..en.slots() {
                let Some(coords) = en.get(i) else { continue };
                let ext = space.extension(&coords);
                let est = cx_estimate(&ext.middle, bound);
                if est.verdict.rank().is_some_and(|x| x < r) {
                    found = Some(ComplexityStep {
                        n,
                        coords,
                        middle: ext.middle,
                        estimate: est,
                    });
                    break 'shapes;
                }
            }
        }
        let Some(step) = found else { break };
        cur = step.middle.clone();
        cur_rank = step.estimate.verdict.rank();
        chain.reached_zero = step.estimate.verdict == GrowthVerdict::Poly { degree: 0 };
        chain.steps.push(step);
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::ring;
    use crate::module::{free_module, residue_field};

    #[test]
    fn classic_growth_shapes() {
        let pow2: Vec<usize> = (0..12).map(|i| 1 << i).collect();
        assert_eq!(
            growth_estimate(&pow2, GrowthKind::Betti, None).verdict,
            GrowthVerdict::Exponential
        );
        let lin: Vec<usize> = (0..12).map(|i| i + 1).collect();
        assert_eq!(
            growth_estimate(&lin, GrowthKind::Betti, None).verdict,
            GrowthVerdict::Poly { degree: 2 }
        );
        let ones = vec![1; 12];
        assert_eq!(
            growth_estimate(&ones, GrowthKind::Betti, None).verdict,
            GrowthVerdict::Poly { degree: 1 }
        );
        let mut free = vec![0; 12];
        free[0] = 1;
        assert_eq!(
            growth_estimate(&free, GrowthKind::Betti, None).verdict,
            GrowthVerdict::Poly { degree: 0 }
        );
        assert_eq!(
            growth_estimate(&[1, 2, 4], GrowthKind::Betti, None).verdict,
            GrowthVerdict::Inconclusive
        );
        let quad: Vec<usize> = (0..30).map(|i| i * i + 1).collect();
        assert_eq!(
            growth_estimate(&quad, GrowthKind::Betti, None).verdict,
            GrowthVerdict::Poly { degree: 3 }
        );
    }

    #[test]
    fn complexity_chains() {
        let limits = SearchLimits {
            max_steps: 3,
            ..Default::default()
        };
        let r2 = ring("R2q5", None).unwrap();
        let c = reducible_complexity_search(&residue_field(&r2), &limits, 12).unwrap();
        assert!(c.reached_zero);
        assert_eq!(c.steps.len(), 1);
        let c = reducible_complexity_search(&free_module(&r2, 1), &limits, 12).unwrap();
        assert!(c.reached_zero && c.steps.is_empty());
        let r3 = ring("R3q5", None).unwrap();
        let c = reducible_complexity_search(&residue_field(&r3), &limits, 12).unwrap();
        assert_eq!(c.start.verdict, GrowthVerdict::Poly { degree: 2 });
        assert!(c.reached_zero);
        assert_eq!(c.steps.len(), 2);
    }
}
