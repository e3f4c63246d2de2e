//! Numerical cross-checks: complexity against upper reducing projective
//! dimension, Gorenstein complexity against upper reducing G-dimension, and
//! the Betti inequality behind the first.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::complex::{bass_numbers, ext_to_ring, Resolution};
use crate::error::Result;
use crate::module::{free_module, Module};

use super::growth::{cx_estimate, growth_estimate, GrowthEstimate, GrowthKind, GrowthVerdict};
use super::search::{search_reducing, Mode, SearchLimits, SearchOutcome, Target};

/// `b·β_{i+n}(M) ≤ β_i(N) + a·β_{i-1}(M)` for a step
/// `0 → M^{⊕a} → N → Ω^n M^{⊕b} → 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub step: usize,
    pub n: usize,
    pub checked_up_to: usize,
    pub violations: Vec<usize>,
    pub holds: bool,
}

pub fn betti_inequality(
    step: usize,
    m: &Module,
    middle: &Module,
    (n, a, b): (usize, usize, usize),
    imax: usize,
) -> InequalityCheck {
    let bm = Resolution::of_module(m).betti(imax + n);
    let bn = Resolution::of_module(middle).betti(imax);
    let violations: Vec<usize> = (0..=imax)
        .filter(|&i| {
            let prev = if i == 0 { 0 } else { a * bm[i - 1] };
            b * bm[i + n] > bn[i] + prev
        })
        .collect();
    InequalityCheck {
        step,
        n,
        checked_up_to: imax,
        holds: violations.is_empty(),
        violations,
    }
}

fn at_most(est: &GrowthEstimate, s: usize) -> bool {
    est.verdict.rank().is_none_or(|r| r <= s)
}

#[derive(Clone, Debug)]
pub struct ComplexityReport {
    pub cx: GrowthEstimate,
    pub search: SearchOutcome,
    /// A witness of length `s` comes with a complexity estimate `≤ s`.
    pub consistent: bool,
    pub inequalities: Vec<InequalityCheck>,
}

impl ComplexityReport {
    pub fn passed(&self) -> bool {
        self.consistent && self.inequalities.iter().all(|c| c.holds)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "cx_estimate": self.cx,
            "ured_pd": self.search.to_json(),
            "consistent": self.consistent,
            "inequalities": self.inequalities,
            "passed": self.passed(),
        })
    }
}

/// Complexity estimate from `β_0..β_bound` against an upper reducing
/// projective dimension search, with the Betti inequality checked for
/// `i ≤ imax` on every step of a found witness.
pub fn complexity_check(
    m: &Module,
    limits: &SearchLimits,
    bound: usize,
    imax: usize,
) -> Result<ComplexityReport> {
    let cx = cx_estimate(m, bound);
    let search = search_reducing(m, Mode::Ured, Target::Pd, limits)?;
    let mut inequalities = Vec::new();
    let mut consistent = true;
    if let Some(w) = &search.witness {
        consistent = at_most(&cx, w.length());
        let mut prev = w.input.clone();
        for (i, s) in w.steps.iter().enumerate() {
            inequalities.push(betti_inequality(
                i + 1,
                &prev,
                &s.middle,
                (s.n, s.a, s.b),
                imax,
            ));
            prev = s.middle.clone();
        }
    }
    Ok(ComplexityReport {
        cx,
        search,
        consistent,
        inequalities,
    })
}

#[derive(Clone, Debug)]
pub struct GorensteinSideReport {
    pub gcx: GrowthEstimate,
    pub search: SearchOutcome,
    pub consistent: bool,
    /// Growth of the Bass numbers of the ring.
    pub px: GrowthEstimate,
    /// For the residue field: a found upper reduction to finite G-dimension
    /// goes with a polynomial plexity estimate.
    pub plexity_implication: Option<bool>,
}

impl GorensteinSideReport {
    pub fn passed(&self) -> bool {
        self.consistent && self.plexity_implication != Some(false)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "gcx_estimate": self.gcx,
            "ured_gdim": self.search.to_json(),
            "consistent": self.consistent,
            "px_estimate": self.px,
            "plexity_implication": self.plexity_implication,
            "passed": self.passed(),
        })
    }
}

pub fn gorenstein_side_check(
    m: &Module,
    limits: &SearchLimits,
    bound: usize,
) -> Result<GorensteinSideReport> {
    let alg = m.algebra();
    let gcx = growth_estimate(&ext_to_ring(m, bound).dims, GrowthKind::ExtLengths, None);
    let search = search_reducing(m, Mode::Ured, Target::Gdim, limits)?;
    let consistent = search
        .witness
        .as_ref()
        .is_none_or(|w| at_most(&gcx, w.length()));
    let px = growth_estimate(
        &bass_numbers(&free_module(alg, 1), bound),
        GrowthKind::Bass,
        None,
    );
    let is_residue_field = m.dim() == 1 && m.actions().iter().all(|a| a.is_zero());
    let plexity_implication = is_residue_field
        .then(|| search.witness.is_none() || matches!(px.verdict, GrowthVerdict::Poly { .. }));
    Ok(GorensteinSideReport {
        gcx,
        search,
        consistent,
        px,
        plexity_implication,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::ring;
    use crate::module::residue_field;

    #[test]
    fn complexity_instances() {
        let limits = SearchLimits {
            max_steps: 2,
            n_max: 1,
            ..Default::default()
        };
        let r2 = ring("R2q5", None).unwrap();
        let rep = complexity_check(&residue_field(&r2), &limits, 12, 10).unwrap();
        assert_eq!(rep.cx.verdict, GrowthVerdict::Poly { degree: 1 });
        assert_eq!(rep.search.witness.as_ref().unwrap().length(), 1);
        assert!(rep.passed());
        let rep = complexity_check(&free_module(&r2, 1), &limits, 12, 10).unwrap();
        assert_eq!(rep.cx.verdict, GrowthVerdict::Poly { degree: 0 });
        assert_eq!(rep.search.witness.as_ref().unwrap().length(), 0);
    }

    #[test]
    fn gorenstein_side_instances() {
        let limits = SearchLimits::default();
        let r2 = ring("R2q5", None).unwrap();
        let rep = gorenstein_side_check(&residue_field(&r2), &limits, 8).unwrap();
        assert_eq!(rep.gcx.verdict, GrowthVerdict::Poly { degree: 0 });
        assert_eq!(rep.search.witness.as_ref().unwrap().length(), 0);
        assert_eq!(rep.px.verdict, GrowthVerdict::Poly { degree: 0 });
        assert_eq!(rep.plexity_implication, Some(true));
        let r1 = ring("R1q2", None).unwrap();
        let limits = SearchLimits {
            max_steps: 1,
            n_max: 2,
            ..Default::default()
        };
        let rep = gorenstein_side_check(&residue_field(&r1), &limits, 8).unwrap();
        assert_eq!(rep.gcx.verdict, GrowthVerdict::Exponential);
        assert!(rep.search.witness.is_none());
        assert!(rep.search.exhaustive);
        assert_eq!(rep.px.verdict, GrowthVerdict::Exponential);
        assert!(rep.passed());
    }
}
