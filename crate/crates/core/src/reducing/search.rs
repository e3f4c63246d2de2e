//! Breadth-first search for reducing sequences
//! `0 → M_{i-1}^{⊕a} → M_i → Ω^n M_{i-1}^{⊕b} → 0` ending in a module of
//! finite projective or G-dimension.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::complex::ext_to_ring;
use crate::error::{Error, Result};
use crate::io::{to_i64_rows, ModuleSpec};
use crate::linalg::Matrix;
use crate::module::{direct_sum, is_isomorphic_with, syzygy_power, IsoLimits, IsoVerdict, Module};
use crate::torsionfree::torsionfree_classify;

use super::ext1::{Enumeration, Ext1Space};

/// `red` ranges over all `a, b`; `ured` fixes `a = b = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Red,
    Ured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Pd,
    Gdim,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "red" => Ok(Mode::Red),
            "ured" => Ok(Mode::Ured),
            _ => Err(Error::Contract(format!(
                "unknown mode `{s}` (expected red or ured)"
            ))),
        }
    }
}

impl FromStr for Target {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pd" => Ok(Target::Pd),
            "gdim" => Ok(Target::Gdim),
            _ => Err(Error::Contract(format!(
                "unknown target `{s}` (expected pd or gdim)"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Red => "red",
            Mode::Ured => "ured",
        })
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Pd => "pd",
            Target::Gdim => "gdim",
        })
    }
}

/// Search policy. None of these bounds comes from the mathematics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchLimits {
    pub max_steps: usize,
    pub n_max: usize,
    pub ab_max: usize,
    /// Enumerate Ext¹ exhaustively when it has at most this many elements.
    pub cap: u64,
    /// Random elements drawn when Ext¹ is too large.
    pub samples: usize,
    pub seed: u64,
    /// Certification bound for total reflexivity.
    pub gdim_bound: usize,
    /// Non-isomorphic intermediate modules kept per level.
    pub frontier_cap: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_steps: 2,
            n_max: 1,
            ab_max: 2,
            cap: 200_000,
            samples: 256,
            seed: 0,
            gdim_bound: 4,
            frontier_cap: 256,
        }
    }
}

impl SearchLimits {
    pub fn validate(&self) -> Result<()> {
        if self.max_steps == 0
            || self.ab_max == 0
            || self.cap == 0
            || self.gdim_bound == 0
            || self.frontier_cap == 0
        {
            return Err(Error::Contract(
                "search limits must be positive".to_string(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct WitnessStep {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub ext_dim: usize,
    /// Coordinates of the extension class.
    pub coords: Vec<u32>,
    /// Representative `Ω(Ω^n M^{⊕b}) → M^{⊕a}` of the class.
    pub representative: Matrix,
    pub middle: Module,
}

#[derive(Clone, Debug)]
pub struct ReductionWitness {
    pub mode: Mode,
    pub target: Target,
    pub input: Module,
    pub steps: Vec<WitnessStep>,
    pub gdim_bound: usize,
}

impl ReductionWitness {
    /// Number of extension steps.
    pub fn length(&self) -> usize {
        self.steps.len()
    }

    pub fn terminal(&self) -> &Module {
        self.steps.last().map_or(&self.input, |s| &s.middle)
    }

    pub fn terminal_verdict(&self) -> String {
        match self.target {
            Target::Pd => "free (finite projective dimension)".to_string(),
            Target::Gdim => format!("totally reflexive up to {}", self.gdim_bound),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let steps: Vec<_> = self
            .steps
            .iter()
            .map(|s| {
                json!({
                    "n": s.n, "a": s.a, "b": s.b,
                    "ext_dim": s.ext_dim,
                    "coords": s.coords,
                    "representative": to_i64_rows(&s.representative),
                    "middle_dim": s.middle.dim(),
                    "middle": ModuleSpec::from_module(&s.middle),
                })
            })
            .collect();
        json!({
            "mode": self.mode,
            "target": self.target,
            "length": self.length(),
            "steps": steps,
            "terminal_dim": self.terminal().dim(),
            "terminal_verdict": self.terminal_verdict(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub witness: Option<ReductionWitness>,
    /// Every candidate up to the step limit was covered (no sampling, no
    /// frontier truncation).
    pub exhaustive: bool,
    pub candidates: u64,
    /// `(n, a, b)` choices skipped by the dimension filter.
    pub pruned: u64,
    pub max_steps: usize,
}

impl SearchOutcome {
    pub fn to_json(&self) -> serde_json::Value {
        match &self.witness {
            Some(w) => json!({
                "found": true,
                "witness": w.to_json(),
                "exhaustive": self.exhaustive,
                "candidates": self.candidates,
                "pruned": self.pruned,
            }),
            None => json!({
                "found": false,
                "lower": format!("> {} within limits", self.max_steps),
                "exhaustive": self.exhaustive,
                "candidates": self.candidates,
                "pruned": self.pruned,
            }),
        }
    }
}

pub fn is_free(m: &Module) -> bool {
    m.num_generators() * m.algebra().dim() == m.dim()
}

/// Finite projective dimension (free) or finite G-dimension (totally
/// reflexive up to `bound`); both are decidable this way over an artinian
/// local ring.
pub fn is_terminal(m: &Module, target: Target, bound: usize) -> bool {
    if is_free(m) {
        return true;
    }
    match target {
        Target::Pd => false,
        Target::Gdim => {
            ext_to_ring(m, 1).dims[1] == 0
                && torsionfree_classify(m, bound).is_ok_and(|v| v.totally_reflexive_up_to_bound)
        }
    }
}

fn power(m: &Module, r: usize) -> Module {
    direct_sum(m.algebra(), &vec![m.clone(); r])
}

#[derive(Clone)]
struct State {
    module: Module,
    steps: Vec<WitnessStep>,
    fingerprint: (usize, Vec<usize>, usize),
}

fn fingerprint(m: &Module) -> (usize, Vec<usize>, usize) {
    (m.dim(), m.radical_series(), m.num_generators())
}

fn mix(seed: u64, parts: &[usize]) -> u64 {
    parts.iter().fold(seed, |h, &x| {
        (h ^ x as u64)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .rotate_left(29)
    })
}

/// The `(n, a, b)` choices in search order.
fn shapes(mode: Mode, limits: &SearchLimits) -> Vec<(usize, usize, usize)> {
    let ab = match mode {
        Mode::Red => limits.ab_max,
        Mode::Ured => 1,
    };
    let mut out = Vec::new();
    for n in 0..=limits.n_max {
        for a in 1..=ab {
            for b in 1..=ab {
                out.push((n, a, b));
            }
        }
    }
    out
}

pub fn search_reducing(
    m: &Module,
    mode: Mode,
    target: Target,
    limits: &SearchLimits,
) -> Result<SearchOutcome> {
    limits.validate()?;
    let d = m.algebra().dim();
    let bound = limits.gdim_bound;
    let witness = |steps: Vec<WitnessStep>| ReductionWitness {
        mode,
        target,
        input: m.clone(),
        steps,
        gdim_bound: bound,
    };
    let mut outcome = SearchOutcome {
        witness: None,
        exhaustive: true,
        candidates: 0,
        pruned: 0,
        max_steps: limits.max_steps,
    };
    if is_terminal(m, target, bound) {
        outcome.witness = Some(witness(Vec::new()));
        return Ok(outcome);
    }
    let iso_limits = IsoLimits {
        exhaust_cap: 20_000,
        samples: 32,
        seed: limits.seed,
    };
    let mut frontier = vec![State {
        module: m.clone(),
        steps: Vec::new(),
        fingerprint: fingerprint(m),
    }];
    for level in 1..=limits.max_steps {
        let last = level == limits.max_steps;
        let mut next: Vec<State> = Vec::new();
        for (si, state) in frontier.iter().enumerate() {
            let cur = &state.module;
            for (n, a, b) in shapes(mode, limits) {
                let syz = syzygy_power(cur, n);
                if last
                    && target == Target::Pd
                    && !(a * cur.dim() + b * syz.dim()).is_multiple_of(d)
                {
                    outcome.pruned += 1;
                    continue;
                }
                let am = power(cur, a);
                let cm = power(&syz, b);
                let space = Ext1Space::new(&cm, &am);
                let en = Enumeration::new(
                    space.dim(),
                    m.p(),
                    limits.cap,
                    limits.samples,
                    mix(limits.seed, &[level, si, n, a, b]),
                    true,
                );
                outcome.exhaustive &= en.exhaustive;
                let make_step = |coords: Vec<u32>, middle: Module| WitnessStep {
                    n,
                    a,
                    b,
                    ext_dim: space.dim(),
                    representative: space.representative(&coords).mat,
                    coords,
                    middle,
                };
                let slots = en.slots();
                if last {
                    let hit = (0..slots).into_par_iter().find_map_first(|i| {
                        let coords = en.get(i)?;
                        let ext = space.extension(&coords);
                        is_terminal(&ext.middle, target, bound).then_some((coords, ext.middle))
                    });
                    outcome.candidates +=
                        (0..slots).filter(|&i| en.get(i).is_some()).count() as u64;
                    if let Some((coords, middle)) = hit {
                        let mut steps = state.steps.clone();
                        steps.push(make_step(coords, middle));
                        outcome.witness = Some(witness(steps));
                        return Ok(outcome);
                    }
                    continue;
                }
                let middles: Vec<(Vec<u32>, Module, bool)> = (0..slots)
                    .into_par_iter()
                    .filter_map(|i| {
                        let coords = en.get(i)?;
                        let ext = space.extension(&coords);
                        let t = is_terminal(&ext.middle, target, bound);
                        Some((coords, ext.middle, t))
                    })
                    .collect();
                outcome.candidates += middles.len() as u64;
                if let Some((coords, middle, _)) = middles.iter().find(|x| x.2) {
                    let mut steps = state.steps.clone();
                    steps.push(make_step(coords.clone(), middle.clone()));
                    outcome.witness = Some(witness(steps));
                    return Ok(outcome);
                }
                for (coords, middle, _) in middles {
                    let fp = fingerprint(&middle);
                    let seen = next.iter().any(|s| {
                        s.fingerprint == fp
                            && matches!(
                                is_isomorphic_with(&s.module, &middle, &iso_limits),
                                IsoVerdict::Yes(_)
                            )
                    });
                    if seen {
                        continue;
                    }
                    if next.len() >= limits.frontier_cap {
                        outcome.exhaustive = false;
                        break;
                    }
                    let mut steps = state.steps.clone();
                    steps.push(make_step(coords, middle.clone()));
                    next.push(State {
                        module: middle,
                        steps,
                        fingerprint: fp,
                    });
                }
            }
        }
        frontier = next;
    }
    Ok(outcome)
}

/// Rebuilds every step of a witness from its coordinates and checks exactness,
/// the shape constraints of the mode and the terminal verdict.
pub fn verify_witness(w: &ReductionWitness) -> Result<()> {
    let mut prev = w.input.clone();
    for (i, s) in w.steps.iter().enumerate() {
        if w.mode == Mode::Ured && (s.a != 1 || s.b != 1) {
            return Err(Error::Invariant(format!(
                "step {} of an upper reduction has a or b ≠ 1",
                i + 1
            )));
        }
        let space = Ext1Space::new(&power(&syzygy_power(&prev, s.n), s.b), &power(&prev, s.a));
        let ext = space.extension(&s.coords);
        if !ext.middle.same_as(&s.middle) {
            return Err(Error::Invariant(format!(
                "step {} does not rebuild to the recorded module",
                i + 1
            )));
        }
        if !ext.is_short_exact(&space) {
            return Err(Error::Invariant(format!(
                "step {} is not a short exact sequence",
                i + 1
            )));
        }
        prev = ext.middle;
    }
    if !is_terminal(&prev, w.target, w.gdim_bound) {
        return Err(Error::Invariant(format!(
            "terminal module is not {}",
            w.terminal_verdict()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::ring;
    use crate::module::{free_module, is_isomorphic, residue_field};

    #[test]
    fn reduction_of_k_over_r1() {
        let r1 = ring("R1q5", None).unwrap();
        let k = residue_field(&r1);
        let limits = SearchLimits {
            max_steps: 2,
            n_max: 1,
            ab_max: 2,
            ..Default::default()
        };
        let out = search_reducing(&k, Mode::Red, Target::Pd, &limits).unwrap();
        let w = out.witness.expect("witness");
        assert_eq!(w.length(), 1);
        let s = &w.steps[0];
        assert_eq!((s.n, s.a, s.b), (0, 2, 1));
        assert!(is_isomorphic(&s.middle, &free_module(&r1, 1)).is_yes());
        verify_witness(&w).unwrap();
    }

    #[test]
    fn upper_reduction_over_r2() {
        let r2 = ring("R2q5", None).unwrap();
        let limits = SearchLimits {
            max_steps: 1,
            n_max: 1,
            ..Default::default()
        };
        let out = search_reducing(&residue_field(&r2), Mode::Ured, Target::Pd, &limits).unwrap();
        let w = out.witness.unwrap();
        assert_eq!(w.length(), 1);
        verify_witness(&w).unwrap();
        let free = search_reducing(&free_module(&r2, 2), Mode::Ured, Target::Pd, &limits).unwrap();
        assert_eq!(free.witness.unwrap().length(), 0);
    }

    #[test]
    fn upper_reduction_of_k_over_binary_r1_fails_exhaustively() {
        let r1 = ring("R1q2", None).unwrap();
        let limits = SearchLimits {
            max_steps: 1,
            n_max: 3,
            ..Default::default()
        };
        let out = search_reducing(&residue_field(&r1), Mode::Ured, Target::Pd, &limits).unwrap();
        assert!(out.witness.is_none());
        assert!(out.exhaustive);
        assert_eq!(out.pruned, 2);
    }

    #[test]
    fn gdim_target_is_immediate_on_gorenstein_rings() {
        let r2 = ring("R2q5e3", None).unwrap();
        let out = search_reducing(
            &residue_field(&r2),
            Mode::Ured,
            Target::Gdim,
            &SearchLimits::default(),
        )
        .unwrap();
        assert_eq!(out.witness.unwrap().length(), 0);
    }

    #[test]
    fn tampered_witness_is_rejected() {
        let r2 = ring("R2q5", None).unwrap();
        let limits = SearchLimits {
            max_steps: 1,
            ..Default::default()
        };
        let mut w = search_reducing(&residue_field(&r2), Mode::Ured, Target::Pd, &limits)
            .unwrap()
            .witness
            .unwrap();
        w.steps[0].coords = vec![0];
        assert!(verify_witness(&w).is_err());
    }
}
