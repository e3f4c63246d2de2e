//! The acceptance battery: each criterion runs a fixed, seeded computation
//! and reports pass/fail with a short detail line.

use std::time::Instant;

use serde::Serialize;

use crate::algebra::Algebra;
use crate::catalog::{random_modules, ring, standard_modules, RandomModuleOptions};
use crate::complex::{bass_numbers, ext_to_ring, ext_to_ring_via_dual_complex, Resolution};
use crate::error::{Error, Result};
use crate::module::{
    free_module, is_isomorphic, is_isomorphic_with, residue_field, split_free_summands, transpose,
    IsoLimits, IsoVerdict, Module,
};
use crate::reducing::{
    complexity_check, growth_estimate, search_reducing, verify_witness, GrowthKind, GrowthVerdict,
    Mode, SearchLimits, Target,
};
use crate::torsionfree::{
    build_free_splice, gdim_report, splice, torsionfree_classify, verify_free_splice, GdimVerdict,
    TermCondition,
};

pub const SUITE_SEED: u64 = 20_240_611;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: f64,
    pub time_limit_s: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {}. {} ({:.2} s, limit {} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_ms / 1000.0,
            self.time_limit_s,
            self.detail
        )
    }
}

type Outcome = Result<(bool, String)>;

pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub time_limit_s: f64,
    run: fn() -> Outcome,
}

impl Criterion {
    pub fn run(&self) -> CriterionResult {
        let start = Instant::now();
        let (ok, detail) = match (self.run)() {
            Ok(x) => x,
            Err(e) => (false, format!("error: {e}")),
        };
        let elapsed_ms = start.elapsed().as_secs_f64() * 1000.0;
        CriterionResult {
            id: self.id,
            name: self.name,
            passed: ok && elapsed_ms <= self.time_limit_s * 1000.0,
            detail,
            elapsed_ms,
            time_limit_s: self.time_limit_s,
        }
    }
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            name: "reduction of k over R1 by 0→k²→Λ→k→0",
            time_limit_s: 5.0,
            run: reduction_example,
        },
        Criterion {
            id: 2,
            name: "no upper reduction of k over GF(2)-R1 in one step",
            time_limit_s: 60.0,
            run: upper_negative,
        },
        Criterion {
            id: 3,
            name: "Betti numbers of k",
            time_limit_s: 5.0,
            run: betti_exactness,
        },
        Criterion {
            id: 4,
            name: "complexity equals upper reducing pd on CI rings",
            time_limit_s: 30.0,
            run: complexity_instances,
        },
        Criterion {
            id: 5,
            name: "torsionfree splice round trip",
            time_limit_s: 60.0,
            run: splice_round_trip,
        },
        Criterion {
            id: 6,
            name: "double transpose up to free summands",
            time_limit_s: 30.0,
            run: transpose_duality,
        },
        Criterion {
            id: 7,
            name: "Gorenstein rings: total reflexivity",
            time_limit_s: 30.0,
            run: gorenstein_suite,
        },
        Criterion {
            id: 8,
            name: "Bass numbers and plexity",
            time_limit_s: 10.0,
            run: bass_plexity,
        },
        Criterion {
            id: 9,
            name: "Ext to the ring by two code paths",
            time_limit_s: 20.0,
            run: oracle_equivalence,
        },
    ]
}

pub fn run_all() -> Vec<CriterionResult> {
    criteria().iter().map(Criterion::run).collect()
}

fn sample_modules(alg: &Algebra, seed: u64, count: usize, max_dim: usize) -> Vec<(String, Module)> {
    let opts = RandomModuleOptions {
        max_dim,
        ..Default::default()
    };
    let mut out: Vec<(String, Module)> = standard_modules(alg)
        .into_iter()
        .filter(|(_, m)| m.dim() <= max_dim)
        .collect();
    for (i, m) in random_modules(alg, seed, count, &opts)
        .into_iter()
        .enumerate()
    {
        out.push((format!("random#{i}"), m));
    }
    out
}

fn reduction_example() -> Outcome {
    let r1 = ring("R1q5", None)?;
    let limits = SearchLimits {
        max_steps: 2,
        n_max: 1,
        ab_max: 2,
        seed: SUITE_SEED,
        ..Default::default()
    };
    let out = search_reducing(&residue_field(&r1), Mode::Red, Target::Pd, &limits)?;
    let Some(w) = out.witness else {
        return Ok((false, "no witness found".to_string()));
    };
    verify_witness(&w)?;
    let s = &w.steps[0];
    let iso = is_isomorphic(&s.middle, &free_module(&r1, 1)).is_yes();
    let ok = w.length() == 1 && (s.n, s.a, s.b) == (0, 2, 1) && iso;
    Ok((
        ok,
        format!(
            "length {}, (n,a,b)=({},{},{}), middle ≅ Λ: {iso}",
            w.length(),
            s.n,
            s.a,
            s.b
        ),
    ))
}

fn upper_negative() -> Outcome {
    let r1 = ring("R1q2", None)?;
    let limits = SearchLimits {
        max_steps: 1,
        n_max: 3,
        seed: SUITE_SEED,
        ..Default::default()
    };
    let out = search_reducing(&residue_field(&r1), Mode::Ured, Target::Pd, &limits)?;
    let ok = out.witness.is_none() && out.exhaustive;
    Ok((
        ok,
        format!(
            "witness: {}, exhaustive: {}, candidates: {}, pruned shapes: {}",
            out.witness.is_some(),
            out.exhaustive,
            out.candidates,
            out.pruned
        ),
    ))
}

fn betti_exactness() -> Outcome {
    let cases: [(&str, fn(usize) -> usize); 3] = [
        ("R1q5", |i| 1 << i),
        ("R2q5", |_| 1),
        ("R3q5a2b2", |i| i + 1),
    ];
    let mut details = Vec::new();
    let mut ok = true;
    for (id, expect) in cases {
        let alg = ring(id, None)?;
        let betti = Resolution::of_module(&residue_field(&alg)).betti(8);
        let want: Vec<usize> = (0..=8).map(expect).collect();
        ok &= betti == want;
        details.push(format!("{id}: {betti:?}"));
    }
    Ok((ok, details.join("; ")))
}

fn complexity_instances() -> Outcome {
    let limits = SearchLimits {
        max_steps: 2,
        n_max: 1,
        seed: SUITE_SEED,
        ..Default::default()
    };
    let mut ok = true;
    let mut details = Vec::new();
    for (id, cx, max_len) in [("R2q5", 1, 1), ("R3q5a2b2", 2, 2)] {
        let alg = ring(id, None)?;
        let rep = complexity_check(&residue_field(&alg), &limits, 12, 10)?;
        let len = rep.search.witness.as_ref().map(|w| w.length());
        if let Some(w) = &rep.search.witness {
            verify_witness(w)?;
        }
        let good = rep.cx.verdict == (GrowthVerdict::Poly { degree: cx })
            && len.is_some_and(|l| l <= max_len && (id != "R2q5" || l == 1))
            && rep.passed();
        ok &= good;
        details.push(format!(
            "{id}: cx {:?}, ured witness {:?}, inequalities hold: {}",
            rep.cx.verdict,
            len,
            rep.inequalities.iter().all(|c| c.holds)
        ));
    }
    Ok((ok, details.join("; ")))
}

fn splice_round_trip() -> Outcome {
    let mut modules = Vec::new();
    for (i, id) in ["R1q5", "R2q5e3", "R3q5a2b2", "R4q5"].iter().enumerate() {
        let alg = ring(id, None)?;
        for (j, m) in random_modules(
            &alg,
            SUITE_SEED + i as u64,
            5,
            &RandomModuleOptions::default(),
        )
        .into_iter()
        .enumerate()
        {
            modules.push((format!("{id}/random#{j}"), m));
        }
    }
    let mut cases = 0;
    let mut built = 0;
    for (name, m) in &modules {
        let v = torsionfree_classify(m, 3)?;
        for mm in 0..=3 {
            for n in 0..=3 {
                cases += 1;
                let member = v.contains(mm, n);
                let raw = verify_free_splice(
                    &splice(m, mm, n).to_module_complex(),
                    mm,
                    n,
                    TermCondition::AllInGmn,
                )?;
                if raw.passed != member || !raw.agrees {
                    return Ok((
                        false,
                        format!(
                            "{name} ({mm},{n}): splice verdict {} vs class {member}",
                            raw.passed
                        ),
                    ));
                }
                match build_free_splice(m, mm, n) {
                    Ok(seq) => {
                        if !member {
                            return Ok((
                                false,
                                format!("{name} ({mm},{n}): built outside the class"),
                            ));
                        }
                        built += 1;
                        let c = seq.complex.to_module_complex();
                        for cond in [TermCondition::AllInGmn, TermCondition::Split] {
                            let r = verify_free_splice(&c, mm, n, cond)?;
                            if !(r.passed && r.image_in_gmn && r.agrees) {
                                return Ok((
                                    false,
                                    format!("{name} ({mm},{n}): verification failed"),
                                ));
                            }
                        }
                    }
                    Err(Error::Precondition(_)) if !member => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok((
        modules.len() >= 20,
        format!(
            "{} modules, {cases} (m,n) cases, {built} sequences built and verified",
            modules.len()
        ),
    ))
}

fn transpose_duality() -> Outcome {
    let limits = IsoLimits {
        exhaust_cap: 1 << 24,
        ..Default::default()
    };
    let mut total = 0;
    for (i, id) in ["R1q2", "R2q2", "R3q2", "R4q2"].iter().enumerate() {
        let alg = ring(id, None)?;
        for (name, m) in sample_modules(&alg, SUITE_SEED + 10 + i as u64, 6, 8) {
            let (core, _) = split_free_summands(&m);
            let (back, _) = split_free_summands(&transpose(&transpose(&m)));
            total += 1;
            match is_isomorphic_with(&core, &back, &limits) {
                IsoVerdict::Yes(_) => {}
                other => return Ok((false, format!("{id}/{name}: {}", other.label()))),
            }
        }
    }
    Ok((true, format!("{total} modules, all isomorphic")))
}

fn gorenstein_suite() -> Outcome {
    let limits = SearchLimits {
        max_steps: 1,
        seed: SUITE_SEED,
        ..Default::default()
    };
    let mut total = 0;
    for (i, id) in ["R2q5e3", "R3q5a2b2", "R4q5"].iter().enumerate() {
        let alg = ring(id, None)?;
        for (name, m) in sample_modules(&alg, SUITE_SEED + 20 + i as u64, 4, 8) {
            total += 1;
            let e = ext_to_ring(&m, 6);
            if !e.vanishes_through(6) {
                return Ok((false, format!("{id}/{name}: Ext dims {:?}", e.dims)));
            }
            if gdim_report(&m, 6)?.verdict != (GdimVerdict::Zero { up_to: 6 }) {
                return Ok((false, format!("{id}/{name}: gdim not 0")));
            }
            for mode in [Mode::Red, Mode::Ured] {
                let out = search_reducing(&m, mode, Target::Gdim, &limits)?;
                if out.witness.map(|w| w.length()) != Some(0) {
                    return Ok((false, format!("{id}/{name}: {mode}-gdim not 0")));
                }
            }
        }
    }
    let r1 = ring("R1q5", None)?;
    let e = ext_to_ring(&residue_field(&r1), 6);
    let ok = e.dims[1..].iter().all(|&d| d > 0);
    Ok((
        ok,
        format!(
            "{total} modules over Gorenstein rings totally reflexive; Ext^i(k,R1) = {:?}",
            &e.dims[1..]
        ),
    ))
}

fn bass_plexity() -> Outcome {
    let r1 = ring("R1q5", None)?;
    let mu1 = bass_numbers(&free_module(&r1, 1), 8);
    let g1 = growth_estimate(&mu1, GrowthKind::Bass, None);
    let r2 = ring("R2q5", None)?;
    let mu2 = bass_numbers(&free_module(&r2, 1), 8);
    let g2 = growth_estimate(&mu2, GrowthKind::Bass, None);
    let mut unit = vec![0; 9];
    unit[0] = 1;
    let ok = mu1[0] == 2
        && g1.verdict == GrowthVerdict::Exponential
        && mu2 == unit
        && g2.verdict == (GrowthVerdict::Poly { degree: 0 });
    Ok((
        ok,
        format!(
            "μ(R1) = {mu1:?} ({:?}); μ(R2) = {mu2:?} ({:?})",
            g1.verdict, g2.verdict
        ),
    ))
}

fn oracle_equivalence() -> Outcome {
    let mut total = 0;
    for (i, id) in ["R1q5", "R2q5", "R3q5", "R4q5", "R1q2", "R3q2a2b3"]
        .iter()
        .enumerate()
    {
        let alg = ring(id, None)?;
        for (name, m) in sample_modules(&alg, SUITE_SEED + 30 + i as u64, 4, 10) {
            total += 1;
            let a = ext_to_ring(&m, 4).dims;
            let b = ext_to_ring_via_dual_complex(&m, 4);
            if a != b {
                return Ok((false, format!("{id}/{name}: {a:?} vs {b:?}")));
            }
        }
    }
    Ok((true, format!("{total} modules agree through Ext^4")))
}
