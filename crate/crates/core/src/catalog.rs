//! Built-in rings, module shorthands and seeded random modules.
//!
//! Ring ids: `R1` = k[x,y]/(x²,xy,y²), `R2` = k[x]/(x^e), `R3` = k[x,y]/(x^a,y^b),
//! `R4` = the 5-dimensional Gorenstein algebra with x²=y²=z²=w and all other
//! products of generators zero, `R5` = k. The field is written `q2` or `q5`,
//! e.g. `R1q5`, `R2q5e3`, `R3q2a2b3`.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{build, Algebra, RingKind, RingSpec};
use crate::error::{Error, Result};
use crate::module::{
    cokernel_of_lambda_matrix, free_module, residue_field, syzygy_power, transpose, LambdaMatrix,
    Module, ModuleRep,
};

pub const RING_IDS: [&str; 5] = ["R1", "R2", "R3", "R4", "R5"];

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn monomial(p: u32, vars: &[&str], ideal: &[String]) -> RingSpec {
    RingSpec {
        p,
        kind: RingKind::MonomialQuotient {
            variables: strings(vars),
            ideal: ideal.to_vec(),
        },
    }
}

/// The 5-dimensional Gorenstein algebra on `1, x, y, z, w`.
pub fn r4_spec(p: u32) -> RingSpec {
    let labels = strings(&["1", "x", "y", "z", "w"]);
    let mut table = vec![vec![vec![0i64; 5]; 5]; 5];
    for j in 0..5 {
        table[0][j][j] = 1;
        table[j][0][j] = 1;
    }
    for i in 1..4 {
        table[i][i][4] = 1;
    }
    RingSpec {
        p,
        kind: RingKind::StructureConstants {
            labels,
            generators: strings(&["x", "y", "z"]),
            table,
            grading: Some(vec![0, 1, 1, 1, 2]),
            ci: None,
        },
    }
}

/// Parsed catalog id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingId {
    pub family: u8,
    pub p: u32,
    pub params: Vec<(char, u32)>,
}

fn parse_id(id: &str) -> Option<RingId> {
    let rest = id.strip_prefix('R')?;
    let mut chars = rest.chars().peekable();
    let family = chars.next()?.to_digit(10)? as u8;
    if !(1..=5).contains(&family) {
        return None;
    }
    let mut p = None;
    let mut params = Vec::new();
    while let Some(c) = chars.next() {
        let mut digits = String::new();
        while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
            digits.push(*d);
            chars.next();
        }
        let v: u32 = digits.parse().ok()?;
        if c == 'q' {
            p = Some(v);
        } else if matches!(c, 'e' | 'a' | 'b') {
            params.push((c, v));
        } else {
            return None;
        }
    }
    Some(RingId {
        family,
        p: p.unwrap_or(5),
        params,
    })
}

/// Resolves a catalog id; `p_override` replaces the field given in the id.
pub fn ring_spec(id: &str, p_override: Option<u32>) -> Result<RingSpec> {
    let rid = parse_id(id).ok_or_else(|| Error::UnknownRing(id.to_string()))?;
    let p = p_override.unwrap_or(rid.p);
    let param = |c: char, default: u32| {
        rid.params
            .iter()
            .find(|(k, _)| *k == c)
            .map_or(default, |(_, v)| *v)
    };
    let allowed: &[char] = match rid.family {
        2 => &['e'],
        3 => &['a', 'b'],
        _ => &[],
    };
    if rid.params.iter().any(|(c, _)| !allowed.contains(c)) {
        return Err(Error::UnknownRing(id.to_string()));
    }
    let spec = match rid.family {
        1 => monomial(p, &["x", "y"], &strings(&["x^2", "x*y", "y^2"])),
        2 => monomial(p, &["x"], &[format!("x^{}", param('e', 2))]),
        3 => monomial(
            p,
            &["x", "y"],
            &[
                format!("x^{}", param('a', 2)),
                format!("y^{}", param('b', 2)),
            ],
        ),
        4 => r4_spec(p),
        _ => monomial(p, &[], &[]),
    };
    Ok(spec)
}

pub fn ring(id: &str, p_override: Option<u32>) -> Result<Algebra> {
    build(&ring_spec(id, p_override)?)
}

/// Default catalog instances, as listed by `ring list`.
pub fn catalog_ids() -> Vec<String> {
    let mut ids = Vec::new();
    for q in [2, 5] {
        for base in RING_IDS {
            ids.push(format!("{base}q{q}"));
        }
    }
    ids
}

/// Parses an element written against the basis labels, e.g. `x+2*y` or `x*y`.
pub fn parse_element(alg: &Algebra, text: &str) -> Result<Vec<u32>> {
    let f = alg.field();
    let mut v = vec![0u32; alg.dim()];
    for term in text.split('+') {
        let term = term.trim();
        let (coef, label) = match term.split_once('*') {
            Some((c, l)) if c.trim().parse::<i64>().is_ok() => {
                (c.trim().parse::<i64>().unwrap(), l.trim())
            }
            _ => match term.parse::<i64>() {
                Ok(c) => (c, "1"),
                Err(_) => (1, term),
            },
        };
        let idx = alg
            .labels()
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownModule(format!("unknown ring element `{label}`")))?;
        v[idx] = f.add(v[idx], f.from_i64(coef));
    }
    Ok(v)
}

/// Module shorthands: `k`, `free:r`, `syzygy:n:<spec>`, `tr:<spec>`,
/// `cyclic:<elem>,<elem>,…` (the quotient of Λ by those elements),
/// `random:<seed>[:<max dim>]`, or a path to a module JSON file.
pub fn module(alg: &Algebra, spec: &str) -> Result<Module> {
    let spec = spec.trim();
    if spec == "k" {
        return Ok(residue_field(alg));
    }
    if spec == "ring" || spec == "R" {
        return Ok(free_module(alg, 1));
    }
    if let Some(r) = spec.strip_prefix("free:") {
        let r: usize = r
            .parse()
            .map_err(|_| Error::UnknownModule(spec.to_string()))?;
        return Ok(free_module(alg, r));
    }
    if let Some(rest) = spec.strip_prefix("syzygy:") {
        let (n, inner) = rest
            .split_once(':')
            .ok_or_else(|| Error::UnknownModule(spec.to_string()))?;
        let n: usize = n
            .parse()
            .map_err(|_| Error::UnknownModule(spec.to_string()))?;
        return Ok(syzygy_power(&module(alg, inner)?, n));
    }
    if let Some(inner) = spec.strip_prefix("tr:") {
        return Ok(transpose(&module(alg, inner)?));
    }
    if let Some(elems) = spec.strip_prefix("cyclic:") {
        let es: Vec<Vec<u32>> = elems
            .split(',')
            .map(|e| parse_element(alg, e))
            .collect::<Result<_>>()?;
        let mut m = LambdaMatrix::zeros(alg, 1, es.len());
        for (j, e) in es.iter().enumerate() {
            m.set(0, j, e);
        }
        return Ok(cokernel_of_lambda_matrix(alg, &m).0);
    }
    if let Some(rest) = spec.strip_prefix("random:") {
        let mut parts = rest.split(':');
        let seed: u64 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::UnknownModule(spec.to_string()))?;
        let cap: usize = match parts.next() {
            Some(s) => s
                .parse()
                .map_err(|_| Error::UnknownModule(spec.to_string()))?,
            None => 12,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok(random_module(
            alg,
            &mut rng,
            &RandomModuleOptions {
                max_dim: cap,
                ..Default::default()
            },
        ));
    }
    if Path::new(spec).exists() {
        return crate::io::load_module(alg, Path::new(spec));
    }
    Err(Error::UnknownModule(spec.to_string()))
}

/// Shape of random modules.
#[derive(Clone, Debug)]
pub struct RandomModuleOptions {
    pub max_dim: usize,
    pub max_gens: usize,
    pub max_relations: usize,
    /// Use only linear combinations of the generators as matrix entries, so
    /// that over a graded ring the module is graded.
    pub linear_entries: bool,
}

impl Default for RandomModuleOptions {
    fn default() -> Self {
        RandomModuleOptions {
            max_dim: 12,
            max_gens: 3,
            max_relations: 3,
            linear_entries: false,
        }
    }
}

/// Cokernel of a random matrix over Λ with entries in the maximal ideal,
/// retried until the module is nonzero and of dimension at most `max_dim`.
pub fn random_module(alg: &Algebra, rng: &mut ChaCha8Rng, opts: &RandomModuleOptions) -> Module {
    let p = alg.p();
    let d = alg.dim();
    if d == 1 {
        let g = rng.gen_range(1..=opts.max_gens.min(opts.max_dim).max(1));
        return free_module(alg, g);
    }
    loop {
        let a = rng.gen_range(1..=opts.max_gens);
        if a * d > opts.max_dim + opts.max_relations * d && a > 1 {
            // A cokernel this large would rarely fit; retry with fewer generators.
            continue;
        }
        let b = rng.gen_range(1..=opts.max_relations.max(1));
        let mut m = LambdaMatrix::zeros(alg, a, b);
        for i in 0..a {
            for j in 0..b {
                let mut e = vec![0u32; d];
                if opts.linear_entries {
                    for g in 0..alg.num_gens() {
                        let c = rng.gen_range(0..p);
                        for (slot, &v) in e.iter_mut().zip(alg.generator(g)) {
                            *slot = alg.field().mul_add(*slot, c, v);
                        }
                    }
                } else {
                    for slot in e.iter_mut().skip(1) {
                        *slot = rng.gen_range(0..p);
                    }
                }
                m.set(i, j, &e);
            }
        }
        let (module, _) = cokernel_of_lambda_matrix(alg, &m);
        if module.dim() > 0 && module.dim() <= opts.max_dim {
            return module;
        }
    }
}

/// Seeded list of random modules.
pub fn random_modules(
    alg: &Algebra,
    seed: u64,
    count: usize,
    opts: &RandomModuleOptions,
) -> Vec<Module> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_module(alg, &mut rng, opts))
        .collect()
}

/// Fixed small modules used alongside random samples.
pub fn standard_modules(alg: &Algebra) -> Vec<(String, Module)> {
    let mut out = vec![
        ("k".to_string(), residue_field(alg)),
        ("ring".to_string(), free_module(alg, 1)),
    ];
    if alg.num_gens() > 0 {
        let x = alg.generator_names()[0].clone();
        out.push((
            format!("cyclic:{x}"),
            module(alg, &format!("cyclic:{x}")).expect("generator label"),
        ));
        out.push((
            "syzygy:1:k".to_string(),
            syzygy_power(&residue_field(alg), 1),
        ));
    }
    out
}

/// Validates a module against its ring (used for externally supplied actions).
pub fn validate(m: &Module) -> Result<Module> {
    ModuleRep::new(m.algebra(), m.dim(), m.actions().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_rings() {
        let r1 = ring("R1q5", None).unwrap();
        assert_eq!(r1.dim(), 3);
        assert_eq!(ring("R2q5e3", None).unwrap().dim(), 3);
        assert_eq!(ring("R3q2a2b3", None).unwrap().dim(), 6);
        let r4 = ring("R4q5", None).unwrap();
        assert_eq!(r4.dim(), 5);
        let c = r4.classify();
        assert!(c.is_gorenstein);
        assert_eq!(r4.socle().basis_vector(0), vec![0, 0, 0, 0, 1]);
        assert!(ring("R5q2", None).unwrap().classify().is_field);
        assert_eq!(ring("R1", Some(2)).unwrap().p(), 2);
        assert!(matches!(ring("R9q5", None), Err(Error::UnknownRing(_))));
        assert!(matches!(ring("R1q5e3", None), Err(Error::UnknownRing(_))));
        assert!(ring("R1q4", None).is_err());
        assert!(ring("R4q2", None).unwrap().is_gorenstein());
    }

    #[test]
    fn module_shorthands() {
        let a = ring("R1q5", None).unwrap();
        assert_eq!(module(&a, "k").unwrap().dim(), 1);
        assert_eq!(module(&a, "free:2").unwrap().dim(), 6);
        assert_eq!(module(&a, "syzygy:1:k").unwrap().dim(), 2);
        assert_eq!(module(&a, "cyclic:x").unwrap().dim(), 2);
        assert_eq!(module(&a, "cyclic:x+2*y").unwrap().dim(), 2);
        assert!(matches!(module(&a, "bogus"), Err(Error::UnknownModule(_))));
        let r = module(&a, "random:3:8").unwrap();
        assert!(r.dim() >= 1 && r.dim() <= 8);
        assert!(validate(&r).is_ok());
    }

    #[test]
    fn random_modules_are_reproducible() {
        let a = ring("R4q2", None).unwrap();
        let opts = RandomModuleOptions {
            linear_entries: true,
            ..Default::default()
        };
        let m1 = random_modules(&a, 7, 5, &opts);
        let m2 = random_modules(&a, 7, 5, &opts);
        for (x, y) in m1.iter().zip(&m2) {
            assert!(x.same_as(y));
            assert!(validate(x).is_ok());
        }
    }
}
