//! Finite-dimensional commutative local algebras over GF(p).
//!
//! An algebra is stored by structure constants against a basis whose first
//! element is the unit and whose remaining elements span the maximal ideal.
//! A list of distinguished generators `x_1..x_n` of the maximal ideal is
//! kept, together with a basis of monomials ("words") in those generators so
//! that any module given by generator actions can act by arbitrary elements.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{is_prime, Field, Matrix, Subspace};

/// Input document describing a ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    pub p: u32,
    #[serde(flatten)]
    pub kind: RingKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RingKind {
    /// `GF(p)[variables] / (monomials)`; monomials written like `x^2*y`.
    MonomialQuotient {
        variables: Vec<String>,
        ideal: Vec<String>,
    },
    /// Full multiplication table: `table[i][j]` is the coefficient vector of
    /// `b_i * b_j`. `labels[0]` must be the unit.
    StructureConstants {
        labels: Vec<String>,
        generators: Vec<String>,
        table: Vec<Vec<Vec<i64>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grading: Option<Vec<u32>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ci: Option<bool>,
    },
}

pub type Algebra = Arc<AlgebraRep>;

pub struct AlgebraRep {
    field: Field,
    labels: Vec<String>,
    gen_names: Vec<String>,
    generators: Vec<Vec<u32>>,
    /// `table[(i * D + j) * D + k]` = coefficient of `b_k` in `b_i b_j`.
    table: Vec<u32>,
    grading: Option<Vec<u32>>,
    left_mult: Vec<Matrix>,
    words: Vec<Vec<u32>>,
    basis_in_words: Matrix,
    socle: Subspace,
    monomial_ci: bool,
    declared_ci: Option<bool>,
    spec: RingSpec,
}

impl fmt::Debug for AlgebraRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AlgebraRep(GF({}), basis {:?}, generators {:?})",
            self.p(),
            self.labels,
            self.gen_names
        )
    }
}

impl PartialEq for AlgebraRep {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.labels == other.labels
            && self.gen_names == other.gen_names
            && self.generators == other.generators
            && self.table == other.table
            && self.grading == other.grading
    }
}

/// Ring-level flags derived from the socle and the presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub socle_dim: usize,
    pub is_gorenstein: bool,
    pub is_field: bool,
    pub is_monomial_ci: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub declared_ci: Option<bool>,
}

fn axiom(name: &str, witness: &[&str]) -> Error {
    Error::Axiom {
        axiom: name.to_string(),
        witness: witness.iter().map(|s| s.to_string()).collect(),
    }
}

fn check_prime(p: u32) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidRing(format!(
            "characteristic {p} is not a prime below 2^31"
        )))
    }
}

/// Parses a monomial such as `x^2*y` into an exponent vector.
pub fn parse_monomial(text: &str, variables: &[String]) -> Result<Vec<u32>> {
    let mut exps = vec![0u32; variables.len()];
    let text = text.trim();
    if text == "1" {
        return Ok(exps);
    }
    for factor in text.split('*') {
        let factor = factor.trim();
        let (name, e) = match factor.split_once('^') {
            Some((n, e)) => {
                let e: u32 = e.trim().parse().map_err(|_| {
                    Error::InvalidRing(format!("bad exponent in monomial `{text}`"))
                })?;
                (n.trim(), e)
            }
            None => (factor, 1),
        };
        let idx = variables.iter().position(|v| v == name).ok_or_else(|| {
            Error::InvalidRing(format!("unknown variable `{name}` in monomial `{text}`"))
        })?;
        exps[idx] += e;
    }
    Ok(exps)
}

fn render_monomial(exps: &[u32], variables: &[String]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .zip(variables)
        .filter(|(e, _)| **e > 0)
        .map(|(e, v)| {
            if *e == 1 {
                v.clone()
            } else {
                format!("{v}^{e}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Builds `GF(p)[x_1..x_n]/I` for a monomial ideal `I` containing a power of
/// every variable. Basis: standard monomials ordered by degree, then with
/// earlier variables first.
pub fn build_monomial_quotient(spec: &RingSpec) -> Result<Algebra> {
    let RingKind::MonomialQuotient { variables, ideal } = &spec.kind else {
        return Err(Error::InvalidRing(
            "expected mode monomial_quotient".to_string(),
        ));
    };
    check_prime(spec.p)?;
    let n = variables.len();
    let mut gens: Vec<Vec<u32>> = ideal
        .iter()
        .map(|m| parse_monomial(m, variables))
        .collect::<Result<_>>()?;
    if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
        return Err(Error::InvalidRing(
            "the ideal contains 1; the quotient is zero".to_string(),
        ));
    }
    // Minimal generators.
    gens.sort_by_key(|g| (g.iter().sum::<u32>(), std::cmp::Reverse(g.clone())));
    gens.dedup();
    let mut minimal: Vec<Vec<u32>> = Vec::new();
    for g in gens {
        if !minimal.iter().any(|h| divides(h, &g)) {
            minimal.push(g);
        }
    }
    let mut bounds = vec![0u32; n];
    for (i, b) in bounds.iter_mut().enumerate() {
        let pure = minimal
            .iter()
            .filter(|g| g.iter().enumerate().all(|(j, &e)| (j == i) == (e > 0)))
            .map(|g| g[i])
            .min();
        *b = pure.ok_or_else(|| Error::InfiniteDimensional(variables[i].clone()))?;
    }
    let mut monomials: Vec<Vec<u32>> = vec![vec![]];
    for &b in &bounds {
        monomials = monomials
            .into_iter()
            .flat_map(|m| {
                (0..b).map(move |e| {
                    let mut m2 = m.clone();
                    m2.push(e);
                    m2
                })
            })
            .collect();
    }
    monomials.retain(|m| !minimal.iter().any(|g| divides(g, m)));
    monomials.sort_by_key(|m| (m.iter().sum::<u32>(), std::cmp::Reverse(m.clone())));
    let d = monomials.len();
    let index: HashMap<Vec<u32>, usize> = monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let mut table = vec![0u32; d * d * d];
    for i in 0..d {
        for j in 0..d {
            let prod: Vec<u32> = monomials[i]
                .iter()
                .zip(&monomials[j])
                .map(|(a, b)| a + b)
                .collect();
            if let Some(&k) = index.get(&prod) {
                table[(i * d + j) * d + k] = 1;
            }
        }
    }
    let generators: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            let mut e = vec![0u32; n];
            e[i] = 1;
            let mut v = vec![0u32; d];
            if let Some(&k) = index.get(&e) {
                v[k] = 1;
            }
            v
        })
        .collect();
    let labels = monomials
        .iter()
        .map(|m| render_monomial(m, variables))
        .collect();
    let grading = Some(monomials.iter().map(|m| m.iter().sum()).collect());
    let monomial_ci = minimal
        .iter()
        .all(|g| g.iter().filter(|&&e| e > 0).count() == 1);
    let normalized = RingSpec {
        p: spec.p,
        kind: RingKind::MonomialQuotient {
            variables: variables.clone(),
            ideal: minimal
                .iter()
                .map(|g| render_monomial(g, variables))
                .collect(),
        },
    };
    let field = Field::new(spec.p);
    let left_mult = left_mult_tables(spec.p, d, &table);
    let basis_in_words = Matrix::identity(spec.p, d);
    let socle = socle_of(spec.p, d, &generators, &left_mult, &field);
    Ok(Arc::new(AlgebraRep {
        field,
        labels,
        gen_names: variables.clone(),
        generators,
        table,
        grading,
        left_mult,
        words: monomials,
        basis_in_words,
        socle,
        monomial_ci,
        declared_ci: None,
        spec: normalized,
    }))
}

fn left_mult_tables(p: u32, d: usize, table: &[u32]) -> Vec<Matrix> {
    (0..d)
        .map(|i| {
            let mut m = Matrix::zeros(p, d, d);
            for j in 0..d {
                for k in 0..d {
                    m.set(k, j, table[(i * d + j) * d + k]);
                }
            }
            m
        })
        .collect()
}

fn mult_matrix_from(left: &[Matrix], field: &Field, a: &[u32]) -> Matrix {
    let d = left.len();
    let mut m = Matrix::zeros(field.p(), d, d);
    for (i, &c) in a.iter().enumerate() {
        if c != 0 {
            m.add_scaled(&left[i], c);
        }
    }
    m
}

fn socle_of(p: u32, d: usize, gens: &[Vec<u32>], left: &[Matrix], field: &Field) -> Subspace {
    if gens.is_empty() {
        return Subspace::full(p, d);
    }
    let blocks: Vec<Matrix> = gens
        .iter()
        .map(|g| mult_matrix_from(left, field, g))
        .collect();
    let refs: Vec<&Matrix> = blocks.iter().collect();
    Subspace::kernel(&Matrix::vstack(&refs))
}

/// Validates a structure-constant table exhaustively and builds the algebra.
pub fn build_from_structure_constants(spec: &RingSpec) -> Result<Algebra> {
    let RingKind::StructureConstants {
        labels,
        generators: gen_labels,
        table: raw,
        grading,
        ci,
    } = &spec.kind
    else {
        return Err(Error::InvalidRing(
            "expected mode structure_constants".to_string(),
        ));
    };
    check_prime(spec.p)?;
    let p = spec.p;
    let field = Field::new(p);
    let d = labels.len();
    if d == 0 {
        return Err(Error::InvalidRing("empty basis".to_string()));
    }
    if raw.len() != d
        || raw
            .iter()
            .any(|row| row.len() != d || row.iter().any(|v| v.len() != d))
    {
        return Err(Error::InvalidRing(format!(
            "table must have shape {d} x {d} x {d}"
        )));
    }
    if let Some(g) = grading {
        if g.len() != d {
            return Err(Error::InvalidRing(
                "grading length differs from basis".to_string(),
            ));
        }
    }
    let mut table = vec![0u32; d * d * d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                table[(i * d + j) * d + k] = field.from_i64(raw[i][j][k]);
            }
        }
    }
    let prod = |i: usize, j: usize| -> &[u32] { &table[(i * d + j) * d..(i * d + j + 1) * d] };
    let unit = |j: usize| -> Vec<u32> {
        let mut e = vec![0u32; d];
        e[j] = 1;
        e
    };
    let l = |i: usize| labels[i].as_str();

    for j in 0..d {
        if prod(0, j) != unit(j).as_slice() || prod(j, 0) != unit(j).as_slice() {
            return Err(axiom("unit", &[l(0), l(j)]));
        }
    }
    for i in 0..d {
        for j in i + 1..d {
            if prod(i, j) != prod(j, i) {
                return Err(axiom("commutativity", &[l(i), l(j)]));
            }
        }
    }
    let left = left_mult_tables(p, d, &table);
    let mul = |a: &[u32], b: &[u32]| -> Vec<u32> { mult_matrix_from(&left, &field, a).mul_vec(b) };
    for i in 0..d {
        for j in 0..d {
            let ij = prod(i, j).to_vec();
            for k in 0..d {
                let lhs = mul(&ij, &unit(k));
                let rhs = mul(&unit(i), prod(j, k));
                if lhs != rhs {
                    return Err(axiom("associativity", &[l(i), l(j), l(k)]));
                }
            }
        }
    }
    for i in 1..d {
        for j in 0..d {
            if prod(i, j)[0] != 0 {
                return Err(axiom("locality: maximal ideal not closed", &[l(i), l(j)]));
            }
        }
    }
    // Nilpotency of m: m^D = 0.
    let mut power = Subspace::span(&Matrix::from_columns(
        p,
        d,
        &(1..d).map(unit).collect::<Vec<_>>(),
    ));
    for _ in 0..d {
        let mut cols = Vec::new();
        for s in 0..power.dim() {
            let v = power.basis_vector(s);
            for j in 1..d {
                cols.push(mul(&unit(j), &v));
            }
        }
        power = Subspace::span(&Matrix::from_columns(p, d, &cols));
        if power.dim() == 0 {
            break;
        }
    }
    if power.dim() != 0 {
        let w = (1..d)
            .find(|&i| {
                let li = &left[i];
                let mut acc = Matrix::identity(p, d);
                for _ in 0..d {
                    acc = acc.mul(li);
                }
                !acc.is_zero()
            })
            .unwrap_or(1.min(d - 1));
        return Err(axiom("locality: maximal ideal not nilpotent", &[l(w)]));
    }
    let mut generators = Vec::new();
    for g in gen_labels {
        let idx = labels
            .iter()
            .position(|x| x == g)
            .ok_or_else(|| Error::InvalidRing(format!("generator `{g}` is not a basis label")))?;
        if idx == 0 {
            return Err(axiom("generator outside maximal ideal", &[g]));
        }
        generators.push(unit(idx));
    }
    let (words, basis_in_words) =
        word_basis(p, d, &generators, &left, &field).ok_or_else(|| Error::Axiom {
            axiom: "generators do not generate the maximal ideal".to_string(),
            witness: gen_labels.clone(),
        })?;
    let socle = socle_of(p, d, &generators, &left, &field);
    Ok(Arc::new(AlgebraRep {
        field,
        labels: labels.clone(),
        gen_names: gen_labels.clone(),
        generators,
        table,
        grading: grading.clone(),
        left_mult: left,
        words,
        basis_in_words,
        socle,
        monomial_ci: false,
        declared_ci: *ci,
        spec: spec.clone(),
    }))
}

/// Selects monomials in the generators whose values form a basis, level by
/// level. Returns the exponent vectors and the change of basis matrix
/// (column `i` = coordinates of `b_i` in the word basis).
fn word_basis(
    p: u32,
    d: usize,
    gens: &[Vec<u32>],
    left: &[Matrix],
    field: &Field,
) -> Option<(Vec<Vec<u32>>, Matrix)> {
    let n = gens.len();
    let mut unit = vec![0u32; d];
    unit[0] = 1;
    let mut words = vec![vec![0u32; n]];
    let mut values = vec![unit];
    let mut level: Vec<usize> = vec![0];
    let gen_mats: Vec<Matrix> = gens
        .iter()
        .map(|g| mult_matrix_from(left, field, g))
        .collect();
    while !level.is_empty() && words.len() < d {
        let mut next = Vec::new();
        for &w in &level {
            for (i, gm) in gen_mats.iter().enumerate() {
                let mut e = words[w].clone();
                e[i] += 1;
                if words.contains(&e) {
                    continue;
                }
                let v = gm.mul_vec(&values[w]);
                let mut cols = values.clone();
                cols.push(v.clone());
                if Matrix::from_columns(p, d, &cols).rank() == cols.len() {
                    words.push(e);
                    values.push(v);
                    next.push(words.len() - 1);
                }
            }
        }
        level = next;
    }
    if words.len() != d {
        return None;
    }
    let w = Matrix::from_columns(p, d, &values);
    let inv = w.inverse()?;
    Some((words, inv))
}

impl AlgebraRep {
    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Total k-dimension `D`.
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn num_gens(&self) -> usize {
        self.generators.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generator_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn generator(&self, i: usize) -> &[u32] {
        &self.generators[i]
    }

    pub fn grading(&self) -> Option<&[u32]> {
        self.grading.as_deref()
    }

    pub fn unit(&self) -> Vec<u32> {
        let mut e = vec![0u32; self.dim()];
        e[0] = 1;
        e
    }

    pub fn basis_elem(&self, i: usize) -> Vec<u32> {
        let mut e = vec![0u32; self.dim()];
        e[i] = 1;
        e
    }

    /// Coefficient vector of `b_i b_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[u32] {
        let d = self.dim();
        &self.table[(i * d + j) * d..(i * d + j + 1) * d]
    }

    /// Matrix of left multiplication by the basis element `b_i`.
    pub fn left_mult(&self, i: usize) -> &Matrix {
        &self.left_mult[i]
    }

    /// Matrix of multiplication by an arbitrary element.
    pub fn mult_matrix(&self, a: &[u32]) -> Matrix {
        mult_matrix_from(&self.left_mult, &self.field, a)
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let d = self.dim();
        let f = self.field;
        let mut out = vec![0u32; d];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                let c = f.mul(ai, bj);
                for (k, &t) in self.basis_product(i, j).iter().enumerate() {
                    if t != 0 {
                        out[k] = f.mul_add(out[k], c, t);
                    }
                }
            }
        }
        out
    }

    /// Whether `a` lies in the maximal ideal.
    pub fn in_max_ideal(&self, a: &[u32]) -> bool {
        a[0] == 0
    }

    pub fn is_zero_elem(a: &[u32]) -> bool {
        a.iter().all(|&v| v == 0)
    }

    /// Exponent vectors of the word basis.
    pub fn words(&self) -> &[Vec<u32>] {
        &self.words
    }

    /// Column `i`: coordinates of the basis element `b_i` in the word basis.
    pub fn basis_in_words(&self) -> &Matrix {
        &self.basis_in_words
    }

    pub fn socle(&self) -> &Subspace {
        &self.socle
    }

    pub fn classify(&self) -> Classification {
        let socle_dim = self.socle.dim();
        Classification {
            socle_dim,
            is_gorenstein: socle_dim == 1,
            is_field: self.dim() == 1,
            is_monomial_ci: self.monomial_ci,
            declared_ci: self.declared_ci,
        }
    }

    pub fn is_gorenstein(&self) -> bool {
        self.socle.dim() == 1
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    /// Full structure-constant form of this algebra.
    pub fn to_structure_constants(&self) -> RingSpec {
        let d = self.dim();
        let table = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| self.basis_product(i, j).iter().map(|&v| v as i64).collect())
                    .collect()
            })
            .collect();
        let generators = self
            .generators
            .iter()
            .map(|g| {
                let idx = g.iter().position(|&v| v == 1).unwrap_or(0);
                self.labels[idx].clone()
            })
            .collect();
        RingSpec {
            p: self.p(),
            kind: RingKind::StructureConstants {
                labels: self.labels.clone(),
                generators,
                table,
                grading: self.grading.clone(),
                ci: if self.monomial_ci {
                    Some(true)
                } else {
                    self.declared_ci
                },
            },
        }
    }

    /// Element rendered against the basis labels, e.g. `x + 2*y`.
    pub fn format_elem(&self, a: &[u32]) -> String {
        let terms: Vec<String> = a
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (c, self.labels[i].as_str()) {
                (c, "1") => c.to_string(),
                (1, l) => l.to_string(),
                (c, l) => format!("{c}*{l}"),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

/// Builds an algebra from either kind of specification.
pub fn build(spec: &RingSpec) -> Result<Algebra> {
    match spec.kind {
        RingKind::MonomialQuotient { .. } => build_monomial_quotient(spec),
        RingKind::StructureConstants { .. } => build_from_structure_constants(spec),
    }
}

pub fn socle_and_classify(a: &AlgebraRep) -> Classification {
    a.classify()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(p: u32, vars: &[&str], ideal: &[&str]) -> RingSpec {
        RingSpec {
            p,
            kind: RingKind::MonomialQuotient {
                variables: vars.iter().map(|s| s.to_string()).collect(),
                ideal: ideal.iter().map(|s| s.to_string()).collect(),
            },
        }
    }

    #[test]
    fn r1_basis_and_socle() {
        let a = build_monomial_quotient(&mono(5, &["x", "y"], &["x^2", "x*y", "y^2"])).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.labels(), &["1", "x", "y"]);
        let c = a.classify();
        assert_eq!(c.socle_dim, 2);
        assert!(!c.is_gorenstein);
        assert!(!c.is_monomial_ci);
    }

    #[test]
    fn dual_numbers_are_gorenstein_ci() {
        let a = build_monomial_quotient(&mono(5, &["x"], &["x^2"])).unwrap();
        assert_eq!(a.dim(), 2);
        let c = a.classify();
        assert!(c.is_gorenstein && c.is_monomial_ci);
        assert_eq!(a.socle().basis_vector(0), vec![0, 1]);
    }

    #[test]
    fn the_field() {
        let a = build_monomial_quotient(&mono(2, &[], &[])).unwrap();
        assert_eq!(a.dim(), 1);
        let c = a.classify();
        assert!(c.is_field && c.is_gorenstein);
        assert_eq!(c.socle_dim, 1);
    }

    #[test]
    fn complete_intersection_socle() {
        let a = build_monomial_quotient(&mono(5, &["x", "y"], &["x^2", "y^2"])).unwrap();
        let c = a.classify();
        assert_eq!(c.socle_dim, 1);
        assert!(c.is_gorenstein && c.is_monomial_ci);
        let xy = a.labels().iter().position(|l| l == "x*y").unwrap();
        assert_eq!(a.socle().basis_vector(0), a.basis_elem(xy));
    }

    #[test]
    fn truncated_polynomial_rings_are_gorenstein() {
        for e in 2..=9 {
            let a = build_monomial_quotient(&mono(5, &["x"], &[&format!("x^{e}")])).unwrap();
            assert_eq!(a.dim(), e);
            assert!(a.is_gorenstein());
        }
    }

    #[test]
    fn missing_pure_power_names_variable() {
        let err = build_monomial_quotient(&mono(5, &["x", "y"], &["x^2", "x*y"])).unwrap_err();
        assert!(
            matches!(err, Error::InfiniteDimensional(ref v) if v == "y"),
            "{err}"
        );
    }

    #[test]
    fn redundant_generators_are_minimized() {
        let a = build_monomial_quotient(&mono(3, &["x", "y"], &["x^2", "x^3", "y^2", "x^2*y"]))
            .unwrap();
        let RingKind::MonomialQuotient { ideal, .. } = &a.spec().kind else {
            unreachable!()
        };
        assert_eq!(ideal, &["x^2", "y^2"]);
        assert!(a.classify().is_monomial_ci);
    }

    fn dual_numbers_table() -> RingSpec {
        RingSpec {
            p: 5,
            kind: RingKind::StructureConstants {
                labels: vec!["1".into(), "x".into()],
                generators: vec!["x".into()],
                table: vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 0]]],
                grading: None,
                ci: None,
            },
        }
    }

    #[test]
    fn manual_table_matches_monomial_quotient() {
        let a = build_from_structure_constants(&dual_numbers_table()).unwrap();
        let b = build_monomial_quotient(&mono(5, &["x"], &["x^2"])).unwrap();
        assert_eq!(a.labels(), b.labels());
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(a.basis_product(i, j), b.basis_product(i, j));
            }
        }
    }

    #[test]
    fn noncommutative_table_rejected_with_witness() {
        // basis 1, x, y, z with xy = z, yx = 0
        let mut t = vec![vec![vec![0i64; 4]; 4]; 4];
        for j in 0..4 {
            t[0][j][j] = 1;
            t[j][0][j] = 1;
        }
        t[1][2][3] = 1;
        let spec = RingSpec {
            p: 5,
            kind: RingKind::StructureConstants {
                labels: vec!["1".into(), "x".into(), "y".into(), "z".into()],
                generators: vec!["x".into(), "y".into()],
                table: t,
                grading: None,
                ci: None,
            },
        };
        match build_from_structure_constants(&spec).unwrap_err() {
            Error::Axiom { axiom, witness } => {
                assert_eq!(axiom, "commutativity");
                assert_eq!(witness, vec!["x", "y"]);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn idempotent_in_ideal_is_not_local() {
        let spec = RingSpec {
            p: 5,
            kind: RingKind::StructureConstants {
                labels: vec!["1".into(), "e".into()],
                generators: vec!["e".into()],
                table: vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 1]]],
                grading: None,
                ci: None,
            },
        };
        let err = build_from_structure_constants(&spec).unwrap_err();
        assert!(
            matches!(err, Error::Axiom { ref axiom, .. } if axiom.contains("nilpotent")),
            "{err}"
        );
    }

    #[test]
    fn monomial_export_rebuild_roundtrip() {
        for spec in [
            mono(5, &["x", "y"], &["x^2", "x*y", "y^2"]),
            mono(2, &["x", "y"], &["x^2", "y^3"]),
            mono(5, &["x"], &["x^4"]),
        ] {
            let a = build(&spec).unwrap();
            let again = build(a.spec()).unwrap();
            assert_eq!(*a, *again);
            let sc = build(&a.to_structure_constants()).unwrap();
            assert_eq!(a.labels(), sc.labels());
            assert_eq!(a.classify().socle_dim, sc.classify().socle_dim);
            for i in 0..a.dim() {
                for j in 0..a.dim() {
                    assert_eq!(a.basis_product(i, j), sc.basis_product(i, j));
                }
            }
        }
    }

    #[test]
    fn word_basis_expresses_every_element() {
        let a = build(&mono(5, &["x", "y"], &["x^2", "y^3"])).unwrap();
        // each word evaluates to the basis vector it indexes
        for (i, w) in a.words().iter().enumerate() {
            let mut v = a.unit();
            for (g, &e) in w.iter().enumerate() {
                for _ in 0..e {
                    v = a.mul(a.generator(g), &v);
                }
            }
            assert_eq!(v, a.basis_elem(i));
        }
    }
}
