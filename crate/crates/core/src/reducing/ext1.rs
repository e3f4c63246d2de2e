//! `Ext¹(C, A)` as a quotient of `Hom(ΩC, A)`, enumeration of its elements,
//! and the middle terms of the extensions they classify.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::ModuleComplex;
use crate::linalg::{Matrix, Quotient};
use crate::module::{
    direct_sum, projective_cover_and_syzygy, CoverAndSyzygy, HomSpace, Module, ModuleMap,
};

/// `Ext¹(C, A) = coker(Hom(P₀, A) → Hom(ΩC, A))` for the projective cover
/// `P₀ → C`.
#[derive(Clone, Debug)]
pub struct Ext1Space {
    pub source: Module,
    pub target: Module,
    pub cover: CoverAndSyzygy,
    pub hom: HomSpace,
    /// Hom coordinates modulo maps that extend to `P₀`.
    quotient: Quotient,
}

impl Ext1Space {
    pub fn new(c: &Module, a: &Module) -> Self {
        let cover = projective_cover_and_syzygy(c);
        let hom = HomSpace::new(&cover.syzygy, a);
        let p = a.p();
        let g = cover.cover.source.dim() / c.algebra().dim().max(1);
        let d = c.algebra().dim();
        let da = a.dim();
        let incl = &cover.inclusion.mat;
        let acts = a.basis_actions();
        let mut restricted = Vec::new();
        for j in 0..g {
            for t in 0..da {
                // The map P₀ → A sending generator j to basis vector t.
                let mut f = Matrix::zeros(p, da, g * d);
                for (b, act) in acts.iter().enumerate() {
                    for r in 0..da {
                        f.set(r, j * d + b, act.get(r, t));
                    }
                }
                let res = ModuleMap::unchecked(&cover.syzygy, a, f.mul(incl));
                restricted.push(hom.space.coords(&hom.tuple_of(&res)));
            }
        }
        let w = Matrix::from_columns(p, hom.dim(), &restricted);
        let quotient = Quotient::new(&w);
        Ext1Space {
            source: c.clone(),
            target: a.clone(),
            cover,
            hom,
            quotient,
        }
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// Representative `ΩC → A` of the element with the given coordinates.
    pub fn representative(&self, coords: &[u32]) -> ModuleMap {
        let mut h = vec![0u32; self.hom.dim()];
        for (&pos, &c) in self.quotient.complement().iter().zip(coords) {
            h[pos] = c;
        }
        let tuple = self.hom.space.basis().mul_vec(&h);
        self.hom.materialize(&tuple)
    }

    /// Coordinates of the class of a map `ΩC → A`.
    pub fn class_of(&self, f: &ModuleMap) -> Vec<u32> {
        let h = self.hom.space.coords(&self.hom.tuple_of(f));
        self.quotient.project(&h)
    }

    /// Middle term of the extension with the given coordinates.
    pub fn extension(&self, coords: &[u32]) -> Extension {
        middle_term(self, &self.representative(coords))
    }
}

/// A short exact sequence `0 → A → N → C → 0`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub middle: Module,
    /// `A → N`.
    pub inclusion: Matrix,
    /// `N → C`.
    pub projection: Matrix,
}

impl Extension {
    /// The sequence with `C` at position 0 and `A` at position 2.
    pub fn sequence(&self, space: &Ext1Space) -> ModuleComplex {
        ModuleComplex::new(
            0,
            vec![
                space.source.clone(),
                self.middle.clone(),
                space.target.clone(),
            ],
            vec![self.projection.clone(), self.inclusion.clone()],
        )
        .expect("extension maps are Λ-linear")
    }

    pub fn is_short_exact(&self, space: &Ext1Space) -> bool {
        self.sequence(space).is_exact_at(&[0, 1, 2])
    }
}

/// Pushout of `0 → ΩC → P₀ → C → 0` along `rep`:
/// `N = (A ⊕ P₀) / {(rep ω, −ω)}`.
pub fn middle_term(space: &Ext1Space, rep: &ModuleMap) -> Extension {
    let a = &space.target;
    let p0 = &space.cover.cover.source;
    let p = a.p();
    let alg = a.algebra();
    let sum = direct_sum(alg, &[a.clone(), p0.clone()]);
    let neg_incl = space.cover.inclusion.mat.scale(p - 1);
    let w = Matrix::vstack(&[&rep.mat, &neg_incl]);
    let (n, proj) = sum.quotient(&w);
    let da = a.dim();
    let inclusion = proj.select_cols(&(0..da).collect::<Vec<_>>());
    // N → C induced by (0, cover) through the section of the projection.
    let sect = Quotient::new(sum.module_span(&w).basis()).section_matrix();
    let zero_cover = Matrix::hstack(&[
        &Matrix::zeros(p, space.source.dim(), da),
        &space.cover.cover.mat,
    ]);
    let projection = zero_cover.mul(&sect);
    Extension {
        middle: n,
        inclusion,
        projection,
    }
}

/// Elements of `k^dim` to range over, in a fixed order.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub dim: usize,
    pub p: u32,
    /// Every element (up to nonzero scalars, when reduced) is listed.
    pub exhaustive: bool,
    /// Only elements whose first nonzero coordinate is 1 are listed.
    pub scalar_reduced: bool,
    items: Items,
}

#[derive(Clone, Debug)]
enum Items {
    All { total: u64 },
    Listed(Vec<Vec<u32>>),
}

impl Enumeration {
    /// All `p^dim` elements in lexicographic order if that count is at most
    /// `cap`; otherwise basis vectors, pairwise sums and `samples` seeded
    /// random elements.
    pub fn new(
        dim: usize,
        p: u32,
        cap: u64,
        samples: usize,
        seed: u64,
        scalar_reduce: bool,
    ) -> Self {
        let total = (p as u64).checked_pow(dim as u32).filter(|&t| t <= cap);
        let items = match total {
            Some(total) => Items::All { total },
            None => {
                let mut list: Vec<Vec<u32>> = vec![vec![0; dim]];
                for i in 0..dim {
                    let mut v = vec![0; dim];
                    v[i] = 1;
                    list.push(v);
                }
                for i in 0..dim {
                    for j in i + 1..dim {
                        let mut v = vec![0; dim];
                        v[i] = 1;
                        v[j] = 1;
                        list.push(v);
                    }
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..samples {
                    let mut v: Vec<u32> = (0..dim).map(|_| rng.gen_range(0..p)).collect();
                    if scalar_reduce {
                        normalize(&mut v, p);
                    }
                    list.push(v);
                }
                let mut seen = std::collections::HashSet::new();
                list.retain(|v| seen.insert(v.clone()));
                Items::Listed(list)
            }
        };
        Enumeration {
            dim,
            p,
            exhaustive: total.is_some(),
            scalar_reduced: scalar_reduce,
            items,
        }
    }

    /// Number of raw slots; some may be skipped by [`Enumeration::get`].
    pub fn slots(&self) -> u64 {
        match &self.items {
            Items::All { total } => *total,
            Items::Listed(l) => l.len() as u64,
        }
    }

    /// The element in slot `i`, or `None` if it is a nontrivial scalar
    /// multiple of an earlier one.
    pub fn get(&self, i: u64) -> Option<Vec<u32>> {
        match &self.items {
            Items::All { .. } => {
                let mut v = vec![0u32; self.dim];
                let mut x = i;
                for slot in v.iter_mut().rev() {
                    *slot = (x % self.p as u64) as u32;
                    x /= self.p as u64;
                }
                if self.scalar_reduced && v.iter().find(|&&c| c != 0).is_some_and(|&c| c != 1) {
                    return None;
                }
                Some(v)
            }
            Items::Listed(l) => Some(l[i as usize].clone()),
        }
    }
}

fn normalize(v: &mut [u32], p: u32) {
    if let Some(&lead) = v.iter().find(|&&c| c != 0) {
        let f = crate::linalg::Field::new(p);
        let inv = f.inv(lead);
        for c in v.iter_mut() {
            *c = f.mul(*c, inv);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::ring;
    use crate::module::{free_module, is_isomorphic, residue_field};

    #[test]
    fn ext1_dimensions() {
        let r2 = ring("R2q5", None).unwrap();
        let k = residue_field(&r2);
        assert_eq!(Ext1Space::new(&free_module(&r2, 1), &k).dim(), 0);
        assert_eq!(Ext1Space::new(&k, &k).dim(), 1);
        let r1 = ring("R1q5", None).unwrap();
        let k1 = residue_field(&r1);
        assert_eq!(Ext1Space::new(&k1, &k1).dim(), 2);
        let k2 = direct_sum(&r1, &[k1.clone(), k1.clone()]);
        assert_eq!(Ext1Space::new(&k1, &k2).dim(), 4);
    }

    #[test]
    fn split_and_nonsplit_middles() {
        let r1 = ring("R1q5", None).unwrap();
        let k = residue_field(&r1);
        let s = Ext1Space::new(&k, &k);
        let e = s.extension(&[0, 0]);
        assert!(e.is_short_exact(&s));
        let kk = direct_sum(&r1, &[k.clone(), k.clone()]);
        assert!(is_isomorphic(&e.middle, &kk).is_yes());

        let r2 = ring("R2q5", None).unwrap();
        let k = residue_field(&r2);
        let s = Ext1Space::new(&k, &k);
        let e = s.extension(&[1]);
        assert!(e.is_short_exact(&s));
        assert_eq!(e.middle.dim(), 2);
        assert_eq!(e.middle.action(0).rank(), 1);
        assert!(is_isomorphic(&e.middle, &free_module(&r2, 1)).is_yes());
    }

    #[test]
    fn class_of_representative_roundtrips() {
        let r1 = ring("R1q5", None).unwrap();
        let k = residue_field(&r1);
        let s = Ext1Space::new(&k, &direct_sum(&r1, &[k.clone(), k.clone()]));
        for coords in [vec![1, 0, 0, 0], vec![0, 2, 3, 1], vec![4, 4, 0, 1]] {
            assert_eq!(s.class_of(&s.representative(&coords)), coords);
        }
    }

    #[test]
    fn enumeration_orders() {
        let e = Enumeration::new(2, 3, 100, 0, 0, false);
        assert!(e.exhaustive);
        let all: Vec<_> = (0..e.slots()).filter_map(|i| e.get(i)).collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[3], vec![1, 0]);
        let r = Enumeration::new(2, 3, 100, 0, 0, true);
        let reps: Vec<_> = (0..r.slots()).filter_map(|i| r.get(i)).collect();
        assert_eq!(
            reps,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 2]]
        );
        let s = Enumeration::new(10, 5, 1000, 8, 1, true);
        assert!(!s.exhaustive);
        assert!(s.slots() >= 1 + 10 + 45);
    }
}
