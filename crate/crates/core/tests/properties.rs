use homwb::catalog::{random_module, ring, RandomModuleOptions};
use homwb::complex::{ext_to_ring, Resolution};
use homwb::linalg::Matrix;
use homwb::module::{direct_sum, is_isomorphic, residue_field, syzygy, transpose, Module};
use homwb::reducing::{
    search_reducing, verify_witness, Enumeration, Ext1Space, Mode, SearchLimits, Target,
};
use homwb::torsionfree::{pushforward, torsionfree_classify};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RINGS: [&str; 5] = ["R1q5", "R2q5e3", "R3q2a2b3", "R4q2", "R1q2"];

fn sample(ring_idx: usize, seed: u64, max_dim: usize) -> Module {
    let alg = ring(RINGS[ring_idx % RINGS.len()], None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_module(
        &alg,
        &mut rng,
        &RandomModuleOptions {
            max_dim,
            ..Default::default()
        },
    )
}

fn permuted(m: &Module, seed: u64) -> Module {
    let p = m.p();
    let n = m.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let data: Vec<u32> = (0..n * n).map(|_| rng.gen_range(0..p)).collect();
        let c = Matrix::from_vec(p, n, n, data);
        if c.rank() == n {
            return m.change_basis(&c);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn betti_numbers_ignore_the_basis(r in 0usize..5, seed in any::<u64>()) {
        let m = sample(r, seed, 8);
        let n = permuted(&m, seed ^ 1);
        prop_assert_eq!(Resolution::of_module(&m).betti(4), Resolution::of_module(&n).betti(4));
    }

    #[test]
    fn syzygy_is_additive(r in 0usize..5, s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = sample(r, s1, 6);
        let b = sample(r, s2, 6);
        let alg = a.algebra().clone();
        let lhs = syzygy(&direct_sum(&alg, &[a.clone(), b.clone()]));
        let rhs = direct_sum(&alg, &[syzygy(&a), syzygy(&b)]);
        prop_assert_eq!(lhs.dim(), rhs.dim());
        prop_assert!(!is_isomorphic(&lhs, &rhs).is_no());
    }

    #[test]
    fn split_extension_is_the_direct_sum(r in 0usize..5, s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = sample(r, s1, 5);
        let c = sample(r, s2, 5);
        let space = Ext1Space::new(&c, &a);
        let e = space.extension(&vec![0; space.dim()]);
        prop_assert!(e.is_short_exact(&space));
        let sum = direct_sum(a.algebra(), &[a.clone(), c.clone()]);
        prop_assert!(is_isomorphic(&e.middle, &sum).is_yes());
    }

    #[test]
    fn every_extension_is_short_exact(r in 0usize..5, s1 in any::<u64>(), s2 in any::<u64>(), pick in any::<u64>()) {
        let a = sample(r, s1, 5);
        let c = sample(r, s2, 5);
        let space = Ext1Space::new(&c, &a);
        let en = Enumeration::new(space.dim(), a.p(), 1 << 12, 16, pick, false);
        let slot = pick % en.slots();
        let coords = en.get(slot).unwrap();
        let e = space.extension(&coords);
        prop_assert!(e.is_short_exact(&space));
        prop_assert_eq!(space.class_of(&space.representative(&coords)), coords);
    }

    #[test]
    fn pushforward_exactness_matches_transpose_ext(r in 0usize..5, seed in any::<u64>()) {
        let m = sample(r, seed, 8);
        let pf = pushforward(&m, 3).unwrap();
        let direct = ext_to_ring(&transpose(&m), 3).dims;
        for j in 0..3 {
            prop_assert_eq!(pf.exactness[j].exact, direct[j + 1] == 0);
        }
    }

    #[test]
    fn torsionfree_membership_is_downward_closed(r in 0usize..5, seed in any::<u64>()) {
        let m = sample(r, seed, 8);
        let v = torsionfree_classify(&m, 3).unwrap();
        for a in 0..=3 {
            for b in 0..=3 {
                let member = v.ext_module[1..=a].iter().all(|&d| d == 0)
                    && v.ext_transpose[1..=b].iter().all(|&d| d == 0);
                prop_assert_eq!(v.contains(a, b), member);
            }
        }
    }

    #[test]
    fn gorenstein_rings_have_no_ext_to_the_ring(r in 1usize..4, seed in any::<u64>()) {
        let m = sample(r, seed, 8);
        prop_assert!(ext_to_ring(&m, 4).vanishes_through(4));
    }
}

#[test]
fn search_is_deterministic_and_monotone() {
    let alg = ring("R3q5", None).unwrap();
    let k = residue_field(&alg);
    let small = SearchLimits {
        max_steps: 2,
        n_max: 1,
        seed: 11,
        ..Default::default()
    };
    let a = search_reducing(&k, Mode::Ured, Target::Pd, &small)
        .unwrap()
        .witness
        .unwrap();
    let b = search_reducing(&k, Mode::Ured, Target::Pd, &small)
        .unwrap()
        .witness
        .unwrap();
    assert_eq!(a.length(), b.length());
    for (x, y) in a.steps.iter().zip(&b.steps) {
        assert_eq!((x.n, x.a, x.b, &x.coords), (y.n, y.a, y.b, &y.coords));
        assert!(x.middle.same_as(&y.middle));
    }
    verify_witness(&a).unwrap();
    let big = SearchLimits {
        max_steps: 3,
        n_max: 2,
        seed: 11,
        ..Default::default()
    };
    let c = search_reducing(&k, Mode::Ured, Target::Pd, &big)
        .unwrap()
        .witness
        .unwrap();
    assert!(c.length() <= a.length());
}

/// Shapes skipped by the dimension filter never contain a free middle term.
#[test]
fn dimension_filter_is_sound_on_binary_r1() {
    let alg = ring("R1q2", None).unwrap();
    let k = residue_field(&alg);
    let d = alg.dim();
    for n in 0..=2 {
        let c = homwb::module::syzygy_power(&k, n);
        if (k.dim() + c.dim()).is_multiple_of(d) {
            continue;
        }
        let space = Ext1Space::new(&c, &k);
        let en = Enumeration::new(space.dim(), 2, 1 << 16, 0, 0, false);
        assert!(en.exhaustive);
        for i in 0..en.slots() {
            let e = space.extension(&en.get(i).unwrap());
            assert!(e.middle.num_generators() * d != e.middle.dim());
        }
    }
}
