mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use qwm_core::analysis::{occupancy_rate, position_marginal, variance};
use qwm_core::coin::CoinMatrix;
use qwm_core::coin_shift::{gc1, incoming_pairs, validate_coin_shift, CoinShift};
use qwm_core::graph::{no_wrap_window, RegularDigraph};
use qwm_core::partition::{random_dicycle_factorization, random_partition, Partition, PartitionDocument};
use qwm_core::walk::{build_shift_operator, ShiftOp, Walk};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `e^{i phi} [[a, b], [-conj b, conj a]]` with `|a|^2 + |b|^2 = 1`.
fn su2(theta: f64, alpha: f64, beta: f64, phi: f64) -> CoinMatrix {
    let a = Complex64::from_polar(theta.cos(), alpha);
    let b = Complex64::from_polar(theta.sin(), beta);
    let g = Complex64::from_polar(1.0, phi);
    CoinMatrix::new(2, vec![g * a, g * b, -g * b.conj(), g * a.conj()]).unwrap()
}

/// A uniformly random valid coin shift: each target hands out the coins to
/// its incoming pairs in a random order.
fn random_coin_shift(p: &Partition, seed: u64) -> CoinShift {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = vec![0; p.n_vertices() * 2];
    for pairs in incoming_pairs(p) {
        let mut coins = [0usize, 1];
        coins.shuffle(&mut rng);
        for (&(v, c), &coin) in pairs.iter().zip(&coins) {
            table[v * 2 + c] = coin;
        }
    }
    CoinShift::from_table(2, table).unwrap()
}

fn random_host_partition(seed: u64, dicycle: bool, window: usize) -> (qwm_core::graph::LineDigraph, Partition) {
    let host = line_host(window, 1);
    let p =
        if dicycle { random_dicycle_factorization(host.graph(), seed) } else { random_partition(host.graph(), seed) };
    (host, p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_valid_coin_shifts_give_permutations(seed in any::<u64>(), dicycle in any::<bool>(), half in 2usize..20) {
        let (_, p) = random_host_partition(seed, dicycle, 2 * half + 1);
        let gc = random_coin_shift(&p, seed ^ 0x5eed);
        prop_assert!(validate_coin_shift(&p, &gc).valid);
        let op = build_shift_operator(&p, &gc).unwrap();
        prop_assert!(ShiftOp::from_permutation(2, op.forward().to_vec()).is_some());
        let back = op.inverse();
        for i in 0..op.len() {
            prop_assert_eq!(back.forward()[op.forward()[i]], i);
        }
    }

    #[test]
    fn evolution_preserves_norm(
        seed in any::<u64>(),
        dicycle in any::<bool>(),
        theta in 0.0f64..std::f64::consts::FRAC_PI_2,
        alpha in -3.2f64..3.2,
        beta in -3.2f64..3.2,
        phi in -3.2f64..3.2,
    ) {
        let t_max = 40;
        let (host, p) = random_host_partition(seed, dicycle, no_wrap_window(t_max + 3, 1));
        let gc = random_coin_shift(&p, seed.rotate_left(7));
        let walk = Walk::new(&p, &gc, su2(theta, alpha, beta, phi)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let init = engine_state(&host, &random_paths(&mut rng, 1, 3, 5));
        let mut worst = 0.0f64;
        walk.evolve_with(&init, t_max, |s| worst = worst.max((s.norm_sqr() - 1.0).abs())).unwrap();
        prop_assert!(worst < 1e-12);
    }

    #[test]
    fn parity_and_no_wrap(seed in any::<u64>(), dicycle in any::<bool>(), t_max in 1usize..30) {
        let window = no_wrap_window(t_max, 1);
        let (host, p) = random_host_partition(seed, dicycle, window);
        let gc = gc1(&host, &p).unwrap();
        let init = engine_state(&host, &[(vec![-1, 0], 0, Complex64::new(1.0, 0.0))]);
        let walk = Walk::new(&p, &gc, CoinMatrix::hadamard()).unwrap();
        let edge = (window as i64 - 1) / 2;
        walk.evolve_with(&init, t_max, |s| {
            let d = position_marginal(host.graph(), s);
            for (x, _) in d.iter() {
                assert_eq!((x + s.time() as i64).rem_euclid(2), 0);
                assert!(x.abs() < edge);
            }
            assert!((d.total() - 1.0).abs() < 1e-12);
            assert!(variance(&d) >= -1e-9);
            let occ = occupancy_rate(&d, 2 * s.time() + 1).unwrap();
            assert!((0.0..=1.0).contains(&occ));
        }).unwrap();
    }

    #[test]
    fn coin_shift_triples_round_trip(seed in any::<u64>()) {
        let (_, p) = random_host_partition(seed, false, 11);
        let gc = random_coin_shift(&p, seed);
        let back = CoinShift::from_triples(p.n_vertices(), 2, &gc.to_triples()).unwrap();
        prop_assert_eq!(back, gc);
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>(), half in 2usize..10) {
        let (host, p) = random_host_partition(seed, seed % 2 == 0, 2 * half + 1);
        let g = host.graph();
        let doc: PartitionDocument = p.to_document("random", Some(seed));
        prop_assert_eq!(Partition::from_document(g, &doc).unwrap(), p);
        prop_assert_eq!(&RegularDigraph::from_document(&g.to_document()).unwrap(), g);
    }
}
