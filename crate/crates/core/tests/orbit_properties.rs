use proptest::prelude::*;

use orbitsieve_core::orbit::{orbit_bfs, GroupPresentation, OrbitSet};
use orbitsieve_core::presets;

fn run_with_threads(threads: usize, f: impl FnOnce() -> OrbitSet + Send) -> OrbitSet {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

fn base_vectors() -> impl Strategy<Value = Vec<i64>> {
    prop_oneof![
        Just(vec![3, 4, 5]),
        Just(vec![1, 0, 1]),
        Just(vec![5, 12, 13]),
        Just(vec![1, 1, 0]),
        Just(vec![0, 0, 1]),
        Just(vec![2, 1, 1]),
        (-5i64..=5, -5i64..=5, -5i64..=5)
            .prop_filter("nonzero", |v| *v != (0, 0, 0))
            .prop_map(|(a, b, c)| vec![a, b, c]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn orbit_preserves_the_form(w0 in base_vectors(), bound in 10.0f64..400.0) {
        let g = presets::pythagorean_full();
        let orbit = orbit_bfs(&g, &w0, bound, 200).unwrap();
        let q = g.form().eval(&w0);
        for p in &orbit.points {
            prop_assert_eq!(g.form().eval(p), q);
        }
        prop_assert!(orbit.points.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn result_ignores_generator_order_and_threads(w0 in base_vectors(), seed in 0usize..6) {
        let g = presets::pythagorean_full();
        let mut gens = g.integer_generators().to_vec();
        let n = gens.len();
        gens.rotate_left(seed % n);
        if seed % 2 == 1 {
            gens.reverse();
        }
        let h = GroupPresentation::from_integer(g.form().clone(), &gens, "shuffled").unwrap();
        let a = run_with_threads(1, || orbit_bfs(&g, &w0, 200.0, 60).unwrap());
        let b = run_with_threads(3, || orbit_bfs(&h, &w0, 200.0, 60).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn saturation_radius_is_sound(w0 in base_vectors(), depth in 1usize..8) {
        let g = presets::pythagorean_thin();
        let a = orbit_bfs(&g, &w0, 2000.0, depth).unwrap();
        let b = orbit_bfs(&g, &w0, 2000.0, depth + 2).unwrap();
        let r2 = a.complete_below * a.complete_below;
        let below = |s: &OrbitSet| -> Vec<Vec<i64>> {
            s.points.iter().filter(|p| p.iter().map(|x| (x * x) as f64).sum::<f64>() <= r2).cloned().collect()
        };
        prop_assert_eq!(below(&a), below(&b));
    }

    #[test]
    fn subgroup_orbit_is_contained(w0 in base_vectors(), depth in 0usize..10) {
        let full = presets::pythagorean_full();
        let mut gens = full.integer_generators().to_vec();
        gens.extend(presets::pythagorean_thin().integer_generators().iter().cloned());
        let big = GroupPresentation::from_integer(full.form().clone(), &gens, "big").unwrap();
        let small = presets::pythagorean_thin();
        let a = orbit_bfs(&small, &w0, 500.0, depth).unwrap();
        let b = orbit_bfs(&big, &w0, 500.0, depth).unwrap();
        for p in &a.points {
            prop_assert!(b.contains(p));
        }
    }

    #[test]
    fn depth_zero_is_the_base(w0 in base_vectors()) {
        let orbit = orbit_bfs(&presets::pythagorean_full(), &w0, 1e6, 0).unwrap();
        prop_assert_eq!(orbit.points, vec![w0]);
    }
}

#[test]
fn trivial_group_orbit_is_a_point() {
    let g = presets::trivial(presets::pythagorean_full().form().clone());
    let orbit = orbit_bfs(&g, &[3, 4, 5], 1e4, 100).unwrap();
    assert_eq!(orbit.points, vec![vec![3, 4, 5]]);
}
