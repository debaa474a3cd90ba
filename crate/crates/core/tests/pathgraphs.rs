use std::collections::BTreeSet;

use num_complex::Complex64;
use rmt_core::ensembles::AtomVariable;
use rmt_core::isotropic::{coordinate_vector, uniform_vector};
use rmt_core::par::Execution;
use rmt_core::pathgraphs::{
    class_table, enumerate_canonical, exact_moment_bruteforce, exact_moment_by_classes, expectation_contribution,
    falling_factorial, unique_half_height_graph, MomentMethod, PathGraph,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn skewed() -> AtomVariable {
    // mean zero, nonzero third moment
    AtomVariable::discrete(vec![-1.0, 2.0], vec![2.0 / 3.0, 1.0 / 3.0]).unwrap()
}

#[test]
fn classes_agree_with_brute_force_on_coordinate_vectors() {
    let mut worst = 0.0f64;
    for m in 1..=3 {
        for k in 0..=5 {
            for n in 1..=6 {
                let e1 = coordinate_vector(m * n, 0);
                let atoms = vec![AtomVariable::Rademacher; m];
                let bf = exact_moment_bruteforce(&e1, &e1, &atoms, n, m, k).unwrap();
                let cl = exact_moment_by_classes(&e1, &e1, &atoms, n, m, k, Execution::Parallel).unwrap();
                assert_eq!(cl.method, MomentMethod::Classes);
                worst = worst.max((bf - cl.value).norm());
            }
        }
    }
    assert!(worst <= 1e-12, "{worst}");
}

#[test]
fn classes_agree_with_brute_force_on_other_shapes_and_atoms() {
    let (m, n) = (2, 4);
    let atoms = [skewed(), AtomVariable::RealGaussian];
    let uniform = uniform_vector(m * n);
    let mut mixed = coordinate_vector(m * n, 2);
    mixed[2] = c(0.0, 1.0);
    for v in [n, n + 1].map(|i| coordinate_vector(m * n, i)) {
        for k in 1..=4 {
            for (u, w) in [(&uniform, &uniform), (&mixed, &uniform), (&uniform, &v), (&mixed, &v)] {
                let bf = exact_moment_bruteforce(u, w, &atoms, n, m, k).unwrap();
                let cl = exact_moment_by_classes(u, w, &atoms, n, m, k, Execution::Sequential).unwrap();
                assert_eq!(cl.method, MomentMethod::Classes);
                assert!(
                    (bf - cl.value).norm() <= 1e-12 * (1.0 + bf.norm()),
                    "k {k}: {bf} vs {}",
                    cl.value
                );
            }
        }
    }
}

#[test]
fn general_vectors_fall_back_to_brute_force() {
    let mut u = uniform_vector(3);
    u[0] = c(0.2, 0.0);
    let r = exact_moment_by_classes(&u, &u, &[AtomVariable::Rademacher], 3, 1, 2, Execution::Sequential).unwrap();
    assert_eq!(r.method, MomentMethod::BruteForceFallback);
    let bf = exact_moment_bruteforce(&u, &u, &[AtomVariable::Rademacher], 3, 1, 2).unwrap();
    assert_eq!(r.value, bf);
}

#[test]
fn vanishing_moments() {
    for m in 2..=3 {
        for k in 0..m {
            let e1 = coordinate_vector(m * 3, 0);
            let atoms = vec![AtomVariable::Rademacher; m];
            // k = 0 is the inner product itself
            let want = if k == 0 { 1.0 } else { 0.0 };
            assert_eq!(
                exact_moment_bruteforce(&e1, &e1, &atoms, 3, m, k).unwrap(),
                c(want, 0.0)
            );
        }
    }
    for k in [1, 3, 5] {
        let e1 = coordinate_vector(4, 0);
        assert_eq!(
            exact_moment_bruteforce(&e1, &e1, &[AtomVariable::Rademacher], 4, 1, k).unwrap(),
            c(0.0, 0.0)
        );
    }
}

#[test]
fn classes_above_half_height_contribute_nothing() {
    for m in 1..=3 {
        for k in 1..=6 {
            let atoms = vec![skewed(); m];
            for row in class_table(m, k, 1, &atoms).unwrap() {
                if 2 * row.height > k {
                    assert_eq!(row.contribution, c(0.0, 0.0), "{}", row.representative);
                }
            }
        }
    }
}

#[test]
fn mismatched_colors_kill_the_half_height_graph() {
    for (m, k) in [(2, 2), (2, 6), (4, 4)] {
        let g = unique_half_height_graph(m, k).unwrap();
        let atoms = vec![AtomVariable::Rademacher; m];
        assert_eq!(
            expectation_contribution(&g, &atoms).unwrap(),
            c(0.0, 0.0),
            "m {m} k {k}"
        );
    }
    // matched colors survive
    let g = unique_half_height_graph(1, 4).unwrap();
    assert_eq!(
        expectation_contribution(&g, &[AtomVariable::Rademacher]).unwrap(),
        c(1.0, 0.0)
    );
}

#[test]
fn half_height_uniqueness() {
    let expect: [&[usize]; 3] = [&[1, 1, 1], &[1, 2, 1, 2, 1], &[1, 2, 3, 1, 2, 3, 1]];
    for (k, want) in [2, 4, 6].into_iter().zip(expect) {
        assert_eq!(unique_half_height_graph(1, k).unwrap().heights(), want);
    }
}

#[test]
fn worked_expectations() {
    let four = vec![AtomVariable::Rademacher; 4];
    let g = PathGraph::new(4, 1, vec![1, 2, 1, 2, 1, 2, 1, 2, 1], 2).unwrap();
    assert_eq!(expectation_contribution(&g, &four).unwrap(), c(1.0, 0.0));

    let g = PathGraph::new(1, 1, vec![1, 2, 1, 2, 1, 2, 1, 2], 2).unwrap();
    assert_eq!(
        expectation_contribution(&g, &[AtomVariable::Rademacher]).unwrap(),
        c(0.0, 0.0)
    );
    let s = skewed();
    let want = s.moment(4, 0).unwrap() * s.moment(3, 0).unwrap();
    assert!(want.norm() > 0.0);
    assert!((expectation_contribution(&g, &[s]).unwrap() - want).norm() <= 1e-14);

    let lone = PathGraph::new(1, 1, vec![1, 2, 3], 3).unwrap();
    assert_eq!(
        expectation_contribution(&lone, &[AtomVariable::RealGaussian]).unwrap(),
        c(0.0, 0.0)
    );
}

#[test]
fn classes_partition_all_height_sequences() {
    for n in 1..=4usize {
        for k in 0..=4usize {
            let classes = enumerate_canonical(1, k, 1).unwrap();
            let reps: BTreeSet<Vec<usize>> = classes.iter().map(|c| c.representative().heights().to_vec()).collect();
            let mut seen = BTreeSet::new();
            let total = n.pow(k as u32 + 1);
            for code in 0..total {
                let mut rest = code;
                let hs: Vec<usize> = (0..=k)
                    .map(|_| {
                        let h = rest % n + 1;
                        rest /= n;
                        h
                    })
                    .collect();
                let g = PathGraph::new(1, 1, hs, n).unwrap();
                let canon = g.canonicalize();
                assert!(canon.is_canonical() && g.is_equivalent(&canon));
                assert_eq!(canon.canonicalize(), canon);
                assert!(reps.contains(canon.heights()));
                seen.insert(canon.heights().to_vec());
            }
            let sizes: f64 = classes.iter().map(|c| c.class_size(n)).sum();
            assert_eq!(sizes, total as f64, "n {n} k {k}");
            let reachable = classes.iter().filter(|c| c.height() <= n).count();
            assert_eq!(seen.len(), reachable);
        }
    }
    assert_eq!(falling_factorial(5, 2), 20.0);
}

#[test]
fn enumeration_is_lexicographic_and_color_independent() {
    let a = enumerate_canonical(3, 4, 2).unwrap();
    let b = enumerate_canonical(1, 4, 1).unwrap();
    assert_eq!(a.len(), b.len());
    let heights: Vec<Vec<usize>> = a.iter().map(|c| c.representative().heights().to_vec()).collect();
    let mut sorted = heights.clone();
    sorted.sort();
    assert_eq!(heights, sorted);
    assert!(a.iter().all(|c| c.representative().start_color() == 2));
}
