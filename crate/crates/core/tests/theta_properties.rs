use exclusivity::graph::{complete, cycle, intersection_family, random_graph};
use exclusivity::linalg::{symmetric_eig, Matrix};
use exclusivity::{brute_force_alpha, certify_lower, certify_upper, solve_theta, Graph, SubsetFamilySpec, ThetaConfig};
use proptest::prelude::*;

fn cfg() -> ThetaConfig {
    ThetaConfig::default()
}

/// Odd cycles: `n cos(π/n) / (1 + cos(π/n))`; even cycles: `n / 2`.
fn cycle_theta(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        return n as f64 / 2.0;
    }
    let c = (std::f64::consts::PI / n as f64).cos();
    n as f64 * c / (1.0 + c)
}

/// Edge-transitive regular graphs: `ϑ = −n·λ_min / (d − λ_min)`, and
/// vertex-transitive ones have `ϑ(G)·ϑ(Ḡ) = n`. Values for `(q, s, ϑ(G))`
/// worked out from the Johnson scheme eigenvalues.
const FAMILY_THETA: [(usize, usize, f64); 6] =
    [(2, 1, 2.0), (3, 1, 5.0), (3, 2, 5.0), (4, 1, 70.0 / 3.0), (4, 2, 10.0), (4, 3, 14.0)];

fn spectral_theta(g: &Graph) -> f64 {
    let n = g.n();
    let a = Matrix::from_fn(n, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 });
    let eig = symmetric_eig(&a).unwrap();
    let lmin = eig.values[n - 1];
    let d = g.degree(0) as f64;
    -(n as f64) * lmin / (d - lmin)
}

#[test]
fn cycles_match_closed_form() {
    for n in 3..=15 {
        let t = solve_theta(&cycle(n).unwrap(), &cfg()).unwrap();
        let want = cycle_theta(n);
        assert!(t.lower_bound <= want + 1e-9 && want <= t.upper_bound + 1e-9, "C{n}: {t:?}");
        assert!(t.gap() <= 1e-4);
    }
}

#[test]
fn subset_family_matches_spectral_values() {
    for (q, s, theta) in FAMILY_THETA {
        let g = intersection_family(SubsetFamilySpec::new(q, s).unwrap()).unwrap();
        assert!((spectral_theta(&g) - theta).abs() < 1e-9, "G({q},{s}): {}", spectral_theta(&g));
        let theta_c = g.n() as f64 / theta;
        let t = solve_theta(&g, &cfg()).unwrap();
        let tc = solve_theta(&g.complement(), &cfg()).unwrap();
        assert!(
            t.lower_bound <= theta + 1e-9 && theta <= t.upper_bound + 1e-9,
            "G({q},{s}): {} {}",
            t.lower_bound,
            t.upper_bound
        );
        assert!(tc.lower_bound <= theta_c + 1e-9 && theta_c <= tc.upper_bound + 1e-9, "complement of G({q},{s})");
        let n = g.n() as f64;
        assert!(t.upper_bound * tc.upper_bound >= n - 1e-3);
        assert!(t.lower_bound * tc.lower_bound <= n + 1e-9);
    }
}

#[test]
fn cycle_products_are_near_n() {
    for n in 5..=11 {
        let g = cycle(n).unwrap();
        let t = solve_theta(&g, &cfg()).unwrap();
        let tc = solve_theta(&g.complement(), &cfg()).unwrap();
        let product = t.upper_bound * tc.upper_bound;
        assert!(product >= n as f64 - 1e-3);
        assert!(product <= n as f64 + 1e-2, "C{n}: {product}");
    }
}

fn small_graph() -> impl Strategy<Value = Graph> {
    (2usize..11, 0.0f64..=1.0, any::<u64>()).prop_map(|(n, p, seed)| random_graph(n, p, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sandwich(g in small_graph()) {
        let alpha = brute_force_alpha(&g).unwrap() as f64;
        let loose = solve_theta(&g, &cfg()).unwrap();
        prop_assert!(alpha <= loose.lower_bound + cfg().tolerance);
        // the 1e-6 margin needs a gap target below it
        let tight = ThetaConfig { tolerance: 1e-7, ..cfg() };
        let t = solve_theta(&g, &tight).unwrap();
        prop_assert!(t.converged());
        prop_assert!(alpha <= t.lower_bound + 1e-6);
        prop_assert!(t.lower_bound <= t.upper_bound);
        // ϑ(G) ≤ χ(Ḡ) ≤ n
        prop_assert!(t.upper_bound <= g.n() as f64 + 1e-9);
    }

    #[test]
    fn certificates_reproduce(g in small_graph()) {
        let t = solve_theta(&g, &cfg()).unwrap();
        let lower = certify_lower(&g, &t.primal_matrix).unwrap();
        let upper = certify_upper(&g, &t.dual_edge_values(&g)).unwrap();
        prop_assert!((lower - t.lower_bound).abs() <= 1e-10, "{} {}", lower, t.lower_bound);
        prop_assert!((upper - t.upper_bound).abs() <= 1e-10, "{} {}", upper, t.upper_bound);
    }

    #[test]
    fn adding_an_edge_never_raises_theta(g in small_graph(), a: usize, b: usize) {
        let n = g.n();
        let (u, v) = (a % n, b % n);
        prop_assume!(u != v && !g.has_edge(u, v));
        let before = solve_theta(&g, &cfg()).unwrap();
        let after = solve_theta(&g.with_edge(u, v).unwrap(), &cfg()).unwrap();
        prop_assert!(after.lower_bound <= before.upper_bound + 1e-9);
        prop_assert!(after.upper_bound <= before.upper_bound + cfg().tolerance);
    }

    #[test]
    fn complement_product(g in small_graph()) {
        let t = solve_theta(&g, &cfg()).unwrap();
        let tc = solve_theta(&g.complement(), &cfg()).unwrap();
        prop_assert!(t.upper_bound * tc.upper_bound >= g.n() as f64 - 1e-3);
    }
}

#[test]
fn trivial_graphs_are_exact() {
    for n in 1..6 {
        let t = solve_theta(&complete(n).unwrap(), &cfg()).unwrap();
        assert_eq!((t.lower_bound, t.upper_bound), (1.0, 1.0));
        let e = Graph::new(n, &[]).unwrap();
        let t = solve_theta(&e, &cfg()).unwrap();
        assert_eq!((t.lower_bound, t.upper_bound), (n as f64, n as f64));
    }
}
