mod common;

use proptest::prelude::*;
use spectral_sketch::simplex::{solve, LinearProgram};
use spectral_sketch::spectrum::spectrum_distribution;
use spectral_sketch::{
    average_distributions, discretize_spectrum, emd_w1, exact_spectrum, sorted_vector_distance, union_spectrum,
    walk_to_laplacian, SortedSpectrum, SpectralDistribution,
};

fn distribution(lo: f64, hi: f64, max_len: usize) -> impl Strategy<Value = SpectralDistribution> {
    // coarse support values so that ties between distributions happen
    prop::collection::vec((0u32..=40, 1u32..=100), 1..=max_len).prop_map(move |pts| {
        SpectralDistribution::normalized(
            pts.into_iter()
                .map(|(k, w)| (lo + (hi - lo) * k as f64 / 40.0, w as f64)),
        )
        .unwrap()
    })
}

fn spectrum(n: usize) -> impl Strategy<Value = SortedSpectrum> {
    prop::collection::vec(0.0f64..2.0, n).prop_map(|v| SortedSpectrum::new(v).unwrap())
}

/// Transport cost by solving the transportation LP directly.
fn transport_lp(p: &SpectralDistribution, q: &SpectralDistribution) -> f64 {
    let (a, b) = (p.len(), q.len());
    let mut lp = LinearProgram::new(a + b);
    for i in 0..a {
        for j in 0..b {
            let mut col = vec![0.0; a + b];
            col[i] = 1.0;
            col[a + j] = 1.0;
            lp.add_variable((p.support()[i] - q.support()[j]).abs(), col);
        }
    }
    for (i, &m) in p.masses().iter().enumerate() {
        lp.set_rhs(i, m);
    }
    for (j, &m) in q.masses().iter().enumerate() {
        lp.set_rhs(a + j, m);
    }
    solve(&lp).unwrap().objective
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// `n ∫ F⁻¹(u) du` over each quantile band by midpoint integration.
fn discretize_by_integration(n: usize, q: &SpectralDistribution, steps: usize) -> Vec<f64> {
    let cdf: Vec<f64> = q
        .masses()
        .iter()
        .scan(0.0, |c, m| {
            *c += m;
            Some(*c)
        })
        .collect();
    let inverse = |u: f64| {
        let k = cdf.iter().position(|&c| c >= u).unwrap_or(cdf.len() - 1);
        q.support()[k]
    };
    (0..n)
        .map(|i| {
            let h = 1.0 / (n * steps) as f64;
            (0..steps)
                .map(|s| inverse((i * steps + s) as f64 * h + h / 2.0))
                .sum::<f64>()
                / steps as f64
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn emd_is_a_metric(p in distribution(0.0, 2.0, 8), q in distribution(0.0, 2.0, 8), r in distribution(0.0, 2.0, 8)) {
        let pq = emd_w1(&p, &q).unwrap();
        prop_assert!(emd_w1(&p, &p).unwrap().abs() < 1e-15);
        prop_assert!((pq - emd_w1(&q, &p).unwrap()).abs() < 1e-12);
        prop_assert!(emd_w1(&p, &r).unwrap() <= pq + emd_w1(&q, &r).unwrap() + 1e-12);
    }

    #[test]
    fn emd_matches_transport_lp(p in distribution(0.0, 2.0, 5), q in distribution(0.0, 2.0, 5)) {
        let lp = transport_lp(&p, &q);
        prop_assert!((emd_w1(&p, &q).unwrap() - lp).abs() < 1e-9, "sweep vs lp {}", lp);
    }

    #[test]
    fn sorted_distance_is_optimal_matching(a in spectrum(5), b in spectrum(5)) {
        let best = permutations(5)
            .into_iter()
            .map(|perm| perm.iter().enumerate().map(|(i, &j)| (a.values()[i] - b.values()[j]).abs()).sum::<f64>() / 5.0)
            .fold(f64::INFINITY, f64::min);
        let d = sorted_vector_distance(&a, &b).unwrap();
        prop_assert!((d - best).abs() < 1e-12);
        let via_emd = emd_w1(&spectrum_distribution(&a).unwrap(), &spectrum_distribution(&b).unwrap()).unwrap();
        prop_assert!((d - via_emd).abs() < 1e-12);
    }

    #[test]
    fn walk_to_laplacian_is_an_isometry(p in distribution(-1.0, 1.0, 8), q in distribution(-1.0, 1.0, 8)) {
        let d = emd_w1(&p, &q).unwrap();
        let mapped = emd_w1(&walk_to_laplacian(&p).unwrap(), &walk_to_laplacian(&q).unwrap()).unwrap();
        prop_assert!((d - mapped).abs() < 1e-12);
        let lap = walk_to_laplacian(&p).unwrap();
        prop_assert!((lap.mean() - (1.0 - p.mean())).abs() < 1e-12);
    }

    #[test]
    fn discretization_contracts(n in 1usize..40, seed_vals in prop::collection::vec(0.0f64..2.0, 40), q in distribution(0.0, 2.0, 10)) {
        let p = SortedSpectrum::new(seed_vals[..n].to_vec()).unwrap();
        let pd = spectrum_distribution(&p).unwrap();
        let v = discretize_spectrum(n, &q).unwrap();
        let lhs = sorted_vector_distance(&p, &v).unwrap();
        prop_assert!(lhs <= emd_w1(&pd, &q).unwrap() + 1e-12);
    }

    #[test]
    fn discretization_matches_quantile_integration(n in 1usize..12, q in distribution(0.0, 2.0, 6)) {
        let v = discretize_spectrum(n, &q).unwrap();
        let oracle = discretize_by_integration(n, &q, 4000);
        // midpoint error per band is at most one jump over one step
        for (a, b) in v.values().iter().zip(&oracle) {
            prop_assert!((a - b).abs() <= 2.0 * 2.0 / 4000.0, "{} vs {}", a, b);
        }
        let mean: f64 = v.values().iter().sum::<f64>() / n as f64;
        prop_assert!((mean - q.mean()).abs() < 1e-12);
        prop_assert!(v.values().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn averaging_is_convex(ps in prop::collection::vec(distribution(0.0, 2.0, 6), 1..6), q in distribution(0.0, 2.0, 6)) {
        let avg = average_distributions(&ps).unwrap();
        let lhs = emd_w1(&avg, &q).unwrap();
        let rhs = ps.iter().map(|p| emd_w1(p, &q).unwrap()).sum::<f64>() / ps.len() as f64;
        prop_assert!(lhs <= rhs + 1e-12);
        prop_assert!((avg.total_mass() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn discretize_fixed_examples() {
    let q = SpectralDistribution::from_points([(0.0, 0.5), (1.0, 0.5)]).unwrap();
    assert_eq!(discretize_spectrum(2, &q).unwrap().values(), &[0.0, 1.0]);
    let v = discretize_spectrum(3, &q).unwrap();
    for (a, b) in v.values().iter().zip([0.0, 0.5, 1.0]) {
        assert!((a - b).abs() < 1e-12);
    }
    let dirac = SpectralDistribution::dirac(0.7);
    assert!(discretize_spectrum(5, &dirac).unwrap().values().iter().all(|&x| (x - 0.7).abs() < 1e-15));
}

#[test]
fn emd_fixed_examples() {
    let a = SpectralDistribution::from_points([(0.0, 0.5), (2.0, 0.5)]).unwrap();
    let b = SpectralDistribution::dirac(0.0);
    assert!((emd_w1(&a, &b).unwrap() - 1.0).abs() < 1e-15);
    assert!((transport_lp(&a, &b) - 1.0).abs() < 1e-12);
}

#[test]
fn union_matches_exact_spectrum_of_disjoint_union() {
    let mut r = common::rng(77);
    for i in 0..40 {
        let g = common::gnp(2 + i % 15, 0.3, &mut r);
        let h = common::gnp(1 + (i * 7) % 15, 0.25, &mut r);
        let joint = exact_spectrum(&g.disjoint_union(&h)).unwrap();
        let merged = union_spectrum(&exact_spectrum(&g).unwrap(), &exact_spectrum(&h).unwrap());
        assert_eq!(joint.len(), merged.len());
        for (a, b) in joint.values().iter().zip(merged.values()) {
            assert!((a - b).abs() <= 1e-7);
        }
    }
}

#[test]
fn edge_edits_move_spectrum_by_at_most_two_k_over_n() {
    use rand::Rng;
    let mut r = common::rng(12);
    for _ in 0..150 {
        let n = r.gen_range(2..=40);
        let g = common::gnp(n, r.gen_range(0.05..0.5), &mut r);
        let k = r.gen_range(1..=5);
        let (h, done) = common::toggle_pairs(&g, k, &mut r);
        let d = sorted_vector_distance(&exact_spectrum(&g).unwrap(), &exact_spectrum(&h).unwrap()).unwrap();
        assert!(d <= 2.0 * done as f64 / n as f64 + 1e-9, "n {n} k {done}: {d}");
    }
}
