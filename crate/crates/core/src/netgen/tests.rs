use super::*;
use proptest::prelude::*;

const STD_RMAT: [f64; 4] = [0.5, 0.125, 0.125, 0.25];

fn diag_is_zero(a: &AdjacencyMatrix) -> bool {
    (0..a.n()).all(|i| a.get(i, i) == 0)
}

#[test]
fn er_binary_extremes() {
    let empty = sample_er_binary(4, 0.0, 1).unwrap();
    assert!(empty.entries().iter().all(|&v| v == 0));
    let full = sample_er_binary(4, 1.0, 1).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(full.get(i, j), u32::from(i != j));
        }
    }
}

#[test]
fn er_binary_density_concentrates() {
    // Binomial(523776, 0.1): sd of the density is 4.1e-4, so +-0.01 is ~24 sd.
    for seed in [1, 2, 3] {
        let a = sample_er_binary(1024, 0.1, seed).unwrap();
        let d = a.density();
        assert!((d - 0.1).abs() < 0.01, "seed {seed}: density {d}");
        assert!(diag_is_zero(&a));
    }
}

#[test]
fn er_binary_rejects_bad_parameters() {
    assert!(matches!(sample_er_binary(1, 0.5, 0), Err(Error::Parameter(_))));
    assert!(matches!(sample_er_binary(4, 1.5, 0), Err(Error::Parameter(_))));
    assert!(matches!(sample_er_binary(4, -0.1, 0), Err(Error::Parameter(_))));
    assert!(matches!(sample_er_binary(4, f64::NAN, 0), Err(Error::Parameter(_))));
}

fn off_diagonal_values(a: &AdjacencyMatrix) -> Vec<f64> {
    let mut v = Vec::new();
    for i in 0..a.n() {
        for j in (i + 1)..a.n() {
            v.push(f64::from(a.get(i, j)));
        }
    }
    v
}

#[test]
fn er_count_moments() {
    assert!(sample_er_count(4, 0.0, 1).unwrap().entries().iter().all(|&v| v == 0));
    assert!(matches!(sample_er_count(4, -1.0, 1), Err(Error::Parameter(_))));

    // Mean of 32640 Poisson(1) draws: sd 0.0055.
    for seed in [5, 6, 7] {
        let v = off_diagonal_values(&sample_er_count(256, 1.0, seed).unwrap());
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        assert!((mean - 1.0).abs() < 0.02, "mean {mean}");
    }
    // Sample variance of Poisson(3): sd sqrt((mu4 - s^4)/N) = sqrt(21/32640) = 0.025.
    for seed in [5, 6, 7] {
        let a = sample_er_count(256, 3.0, seed).unwrap();
        assert!(diag_is_zero(&a));
        let v = off_diagonal_values(&a);
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64;
        assert!((var - 3.0).abs() < 0.15, "variance {var}");
    }
}

#[test]
fn rmat_degenerate_mass_lands_on_origin() {
    let eps = 1e-9;
    for seed in 0..20 {
        let a = sample_rmat_binary(2, 2, [1.0 - 3.0 * eps, eps, eps, eps], seed).unwrap();
        assert_eq!(a.get(0, 0), 1);
        assert_eq!(a.total_weight(), 1);
    }
}

#[test]
fn rmat_parameter_errors() {
    assert!(matches!(sample_rmat_binary(6, 4, STD_RMAT, 0), Err(Error::Parameter(_))));
    assert!(matches!(sample_rmat_binary(8, 5, STD_RMAT, 0), Err(Error::Parameter(_))));
    assert!(matches!(sample_rmat_binary(8, 4, [0.5, 0.2, 0.2, 0.2], 0), Err(Error::Parameter(_))));
    let unordered = ModelSpec::Rmat { edges: 4, a: 0.25, b: 0.25, c: 0.25, d: 0.25 };
    assert!(unordered.validate(8).is_err());
    assert!(ModelSpec::rmat_standard(4).validate(8).is_ok());
}

/// Exact probability that a single placement on a 4x4 matrix lands in each
/// unordered cell {i, j}: product of the two level probabilities, folded over
/// the mirror.
fn rmat_two_level_oracle() -> [[f64; 4]; 4] {
    let mut cell = [[0.0; 4]; 4];
    let q = [[STD_RMAT[0], STD_RMAT[1]], [STD_RMAT[2], STD_RMAT[3]]];
    for r1 in 0..2 {
        for c1 in 0..2 {
            for r2 in 0..2 {
                for c2 in 0..2 {
                    let (i, j) = (2 * r1 + r2, 2 * c1 + c2);
                    let (lo, hi) = (i.min(j), i.max(j));
                    cell[lo][hi] += q[r1][c1] * q[r2][c2];
                }
            }
        }
    }
    cell
}

#[test]
fn rmat_landing_distribution_matches_product_rule() {
    let oracle = rmat_two_level_oracle();
    let total: f64 = oracle.iter().flatten().sum();
    assert!((total - 1.0).abs() < 1e-15);

    let reps = 100_000u64;
    let mut counts = [[0u64; 4]; 4];
    for seed in 0..reps {
        let a = sample_rmat_binary(4, 2, STD_RMAT, seed).unwrap();
        let mut hits = 0;
        for i in 0..4 {
            for j in i..4 {
                if a.get(i, j) == 1 {
                    counts[i][j] += 1;
                    hits += 1;
                }
            }
        }
        assert_eq!(hits, 1);
    }
    let mut tv = 0.0;
    for i in 0..4 {
        for j in i..4 {
            tv += (counts[i][j] as f64 / reps as f64 - oracle[i][j]).abs();
        }
    }
    tv /= 2.0;
    assert!(tv < 0.01, "total variation {tv}");
}

#[test]
fn rmat_large_graph_is_heavy_tailed() {
    let a = sample_rmat_binary(1024, 100_000, STD_RMAT, 11).unwrap();
    let w = a.total_weight();
    assert!(w <= 50_000);
    // repeated draws collapse onto the dense corner; about a third survive
    assert!(w > 25_000, "too many collisions: {w}");
    let deg = a.degrees();
    let mean = deg.iter().sum::<f64>() / deg.len() as f64;
    let max = deg.iter().cloned().fold(0.0, f64::max);
    assert!(max > 3.0 * mean, "max degree {max} vs mean {mean}");
    assert!(a.is_symmetric());
}

#[test]
fn chung_lu_binary_formula_cases() {
    let n = 10;
    let mut k = vec![0.0; n];
    k[2] = (n - 1) as f64;
    k[7] = (n - 1) as f64;
    for seed in 0..10 {
        let a = sample_chunglu_binary(&k, seed).unwrap();
        assert_eq!(a.get(2, 7), 1);
        assert_eq!(a.total_weight(), 1);
    }
    assert!(matches!(sample_chunglu_binary(&[0.0; 5], 0), Err(Error::Parameter(_))));
    assert!(matches!(sample_chunglu_binary(&[1.0, -1.0, 2.0], 0), Err(Error::Parameter(_))));
}

#[test]
fn chung_lu_constant_degrees_reduce_to_er() {
    // k_i = n p0 gives p_ij = (n p0)^2 / (n * n p0) = p0 for every pair.
    let n = 400;
    let p0 = 0.05;
    let a = sample_chunglu_binary(&vec![n as f64 * p0; n], 3).unwrap();
    let d = a.density();
    // sd of the density is sqrt(p0(1-p0)/79800) = 7.7e-4
    assert!((d - p0).abs() < 0.004, "density {d}");
}

#[test]
fn chung_lu_binary_expected_degrees() {
    let rmat = sample_rmat_binary(64, 400, STD_RMAT, 2).unwrap();
    let k = rmat.degrees();
    let s: f64 = k.iter().sum();
    let reps = 10_000u64;
    let mut sums = vec![0.0; 64];
    for seed in 0..reps {
        let a = sample_chunglu_binary(&k, 1000 + seed).unwrap();
        for (acc, d) in sums.iter_mut().zip(a.degrees()) {
            *acc += d;
        }
    }
    for i in 0..64 {
        // direct summation over j != i of p_ij and of its Bernoulli variance
        let (mut mean, mut var) = (0.0, 0.0);
        for j in 0..64 {
            if j != i {
                let p = (k[i] * k[j] / s).min(1.0);
                mean += p;
                var += p * (1.0 - p);
            }
        }
        let emp = sums[i] / reps as f64;
        let sd = (var / reps as f64).sqrt();
        assert!((emp - mean).abs() <= 3.0 * sd + 1e-12, "node {i}: {emp} vs {mean} (sd {sd})");
        // uncapped regime: the sum is k_i up to the missing self term
        if k.iter().all(|&kj| k[i] * kj <= s) {
            assert!((mean - k[i] * (1.0 - k[i] / s)).abs() < 1e-9);
        }
    }
}

#[test]
fn pareto_support_and_shape() {
    let d = sample_pareto_degrees(1000, 1.0, 1.2, 4).unwrap();
    assert!(d.iter().all(|&k| k >= 1.0));

    let eta = 0.333;
    let mut d = sample_pareto_degrees(100_000, eta, 1.2, 5).unwrap();
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = 0.5 * (d[49_999] + d[50_000]);
    let expected = eta * 2f64.powf(1.0 / 1.2);
    assert!((median / expected - 1.0).abs() < 0.02, "median {median} vs {expected}");

    let mut d = sample_pareto_degrees(100_000, 1.0, 1.2, 6).unwrap();
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let cdf = |x: f64| 1.0 - x.powf(-1.2);
    let nn = d.len() as f64;
    let ks = d
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / nn).abs().max(((i + 1) as f64 / nn - f).abs())
        })
        .fold(0.0, f64::max);
    assert!(ks < 0.01, "KS distance {ks}");

    assert!(sample_pareto_degrees(5, 0.0, 1.2, 0).is_err());
    assert!(sample_pareto_degrees(5, 1.0, 0.0, 0).is_err());
}

#[test]
fn chung_lu_count_rates() {
    // constant degrees: every rate is c k^2
    let k = 2.0;
    let c = 0.25;
    let mut sum = 0.0;
    let mut cnt = 0.0;
    for seed in 0..20 {
        let v = off_diagonal_values(&sample_chunglu_count(&vec![k; 100], c, seed).unwrap());
        sum += v.iter().sum::<f64>();
        cnt += v.len() as f64;
    }
    assert!((sum / cnt - c * k * k).abs() < 0.02);

    assert!(matches!(sample_chunglu_count(&[1.0, 2.0], 0.0, 0), Err(Error::Parameter(_))));
    assert!(matches!(sample_chunglu_count(&[1.0, 0.0], 1.0, 0), Err(Error::Parameter(_))));
}

#[test]
fn chung_lu_count_expected_weighted_degrees() {
    let k = sample_pareto_degrees(256, 0.333, 1.2, 9).unwrap();
    let s: f64 = k.iter().sum();
    let c = 1.0 / s;
    let reps = 400;
    let mut deg = vec![0.0; 256];
    let mut total = 0.0;
    for seed in 0..reps {
        let a = sample_chunglu_count(&k, c, 500 + seed).unwrap();
        assert!(diag_is_zero(&a));
        for (acc, d) in deg.iter_mut().zip(a.degrees()) {
            *acc += d;
        }
        total += a.degrees().iter().sum::<f64>();
    }
    let total = total / reps as f64;
    // exact expectation: sum_i sum_{j != i} c k_i k_j = s - c sum k_i^2
    let exact = s - c * k.iter().map(|x| x * x).sum::<f64>();
    // sum of degrees is twice a Poisson total weight
    let sd = (2.0 * exact / reps as f64).sqrt();
    assert!((total - exact).abs() < 4.0 * sd, "total {total} vs {exact}");
    // the missing diagonal is the only gap between the target sum and the mean
    assert!(total < s + 4.0 * sd, "total {total} vs sum of degrees {s}");
    // per-node direct summation, loose check on the largest node
    let imax = (0..256).max_by(|&a, &b| k[a].partial_cmp(&k[b]).unwrap()).unwrap();
    let want = k[imax] * (1.0 - c * k[imax]);
    let got = deg[imax] / reps as f64;
    let sd = (want / reps as f64).sqrt();
    assert!((got - want).abs() < 4.0 * sd, "node {imax}: {got} vs {want}");
}

#[test]
fn clique_embedding_fills_pairs() {
    let a = sample_er_binary(1024, 0.1, 3).unwrap();
    let spec = AnomalySpec { nodes: (0..15).collect(), mode: AnomalyMode::CliqueBinary { p1: 1.0 } };
    let b = embed_anomaly(&a, &spec, &ModelSpec::ErBinary { p0: 0.1 }, 4).unwrap();
    let mut ones = 0;
    for i in 0..15 {
        for j in (i + 1)..15 {
            ones += b.get(i, j);
        }
        assert_eq!(b.get(i, i), 0);
    }
    assert_eq!(ones, 105);
    for i in 0..1024 {
        for j in 0..1024 {
            if i >= 15 || j >= 15 {
                assert_eq!(a.get(i, j), b.get(i, j));
            }
        }
    }
    assert!(b.is_symmetric());
}

#[test]
fn count_shift_rates() {
    let base = ModelSpec::ErCount { lambda0: 1.0 };
    let nodes: Vec<usize> = (100..113).collect();
    let mut within_shift = 0.0;
    let mut within_null = 0.0;
    let mut pairs = 0.0;
    for seed in 0..50 {
        let a = sample_er_count(256, 1.0, seed).unwrap();
        let shifted = embed_anomaly(
            &a,
            &AnomalySpec { nodes: nodes.clone(), mode: AnomalyMode::CountShift { delta: 3.0 } },
            &base,
            seed + 1000,
        )
        .unwrap();
        let same = embed_anomaly(
            &a,
            &AnomalySpec { nodes: nodes.clone(), mode: AnomalyMode::CountShift { delta: 0.0 } },
            &base,
            seed + 2000,
        )
        .unwrap();
        for (x, &i) in nodes.iter().enumerate() {
            for &j in &nodes[x + 1..] {
                within_shift += f64::from(shifted.get(i, j));
                within_null += f64::from(same.get(i, j));
                pairs += 1.0;
            }
        }
        assert_eq!(shifted.get(0, 5), a.get(0, 5));
        assert_eq!(shifted.get(100, 200), a.get(100, 200));
    }
    // 3900 Poisson draws: sd 0.032 (rate 4) and 0.016 (rate 1)
    assert!((within_shift / pairs - 4.0).abs() < 0.15);
    assert!((within_null / pairs - 1.0).abs() < 0.08);
}

#[test]
fn count_shift_uses_chung_lu_rates() {
    let k = vec![2.0; 40];
    let base = ModelSpec::ChungLuCount { degrees: k, c: 0.5 };
    let spec = AnomalySpec { nodes: (0..20).collect(), mode: AnomalyMode::CountShift { delta: 1.0 } };
    let mut sum = 0.0;
    let mut cnt = 0.0;
    for seed in 0..30 {
        let a = base.sample(40, seed).unwrap();
        let b = embed_anomaly(&a, &spec, &base, seed + 77).unwrap();
        for i in 0..20 {
            for j in (i + 1)..20 {
                sum += f64::from(b.get(i, j));
                cnt += 1.0;
            }
        }
    }
    // rate 0.5 * 2 * 2 + 1 = 3; 5700 draws, sd 0.023
    assert!((sum / cnt - 3.0).abs() < 0.1);
}

#[test]
fn embedding_errors() {
    let bin = sample_er_binary(8, 0.3, 0).unwrap();
    let cnt = sample_er_count(8, 1.0, 0).unwrap();
    let clique = AnomalySpec { nodes: vec![0, 1, 2], mode: AnomalyMode::CliqueBinary { p1: 1.0 } };
    let shift = AnomalySpec { nodes: vec![0, 1, 2], mode: AnomalyMode::CountShift { delta: 1.0 } };
    let er_b = ModelSpec::ErBinary { p0: 0.3 };
    let er_c = ModelSpec::ErCount { lambda0: 1.0 };
    assert!(matches!(embed_anomaly(&cnt, &clique, &er_c, 0), Err(Error::Mode(_))));
    assert!(matches!(embed_anomaly(&bin, &shift, &er_b, 0), Err(Error::Mode(_))));
    assert!(matches!(embed_anomaly(&cnt, &shift, &er_b, 0), Err(Error::Mode(_))));
    let out_of_range = AnomalySpec { nodes: vec![0, 8], mode: AnomalyMode::CliqueBinary { p1: 1.0 } };
    assert!(matches!(embed_anomaly(&bin, &out_of_range, &er_b, 0), Err(Error::Parameter(_))));
    let single = AnomalySpec { nodes: vec![3], mode: AnomalyMode::CliqueBinary { p1: 1.0 } };
    assert!(matches!(embed_anomaly(&bin, &single, &er_b, 0), Err(Error::Parameter(_))));
    let dup = AnomalySpec { nodes: vec![3, 3], mode: AnomalyMode::CliqueBinary { p1: 1.0 } };
    assert!(matches!(embed_anomaly(&bin, &dup, &er_b, 0), Err(Error::Parameter(_))));
}

#[test]
fn anomaly_node_sampling() {
    let mut r = rng::seeded(1);
    let s = sample_anomaly_nodes(50, 10, &mut r).unwrap();
    assert_eq!(s.len(), 10);
    assert!(s.windows(2).all(|w| w[0] < w[1]));
    assert!(sample_anomaly_nodes(5, 6, &mut r).is_err());
    assert!(sample_anomaly_nodes(5, 1, &mut r).is_err());
}

#[test]
fn rmat_edge_budget_rounds_to_even() {
    assert_eq!(rmat_edges_for_density(256, 0.01), 652);
    assert_eq!(rmat_edges_for_density(128, 0.05), 812);
    assert_eq!(rmat_edges_for_density(1024, 0.1) % 2, 0);
}

fn all_models(n: usize, p: f64) -> Vec<ModelSpec> {
    let degrees: Vec<f64> = (0..n).map(|i| 1.0 + (i % 5) as f64).collect();
    vec![
        ModelSpec::ErBinary { p0: p },
        ModelSpec::ErCount { lambda0: 3.0 * p },
        ModelSpec::rmat_standard(rmat_edges_for_density(n, p)),
        ModelSpec::ChungLuBinary { degrees: degrees.clone() },
        ModelSpec::chung_lu_count_default(degrees),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn generated_matrices_respect_invariants(seed in any::<u64>(), p in 0.02f64..0.9, log_n in 1u32..6) {
        let n = 1usize << log_n;
        for model in all_models(n, p) {
            let a = model.sample(n, seed).unwrap();
            prop_assert!(a.is_symmetric());
            prop_assert_eq!(a.kind(), model.kind());
            if a.kind() == NetworkKind::Binary {
                prop_assert!(a.entries().iter().all(|&v| v <= 1));
            }
            if !matches!(model, ModelSpec::Rmat { .. }) {
                prop_assert!(diag_is_zero(&a));
            } else {
                prop_assert!(a.total_weight() <= rmat_edges_for_density(n, p) / 2);
            }
            prop_assert_eq!(&a, &model.sample(n, seed).unwrap());
        }
    }
}
