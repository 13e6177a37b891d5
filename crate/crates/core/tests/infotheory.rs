use proptest::prelude::*;
use rand_distr::{Distribution, StandardNormal};
use stochlab::infotheory::*;
use stochlab::sharding::shard_rng;
use stochlab::Error;

fn normals(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = shard_rng(seed, 0);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

fn pair(x: &[f64], y: &[f64]) -> PairedSamples {
    PairedSamples::new(x.to_vec(), y.to_vec()).unwrap()
}

#[test]
fn pearson_examples() {
    let x = [1.0, 2.0, 3.0, 4.0];
    let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
    assert!((pearson(&pair(&x, &y)).unwrap() - 1.0).abs() < 1e-12);
    let neg: Vec<f64> = x.iter().map(|v| -v).collect();
    assert!((pearson(&pair(&x, &neg)).unwrap() + 1.0).abs() < 1e-12);
    let r = pearson(&pair(&normals(100_000, 1), &normals(100_000, 2))).unwrap();
    assert!(r.abs() < 0.02);
    assert!(matches!(pearson(&pair(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0])), Err(Error::UndefinedCorrelation(_))));
}

#[test]
fn spearman_examples() {
    let x = [0.3, -1.0, 2.0, 5.0, 0.1];
    let cube: Vec<f64> = x.iter().map(|v: &f64| v.powi(3)).collect();
    assert!((spearman(&pair(&x, &cube)).unwrap() - 1.0).abs() < 1e-12);
    assert!((spearman(&pair(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0])).unwrap() + 1.0).abs() < 1e-12);
    let s = pair(&[1.0, 2.0, 3.0, 4.0, 5.0], &[1.0, 2.0, 3.0, 5.0, 4.0]);
    assert!((spearman(&s).unwrap() - 0.9).abs() < 1e-12);
    assert!((spearman_rank_difference(&s) - 0.9).abs() < 1e-12);
    assert!(spearman(&pair(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0])).is_err());
    assert_eq!(average_ranks(&[10.0, 20.0, 10.0, 5.0]), vec![2.5, 4.0, 2.5, 1.0]);
}

#[test]
fn autocorrelation_examples() {
    let noise = normals(100_000, 3);
    assert!((autocorrelation(&noise, 0).unwrap() - 1.0).abs() < 1e-12);
    assert!(autocorrelation(&noise, 5).unwrap().abs() < 3.0 / (100_000f64).sqrt());
    let ar = ar1_generate(0.8, 0.0, 1.0, 100_000, 4).unwrap();
    assert!((autocorrelation(&ar.x, 1).unwrap() - 0.8).abs() < 0.01);
    assert!(matches!(autocorrelation(&noise[..5], 5), Err(Error::RejectedInput(_))));
}

#[test]
fn discrete_measure_examples() {
    let u8 = DiscreteJoint::new(8, 1, vec![0.125; 8]).unwrap();
    let m = information_measures(&u8, None).unwrap();
    assert!((m.h_x - 8f64.ln()).abs() < 1e-12);
    let bits = DiscreteJoint::new(2, 2, vec![0.25; 4]).unwrap();
    let m = information_measures(&bits, None).unwrap();
    assert!((m.h_xy - 2.0 * 2f64.ln()).abs() < 1e-12 && m.mi.abs() < 1e-15);
    let mut diag = vec![0.0; 25];
    for i in 0..5 {
        diag[i * 5 + i] = 0.2;
    }
    let same = DiscreteJoint::new(5, 5, diag).unwrap();
    let m = information_measures(&same, Some(&bits_like(5))).unwrap();
    assert!((m.mi - 5f64.ln()).abs() < 1e-12 && (m.mi - m.h_x).abs() < 1e-12);
    assert!(m.kl.unwrap() > 0.0);
    assert!(DiscreteJoint::new(2, 1, vec![0.7, 0.7]).is_err());
    assert!(DiscreteJoint::new(2, 1, vec![1.2, -0.2]).is_err());
}

fn bits_like(m: usize) -> DiscreteJoint {
    DiscreteJoint::new(m, m, vec![1.0 / (m * m) as f64; m * m]).unwrap()
}

#[test]
fn histogram_of_identical_uniform_margins() {
    let xs: Vec<f64> = (0..80).map(|i| (i % 8) as f64).collect();
    let est = mi_histogram(&pair(&xs, &xs), 8).unwrap();
    assert!((est.value - 8f64.ln()).abs() < 1e-12);
    assert!(matches!(mi_histogram(&pair(&[1.0, 1.0], &[0.0, 1.0]), 4), Err(Error::RejectedInput(_))));
}

#[test]
fn histogram_bias_on_independent_margins() {
    let est = mi_histogram(&pair(&normals(10_000, 5), &normals(10_000, 6)), 10).unwrap();
    assert!(est.value >= 0.0 && est.value < 0.05);
}

#[test]
fn histogram_on_ar1_pairs() {
    let s = ar1_generate(0.6, 0.0, 1.0, 1000, 7).unwrap().pairs().unwrap();
    let est = mi_histogram(&s, 10).unwrap();
    assert!((est.value - 0.2231).abs() < 0.15, "{}", est.value);
}

#[test]
fn knn_independent_and_ar1() {
    let est = mi_knn(&pair(&normals(1000, 8), &normals(1000, 9)), 5, KnnAlgorithm::One).unwrap();
    assert!(est.value.abs() < 0.05);
    let target = -0.5 * 0.36f64.ln();
    let mean: f64 = (0..20)
        .map(|seed| mi_knn(&ar1_generate(0.8, 0.0, 1.0, 1000, seed).unwrap().pairs().unwrap(), 5, KnnAlgorithm::Two).unwrap().value)
        .sum::<f64>()
        / 20.0;
    assert!((mean - target).abs() < 0.1, "{mean}");
}

#[test]
fn knn_algorithms_agree() {
    for k in [3, 5, 10] {
        let mut worst = 0.0f64;
        for seed in 0..20 {
            let s = ar1_generate(0.6, 0.0, 1.0, 1000, 100 + seed).unwrap().pairs().unwrap();
            let a = mi_knn(&s, k, KnnAlgorithm::One).unwrap().value;
            let b = mi_knn(&s, k, KnnAlgorithm::Two).unwrap().value;
            worst = worst.max((a - b).abs());
        }
        assert!(worst < 0.05, "K={k}: {worst}");
    }
}

#[test]
fn knn_survives_duplicates() {
    let x: Vec<f64> = (0..200).map(|i| (i % 7) as f64).collect();
    let y: Vec<f64> = (0..200).map(|i| (i % 5) as f64).collect();
    let est = mi_knn(&pair(&x, &y), 3, KnnAlgorithm::Two).unwrap();
    assert!(est.value.is_finite());
}

#[test]
fn gaussian_mi_values() {
    assert_eq!(gaussian_mi(0.0).unwrap(), 0.0);
    assert!((gaussian_mi(0.6).unwrap() - 0.22314).abs() < 5e-6);
    assert!((gaussian_mi(0.99).unwrap() - 1.958518).abs() < 5e-7);
    assert!(matches!(gaussian_mi(1.0), Err(Error::Divergence(_))));
}

#[test]
fn ar1_moments() {
    let s = ar1_generate(0.8, 0.0, 0.5, 100_000, 11).unwrap();
    let n = s.x.len() as f64;
    let m = s.x.iter().sum::<f64>() / n;
    let v = s.x.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    assert!((v / 0.694444 - 1.0).abs() < 0.05);
    let c = ar1_generate(0.5, 1.0, 1.0, 100_000, 12).unwrap();
    assert!((c.x.iter().sum::<f64>() / 1e5 - 2.0).abs() < 0.02);
    let w = ar1_generate(0.0, 0.0, 1.0, 100_000, 13).unwrap();
    assert!(autocorrelation(&w.x, 1).unwrap().abs() < 3.0 / (1e5f64).sqrt());
    assert_eq!(ar1_generate(0.3, 0.0, 1.0, 50, 1).unwrap(), ar1_generate(0.3, 0.0, 1.0, 50, 1).unwrap());
    assert!(matches!(ar1_generate(1.0, 0.0, 1.0, 50, 1), Err(Error::RejectedInput(_))));
}

#[test]
fn paired_samples_csv() {
    let (s, dropped) = PairedSamples::read_csv("x,y\n1,2\n3,nan\n4,5\n".as_bytes(), true).unwrap();
    assert_eq!((s.len(), dropped), (2, 1));
    let est = mi_knn(&pair(&normals(50, 1), &normals(50, 2)), 3, KnnAlgorithm::One).unwrap();
    let json = serde_json::to_value(est).unwrap();
    assert_eq!(json["method"], "knn1");
    assert_eq!(json["N"], 50);
}

fn joint_strategy() -> impl Strategy<Value = DiscreteJoint> {
    (2usize..5, 2usize..5).prop_flat_map(|(r, c)| {
        prop::collection::vec(0.0f64..1.0, r * c).prop_filter_map("zero mass", move |w| {
            let s: f64 = w.iter().sum();
            (s > 1e-3).then(|| DiscreteJoint::new(r, c, w.iter().map(|v| v / s).collect()).unwrap())
        })
    })
}

proptest! {
    #[test]
    fn spearman_ignores_increasing_maps(x in prop::collection::vec(-10.0f64..10.0, 5..40), seed in any::<u64>()) {
        let y = normals(x.len(), seed);
        prop_assume!(x.iter().any(|v| *v != x[0]));
        let fx: Vec<f64> = x.iter().map(|v| v.exp() + 3.0 * v).collect();
        let a = spearman(&pair(&x, &y)).unwrap();
        let b = spearman(&pair(&fx, &y)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn spearman_matches_rank_difference_without_ties(seed in any::<u64>(), n in 3usize..50) {
        let s = pair(&normals(n, seed), &normals(n, seed ^ 1));
        prop_assert!((spearman(&s).unwrap() - spearman_rank_difference(&s)).abs() < 1e-12);
    }

    #[test]
    fn pearson_is_affine_invariant(seed in any::<u64>(), a in 0.01f64..100.0, b in -50.0f64..50.0) {
        let x = normals(40, seed);
        let y = normals(40, seed ^ 7);
        let ax: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        prop_assert!((pearson(&pair(&x, &y)).unwrap() - pearson(&pair(&ax, &y)).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn mutual_information_bounds(j in joint_strategy()) {
        let m = information_measures(&j, None).unwrap();
        prop_assert!(m.mi >= -1e-12 && m.mi <= m.h_x.min(m.h_y) + 1e-12);
        prop_assert!((m.h_xy - m.h_y - m.h_x_given_y).abs() < 1e-12);
        prop_assert!((m.mi - (m.h_x - m.h_x_given_y)).abs() < 1e-12);
        prop_assert!((j.transposed().mutual_information() - m.mi).abs() < 1e-12);
    }

    #[test]
    fn conditional_mi_chain_rule(w in prop::collection::vec(0.01f64..1.0, 12)) {
        let s: f64 = w.iter().sum();
        let p: Vec<f64> = w.iter().map(|v| v / s).collect();
        let j3 = DiscreteJoint3::new([2, 3, 2], p.clone()).unwrap();
        // I(X;Y|Z) = I(X;(Y,Z)) − I(X;Z)
        let x_yz = DiscreteJoint::new(2, 6, p.clone()).unwrap().mutual_information();
        let mut xz = vec![0.0; 4];
        for x in 0..2 {
            for y in 0..3 {
                for z in 0..2 {
                    xz[x * 2 + z] += p[(x * 3 + y) * 2 + z];
                }
            }
        }
        let x_z = DiscreteJoint::new(2, 2, xz).unwrap().mutual_information();
        prop_assert!((j3.conditional_mi() - (x_yz - x_z)).abs() < 1e-12);
    }

    #[test]
    fn histogram_matches_discrete_measures(seed in any::<u64>(), bins in 2usize..12) {
        let s = pair(&normals(300, seed), &normals(300, seed ^ 3));
        let j = histogram_joint(&s, bins).unwrap();
        prop_assert_eq!(mi_histogram(&s, bins).unwrap().value, information_measures(&j, None).unwrap().mi);
    }

    #[test]
    fn neighbour_searches_agree(seed in any::<u64>(), k in 1usize..6, two in any::<bool>()) {
        let alg = if two { KnnAlgorithm::Two } else { KnnAlgorithm::One };
        let x = normals(120, seed);
        let y = normals(120, seed ^ 5);
        prop_assert_eq!(knn_counts_brute(&x, &y, k, alg), knn_counts_sorted(&x, &y, k, alg));
    }
}
