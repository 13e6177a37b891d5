use num_complex::Complex64;
use proptest::prelude::*;
use stochlab::numerics::{eigen_all, eigen_leading, saddle_point_estimate};
use stochlab::parrondo::*;

const H0: f64 = 0.745;
const H: f64 = 0.495;
const H1: f64 = 0.095;

fn games() -> (GameSpec, GameSpec, GameSpec) {
    let a = GameSpec::uniform(3, H).unwrap();
    let b = GameSpec::capital_dependent(3, H1, H0).unwrap();
    let mix = mix_strategies(&a, &b).unwrap();
    (a, b, mix)
}

#[test]
fn three_rung_rates_match_published_values() {
    let (a, b, mix) = games();
    let ra = rate_variance(&a).unwrap();
    let rb = rate_variance(&b).unwrap();
    let rm = rate_variance(&mix).unwrap();
    assert!((rb.r + 0.002898428905).abs() < 1e-9);
    assert!((rb.second_moment_rate - 0.05281583411).abs() < 1e-9);
    assert!((ra.r + 0.0033333333).abs() < 1e-9);
    assert!((ra.second_moment_rate - 0.1111111110).abs() < 1e-9);
    assert!((rm.r - 0.005234741795).abs() < 1e-9);
    assert!((rm.second_moment_rate - 0.09707276331).abs() < 1e-9);
    // uniform coin: capital is a plain ±1 walk, so the cell moments are exact
    assert!((ra.capital_rate - (2.0 * H - 1.0)).abs() < 1e-13);
    assert!((ra.capital_variance - (1.0 - (2.0 * H - 1.0).powi(2))).abs() < 1e-12);
}

#[test]
fn parrondo_effect_on_three_rungs() {
    let (a, b, mix) = games();
    assert!(rate_variance(&a).unwrap().r < 0.0);
    assert!(rate_variance(&b).unwrap().r < 0.0);
    assert!(rate_variance(&mix).unwrap().r > 0.0);
}

#[test]
fn rate_is_long_time_drift() {
    let (_, _, mix) = games();
    let rv = rate_variance(&mix).unwrap();
    let t = 3000;
    let d = exact_pmf(&mix, t);
    let (mean, var) = d.cell_moments();
    // mean and variance grow linearly up to O(1) offsets from the initial transient
    assert!((mean / t as f64 - rv.r).abs() < 1e-3);
    assert!((var / t as f64 - rv.k).abs() < 2e-3);
    let later = exact_pmf(&mix, 2 * t);
    let (m2, v2) = later.cell_moments();
    assert!(((m2 - mean) / t as f64 - rv.r).abs() < 1e-9);
    assert!(((v2 - var) / t as f64 - rv.k).abs() < 1e-8);
}

#[test]
fn peak_follows_drift_law() {
    let (_, _, mix) = games();
    for t in [100usize, 200] {
        let d = exact_pmf(&mix, t);
        let n = d.argmax_cell();
        assert!((n as f64 - 0.0052 * t as f64).abs() <= 2.0, "t={t} n={n}");
    }
}

#[test]
fn odd_ladder_oscillates_and_even_does_not() {
    let (_, _, mix) = games();
    let t = 1000;
    let d = exact_pmf(&mix, t);
    let s = d.summed();
    let idx = |n: i64| (n - d.n_min()) as usize;
    let mut flips = 0;
    for n in -20..20 {
        let (a, b, c) = (s[idx(n - 1)], s[idx(n)], s[idx(n + 1)]);
        if (b > a && b > c) || (b < a && b < c) {
            flips += 1;
        }
    }
    assert!(flips >= 35, "{flips}");

    let even = GameSpec::new(vec![0.3, 0.7], vec![0.7, 0.3]).unwrap();
    let d = exact_pmf(&even, 400);
    let s = d.summed();
    let idx = |n: i64| (n - d.n_min()) as usize;
    let mut flips = 0;
    for n in -20..20 {
        let (a, b, c) = (s[idx(n - 1)], s[idx(n)], s[idx(n + 1)]);
        if (b > a && b > c) || (b < a && b < c) {
            flips += 1;
        }
    }
    assert!(flips <= 2, "{flips}");
}

#[test]
fn asymptotic_profile_tracks_exact_on_three_rungs() {
    let (_, _, mix) = games();
    let t = 1000;
    let exact = exact_pmf(&mix, t);
    let prof = asymptotic_profile(&mix, t, -0.02, 0.03).unwrap();
    for p in &prof.points {
        for l in 0..3 {
            let e = exact.get(p.n, l);
            if e == 0.0 {
                assert_eq!(p.per_rung[l], 0.0);
            } else {
                assert!((p.per_rung[l] / e - 1.0).abs() < 0.02, "n={} l={l}", p.n);
            }
        }
    }
}

#[test]
fn chain_tail_by_saddle_driver() {
    // P(n = 10, t = 50) for p = 0.6: the Fourier integral of λ(κ* + ik)^t e^{(κ*+ik)n}
    // has a real maximum of its modulus at k = 0
    let (p, q, t, n) = (0.6f64, 0.4f64, 50usize, 10i64);
    let g = GameSpec::chain(p, q).unwrap();
    let x = n as f64 / t as f64;
    let kappa = rate_function(&g, x).unwrap().kappa;
    let phi = |k: f64| {
        let z = Complex64::new(kappa, k);
        (p * (-z).exp() + q * z.exp()).norm().ln() + kappa * x
    };
    let sp = saddle_point_estimate(phi, |_| (2.0 / (2.0 * std::f64::consts::PI)).ln(), t as f64, (-1.0, 1.0)).unwrap();
    let estimate = sp.log_estimate.exp();
    let exact = iterate(&g, t).get(n, 0);
    // binomial oracle: 30 wins out of 50
    let binom: f64 = (1..=50).map(|i| (i as f64).ln()).sum::<f64>()
        - (1..=30).map(|i| (i as f64).ln()).sum::<f64>()
        - (1..=20).map(|i| (i as f64).ln()).sum::<f64>()
        + 30.0 * p.ln()
        + 20.0 * q.ln();
    assert!((exact - binom.exp()).abs() < 1e-14);
    assert!((estimate / exact - 1.0).abs() < 0.03, "{estimate} {exact}");
}

#[test]
fn history_rate_matches_simulation() {
    let s = HistoryGameSpec::new(0.9, 0.1, 0.7, 0.3).unwrap();
    let rv = history_rate_variance(&s).unwrap();
    let mc = simulate_history(&s, 200, 5000, 42).unwrap();
    assert!((mc.drift - rv.r).abs() < 3.0 * mc.stderr + 1e-3, "{} vs {} ± {}", rv.r, mc.drift, mc.stderr);
    let fair = history_rate_variance(&HistoryGameSpec::new(0.5, 0.5, 0.5, 0.5).unwrap()).unwrap();
    assert!(fair.r.abs() < 1e-14 && (fair.k - 1.0).abs() < 1e-13);
}

#[test]
fn envelope_moments_follow_evolution() {
    let spec = EnvelopeSpec::new(AmountLaw::delta(1.0), SwitchingFunction::Table { x: vec![1.0, 2.0], p: vec![0.2, 0.3] });
    let mo = envelope_moments(&spec).unwrap();
    let mut d = CapitalPmf::point(1.0);
    for _ in 0..100 {
        d = envelope_evolve(&spec, &d).unwrap();
    }
    assert!((d.total_mass() - 1.0).abs() < 1e-12);
    assert!((d.mean() - 100.0 * mo.r).abs() < 1e-9);
    assert!((d.variance() - 100.0 * mo.v).abs() < 1e-8);
}

fn holdless_spec(m: usize) -> impl Strategy<Value = GameSpec> {
    prop::collection::vec(0.01f64..0.99, m).prop_map(|p| {
        let q = p.iter().map(|v| 1.0 - v).collect();
        GameSpec::new(p, q).unwrap()
    })
}

fn any_spec() -> impl Strategy<Value = GameSpec> {
    (1usize..=6).prop_flat_map(|m| {
        prop::collection::vec((0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0), m).prop_map(|v| {
            let (mut p, mut q) = (Vec::new(), Vec::new());
            for (a, b, c) in v {
                let s = a + b + c + 1e-9;
                p.push(a / s);
                q.push(b / s);
            }
            GameSpec::new(p, q).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rate_formula_triangle(g in any_spec()) {
        let f = rate_formulas(&g).unwrap();
        let rv = rate_variance(&g).unwrap();
        prop_assert!(f.spread() < 1e-10);
        prop_assert!((f.hellmann_feynman - rv.r).abs() < 1e-10);
        prop_assert!(rv.k >= 0.0);
    }

    #[test]
    fn exact_equals_master(g in any_spec(), t in 0usize..=100) {
        let a = exact_pmf(&g, t);
        let b = iterate(&g, t);
        prop_assert!(a.sup_distance(&b) < 1e-10);
        prop_assert!((b.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parity_support_law(g in (1usize..=6).prop_flat_map(holdless_spec), t in 0usize..=50) {
        let d = iterate(&g, t);
        let m = g.m() as i64;
        for n in d.n_min()..=d.n_max() {
            for l in 0..g.m() {
                if (l as i64 + n * m + t as i64).rem_euclid(2) == 1 {
                    prop_assert_eq!(d.get(n, l), 0.0);
                }
            }
        }
    }

    #[test]
    fn even_ladder_minus_one_vector_cancels(g in (1usize..=3).prop_flat_map(|h| holdless_spec(2 * h))) {
        let q = q_matrix(&g, Complex64::new(0.0, 0.0));
        let pairs = eigen_all(&q).unwrap();
        let minus = pairs.iter().find(|p| (p.value + 1.0).norm() < 1e-9).expect("-1 eigenvalue");
        let s: Complex64 = minus.right.iter().sum();
        let norm: f64 = minus.right.iter().map(|c| c.norm()).sum();
        prop_assert!(s.norm() < 1e-9 * norm);
        prop_assert!(eigen_leading(&q).unwrap().degenerate);
    }

    #[test]
    fn even_ladder_spectrum_is_symmetric(g in (1usize..=3).prop_flat_map(|h| holdless_spec(2 * h)), k in -1.0f64..1.0) {
        let q = q_matrix(&g, Complex64::new(k, 0.0));
        for p in eigen_all(&q).unwrap() {
            let flipped: Vec<Complex64> = p.right.iter().enumerate().map(|(l, c)| if l % 2 == 0 { *c } else { -*c }).collect();
            let qv = q.mul_vec(&flipped);
            for (a, b) in qv.iter().zip(&flipped) {
                prop_assert!((a + p.value * b).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn scalar_chain_has_no_parrondo_effect(p1 in 0.0f64..0.5, q1 in 0.0f64..0.5, p2 in 0.0f64..0.5, q2 in 0.0f64..0.5) {
        let a = GameSpec::chain(p1, q1).unwrap();
        let b = GameSpec::chain(p2, q2).unwrap();
        let m = rate_variance(&mix_strategies(&a, &b).unwrap()).unwrap().r;
        let avg = 0.5 * (rate_variance(&a).unwrap().r + rate_variance(&b).unwrap().r);
        prop_assert!((m - avg).abs() < 1e-13);
    }

    #[test]
    fn mass_is_conserved(g in any_spec(), t in 1usize..60) {
        let d = iterate(&g, t);
        prop_assert!((d.total_mass() - 1.0).abs() < 1e-12);
        prop_assert!(d.raw().iter().all(|v| *v >= 0.0));
    }
}
