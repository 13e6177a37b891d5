"""Smoke test for the stochlab_py extension module."""

import math

import stochlab_py as sl


def close(a, b, tol):
    assert abs(a - b) <= tol, (a, b)


def main():
    x, y = sl.ar1_generate(0.8, 5000, seed=7)
    assert len(x) == len(y) == 5000
    close(sl.gaussian_mi(0.8), -0.5 * math.log(1 - 0.64), 1e-12)
    close(sl.mi_knn(x, y, k=5, algorithm=1), sl.gaussian_mi(0.8), 0.1)
    assert sl.mi_histogram(x, y, bins=10) > 0.2
    assert sl.pearson(x, y) > 0.7 and sl.spearman(x, y) > 0.7

    a = sl.GameSpec.uniform(3, 0.495)
    b = sl.GameSpec.capital_dependent(3, 0.095, 0.745)
    mix = a.mix(b)
    rv = mix.rate_variance()
    close(rv["r"], 0.005234741795, 1e-9)
    assert a.rate_variance()["r"] < 0 and b.rate_variance()["r"] < 0
    n0, pmf = mix.exact_pmf(200)
    n1, it = mix.iterate(200)
    assert n0 == n1
    close(sum(pmf), 1.0, 1e-12)
    assert max(abs(u - v) for u, v in zip(pmf, it)) < 1e-10

    r, v = sl.envelope_moments(0.2, 0.3)
    close(r, 1.45, 1e-12)
    close(v, 0.2475, 1e-12)

    pm = sl.ProductionModel(0.2, sigma=0.05)
    m = pm.volatility_moments(400)
    close(m["var"] / 2.49e-4, 1.0, 0.02)
    close(m["var"] / sl.tanh_law(0.2, 0.05), 1.0, 0.02)
    close(pm.narrow_limit_check(400), 1.0, 0.02)
    close(pm.simulate_variance(400, 4000, seed=1) / m["var"], 1.0, 0.1)
    x0, dx, rho = pm.log_production_density(50)
    close(sum(rho) * dx, 1.0, 1e-6)

    open_ = [100.0 + i * 0.1 for i in range(300)]
    close_ = [o * (1.0 + 0.001 * math.sin(i)) for i, o in enumerate(open_)]
    rep = sl.session_asymmetry(open_, close_, method="pearson")
    assert rep["days"] > 0

    try:
        sl.GameSpec([1.5], [0.2])
    except ValueError:
        pass
    else:
        raise AssertionError("invalid game accepted")

    print("stochlab_py smoke test: ok")


if __name__ == "__main__":
    main()
