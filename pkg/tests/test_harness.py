"""Monte Carlo harness: reproducibility, statistics, and the scaling fit."""

import math

import numpy as np
import pytest

from tenqec import (
    McPoint,
    NoiseModel,
    PauliString,
    crossing_point,
    exhaustive_failure_rate,
    fit_threshold,
    likelihoods_network,
    read_points,
    run_mc,
    run_point,
    write_points,
)


def test_run_point_deterministic(holo):
    layout, schedule = holo[2]
    a = run_point(layout, schedule, 0.18, 150, seed=42)
    b = run_point(layout, schedule, 0.18, 150, seed=42)
    assert a == b


def test_run_point_zero_noise(holo):
    layout, schedule = holo[2]
    point = run_point(layout, schedule, 0.0, 50, seed=1)
    assert point.failures == 0
    assert point.failure_rate == 0.0
    assert point.std_err == 0.0


def test_point_metadata(holo):
    layout, schedule = holo[2]
    point = run_point(layout, schedule, 0.2, 100, seed=9)
    assert (point.radius, point.n, point.trials) == (2, 36, 100)
    expect = math.sqrt(
        point.failure_rate * (1 - point.failure_rate) / point.trials
    )
    assert point.std_err == pytest.approx(expect)


def test_csv_round_trip(tmp_path, holo):
    layout, schedule = holo[2]
    points = run_mc(layout, schedule, [0.16, 0.2], 80, seed=3)
    path = tmp_path / "points.csv"
    write_points(str(path), points)
    assert read_points(str(path)) == points


def test_csv_byte_identical(tmp_path, holo):
    layout, schedule = holo[2]
    out = []
    for name in ("a.csv", "b.csv"):
        points = run_mc(layout, schedule, [0.17, 0.21], 120, seed=77)
        path = tmp_path / name
        write_points(str(path), points)
        out.append(path.read_bytes())
    assert out[0] == out[1]
    header = out[0].split(b"\n", 1)[0]
    assert header == b"radius,n,p,trials,failures,failure_rate,std_err"


def test_read_points_rejects_other_headers(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError):
        read_points(str(path))


def test_workers_match_single_thread(holo):
    layout, schedule = holo[2]
    serial = run_point(layout, schedule, 0.19, 60, seed=13)
    forked = run_point(layout, schedule, 0.19, 60, seed=13, workers=2)
    assert serial == forked


def test_monte_carlo_convergence_rate(holo):
    # the estimate tightens like 1/sqrt(trials) against the exact rate
    layout, schedule = holo[1]
    code = layout.code
    noise = NoiseModel.depolarizing(6, 0.2)

    def chooser(syn):
        return likelihoods_network(layout, schedule, noise, syn).argmax_class()

    exact = exhaustive_failure_rate(code, noise, chooser)
    errs = []
    for trials in (400, 1600, 6400):
        point = run_point(layout, schedule, 0.2, trials, seed=8)
        assert abs(point.failure_rate - exact) <= 5 * point.std_err
        errs.append(point.std_err)
    assert errs[0] > errs[1] > errs[2]
    # each fourfold trial increase halves the standard error
    assert errs[1] / errs[0] == pytest.approx(0.5, abs=0.1)
    assert errs[2] / errs[1] == pytest.approx(0.5, abs=0.1)


def test_radius_ordering_flips_across_threshold(holo):
    # well below the crossing the bigger code wins, well above it loses
    sep = {}
    for p in (0.10, 0.30):
        rates = {}
        for r in (2, 4):
            layout, schedule = holo[r]
            rates[r] = run_point(layout, schedule, p, 2000, seed=31)
        gap = rates[2].failure_rate - rates[4].failure_rate
        sigma = math.hypot(rates[2].std_err, rates[4].std_err)
        sep[p] = gap / sigma
    assert sep[0.10] >= 5.0
    assert sep[0.30] <= -5.0


def test_crossing_point_interpolates():
    def mk(radius, n, ps, rates):
        return [
            McPoint(radius, n, p, 100, int(100 * r), r, 0.01)
            for p, r in zip(ps, rates)
        ]

    ps = [0.1, 0.2, 0.3]
    a = mk(3, 174, ps, [0.10, 0.20, 0.30])
    b = mk(4, 834, ps, [0.05, 0.25, 0.45])
    # curves cross where 0.1+x == 0.05+2x within the first interval
    assert crossing_point(a, b) == pytest.approx(0.15)
    with pytest.raises(ValueError):
        crossing_point(a, mk(4, 834, [0.1, 0.2], [0.1, 0.2]))


def test_crossing_point_requires_sign_change():
    def mk(radius, ps, rates):
        return [
            McPoint(radius, 10, p, 100, int(100 * r), r, 0.01)
            for p, r in zip(ps, rates)
        ]

    ps = [0.1, 0.2]
    with pytest.raises(ValueError):
        crossing_point(mk(3, ps, [0.1, 0.2]), mk(4, ps, [0.05, 0.15]))


def synthetic_points(p_th, nu, coeffs, pairs, ps):
    points = []
    for radius, n in pairs:
        for p in ps:
            x = (p - p_th) * n ** (1.0 / nu)
            rate = coeffs[0] + coeffs[1] * x + coeffs[2] * x * x
            points.append(McPoint(radius, n, p, 2000, 0, rate, 0.01))
    return points


def test_fit_threshold_recovers_synthetic_parameters():
    pairs = [(2, 36), (3, 174), (4, 834)]
    ps = [0.14 + 0.005 * i for i in range(21)]
    points = synthetic_points(0.188, 2.970, (0.12, 0.9, 1.4), pairs, ps)
    fit = fit_threshold(points)
    assert fit.p_th == pytest.approx(0.188, abs=2e-3)
    assert fit.nu == pytest.approx(2.970, abs=2e-2)
    assert fit.rss < 1e-6
    assert len(fit.coeffs) == 3


def test_fit_threshold_needs_two_radii():
    ps = [0.1, 0.15, 0.2, 0.25]
    points = synthetic_points(0.18, 3.0, (0.1, 1.0, 1.0), [(2, 36)], ps)
    with pytest.raises(ValueError):
        fit_threshold(points)


def test_fit_threshold_rejects_flat_rates():
    pairs = [(2, 36), (3, 174)]
    ps = [0.1, 0.15, 0.2, 0.25]
    points = [
        McPoint(radius, n, p, 100, 10, 0.1, 0.01)
        for radius, n in pairs
        for p in ps
    ]
    with pytest.raises(ValueError):
        fit_threshold(points)
