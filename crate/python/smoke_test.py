"""Smoke test for the fdlab_py extension.

Build and install first, e.g. `maturin develop --release -m crates/python/Cargo.toml`,
then run `python python/smoke_test.py` or `pytest python/`.
"""

import cmath
import json
import math

import fdlab_py as fd


def lebesgue_hat(xi):
    return cmath.exp(-1j * math.pi * xi) * math.sin(math.pi * xi) / (math.pi * xi)


def test_transforms():
    lam = fd.Measure.lebesgue()
    assert abs(fd.ft(lam, 0.5) - lebesgue_hat(0.5)) < 1e-14
    assert abs(fd.ft_quadrature(lam, 0.5) - fd.ft(lam, 0.5)) < 1e-10
    assert abs(fd.oscillatory_integral(-3, 3) + 0.5j) < 1e-15
    g = fd.measex_density(1)
    h = fd.measex_density(-1)
    both = fd.Measure.mixture([g, h], [1.0, 1.0])
    xs = [0.5, 3.0, 16.0, 100.25]
    for a, b in zip(fd.ft_many(both, xs), xs):
        assert abs(a - 2 * lebesgue_hat(b)) < 1e-12


def test_combinators_and_json():
    m = fd.Measure.uniform([(0.1, 0.4)]).smooth_cut(0.25, 0.15).translate(0.2)
    back = fd.Measure.from_json(m.to_json())
    assert back.to_json() == m.to_json()
    assert fd.ft(back, 3.3) == fd.ft(m, 3.3)
    assert not m.has_atoms() and m.ambient_dim == 1


def test_decay_and_energy():
    capped, _, windows = fd.decay_exponent(fd.Measure.dirac(0.3))
    assert capped <= 0.01 and len(windows) >= 8
    capped, _, _ = fd.decay_exponent(fd.Measure.lebesgue())
    assert capped >= 0.95
    cantor_schedule = json.dumps({"kind": "Lacunary", "base": 3, "exponents": list(range(1, 30)), "max_multiplier": 1})
    capped, _, _ = fd.decay_exponent(fd.cantor_measure(), cantor_schedule, "envelope_slope")
    assert capped <= 0.05
    value, err, infinite = fd.energy(fd.Measure.lebesgue(), 0.5)
    assert not infinite and abs(value - 8 / 3) < 1e-3 and err >= 0
    assert fd.energy(fd.Measure.dirac(0.5), 0.5)[2]


def test_bounds_and_lattice():
    j, value, bound = fd.lower_bound_search(fd.Measure.dirac(1.0), 1.0)
    assert j == 1 and value == 1.0 and abs(bound - 0.21995) < 1e-4
    assert abs(fd.wiener_average(fd.Measure.atomic([(0.1, 0.5), (0.8, 0.5)]), 1e4) - 0.5) < 0.02
    assert fd.perp([[1.0, 0.0], [0.0, 0.0]], [0], "measures") == [1]
    assert fd.quasiconvex_weights([1.0, 1.0]) == [2 / 3, 1 / 3]
    assert fd.setex_measure(2, 4).mass() == 1.0


def test_runner_and_errors():
    summary = json.loads(fd.run_experiment(json.dumps({"experiment": "galois", "seed": 7})))
    assert summary["violations"] == 0 and summary["passed"]
    for call in (
        lambda: fd.run_experiment('{"experiment": "nope"}'),
        lambda: fd.Measure.dirac(2.0),
        lambda: fd.energy(fd.Measure.lebesgue(), 1.5),
    ):
        try:
            call()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")
    try:
        fd.energy(fd.Measure.lebesgue(), 0.5, method="fourier", cutoff=1.5)
    except ArithmeticError:
        pass
    else:
        raise AssertionError("expected ArithmeticError")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print("ok", name)
