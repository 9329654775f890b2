import json
import math

import numpy as np
import pytest

import qrevival


def test_version():
    assert qrevival.__version__ == "1.0.0"


def test_characteristic_values():
    # Integer orders at q = 0 reduce to nu^2.
    assert qrevival.characteristic(3, 0.0) == pytest.approx(9.0, abs=1e-12)
    a0 = qrevival.characteristic(0, 1.0)
    assert a0 == pytest.approx(-0.4551386041, abs=1e-9)
    b1 = qrevival.characteristic(1, 1.0, kind="odd")
    assert b1 == pytest.approx(-0.1102488170, abs=1e-9)
    assert qrevival.characteristic(0, 1.0, method="series_small_q") == pytest.approx(a0, abs=1e-3)


def test_config_round_trip_and_hash():
    canonical = qrevival.canonical_config("{}")
    assert json.loads(canonical)["lattice"]["V0"] == 16.0
    assert qrevival.config_hash(canonical) == qrevival.config_hash("{}")
    assert len(qrevival.config_hash()) == 16


def test_errors_map_to_exceptions():
    with pytest.raises(qrevival.ConfigError):
        qrevival.canonical_config('{"lattice": {"depth": 1}}')
    with pytest.raises(qrevival.DomainError):
        qrevival.canonical_config('{"lattice": {"V0": -1}}')
    assert issubclass(qrevival.ConfigError, qrevival.QrevError)


def test_times_and_sweep():
    t = qrevival.times('{"lattice": {"lambda": 3.0}}', method="lattice_deep")
    assert 0 < t["t_cl"] < t["t_rev"] < t["t_spr"]
    s = qrevival.sweep('{"sweep": {"lambda_min": 2, "lambda_max": 6, "n_points": 5}}')
    assert isinstance(s["t_rev"], np.ndarray)
    assert s["lambda"].tolist() == [2.0, 3.0, 4.0, 5.0, 6.0]


def test_short_evolution_conserves_norm():
    cfg = {"lattice": {"lambda": 1.5}, "evolve": {"grid": {"cells": 8, "points": 1024}, "n_steps": 200}}
    run = qrevival.evolve(json.dumps(cfg))
    c = run["autocorrelation"]
    assert c.dtype == np.complex128
    assert abs(c[0]) == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.abs(c) <= 1.0 + 1e-9)
    assert len(run["tau"]) == 201
    assert run["tau"][-1] == pytest.approx(200 * 2 * math.pi / 500)


def test_poincare_shape():
    cfg = {"poincare": {"periods": 5, "points": [[0.0, 0.5], [1.0, -0.5]]}}
    sec = qrevival.poincare(json.dumps(cfg), lambda_=1.0)
    assert len(sec["z"]) == 2 * 6
    assert np.all((sec["z"] >= -math.pi) & (sec["z"] < math.pi))


def test_validation_entry_point():
    assert qrevival.validation_count() == 13
    (row,) = qrevival.validate([1])
    assert row["name"] == "mathieu_exactness"
    assert row["pass"]
