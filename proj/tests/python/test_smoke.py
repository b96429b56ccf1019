import math
import os
import sys
import tempfile

import numpy as np
import pytest

import scalebench as sb

DATA = os.environ.get("SCALEBENCH_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data", "keel"))


def test_names():
    assert sb.scaler_names()[:3] == ["NS", "MC", "SS"]
    assert "knorae" in sb.model_names()
    assert sb.__version__ == "0.1.0"


def test_standard_scaler():
    rng = np.random.default_rng(0)
    x = rng.normal(5.0, 3.0, size=(200, 3))
    f = sb.fit_scaler("SS", x)
    z = f.transform(x)
    assert np.allclose(z.mean(axis=0), 0.0, atol=1e-9)
    assert np.allclose(z.std(axis=0), 1.0, atol=1e-9)
    assert np.allclose(z, (x - np.array(f.translation)) / np.array(f.scale))
    mm = sb.fit_scaler("MM(-1,1)", x).transform(x)
    assert mm.min() == pytest.approx(-1.0) and mm.max() == pytest.approx(1.0)
    with pytest.raises(ValueError):
        sb.fit_scaler("XX", x)


def test_metrics_and_stats():
    assert sb.confusion([1, 0, 1, 0, 1], [1, 1, 0, 0, 1]) == (2, 1, 1, 1)
    assert sb.f1(3, 1, 2, 0) == pytest.approx(3 / 4.5)
    assert sb.f_beta(3, 1, 2, 0, 1.0) == sb.f1(3, 1, 2, 0)
    assert sb.g_mean(8, 1, 2, 9) == pytest.approx(math.sqrt(0.72))
    assert round(sb.imbalance_ratio(76, 138), 2) == 1.82
    assert sb.ir_stratum(9.0) == "Medium"
    assert abs(sb.chi2_sf(3.841, 1) - 0.05) < 5e-4
    assert abs(sb.nemenyi_cd(6, 82) - 0.8327) < 5e-4
    scores = np.array([[0.9, 0.5, 0.1], [0.8, 0.6, 0.2], [0.7, 0.4, 0.3]])
    r = sb.friedman(scores)
    assert r["statistic"] == pytest.approx(6.0) and r["df"] == 2
    assert sb.fractional_wins(scores) == [3.0, 0.0, 0.0]
    assert sb.average_ranks(scores) == [1.0, 2.0, 3.0]


def test_folds_and_cell():
    folds = sb.load_folds(os.path.join(DATA, "glass1"), "glass1")
    assert len(folds) == 5
    assert sum(len(f[3]) for f in folds) == 214
    x_tr, y_tr, x_te, y_te = folds[0]
    a = sb.run_cell(x_tr, y_tr, x_te, y_te, "NS", "dt")
    b = sb.run_cell(x_tr, y_tr, x_te, y_te, "SS", "dt")
    assert a[0] == b[0]
    assert 0.0 <= a[1] <= 1.0


def test_experiment():
    with tempfile.TemporaryDirectory() as out:
        records = sb.run_experiment(DATA, out, datasets=["iris0"], models=["knn", "gnb"], scalers=["NS", "SS"])
        assert len(records) == 20
        assert os.path.exists(os.path.join(out, "results.csv"))
        assert {r["model"] for r in records} == {"knn", "gnb"}


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
