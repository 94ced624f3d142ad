import pytest

from hdunif import Cell, IncompleteGrid
from hdunif.montecarlo import CellResult, FrequencyRecord
from hdunif.plotting import emit_plot


def fake_result(n, p, ell, j, freq, asym):
    cell = Cell(family="fvml", n=n, p=p, ell=ell, j=j,
                tests=("rayleigh_highdim",), replicates=100)
    tf = FrequencyRecord(rejections=int(freq * 100), frequency=freq, se=0.01, asymptotic=asym)
    return CellResult(cell=cell, per_test={"rayleigh_highdim": tf},
                      wall_seconds=0.0, master_seed=1)


def full_grid():
    results = []
    for n in (30, 100):
        for p in (30, 100):
            for ell in range(3):
                freq = 0.05 if ell == 0 else 0.05 + 0.3 * ell
                results.append(fake_result(n, p, float(ell), 2, freq, freq))
    return results


def test_svg_bytes_deterministic(tmp_path):
    results = full_grid()
    p1 = tmp_path / "a.svg"
    p2 = tmp_path / "b.svg"
    emit_plot(results, str(p1), title="demo")
    emit_plot(results, str(p2), title="demo")
    b1, b2 = p1.read_bytes(), p2.read_bytes()
    assert b1 == b2
    assert b1.startswith(b"<?xml")


def test_incomplete_grid_rejected(tmp_path):
    results = full_grid()[:-1]
    with pytest.raises(IncompleteGrid):
        emit_plot(results, str(tmp_path / "x.svg"))


def test_empty_rejected(tmp_path):
    with pytest.raises(IncompleteGrid):
        emit_plot([], str(tmp_path / "x.svg"))
