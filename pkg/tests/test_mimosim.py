import math

import numpy as np
import pytest
from scipy import stats

from natorder.mimosim.channel import DEFAULT_SIGMA_H, channel_sample, ml_decode
from natorder.mimosim.rng import CounterStream
from natorder.mimosim.simulate import (
    MAX_CODEBOOK,
    SimConfig,
    SimulationError,
    loglog_slope,
    monotone_within_ci,
    simulate,
    wilson_halfwidth,
)
from natorder.stlattice.codebook import build_codebook, write_codebook
from natorder.stlattice.lattice import lattice_basis


@pytest.fixture(scope="module")
def golden_words(golden):
    return build_codebook(lattice_basis(golden, "symmetric"), "qam4")


def _cfg(path, **kw):
    doc = dict(codebook=str(path), snr_grid_db=[0.0, 10.0], trials_per_point=400, seed=5)
    doc.update(kw)
    return SimConfig(**doc)


# -- random streams -----------------------------------------------------------------
def test_streams_are_reproducible():
    a = CounterStream(42, 1, 7).uniform(1000)
    b = CounterStream(42, 1, 7).uniform(1000)
    assert a.tobytes() == b.tobytes()
    assert not np.array_equal(a, CounterStream(42, 1, 8).uniform(1000))
    assert not np.array_equal(a, CounterStream(42, 2, 7).uniform(1000))


def test_uniforms_on_53_bit_grid():
    u = CounterStream(1).uniform(10000)
    assert u.min() >= 0 and u.max() < 1
    assert np.all(u * 2.0**53 == np.floor(u * 2.0**53))


def test_stream_arguments_checked():
    with pytest.raises(ValueError):
        CounterStream(-1)
    with pytest.raises(ValueError):
        CounterStream(1, 2**32)


def test_integers_in_range():
    x = CounterStream(3).integers(5000, 7)
    assert x.min() == 0 and x.max() == 6


# -- channel ------------------------------------------------------------------------
def test_channel_is_deterministic():
    h1 = channel_sample(CounterStream(42), 2, 2)
    h2 = channel_sample(CounterStream(42), 2, 2)
    assert h1.shape == (2, 2)
    assert h1.tobytes() == h2.tobytes()


def test_channel_mean():
    h = channel_sample(CounterStream(11), 1, 1, count=100_000).ravel()
    assert abs(h.real.mean()) < 3 * DEFAULT_SIGMA_H / math.sqrt(100_000)
    assert abs(h.imag.mean()) < 3 * DEFAULT_SIGMA_H / math.sqrt(100_000)


def test_channel_envelope_is_rayleigh():
    h = channel_sample(CounterStream(12), 1, 1, count=100_000).ravel()
    res = stats.kstest(np.abs(h), stats.rayleigh(scale=DEFAULT_SIGMA_H).cdf)
    assert res.pvalue > 0.01


def test_channel_dimensions_checked():
    with pytest.raises(ValueError):
        channel_sample(CounterStream(1), 0, 2)


# -- ML decoding ----------------------------------------------------------------------
def test_noiseless_decoding_recovers_every_word(golden_words):
    X = golden_words.matrices
    H = channel_sample(CounterStream(9), 2, 2)
    for j in (0, 17, 255):
        assert ml_decode(H @ X[j], H, X) == j


def test_single_word_codebook():
    s = CounterStream(2)
    X = s.complex_normal((1, 2, 2), 1.0)
    Y = s.complex_normal((20, 2, 2), 5.0)
    H = s.complex_normal((20, 2, 2), 1.0)
    assert list(ml_decode(Y, H, X)) == [0] * 20


def test_ties_go_to_lowest_index():
    X = np.array([np.eye(2), 2 * np.eye(2), 2 * np.eye(2)], dtype=complex)
    H = np.eye(2)
    assert ml_decode(2 * np.eye(2), H, X) == 1


def test_decode_errors():
    with pytest.raises(ValueError, match="empty"):
        ml_decode(np.eye(2), np.eye(2), np.zeros((0, 2, 2)))
    with pytest.raises(ValueError, match="mismatch"):
        ml_decode(np.eye(3), np.eye(2), np.zeros((1, 2, 2)))


# -- simulation ---------------------------------------------------------------------
def test_wilson_interval():
    # textbook check: 0 of 10 gives the upper limit z^2 / (n + z^2)
    z = 1.959963984540054
    assert wilson_halfwidth(0, 10) == pytest.approx(z * z / (10 + z * z) / 2, rel=1e-12)
    assert wilson_halfwidth(50, 100) > wilson_halfwidth(500, 1000)


def test_config_preconditions(tmp_path):
    with pytest.raises(SimulationError, match="at least 1"):
        _cfg(tmp_path / "x.csv", trials_per_point=0).validate()
    with pytest.raises(SimulationError, match="desk limit"):
        _cfg(tmp_path / "x.csv", trials_per_point=100_001).validate()
    with pytest.raises(SimulationError, match="increasing"):
        _cfg(tmp_path / "x.csv", snr_grid_db=[3, 3]).validate()
    with pytest.raises(SimulationError, match="unknown"):
        SimConfig.from_dict({"codebook": "a.csv", "snr_grid_db": [0], "trials_per_point": 1, "snr": 3})


def test_codebook_limits(tmp_path):
    cfg = _cfg(tmp_path / "x.csv")
    with pytest.raises(SimulationError, match="capped"):
        simulate(cfg, np.zeros((MAX_CODEBOOK + 1, 2, 2)))
    with pytest.raises(SimulationError, match="square"):
        simulate(cfg, np.zeros((3, 2, 3)))
    with pytest.raises(SimulationError, match="empty"):
        simulate(cfg, np.zeros((0, 2, 2)))


def test_config_paths_relative_to_file(tmp_path):
    (tmp_path / "run.json").write_text('{"codebook": "cb.csv", "snr_grid_db": [0, 5], "trials_per_point": 10}')
    cfg = SimConfig.load(tmp_path / "run.json")
    assert cfg.codebook == str(tmp_path / "cb.csv")
    assert cfg.seed == 42


def test_near_noiseless_run_is_error_free(golden_words, tmp_path):
    path = tmp_path / "g.csv"
    write_codebook(golden_words, path)
    table = simulate(_cfg(path, snr_grid_db=[20.0], trials_per_point=1000, noise_scale=1e-6))
    assert table.rows[0].errors == 0


def test_rerun_is_byte_identical(golden_words, tmp_path):
    path = tmp_path / "g.csv"
    write_codebook(golden_words, path)
    a = simulate(_cfg(path)).to_csv()
    b = simulate(_cfg(path)).to_csv()
    assert a == b
    assert "# seed: 5" in a and "snr_db,trials,errors,cwer,ci95_halfwidth" in a


def test_partitioning_and_workers_do_not_change_counts(golden_words, tmp_path):
    path = tmp_path / "g.csv"
    write_codebook(golden_words, path)
    serial = simulate(_cfg(path, partition_size=100))
    threaded = simulate(_cfg(path, partition_size=100, workers=4))
    assert [r.errors for r in serial.rows] == [r.errors for r in threaded.rows]


def test_backends_agree(golden_words, tmp_path):
    path = tmp_path / "g.csv"
    write_codebook(golden_words, path)
    a = simulate(_cfg(path), backend="python")
    b = simulate(_cfg(path), backend="compiled")
    assert [r.errors for r in a.rows] == [r.errors for r in b.rows]


def test_table_invariants(golden_words, tmp_path):
    path = tmp_path / "g.csv"
    write_codebook(golden_words, path)
    table = simulate(_cfg(path, snr_grid_db=[0, 5, 10, 15]))
    for r in table.rows:
        assert 0 <= r.errors <= r.trials and 0 <= r.cwer <= 1
    assert monotone_within_ci(table)
    assert loglog_slope(table) < 0
