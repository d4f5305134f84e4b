import numpy as np
import pytest

from seqdrift import (
    DataError,
    Detector,
    Discriminator,
    Mode,
    OselmParams,
    ReconstructionConfig,
    fit_initial,
    init_state,
    new_model,
)
from seqdrift.checkpoint import pack_arrays
from seqdrift.detector import centroid_displacement
from seqdrift.streams import DriftSchedule, GaussianStreamConfig, gen_drift_stream


def one_d_discriminator(theta_error=0.0, theta_drift=1.0):
    d = Discriminator([new_model(OselmParams(1, 1))], np.array([[0.0]]), [1])
    d.theta_error, d.theta_drift = theta_error, theta_drift
    return d


def simulate(d, stream, W):
    """Line-by-line replay of the detection loop (window reset + per-sample labels).

    Returns the index of the first detection and the per-step dist values.
    """
    C, D = d.train_cor.shape
    drift = check = False
    win = 0
    cor = [list(r) for r in d.train_cor]
    num = [0] * C
    dist = 0.0
    dists = []
    for i, data in enumerate(stream):
        c = None
        if not drift and not check:
            scores = [m.anomaly_score(data) for m in d.instances]
            c = min(range(C), key=lambda k: (scores[k], k))
            if scores[c] >= d.theta_error:
                check = True
                win = 0
                cor = [list(r) for r in d.train_cor]
                num = [0] * C
        elif check:
            scores = [m.anomaly_score(data) for m in d.instances]
            c = min(range(C), key=lambda k: (scores[k], k))
        if check and win < W:
            cor[c] = [(cor[c][j] * num[c] + data[j]) / (num[c] + 1) for j in range(D)]
            num[c] += 1
            dist = sum(abs(cor[a][j] - d.train_cor[a][j]) for a in range(C) for j in range(D))
            win += 1
            if win == W:
                if dist >= d.theta_drift:
                    drift = True
                check = False
        dists.append(dist)
        if drift:
            return i, dists
    return None, dists


def test_init_state_fresh_copy():
    d = one_d_discriminator()
    s = init_state(d, 100)
    assert s.W == 100 and not s.drift and not s.check and s.win == 0 and s.dist == 0
    np.testing.assert_array_equal(s.cor, d.train_cor)
    assert s.cor is not d.train_cor
    s2 = init_state(d, 100)
    assert np.array_equal(s.cor, s2.cor) and np.array_equal(s.num, s2.num)


def test_worked_example_detects_on_fourth_sample():
    d = one_d_discriminator(theta_error=0.0, theta_drift=1.0)
    det = Detector(d, 4, ReconstructionConfig(1, 1, 2))
    outs = [det.step([2.0]) for _ in range(3)]
    assert [o.drift_detected for o in outs] == [False] * 3
    assert all(o.mode == Mode.CHECKING for o in outs)
    s = det.state
    assert s.win == 3 and s.cor[0, 0] == 2.0 and s.dist == 2.0
    out = det.step([2.0])
    assert out.drift_detected and out.mode == Mode.RECONSTRUCTING and out.dist == 2.0
    assert simulate(one_d_discriminator(), [[2.0]] * 4, 4)[0] == 3


def test_unreachable_trigger_never_checks(rng):
    d = one_d_discriminator(theta_error=np.inf)
    det = Detector(d, 4)
    for x in rng.normal(5, 3, (500, 1)):
        out = det.step(x)
        assert out.mode == Mode.NORMAL and not out.drift_detected
    assert not det.state.drift
    np.testing.assert_array_equal(det.state.cor, d.train_cor)


@pytest.mark.parametrize("seed", range(4))
def test_matches_line_by_line_simulation(seed):
    train, test, _ = gen_drift_stream(DriftSchedule("sudden", 600), GaussianStreamConfig(n_test=1500), seed)
    d = fit_initial(train.X, train.labels, OselmParams(8, 4, seed=seed))
    det = Detector(d, 50)
    expected, dists = simulate(d, test.X, 50)
    got = None
    for i, x in enumerate(test.X):
        out = det.step(x)
        if out.drift_detected:
            got = i
            break
        assert out.dist == pytest.approx(dists[i], abs=1e-9)
    assert got == expected and got is not None


def test_dist_consistent_every_checking_step(rng):
    train, test, _ = gen_drift_stream(DriftSchedule("sudden", 500), GaussianStreamConfig(n_test=3000), 1)
    d = fit_initial(train.X, train.labels, OselmParams(8, 4))
    det = Detector(d, 30)
    for x in test.X:
        out = det.step(x)
        if out.mode == Mode.CHECKING:
            assert det.state.dist == pytest.approx(centroid_displacement(det.state.cor, d.train_cor), abs=1e-9)
        assert not (det.state.drift and det.state.check)
        assert 0 <= det.state.win <= det.state.W


def test_decisions_only_at_window_end():
    train, test, _ = gen_drift_stream(DriftSchedule("sudden", 500), GaussianStreamConfig(n_test=1200), 2)
    d = fit_initial(train.X, train.labels, OselmParams(8, 4))
    W = 25
    det = Detector(d, W)
    opened = None
    for i, x in enumerate(test.X):
        was_checking = det.state.check
        out = det.step(x)
        if out.mode == Mode.CHECKING and not was_checking:
            assert opened is None  # one window at a time
            opened = i
        if out.drift_detected:
            assert i - opened == W - 1
            break
        if opened is not None and not det.state.check:
            assert i - opened == W - 1
            opened = None


def test_no_reset_keeps_history():
    d = one_d_discriminator(theta_error=0.0, theta_drift=100.0)
    det = Detector(d, 2, reset_window=False)
    for v in (2.0, 2.0, 8.0, 8.0):
        det.step([v])
    assert det.state.cor[0, 0] == 5.0 and det.state.num[0] == 4


def test_reset_starts_each_window_from_trained():
    d = one_d_discriminator(theta_error=0.0, theta_drift=100.0)
    det = Detector(d, 2)
    for v in (2.0, 2.0, 8.0, 8.0):
        det.step([v])
    assert det.state.cor[0, 0] == 8.0 and det.state.num[0] == 2


def test_pinned_label_without_repredict(rng):
    train, test, _ = gen_drift_stream(DriftSchedule("sudden", 10_000), GaussianStreamConfig(n_test=400), 0)
    d = fit_initial(train.X, train.labels, OselmParams(8, 4))
    d.theta_drift = np.inf
    det = Detector(d, 40, repredict=False)
    for x in test.X:
        was_checking = det.state.check
        det.step(x)
        if det.state.check and not was_checking:
            pinned = det.state.last_label
        if det.state.check:
            assert det.state.num.sum() == det.state.num[pinned]


def test_recency_weight_ewma():
    d = one_d_discriminator(theta_error=0.0, theta_drift=100.0)
    det = Detector(d, 10, recency_weight=0.5)
    for v in (4.0, 0.0):
        det.step([v])
    assert det.state.cor[0, 0] == 2.0


def test_non_finite_and_shape_errors():
    det = Detector(one_d_discriminator(), 4)
    with pytest.raises(DataError):
        det.step([np.inf])
    with pytest.raises(DataError):
        det.step([1.0, 2.0])


def test_state_size_constant(rng):
    train, test, _ = gen_drift_stream(DriftSchedule("sudden", 1000), GaussianStreamConfig(n_test=3000), 0)
    d = fit_initial(train.X, train.labels, OselmParams(8, 4))
    det = Detector(d, 50)
    sizes = []
    for i, x in enumerate(test.X):
        det.step(x)
        if i in (99, 2999):
            sizes.append(len(pack_arrays(det.state.arrays())))
    assert sizes[0] == sizes[1]


def test_reconstruction_failure_keeps_old_model(monkeypatch):
    from seqdrift import NumericalError, OselmModel

    d = one_d_discriminator(theta_error=0.0, theta_drift=1.0)
    old = d.instances[0]
    det = Detector(d, 1, ReconstructionConfig(1, 1, 4))

    def boom(self, x):
        raise NumericalError("forced")

    monkeypatch.setattr(OselmModel, "seq_train", boom)
    outs = [det.step([5.0]) for _ in range(4)]
    assert outs[0].drift_detected
    assert any(o.reconstruction_failed for o in outs)
    assert d.instances[0] is old and not det.state.drift and det.rstate is None


def test_no_drift_false_alarm_rate():
    cfg = GaussianStreamConfig(n_test=5000)
    windows = 0
    for seed in range(20):
        train, test, _ = gen_drift_stream(DriftSchedule("sudden", 10**9), cfg, seed)
        d = fit_initial(train.X, train.labels, OselmParams(8, 4, seed=seed))
        det = Detector(d, 100)
        windows += sum(det.step(x).drift_detected for x in test.X)
    assert windows / (20 * 5000) * 10_000 <= 2


def test_delay_nondecreasing_in_window():
    train, test, meta = gen_drift_stream(DriftSchedule("sudden", 2000), GaussianStreamConfig(), 0)
    delays = []
    for W in (10, 50, 150):
        d = fit_initial(train.X, train.labels, OselmParams(8, 4))
        det = Detector(d, W)
        hit = next(i for i, x in enumerate(test.X) if det.step(x).drift_detected and i >= 2000)
        delays.append(hit - 2000)
    assert delays == sorted(delays)
