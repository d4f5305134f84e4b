import itertools

import numpy as np
import pytest
from sklearn.cluster import KMeans

from seqdrift import ConfigError, DataError
from seqdrift.streams import (
    CsvSchema,
    DriftSchedule,
    FanStreamConfig,
    GaussianStreamConfig,
    MinMaxScaler,
    NslKddConfig,
    gen_drift_stream,
    gen_fan_stream,
    kmeans_label,
    load_csv,
    prepare_nslkdd,
    write_csv,
)
from seqdrift.streams.nslkdd import LABELS


def write(path, text):
    path.write_text(text)
    return path


# ------------------------------------------------------------------ csv


def test_minmax_example(tmp_path):
    p = write(tmp_path / "a.csv", "f0,label\n0,a\n5,a\n10,b\n")
    train, test, meta = load_csv(p, CsvSchema(n_train=3))
    np.testing.assert_allclose(train.X.ravel(), [0, 0.5, 1])
    assert train.labels.tolist() == [0, 0, 1] and meta.label_names == ["a", "b"] and len(test) == 0


def test_test_values_clipped(tmp_path):
    p = write(tmp_path / "a.csv", "f0,f1\n0,1\n10,1\n-5,1\n20,1\n")
    train, test, _ = load_csv(p, CsvSchema(n_train=2, label_column=None))
    np.testing.assert_array_equal(test.X[:, 0], [0.0, 1.0])
    np.testing.assert_array_equal(train.X[:, 1], [0.0, 0.0])  # constant column -> 0
    assert test.labels is None


def test_malformed_row_reports_line(tmp_path):
    p = write(tmp_path / "a.csv", "f0,label\n1,a\n2\n3,a\n")
    with pytest.raises(DataError, match="row 3"):
        load_csv(p, CsvSchema(n_train=1))
    p = write(tmp_path / "b.csv", "f0,label\n1,a\nx,a\n")
    with pytest.raises(DataError, match="row 3"):
        load_csv(p, CsvSchema(n_train=1))


def test_unknown_label(tmp_path):
    p = write(tmp_path / "a.csv", "f0;label\n1;a\n2;c\n")
    with pytest.raises(DataError, match="unknown label"):
        load_csv(p, CsvSchema(n_train=1, delimiter=";", label_values=["a", "b"]))


def test_headerless_and_delimiter(tmp_path):
    p = write(tmp_path / "a.csv", "0;1;0\n2;3;1\n4;5;1\n")
    train, test, meta = load_csv(p, CsvSchema(n_train=2, header=False, delimiter=";"))
    assert meta.dim == 2 and test.labels.tolist() == [1]


def test_normalization_round_trip(rng):
    X = rng.normal(3, 7, (50, 4))
    s = MinMaxScaler(clip=False).fit(X)
    np.testing.assert_allclose(s.inverse_transform(s.transform(X)), X, atol=1e-12)


def test_generated_stream_csv_round_trip(tmp_path):
    train, test, meta = gen_drift_stream(DriftSchedule("sudden", 50), GaussianStreamConfig(n_train=40, n_test=100), 1)
    write_csv(tmp_path / "s.csv", train, test)
    tr, te, m2 = load_csv(tmp_path / "s.csv", CsvSchema(n_train=40, normalize=False, drift_points=[50]))
    np.testing.assert_array_equal(tr.X, train.X)
    np.testing.assert_array_equal(te.labels, test.labels)
    assert m2.drift_points == [50]


# ------------------------------------------------------------------ nsl-kdd


def fake_kdd(path, n_normal, n_neptune, n_other, rng):
    rows = []
    for label, n in (("normal", n_normal), ("neptune", n_neptune), ("smurf", n_other)):
        for _ in range(n):
            feats = [str(round(v, 3)) for v in rng.random(41)]
            feats[1], feats[2], feats[3] = "tcp", "http", "SF"
            rows.append(",".join(feats + [label, "21"]))
    order = rng.permutation(len(rows))
    path.write_text("\n".join(rows[i] for i in order) + "\n")
    return path


def test_prepare_nslkdd_sizes(tmp_path, rng):
    tr = fake_kdd(tmp_path / "KDDTrain+.txt", 700, 500, 50, rng)
    te = fake_kdd(tmp_path / "KDDTest+.txt", 90, 40, 30, rng)
    cfg = NslKddConfig(n_train=252, drift_at=833, seed=4)
    train, test, meta = prepare_nslkdd(tr, te, cfg)
    assert len(train) == 252 and len(test) == 833 + 130
    assert meta.dim == 38 and meta.drift_points == [833] and meta.label_names == list(LABELS)
    assert train.X.min() >= 0 and train.X.max() <= 1
    again = prepare_nslkdd(tr, te, cfg)
    np.testing.assert_array_equal(again[1].X, test.X)


def test_prepare_nslkdd_default_sizes(tmp_path, rng):
    tr = fake_kdd(tmp_path / "KDDTrain+.txt", 6000, 4900, 0, rng)
    te = fake_kdd(tmp_path / "KDDTest+.txt", 9711, 4657, 0, rng)
    train, test, meta = prepare_nslkdd(tr, te)
    assert (len(train), len(test), meta.drift_points) == (2522, 22701, [8333])


def test_prepare_nslkdd_errors(tmp_path, rng):
    with pytest.raises(DataError, match="Download"):
        prepare_nslkdd(tmp_path / "missing.txt", tmp_path / "missing2.txt")
    tr = fake_kdd(tmp_path / "tr.txt", 10, 10, 0, rng)
    te = fake_kdd(tmp_path / "te.txt", 10, 10, 0, rng)
    with pytest.raises(DataError, match="need"):
        prepare_nslkdd(tr, te)


# ------------------------------------------------------------------ k-means


def best_two_partition(x):
    best, labels = np.inf, None
    n = len(x)
    for mask in itertools.product([0, 1], repeat=n - 1):
        lab = np.array((0,) + mask)
        if lab.sum() == 0:
            continue
        cost = sum(((x[lab == k] - x[lab == k].mean()) ** 2).sum() for k in (0, 1))
        if cost < best:
            best, labels = cost, lab
    return labels


def same_partition(a, b):
    return all((a[i] == a[j]) == (b[i] == b[j]) for i in range(len(a)) for j in range(len(a)))


def test_kmeans_single_cluster(rng):
    assert kmeans_label(rng.random((30, 3)), 1).tolist() == [0] * 30


def test_kmeans_blobs_match_exhaustive(rng):
    x = np.concatenate([rng.normal(0, 1, 6), rng.normal(100, 1, 6)])
    labels = kmeans_label(x[:, None], 2, seed=1)
    assert same_partition(labels, best_two_partition(x))


def test_kmeans_matches_sklearn_up_to_permutation(rng):
    centers = np.array([[0, 0], [10, 0], [0, 10]])
    X = np.vstack([c + rng.normal(0, 0.5, (40, 2)) for c in centers])
    ours = kmeans_label(X, 3, seed=2)
    theirs = KMeans(3, n_init=10, random_state=0).fit_predict(X)
    assert same_partition(ours, theirs)


def test_kmeans_deterministic_and_empty_reseed(rng):
    X = rng.random((50, 2))
    assert np.array_equal(kmeans_label(X, 4, seed=9), kmeans_label(X, 4, seed=9))
    dup = np.zeros((5, 2))
    labels = kmeans_label(dup, 3, seed=0)
    assert set(labels.tolist()) == {0, 1, 2}


def test_kmeans_errors():
    with pytest.raises(ConfigError):
        kmeans_label(np.zeros((3, 2)), 0)
    with pytest.raises(DataError):
        kmeans_label(np.zeros((0, 2)), 2)


# ------------------------------------------------------------------ generators


@pytest.mark.parametrize("kwargs", [dict(kind="sideways"), dict(kind="gradual", drift_at=10),
                                    dict(kind="reoccurring", drift_at=10, drift_end=5), dict(drift_at=0)])
def test_invalid_schedules(kwargs):
    with pytest.raises(ConfigError):
        DriftSchedule(**kwargs)


def test_sudden_boundary():
    _, test, _ = gen_drift_stream(DriftSchedule("sudden", 120), GaussianStreamConfig(n_test=300), 0)
    assert test.concept[119] == 0 and test.concept[120] == 1


def test_generators_are_pure():
    s = DriftSchedule("gradual", 100, 200)
    a = gen_drift_stream(s, GaussianStreamConfig(n_test=400), 5)
    b = gen_drift_stream(s, GaussianStreamConfig(n_test=400), 5)
    assert a[1].X.tobytes() == b[1].X.tobytes() and a[0].X.tobytes() == b[0].X.tobytes()
    f1 = gen_fan_stream(s, FanStreamConfig(n_test=300), 5)
    f2 = gen_fan_stream(s, FanStreamConfig(n_test=300), 5)
    assert f1[1].X.tobytes() == f2[1].X.tobytes()


def test_fan_dimension():
    train, test, meta = gen_fan_stream(DriftSchedule("sudden", 120))
    assert train.dim == test.dim == meta.dim == 511
    assert len(test) == 700


def test_gradual_ramp_frequencies():
    sched = DriftSchedule("gradual", 0 + 1, 10_001)
    _, test, _ = gen_drift_stream(sched, GaussianStreamConfig(n_test=10_001, n_train=10), 0)
    ramp = test.concept[1:10_001]
    for k in range(10):
        frac = ramp[k * 1000:(k + 1) * 1000].mean()
        assert abs(frac - (k + 0.5) / 10) <= 0.03


def test_gradual_ramp_frequencies_pooled():
    sched = DriftSchedule("gradual", 1, 10_001)
    pooled = np.mean([gen_drift_stream(sched, GaussianStreamConfig(n_test=10_001, n_train=10), s)[1].concept[1:]
                      for s in range(20)], axis=0)
    for k in range(10):
        assert abs(pooled[k * 1000:(k + 1) * 1000].mean() - (k + 0.5) / 10) <= 0.01


def test_incremental_interpolates_means():
    cfg = GaussianStreamConfig(n_test=400, std=1e-9)
    old, new = cfg.means()
    _, test, _ = gen_drift_stream(DriftSchedule("incremental", 100, 300), cfg, 0)
    i = 200
    lab = test.labels[i]
    np.testing.assert_allclose(test.X[i], 0.5 * old[lab] + 0.5 * new[lab], atol=1e-6)


def test_reoccurring_window():
    _, test, _ = gen_drift_stream(DriftSchedule("reoccurring", 120, 170), GaussianStreamConfig(n_test=300), 0)
    assert test.concept[119] == 0 and test.concept[120:170].all() and test.concept[170] == 0


def test_pre_drift_identical_across_kinds():
    scheds = [DriftSchedule("sudden", 300), DriftSchedule("gradual", 300, 600),
              DriftSchedule("incremental", 300, 600), DriftSchedule("reoccurring", 300, 350)]
    streams = [gen_drift_stream(s, GaussianStreamConfig(n_test=800), 7)[1] for s in scheds]
    for s in streams[1:]:
        assert s.X[:300].tobytes() == streams[0].X[:300].tobytes()
    fans = [gen_fan_stream(s, FanStreamConfig(n_test=700), 7)[1] for s in scheds]
    for s in fans[1:]:
        assert s.X[:300].tobytes() == fans[0].X[:300].tobytes()


def test_drifted_cluster_geometry():
    old, new = GaussianStreamConfig().means()
    moved = new[1]
    l1 = np.abs(old - moved).sum(axis=1)
    l2 = np.sqrt(((old - moved) ** 2).sum(axis=1))
    assert l1[1] < l1[0] and l2[0] < l2[1]
