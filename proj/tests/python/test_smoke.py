import math
import pathlib
import random

import pytest

import kgraph

DATA = pathlib.Path(__file__).resolve().parents[2] / "data" / "ucr"


def two_family_series(n_per=10, length=60, seed=3):
    rng = random.Random(seed)
    rows, labels = [], []
    for family in range(2):
        for _ in range(n_per):
            phase = rng.uniform(0, 0.3)
            if family == 0:
                row = [math.sin(2 * math.pi * (t / 15 + phase)) for t in range(length)]
            else:
                row = [((t + int(phase * 20)) % 20) / 10 - 1 for t in range(length)]
            rows.append([v + rng.gauss(0, 0.02) for v in row])
            labels.append(family)
    return rows, labels


def test_metrics_match_known_values():
    assert kgraph.adjusted_rand_index([0, 0, 1, 1], [1, 1, 0, 0]) == pytest.approx(1.0)
    assert kgraph.rand_index([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(1 / 3)
    assert kgraph.nmi([0, 0, 1, 1], [0, 0, 1, 1]) == pytest.approx(1.0)
    assert kgraph.noise_ratio([0, 1, 0, 1, 0, 1]) == pytest.approx(1.0)


def test_fit_two_families():
    rows, labels = two_family_series()
    out = kgraph.fit(rows, k=2, m_lengths=6, seed=1)
    assert len(out["labels"]) == len(rows)
    assert set(out["labels"]) <= {0, 1}
    assert kgraph.adjusted_rand_index(labels, out["labels"]) == pytest.approx(1.0)
    report = out["report"]
    assert report["selected_length"] in out["lengths"]
    assert len(report["clusters"]) == 2


def test_fit_is_deterministic():
    rows, _ = two_family_series()
    a = kgraph.fit(rows, k=2, m_lengths=5, seed=9)
    b = kgraph.fit(rows, k=2, m_lengths=5, seed=9, workers=3)
    assert a["labels"] == b["labels"]
    assert a["report"] == b["report"]


def test_graph_conserves_transitions():
    rows, _ = two_family_series(n_per=3)
    g = kgraph.build_graph(rows, length=12, seed=4)
    assert sum(e["weight"] for e in g["edges"]) == sum(len(r) - 12 for r in rows)
    assert [len(p) for p in g["paths"]] == [len(r) - 11 for r in rows]


def test_constant_series_raise():
    with pytest.raises(RuntimeError, match="degenerate"):
        kgraph.fit([[1.0] * 30 for _ in range(6)], k=2, m_lengths=3)


def test_consensus_and_spectral_roundtrip():
    m = kgraph.consensus_matrix([[0, 0, 1, 1, 2, 2], [1, 1, 0, 0, 2, 2]])
    assert m.shape == (6, 6)
    labels = kgraph.spectral_clustering(m, 3, seed=0)
    assert kgraph.adjusted_rand_index(labels, [0, 0, 1, 1, 2, 2]) == pytest.approx(1.0)


@pytest.mark.skipif(not (DATA / "Trace").exists(), reason="Trace data not prepared")
def test_load_trace():
    d = kgraph.load_ucr(str(DATA / "Trace"))
    assert len(d["series"]) == 200
    assert len(d["labels"]) == 200
