from __future__ import annotations

import contextlib
import csv
import io
import threading

import pytest

from parcomb.bench import cli
from parcomb.bench.locks import FairLock, RWLock
from parcomb.bench.workloads import (
    CSV_FIELDS,
    ConfigError,
    WorkloadConfig,
    edge_universe,
    graph_ops,
    pq_ops,
)
from parcomb.verification import Verdict


def test_fair_lock_counts():
    lock = FairLock()
    n = [0]

    def worker():
        for _ in range(300):
            with lock:
                n[0] += 1

    threads = [threading.Thread(target=worker) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert n[0] == 1200
    with pytest.raises(RuntimeError):
        lock.release()


def test_rw_lock_readers_share():
    rw = RWLock()
    rw.acquire_read()
    rw.acquire_read()
    rw.release_read()
    rw.release_read()
    rw.acquire_write()
    rw.release_write()


def test_bad_configs_rejected():
    with pytest.raises(ConfigError):
        WorkloadConfig("pq-parallel-combining", threads=0)
    with pytest.raises(ConfigError):
        WorkloadConfig("graph-coarse-lock", read_fraction=1.5)
    with pytest.raises(ConfigError):
        WorkloadConfig("nope")


def test_streams_are_seeded():
    cfg = WorkloadConfig("pq-parallel-combining", seed=3)
    s1, s2 = pq_ops(cfg, 0, 1), pq_ops(cfg, 0, 1)
    assert [next(s1) for _ in range(200)] == [next(s2) for _ in range(200)]
    other = pq_ops(WorkloadConfig("pq-parallel-combining", seed=4), 0, 1)
    mine = pq_ops(cfg, 0, 1)
    assert [next(other) for _ in range(50)] != [next(mine) for _ in range(50)]


def test_graph_stream_mix():
    cfg = WorkloadConfig("graph-parallel-combining", size=500, read_fraction=0.8, seed=1)
    ops = graph_ops(cfg, edge_universe(cfg), 0, 0)
    methods = [next(ops)[0] for _ in range(5000)]
    reads = methods.count("connected") / len(methods)
    assert 0.77 < reads < 0.83
    adds = methods.count("add_edge")
    removes = methods.count("remove_edge")
    assert abs(adds - removes) < 200


def _run_cli(argv):
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        code = cli.main(argv)
    return code, out.getvalue()


def test_cli_config_error_exit_code(capsys):
    assert cli.main(["--bench", "pq", "--impl", "graph-coarse-lock"]) == cli.EXIT_CONFIG
    assert cli.main(["--bench", "pq", "--threads", "x"]) == cli.EXIT_CONFIG
    assert cli.main(["--bench", "graph", "--read-fraction", "2"]) == cli.EXIT_CONFIG
    assert "error" in capsys.readouterr().err


def test_cli_verification_failure_exit_code(monkeypatch):
    monkeypatch.setattr(cli, "check_pq", lambda cfg: Verdict.fail("planted"))
    code, _ = _run_cli(["--bench", "pq", "--checked", "--duration", "0.1", "--warmup", "0", "--reps", "1"])
    assert code == cli.EXIT_VERIFY


@pytest.mark.parametrize("bench,impl", [
    ("pq", "pq-parallel-combining"),
    ("pq", "pq-coarse-lock"),
    ("graph", "graph-parallel-combining"),
    ("graph", "graph-rw-lock"),
])
def test_cli_checked_run_writes_csv(bench, impl):
    code, text = _run_cli([
        "--bench", bench, "--impl", impl, "--threads", "1,2", "--size", "300",
        "--duration", "0.1", "--warmup", "0", "--reps", "2", "--checked",
    ])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert tuple(rows[0].keys()) == CSV_FIELDS
    assert len(rows) == 2 * 3  # per thread count: 2 reps and a mean
    assert all(float(r["throughput_ops_per_sec"]) > 0 for r in rows)
    assert {r["structure"] for r in rows} == {impl}
