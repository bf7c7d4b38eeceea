"""Exit criteria. Each test prints one PASS/FAIL line in the terminal summary."""

import json
import math
import random
import socket
import statistics
import threading
import time
from concurrent.futures import ThreadPoolExecutor

import httpx
import pytest
import uvicorn
from scipy.stats import spearmanr

from socrec.cli import run_cli
from socrec.evaluation import (SplitSpec, SyntheticParams, generate_synthetic, measure_runtime,
                               ndcg_at_k, precision_at_k, recall_at_k, run_coldstart_sweep,
                               run_evaluation, run_profile_sweep, split_train_test)
from socrec.ingestion import dump_jsonl
from socrec.model import AlgorithmId as A, Item, PurchaseEvent, build_dataset
from socrec.recommenders import build_item_index, recommend
from socrec.service import create_app
from socrec.service.app import VERSION_HEADER
from socrec.textindex import index_documents, more_like_this

import oracles

SOCIAL_ONLY = (A.CF_in, A.CF_l, A.CF_c, A.CF_g, A.CF_i, A.C_st)


def test_metric_oracles(criterion):
    with criterion("metric oracles: P/R/nDCG vs brute force on 1000 cases, |err| <= 1e-9, < 10 s") as note:
        start = time.perf_counter()
        rng = random.Random(1)
        universe = [f"i{j}" for j in range(40)]
        worst = 0.0
        for _ in range(1000):
            rec = rng.sample(universe, rng.randint(0, 20))
            rel = set(rng.sample(universe, rng.randint(0, 20)))
            k = rng.randint(1, 20)
            for fast, slow in ((precision_at_k, oracles.precision), (recall_at_k, oracles.recall),
                               (ndcg_at_k, oracles.ndcg)):
                worst = max(worst, abs(fast(rec, rel, k) - slow(rec, rel, k)))
        hand = ndcg_at_k(["a", "b", "c"], {"b", "c"}, 3)
        elapsed = time.perf_counter() - start
        note(f"max err {worst:.2e}, hand nDCG {hand:.4f}, {elapsed:.2f}s")
        assert worst <= 1e-9
        assert abs(hand - 0.6934) < 5e-5
        assert elapsed < 10


def test_retrieval_oracle(criterion):
    with criterion("retrieval oracle: MLT == brute-force cosine on 200 corpora <= 50 docs, < 30 s") as note:
        start = time.perf_counter()
        rng = random.Random(2)
        vocab = oracles.WORDS + ["alpha", "beta", "gamma", "delta", "omega"]
        for _ in range(200):
            docs = {f"d{j:02d}": " ".join(rng.choice(vocab) for _ in range(rng.randint(0, 8)))
                    for j in range(rng.randint(1, 50))}
            profile = {rng.choice(vocab): rng.choice([0.5, 1, 2, 3]) for _ in range(rng.randint(0, 30))}
            k = rng.randint(1, 10)
            idx = index_documents([(d, {"t": t}) for d, t in docs.items()])["t"]
            got = more_like_this(profile, idx, k)
            want = oracles.cosine_rank(profile, docs, k)
            assert [d for d, _ in got] == [d for d, _ in want]
            assert all(abs(a - b) <= 1e-12 for (_, a), (_, b) in zip(got, want))
        elapsed = time.perf_counter() - start
        note(f"{elapsed:.2f}s")
        assert elapsed < 30


def test_recommender_oracles(criterion):
    with criterion("recommender oracles: 12 algorithms == brute force on 50 instances, < 60 s") as note:
        start = time.perf_counter()
        hand = build_dataset([Item(i) for i in ("i1", "i2", "i3", "i4")],
                             [PurchaseEvent(u, i, 0) for u, i in (("u1", "i1"), ("u1", "i2"),
                              ("u2", "i1"), ("u2", "i2"), ("u2", "i3"), ("u3", "i4"))])
        recs = recommend(A.CF_p, "u1", hand, build_item_index(hand), 5)
        assert [r.item for r in recs] == ["i3"]
        assert abs(recs[0].score - 2 / math.sqrt(6)) <= 1e-12
        rng = random.Random(3)
        compared = 0
        for _ in range(50):
            ds = oracles.random_instance(rng)
            idx = build_item_index(ds)
            for alg in A:
                for user in sorted(ds.users):
                    got = [(r.item, r.score) for r in recommend(alg, user, ds, idx, 10)]
                    want = oracles.brute_recommend(alg, ds, user, 10)
                    assert [i for i, _ in got] == [i for i, _ in want], (alg, user)
                    assert all(abs(a - b) <= 1e-12 for (_, a), (_, b) in zip(got, want))
                    compared += 1
        elapsed = time.perf_counter() - start
        note(f"{compared} lists compared, CF_p hand score {recs[0].score:.4f}, {elapsed:.2f}s")
        assert elapsed < 60


@pytest.fixture(scope="module")
def mixed_population():
    # half the users carry full social profiles (pool B), half are marketplace-only (pool M)
    return generate_synthetic(SyntheticParams(user_count=1000, community_count=10,
                                              social_fraction=0.5), seed=11)


@pytest.fixture(scope="module")
def social_population():
    return generate_synthetic(SyntheticParams(user_count=1000, community_count=10,
                                              social_fraction=1.0), seed=12)


@pytest.mark.slow
def test_experiment_one_shape(criterion, mixed_population):
    with criterion("experiment 1: CV(nDCG CF_p) < 0.15; UC(CF_in) 0 at f=1, > 0 at f=0") as note:
        series = run_profile_sweep(mixed_population, SplitSpec(), seed=11, k=10)
        ndcg = series.series(A.CF_p, "ndcg")
        cv = statistics.pstdev(ndcg) / statistics.mean(ndcg)
        uc = series.series(A.CF_in, "user_coverage")
        note(f"CV {cv:.3f}, UC(CF_in) f=0 {uc[0]:.3f}, f=1 {uc[-1]:.3f}")
        assert len(series.conditions) == 11
        assert cv < 0.15
        assert uc[-1] == 0 and uc[0] > 0
        last = series.conditions[-1][1]
        assert all(last[a].user_coverage == 0 for a in SOCIAL_ONLY)


@pytest.mark.slow
def test_experiment_two_shape(criterion, social_population):
    with criterion("experiment 2: UC(CCF_s) >= UC(CCF_m), nDCG(CF_in) >= nDCG(CF_p), "
                   "Spearman(UC CF_in, i) >= 0.8") as note:
        series = run_coldstart_sweep(social_population, SplitSpec(), seed=12, k=10)
        full = series.conditions[-1][1]
        uc = series.series(A.CF_in, "user_coverage")
        rho = spearmanr(range(1, 11), uc).statistic
        note(f"UC CCF_s {full[A.CCF_s].user_coverage:.3f} vs CCF_m {full[A.CCF_m].user_coverage:.3f}; "
             f"nDCG CF_in {full[A.CF_in].ndcg:.4f} vs CF_p {full[A.CF_p].ndcg:.4f}; rho {rho:.3f}")
        assert full[A.CCF_s].user_coverage >= full[A.CCF_m].user_coverage
        assert full[A.CF_in].ndcg >= full[A.CF_p].ndcg
        assert rho >= 0.8


@pytest.mark.slow
def test_latency(criterion):
    with criterion("latency at 10k users / 10k items: CCF_s <= 100 ms, MP <= 5 ms") as note:
        ds = generate_synthetic(SyntheticParams(user_count=10_000, item_count=10_000,
                                                community_count=10, social_fraction=0.5), seed=13)
        train, tests = split_train_test(ds)
        index = build_item_index(train)
        users = random.Random(13).sample(sorted(tests), 300)
        hybrid = measure_runtime(A.CCF_s, train, index, users, repetitions=3)
        popular = measure_runtime(A.MP, train, index, users, repetitions=3)
        note(f"CCF_s {hybrid:.3f} ms, MP {popular:.4f} ms")
        assert hybrid <= 100
        assert popular <= 5


@pytest.mark.slow
def test_determinism(criterion, tmp_path):
    with criterion("determinism: evaluate and both sweeps byte-identical; service report == library") as note:
        data = tmp_path / "data.jsonl"
        assert run_cli(["generate", "--seed", "21", "--users", "300", "--items", "150",
                        "--communities", "5", "--social-fraction", "0.5", "-o", str(data)]) == 0
        outputs = {}
        for run in (1, 2):
            for name, argv in (("evaluate", ["evaluate"]), ("profile", ["sweep", "profile"]),
                               ("coldstart", ["sweep", "coldstart"])):
                out = tmp_path / f"{name}{run}.out"
                assert run_cli(argv + ["--data", str(data), "--seed", "5", "-o", str(out)]) == 0
                outputs.setdefault(name, []).append(out.read_bytes())
        for name, (first, second) in outputs.items():
            assert first == second, name

        from fastapi.testclient import TestClient
        with TestClient(create_app()) as client:
            text = data.read_text().splitlines(keepends=True)
            market = "".join(l for l in text if '"kind": "item"' in l or '"kind": "purchase"' in l)
            social = "".join(l for l in text if l not in market)
            assert client.post("/data/marketplace", content=market).status_code == 202
            assert client.post("/data/social", content=social).status_code == 202
            assert client.post("/index/rebuild").json() == {"version": 1}
            job = client.post("/evaluation/run", json={"seed": 5, "k": 10}).json()["jobId"]
            for _ in range(3000):
                r = client.get(f"/evaluation/report/{job}")
                if r.status_code != 202:
                    break
                time.sleep(0.01)
            assert r.status_code == 200
            assert (r.text + "\n").encode() == outputs["evaluate"][0]
        note(f"{len(outputs)} outputs stable; service report {len(r.content)} bytes identical")


def _free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


@pytest.fixture
def live_server():
    app = create_app()
    port = _free_port()
    server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=port, log_level="warning"))
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    while not server.started:
        time.sleep(0.01)
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=10)


def test_service_contract(criterion, live_server):
    with criterion("service: upload/rebuild/recommend MP round-trip; 100 concurrent reads "
                   "during rebuild see whole snapshots") as note:
        items = [{"kind": "item", "id": i, "title": "", "description": ""} for i in ("i1", "i2")]
        purchases = [{"kind": "purchase", "user": u, "item": i, "timestamp": t}
                     for u, i, t in (("a", "i1", 1), ("b", "i1", 2), ("c", "i1", 3), ("c", "i2", 4))]
        body = "".join(json.dumps(o) + "\n" for o in items + purchases)
        with httpx.Client(base_url=live_server, timeout=60) as client:
            assert client.post("/data/marketplace", content=body).json() == {"accepted": 6}
            assert client.post("/index/rebuild").json() == {"version": 1}
            first = client.get("/recommend/MP/anyone", params={"k": 2})
            assert first.json() == [{"item": "i1", "score": 3, "rank": 1},
                                    {"item": "i2", "score": 1, "rank": 2}]

            # stage a large second batch so the next rebuild takes a while and changes MP's head
            big = generate_synthetic(SyntheticParams(user_count=3000, item_count=2000,
                                                     social_fraction=0.5), seed=1)
            lines = dump_jsonl(big).splitlines(keepends=True)
            market = "".join(l for l in lines if '"kind": "item"' in l or '"kind": "purchase"' in l)
            assert client.post("/data/marketplace", content=market).status_code == 202
            social = "".join(l for l in lines if l not in market)
            assert client.post("/data/social", content=social).status_code == 202

            merged = build_dataset(
                [Item(o["id"]) for o in items] + list(big.items.values()),
                [PurchaseEvent(o["user"], o["item"], o["timestamp"]) for o in purchases]
                + list(big.purchases), big.social_records())
            expected = {1: first.text,
                        2: json.dumps([{"item": i, "score": c, "rank": n + 1}
                                       for n, (i, c) in enumerate(merged.popularity[:2])],
                                      separators=(",", ":"))}
            assert expected[1] != expected[2]

        def read(_):
            with httpx.Client(base_url=live_server, timeout=60) as c:
                r = c.get("/recommend/MP/anyone", params={"k": 2})
                return int(r.headers[VERSION_HEADER]), r.text

        with ThreadPoolExecutor(max_workers=20) as pool:
            rebuild = pool.submit(lambda: httpx.post(f"{live_server}/index/rebuild", timeout=120))
            reads = list(pool.map(read, range(100)))
            assert rebuild.result().json() == {"version": 2}
        versions = [v for v, _ in reads]
        mixed = [v for v, text in reads if text != expected[v]]
        note(f"versions seen {sorted(set(versions))}, {len(mixed)} mixed responses")
        assert not mixed
        assert set(versions) <= {1, 2}
        after = httpx.get(f"{live_server}/recommend/MP/anyone", params={"k": 2})
        assert after.headers[VERSION_HEADER] == "2" and after.text == expected[2]
