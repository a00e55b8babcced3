import json
import math
import threading

import httpx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taboogame.scorers import (
    CachedScorer,
    OracleTableError,
    RemoteScorer,
    ScoreRequest,
    ScoreVector,
    ScoringError,
    TableOracle,
    UniformScorer,
    build_scorer,
    load_table_oracle,
)


def make_remote(handler) -> RemoteScorer:
    transport = httpx.MockTransport(handler)
    client = httpx.Client(transport=transport, base_url="http://nli.test")
    return RemoteScorer("http://nli.test", client=client)


def echo_oracle_remote():
    """Remote backend that mirrors the demo oracle over mock HTTP."""
    oracle = TableOracle({("tea", "Dundee"): 0.9, ("tea", "Athens"): 0.1})

    def handler(request: httpx.Request) -> httpx.Response:
        body = json.loads(request.content)
        vec = oracle.score(
            ScoreRequest(body["premise"], tuple(body["labels"]), body["multi_label"])
        )
        return httpx.Response(200, json={"scores": vec.as_dict()})

    return make_remote(handler)


BACKEND_FACTORIES = {
    "uniform": UniformScorer,
    "oracle": lambda: TableOracle({("tea", "Dundee"): 0.9, ("tea", "Athens"): 0.1}),
    "cached_oracle": lambda: CachedScorer(
        TableOracle({("tea", "Dundee"): 0.9, ("tea", "Athens"): 0.1})
    ),
    "remote": echo_oracle_remote,
}


@pytest.fixture(params=sorted(BACKEND_FACTORIES))
def any_backend(request):
    return BACKEND_FACTORIES[request.param]()


class TestScoreRequest:
    def test_empty_labels_rejected(self):
        with pytest.raises(ScoringError):
            ScoreRequest("p", ())

    def test_blank_label_rejected(self):
        with pytest.raises(ScoringError):
            ScoreRequest("p", ("a", " "))

    def test_duplicate_labels_rejected(self):
        with pytest.raises(ScoringError):
            ScoreRequest("p", ("a", "a"))


class TestScoreVector:
    def test_out_of_range_rejected(self):
        with pytest.raises(ScoringError):
            ScoreVector({"a": 1.3})
        with pytest.raises(ScoringError):
            ScoreVector({"a": -0.1})

    def test_distribution_check(self):
        ScoreVector({"a": 0.4, "b": 0.6}).check_distribution()
        with pytest.raises(ScoringError):
            ScoreVector({"a": 0.4, "b": 0.4}).check_distribution()


class TestBackendConformance:
    """Shared contract: every backend, same obligations."""

    def test_one_entry_per_label(self, any_backend):
        req = ScoreRequest("This text is about tea", ("Dundee", "Athens"), multi_label=True)
        vec = any_backend.score(req)
        assert set(vec) == {"Dundee", "Athens"}

    def test_single_label_sums_to_one(self, any_backend):
        req = ScoreRequest("This text is about tea", ("Dundee", "Athens"), multi_label=False)
        vec = any_backend.score(req)
        assert math.isclose(sum(vec.values()), 1.0, abs_tol=1e-6)

    def test_single_candidate_gets_one(self, any_backend):
        vec = any_backend.score(ScoreRequest("whatever", ("Dundee",), multi_label=False))
        assert math.isclose(vec["Dundee"], 1.0, abs_tol=1e-6)

    def test_all_values_in_range(self, any_backend):
        for multi in (False, True):
            vec = any_backend.score(
                ScoreRequest("This text is about tea", ("Dundee", "Athens", "Cairo"), multi)
            )
            assert all(0.0 <= p <= 1.0 for p in vec.values())

    def test_deterministic(self, any_backend):
        req = ScoreRequest("This text is about tea", ("Dundee", "Athens"))
        assert any_backend.score(req) == any_backend.score(req)


class TestTableOracle:
    def test_exact_table_values_multi_label(self):
        oracle = TableOracle({("tea", "Dundee"): 0.9, ("tea", "Athens"): 0.1})
        vec = oracle.score(
            ScoreRequest("This text is about tea", ("Dundee", "Athens"), multi_label=True)
        )
        assert vec == {"Dundee": 0.9, "Athens": 0.1}

    def test_single_label_normalizes(self):
        oracle = TableOracle({("tea", "Dundee"): 0.6, ("tea", "Athens"): 0.2})
        vec = oracle.score(
            ScoreRequest("This text is about tea", ("Dundee", "Athens"), multi_label=False)
        )
        assert math.isclose(vec["Dundee"], 0.75)
        assert math.isclose(vec["Athens"], 0.25)

    def test_unknown_premise_uniform_fallback(self):
        oracle = TableOracle({("tea", "Dundee"): 0.9})
        vec = oracle.score(ScoreRequest("This text is about xyzzy", ("A", "B", "C", "D")))
        assert all(math.isclose(p, 0.25) for p in vec.values())

    def test_cumulative_premise_sums_matched_tokens(self):
        oracle = TableOracle(
            {
                ("tea", "Dundee"): 0.3,
                ("whiskey", "Dundee"): 0.4,
                ("whiskey", "Athens"): 0.1,
            }
        )
        vec = oracle.score(
            ScoreRequest(
                "This text is about tea, whiskey", ("Dundee", "Athens"), multi_label=True
            )
        )
        assert math.isclose(vec["Dundee"], 0.7)
        assert math.isclose(vec["Athens"], 0.1)

    def test_match_is_case_insensitive(self):
        oracle = TableOracle({("Tea", "Dundee"): 0.9})
        vec = oracle.score(ScoreRequest("THIS TEXT IS ABOUT TEA", ("dundee",), True))
        assert vec["dundee"] == 0.9


class TestTableOracleFile:
    def test_well_formed_table(self, tmp_path):
        path = tmp_path / "table.csv"
        path.write_text("tea,Dundee,0.9\ntea,Athens,0.1\nolives,Athens,0.8\n")
        oracle = load_table_oracle(path)
        vec = oracle.score(ScoreRequest("This text is about tea", ("Dundee", "Athens"), True))
        assert vec == {"Dundee": 0.9, "Athens": 0.1}

    def test_duplicate_rows_rejected_with_line(self, tmp_path):
        path = tmp_path / "table.csv"
        path.write_text("tea,Dundee,0.9\ntea,dundee,0.8\n")
        with pytest.raises(OracleTableError, match="line 2"):
            load_table_oracle(path)

    def test_bad_probability_rejected_with_line(self, tmp_path):
        path = tmp_path / "table.csv"
        path.write_text("tea,Dundee,often\n")
        with pytest.raises(OracleTableError, match="line 1"):
            load_table_oracle(path)

    def test_empty_table_is_uniform_everywhere(self, tmp_path):
        path = tmp_path / "table.csv"
        path.write_text("")
        oracle = load_table_oracle(path)
        vec = oracle.score(ScoreRequest("anything", ("A", "B")))
        assert vec == {"A": 0.5, "B": 0.5}

    def test_referentially_transparent_across_loads(self, tmp_path):
        path = tmp_path / "table.csv"
        path.write_text("tea,Dundee,0.9\ntea,Athens,0.1\n")
        req = ScoreRequest("This text is about tea", ("Dundee", "Athens"), True)
        assert load_table_oracle(path).score(req) == load_table_oracle(path).score(req)


class TestRemoteScorer:
    def test_passthrough_of_example_values(self):
        def handler(request):
            return httpx.Response(
                200, json={"scores": {"Dundee": 0.05485, "Athens": 0.0029}}
            )

        scorer = make_remote(handler)
        vec = scorer.score(
            ScoreRequest("This text is about tea", ("Dundee", "Athens"), multi_label=True)
        )
        assert vec == {"Dundee": 0.05485, "Athens": 0.0029}

    def test_out_of_range_probability_rejected(self):
        scorer = make_remote(
            lambda r: httpx.Response(200, json={"scores": {"Dundee": 1.3}})
        )
        with pytest.raises(ScoringError):
            scorer.score(ScoreRequest("p", ("Dundee",), multi_label=True))

    def test_denormalized_reply_renormalized(self, caplog):
        scorer = make_remote(
            lambda r: httpx.Response(200, json={"scores": {"A": 0.6, "B": 0.2}})
        )
        with caplog.at_level("WARNING"):
            vec = scorer.score(ScoreRequest("p", ("A", "B"), multi_label=False))
        assert math.isclose(vec["A"], 0.75)
        assert math.isclose(vec["B"], 0.25)
        assert any("renormalizing" in rec.message for rec in caplog.records)

    def test_badly_denormalized_reply_rejected(self):
        scorer = make_remote(
            lambda r: httpx.Response(200, json={"scores": {"A": 0.2, "B": 0.2}})
        )
        with pytest.raises(ScoringError, match="renormalization band"):
            scorer.score(ScoreRequest("p", ("A", "B"), multi_label=False))

    def test_http_error_is_retriable(self):
        scorer = make_remote(lambda r: httpx.Response(503, json={}))
        with pytest.raises(ScoringError) as exc_info:
            scorer.score(ScoreRequest("p", ("A",), multi_label=True))
        assert exc_info.value.retriable

    def test_missing_label_rejected(self):
        scorer = make_remote(
            lambda r: httpx.Response(200, json={"scores": {"A": 0.5}})
        )
        with pytest.raises(ScoringError, match="omitted"):
            scorer.score(ScoreRequest("p", ("A", "B"), multi_label=True))

    def test_error_carries_premise(self):
        scorer = make_remote(lambda r: httpx.Response(500))
        with pytest.raises(ScoringError) as exc_info:
            scorer.score(ScoreRequest("the premise", ("A",), multi_label=True))
        assert exc_info.value.premise == "the premise"


class CountingBackend:
    def __init__(self, inner):
        self.inner = inner
        self.calls = 0

    def score(self, request):
        self.calls += 1
        return self.inner.score(request)


class FailOnceBackend:
    def __init__(self):
        self.calls = 0

    def score(self, request):
        self.calls += 1
        if self.calls == 1:
            raise ScoringError("flaky", retriable=True)
        return ScoreVector({lab: 1.0 / len(request.labels) for lab in request.labels})


class TestCachedScorer:
    def test_same_request_hits_inner_once(self):
        inner = CountingBackend(UniformScorer())
        cached = CachedScorer(inner)
        req = ScoreRequest("p", ("A", "B"))
        first = cached.score(req)
        second = cached.score(req)
        assert inner.calls == 1
        assert first == second

    def test_mode_is_part_of_the_key(self):
        inner = CountingBackend(UniformScorer())
        cached = CachedScorer(inner)
        cached.score(ScoreRequest("p", ("A", "B"), multi_label=False))
        cached.score(ScoreRequest("p", ("A", "B"), multi_label=True))
        assert inner.calls == 2

    def test_label_order_does_not_split_the_cache(self):
        inner = CountingBackend(UniformScorer())
        cached = CachedScorer(inner)
        cached.score(ScoreRequest("p", ("A", "B")))
        cached.score(ScoreRequest("p", ("B", "A")))
        assert inner.calls == 1

    def test_errors_not_cached(self):
        inner = FailOnceBackend()
        cached = CachedScorer(inner)
        req = ScoreRequest("p", ("A",), multi_label=True)
        with pytest.raises(ScoringError):
            cached.score(req)
        assert cached.score(req) == {"A": 1.0}
        assert inner.calls == 2

    def test_persistence_roundtrip(self, tmp_path):
        path = tmp_path / "cache.jsonl"
        oracle = TableOracle({("tea", "Dundee"): 0.9, ("tea", "Athens"): 0.1})
        inner = CountingBackend(oracle)
        first = CachedScorer(inner, persist_path=path)
        req = ScoreRequest("This text is about tea", ("Dundee", "Athens"), True)
        value = first.score(req)

        rehydrated = CachedScorer(CountingBackend(oracle), persist_path=path)
        assert rehydrated.score(req) == value
        assert rehydrated.inner.calls == 0

    def test_thread_safe_under_concurrent_identical_requests(self):
        inner = CountingBackend(UniformScorer())
        cached = CachedScorer(inner)
        req = ScoreRequest("p", ("A", "B", "C"))
        results = []

        def worker():
            results.append(cached.score(req))

        threads = [threading.Thread(target=worker) for _ in range(16)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert all(r == results[0] for r in results)

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(
            st.tuples(
                st.sampled_from(["tea", "whiskey", "kilt", "xyzzy"]),
                st.lists(
                    st.sampled_from(["Dundee", "Athens", "Cairo", "Paris"]),
                    min_size=1,
                    max_size=4,
                    unique=True,
                ),
                st.booleans(),
            ),
            min_size=1,
            max_size=12,
        )
    )
    def test_observational_equivalence_with_inner(self, requests):
        oracle = TableOracle(
            {
                ("tea", "Dundee"): 0.5,
                ("whiskey", "Dundee"): 0.3,
                ("kilt", "Athens"): 0.2,
                ("tea", "Cairo"): 0.1,
            }
        )
        cached = CachedScorer(oracle)
        for hint, labels, multi in requests:
            req = ScoreRequest(f"This text is about {hint}", tuple(labels), multi)
            assert cached.score(req) == oracle.score(req)


class TestBuildScorer:
    def test_uniform(self):
        assert isinstance(build_scorer("uniform"), UniformScorer)

    def test_oracle_selector(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("tea,Dundee,0.9\n")
        assert isinstance(build_scorer(f"oracle:{path}"), TableOracle)

    def test_cache_wrapping(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("tea,Dundee,0.9\n")
        backend = build_scorer(f"oracle:{path}", cache=True)
        assert isinstance(backend, CachedScorer)

    def test_unknown_selector(self):
        with pytest.raises(ScoringError):
            build_scorer("magic8ball")
