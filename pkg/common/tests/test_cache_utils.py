from common.cache_utils import build_cache_key, content_hash, get_json, set_json


def test_content_hash_ignores_key_order():
    assert content_hash({"a": 1, "b": [2, 3]}) == content_hash({"b": [2, 3], "a": 1})
    assert content_hash({"a": 1}) != content_hash({"a": 2})


def test_long_keys_fall_back_to_a_digest():
    assert build_cache_key("run") == "run"
    assert build_cache_key("run", seed=3, case="k33") == "run:case=k33&seed=3"
    long_key = build_cache_key("run", document="x" * 400)
    assert len(long_key) <= 250
    assert long_key.startswith("run:")


def test_missing_key_gives_the_default(run_backend):
    assert get_json("absent", backend=run_backend) is None
    assert get_json("absent", default={"n": 0}, backend=run_backend) == {"n": 0}


def test_stored_json_comes_back(run_backend):
    set_json("k", {"verdict": "fail", "sizes": [2, 3]}, backend=run_backend)
    assert get_json("k", backend=run_backend) == {"verdict": "fail", "sizes": [2, 3]}


def test_corrupt_entry_is_dropped(run_backend):
    run_backend.set("k", b"{not json")
    assert get_json("k", default=[], backend=run_backend) == []
    assert run_backend.get("k") is None
