import csv
import io
import json

import pytest

from namegender.cli import main
from namegender.config import build_config, demo_root
from namegender.core import BackendId
from namegender.errors import ConfigError
from namegender.web.transport import Mode, image_digest, query_hash


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def envelope(path, body, status=200):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps({"status": status, "body": body}), encoding="utf-8")


def face_body(gender, confidence):
    return {"faces": [{"face_rectangle": {"left": 0, "top": 0, "width": 20, "height": 20},
                       "attributes": {"gender": {"value": gender, "confidence": confidence}}}]}


# -- infer ---------------------------------------------------------------------

def test_infer_prints_one_line_per_method(no_network):
    code, out = run("infer", "Andrea Rossi", "--country", "it", "--demo", "--mode", "replay",
                    "--methods", "dict,ssa")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "Dict\tmale\t1"
    name, label, score = lines[1].split("\t")
    assert name == "SSA" and label in {"male", "female", "unknown"}
    float(score)


def test_infer_dict_country_flag(no_network):
    args = ["infer", "Andrea Rossi", "--country", "DE", "--demo", "--mode", "replay", "--methods", "dict"]
    assert run(*args)[1] == "Dict\tfemale\t-1\n"
    assert run(*args, "--ignore-dict-country")[1].startswith("Dict\t")


@pytest.mark.parametrize("argv", [
    ["infer", "   ", "--demo", "--methods", "dict"],
    ["infer", "Ada", "--methods", "ssa"],                       # no --ssa-dir
    ["infer", "Ada", "--methods", "namsor", "--demo"],
    ["infer", "Ada", "--methods", "genderize", "--mode", "replay"],
    ["infer", "Ada", "--demo", "--thumbnails", "9"],
])
def test_usage_errors_exit_2(argv, monkeypatch, no_network):
    for var in ("NAMEGENDER_GENDERIZE_KEY", "NAMEGENDER_FACE_KEY", "NAMEGENDER_IMG_KEY"):
        monkeypatch.delenv(var, raising=False)
    assert run(*argv)[0] == 2


def test_missing_keys_exit_2(monkeypatch, no_network):
    monkeypatch.delenv("NAMEGENDER_GENDERIZE_KEY", raising=False)
    assert run("infer", "Ada", "--methods", "genderize", "--mode", "live")[0] == 2


def test_replay_miss_exits_1(tmp_path, no_network, capsys):
    code, _ = run("infer", "Zyxw Nobody", "--methods", "genderize", "--mode", "replay",
                  "--fixtures", str(tmp_path))
    assert code == 1
    assert "ReplayMissError" in capsys.readouterr().err


# -- evaluate ------------------------------------------------------------------

def test_evaluate_demo_is_deterministic(tmp_path, no_network):
    first, second = tmp_path / "a", tmp_path / "b"
    code1, out1 = run("evaluate", "--mode", "replay", "--out-dir", str(first))
    code2, out2 = run("evaluate", "--mode", "replay", "--out-dir", str(second), "--workers", "1")
    assert code1 == code2 == 0
    assert out1 == out2
    names = sorted(p.name for p in first.iterdir())
    assert names == sorted(p.name for p in second.iterdir())
    for name in names:
        assert (first / name).read_bytes() == (second / name).read_bytes()
    assert no_network == []


def test_evaluate_rejects_bad_gender(tmp_path, no_network, capsys):
    data = tmp_path / "bad.csv"
    data.write_text("full_name,country,gender\nAda Lovelace,GB,F\nSam Doe,US,X\n", encoding="utf-8")
    code, _ = run("evaluate", str(data), "--methods", "dict", "--demo", "--out-dir", str(tmp_path / "r"))
    assert code == 2
    assert "row 2" in capsys.readouterr().err


def test_evaluate_empty_dataset(tmp_path, no_network):
    data = tmp_path / "empty.csv"
    data.write_text("full_name,country,gender\n", encoding="utf-8")
    assert run("evaluate", str(data), "--methods", "dict", "--demo")[0] == 2


def build_cascade_fixture(root):
    """Ten people: genderize decides eight correctly, faces settle the other two."""
    people = [
        ("Anna Weber", "DE", "F"), ("Klaus Bauer", "DE", "M"), ("Marco Rossi", "IT", "M"),
        ("Giulia Conti", "IT", "F"), ("John Smith", "US", "M"), ("Mary Brown", "US", "F"),
        ("Olga Ivanova", "RU", "F"), ("Ivan Petrov", "RU", "M"),
        ("Xiu Ying", "CN", "F"), ("Tae Park", "KR", "M"),
    ]
    for full, country, gender in people[:8]:
        first = full.split()[0].lower()
        envelope(root / "genderize" / f"{first}.{country}.json",
                 {"name": first, "gender": "female" if gender == "F" else "male", "probability": 0.9})
    for full, country, gender in people[8:]:
        first = full.split()[0].lower()
        envelope(root / "genderize" / f"{first}.{country}.json", {"name": first, "gender": None})
        folder = root / query_hash(full)
        folder.mkdir(parents=True)
        image = f"thumb of {full}".encode()
        (folder / "1.jpg").write_bytes(image)
        envelope(root / "faces" / f"{image_digest(image)}.json",
                 face_body("Female" if gender == "F" else "Male", 88.0))
    dataset = root.parent / "people.csv"
    with open(dataset, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["full_name", "country", "gender"])
        w.writerows(people)
    return dataset


def read_metric(out_dir, backend, metric):
    with open(out_dir / "method_report.csv", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            if row["backend"] == backend and row["metric"] == metric:
                return float(row["value"])
    raise KeyError((backend, metric))


def test_cascade_reaches_full_accuracy(tmp_path, no_network):
    dataset = build_cascade_fixture(tmp_path / "fx")
    out_dir = tmp_path / "reports"
    # faces exist only for the two abstentions, so a replay run proves the cascade is lazy
    code, _ = run("evaluate", str(dataset), "--methods", "genderize,mixed1", "--mode", "replay",
                  "--fixtures", str(tmp_path / "fx"), "--out-dir", str(out_dir), "--min-country-instances", "2")
    assert code == 0
    assert read_metric(out_dir, "Genderize", "accuracy") == pytest.approx(0.8)
    assert read_metric(out_dir, "Mixed1", "accuracy") == 1.0
    assert read_metric(out_dir, "Mixed1", "coverage") == 1.0


def test_report_reprints_tables(tmp_path, no_network):
    out_dir = tmp_path / "r"
    code, out = run("evaluate", "--mode", "replay", "--out-dir", str(out_dir))
    assert code == 0
    code, again = run("report", "--out-dir", str(out_dir))
    assert code == 0
    assert again == out
    assert run("report", "--out-dir", str(tmp_path / "missing"))[0] == 2


# -- cache ---------------------------------------------------------------------

def test_cache_stats_empty(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text("", encoding="utf-8")
    code, out = run("cache", "stats", "--cache-file", str(path))
    assert code == 0
    rows = dict(line.split("\t") for line in out.splitlines())
    assert rows == {b.value: "0" for b in BackendId} | {"total": "0"}


def test_cache_prune(tmp_path):
    from namegender.web.cache import ResponseCache
    path = tmp_path / "c.jsonl"
    cache = ResponseCache(path)
    cache.put(BackendId.GENDERIZE, "name=a", b"1")
    cache.put(BackendId.FACE, "Ada#search", b"2")
    cache.put(BackendId.GENDERIZE, "name=a", b"3")
    code, out = run("cache", "prune", "--cache-file", str(path))
    assert code == 0
    assert out == "dropped\t1\nkept\t2\n"
    assert len(path.read_text(encoding="utf-8").splitlines()) == 2


def test_cache_requires_file(tmp_path):
    assert run("cache", "stats")[0] == 2
    assert run("cache", "stats", "--cache-file", str(tmp_path / "nope.jsonl"))[0] == 2


def test_warm_then_replay_offline(tmp_path, fake_apis, monkeypatch):
    fake_apis.names[("ada", None)] = {"name": "ada", "gender": "female", "probability": 0.97}
    fake_apis.names[("alan", None)] = {"name": "alan", "gender": "male", "probability": 0.99}
    fake_apis.images["Kim Doe"] = ["F75", "-"]
    dataset = tmp_path / "d.csv"
    dataset.write_text("full_name,country,gender\nAda Lovelace,,F\nAlan Turing,,M\nKim Doe,,F\n",
                       encoding="utf-8")
    for var, value in [("NAMEGENDER_GENDERIZE_KEY", "g"), ("NAMEGENDER_FACE_KEY", "f:s"),
                       ("NAMEGENDER_IMG_KEY", "i:cx")]:
        monkeypatch.setenv(var, value)
    cache = tmp_path / "c.jsonl"
    endpoints = ["--endpoint-genderize", f"{fake_apis.base}/genderize",
                 "--endpoint-images", f"{fake_apis.base}/images",
                 "--endpoint-face", f"{fake_apis.base}/detect"]
    methods = ["--methods", "genderize,face,mixed1,mixed2"]
    code, out = run("cache", "warm", str(dataset), "--cache-file", str(cache), "--rate-limit", "0",
                    *methods, *endpoints)
    assert code == 0, out
    assert "warmed\t3 records" in out
    assert any(q.get("apikey") == "g" for _, path, q in fake_apis.requests if path == "/genderize")

    fake_apis.server.shutdown()
    monkeypatch.setattr("socket.socket.connect", lambda *a: pytest.fail("network used in replay"))
    out_dir = tmp_path / "r"
    code, _ = run("evaluate", str(dataset), "--mode", "replay", "--cache-file", str(cache),
                  "--out-dir", str(out_dir), "--min-country-instances", "1", *methods, *endpoints)
    assert code == 0
    assert read_metric(out_dir, "Mixed1", "accuracy") == 1.0


# -- configuration layering ----------------------------------------------------

def test_config_layering(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"mode": "replay", "thumbnails_k": 3, "workers": 2,
                               "cache_file": "cache.jsonl", "genderize_key": "from-file"}), encoding="utf-8")
    env = {"NAMEGENDER_GENDERIZE_KEY": "from-env"}
    c = build_config({"workers": 7, "mode": None}, config_file=cfg, demo=True, environ=env)
    assert c.mode is Mode.REPLAY
    assert (c.thumbnails_k, c.workers) == (3, 7)
    assert c.genderize_key == "from-env"
    assert c.cache_file == tmp_path / "cache.jsonl"
    assert c.dict_file == demo_root() / "nam_dict.txt"
    plain = build_config({}, environ={})
    assert (plain.mode, plain.min_country_instances, plain.rate_limit) == (Mode.CACHED, 20, 1.0)


def test_config_file_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"colour": "blue"}', encoding="utf-8")
    with pytest.raises(ConfigError):
        build_config({}, config_file=bad, environ={})
    bad.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ConfigError):
        build_config({}, config_file=bad, environ={})
    with pytest.raises(ConfigError):
        build_config({"mode": "sometimes"}, environ={})
