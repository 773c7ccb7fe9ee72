import json
import re

import pytest

from affclust import __version__
from affclust.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def zero_noise(tmp_path, capsys):
    corpus, truth = tmp_path / "c.jsonl", tmp_path / "t.jsonl"
    code, _, _ = run(
        capsys, "gen", "--output", corpus, "--truth", truth, "--seed", 3,
        "--institutes", 6, "--aliases", 4, "--authors", "4:6", "--papers", "4:6",
    )
    assert code == 0
    return corpus, truth


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0
    assert re.fullmatch(r"affclust \d+\.\d+\.\d+\n", out) and __version__ in out


def test_ingest_valid(tmp_path, capsys, two_author_corpus):
    out_path = tmp_path / "obs.jsonl"
    code, out, _ = run(capsys, "ingest", "--input", two_author_corpus, "--output", out_path)
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert len(lines) == 6
    assert json.loads(lines[0]) == {"author": "Author 1", "affiliation": "Univ A", "doi": "10.1/p1"}
    assert "skipped_lines: 0" in out


def test_ingest_missing_file(tmp_path, capsys):
    code, out, err = run(capsys, "ingest", "--input", tmp_path / "absent.jsonl", "--output", tmp_path / "o.jsonl")
    assert code == 2 and err and not out


def test_ingest_one_malformed_line(tmp_path, capsys, two_author_corpus):
    bad = tmp_path / "bad.jsonl"
    bad.write_text(two_author_corpus.read_text() + "{oops\n")
    code, out, _ = run(capsys, "ingest", "--input", bad, "--output", tmp_path / "o.jsonl")
    assert code == 0 and "skipped_lines: 1" in out


def test_cluster_two_author(capsys, two_author_corpus):
    code, out, _ = run(capsys, "cluster", "--input", two_author_corpus, "--threshold", 1)
    assert code == 0
    doc = json.loads(out)
    assert [c["members"] for c in doc["clusters"]] == [["Univ A", "Univ B"]]
    assert doc["singletons"] == 1


def test_cluster_include_singletons(capsys, two_author_corpus):
    _, out, _ = run(capsys, "cluster", "--input", two_author_corpus, "--include-singletons")
    assert [c["members"] for c in json.loads(out)["clusters"]] == [["Univ A", "Univ B"], ["Univ C"]]


@pytest.mark.parametrize("flag", [("--threshold", "0"), ("--workers", "0"), ("--threshold", "x")])
def test_cluster_usage_errors(capsys, two_author_corpus, flag):
    code, _, err = run(capsys, "cluster", "--input", two_author_corpus, *flag)
    assert code == 1 and "error" in err


def test_unknown_command_is_usage_error(capsys):
    assert run(capsys, "frobnicate")[0] == 1


def test_workers_byte_identical(capsys, zero_noise):
    corpus, _ = zero_noise
    outs = {run(capsys, "cluster", "--input", corpus, "--workers", w)[1] for w in (1, 8)}
    assert len(outs) == 1


def test_cluster_to_file(tmp_path, capsys, two_author_corpus):
    dest = tmp_path / "clusters.json"
    code, out, _ = run(capsys, "cluster", "--input", two_author_corpus, "--output", dest)
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["threshold"] == 1


def test_checkpointed_equals_single_shot(tmp_path, capsys, zero_noise):
    corpus, _ = zero_noise
    obs = tmp_path / "obs.jsonl"
    assert run(capsys, "ingest", "--input", corpus, "--output", obs)[0] == 0
    ckpt = tmp_path / "ckpt"
    _, direct, _ = run(capsys, "cluster", "--input", corpus, "--threshold", 2, "--checkpoint-dir", ckpt)
    _, via_obs, _ = run(capsys, "cluster", "--input", obs, "--threshold", 2)
    _, via_matrix, _ = run(capsys, "cluster", "--input", ckpt / "matrix.jsonl", "--threshold", 2)
    assert direct == via_obs == via_matrix
    assert (ckpt / "cooccurrence.jsonl").read_text().count("\n") > 0


def test_sweep_csv(capsys, two_author_corpus):
    code, out, _ = run(capsys, "sweep", "--input", two_author_corpus, "--t-min", 1, "--t-max", 2)
    assert code == 0
    assert out.splitlines() == [
        "threshold,clusters,largest,clustered_nodes,edges",
        "1,1,2,2,1",
        "2,0,0,0,0",
    ]


def test_sweep_bad_range(capsys, two_author_corpus):
    assert run(capsys, "sweep", "--input", two_author_corpus, "--t-min", 3, "--t-max", 2)[0] == 1


def test_export_dot(capsys, two_author_corpus):
    code, out, _ = run(capsys, "export", "--input", two_author_corpus, "--rank", 0, "--format", "dot")
    assert code == 0
    assert len(re.findall(r'^  "[^"]+";$', out, re.M)) == 2
    assert re.findall(r'--.*\[label="(\d+)"\]', out) == ["1"]


def test_export_rank_out_of_range(capsys, two_author_corpus):
    code, _, err = run(capsys, "export", "--input", two_author_corpus, "--rank", 5)
    assert code == 3 and "rank" in err


def test_export_json_and_dot_agree(capsys, zero_noise):
    corpus, _ = zero_noise
    for rank in range(3):
        _, dot, _ = run(capsys, "export", "--input", corpus, "--rank", rank, "--format", "dot")
        _, js, _ = run(capsys, "export", "--input", corpus, "--rank", rank, "--format", "json")
        dot_members = set(re.findall(r'^  "([^"]+)";$', dot, re.M))
        assert dot_members == set(json.loads(js)["members"])


def test_gen_deterministic(tmp_path, capsys):
    outs = []
    for k in range(2):
        c, t = tmp_path / f"c{k}.jsonl", tmp_path / f"t{k}.jsonl"
        assert run(capsys, "gen", "--output", c, "--truth", t, "--seed", 11)[0] == 0
        outs.append((c.read_bytes(), t.read_bytes()))
    assert outs[0] == outs[1]


@pytest.mark.parametrize("scenario", ["branch", "confusion"])
def test_gen_scenarios(tmp_path, capsys, scenario):
    c, t = tmp_path / "c.jsonl", tmp_path / "t.jsonl"
    code, out, _ = run(capsys, "gen", "--output", c, "--truth", t, "--scenario", scenario)
    assert code == 0 and "institutes:" in out


def test_gen_infeasible_config(tmp_path, capsys):
    code, _, err = run(
        capsys, "gen", "--output", tmp_path / "c", "--truth", tmp_path / "t",
        "--institutes", 1, "--homonym-rate", 0.5,
    )
    assert code == 3 and "homonym" in err


def test_eval_zero_noise_f1(capsys, zero_noise):
    corpus, truth = zero_noise
    code, out, _ = run(capsys, "eval", "--input", corpus, "--truth", truth, "--threshold", 4, "--format", "json")
    assert code == 0
    assert json.loads(out)["score"]["f1"] == 1.0


def test_eval_with_baseline(capsys, zero_noise):
    corpus, truth = zero_noise
    code, out, _ = run(capsys, "eval", "--input", corpus, "--truth", truth, "--baseline-cutoff", 0.5)
    assert code == 0
    assert "token baseline" in out and "unclustered by B" in out


def test_eval_truth_mismatch(tmp_path, capsys, zero_noise):
    corpus, _ = zero_noise
    wrong = tmp_path / "wrong.jsonl"
    wrong.write_text('{"affiliation": "Somewhere Else", "institute_id": 0}\n')
    code, _, err = run(capsys, "eval", "--input", corpus, "--truth", wrong)
    assert code == 3 and "truth" in err


def test_stats(capsys, two_author_corpus):
    code, out, _ = run(capsys, "stats", "--input", two_author_corpus)
    assert code == 0
    assert "authors: 2" in out and "affiliations: 3" in out and "nonzeros: 3" in out and "total_count: 6" in out
