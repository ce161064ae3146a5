import json
from pathlib import Path

import pytest

from opiniontrend.cli import main
from opiniontrend.synth import fixture_config, write_world


@pytest.fixture(scope="module")
def world(tmp_path_factory):
    out = tmp_path_factory.mktemp("cliworld")
    return write_world(out, fixture_config(), seed=23), out


def test_synth_command(tmp_path, capsys):
    rc = main(["synth", "--out", str(tmp_path / "w"), "--seed", "2",
               "--preset", "fixture", "--users", "60", "--days", "12"])
    assert rc == 0
    assert (tmp_path / "w" / "corpus.jsonl").exists()
    assert (tmp_path / "w" / "polls.csv").exists()


def test_corpus_load_and_filter(world, tmp_path, capsys):
    paths, _ = world
    rc = main(["corpus", "load", "--path", paths["corpus"]])
    assert rc == 0
    out = capsys.readouterr().out
    assert "records:" in out
    rc = main(["corpus", "filter", "--path", paths["corpus"],
               "--world", paths["world"], "--out", str(tmp_path / "f.jsonl")])
    assert rc == 0
    assert (tmp_path / "f.jsonl").exists()


def test_strict_filter_flag(tmp_path, capsys):
    corpus = tmp_path / "c.jsonl"
    lines = [
        '{"tweet_id":"a","user_id":"u","timestamp":"2024-01-01T10:00:00Z",'
        '"text":"alpha beta","hashtags":[],"source_client":"web","is_retweet":false}',
        '{"tweet_id":"b","user_id":"u","timestamp":"2024-01-01T11:00:00Z",'
        '"text":"alpha only","hashtags":[],"source_client":"web","is_retweet":false}',
    ]
    corpus.write_text("\n".join(lines) + "\n")
    rc = main(["corpus", "filter", "--path", str(corpus),
               "--official-clients", "web",
               "--strict-keywords", "alpha+beta",
               "--out", str(tmp_path / "out.jsonl")])
    assert rc == 0
    kept = (tmp_path / "out.jsonl").read_text().strip().splitlines()
    assert len(kept) == 1 and '"tweet_id":"a"' in kept[0]


def test_graph_components_command(world, tmp_path):
    paths, _ = world
    out = tmp_path / "components.csv"
    rc = main(["graph", "components", "--corpus", paths["corpus"],
               "--world", paths["world"], "--out", str(out)])
    assert rc == 0
    assert out.read_text().startswith("day,scgc_size")


def test_stagewise_cooccur_propagate_trainset_classifier(world, tmp_path, capsys):
    paths, _ = world
    cdir = tmp_path / "cooccur"
    rc = main(["cooccur", "build", "--corpus", paths["corpus"], "--out", str(cdir)])
    assert rc == 0
    for name in ("edges.csv", "vertices.csv", "graph.json", "stats.json"):
        assert (cdir / name).exists()

    pdir = tmp_path / "prop"
    rc = main(["propagate", "run", "--graph", str(cdir), "--seeds", paths["seeds"],
               "--out", str(pdir)])
    assert rc == 0
    assert (pdir / "assignment.json").exists()

    tdir = tmp_path / "trainset"
    rc = main(["trainset", "--corpus", paths["corpus"],
               "--assignment", str(pdir / "assignment.json"), "--out", str(tdir)])
    assert rc == 0

    model_path = tmp_path / "model.json"
    rc = main(["classifier", "train", "--trainset", str(tdir / "trainset.jsonl"),
               "--vocab", str(tdir / "vocab.json"), "--lam", "1e-4",
               "--out", str(model_path)])
    assert rc == 0
    assert model_path.exists()

    rc = main(["classifier", "predict", "--model", str(model_path),
               "--vocab", str(tdir / "vocab.json"), "--text", "blueword001 blueword002"])
    assert rc == 0
    out = capsys.readouterr().out.strip().splitlines()[-1]
    cls, prob = out.split("\t")
    assert cls in ("blue", "red")
    assert 0.0 <= float(prob) <= 1.0


def test_run_all_and_fit_commands(world, tmp_path, capsys):
    paths, _ = world
    out_dir = tmp_path / "runall"
    rc = main(["run-all", "--corpus", paths["corpus"], "--polls", paths["polls"],
               "--seeds", paths["seeds"], "--world", paths["world"],
               "--out", str(out_dir), "--curation", "auto", "--seed", "5"])
    assert rc == 0
    capsys.readouterr()  # flush run-all output
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert "fit" in manifest["stages"]

    opinion_csv = None
    for name, art in manifest["stages"]["opinion"]["artifacts"].items():
        if name == "whole":
            opinion_csv = out_dir / art["file"]
    assert opinion_csv is not None

    rc = main(["fit", "--opinion", str(opinion_csv), "--polls", paths["polls"]])
    assert rc == 0
    fit_out = json.loads(capsys.readouterr().out)
    assert fit_out["w"] == 13

    rc = main(["sweep", "--opinion", str(opinion_csv), "--polls", paths["polls"],
               "--windows", "1:4:9"])
    assert rc == 0

    rc = main(["forecast", "--opinion", str(opinion_csv), "--polls", paths["polls"],
               "--train-until", "2024-02-23", "--horizon", "7", "--window", "9"])
    assert rc == 0

    bdir = tmp_path / "bench"
    rc = main(["benchmark", "--corpus", paths["corpus"], "--world", paths["world"],
               "--out", str(bdir)])
    assert rc == 0
    assert (bdir / "metric_mentions.csv").exists()


def test_run_all_failure_exit_code(world, tmp_path, capsys):
    paths, _ = world
    rc = main(["run-all", "--corpus", paths["corpus"],
               "--polls", str(tmp_path / "nope.csv"),
               "--seeds", paths["seeds"], "--world", paths["world"],
               "--out", str(tmp_path / "failrun"), "--curation", "auto"])
    assert rc == 1
    assert "fit" in capsys.readouterr().err
