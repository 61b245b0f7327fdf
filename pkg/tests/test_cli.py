import json

import pytest

from newsbarriers.cli import main
from newsbarriers.synth import SyntheticSpec, generate_corpus

FAST_GRIDS = [
    "--grid", "knn.k=1,3",
    "--grid", "decision_tree.max_leaf_nodes=4,none",
    "--grid", "random_forest.n_estimators=5",
    "--grid", "svm.lam=0.001",
]


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    return generate_corpus(SyntheticSpec(n_articles=60, n_publishers=10, seed=41), out)


def corpus_args(corpus):
    return [
        "--pairs", str(corpus["pairs"]),
        "--concepts", str(corpus["concepts"]),
        "--countries", str(corpus["countries"]),
        "--publishers", str(corpus["publishers"]),
        "--event", "synthetic",
    ]


def test_run_writes_all_artifacts(tmp_path, corpus):
    out = tmp_path / "run"
    code = main(["run", *corpus_args(corpus), "--out", str(out),
                 "--vocab-size", "20", "--k-folds", "5", "--seed", "3", *FAST_GRIDS])
    assert code == 0
    for name in ("report.md", "report.csv", "ingest_report.txt", "vocabulary.csv", "config.txt"):
        assert (out / name).is_file(), name
    for barrier in ("economic", "cultural", "geographical", "timezone", "political"):
        assert (out / f"dataset_{barrier}.csv").is_file()
    # five barriers times eight models, grouped in five barrier blocks
    report_lines = (out / "report.csv").read_text().strip().splitlines()
    assert len(report_lines) == 1 + 40
    markdown = (out / "report.md").read_text()
    for title in ("Economic", "Cultural", "Geographical", "Time Zone", "Political"):
        assert markdown.count(f"| {title} |") == 1
        assert f"{title}: " in markdown  # footer line with sizes and class counts
    assert "instances (TRUE" in markdown


def test_missing_pairs_is_config_error(tmp_path, corpus, capsys):
    args = corpus_args(corpus)
    args[1] = str(tmp_path / "nope.csv")
    code = main(["run", *args, "--out", str(tmp_path / "run")])
    assert code == 1
    assert capsys.readouterr().err.strip() == "pairs: not found"


def test_data_error_exit_code(tmp_path, corpus, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("zap\n1,2\n", encoding="utf-8")
    args = corpus_args(corpus)
    args[1] = str(bad)
    code = main(["run", *args, "--out", str(tmp_path / "run")])
    assert code == 2
    assert capsys.readouterr().err.startswith("pairs: malformed row 1")


def test_rerun_is_byte_identical_and_replayable(tmp_path, corpus):
    out_a, out_b, out_c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    base = ["run", *corpus_args(corpus), "--vocab-size", "15", "--k-folds", "5", "--seed", "9", *FAST_GRIDS]
    assert main([*base, "--out", str(out_a)]) == 0
    assert main([*base, "--out", str(out_b)]) == 0
    assert (out_a / "report.csv").read_bytes() == (out_b / "report.csv").read_bytes()
    # replay from the recorded config file
    assert main(["run", "--config", str(out_a / "config.txt"), "--out", str(out_c)]) == 0
    assert (out_a / "report.csv").read_bytes() == (out_c / "report.csv").read_bytes()


def test_annotate_writes_datasets_only(tmp_path, corpus):
    out = tmp_path / "annotated"
    code = main(["annotate", *corpus_args(corpus), "--out", str(out), "--vocab-size", "10"])
    assert code == 0
    assert (out / "dataset_political.csv").is_file()
    assert (out / "vocabulary.csv").is_file()
    assert not (out / "report.csv").exists()


def test_concept_freq_prints_table(tmp_path, corpus, capsys):
    code = main(["concept-freq", *corpus_args(corpus), "--out", str(tmp_path / "x"), "--n", "7"])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "concept,frequency"
    assert len(lines) == 8
    frequencies = [int(line.rsplit(",", 1)[1]) for line in lines[1:]]
    assert frequencies == sorted(frequencies, reverse=True)


def test_concept_freq_saturates(tmp_path, corpus, capsys):
    code = main(["concept-freq", *corpus_args(corpus), "--out", str(tmp_path / "x"), "--n", "100000"])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert 1 < len(lines) - 1 <= 40  # concept pool size bounds the table


def test_concept_freq_identical_runs(tmp_path, corpus, capsys):
    main(["concept-freq", *corpus_args(corpus), "--out", str(tmp_path / "x"), "--n", "10"])
    first = capsys.readouterr().out
    main(["concept-freq", *corpus_args(corpus), "--out", str(tmp_path / "x"), "--n", "10"])
    assert capsys.readouterr().out == first


def test_synth_command_writes_corpus(tmp_path, capsys):
    out = tmp_path / "synthcli"
    code = main(["synth", "--out", str(out), "--n-articles", "12", "--seed", "4",
                 "--regime", "timezone=same"])
    assert code == 0
    assert (out / "pairs.csv").is_file()
    assert (out / "truth.csv").is_file()
    spec = json.loads((out / "synth_spec.json").read_text())
    assert spec["regimes"] == {"timezone": "same"}


def test_train_and_evaluate_round_trip(tmp_path, corpus, capsys):
    out = tmp_path / "annotated"
    assert main(["annotate", *corpus_args(corpus), "--out", str(out), "--vocab-size", "10"]) == 0
    dataset = out / "dataset_timezone.csv"
    model_path = tmp_path / "model.json"
    code = main(["train", "--data", str(dataset), "--family", "decision_tree",
                 "--param", "max_leaf_nodes=none", "--barrier", "timezone",
                 "--out", str(model_path)])
    assert code == 0
    assert model_path.is_file()
    capsys.readouterr()
    code = main(["evaluate", "--model", str(model_path), "--data", str(dataset)])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    values = dict(line.split("=") for line in lines)
    assert set(values) == {"ca", "micro_precision", "micro_recall", "micro_f1"}
    assert float(values["ca"]) == float(values["micro_f1"])
    # an unrestricted tree fits training data at least as well as the majority class
    assert float(values["ca"]) >= 0.5


def test_report_command_renders_markdown(tmp_path, corpus, capsys):
    out = tmp_path / "run"
    assert main(["run", *corpus_args(corpus), "--out", str(out), "--vocab-size", "10",
                 "--k-folds", "5", "--seed", "1", "--models", "uniform,most_frequent",
                 "--barriers", "timezone,political"]) == 0
    capsys.readouterr()
    assert main(["report", "--rows", str(out / "report.csv")]) == 0
    text = capsys.readouterr().out
    assert text.splitlines()[0].startswith("| Barrier | Model |")
    assert "Time Zone" in text and "Political" in text
    rendered = tmp_path / "again.md"
    assert main(["report", "--rows", str(out / "report.csv"), "--format", "csv",
                 "--out", str(rendered)]) == 0
    assert rendered.read_bytes() == (out / "report.csv").read_bytes()


def test_report_missing_rows_file(tmp_path, capsys):
    assert main(["report", "--rows", str(tmp_path / "none.csv")]) == 1
    assert capsys.readouterr().err.strip() == "rows: not found"


def test_barrier_subset_run(tmp_path, corpus):
    out = tmp_path / "subset"
    code = main(["run", *corpus_args(corpus), "--out", str(out), "--vocab-size", "10",
                 "--k-folds", "5", "--models", "most_frequent", "--barriers", "economic", *FAST_GRIDS])
    assert code == 0
    assert (out / "dataset_economic.csv").is_file()
    assert not (out / "dataset_cultural.csv").exists()
    report = (out / "report.csv").read_text().strip().splitlines()
    assert len(report) == 2  # header plus the single row


def test_economic_feature_subset_flag(tmp_path, corpus):
    out = tmp_path / "subset"
    code = main(["annotate", *corpus_args(corpus), "--out", str(out), "--vocab-size", "5",
                 "--barriers", "economic", "--economic-features", "Rank,Health"])
    assert code == 0
    header = (out / "dataset_economic.csv").read_text().splitlines()[0]
    assert header.endswith("c4,Rank,Health")


def test_unknown_model_is_config_error(tmp_path, corpus, capsys):
    code = main(["run", *corpus_args(corpus), "--out", str(tmp_path / "x"),
                 "--models", "perceptron"])
    assert code == 1
    assert "unknown model family" in capsys.readouterr().err


def test_env_var_sets_default_out(tmp_path, corpus, monkeypatch):
    out = tmp_path / "envout"
    monkeypatch.setenv("NEWSBARRIERS_OUT", str(out))
    code = main(["annotate", *corpus_args(corpus), "--vocab-size", "5"])
    assert code == 0
    assert (out / "vocabulary.csv").is_file()


def test_global_vocab_counts_all_articles(tmp_path, corpus):
    per_event = tmp_path / "per_event"
    global_out = tmp_path / "global"
    assert main(["annotate", *corpus_args(corpus), "--out", str(per_event), "--vocab-size", "40"]) == 0
    assert main(["annotate", *corpus_args(corpus), "--out", str(global_out), "--vocab-size", "40",
                 "--global-vocab"]) == 0
    per_event_vocab = (per_event / "vocabulary.csv").read_text()
    global_vocab = (global_out / "vocabulary.csv").read_text()
    # the global variant counts target and non-propagated articles too
    assert per_event_vocab != global_vocab
    total = lambda text: sum(int(line.rsplit(",", 1)[1]) for line in text.strip().splitlines()[1:])
    assert total(global_vocab) > total(per_event_vocab)
