import csv
import subprocess
import sys
from pathlib import Path

import pytest

from newsbarriers.config import PipelineConfig
from newsbarriers.errors import ConfigError
from newsbarriers.ingest import filter_propagated, parse_pairs
from newsbarriers.knowledge import BarrierKind
from newsbarriers.pipeline import annotate_corpus
from newsbarriers.synth import SyntheticSpec, generate_corpus, load_truth

ORACLE_SCRIPT = Path(__file__).resolve().parents[1] / "scripts" / "bruteforce_reannotate.py"


def annotate(paths, tmp_path, **overrides):
    config = PipelineConfig(
        pairs=str(paths["pairs"]),
        concepts=str(paths["concepts"]),
        countries=str(paths["countries"]),
        publishers=str(paths["publishers"]),
        out=str(tmp_path / "run"),
        event="synthetic",
        vocab_size=20,
        **overrides,
    )
    config.validate()
    return annotate_corpus(config)


def labels_of(dataset):
    return [(i.article_id, "TRUE" if i.label else "FALSE") for i in dataset.instances]


def test_same_regimes_plant_all_false(tmp_path):
    spec = SyntheticSpec(
        n_articles=40,
        seed=1,
        regimes={name: "same" for name in ("economic", "cultural", "geographical", "timezone", "political")},
    )
    paths = generate_corpus(spec, tmp_path / "corpus")
    truth = load_truth(paths["truth"])
    for name, rows in truth.items():
        assert all(label == "FALSE" for _, label in rows), name
    datasets, _, _ = annotate(paths, tmp_path)
    for kind, dataset in datasets.items():
        assert dataset.class_counts[0] == 0  # no TRUE labels anywhere


def test_diff_regimes_plant_all_true(tmp_path):
    spec = SyntheticSpec(
        n_countries=6,
        n_publishers=8,
        n_articles=40,
        seed=2,
        regimes={name: "diff" for name in ("economic", "cultural", "geographical", "timezone", "political")},
    )
    paths = generate_corpus(spec, tmp_path / "corpus")
    truth = load_truth(paths["truth"])
    for name, rows in truth.items():
        assert all(label == "TRUE" for _, label in rows), name
    datasets, _, _ = annotate(paths, tmp_path)
    for kind, dataset in datasets.items():
        assert dataset.class_counts[1] == 0  # no FALSE labels anywhere


def test_shared_utc_offset_means_timezone_false(tmp_path):
    spec = SyntheticSpec(n_countries=2, n_articles=30, seed=3, regimes={"timezone": "same"})
    paths = generate_corpus(spec, tmp_path / "corpus")
    assert all(label == "FALSE" for _, label in load_truth(paths["truth"])["timezone"])


def test_orthogonal_economic_profiles_mean_economic_true(tmp_path):
    spec = SyntheticSpec(n_countries=5, n_articles=30, seed=4, regimes={"economic": "diff"})
    paths = generate_corpus(spec, tmp_path / "corpus")
    assert all(label == "TRUE" for _, label in load_truth(paths["truth"])["economic"])


def test_mixed_labels_match_annotator_exactly(tmp_path):
    paths = generate_corpus(SyntheticSpec(n_articles=120, seed=5), tmp_path / "corpus")
    truth = load_truth(paths["truth"])
    datasets, report, _ = annotate(paths, tmp_path)
    assert report.total_drops == 0
    for kind, dataset in datasets.items():
        expected = [(a, l) for a, l in truth[kind.value] if l != "DROPPED"]
        assert labels_of(dataset) == expected


def test_unknown_alignments_drop_politically(tmp_path):
    spec = SyntheticSpec(n_articles=60, seed=6, unknown_alignment_rate=0.4)
    paths = generate_corpus(spec, tmp_path / "corpus")
    truth = load_truth(paths["truth"])
    expected_drops = sum(1 for _, label in truth["political"] if label == "DROPPED")
    assert expected_drops > 0
    datasets, _, _ = annotate(paths, tmp_path)
    political = datasets[BarrierKind.POLITICAL]
    assert political.dropped["unknown_alignment"] == expected_drops
    assert labels_of(political) == [(a, l) for a, l in truth["political"] if l != "DROPPED"]


def test_outputs_parse_cleanly(tmp_path):
    paths = generate_corpus(SyntheticSpec(n_articles=25, seed=7, extra_unclassified_pairs=8), tmp_path / "corpus")
    pairs = parse_pairs(paths["pairs"])
    assert len(pairs) == 33
    assert len(filter_propagated(pairs)) == 25
    datasets, report, _ = annotate(paths, tmp_path)
    assert report.class_weight_inconsistencies == 0
    assert report.examples == 25


def test_generation_deterministic(tmp_path):
    spec = SyntheticSpec(n_articles=30, seed=8)
    a = generate_corpus(spec, tmp_path / "a")
    b = generate_corpus(SyntheticSpec(n_articles=30, seed=8), tmp_path / "b")
    for key in ("pairs", "concepts", "countries", "publishers", "truth"):
        assert a[key].read_bytes() == b[key].read_bytes()


def test_bruteforce_oracle_agrees_including_drops(tmp_path):
    spec = SyntheticSpec(n_articles=80, seed=9, unknown_alignment_rate=0.3)
    paths = generate_corpus(spec, tmp_path / "corpus")
    proc = subprocess.run(
        [sys.executable, str(ORACLE_SCRIPT), str(tmp_path / "corpus")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    oracle = {name: [] for name in load_truth(paths["truth"])}
    for record in csv.reader(proc.stdout.strip().splitlines()[1:]):
        oracle[record[2]].append((record[1], record[3]))
    truth = load_truth(paths["truth"])
    assert oracle == truth


def test_spec_validation():
    with pytest.raises(ConfigError):
        SyntheticSpec(regimes={"economic": "diff"}, n_countries=14).validate()
    with pytest.raises(ConfigError):
        SyntheticSpec(regimes={"nonsense": "same"}).validate()
    with pytest.raises(ConfigError):
        SyntheticSpec(regimes={"cultural": "sometimes"}).validate()
    with pytest.raises(ConfigError):
        SyntheticSpec(n_articles=0).validate()
