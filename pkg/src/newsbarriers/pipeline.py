"""End-to-end pipeline stages: ingest, annotate, experiment, report.

Each stage materializes its output under the run directory so stages can be
re-run and diffed independently. Failures carry a ``stage: cause`` message.
"""

from contextlib import contextmanager
from pathlib import Path

from .annotate import build_barrier_dataset, save_barrier_dataset
from .classifiers import ModelSpec, family_from_name
from .config import PipelineConfig, config_to_text
from .errors import ConfigError, DataError
from .evaluate import dataset_footer, render_report, run_experiment
from .features import build_vocabulary, build_vocabulary_from_index
from .ingest import (
    count_class_weight_inconsistencies,
    filter_propagated,
    load_concept_annotations,
    parse_pairs,
    to_spreading_examples,
)
from .knowledge import BarrierKind, load_country_profiles, load_publishers


@contextmanager
def stage(name: str):
    try:
        yield
    except ConfigError as exc:
        raise ConfigError(f"{name}: {exc}") from exc
    except DataError as exc:
        raise DataError(f"{name}: {exc}") from exc


def ingest_corpus(config: PipelineConfig):
    """Load stores and restructure the pair file into spreading examples."""
    with stage("countries"):
        profiles = load_country_profiles(config.countries)
    if config.scale_profiles:
        profiles = profiles.minmax_scaled()
    with stage("publishers"):
        publishers = load_publishers(config.publishers, profiles)
    with stage("pairs"):
        pairs = parse_pairs(config.pairs)
    with stage("concepts"):
        index = load_concept_annotations(config.concepts)
    propagated = filter_propagated(pairs)
    examples, report = to_spreading_examples(propagated, index, publishers, config.event)
    report.total_pairs = len(pairs)
    report.class_weight_inconsistencies = count_class_weight_inconsistencies(pairs)
    return profiles, publishers, index, examples, report


def build_vocab(config: PipelineConfig, examples, index):
    with stage("vocabulary"):
        if config.global_vocab:
            return build_vocabulary_from_index(index, config.vocab_size)
        return build_vocabulary(examples, config.vocab_size)


def annotate_corpus(config: PipelineConfig):
    """Ingest, build the vocabulary, and materialize per-barrier datasets."""
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    profiles, publishers, index, examples, report = ingest_corpus(config)
    (out / "ingest_report.txt").write_text(report.render(), encoding="utf-8")
    vocab = build_vocab(config, examples, index)
    vocab.save(out / "vocabulary.csv")
    economic_features = tuple(config.economic_features) or None
    datasets = {}
    for name in config.barriers:
        kind = BarrierKind(name)
        with stage(f"annotate[{name}]"):
            dataset = build_barrier_dataset(
                examples,
                kind,
                profiles,
                publishers,
                vocab,
                threshold=config.threshold,
                profile_side=config.profile_side,
                economic_features=economic_features,
            )
        save_barrier_dataset(dataset, out / f"dataset_{name}.csv")
        datasets[kind] = dataset
    return datasets, report, vocab


def run_pipeline(config: PipelineConfig):
    """Full run: annotate, cross-validate every model, write the reports."""
    config.validate()
    out = Path(config.out)
    datasets, report, vocab = annotate_corpus(config)
    specs = [ModelSpec(family=family_from_name(m), seed=config.seed) for m in config.models]
    grids = config.model_grids()
    rows = []
    footer = []
    for name in config.barriers:
        dataset = datasets[BarrierKind(name)]
        with stage(f"experiment[{name}]"):
            rows.extend(
                run_experiment(
                    dataset,
                    specs,
                    k=config.k_folds,
                    seed=config.seed,
                    grids=grids,
                    nested=config.nested,
                    fold_mean=config.fold_mean,
                )
            )
        footer.extend(dataset_footer(dataset))
    (out / "report.csv").write_text(render_report(rows, "csv"), encoding="utf-8")
    (out / "report.md").write_text(render_report(rows, "markdown", footer=footer), encoding="utf-8")
    (out / "config.txt").write_text(config_to_text(config), encoding="utf-8")
    return rows
