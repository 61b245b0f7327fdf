"""Pipeline configuration and its plain key-value replay format.

Every run directory receives a ``config.txt`` capturing all knobs; feeding it
back through ``--config`` reproduces the run byte for byte.
"""

from dataclasses import dataclass, field, fields
from pathlib import Path

from .classifiers import DEFAULT_GRIDS, ModelFamily, family_from_name
from .errors import ConfigError
from .knowledge import ECONOMIC_FEATURES

ALL_BARRIERS = ("economic", "cultural", "geographical", "timezone", "political")
ALL_MODELS = tuple(f.value for f in ModelFamily)

GRID_PARAM = {
    ModelFamily.SVM: "lam",
    ModelFamily.KNN: "k",
    ModelFamily.DECISION_TREE: "max_leaf_nodes",
    ModelFamily.RANDOM_FOREST: "n_estimators",
}


@dataclass
class PipelineConfig:
    pairs: str = ""
    concepts: str = ""
    countries: str = ""
    publishers: str = ""
    out: str = "runs/latest"
    event: str = ""
    barriers: tuple = ALL_BARRIERS
    vocab_size: int = 300
    threshold: float = 0.9
    k_folds: int = 10
    seed: int = 0
    models: tuple = ALL_MODELS
    grids: dict = field(default_factory=dict)  # family name -> list of values
    global_vocab: bool = False
    nested: bool = False
    fold_mean: bool = False
    profile_side: str = "source"
    scale_profiles: bool = False
    economic_features: tuple = ()  # empty means all indicators

    def validate(self) -> None:
        for key in ("pairs", "concepts", "countries", "publishers"):
            path = getattr(self, key)
            if not path:
                raise ConfigError(f"{key}: not set")
            if not Path(path).is_file():
                raise ConfigError(f"{key}: not found")
        for barrier in self.barriers:
            if barrier not in ALL_BARRIERS:
                raise ConfigError(f"barriers: unknown barrier {barrier!r}")
        for model in self.models:
            try:
                family_from_name(model)
            except ValueError as exc:
                raise ConfigError(f"models: {exc}") from None
        if self.profile_side not in ("source", "target"):
            raise ConfigError("profile_side: must be 'source' or 'target'")
        if self.vocab_size < 1:
            raise ConfigError("vocab_size: must be positive")
        if self.k_folds < 2:
            raise ConfigError("k_folds: must be at least 2")
        for name in self.economic_features:
            if name not in ECONOMIC_FEATURES:
                raise ConfigError(f"economic_features: unknown indicator {name!r}")

    def model_grids(self) -> dict:
        """Expand configured grid values into per-family hyperparameter grids."""
        grids = {}
        for name, values in self.grids.items():
            family = family_from_name(name)
            param = GRID_PARAM.get(family)
            if param is None:
                raise ConfigError(f"grids: family {name!r} has no sweep parameter")
            grids[family] = [{param: v} for v in values]
        for family, grid in DEFAULT_GRIDS.items():
            grids.setdefault(family, grid)
        return grids


def _format_grid_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_grid_value(text: str):
    text = text.strip()
    if text.lower() == "none":
        return None
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"grids: cannot parse value {text!r}") from None


def config_to_text(config: PipelineConfig) -> str:
    lines = []
    for f in fields(PipelineConfig):
        value = getattr(config, f.name)
        if f.name == "grids":
            for name in sorted(value):
                param = GRID_PARAM[family_from_name(name)]
                joined = ",".join(_format_grid_value(v) for v in value[name])
                lines.append(f"grid.{name}.{param} = {joined}")
            continue
        if isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, tuple):
            text = ",".join(value)
        else:
            text = str(value)
        lines.append(f"{f.name} = {text}")
    return "\n".join(lines) + "\n"


def config_from_text(text: str) -> PipelineConfig:
    config = PipelineConfig()
    known = {f.name: f for f in fields(PipelineConfig)}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key.startswith("grid."):
            parts = key.split(".")
            if len(parts) != 3:
                raise ConfigError(f"config line {lineno}: grid keys look like grid.<family>.<param>")
            family = family_from_name(parts[1])
            if GRID_PARAM.get(family) != parts[2]:
                raise ConfigError(f"config line {lineno}: unknown grid parameter {parts[2]!r}")
            config.grids[family.value] = [_parse_grid_value(v) for v in value.split(",") if v.strip()]
            continue
        if key not in known:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        f = known[key]
        if f.type == "bool" or isinstance(getattr(config, key), bool):
            if value.lower() not in ("true", "false"):
                raise ConfigError(f"config line {lineno}: {key} must be true or false")
            setattr(config, key, value.lower() == "true")
        elif key in ("barriers", "models", "economic_features"):
            setattr(config, key, tuple(v.strip() for v in value.split(",") if v.strip()))
        elif key in ("vocab_size", "k_folds", "seed"):
            setattr(config, key, int(value))
        elif key == "threshold":
            setattr(config, key, float(value))
        else:
            setattr(config, key, value)
    return config


def load_config(path) -> PipelineConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError:
        raise ConfigError(f"config: not found") from None
    return config_from_text(text)
