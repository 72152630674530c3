"""Run configuration: INI-style file with sections, flat keys.

Section names only group keys for readability; every key maps onto one
:class:`RunConfig` field. Command-line flags override file values.
"""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import CorpusmixError


class ConfigError(CorpusmixError):
    exit_code = 1


SECTIONS = {
    "corpus": ["corpus_dir", "metadata_path", "dtm_path", "vocab_path", "group_by"],
    "preprocess": ["stopwords_path", "lemma_path", "collocations_path", "min_word_len",
                   "min_term_freq", "weighting", "context"],
    "lda": ["k", "k_min", "k_max", "chosen_k", "alpha", "delta", "seed", "em_max_iter",
            "em_rel_tol", "estep_max_iter", "estep_rel_tol"],
    "cooccur": ["focal_terms", "top_n", "depth", "llr_threshold", "fanout"],
    "explore": ["max_terms", "network_top_n", "min_size", "max_size"],
    "simulate": ["sim_k", "sim_n_terms", "sim_n_docs", "sim_doc_len", "sim_alpha", "sim_delta"],
    "output": ["output_dir"],
}


@dataclass
class RunConfig:
    corpus_dir: str | None = None
    metadata_path: str | None = None
    dtm_path: str | None = None
    vocab_path: str | None = None
    group_by: str | None = None
    stopwords_path: str | None = None
    lemma_path: str | None = None
    collocations_path: str | None = None
    min_word_len: int = 3
    min_term_freq: int = 20
    weighting: str = "count"
    context: str | None = None  # per-command default
    k: int | None = None
    k_min: int = 2
    k_max: int = 10
    chosen_k: int | None = None
    alpha: float | None = None
    delta: float = 0.1
    seed: int = 0
    em_max_iter: int = 100
    em_rel_tol: float = 1e-4
    estep_max_iter: int = 50
    estep_rel_tol: float = 1e-6
    focal_terms: list[str] = field(default_factory=list)
    top_n: int = 10
    depth: int = 2
    llr_threshold: float = 0.0
    fanout: int = 5
    max_terms: int = 100
    network_top_n: int = 30
    min_size: float = 1.0
    max_size: float = 5.0
    sim_k: int = 3
    sim_n_terms: int = 100
    sim_n_docs: int = 100
    sim_doc_len: int = 100
    sim_alpha: float = 0.1
    sim_delta: float = 0.1
    output_dir: str = "out"

    def updated(self, **overrides) -> "RunConfig":
        """Copy with every non-None override applied."""
        changes = {k: v for k, v in overrides.items() if v is not None and v != ()}
        unknown = set(changes) - {f.name for f in fields(self)}
        if unknown:
            raise ConfigError("unknown setting(s): " + ", ".join(sorted(unknown)))
        if "focal_terms" in changes:
            changes["focal_terms"] = list(changes["focal_terms"])
        return dataclasses.replace(self, **changes)

    def to_ini(self) -> str:
        lines = []
        for section, keys in SECTIONS.items():
            lines.append(f"[{section}]")
            for key in keys:
                value = getattr(self, key)
                if value is None:
                    continue
                if isinstance(value, list):
                    value = ", ".join(value)
                lines.append(f"{key} = {value}")
            lines.append("")
        return "\n".join(lines)


_TYPES = {
    "int": int,
    "float": float,
}


def _convert(name: str, raw: str):
    ftype = {f.name: f.type for f in fields(RunConfig)}[name]
    raw = raw.strip()
    if name == "focal_terms":
        return [t.strip() for t in raw.split(",") if t.strip()]
    if raw.lower() in ("", "none"):
        return None
    base = ftype.split("|")[0].strip()
    try:
        return _TYPES[base](raw) if base in _TYPES else raw
    except ValueError:
        raise ConfigError(f"setting {name}: cannot parse {raw!r} as {base}") from None


def load_config(path) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    known = {f.name for f in fields(RunConfig)}
    values = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            if key not in known:
                raise ConfigError(f"{path}: unknown setting {key!r} in [{section}]")
            values[key] = _convert(key, raw)
    base = RunConfig()
    # relative paths in the file are resolved against the file's directory
    root = Path(path).resolve().parent
    for key in ("corpus_dir", "metadata_path", "dtm_path", "vocab_path", "stopwords_path",
                "lemma_path", "collocations_path"):
        if values.get(key) and not Path(values[key]).is_absolute():
            values[key] = str(root / values[key])
    return dataclasses.replace(base, **values)
