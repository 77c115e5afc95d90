import os
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, List, Mapping, Optional

import jsonschema
from dotenv import dotenv_values

from alignment.symmetrization import HEURISTICS
from evaluation.preprocessing import METEOR_PENALTIES
from evaluation.report import REPORT_FORMATS
from utils.exceptions import ConfigError

ENV_PREFIX = "TF_"
INTEGRATION_METHODS = ("1", "2", "3")
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


@dataclass
class PipelineConfig:
    """
    Settings of every pipeline stage.

    Stage artifacts live under `work_dir` with fixed names (see `artifact`);
    the remaining paths name external inputs.
    """
    # inputs
    source_path: str = ""
    target_path: str = ""
    mt_output_path: str = ""
    words_path: str = ""
    vocab_path: str = ""
    hyp_paths: str = ""
    hyp_labels: str = ""
    ref_paths: str = ""
    work_dir: str = "work"
    # corpus
    source_lang: str = "ur"
    target_lang: str = "en"
    min_len: int = 1
    max_len: int = 80
    # word alignment
    align_iterations: int = 5
    heuristic: str = "grow-diag"
    min_word_chars: int = 2
    # mining
    em_iterations: int = 100
    em_tolerance: float = 1e-6
    weight_by_posterior: bool = True
    max_word_length: int = 30
    threshold: float = 0.5
    # language models
    lm_order: int = 3
    lm_discount: float = 0.75
    lm_full_vocab: bool = False
    word_lm_order: int = 3
    # decoding
    beam: int = 16
    nbest: int = 10
    w_tm: float = 1.0
    w_lm: float = 0.5
    max_ratio: float = 3.0
    # integration
    method: str = "1"
    # evaluation
    lowercase: bool = True
    strip_punctuation: bool = True
    max_n: int = 4
    meteor_penalty: str = "linear"
    ter_shifts: bool = False
    report_format: str = "plain"
    # execution
    threads: int = 1
    seed: int = 0

    def artifact(self, key: str) -> str:
        return os.path.join(self.work_dir, ARTIFACTS[key])

    @staticmethod
    def split_list(value: str) -> List[str]:
        return [item.strip() for item in value.split(",") if item.strip()]


ARTIFACTS = {
    "normalized_source": "corpus.norm.src",
    "normalized_target": "corpus.norm.tgt",
    "clean_source": "corpus.clean.src",
    "clean_target": "corpus.clean.tgt",
    "stats": "stats.txt",
    "alignments": "alignments.txt",
    "candidates": "candidates.tsv",
    "model": "model.tsv",
    "mined": "mined.tsv",
    "char_lm": "char_lm.tsv",
    "word_lm": "word_lm.tsv",
    "nbest": "nbest.tsv",
    "integrated": "integrated.txt",
    "phrase_table": "phrase-table.txt",
    "report": "report.txt",
}


def get_config_schema():
    return {
        "$schema": "http://json-schema.org/draft-07/schema#",
        "type": "object",
        "properties": {
            "min_len": {"type": "integer", "minimum": 1},
            "max_len": {"type": "integer", "minimum": 1},
            "align_iterations": {"type": "integer", "minimum": 1},
            "heuristic": {"enum": list(HEURISTICS)},
            "min_word_chars": {"type": "integer", "minimum": 1},
            "em_iterations": {"type": "integer", "minimum": 1},
            "em_tolerance": {"type": "number", "minimum": 0},
            "max_word_length": {"type": "integer", "minimum": 1},
            "threshold": {"type": "number", "minimum": 0, "maximum": 1},
            "lm_order": {"type": "integer", "minimum": 1},
            "lm_discount": {"type": "number", "minimum": 0, "maximum": 1},
            "word_lm_order": {"type": "integer", "minimum": 1},
            "beam": {"type": "integer", "minimum": 1},
            "nbest": {"type": "integer", "minimum": 1},
            "w_tm": {"type": "number", "minimum": 0},
            "w_lm": {"type": "number", "minimum": 0},
            "max_ratio": {"type": "number", "exclusiveMinimum": 0},
            "method": {"enum": list(INTEGRATION_METHODS)},
            "max_n": {"type": "integer", "minimum": 1},
            "meteor_penalty": {"enum": list(METEOR_PENALTIES)},
            "report_format": {"enum": list(REPORT_FORMATS)},
            "threads": {"type": "integer", "minimum": 1},
            "seed": {"type": "integer", "minimum": 0},
            "work_dir": {"type": "string", "minLength": 1},
        },
    }


def _coerce(name: str, kind: type, value: Any) -> Any:
    if not isinstance(value, str):
        return value
    text = value.strip()
    try:
        if kind is bool:
            if text.lower() in _TRUE:
                return True
            if text.lower() in _FALSE:
                return False
            raise ValueError(text)
        if kind is int:
            return int(text)
        if kind is float:
            return float(text)
    except ValueError:
        raise ConfigError(f"Setting '{name}' expects a {kind.__name__}, got '{value}'.")
    return text


def _normalize_key(key: str) -> str:
    key = key.strip()
    if key.upper().startswith(ENV_PREFIX):
        key = key[len(ENV_PREFIX):]
    return key.lower().replace("-", "_")


def load_config(
    config_file: Optional[str] = None,
    overrides: Optional[Mapping[str, Any]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> PipelineConfig:
    """
    Builds the pipeline configuration. Later sources win:
    dataclass defaults, the key=value `config_file`, `TF_`-prefixed environment
    variables, then `overrides` (command-line flags; None values are ignored).

    Raises:
        ConfigError: On unknown keys, values of the wrong type, or values outside
            the schema's ranges and enums.
    """
    known = {f.name: f.type for f in fields(PipelineConfig)}
    values: Dict[str, Any] = {}

    if config_file:
        if not os.path.isfile(config_file):
            raise ConfigError(f"Configuration file not found: {config_file}")
        for key, value in dotenv_values(config_file).items():
            values[_normalize_key(key)] = "" if value is None else value

    environ = os.environ if environ is None else environ
    for key, value in environ.items():
        if key.upper().startswith(ENV_PREFIX):
            values[_normalize_key(key)] = value

    for key, value in (overrides or {}).items():
        if value is not None:
            values[_normalize_key(key)] = value

    unknown = sorted(set(values) - set(known))
    if unknown:
        raise ConfigError(f"Unknown configuration keys: {', '.join(unknown)}.")
    config = PipelineConfig(**{k: _coerce(k, known[k], v) for k, v in values.items()})
    try:
        jsonschema.validate(asdict(config), schema=get_config_schema())
    except jsonschema.exceptions.ValidationError as e:
        field_name = ".".join(str(p) for p in e.path) or "config"
        raise ConfigError(f"Invalid setting '{field_name}': {e.message}")
    if config.max_len < config.min_len:
        raise ConfigError(f"max_len ({config.max_len}) must not be below min_len ({config.min_len}).")
    return config
