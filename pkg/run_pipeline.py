"""
Transliteration Pipeline

Runs one stage of the transliteration pipeline: corpus preparation, word
alignment, unsupervised transliteration mining, language model training,
decoding of OOV words, integration into MT output, and evaluation.

Stages (in pipeline order):
- normalize: Normalizes punctuation and tokenizes the raw parallel corpus.
- clean: Drops sentence pairs outside the length bounds.
- stats: Prints the corpus statistics table.
- align: Word-aligns the corpus and extracts candidate word pairs.
- mine: Trains the transliteration model and mines transliteration pairs.
- train-lm: Trains the character and word language models.
- transliterate: Writes n-best transliterations of OOV words.
- integrate: Puts transliterations into MT output (method 1 or 2; 3 exports a phrase table).
- export-pt: Exports a transliteration phrase table for an external decoder.
- evaluate: Scores hypothesis files against references.

Configuration (lowest precedence first):
1. Built-in defaults.
2. A key=value file given with --config.
3. Environment variables prefixed TF_ (a .env file in the working directory is loaded).
4. Command-line flags, e.g. --work-dir, --threshold, --method.

Usage:
- `python run_pipeline.py mine --config pipeline.env --threads 4`

Exit codes: 0 success, 1 usage or configuration error, 2 data error, 3 numeric failure.
"""

import argparse
import logging
import os
import sys
from dataclasses import fields

from dotenv import load_dotenv

from pipeline import COMMANDS, EXIT_CONFIG, PipelineConfig, PipelineRunner, load_config
from utils.exceptions import ConfigError

load_dotenv()

# -------------------------------
# Logging configuration
# -------------------------------
log_level = os.getenv('LOG_LEVEL', 'INFO').upper()
log_level = getattr(logging, log_level, logging.INFO)
logging.basicConfig(
    level=log_level,
    format='%(asctime)s [%(levelname)s] %(message)s',
    datefmt='%Y-%m-%d %H:%M:%S'
)


class PipelineArgumentParser(argparse.ArgumentParser):
    """Reports usage errors with exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> PipelineArgumentParser:
    parser = PipelineArgumentParser(
        prog="run_pipeline.py",
        description="Transliteration mining and OOV integration pipeline.",
    )
    parser.add_argument("command", choices=COMMANDS, help="Pipeline stage to run.")
    parser.add_argument("--config", dest="config_file", help="key=value configuration file.")
    for f in fields(PipelineConfig):
        parser.add_argument(f"--{f.name.replace('_', '-')}", dest=f.name, default=None, metavar=f.name.upper())
    return parser


# -------------------------------
# Main Method
# -------------------------------

def main(argv=None) -> int:
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    config_file = args.pop("config_file")
    try:
        cfg = load_config(config_file, overrides=args)
    except ConfigError as e:
        logging.error(f"[run_pipeline][{command}] {e}")
        return EXIT_CONFIG
    return PipelineRunner(cfg).run(command)


# -------------------------------
# Entry Point
# -------------------------------

if __name__ == "__main__":
    sys.exit(main())
