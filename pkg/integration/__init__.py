# integration/__init__.py
from .oov_detection import OOVOccurrence, OOVReason, detect_oov, unwrap_marker
from .phrase_table import PhraseTableEntry, export_phrase_table, read_phrase_table, write_phrase_table
from .integrators import (
    BaseIntegrator,
    IntegrationResult,
    ReplaceIntegrator,
    RescoreIntegrator,
    method1_replace,
    method2_rescore,
)
from .integrator_factory import IntegratorFactory
from .output_integration import OutputIntegrator
