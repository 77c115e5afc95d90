# pipeline/__init__.py
from .config import PipelineConfig, load_config
from .stages import COMMANDS, PipelineRunner, EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_NUMERIC
