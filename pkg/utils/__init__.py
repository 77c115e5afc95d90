# utils/__init__.py
from .file_utils import get_filename
from .file_utils import read_lines, write_lines, atomic_write, decode_utf8
from .parallel import ordered_map
