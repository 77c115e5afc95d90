import contextlib
import logging
import os
import tempfile
from typing import Iterator, List

from .exceptions import TextDecodeError


def get_filename(file_path: str) -> str:
    return file_path.replace("\\", "/").rsplit('/', 1)[-1]


def decode_utf8(data: bytes) -> str:
    """
    Strictly decodes UTF-8 bytes.

    Raises:
        TextDecodeError: carrying the byte offset of the first invalid sequence.
    """
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise TextDecodeError(e.start, e.reason) from e


def read_lines(file_path: str) -> List[str]:
    """
    Reads a UTF-8 text file into a list of lines without their line terminators.

    Args:
        file_path (str): Path to the file.

    Returns:
        list[str]: The lines of the file.

    Raises:
        TextDecodeError: If the file is not valid UTF-8. The offset is relative to the file start.
    """
    with open(file_path, "rb") as f:
        data = f.read()
    text = decode_utf8(data)
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [line.rstrip("\r") for line in lines]


@contextlib.contextmanager
def atomic_write(file_path: str) -> Iterator:
    """
    Opens a temporary file next to `file_path` for writing and renames it over
    `file_path` only when the block completes. On failure the temporary file is
    removed and `file_path` is left untouched.

    Example:
        >>> with atomic_write("out.tsv") as f:
        ...     f.write("a\\tb\\n")
    """
    directory = os.path.dirname(os.path.abspath(file_path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(prefix=f".{get_filename(file_path)}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            yield f
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp_path, file_path)
        logging.debug(f"[file_utils][{get_filename(file_path)}] Written atomically.")
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.remove(tmp_path)
        raise


def write_lines(file_path: str, lines) -> int:
    """Writes lines atomically, one per line. Returns the number of lines written."""
    count = 0
    with atomic_write(file_path) as f:
        for line in lines:
            f.write(f"{line}\n")
            count += 1
    return count
