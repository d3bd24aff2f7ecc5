import logging
import os
import tempfile
from pathlib import Path

from cstre import env

__all__ = [
    "format_float",
    "atomic_write_text",
    "logger",
]
# Set up logging configuration
_level = logging._nameToLevel.get(env.LOGGER_LEVEL.upper(), logging.INFO)
logging.basicConfig(level=_level)
logger = logging.getLogger("cstre")


def format_float(value: float | None) -> str:
    """17 significant digits, '.' separator regardless of locale. None -> ''."""
    if value is None:
        return ""
    return format(value, ".17g")


def atomic_write_text(path: str | Path, text: str) -> None:
    """
    Write text to path via a sibling temp file and rename, so a failed run
    never leaves a partial file behind.
    """
    target = Path(path)
    fd, tmp_name = tempfile.mkstemp(
        prefix=f".{target.name}.", suffix=".tmp", dir=target.parent
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, target)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
