"""
Input file checks for trace ingestion.
"""

import logging
import os
from typing import List, Optional

from ..core import DataError

try:
    import magic
except ImportError:
    # python-magic needs the libmagic system library
    magic = None

logger = logging.getLogger("trace_segmenter.security")

DEFAULT_MAX_SIZE = 512 * 1024 * 1024  # 512MB
DEFAULT_EXTENSIONS = [".csv", ".txt"]


class FileValidationError(DataError):
    """Raised when an input file fails validation."""
    pass


def sanitize_path(file_path: str) -> str:
    """
    Normalize a path to an absolute path.

    Raises:
        FileValidationError: If the path is empty
    """
    if not file_path or not str(file_path).strip():
        raise FileValidationError("Empty path")
    return os.path.normpath(os.path.abspath(file_path))


def validate_file(file_path: str, max_size: Optional[int] = DEFAULT_MAX_SIZE,
                  allowed_extensions: Optional[List[str]] = None) -> bool:
    """
    Validate an input trace file before parsing.

    Args:
        file_path: Path to validate
        max_size: Maximum allowed file size in bytes
        allowed_extensions: List of allowed file extensions (default .csv, .txt)

    Returns:
        True if file is valid

    Raises:
        FileValidationError: If validation fails
    """
    allowed_extensions = allowed_extensions or DEFAULT_EXTENSIONS
    file_path = sanitize_path(file_path)
    try:
        if not os.path.exists(file_path):
            raise FileValidationError(f"File not found: {file_path}")

        if not os.path.isfile(file_path):
            raise FileValidationError(f"Not a regular file: {file_path}")

        if not os.access(file_path, os.R_OK):
            raise FileValidationError(f"File not readable: {file_path}")

        if max_size is not None:
            file_size = os.path.getsize(file_path)
            if file_size > max_size:
                raise FileValidationError(f"File too large: {file_size} bytes")

        ext = os.path.splitext(file_path)[1].lower()
        if ext not in allowed_extensions:
            raise FileValidationError(f"File extension not allowed: {ext}")

        if magic is not None:
            file_type = magic.from_file(file_path, mime=True)
            # Empty files are reported as application/x-empty and fail later in parsing
            if not file_type.startswith(("text/", "application/csv", "application/x-empty")):
                raise FileValidationError(f"Unsupported file type: {file_type}")
        else:
            logger.debug("python-magic not available, skipping file type validation")

        return True

    except OSError as e:
        raise FileValidationError(f"Error validating file: {e}")
