import re
import io
import sys
import json
import math
from pathlib import Path

import numpy as np
import pandas as pd

from .constants import FLOAT_FORMAT
from .errors import InputError, OutputError, ParseError

_PANDAS_LINE = re.compile(r'line (\d+)')


def read_angles_csv(path: str | Path, column: str = 'theta') -> np.ndarray:
    """
    Read angles (radians) from a CSV file with a header row.

    The `column` column is used when present, otherwise the file must
    have a single column. Blank files and files with only a header give
    an empty array.

    Parameters
    ----------
    path : str or Path
        CSV file written by ``geonorm sample`` or by hand.
    column : str, optional
        Name of the column holding the angles.

    Returns
    -------
    numpy.ndarray
        The angles, in file order, not canonicalized.

    Raises
    ------
    ParseError
        With the 1-based line number of the first offending line.
    InputError
        If the file cannot be opened.
    """
    try:
        text = Path(path).read_text()
    except OSError as error:
        raise InputError(f"{path}: {error.strerror or error}") from error
    if not text.strip():
        return np.empty(0)
    try:
        frame = pd.read_csv(io.StringIO(text), dtype=str, skip_blank_lines=True)
    except pd.errors.ParserError as error:
        match = _PANDAS_LINE.search(str(error))
        line = int(match.group(1)) if match else None
        raise ParseError(f"malformed CSV row in {path}", line) from error
    if column in frame.columns:
        raw = frame[column]
    elif len(frame.columns) == 1:
        raw = frame.iloc[:, 0]
    else:
        raise ParseError(f"no '{column}' column in {path}", 1)
    values = pd.to_numeric(raw.str.strip(), errors='coerce').to_numpy(dtype=float)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        # header is line 1; blank lines are skipped by the reader
        data_lines = [
            number for number, line in enumerate(text.splitlines(), start=1)
            if line.strip()
        ][1:]
        first = int(bad[0])
        raise ParseError(
            f"not a finite angle: {raw.iloc[first]!r}", data_lines[first]
        )
    return values


def write_csv(frame: pd.DataFrame, path: str | Path | None = None, append: bool = False):
    """
    Write `frame` as CSV with LF line endings and 17 significant digits.
    ``path=None`` writes to standard output. With ``append=True`` the
    header is written only if the file does not exist yet.
    """
    options = dict(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    if path is None:
        frame.to_csv(sys.stdout, **options)
        return
    path = Path(path)
    header = not (append and path.exists())
    try:
        frame.to_csv(path, mode='a' if append else 'w', header=header, **options)
    except OSError as error:
        raise OutputError(error.strerror or str(error), path) from error


def _to_builtin(value):
    if isinstance(value, (list, tuple)):
        return [_to_builtin(item) for item in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def dumps_json(data: dict) -> str:
    return json.dumps(
        {key: _to_builtin(value) for key, value in data.items()},
        indent=2
    ) + '\n'


def write_json(data: dict, path: str | Path | None = None):
    text = dumps_json(data)
    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as error:
        raise OutputError(error.strerror or str(error), path) from error


def read_json(path: str | Path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as error:
        raise InputError(f"{path}: {error.strerror or error}") from error
    except json.JSONDecodeError as error:
        raise ParseError(f"invalid JSON in {path}: {error.msg}", error.lineno) from error
    if not isinstance(data, dict):
        raise ParseError(f"{path} must hold a JSON object", 1)
    return data


def sidecar_path(path: str | Path) -> Path:
    """``results.csv`` -> ``results.csv.json``."""
    path = Path(path)
    return path.with_name(path.name + '.json')
