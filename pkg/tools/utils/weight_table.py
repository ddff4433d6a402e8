import re
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from models.errors import ConfigurationError


_SPLIT = re.compile(r"[,\s]+")


class WeightTable:
    """
    Tabulated weight w(x) on a finite interval, interpolated by a cubic spline.

    File grammar: one "x w" pair per line, separated by whitespace or a comma;
    '#' starts a comment; blank lines are ignored; x strictly increasing;
    w >= 0; at least 4 rows. The weight is 0 outside [x_first, x_last].
    """

    MIN_ROWS = 4

    def __init__(self, x: np.ndarray, w: np.ndarray, source: str = "<memory>"):
        x = np.asarray(x, dtype=float)
        w = np.asarray(w, dtype=float)
        if x.shape != w.shape or x.ndim != 1:
            raise ConfigurationError(f"{source}: x and w columns must have equal length")
        if x.size < self.MIN_ROWS:
            raise ConfigurationError(f"{source}: need at least {self.MIN_ROWS} rows, got {x.size}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(w))):
            raise ConfigurationError(f"{source}: non-finite value in table")
        if np.any(np.diff(x) <= 0):
            raise ConfigurationError(f"{source}: x values must be strictly increasing")
        if np.any(w < 0):
            raise ConfigurationError(f"{source}: weights must be >= 0")
        self.x = x
        self.w = w
        self.source = source
        self._spline = CubicSpline(x, w)

    @classmethod
    def from_file(cls, path: str | Path) -> "WeightTable":
        path = Path(path)
        if not path.exists():
            raise ConfigurationError(f"weight file not found: {path}")
        return cls.parse(path.read_text(), source=str(path))

    @classmethod
    def parse(cls, text: str, source: str = "<memory>") -> "WeightTable":
        rows = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = [f for f in _SPLIT.split(line) if f]
            if len(fields) != 2:
                raise ConfigurationError(f"{source}:{lineno}: expected 'x w', got {raw.strip()!r}")
            try:
                rows.append((float(fields[0]), float(fields[1])))
            except ValueError:
                raise ConfigurationError(f"{source}:{lineno}: not a number in {raw.strip()!r}") from None
        if not rows:
            raise ConfigurationError(f"{source}: no data rows")
        data = np.array(rows)
        return cls(data[:, 0], data[:, 1], source=source)

    @property
    def lo(self) -> float:
        return float(self.x[0])

    @property
    def hi(self) -> float:
        return float(self.x[-1])

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        inside = (x >= self.lo) & (x <= self.hi)
        values = np.where(inside, self._spline(np.clip(x, self.lo, self.hi)), 0.0)
        return np.maximum(values, 0.0)
