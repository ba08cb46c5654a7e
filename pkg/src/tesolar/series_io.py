"""Canonical irradiance series type, CSV ingest/export and resampling."""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, TextIO

import numpy as np

from .errors import AlignmentError, ConfigError, InsufficientDataError, OrderingError, ParseError

HEADER = "timestamp_utc,ghi_wm2"
TIME_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


def to_utc(ts) -> datetime:
    """Coerce a datetime, ISO string or numpy datetime64 to an aware UTC datetime (second resolution)."""
    if isinstance(ts, str):
        text = ts.strip()
        if text.endswith("Z"):
            text = text[:-1] + "+00:00"
        try:
            ts = datetime.fromisoformat(text)
        except ValueError as exc:
            raise ConfigError(f"malformed timestamp {ts!r}") from exc
    elif isinstance(ts, np.datetime64):
        secs = int(ts.astype("datetime64[s]").astype(np.int64))
        ts = datetime.fromtimestamp(secs, tz=timezone.utc)
    if not isinstance(ts, datetime):
        raise ConfigError(f"not a timestamp: {ts!r}")
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc).replace(microsecond=0)


def format_timestamp(ts: datetime) -> str:
    return to_utc(ts).strftime(TIME_FORMAT)


def unix_seconds(ts: datetime) -> int:
    return int(to_utc(ts).timestamp())


@dataclass(frozen=True, eq=False)
class IrradianceSeries:
    """Uniformly sampled global horizontal irradiance (W/m²) with a validity mask.

    Invalid samples are stored as NaN; their value is never read.
    """

    start: datetime
    step: int
    values: np.ndarray
    valid: np.ndarray = field(default=None)

    def __post_init__(self):
        if int(self.step) != self.step or self.step <= 0:
            raise ConfigError(f"step must be a positive integer number of seconds, got {self.step}")
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise ConfigError("values must be one-dimensional")
        if self.valid is None:
            valid = np.isfinite(values)
        else:
            valid = np.array(self.valid, dtype=bool)
        if valid.shape != values.shape:
            raise ConfigError("values and valid must have the same length")
        if not np.all(np.isfinite(values[valid])):
            raise ConfigError("valid samples must be finite")
        if np.any(values[valid] < 0):
            raise ConfigError("valid irradiance values must be >= 0")
        values[~valid] = np.nan
        values.flags.writeable = False
        valid.flags.writeable = False
        object.__setattr__(self, "start", to_utc(self.start))
        object.__setattr__(self, "step", int(self.step))
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "valid", valid)

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, IrradianceSeries):
            return NotImplemented
        return (
            self.start == other.start
            and self.step == other.step
            and np.array_equal(self.valid, other.valid)
            and self.values[self.valid].tobytes() == other.values[other.valid].tobytes()
        )

    __hash__ = None

    @property
    def start_unix(self) -> int:
        return unix_seconds(self.start)

    def unix_times(self) -> np.ndarray:
        """Sample instants as integer seconds since the epoch."""
        return self.start_unix + self.step * np.arange(len(self), dtype=np.int64)

    def times(self) -> np.ndarray:
        return self.unix_times().astype("datetime64[s]")

    def slice(self, lo: int, hi: int) -> "IrradianceSeries":
        lo = max(0, lo)
        start = datetime.fromtimestamp(self.start_unix + lo * self.step, tz=timezone.utc)
        return IrradianceSeries(start, self.step, self.values[lo:hi], self.valid[lo:hi])


def _lines(text) -> Iterable[str]:
    if isinstance(text, str):
        return io.StringIO(text)
    return text


def parse_csv(text: str | TextIO) -> IrradianceSeries:
    """Parse ``timestamp_utc,ghi_wm2`` CSV into a gap-filled series at the native step.

    Empty or ``NaN`` values and missing grid slots become invalid samples.
    """
    lines = iter(_lines(text))
    header = next(lines, None)
    if header is None or header.strip().lstrip("﻿").replace(" ", "") != HEADER:
        raise ParseError(f"expected header {HEADER!r}", line=1)

    stamps: list[int] = []
    vals: list[float] = []
    for lineno, raw in enumerate(lines, start=2):
        row = raw.strip()
        if not row:
            continue
        parts = row.split(",")
        if len(parts) != 2:
            raise ParseError(f"expected 2 fields, got {len(parts)}", line=lineno)
        ts_text, val_text = parts[0].strip(), parts[1].strip()
        try:
            ts = datetime.strptime(ts_text, TIME_FORMAT).replace(tzinfo=timezone.utc)
        except ValueError:
            raise ParseError(f"malformed timestamp {ts_text!r}", line=lineno) from None
        if val_text == "" or val_text.lower() == "nan":
            value = np.nan
        else:
            try:
                value = float(val_text)
            except ValueError:
                raise ParseError(f"malformed irradiance {val_text!r}", line=lineno) from None
            if not np.isfinite(value):
                raise ParseError(f"non-finite irradiance {val_text!r}", line=lineno)
            if value < 0:
                raise ParseError(f"negative irradiance {value}", line=lineno)
        secs = int(ts.timestamp())
        if stamps and secs <= stamps[-1]:
            raise OrderingError(f"line {lineno}: timestamp {ts_text} not after previous row")
        stamps.append(secs)
        vals.append(value)

    if len(stamps) < 2:
        raise InsufficientDataError(f"need at least 2 rows, got {len(stamps)}")

    t = np.asarray(stamps, dtype=np.int64)
    offsets = t - t[0]
    step = int(np.diff(t).min())
    if np.any(offsets % step):
        raise AlignmentError(f"timestamps are not on a regular {step} s grid")
    idx = offsets // step
    values = np.full(idx[-1] + 1, np.nan)
    values[idx] = vals
    start = datetime.fromtimestamp(stamps[0], tz=timezone.utc)
    return IrradianceSeries(start, step, values, np.isfinite(values))


def write_csv(series: IrradianceSeries, stream: TextIO | None = None) -> str | None:
    """Write ``series`` as CSV; invalid samples get an empty value field.

    Returns the text when ``stream`` is None.
    """
    out = io.StringIO() if stream is None else stream
    out.write(HEADER + "\n")
    t0 = series.start_unix
    for i, (v, ok) in enumerate(zip(series.values.tolist(), series.valid.tolist())):
        ts = datetime.fromtimestamp(t0 + i * series.step, tz=timezone.utc).strftime(TIME_FORMAT)
        out.write(f"{ts},{repr(v) if ok else ''}\n")
    if stream is None:
        return out.getvalue()
    return None


def resample(series: IrradianceSeries, target_step: int) -> IrradianceSeries:
    """Window-mean downsampling to ``target_step`` seconds.

    Each output sample averages the valid inputs in [t, t + target_step) and is
    invalid only when the whole window is. A trailing partial window is kept.
    """
    if target_step < series.step:
        raise ConfigError(f"upsampling from {series.step} s to {target_step} s is not supported")
    if target_step % series.step:
        raise AlignmentError(f"target step {target_step} s is not a multiple of {series.step} s")
    r = target_step // series.step
    n = len(series)
    m = -(-n // r)
    vals = np.zeros(m * r)
    ok = np.zeros(m * r, dtype=bool)
    vals[:n] = np.where(series.valid, series.values, 0.0)
    ok[:n] = series.valid
    sums = vals.reshape(m, r).sum(axis=1)
    counts = ok.reshape(m, r).sum(axis=1)
    valid = counts > 0
    means = np.full(m, np.nan)
    means[valid] = sums[valid] / counts[valid]
    return IrradianceSeries(series.start, int(target_step), means, valid)
