"""Sweep orchestration, spectrum cache and result files."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .number_theory import (
    OrderSpectrum,
    SemiprimeRecord,
    order_spectrum,
    semiprime_record,
    semiprimes_for_n,
)
from .performance import performance_measure, performance_measure_averaged
from .qft_kernel import check_cap

SCHEMA = "bandqft/1"
CACHE_ENV = "BANDQFT_CACHE_DIR"
SWEEP_COLUMNS = ("n", "b", "N", "P_raw", "P", "K", "s0", "wall_time")
DETERMINISTIC_COLUMNS = SWEEP_COLUMNS[:-1]


def fmt(value) -> str:
    """17 significant digits for floats so files round-trip exactly."""
    if isinstance(value, float):
        return format(value, ".17g")
    return "" if value is None else str(value)


# ---------------------------------------------------------------------------
# spectrum cache
# ---------------------------------------------------------------------------


def cache_dir(path: str | os.PathLike | None = None) -> Path | None:
    if path is None:
        path = os.environ.get(CACHE_ENV)
    return Path(path) if path else None


def _spectrum_payload(rec: SemiprimeRecord, spectrum: OrderSpectrum) -> dict:
    return {
        "N": rec.N,
        "p": rec.p,
        "q": rec.q,
        "n": rec.n,
        "totient": spectrum.totient,
        "entries": [list(e) for e in spectrum.entries],
    }


def _digest(payload: dict) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


def save_spectrum(directory: Path, rec: SemiprimeRecord, spectrum: OrderSpectrum) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    payload = _spectrum_payload(rec, spectrum)
    path = directory / f"N{rec.N}.json"
    path.write_text(json.dumps({"schema": SCHEMA, **payload, "hash": _digest(payload)}, indent=1))
    return path


def load_spectrum(directory: Path, rec: SemiprimeRecord) -> OrderSpectrum | None:
    """Cached spectrum, or ``None`` when missing, stale or corrupt."""
    path = directory / f"N{rec.N}.json"
    try:
        data = json.loads(path.read_text())
        payload = {k: data[k] for k in ("N", "p", "q", "n", "totient", "entries")}
        if data.get("schema") != SCHEMA or data.get("hash") != _digest(payload):
            return None
        if (payload["N"], payload["p"], payload["q"], payload["n"]) != (rec.N, rec.p, rec.q, rec.n):
            return None
        return OrderSpectrum(rec.N, tuple((int(w), int(nu)) for w, nu in payload["entries"]), payload["totient"])
    except (OSError, ValueError, KeyError, TypeError):
        return None


def cached_spectrum(rec: SemiprimeRecord, directory: str | os.PathLike | None = None) -> OrderSpectrum:
    d = cache_dir(directory)
    if d is not None:
        hit = load_spectrum(d, rec)
        if hit is not None:
            return hit
    spectrum = order_spectrum(rec)
    if d is not None:
        save_spectrum(d, rec, spectrum)
    return spectrum


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepConfig:
    n_values: tuple[int, ...]
    b_values: tuple[int, ...]
    per_n: int = 5
    s0_samples: int | None = None
    threads: int = 1
    seed: int = 0
    cache: str | None = None
    unsafe_large: bool = False
    semiprimes: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.per_n < 1:
            raise ValueError("per_n must be >= 1")
        if not self.b_values:
            raise ValueError("at least one b is required")
        for n in self.n_values:
            check_cap(n, self.unsafe_large)
        for rec in self.records_from_list():
            check_cap(rec.n, self.unsafe_large)

    def records_from_list(self) -> list[SemiprimeRecord]:
        return [semiprime_record(N) for N in self.semiprimes or ()]

    def records(self) -> list[SemiprimeRecord]:
        """Explicit semiprimes if given, else the smallest ``per_n`` for each ``n``."""
        if self.semiprimes:
            return self.records_from_list()
        return [rec for n in self.n_values for rec in semiprimes_for_n(n, self.per_n)]

    def config_hash(self) -> str:
        # thread count and cache location do not change results
        keys = ("n_values", "b_values", "per_n", "s0_samples", "seed", "semiprimes")
        return hashlib.sha256(json.dumps({k: getattr(self, k) for k in keys}).encode()).hexdigest()[:16]


@dataclass
class SweepResult:
    config: SweepConfig
    rows: list[dict] = field(default_factory=list)


def _measure_unit(unit: tuple) -> tuple[dict, float]:
    n, omega, b_values, samples, seed = unit
    start = time.perf_counter()
    out = {}
    for b in b_values:
        if samples:
            pt = performance_measure_averaged(n, b, omega, samples, seed)
        else:
            pt = performance_measure(n, b, omega)
        out[b] = (pt.P_raw, pt.P)
    return out, time.perf_counter() - start


def run_sweep(config: SweepConfig) -> SweepResult:
    """Ensemble ``P_N(n, b)`` for the smallest ``per_n`` semiprimes of every ``n``.

    Work is split into ``(n, omega)`` units, since the measure depends on ``N``
    only through its orders. Every unit is computed independently and then
    combined in a fixed order, so the thread count never changes the numbers.
    """
    ensembles = [(rec, cached_spectrum(rec, config.cache)) for rec in config.records()]
    b_values = tuple(config.b_values)
    units = sorted({(rec.n, w) for rec, sp in ensembles for w in sp.orders})
    payload = [(n, w, tuple(b for b in b_values if b <= n - 1), config.s0_samples, config.seed) for n, w in units]
    if config.threads > 1:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(_measure_unit, payload))
    else:
        results = [_measure_unit(u) for u in payload]
    table = dict(zip(units, results))

    s0 = f"avg{config.s0_samples}" if config.s0_samples else 0
    out = SweepResult(config)
    for rec, sp in ensembles:
        for b in b_values:
            if b > rec.n - 1:
                continue
            cells = [table[(rec.n, w)][0][b] for w in sp.orders]
            wall = sum(table[(rec.n, w)][1] for w in sp.orders)
            out.rows.append(
                {
                    "n": rec.n,
                    "b": b,
                    "N": rec.N,
                    "P_raw": sp.weighted_mean([c[0] for c in cells]),
                    "P": sp.weighted_mean([c[1] for c in cells]),
                    "K": None,
                    "s0": s0,
                    "wall_time": wall,
                }
            )
    return out


# ---------------------------------------------------------------------------
# writers and readers
# ---------------------------------------------------------------------------


def write_csv(stream, rows: Sequence[dict], columns: Sequence[str], tag: str = "") -> None:
    stream.write(f"# schema: {SCHEMA}{' ' + tag if tag else ''}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row.get(c)) for c in columns])


def write_json(stream, rows: Sequence[dict], columns: Sequence[str], tag: str = "") -> None:
    json.dump({"schema": SCHEMA, "tag": tag, "rows": [{c: row.get(c) for c in columns} for row in rows]}, stream, indent=1)
    stream.write("\n")


def write_rows(path, rows: Sequence[dict], columns: Sequence[str], format: str = "csv", tag: str = "") -> str | None:
    """Write to ``path`` (``None`` or ``"-"`` for a string return)."""
    writer = write_csv if format == "csv" else write_json
    if path in (None, "-"):
        buf = io.StringIO()
        writer(buf, rows, columns, tag)
        return buf.getvalue()
    with open(path, "w", newline="") as fh:
        writer(fh, rows, columns, tag)
    return None


def read_rows(path) -> list[dict]:
    """Rows of a CSV or JSON result file, numeric fields parsed."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return json.loads(text)["rows"]
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    rows = []
    for rec in csv.DictReader(lines):
        rows.append({k: _parse(v) for k, v in rec.items()})
    return rows


def _parse(value: str):
    if value == "":
        return None
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            pass
    return value


def numeric_projection(rows: Iterable[dict], columns: Sequence[str] = DETERMINISTIC_COLUMNS) -> str:
    """Byte string of the deterministic columns, for reproducibility checks."""
    return "\n".join(",".join(fmt(r.get(c)) for c in columns) for r in rows)


def fit_rows(fits) -> list[dict]:
    return [asdict(f) | {"ratio_to_model": f.ratio_to_model} for f in fits]
