"""Parameter sweeps and exceptional-point location.

Sweeps evaluate the whole grid through the batched kernels (one stacked
characteristic-polynomial call, one batched root solve); EP location bisects
the reality predicate of the full ``eigen`` analysis.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .adjrep import gamma_to_adjoint
from .errors import BracketInvalid, ConvergenceFailure, InvalidParam
from .models import ModelSpec, model_gamma
from .spectra import (
    classify,
    defect_info,
    eigen,
    eigenvalues_from_charpoly,
    min_pairwise_gap,
    refine_clustered,
)

AXES = ("b_real", "b_imag", "a")


@dataclass(frozen=True)
class SweepConfig:
    model: ModelSpec
    parameter: str
    lo: float
    hi: float
    steps: int

    def __post_init__(self):
        if self.parameter not in AXES:
            raise InvalidParam(f"parameter must be one of {AXES}, got {self.parameter!r}")
        if not self.lo < self.hi:
            raise InvalidParam(f"range needs lo < hi, got [{self.lo}, {self.hi}]")
        if self.steps < 2:
            raise InvalidParam("steps must be >= 2")

    def grid(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


@dataclass(frozen=True, eq=False)
class SweepRow:
    param: float
    eigenvalues: np.ndarray
    classification: str
    min_gap: float
    status: str = "ok"


def _evaluate_chunk(model: ModelSpec, parameter: str, values) -> list:
    specs, rows, mats, idx = [], [None] * len(values), [], []
    for i, v in enumerate(values):
        try:
            spec = model.with_param(parameter, float(v))
            mats.append(gamma_to_adjoint(model_gamma(spec)).matrixH)
            idx.append(i)
        except InvalidParam as exc:
            rows[i] = _failed_row(float(v), model.K, f"invalid: {exc}")
    if mats:
        coeffs = kernels.charpoly_batch(np.array(mats))
        try:
            lams = eigenvalues_from_charpoly(coeffs)
        except ConvergenceFailure:
            lams = None
        for k, i in enumerate(idx):
            try:
                row_lams = lams[k] if lams is not None else eigenvalues_from_charpoly(coeffs[k : k + 1])[0]
                row_lams = refine_clustered(mats[k], row_lams)
                if not np.all(np.isfinite(row_lams)):
                    raise ConvergenceFailure("non-finite eigenvalues")
                rows[i] = SweepRow(
                    float(values[i]), row_lams, str(classify(row_lams)), min_pairwise_gap(row_lams)
                )
            except ConvergenceFailure as exc:
                rows[i] = _failed_row(float(values[i]), model.K, f"ConvergenceFailure: {exc}")
    return rows


def _failed_row(param, K, status):
    return SweepRow(param, np.full(2 * K, np.nan + 0j), "", np.nan, status)


def run_sweep(config: SweepConfig, workers: int = 1) -> list:
    """One row per grid point, ordered by parameter value.

    With ``workers > 1`` the grid is split into contiguous chunks evaluated
    in separate processes; rows come back in grid order regardless.
    """
    grid = config.grid()
    if workers <= 1:
        return _evaluate_chunk(config.model, config.parameter, grid)
    chunks = np.array_split(grid, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_evaluate_chunk, [config.model] * len(chunks), [config.parameter] * len(chunks), chunks)
        return [row for part in parts for row in part]


def sweep_header(K: int) -> list:
    n = 2 * K
    return (
        ["param"]
        + [f"re_lambda_{j}" for j in range(1, n + 1)]
        + [f"im_lambda_{j}" for j in range(1, n + 1)]
        + ["classification", "min_gap", "status"]
    )


def _fmt(x: float) -> str:
    return format(float(x) + 0.0, ".17g")  # + 0.0 turns -0.0 into 0.0


def write_sweep_csv(rows, K: int, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(sweep_header(K))
    for row in rows:
        writer.writerow(
            [_fmt(row.param)]
            + [_fmt(v) for v in row.eigenvalues.real]
            + [_fmt(v) for v in row.eigenvalues.imag]
            + [row.classification, _fmt(row.min_gap), row.status]
        )


def read_sweep_csv(stream) -> list:
    reader = csv.reader(stream)
    header = next(reader)
    n = (len(header) - 4) // 2
    rows = []
    for rec in reader:
        vals = [float(v) for v in rec[1 : 1 + 2 * n]]
        lams = np.array(vals[:n]) + 1j * np.array(vals[n:])
        rows.append(SweepRow(float(rec[0]), lams, rec[1 + 2 * n], float(rec[2 + 2 * n]), rec[3 + 2 * n]))
    return rows


def sweep_json(rows) -> list:
    return [
        {
            "param": row.param,
            "eigenvalues": [[z.real, z.imag] for z in row.eigenvalues],
            "classification": row.classification,
            "min_gap": row.min_gap,
            "status": row.status,
        }
        for row in rows
    ]


def sweep_to_csv_string(rows, K: int) -> str:
    buf = io.StringIO()
    write_sweep_csv(rows, K, buf)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# exceptional points


@dataclass(frozen=True)
class EpFindConfig:
    model: ModelSpec
    parameter: str
    lo: float
    hi: float
    tolerance: float = 1e-8

    def __post_init__(self):
        if self.parameter not in AXES:
            raise InvalidParam(f"parameter must be one of {AXES}, got {self.parameter!r}")
        if not self.lo < self.hi:
            raise InvalidParam(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")
        if not self.tolerance > 0:
            raise InvalidParam("tolerance must be positive")


@dataclass(frozen=True, eq=False)
class EpResult:
    value: float
    bracket: tuple
    iterations: int
    colliding_pair: tuple
    algebraic: int
    geometric: int
    eigenvalues: np.ndarray = field(repr=False)


def _is_real_at(model: ModelSpec, parameter: str, value: float) -> bool:
    spec = model.with_param(parameter, value)
    return eigen(gamma_to_adjoint(model_gamma(spec))).is_real


def ep_find(config: EpFindConfig) -> EpResult:
    """Bisect the real/complex boundary inside the bracket."""
    model, axis = config.model, config.parameter
    lo, hi = config.lo, config.hi
    real_lo = _is_real_at(model, axis, lo)
    if real_lo == _is_real_at(model, axis, hi):
        raise BracketInvalid(
            f"both ends of [{lo}, {hi}] classify as {'real' if real_lo else 'complex'}"
        )
    iterations = 0
    while hi - lo > config.tolerance:
        mid = 0.5 * (lo + hi)
        if _is_real_at(model, axis, mid) == real_lo:
            lo = mid
        else:
            hi = mid
        iterations += 1
    mid = 0.5 * (lo + hi)
    spec = model.with_param(axis, mid)
    rep = gamma_to_adjoint(model_gamma(spec))
    spectrum = eigen(rep)
    lams = spectrum.eigenvalues
    diff = np.abs(lams[:, None] - lams[None, :])
    diff[np.diag_indices(len(lams))] = np.inf
    i, j = np.unravel_index(np.argmin(diff), diff.shape)
    i, j = sorted((int(i), int(j)))
    info = defect_info(rep, lams[i], spectrum=spectrum, tol=_collision_for_pair(lams, i, j, spectrum.scale))
    return EpResult(
        value=mid,
        bracket=(lo, hi),
        iterations=iterations,
        colliding_pair=(complex(lams[i]), complex(lams[j])),
        algebraic=info.algebraic,
        geometric=info.geometric,
        eigenvalues=lams,
    )


def _collision_for_pair(lams, i, j, scale) -> float:
    # widen the clustering radius just enough to take in the nearest partner
    gap = abs(lams[i] - lams[j])
    return max(1e-6, 1.5 * gap / scale)
