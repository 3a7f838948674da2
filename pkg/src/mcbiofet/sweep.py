"""One-dimensional parameter sweeps of the closed-form capacity, written as CSV."""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .capacity import capacity_closed_form
from .link import LinkModel
from .params import SystemParams, validate

# sweep variable -> (parameter key or None, unit of the emitted column)
VARIABLES = {
    "Ntx_max": ("channel.Ntx_max", "1"),
    "Ntx_min": ("channel.Ntx_min", "1"),
    "d": ("channel.d", "m"),
    "c_ion": ("transducer.c_ion", "mol/m3"),
    "N_ot": ("noise.N_ot", "1/(J*m3)"),
    "f_H": ("noise.f_H", "Hz"),
    "N_r-scale": (None, "1"),
}

COLUMNS = ["C (bits)", "L (1)", "sigma2_F (A^2)", "P_b_min (1)", "P_b_max (1)",
           "reason", "param_hash"]


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    values: tuple

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise ValueError(f"unknown sweep variable {self.variable!r}; "
                             f"choose from {sorted(VARIABLES)}")
        v = np.asarray(self.values, float)
        if v.size == 0:
            raise ValueError("sweep needs at least one value")
        if v.size > 1:
            dv = np.diff(v)
            if not (np.all(dv > 0) or np.all(dv < 0)):
                raise ValueError("sweep values must be strictly monotone")
        object.__setattr__(self, "values", tuple(float(x) for x in v))

    @classmethod
    def from_range(cls, variable, start, stop, num, spacing="log"):
        if spacing == "log":
            vals = np.geomspace(start, stop, int(num))
        elif spacing == "linear":
            vals = np.linspace(start, stop, int(num))
        else:
            raise ValueError("spacing must be 'log' or 'linear'")
        return cls(variable, tuple(vals))

    def apply(self, base: SystemParams, value: float) -> SystemParams:
        key, _ = VARIABLES[self.variable]
        if key is None:
            return base.with_values(**{"receptor.rho_SR": base.receptor.rho_SR * value})
        return base.with_values(**{key: value})


def evaluate_point(params: SystemParams) -> dict:
    row = dict.fromkeys(COLUMNS[:-2], math.nan)
    row["reason"] = ""
    row["param_hash"] = params.digest()
    bad = validate(params)
    if bad:
        row["reason"] = "invalid: " + "; ".join(bad)
        return row
    try:
        link = LinkModel(params, validate=False)
        res = capacity_closed_form(link)
    except (ArithmeticError, ValueError) as exc:
        row["reason"] = f"{type(exc).__name__}: {exc}"
        return row
    row.update({"C (bits)": res.C_bits, "L (1)": res.L, "sigma2_F (A^2)": link.sigma2_F,
                "P_b_min (1)": float(link.bound_probability(link.x_min)),
                "P_b_max (1)": float(link.bound_probability(link.x_max))})
    return row


def run_sweep(spec: SweepSpec, base: SystemParams, workers: int = 1) -> list[dict]:
    """Evaluate every sweep point; rows come back in ``spec.values`` order."""
    points = [spec.apply(base, v) for v in spec.values]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(evaluate_point, points))
    else:
        rows = [evaluate_point(p) for p in points]
    for value, row in zip(spec.values, rows):
        row[spec.variable] = value
    return rows


def _fmt(v) -> str:
    if isinstance(v, float):
        return "nan" if math.isnan(v) else repr(v)
    return str(v)


def write_csv(header: list[str], rows, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])


def sweep_csv(spec: SweepSpec, rows: list[dict]) -> str:
    unit = VARIABLES[spec.variable][1]
    header = [f"{spec.variable} ({unit})"] + COLUMNS
    buf = io.StringIO()
    write_csv(header, ([r[spec.variable]] + [r[c] for c in COLUMNS] for r in rows), buf)
    return buf.getvalue()
