"""File formats: JSON matrices and tables, CSV grids, PGM heatmaps.

Complex matrices are JSON arrays of rows whose entries are [re, im] pairs.
State files may instead hold a MUB-projector shorthand {"alpha": ..., "s":
[...]} or {"random": "density"|"pure"} (resolved with the run seed).
"""

from __future__ import annotations

import json
from typing import Optional, Sequence

import numpy as np

from .geometry import phase_geometry
from .mub import MubProjector, mub_projector
from .wigner import CharTable, WignerTable, random_density, random_pure_density


def matrix_to_json(M: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M, dtype=complex)]


def matrix_from_json(data) -> np.ndarray:
    arr = np.array(data, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ValueError("matrix JSON must be rows of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def save_matrix(path, M: np.ndarray) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_to_json(M), fh)


def load_matrix(path) -> np.ndarray:
    with open(path) as fh:
        return matrix_from_json(json.load(fh))


def resolve_state(
    data, p: int, n: int, rng: Optional[np.random.Generator] = None
) -> np.ndarray:
    """Turn parsed state-file JSON into a p^n x p^n complex matrix."""
    d = p**n
    if isinstance(data, dict):
        if "alpha" in data and "s" in data:
            alpha = data["alpha"]
            if alpha == "inf":
                alpha = d
            elif isinstance(alpha, list):
                alpha = sum(int(a) % p * p**k for k, a in enumerate(alpha))
            geom = phase_geometry(p, n)
            proj: MubProjector = mub_projector(geom, int(alpha), tuple(data["s"]))
            return proj.matrix
        if "random" in data:
            if rng is None:
                rng = np.random.default_rng(0)
            kind = data["random"]
            if kind == "density":
                return random_density(d, rng)
            if kind == "pure":
                return random_pure_density(d, rng)
            raise ValueError(f"unknown random state kind {kind!r}")
        raise ValueError("unrecognized state shorthand")
    M = matrix_from_json(data)
    if M.shape != (d, d):
        raise ValueError(f"state has shape {M.shape}, expected {(d, d)}")
    return M


def load_state(path, p: int, n: int, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    with open(path) as fh:
        return resolve_state(json.load(fh), p, n, rng)


# -- tables --------------------------------------------------------------------


def wigner_table_to_json(wt: WignerTable, tol: float = 1e-10) -> dict:
    """Hermitian inputs give real "w" entries; operator-valued tables fall
    back to [re, im] pairs."""
    kern = wt.kernel
    if np.abs(wt.values.imag).max() <= tol:
        entries = [float(v.real) for v in wt.values]
    else:
        entries = [[float(v.real), float(v.imag)] for v in wt.values]
    return {
        "p": wt.p,
        "n": wt.n,
        "convention": wt.convention,
        "values": [
            {"v": [int(c) for c in kern.vectors[i]], "w": entries[i]}
            for i in range(kern.N)
        ],
    }


def wigner_table_from_json(data: dict) -> WignerTable:
    p, n = int(data["p"]), int(data["n"])
    N = p ** (2 * n)
    values = np.zeros(N, dtype=complex)
    from .spins import index_code

    for rec in data["values"]:
        w = rec["w"]
        values[index_code(p, rec["v"])] = complex(w[0], w[1]) if isinstance(w, list) else w
    return WignerTable(p, n, data["convention"], values)


def char_table_to_json(ct: CharTable) -> dict:
    kern = ct.kernel
    return {
        "p": ct.p,
        "n": ct.n,
        "convention": ct.convention,
        "values": [
            {
                "w": [int(c) for c in kern.vectors[i]],
                "chi": [float(ct.values[i].real), float(ct.values[i].imag)],
            }
            for i in range(kern.N)
        ],
    }


def wigner_csv_lines(wt: WignerTable, tol: float = 1e-10) -> list[str]:
    """n=1: one p x p grid, rows v1 (top row v1=0), columns v0.
    n=2: one such grid per second-subsystem point, preceded by a comment."""
    p = wt.p
    vals = wt.real_values(tol)
    kern = wt.kernel
    lines = []

    def grid_value(v0, v1, tail=()):
        return vals[kern.code((v0, v1) + tail)]

    if wt.n == 1:
        for v1 in range(p):
            lines.append(",".join(f"{grid_value(v0, v1):.17g}" for v0 in range(p)))
        return lines
    if wt.n == 2:
        for x1 in range(p):
            for y1 in range(p):
                lines.append(f"# slice x1={x1} y1={y1}")
                for v1 in range(p):
                    lines.append(
                        ",".join(f"{grid_value(v0, v1, (x1, y1)):.17g}" for v0 in range(p))
                    )
        return lines
    raise ValueError("CSV export is defined for n = 1 and n = 2")


def wigner_pgm_lines(wt: WignerTable, tol: float = 1e-10) -> list[str]:
    """Greyscale P2 heatmap for n=1 tables; linear min-max scaling to 0..255."""
    if wt.n != 1:
        raise ValueError("PGM export is defined for n = 1")
    p = wt.p
    vals = wt.real_values(tol)
    lo, hi = float(vals.min()), float(vals.max())
    span = hi - lo
    kern = wt.kernel
    lines = [
        "P2",
        f"# Wigner heatmap, rows v1=0..{p - 1} top to bottom, cols v0=0..{p - 1}",
        f"# grey = round(255 * (W - min) / (max - min)); min={lo:.17g} max={hi:.17g}",
        f"{p} {p}",
        "255",
    ]
    for v1 in range(p):
        row = []
        for v0 in range(p):
            g = 0 if span == 0 else int(round(255 * (vals[kern.code((v0, v1))] - lo) / span))
            row.append(str(g))
        lines.append(" ".join(row))
    return lines


# -- MUB export ------------------------------------------------------------------


def mub_to_json(bases, p: int, n: int) -> dict:
    from .mub import commuting_class

    geom = phase_geometry(p, n)
    out_bases = []
    for alpha, basis in enumerate(bases):
        label = "inf" if alpha == geom.dim else list(geom.field.from_int(alpha).coeffs)
        cls = commuting_class(geom, alpha)
        compact = [
            {
                "b": list(b),
                "index": list(op.index),
                "eta_exp": op.eta_exp,
                "i_exp": op.i_exp,
            }
            for b, op in sorted(cls.members.items())
        ]
        out_bases.append(
            {
                "alpha": label,
                "generators": [list(g) for g in geom.generator_sets[alpha].gens],
                "projectors": [matrix_to_json(P.matrix) for P in basis],
                "outcomes": [list(P.s) for P in basis],
                "class_operators": compact,
            }
        )
    return {"p": p, "n": n, "field": geom.field.to_json(), "bases": out_bases}


def spin_coeffs_to_json(coeffs: dict) -> dict:
    """Spin coefficient table as a JSON map keyed by comma-joined indices."""
    return {
        ",".join(str(int(c)) for c in idx): [float(v.real), float(v.imag)]
        for idx, v in sorted(coeffs.items())
    }


def spin_coeffs_from_json(data: dict) -> dict:
    return {
        tuple(int(c) for c in key.split(",")): complex(v[0], v[1])
        for key, v in data.items()
    }


def trajectory_record(t: float, chi: CharTable, density: np.ndarray) -> dict:
    return {
        "t": float(t),
        "chi": [[float(z.real), float(z.imag)] for z in chi.values],
        "density": matrix_to_json(density),
    }
