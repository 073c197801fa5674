"""Artifact I/O: field files, functional reports, JSONL records, CSV curves.

A field is stored as a JSON header (grid metadata) plus a data file,
either flat binary (complex128, C order, row = x1 index) or CSV with
columns i, k, re, im.  Floats are written with repr precision so every
file round-trips through the loader bit-exactly.
"""

import dataclasses
import json
import time
from pathlib import Path

import numpy as np

from .errors import ParameterError
from .functionals import FunctionalReport
from .grid import Field, Grid


def _jsonable(x):
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    return x


def dumps(obj):
    return json.dumps(_jsonable(obj), sort_keys=True)


def grid_meta(grid):
    return {"dim_N": grid.dim_N, "L1": grid.L1, "L2": grid.L2,
            "n1": grid.n1, "n2": grid.n2}


def grid_from_meta(meta):
    return Grid(int(meta["dim_N"]), float(meta["L1"]), float(meta["L2"]),
                int(meta["n1"]), int(meta["n2"]))


def save_field(field, base, fmt="bin"):
    """Write <base>.json plus <base>.bin or <base>.csv; returns header path."""
    base = Path(base)
    base.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "bin":
        data_name = base.name + ".bin"
        field.values.tofile(base.parent / data_name)
    elif fmt == "csv":
        data_name = base.name + ".csv"
        ii, kk = np.meshgrid(np.arange(field.grid.n1), np.arange(field.grid.n2),
                             indexing="ij")
        rows = np.column_stack([ii.ravel(), kk.ravel(),
                                field.values.real.ravel(),
                                field.values.imag.ravel()])
        with open(base.parent / data_name, "w") as fh:
            fh.write("i,k,re,im\n")
            for i, k, re, im in rows:
                fh.write(f"{int(i)},{int(k)},{re!r},{im!r}\n")
    else:
        raise ParameterError(f"unknown field format {fmt!r}")
    header = dict(grid_meta(field.grid))
    header.update({"boundary_phase": field.boundary_phase, "format": fmt,
                   "data_file": data_name, "dtype": "complex128", "order": "C"})
    hpath = base.parent / (base.name + ".json")
    hpath.write_text(dumps(header) + "\n")
    return hpath


def load_field(header_path):
    header_path = Path(header_path)
    header = json.loads(header_path.read_text())
    grid = grid_from_meta(header)
    data_path = header_path.parent / header["data_file"]
    if header["format"] == "bin":
        vals = np.fromfile(data_path, dtype=np.complex128)
        vals = vals.reshape(grid.n1, grid.n2)
    else:
        raw = np.genfromtxt(data_path, delimiter=",", skip_header=1)
        vals = np.zeros((grid.n1, grid.n2), dtype=np.complex128)
        ii = raw[:, 0].astype(int)
        kk = raw[:, 1].astype(int)
        vals[ii, kk] = raw[:, 2] + 1j * raw[:, 3]
    return Field(grid, vals, header["boundary_phase"])


# ---------------------------------------------------------------------------
# records
# ---------------------------------------------------------------------------

def record_key(family, constraint_value, nu, grid, nl):
    """Deterministic resume key of one solve."""
    nu_part = "emergent" if nu is None else repr(float(nu))
    return "|".join([
        family, repr(float(constraint_value)), nu_part,
        f"N{grid.dim_N}", f"L{grid.L1!r}x{grid.L2!r}", f"n{grid.n1}x{grid.n2}",
        nl.name, ",".join(repr(float(p)) for p in nl.params)])


def record_to_dict(record, key=None, field_file=None, timestamp=True):
    d = {
        "kind": "soliton_record",
        "family": record.family,
        "nu": record.nu,
        "lambda0": record.lambda0,
        "multiplier": record.multiplier,
        "residual_pde": record.residual_pde,
        "residual_poh": record.residual_poh,
        "iterations": record.iterations,
        "constraint_value": record.constraint_value,
        "grad_norm": record.grad_norm,
        "flags": list(record.flags),
        "report": record.report.to_dict(),
        "grid": grid_meta(record.field.grid) if record.field is not None else None,
        "boundary_phase": (record.field.boundary_phase
                           if record.field is not None else 0.0),
        "field_file": field_file,
        "key": key,
    }
    if timestamp:
        d["timestamp"] = time.time()
    return d


def record_from_dict(d, base_dir=None):
    """Rebuild a record; the field is loaded when its file is present."""
    from .minimizer import SolitonRecord
    fld = None
    if d.get("field_file") and base_dir is not None:
        path = Path(base_dir) / d["field_file"]
        if path.exists():
            fld = load_field(path)
    return SolitonRecord(
        field=fld, nu=d["nu"], family=d["family"], lambda0=d["lambda0"],
        multiplier=d["multiplier"],
        report=FunctionalReport.from_dict(d["report"]),
        residual_pde=d["residual_pde"], residual_poh=d["residual_poh"],
        iterations=d["iterations"], constraint_value=d["constraint_value"],
        grad_norm=d["grad_norm"], flags=tuple(d.get("flags", ())))


def append_jsonl(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a") as fh:
        fh.write(dumps(obj) + "\n")


def read_jsonl(path):
    path = Path(path)
    if not path.exists():
        return []
    out = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if line:
            out.append(json.loads(line))
    return out


CURVE_COLUMNS = ("axis", "e", "p", "t", "j", "s", "poh", "nu", "lambda0",
                 "residual_pde", "residual_poh")


def write_curve_csv(path, axis_values, records):
    """Plot-ready CSV, one row per record."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(",".join(CURVE_COLUMNS) + "\n")
        for ax, rec in zip(axis_values, records):
            rep = rec.report
            row = (ax, rep.e, rep.p, rep.t, rep.j, rep.s, rep.poh, rec.nu,
                   rec.lambda0, rec.residual_pde, rec.residual_poh)
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    return path
