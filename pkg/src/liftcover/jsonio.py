"""JSON interchange for bodies, lattices, instances, and reports.

Rationals serialize as lowest-term strings "p/q" (integers as "p").
Emission is canonical: fixed key order, two-space indent, trailing
newline, so emit -> parse -> emit is byte-identical.
"""

from __future__ import annotations

import json
from typing import List, Optional, Sequence

from .bodies import SFreeBody
from .covering import CoveringReport, OracleReport
from .cuts import Cut, CutValidation, MixedIntegerInstance
from .gallery import GalleryEntry
from .lattices import Lattice, TruncatedAffineLattice
from .linalg import QMatrix, QVector
from .polyhedra import HPolyhedron
from .rationals import rat, rat_str
from .transforms import LimitInstance


class SchemaError(ValueError):
    """Malformed input document; the message carries the offending field."""


def _q(value) -> str:
    return rat_str(value)


def _vec(v) -> List[str]:
    return [_q(x) for x in v]


def _parse_q(value, where: str):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise SchemaError(f"{where}: expected a rational string, got {value!r}")
    try:
        return rat(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise SchemaError(f"{where}: bad rational {value!r} ({exc})")


def _parse_vec(value, where: str, dim: Optional[int] = None) -> QVector:
    if not isinstance(value, list):
        raise SchemaError(f"{where}: expected a list")
    if dim is not None and len(value) != dim:
        raise SchemaError(f"{where}: expected {dim} entries, got {len(value)}")
    return QVector([_parse_q(x, f"{where}[{i}]") for i, x in enumerate(value)])


def _expect(doc, key, where, typ=None):
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError(f"{where}: missing field {key!r}")
    val = doc[key]
    if typ is not None and not isinstance(val, typ):
        raise SchemaError(f"{where}.{key}: wrong type")
    return val


# -- bodies -----------------------------------------------------------------

def body_to_obj(body: SFreeBody) -> dict:
    return {"dim": body.dim, "normals": [_vec(a) for a in body.normals]}


def body_from_obj(doc: dict, where: str = "body") -> SFreeBody:
    dim = _expect(doc, "dim", where, int)
    normals = _expect(doc, "normals", where, list)
    vecs = [_parse_vec(a, f"{where}.normals[{i}]", dim)
            for i, a in enumerate(normals)]
    try:
        return SFreeBody(vecs)
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}")


# -- polyhedra / lattices ---------------------------------------------------

def hpoly_to_obj(p: HPolyhedron) -> dict:
    return {"A": [_vec(q) for q, _ in p.rows()],
            "b": [_q(d) for _, d in p.rows()]}


def hpoly_from_obj(doc: dict, dim: int, where: str = "hull") -> HPolyhedron:
    arows = _expect(doc, "A", where, list)
    brows = _expect(doc, "b", where, list)
    if len(arows) != len(brows):
        raise SchemaError(f"{where}: A and b have different row counts")
    rows = []
    for i, (qrow, dval) in enumerate(zip(arows, brows)):
        rows.append((_parse_vec(qrow, f"{where}.A[{i}]", dim),
                     _parse_q(dval, f"{where}.b[{i}]")))
    return HPolyhedron.from_rows(rows, dim)


def lattice_to_obj(s: TruncatedAffineLattice) -> dict:
    return {
        "dim": s.ambient,
        "basis": [_vec(c) for c in s.lattice.basis.columns()],
        "shift": _vec(s.shift),
        "hull": hpoly_to_obj(s.hull),
    }


def lattice_from_obj(doc: dict, where: str = "lattice") -> TruncatedAffineLattice:
    dim = _expect(doc, "dim", where, int)
    basis = _expect(doc, "basis", where, list)
    cols = [_parse_vec(c, f"{where}.basis[{i}]", dim)
            for i, c in enumerate(basis)]
    shift = _parse_vec(_expect(doc, "shift", where), f"{where}.shift", dim)
    hull = hpoly_from_obj(_expect(doc, "hull", where, dict), dim,
                          f"{where}.hull")
    try:
        return TruncatedAffineLattice(shift, Lattice(dim, cols), hull)
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}")


# -- instances and cuts -----------------------------------------------------

def instance_to_obj(inst: MixedIntegerInstance) -> dict:
    return {"R": [_vec(c) for c in inst.continuous_rays],
            "P": [_vec(c) for c in inst.integer_shifts]}


def instance_from_obj(doc: dict, where: str = "instance") -> MixedIntegerInstance:
    rcols = _expect(doc, "R", where, list)
    pcols = _expect(doc, "P", where, list)
    try:
        return MixedIntegerInstance(
            [_parse_vec(c, f"{where}.R[{i}]") for i, c in enumerate(rcols)],
            [_parse_vec(c, f"{where}.P[{i}]") for i, c in enumerate(pcols)])
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}")


def cut_to_obj(cut: Cut) -> dict:
    return {
        "psi_coeffs": [_q(c) for c in cut.psi_coeffs],
        "pi_coeffs": [_q(c) for c in cut.pi_coeffs],
        "lifting_witnesses": [_vec(w) for w in cut.lifting_witnesses],
        "certified_minimal": cut.certified,
    }


def cut_validation_to_obj(val: CutValidation) -> dict:
    out = {
        "status": val.status,
        "cells_checked": val.cells_checked,
        "feasible_cells": val.feasible_cells,
    }
    if val.violation is not None:
        out["violation"] = {"s": _vec(val.violation[0]),
                            "y": _vec(val.violation[1])}
    return out


# -- covering reports -------------------------------------------------------

def covering_report_to_obj(rep: CoveringReport) -> dict:
    out = {"verdict": rep.verdict}
    if rep.witness is not None:
        out["witness"] = _vec(rep.witness)
    if rep.certificate is not None:
        out["certificate"] = [{"anchor": _vec(a), "w": _vec(w)}
                              for a, w in rep.certificate]
    if rep.reduction is not None:
        out["reduction"] = {
            "dropped_subspace": [_vec(v) for v in rep.reduction.dropped.basis],
            "coordinate_basis": [_vec(c) for c in
                                 rep.reduction.coord_basis.columns()],
        }
    out["spindle_count"] = rep.spindle_count
    out["translate_count"] = rep.translate_count
    if rep.notes:
        out["notes"] = list(rep.notes)
    return out


def oracle_report_to_obj(rep: OracleReport) -> dict:
    out = {"covered_at_resolution": rep.covered_at_resolution,
           "resolution": rep.resolution}
    if rep.sample is not None:
        out["uncovered_sample"] = _vec(rep.sample)
    return out


def gallery_entry_to_obj(entry: GalleryEntry) -> dict:
    return {
        "name": entry.name,
        "body": body_to_obj(entry.body),
        "lattice": lattice_to_obj(entry.s),
        "expected_covering": entry.expected_covering,
        "provenance": entry.provenance,
    }


def limit_instance_to_obj(inst: LimitInstance) -> dict:
    return {
        "lattice": lattice_to_obj(inst.s),
        "samples": [body_to_obj(b) for b in inst.samples],
        "limit": body_to_obj(inst.limit),
    }


def limit_instance_from_obj(doc: dict, where: str = "limit-instance") -> LimitInstance:
    s = lattice_from_obj(_expect(doc, "lattice", where, dict), f"{where}.lattice")
    samples = _expect(doc, "samples", where, list)
    bodies = [body_from_obj(b, f"{where}.samples[{i}]")
              for i, b in enumerate(samples)]
    limit = body_from_obj(_expect(doc, "limit", where, dict), f"{where}.limit")
    try:
        return LimitInstance(s, tuple(bodies), limit)
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}")


# -- canonical emission -----------------------------------------------------

def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise SchemaError("top level must be a JSON object")
    return doc
