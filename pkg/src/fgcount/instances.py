"""Canonical instance encodings and file round-trips.

JSON for the list/graph problems, DIMACS (with an ``x`` line extension for
XOR rows) for CNF.  Serialization is byte-deterministic for a given
instance so generated files can be compared verbatim.
"""

from __future__ import annotations

import json
from enum import Enum
from pathlib import Path
from typing import Union

from .reductions import NwtInstance, OvInstance, ThreeSumInstance
from .satcount import AugmentedFormula, CnfFormula, parse_dimacs, write_dimacs

__all__ = ["Problem", "ProblemInstance", "problem_kind", "dumps_instance", "loads_instance",
           "save_instance", "load_instance"]


class Problem(Enum):
    THREESUM = "3sum"
    OV = "ov"
    NWT = "nwt"
    CNF = "cnf"


ProblemInstance = Union[ThreeSumInstance, OvInstance, NwtInstance, CnfFormula]


def problem_kind(inst: ProblemInstance) -> Problem:
    if isinstance(inst, ThreeSumInstance):
        return Problem.THREESUM
    if isinstance(inst, OvInstance):
        return Problem.OV
    if isinstance(inst, NwtInstance):
        return Problem.NWT
    if isinstance(inst, (CnfFormula, AugmentedFormula)):
        return Problem.CNF
    raise TypeError(f"not a problem instance: {type(inst)!r}")


def dumps_instance(inst: ProblemInstance) -> str:
    kind = problem_kind(inst)
    if kind is Problem.THREESUM:
        payload = {
            "type": "3sum",
            "A": [int(x) for x in inst.a],
            "B": [int(x) for x in inst.b],
            "C": [int(x) for x in inst.c],
        }
        return json.dumps(payload) + "\n"
    if kind is Problem.OV:
        payload = {
            "type": "ov",
            "d": inst.d,
            "A": [[int(b) for b in row] for row in inst.a],
            "B": [[int(b) for b in row] for row in inst.b],
        }
        return json.dumps(payload) + "\n"
    if kind is Problem.NWT:
        payload = {
            "type": "nwt",
            "parts": {
                "A": [int(v) for v in inst.part_a],
                "B": [int(v) for v in inst.part_b],
                "C": [int(v) for v in inst.part_c],
            },
            "edges": [[u, v, w] for u, v, w in inst.edge_list()],
        }
        return json.dumps(payload) + "\n"
    return write_dimacs(inst)


def loads_instance(text: str) -> ProblemInstance:
    stripped = text.lstrip()
    if not stripped.startswith("{"):
        aug = parse_dimacs(text)
        # Plain CNFs round-trip as CnfFormula; augmented ones keep their rows.
        return aug.cnf if not aug.xors.rows else aug
    payload = json.loads(text)
    kind = payload.get("type")
    if kind == "3sum":
        return ThreeSumInstance(payload["A"], payload["B"], payload["C"])
    if kind == "ov":
        return OvInstance(payload["A"], payload["B"])
    if kind == "nwt":
        parts = payload["parts"]
        edges = [(int(u), int(v), int(w)) for u, v, w in payload["edges"]]
        return NwtInstance.from_edges(
            (parts["A"], parts["B"], parts["C"]), edges
        )
    raise ValueError(f"unknown instance type {kind!r}")


def save_instance(inst: ProblemInstance, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_instance(inst))


def load_instance(path: Union[str, Path]) -> ProblemInstance:
    return loads_instance(Path(path).read_text())
