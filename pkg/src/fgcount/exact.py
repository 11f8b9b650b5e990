"""Ground-truth witness counting by full enumeration.

These are the reference oracles the statistical tests compare against.
Caps bound the enumeration cost (the 3SUM/NWT caps are expressed as the
work of a cubic scan at 400 elements; OV and CNF cap the obvious dimension)
and raise ``CapExceeded`` rather than silently grinding.
"""

from __future__ import annotations

from .instances import Problem, ProblemInstance, problem_kind
from .reductions import (
    NwtInstance,
    OvInstance,
    ThreeSumInstance,
    count_3sum_exact,
    count_nwt_exact,
    count_ov_exact,
)
from .satcount import AugmentedFormula, CapExceeded, CnfFormula, augment, brute_force_count

__all__ = ["CapExceeded", "exact_count", "CUBIC_WORK_CAP", "OV_SIZE_CAP", "CNF_VAR_CAP"]

CUBIC_WORK_CAP = 400**3  # enumeration work equivalent to a cubic scan at n=400
OV_SIZE_CAP = 8192
CNF_VAR_CAP = 24


def exact_count(inst: ProblemInstance) -> int:
    """Exact witness count by full enumeration (within per-problem caps)."""
    kind = problem_kind(inst)
    if kind is Problem.THREESUM:
        assert isinstance(inst, ThreeSumInstance)
        if inst.n**3 > CUBIC_WORK_CAP:
            raise CapExceeded(f"3SUM instance of size {inst.n} exceeds the cubic cap")
        return count_3sum_exact(inst)
    if kind is Problem.OV:
        assert isinstance(inst, OvInstance)
        if inst.n > OV_SIZE_CAP:
            raise CapExceeded(f"OV instance of size {inst.n} exceeds the cap {OV_SIZE_CAP}")
        return count_ov_exact(inst)
    if kind is Problem.NWT:
        assert isinstance(inst, NwtInstance)
        work = int(inst.part_a.size) * int(inst.part_b.size) * int(inst.part_c.size)
        if work > CUBIC_WORK_CAP:
            raise CapExceeded(f"NWT triangle scan of {work} steps exceeds the cubic cap")
        return count_nwt_exact(inst)
    if isinstance(inst, CnfFormula):
        inst = augment(inst)
    assert isinstance(inst, AugmentedFormula)
    return brute_force_count(inst, cap=CNF_VAR_CAP)
