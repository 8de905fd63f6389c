"""Validation reports and table coercion shared by all structures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StructureError


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of an exhaustive law check.

    Truthy iff every law held.  On failure ``law`` names the first law that
    failed and ``witness`` is the lexicographically first violating tuple for
    that law.
    """

    ok: bool
    law: str | None = None
    witness: tuple[int, ...] | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def passed(cls) -> ValidationReport:
        return cls(True)

    @classmethod
    def failed(cls, law, witness, detail="") -> ValidationReport:
        return cls(False, law, tuple(int(w) for w in witness), detail)

    def describe(self) -> str:
        if self.ok:
            return "ok"
        text = f"law {self.law!r} fails at {self.witness}"
        return f"{text} ({self.detail})" if self.detail else text

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "law": self.law,
            "witness": list(self.witness) if self.witness is not None else None,
            "detail": self.detail,
        }


def first_mismatch(lhs, rhs):
    """Index of the first (C-order, i.e. lexicographic) position where arrays differ."""
    bad = np.asarray(lhs) != np.asarray(rhs)
    if not bad.any():
        return None
    flat = int(np.argmax(bad))
    return tuple(int(i) for i in np.unravel_index(flat, bad.shape))


def coerce_table(data, shape, bound, name="table") -> np.ndarray:
    """Turn nested lists into a read-only int array, checking shape and range.

    ``shape`` is the expected shape; ``bound`` the exclusive upper bound for
    entries.  Errors name the offending index path.
    """
    try:
        arr = np.array(data, dtype=np.int64)
    except (ValueError, TypeError) as exc:
        raise StructureError(f"{name}: ragged or non-integer table ({exc})") from None
    if arr.shape != tuple(shape):
        raise StructureError(f"{name}: expected shape {tuple(shape)}, got {arr.shape}")
    if arr.size:
        bad = (arr < 0) | (arr >= bound)
        if bad.any():
            idx = tuple(int(i) for i in np.argwhere(bad)[0])
            path = "".join(f"[{i}]" for i in idx)
            raise StructureError(
                f"{name}{path} = {int(arr[idx])} out of range 0..{bound - 1}"
            )
    arr.setflags(write=False)
    return arr
