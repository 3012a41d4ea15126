"""
Domain models for instanton-calculus.

A ``KnotRecord`` holds partial knowledge of one knot's invariants. Every
optional field uses ``None`` for "unknown"; nothing is defaulted to a
numeric value, so asserted and derived facts stay distinguishable.
"""

from __future__ import annotations

from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator


class Shape(str, Enum):
    """Zero-surgery profile of a knot with nu-sharp = 0."""

    W = "W"  # trivial bundle r0+2, meridional r0
    V = "V"  # trivial bundle r0, meridional r0+2


class Bundle(str, Enum):
    TRIVIAL = "trivial"
    MERIDIONAL = "meridional"


class FroyshovSign(str, Enum):
    """Known sign information for h(S^3_{+1}(K)) or h(S^3_{-1}(K))."""

    NEG = "neg"
    ZERO = "zero"
    POS = "pos"
    ZERO_OR_NEG = "zero_or_neg"
    ZERO_OR_POS = "zero_or_pos"
    UNKNOWN = "unknown"

    @property
    def candidates(self) -> frozenset[str]:
        return _SIGN_CANDIDATES[self]

    @classmethod
    def from_candidates(cls, values: frozenset[str] | set[str]) -> FroyshovSign:
        for sign, cands in _SIGN_CANDIDATES.items():
            if cands == frozenset(values):
                return sign
        raise ValueError(f"no sign label for candidate set {sorted(values)}")

    def negated(self) -> FroyshovSign:
        return FroyshovSign.from_candidates(
            frozenset({"neg": "pos", "pos": "neg", "zero": "zero"}[c] for c in self.candidates)
        )


_SIGN_CANDIDATES: dict[FroyshovSign, frozenset[str]] = {
    FroyshovSign.NEG: frozenset({"neg"}),
    FroyshovSign.ZERO: frozenset({"zero"}),
    FroyshovSign.POS: frozenset({"pos"}),
    FroyshovSign.ZERO_OR_NEG: frozenset({"zero", "neg"}),
    FroyshovSign.ZERO_OR_POS: frozenset({"zero", "pos"}),
    FroyshovSign.UNKNOWN: frozenset({"neg", "zero", "pos"}),
}

FLAG_NAMES: tuple[str, ...] = (
    "fibered",
    "strongly_quasipositive",
    "quasipositive",
    "slice",
    "rationally_slice",
    "alternating",
    "lspace_knot",
    "positive_sl_transverse",
)

# Flags that survive taking the mirror image.
MIRROR_INVARIANT_FLAGS: frozenset[str] = frozenset(
    {"fibered", "slice", "rationally_slice", "alternating"}
)


# ═══════════════════════════════════════════════════════════════════════════
# KNOT RECORDS
# ═══════════════════════════════════════════════════════════════════════════


class KnotFlags(BaseModel):
    """Tri-state attribute flags (None = unknown)."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    fibered: bool | None = None
    strongly_quasipositive: bool | None = None
    quasipositive: bool | None = None
    slice: bool | None = None
    rationally_slice: bool | None = None
    alternating: bool | None = None
    lspace_knot: bool | None = Field(
        default=None, description="Instanton L-space knot: r0 = nu = 2g - 1 > 0"
    )
    positive_sl_transverse: bool | None = Field(
        default=None, description="Has a transverse representative with sl >= 1"
    )


class KnotRecord(BaseModel):
    """Partial knowledge of one knot's invariants."""

    model_config = ConfigDict(extra="forbid", frozen=True, use_enum_values=False)

    name: str = Field(min_length=1)
    nu_sharp: int | None = Field(default=None, description="nu-sharp")
    r0: int | None = Field(default=None, ge=0, description="Minimal integer-surgery dimension")
    tau_sharp: int | None = Field(default=None, description="tau-sharp")
    genus: int | None = Field(default=None, ge=0, description="Seifert genus")
    slice_genus: int | None = Field(default=None, ge=0, description="Smooth slice genus")
    shape: Shape | None = None
    signature: int | None = None
    flags: KnotFlags = Field(default_factory=KnotFlags)
    mirror_flags: KnotFlags = Field(
        default_factory=KnotFlags,
        description="Chiral flags of the mirror image; mirror() swaps them into flags",
    )
    froyshov_plus1: FroyshovSign = FroyshovSign.UNKNOWN
    froyshov_minus1: FroyshovSign = FroyshovSign.UNKNOWN

    @field_validator("signature")
    @classmethod
    def signature_is_even(cls, v: int | None) -> int | None:
        if v is not None and v % 2:
            raise ValueError(f"knot signature must be even, got {v}")
        return v

    @field_validator("mirror_flags")
    @classmethod
    def only_chiral_mirror_flags(cls, v: KnotFlags) -> KnotFlags:
        shared = sorted(
            f for f in MIRROR_INVARIANT_FLAGS if getattr(v, f) is not None
        )
        if shared:
            raise ValueError(
                f"{', '.join(shared)} is the same for K and its mirror; set it in flags"
            )
        return v

    def flag(self, name: str) -> bool | None:
        return getattr(self.flags, name)

    def invariant_violations(self) -> list[tuple[str, str]]:
        """Structural invariants that any record must satisfy.

        Returns (rule id, message) pairs; empty when the record is sound.
        """
        out: list[tuple[str, str]] = []
        nu, r0 = self.nu_sharp, self.r0
        if nu is not None and nu != 0 and nu % 2 == 0:
            out.append(("R1", f"nu_sharp={nu} is neither zero nor odd"))
        if nu is not None and r0 is not None:
            if r0 < abs(nu):
                out.append(("R2", f"r0={r0} < |nu_sharp|={abs(nu)}"))
            if (r0 - nu) % 2:
                out.append(("R2", f"r0={r0} and nu_sharp={nu} have different parity"))
        if self.tau_sharp is not None and nu is not None and abs(2 * self.tau_sharp - nu) > 1:
            out.append(
                ("R6", f"|2*tau_sharp - nu_sharp| = {abs(2 * self.tau_sharp - nu)} > 1")
            )
        if (
            self.genus is not None
            and self.slice_genus is not None
            and self.slice_genus > self.genus
        ):
            out.append(("R2", f"slice_genus={self.slice_genus} > genus={self.genus}"))
        gs = self.slice_genus
        if gs is not None and gs > 0 and nu is not None and abs(nu) > 2 * gs - 1:
            out.append(("R13", f"|nu_sharp|={abs(nu)} > 2*slice_genus - 1 = {2 * gs - 1}"))
        if self.shape is not None and nu is not None and nu != 0:
            out.append(("R2", f"shape set on a knot with nu_sharp={nu}"))
        return out

    def to_json_dict(self) -> dict[str, Any]:
        """Canonical JSON form: unknown values omitted."""
        data = self.model_dump(mode="json", exclude_none=True)
        for key in ("flags", "mirror_flags"):
            flags = {k: v for k, v in data.pop(key, {}).items() if v is not None}
            if flags:
                data[key] = flags
        for key in ("froyshov_plus1", "froyshov_minus1"):
            if data.get(key) == FroyshovSign.UNKNOWN.value:
                data.pop(key)
        return data


# ═══════════════════════════════════════════════════════════════════════════
# INFERENCE RESULTS
# ═══════════════════════════════════════════════════════════════════════════


class Derivation(BaseModel):
    """One narrowing of a candidate set by a rule."""

    model_config = ConfigDict(frozen=True)

    field: str
    before: list[Any]
    after: list[Any]
    rule_id: str
    source_anchor: str


class Contradiction(BaseModel):
    """A rule emptied a candidate set."""

    model_config = ConfigDict(frozen=True)

    rule_id: str
    fields: dict[str, list[Any]] = Field(
        description="Conflicting fields and their candidates just before the clash"
    )
    message: str


class Classification(BaseModel):
    """Outcome of the small-r0 classification."""

    model_config = ConfigDict(frozen=True)

    nu_sharp: int
    r0: int
    knots: list[str] = Field(default_factory=list)
    constraints: list[str] = Field(default_factory=list)
    conjecture: str | None = None

    @property
    def summary(self) -> str:
        if self.knots:
            return " or ".join(self.knots)
        if self.constraints:
            return "; ".join(self.constraints)
        return "no classification"


# ═══════════════════════════════════════════════════════════════════════════
# DATABASE
# ═══════════════════════════════════════════════════════════════════════════


class Database(BaseModel):
    """Named knot records plus per-field provenance tags."""

    records: dict[str, KnotRecord] = Field(default_factory=dict)
    provenance: dict[str, dict[str, str]] = Field(
        default_factory=dict,
        description="record name -> field -> 'asserted' or 'derived:<rule id>'",
    )

    def get(self, name: str) -> KnotRecord:
        try:
            return self.records[name]
        except KeyError:
            known = ", ".join(sorted(self.records)) or "none"
            raise ValueError(f"unknown knot {name!r} (known: {known})") from None

    def add(self, record: KnotRecord, provenance: dict[str, str] | None = None) -> None:
        self.records[record.name] = record
        tags = {f: "asserted" for f in record_fields(record)}
        if provenance:
            tags.update(provenance)
        self.provenance[record.name] = tags


def record_fields(record: KnotRecord) -> list[str]:
    """Known fields of a record, flags flattened as ``flags.<name>``."""
    names: list[str] = []
    for key, value in record.to_json_dict().items():
        if key == "name":
            continue
        if key in ("flags", "mirror_flags"):
            names.extend(f"{key}.{flag}" for flag in value)
        else:
            names.append(key)
    return names
