"""
Forward-chaining inference over partial knot records.

Every field of a ``KnotRecord`` is turned into a finite candidate set.
Rules propose restrictions, the engine intersects them into the state and
logs a ``Derivation`` for each narrowing, until nothing changes. Rules are
monotone (smaller inputs never yield larger proposals), so the fixpoint does
not depend on the order in which rules fire.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from typing import Any

from pydantic import BaseModel, Field

from instanton_calculus.data.rule_anchors import get_anchor
from instanton_calculus.domain.models import (
    FLAG_NAMES,
    MIRROR_INVARIANT_FLAGS,
    Contradiction,
    Derivation,
    FroyshovSign,
    KnotFlags,
    KnotRecord,
    Shape,
)
from instanton_calculus.services.surgery_service import (
    GENUS_ONE_ALEXANDER,
    classify_small,
)

logger = logging.getLogger(__name__)

DEFAULT_NU_BOUND = 99

INT_FIELDS = ("nu_sharp", "r0", "tau_sharp", "genus", "slice_genus", "signature")
SIGNED_FIELDS = ("nu_sharp", "tau_sharp", "signature")
BOOLS: frozenset[Any] = frozenset({True, False})
SIGNS: frozenset[Any] = frozenset({"neg", "zero", "pos"})
SHAPES: frozenset[Any] = frozenset({Shape.W.value, Shape.V.value})

Proposal = dict[str, frozenset[Any]]


class CandidateState:
    """Mutable map from field name to its current candidate set."""

    def __init__(self, sets: dict[str, frozenset[Any]]) -> None:
        self.sets = dict(sets)

    def __getitem__(self, name: str) -> frozenset[Any]:
        return self.sets[name]

    def single(self, name: str) -> Any | None:
        values = self.sets[name]
        return next(iter(values)) if len(values) == 1 else None

    def flag_is(self, flag: str, value: bool) -> bool:
        return self.sets[f"flags.{flag}"] == frozenset({value})

    def every(self, name: str, predicate: Callable[[Any], bool]) -> bool:
        return all(predicate(v) for v in self.sets[name])

    def snapshot(self) -> dict[str, frozenset[Any]]:
        return dict(self.sets)


@dataclass(frozen=True)
class Rule:
    rule_id: str
    propose: Callable[[CandidateState], Proposal]


class Statement(BaseModel):
    """A derived fact with no field encoding."""

    rule_id: str
    text: str
    source_anchor: str


class InferenceResult(BaseModel):
    record: KnotRecord
    derivations: list[Derivation] = Field(default_factory=list)
    contradictions: list[Contradiction] = Field(default_factory=list)
    statements: list[Statement] = Field(default_factory=list)
    candidates: dict[str, list[Any]] = Field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return not self.contradictions


def _sorted(values: Iterable[Any]) -> list[Any]:
    return sorted(values)


def _add(out: Proposal, name: str, allowed: Iterable[Any]) -> None:
    """Merge a restriction into a proposal (intersection)."""
    allowed = frozenset(allowed)
    out[name] = out[name] & allowed if name in out else allowed


# ── Initial state ────────────────────────────────────────────────────────


def initial_state(rec: KnotRecord, bound: int = DEFAULT_NU_BOUND) -> CandidateState:
    """Candidate sets for ``rec``; unknown integers range over bounded domains."""
    if bound < 1:
        raise ValueError(f"nu bound must be positive, got {bound}")
    asserted = [
        abs(v)
        for v in (rec.nu_sharp, rec.r0, rec.tau_sharp, rec.genus, rec.slice_genus)
        if v is not None
    ]
    if rec.signature is not None:
        asserted.append(abs(rec.signature) // 2)
    b = max([bound, *asserted])
    domains: dict[str, range] = {
        "nu_sharp": range(-b, b + 1),
        "r0": range(0, 2 * b + 2),
        "tau_sharp": range(-b, b + 1),
        "genus": range(0, b + 1),
        "slice_genus": range(0, b + 1),
        "signature": range(-2 * b, 2 * b + 1, 2),
    }
    sets: dict[str, frozenset[Any]] = {}
    for name, domain in domains.items():
        value = getattr(rec, name)
        sets[name] = frozenset({value}) if value is not None else frozenset(domain)
    sets["shape"] = frozenset({rec.shape.value}) if rec.shape is not None else SHAPES
    for flag in FLAG_NAMES:
        value = getattr(rec.flags, flag)
        sets[f"flags.{flag}"] = frozenset({value}) if value is not None else BOOLS
    sets["froyshov_plus1"] = rec.froyshov_plus1.candidates
    sets["froyshov_minus1"] = rec.froyshov_minus1.candidates
    return CandidateState(sets)


# ═══════════════════════════════════════════════════════════════════════════
# RULES
# ═══════════════════════════════════════════════════════════════════════════


def _parity(st: CandidateState) -> Proposal:
    return {"nu_sharp": frozenset(n for n in st["nu_sharp"] if n == 0 or n % 2)}


def _bounds(st: CandidateState) -> Proposal:
    out: Proposal = {}
    nu, r0 = st["nu_sharp"], st["r0"]
    max_r = {par: max((r for r in r0 if r % 2 == par), default=-1) for par in (0, 1)}
    _add(out, "nu_sharp", (n for n in nu if max_r[n % 2] >= abs(n)))
    min_nu = {
        par: min((abs(n) for n in nu if n % 2 == par), default=None) for par in (0, 1)
    }
    _add(
        out,
        "r0",
        (r for r in r0 if min_nu[r % 2] is not None and min_nu[r % 2] <= r),  # type: ignore[operator]
    )

    g_max, s_min = max(st["genus"]), min(st["slice_genus"])
    _add(out, "slice_genus", (s for s in st["slice_genus"] if s <= g_max))
    _add(out, "genus", (g for g in st["genus"] if g >= s_min))

    if len(st["shape"]) == 1:
        _add(out, "nu_sharp", {0})

    if st.flag_is("slice", True):
        _add(out, "slice_genus", {0})
    if st.flag_is("slice", False):
        _add(out, "slice_genus", st["slice_genus"] - {0})
    if st["slice_genus"] == frozenset({0}):
        _add(out, "flags.slice", {True})
    elif 0 not in st["slice_genus"]:
        _add(out, "flags.slice", {False})
    return out


def _small_r0(st: CandidateState) -> Proposal:
    out: Proposal = {}
    r0 = st["r0"]
    if r0 == frozenset({0}):
        for name in ("nu_sharp", "genus", "slice_genus", "tau_sharp"):
            _add(out, name, {0})
        _add(out, "shape", {Shape.W.value})
        _add(out, "flags.slice", {True})
    if st["genus"] == frozenset({0}):
        _add(out, "r0", {0})
    if 0 not in st["genus"]:
        _add(out, "r0", r0 - {0})
    if 0 not in r0:
        _add(out, "genus", st["genus"] - {0})
        if max(r0) <= 2:
            _add(out, "genus", {1})
            _add(out, "slice_genus", {1})
            _add(out, "flags.fibered", {True})
    if r0 == frozenset({2}):
        _add(out, "shape", {Shape.W.value})
    return out


def _lspace(st: CandidateState) -> Proposal:
    out: Proposal = {}
    common = frozenset(n for n in st["nu_sharp"] & st["r0"] if n > 0)
    if st.flag_is("lspace_knot", True):
        genus = st["genus"]
        matched = frozenset(n for n in common if (n + 1) // 2 in genus)
        _add(out, "nu_sharp", matched)
        _add(out, "r0", matched)
        _add(out, "genus", (g for g in genus if 2 * g - 1 in common))
        _add(out, "flags.fibered", {True})
        _add(out, "flags.strongly_quasipositive", {True})
    if not common:
        _add(out, "flags.lspace_knot", {False})
    nu, r0 = st.single("nu_sharp"), st.single("r0")
    if nu is not None and nu == r0 and nu > 0:
        _add(out, "flags.lspace_knot", {True})
    return out


def _sign_lift(st: CandidateState) -> Proposal:
    out: Proposal = {}
    if st.every("tau_sharp", lambda t: t > 0):
        _add(out, "nu_sharp", (n for n in st["nu_sharp"] if n > 0))
    if st.every("tau_sharp", lambda t: t < 0):
        _add(out, "nu_sharp", (n for n in st["nu_sharp"] if n < 0))
    if st.every("nu_sharp", lambda n: n <= 0):
        _add(out, "tau_sharp", (t for t in st["tau_sharp"] if t <= 0))
    if st.every("nu_sharp", lambda n: n >= 0):
        _add(out, "tau_sharp", (t for t in st["tau_sharp"] if t >= 0))
    return out


def _epsilon_bound(st: CandidateState) -> Proposal:
    nu, tau = st["nu_sharp"], st["tau_sharp"]
    return {
        "tau_sharp": frozenset(
            t for t in tau if {2 * t - 1, 2 * t, 2 * t + 1} & nu
        ),
        "nu_sharp": frozenset(
            n for n in nu if any(2 * t - n in (-1, 0, 1) for t in ((n - 1) // 2, n // 2, (n + 1) // 2) if t in tau)
        ),
    }


def _froyshov(st: CandidateState) -> Proposal:
    out: Proposal = {}
    _add(out, "froyshov_plus1", {"neg", "zero"})
    _add(out, "froyshov_minus1", {"zero", "pos"})
    if st.every("nu_sharp", lambda n: n > 0):
        _add(out, "froyshov_plus1", {"neg"})
    if st.every("nu_sharp", lambda n: n < 0):
        _add(out, "froyshov_minus1", {"pos"})
    if "neg" not in st["froyshov_plus1"]:
        _add(out, "nu_sharp", (n for n in st["nu_sharp"] if n <= 0))
    if "pos" not in st["froyshov_minus1"]:
        _add(out, "nu_sharp", (n for n in st["nu_sharp"] if n >= 0))
    return out


def _v_shape(st: CandidateState) -> Proposal:
    out: Proposal = {}
    if st["shape"] == frozenset({Shape.V.value}):
        _add(out, "froyshov_plus1", {"neg"})
        _add(out, "froyshov_minus1", {"pos"})
    if st["nu_sharp"] == frozenset({0}) and (
        "neg" not in st["froyshov_plus1"] or "pos" not in st["froyshov_minus1"]
    ):
        _add(out, "shape", {Shape.W.value})
    return out


def _rationally_slice(st: CandidateState) -> Proposal:
    out: Proposal = {}
    if st.flag_is("rationally_slice", True):
        _add(out, "nu_sharp", {0})
        _add(out, "tau_sharp", {0})
        _add(out, "shape", {Shape.W.value})
    if st.flag_is("slice", True):
        _add(out, "flags.rationally_slice", {True})
    if (
        0 not in st["nu_sharp"]
        or 0 not in st["tau_sharp"]
        or st["shape"] == frozenset({Shape.V.value})
    ):
        _add(out, "flags.rationally_slice", {False})
    if st.flag_is("rationally_slice", False):
        _add(out, "flags.slice", {False})
    return out


def _attributes(st: CandidateState) -> Proposal:
    out: Proposal = {}
    if st.flag_is("positive_sl_transverse", True):
        _add(out, "nu_sharp", (n for n in st["nu_sharp"] if n >= 1))
    if st.every("nu_sharp", lambda n: n <= 0):
        _add(out, "flags.positive_sl_transverse", {False})
    if st.flag_is("strongly_quasipositive", True):
        _add(out, "flags.quasipositive", {True})
    if st.flag_is("quasipositive", False):
        _add(out, "flags.strongly_quasipositive", {False})

    positive_common = frozenset(t for t in st["tau_sharp"] & st["slice_genus"] if t > 0)
    if st.flag_is("quasipositive", True) and st.flag_is("slice", False):
        _add(out, "tau_sharp", positive_common)
        _add(out, "slice_genus", positive_common)
    if st.flag_is("slice", False) and not positive_common:
        _add(out, "flags.quasipositive", {False})

    if st.flag_is("alternating", True):
        sig, tau = st["signature"], st["tau_sharp"]
        _add(out, "tau_sharp", (t for t in tau if -2 * t in sig))
        _add(out, "signature", (s for s in sig if -s // 2 in tau))
    return out


def _slice_genus_bound(st: CandidateState) -> Proposal:
    out: Proposal = {}
    gs = st["slice_genus"]
    if 0 not in gs:
        limit = 2 * max(gs) - 1
        _add(out, "nu_sharp", (n for n in st["nu_sharp"] if abs(n) <= limit))
    min_abs = min(abs(n) for n in st["nu_sharp"])
    _add(out, "slice_genus", (s for s in gs if s == 0 or min_abs <= 2 * s - 1))
    return out


def _genus_one_gap(st: CandidateState) -> Proposal:
    out: Proposal = {}
    nu, r0 = st.single("nu_sharp"), st.single("r0")
    if nu is None or r0 is None:
        return out
    if r0 - nu == 2 and nu <= 1:
        _add(out, "genus", {1})
    if (nu, r0) == (0, 2):
        _add(out, "shape", {Shape.W.value})
        _add(out, "flags.fibered", {True})
    return out


# ── Mirror symmetry ──────────────────────────────────────────────────────

_SIGN_FLIP = {"neg": "pos", "pos": "neg", "zero": "zero"}


def _mirror_sets(sets: dict[str, frozenset[Any]], *, keep_chiral: bool) -> dict[str, frozenset[Any]]:
    """Mirror a state (or a proposal).

    Chiral flags become unknown in a mirrored state and are dropped from a
    mirrored proposal.
    """
    out: dict[str, frozenset[Any]] = {}
    for name, values in sets.items():
        if name in SIGNED_FIELDS:
            out[name] = frozenset(-v for v in values)
        elif name == "froyshov_plus1":
            out["froyshov_minus1"] = frozenset(_SIGN_FLIP[v] for v in values)
        elif name == "froyshov_minus1":
            out["froyshov_plus1"] = frozenset(_SIGN_FLIP[v] for v in values)
        elif name.startswith("flags.") and name[6:] not in MIRROR_INVARIANT_FLAGS:
            if keep_chiral:
                out[name] = BOOLS
        else:
            out[name] = values
    return out


def _mirror_genus_one_gap(st: CandidateState) -> Proposal:
    mirrored = CandidateState(_mirror_sets(st.snapshot(), keep_chiral=True))
    return _mirror_sets(_genus_one_gap(mirrored), keep_chiral=False)


DEFAULT_RULES: tuple[Rule, ...] = (
    Rule("R1", _parity),
    Rule("R2", _bounds),
    Rule("R3", _small_r0),
    Rule("R4", _lspace),
    Rule("R5", _sign_lift),
    Rule("R6", _epsilon_bound),
    Rule("R7", _froyshov),
    Rule("R8", _v_shape),
    Rule("R9", _rationally_slice),
    Rule("R12", _attributes),
    Rule("R13", _slice_genus_bound),
    Rule("R14", _genus_one_gap),
    Rule("R15", _mirror_genus_one_gap),
)


def shuffled_rules(seed: int) -> list[Rule]:
    """The default rules in a reproducible random order."""
    rules = list(DEFAULT_RULES)
    random.Random(seed).shuffle(rules)
    return rules


# ═══════════════════════════════════════════════════════════════════════════
# ENGINE
# ═══════════════════════════════════════════════════════════════════════════


def _statements(st: CandidateState) -> list[Statement]:
    found: list[tuple[str, str]] = []
    nu, r0 = st["nu_sharp"], st["r0"]

    if max(r0) <= 2:
        names = sorted(
            {
                name
                for n in nu
                for r in r0
                if KnotRecord(name="query", nu_sharp=n, r0=r).invariant_violations() == []
                for name in classify_small(n, r).knots
            }
        )
        if names == ["left-handed trefoil", "right-handed trefoil"]:
            found.append(("R3", "K is a trefoil"))
        elif names:
            found.append(("R3", "K is the " + " or the ".join(names)))

    if st.every("nu_sharp", lambda n: n > 0) or st.every("tau_sharp", lambda t: t > 0):
        found.append(
            (
                "R10",
                "the surgeries S^3_{1/n}(K), n >= 1, are linearly independent "
                "in the homology cobordism group",
            )
        )
    if st.every("nu_sharp", lambda n: n < 0) or st.every("tau_sharp", lambda t: t < 0):
        found.append(
            (
                "R15",
                "the surgeries S^3_{-1/n}(K), n >= 1, are linearly independent "
                "in the homology cobordism group",
            )
        )

    n_single, r_single = st.single("nu_sharp"), st.single("r0")
    if n_single is not None and r_single is not None:
        shape = st.single("shape")
        small = (n_single != 0 and r_single + abs(n_single) == 2) or (
            n_single == 0 and shape == Shape.W.value and r_single == 0
        )
        if small:
            found.append(("R11", "dim I#(S^3_0(K)) = 2, so K is the unknot or a trefoil"))
        if (abs(n_single), r_single) == (1, 3):
            found.append(("R14", f"K has Seifert genus 1 and {GENUS_ONE_ALEXANDER}"))
    if st.flag_is("lspace_knot", True):
        found.append(("R4", "K is fibered and strongly quasipositive"))

    return [Statement(rule_id=r, text=t, source_anchor=get_anchor(r)) for r, t in found]


def _enriched(rec: KnotRecord, st: CandidateState) -> KnotRecord:
    values: dict[str, Any] = {"name": rec.name}
    for name in INT_FIELDS:
        values[name] = st.single(name)
    shape = st.single("shape")
    values["shape"] = Shape(shape) if shape is not None and st.single("nu_sharp") == 0 else None
    values["flags"] = KnotFlags(**{f: st.single(f"flags.{f}") for f in FLAG_NAMES})
    values["mirror_flags"] = rec.mirror_flags
    for name in ("froyshov_plus1", "froyshov_minus1"):
        try:
            values[name] = FroyshovSign.from_candidates(st[name])
        except ValueError:
            values[name] = getattr(rec, name)
    return KnotRecord(**values)


class InferenceEngine:
    """Applies a rule list to records until the candidate sets stop shrinking."""

    def __init__(
        self, bound: int = DEFAULT_NU_BOUND, rules: Sequence[Rule] | None = None
    ) -> None:
        self.bound = bound
        self.rules = tuple(rules) if rules is not None else DEFAULT_RULES

    def run(self, rec: KnotRecord) -> InferenceResult:
        st = initial_state(rec, self.bound)
        derivations: list[Derivation] = []
        contradictions: list[Contradiction] = []
        budget = sum(len(v) for v in st.sets.values()) + 2
        passes = 0
        changed = True

        while changed and not contradictions:
            passes += 1
            if passes > budget:
                raise RuntimeError(f"inference on {rec.name!r} did not reach a fixpoint")
            changed = False
            for rule in self.rules:
                proposal = rule.propose(st)
                for name in sorted(proposal):
                    before = st[name]
                    after = before & proposal[name]
                    if after == before:
                        continue
                    if not after:
                        involved = {n: _sorted(st[n]) for n in sorted(proposal)}
                        involved[name] = _sorted(before)
                        contradictions.append(
                            Contradiction(
                                rule_id=rule.rule_id,
                                fields=involved,
                                message=(
                                    f"{rule.rule_id} ({get_anchor(rule.rule_id)}) "
                                    f"leaves no value for {name}"
                                ),
                            )
                        )
                        break
                    derivations.append(
                        Derivation(
                            field=name,
                            before=_sorted(before),
                            after=_sorted(after),
                            rule_id=rule.rule_id,
                            source_anchor=get_anchor(rule.rule_id),
                        )
                    )
                    st.sets[name] = after
                    changed = True
                if contradictions:
                    break

        logger.debug(
            "inference on %s: %d passes, %d derivations, %d contradictions",
            rec.name,
            passes,
            len(derivations),
            len(contradictions),
        )
        if contradictions:
            return InferenceResult(
                record=rec,
                derivations=derivations,
                contradictions=contradictions,
                candidates={k: _sorted(v) for k, v in sorted(st.sets.items())},
            )
        return InferenceResult(
            record=_enriched(rec, st),
            derivations=derivations,
            statements=_statements(st),
            candidates={k: _sorted(v) for k, v in sorted(st.sets.items())},
        )


def apply_rules(
    rec: KnotRecord,
    bound: int = DEFAULT_NU_BOUND,
    rules: Sequence[Rule] | None = None,
) -> InferenceResult:
    """Run the default engine on ``rec``."""
    return InferenceEngine(bound=bound, rules=rules).run(rec)


def check_consistency(rec: KnotRecord, bound: int = DEFAULT_NU_BOUND) -> list[Contradiction]:
    """Contradictions found while inferring from ``rec`` (empty means consistent)."""
    return apply_rules(rec, bound).contradictions
