"""Registry of inference rules and the statements they rest on.

Each entry maps a rule id to a short title and the mathematical statement
that justifies every narrowing the rule performs. ``source`` names the
published result behind the statement; the inference trace prints both next
to each derivation.
"""

RULES: dict[str, dict[str, str]] = {
    "R1": {
        "title": "parity",
        "source": "theorem on the parity of nu-sharp",
        "anchor": "nu-sharp is either zero or odd",
    },
    "R2": {
        "title": "bounds",
        "source": "basic properties of the minimal surgery dimension",
        "anchor": (
            "r0 >= |nu-sharp| with r0 = nu-sharp mod 2; g_s <= g; "
            "g_s = 0 exactly for slice knots; a shape is defined only when nu-sharp = 0"
        ),
    },
    "R3": {
        "title": "small r0",
        "source": "theorem classifying knots with r0 <= 2",
        "anchor": "r0 <= 2 only for the unknot, a trefoil, or the figure eight knot",
    },
    "R4": {
        "title": "instanton L-space knots",
        "source": "characterization of instanton L-space knots",
        "anchor": (
            "an instanton L-space knot is fibered and strongly quasipositive "
            "with r0 = nu-sharp = 2g - 1"
        ),
    },
    "R5": {
        "title": "sign lift",
        "source": "lemma on nonzero tau-sharp",
        "anchor": "tau-sharp > 0 implies nu-sharp > 0 (and symmetrically for < 0)",
    },
    "R6": {
        "title": "epsilon bound",
        "source": "proposition on epsilon-sharp",
        "anchor": "epsilon-sharp = 2 tau-sharp - nu-sharp lies in {-1, 0, 1}",
    },
    "R7": {
        "title": "Froyshov signs",
        "source": "proposition on +1 surgery Froyshov invariants",
        "anchor": (
            "h(S^3_1(K)) <= 0 always, and nu-sharp > 0 implies h(S^3_1(K)) < 0; "
            "mirrored for S^3_{-1}"
        ),
    },
    "R8": {
        "title": "V-shape",
        "source": "remark on V-shaped knots",
        "anchor": "a V-shaped knot has h(S^3_{-1}(K)) > 0 and h(S^3_1(K)) < 0",
    },
    "R9": {
        "title": "rationally slice",
        "source": "proposition on rationally slice knots",
        "anchor": (
            "a rationally slice knot has nu-sharp = tau-sharp = 0 and is "
            "W-shaped; slice knots are rationally slice"
        ),
    },
    "R10": {
        "title": "linear independence",
        "source": "theorem on the homology cobordism group",
        "anchor": (
            "nu-sharp > 0 or tau-sharp > 0 makes the surgeries S^3_{1/n}(K), "
            "n >= 1, linearly independent in the homology cobordism group"
        ),
    },
    "R11": {
        "title": "zero surgery of dimension 2",
        "source": "theorem on zero surgeries of small dimension",
        "anchor": "dim I#(S^3_0(K)) = 2 only for the unknot or a trefoil",
    },
    "R12": {
        "title": "attributes",
        "source": "corollary on knots with positive tau-sharp",
        "anchor": (
            "a positive transverse self-linking number gives nu-sharp >= 1; "
            "quasipositive non-slice knots have tau-sharp = g_s > 0; "
            "alternating knots have tau-sharp = -sigma/2; "
            "strongly quasipositive knots are quasipositive"
        ),
    },
    "R13": {
        "title": "slice genus bound",
        "source": "slice genus bounds on nu-sharp",
        "anchor": "|nu-sharp| <= 2 g_s - 1 whenever g_s > 0",
    },
    "R14": {
        "title": "genus one gap",
        "source": "propositions on (nu-sharp, r0) = (1, 3) and (0, 2)",
        "anchor": (
            "r0 - nu-sharp = 2 with nu-sharp <= 1 forces Seifert genus 1; "
            "(nu-sharp, r0) = (0, 2) is the figure eight"
        ),
    },
    "R15": {
        "title": "mirror symmetry",
        "source": "mirror image of every invariant",
        "anchor": (
            "every rule also holds for the mirror image, which negates nu-sharp, "
            "tau-sharp and sigma"
        ),
    },
}


def get_anchor(rule_id: str) -> str:
    """Return the justifying statement for ``rule_id`` with its source result."""
    try:
        entry = RULES[rule_id]
    except KeyError:
        raise ValueError(f"unknown rule id {rule_id!r}") from None
    return f"{entry['anchor']} [{entry['source']}]"
