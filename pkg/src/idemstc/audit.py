"""Family dispatch, operation chains, closed-form predictions and published-value checks.

A constellation's metadata (``family``, ``params``, ``chain``) is enough to
rebuild it from scratch; :func:`rebuild` does that, which lets predictions
refer to the base constellation an extension started from.
"""

from __future__ import annotations

import math
from itertools import combinations
from typing import Any

from . import constellations as cons
from . import extensions as ext
from .errors import ReferenceDeviation, warn_deviation
from .idempotents import dft_set

FAMILIES = ("cyclic", "real-rank1", "rational", "angle", "gaussian")


def generate(family: str, params: dict[str, Any]) -> cons.Constellation:
    if family == "cyclic":
        basis = params.get("basis", "diagonal")
        tuples = [tuple(t) for t in params["tuples"]]
        if basis == "dft":
            c = cons.gen_cyclic(int(params["n"]), tuples, dft_set(len(tuples[0])))
            return c.with_metadata(params={**c.params, "basis": "dft"})
        if basis != "diagonal":
            raise ValueError(f"unknown basis {basis!r}")
        return cons.gen_cyclic(int(params["n"]), tuples)
    if family == "real-rank1":
        return cons.gen_real_rank1(params["indices"])
    if family == "rational":
        return cons.gen_rational(params["pairs"])
    if family == "angle":
        return cons.gen_angle(int(params["n"]))
    if family == "gaussian":
        return cons.gen_gaussian(
            [(cons.parse_gaussian(str(a)), cons.parse_gaussian(str(b))) for a, b in params["pairs"]]
        )
    raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")


def apply_step(c: cons.Constellation, step: dict) -> cons.Constellation:
    op = step["op"]
    if op == "negate":
        return ext.negate_extend(c)
    if op == "omega":
        return ext.omega_extend(c, int(step["k"]))
    if op == "tangle":
        return ext.tangle_extend(c, int(step.get("omega_order", 1)))
    if op == "omega-free":
        return ext.omega_free(c)
    raise ValueError(f"unknown operation {op!r}")


def rebuild(family: str, params: dict, chain=()) -> cons.Constellation:
    c = generate(family, params)
    for step in chain:
        c = apply_step(c, step)
    return c


def _ops(c: cons.Constellation) -> list[str]:
    return [s["op"] for s in c.chain]


# --- predictions --------------------------------------------------------------


def _entry(source: str, predicted: float, measured: float, kind: str = "closed-form") -> dict:
    # kind: "closed-form" (exact), "candidate" (min-type formula that can overshoot)
    # or "published" (a printed figure with no valid derivation behind it)
    return {"source": source, "predicted": predicted, "measured": measured, "delta": measured - predicted, "kind": kind}


def _rank1_closed_form(indices: list[int], with_negatives: bool) -> float:
    vals = [cons.predicted_distance_rank1(k, l) for k, l in combinations(indices, 2)]
    if with_negatives:
        vals += [cons.predicted_sum_distance_rank1(k, l) for k, l in combinations(indices, 2)]
        vals.append(1.0)  # A and -A
    return min(vals)


def predictions(c: cons.Constellation, report: cons.QualityReport) -> dict[str, dict]:
    """Closed-form quality values applicable to ``c``, each with its measured delta."""
    out: dict[str, dict] = {}
    ops = _ops(c)
    measured = report.quality
    if c.family == "angle" and int(c.params["n"]) % 2 == 1 and ops in ([], ["negate"]):
        n = int(c.params["n"])
        out["angle-odd"] = _entry(
            "sin(pi/n) for the odd angle family",
            cons.predicted_quality_angle(n),
            measured,
            "closed-form" if not ops else "published",
        )
    if c.family == "real-rank1" and ops in ([], ["negate"]) and len(c.params["indices"]) >= 2:
        out["rank1-pairs"] = _entry(
            "min over pairs of |sqrt(l)-sqrt(k)|/sqrt((k+1)(l+1)), and (1+sqrt(kl))/sqrt((k+1)(l+1)) against negatives",
            _rank1_closed_form(list(c.params["indices"]), ops == ["negate"]),
            measured,
        )
    if c.family == "cyclic" and not ops:
        tuples = [tuple(t) for t in c.params["tuples"]]
        out["cyclic-rank-product"] = _entry(
            "1/2 min prod |1 - w^(j_t - j'_t)|^(1/M) from the rank-product determinant",
            cons.cyclic_quality(tuples, int(c.params["n"])),
            measured,
        )
    if ops and ops[-1] in ("omega", "tangle"):
        base = rebuild(c.family, c.params, c.chain[:-1])
        if len(base) >= 2:
            zb = cons.quality(base).quality
            step = c.chain[-1]
            if step["op"] == "omega":
                k = int(step["k"])
                out["omega-orbit"] = _entry(
                    f"min(base quality, sin(pi/{k}))", ext.predicted_quality_omega(zb, k), measured, "candidate"
                )
            else:
                t = int(step.get("omega_order", 1))
                out["tangle"] = _entry(
                    f"min(2^(1/4) * base quality, sin(pi/{t}))" if t > 1 else "2^(1/4) * base quality",
                    ext.predicted_quality_tangle_extend(zb, t),
                    measured,
                    "candidate",
                )
    return out


# --- published figures that the computation does not reproduce ---------------

_CLAIM_RTOL = 1e-3
_RANK1_CLAIM = 2 / math.sqrt(85)  # printed as ~0.217 for {A_1, A_2, A_4, A_16}


def _claims(c: cons.Constellation) -> list[tuple[str, str, float]]:
    """(code, description, claimed value) for figures published about ``c``."""
    ops = _ops(c)
    out = []
    if c.family == "real-rank1" and sorted(c.params["indices"]) == [1, 2, 4, 16]:
        if ops in ([], ["negate"]):
            out.append(("rank1-quality", "quality of {A_1,A_2,A_4,A_16} (±) printed as (4-2)/sqrt(85) ~ 0.217", _RANK1_CLAIM))
        elif ops == ["omega"]:
            k = int(c.chain[0]["k"])
            out.append(("omega-quality", f"ω-extension (k={k}) quality printed as min(0.217, sin(pi/{k}))",
                        min(_RANK1_CLAIM, math.sin(math.pi / k))))
        elif ops == ["tangle"] and int(c.chain[0].get("omega_order", 1)) == 8:
            out.append(("tangle-quality", "tangle sample quality printed as 2^(1/4)*0.217 ~ 0.258",
                        min(2 ** 0.25 * _RANK1_CLAIM, math.sin(math.pi / 8))))
            out.append(("tangle-rate", "tangle sample rate printed as log2(64)/4 = 3", 3.0))
        elif ops == ["tangle", "omega-free", "tangle"]:
            out.append(("tangle2-quality", "second tangle sample quality printed as 2^(1/2)*0.217 ~ 0.3069",
                        min(2 ** 0.5 * _RANK1_CLAIM, math.sin(math.pi / 8))))
    if c.family == "angle" and ops == ["negate"] and int(c.params["n"]) % 2 == 1:
        n = int(c.params["n"])
        out.append(("angle-negate-quality", f"V_{n} ∪ -V_{n} quality printed as sin(pi/{n})", math.sin(math.pi / n)))
    return out


def published_deviations(c: cons.Constellation, report: cons.QualityReport, emit: bool = True) -> list[ReferenceDeviation]:
    devs = []
    for code, text, claimed in _claims(c):
        computed = report.rate if code.endswith("-rate") else report.quality
        if abs(computed - claimed) > _CLAIM_RTOL * abs(claimed):
            d = ReferenceDeviation(code, f"{text}; computed {computed:.6g}", claimed=claimed, computed=computed)
            devs.append(d)
            if emit:
                warn_deviation(d)
    return devs
