"""Convention bootstrap: select the q-weight convention forced by the relations.

Every candidate convention runs the selection suite on the bootstrap
configurations. Survivors are grouped into classes of action-isomorphic
conventions (a relabelling of colours followed by a diagonal change of basis
by units ``+-q^a``) at generic ``q``; exactly one class must remain. The
class representative is the lexicographically smallest convention name.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .kmodel import DEFAULT_LEDGER, Convention, KModel, ModelConfig
from .qlaurent import ONE, LaurentPoly
from .relations import run_suite
from .weightlat import object_weights

__all__ = [
    "BOOTSTRAP_CONFIGS",
    "SELECTION_SUITE",
    "BootstrapError",
    "NoConventionFound",
    "AmbiguousConvention",
    "BootstrapResult",
    "action_isomorphism",
    "bootstrap_side",
    "bootstrap",
    "write_ledger",
]

BOOTSTRAP_CONFIGS = ((2, 2, 2), (3, 2, 2))

# T0def is not part of selection: no candidate passes it (its composite is
# unipotent rather than diagonal, see the decisions ledger).
SELECTION_SUITE = [
    "sl2", "sl2-divided", "EiFj-commute", "EE-commute", "divided-power", "merge", "serre", "sl3",
    "braid", "TTE", "TEFT", "canonical", "rotation", "A-inverse",
    "E0def", "app1", "cor-app1-EF", "cor-app1-commute",
]


class BootstrapError(RuntimeError):
    exit_code = 1


class NoConventionFound(BootstrapError):
    exit_code = 5


class AmbiguousConvention(BootstrapError):
    exit_code = 6

    def __init__(self, message: str, classes: list[list[str]]):
        super().__init__(message)
        self.classes = classes


@dataclass
class BootstrapResult:
    side: str
    selected: str
    classes: list[list[str]]
    evidence: dict = field(default_factory=dict)
    units: dict = field(default_factory=dict)


# -- action isomorphism ------------------------------------------------------------------


def _relabel(b: tuple, perm: dict[int, int]) -> tuple:
    return tuple(tuple(sorted(perm[c] for c in slot)) for slot in b)


def _generator_entries(K: KModel):
    """Yield ``(source basis vector, target basis vector, entry)`` for all ``E_i, F_i``."""
    n, N = K.cfg.n, K.cfg.N
    for kind in ("E", "F"):
        for i in range(n):
            for k in object_weights(n, N):
                op = K.divided_power(kind, i, 1, k)
                if op.shape[0] == 0:
                    continue
                rows, cols = K.basis(op.target), K.basis(k)
                for r, c, x in op.matrix.entries():
                    yield (kind, i), cols[c], rows[r], x


def _gauge(A: KModel, B: KModel, perm: dict[int, int]) -> dict | None:
    """A diagonal unit gauge ``d`` with ``d(t) A[t,s] = B[pt,ps] d(s)``, or ``None``."""
    a_entries: dict = {}
    for gen, s, t, x in _generator_entries(A):
        a_entries[(gen, s, t)] = x
    b_entries: dict = {}
    for gen, s, t, x in _generator_entries(B):
        b_entries[(gen, s, t)] = x
    mapped = {(gen, _relabel(s, perm), _relabel(t, perm)): x for (gen, s, t), x in a_entries.items()}
    if set(mapped) != set(b_entries):
        return None
    # ratio(s, t) = B / A must be a unit; d(t) = ratio * d(s)
    edges: dict = {}
    for key, x in mapped.items():
        y = b_entries[key]
        if not x.divides(y):
            return None
        r = y.exact_div(x)
        if not r.is_unit():
            return None
        _, s, t = key
        edges.setdefault(s, []).append((t, r))
        edges.setdefault(t, []).append((s, r ** -1))
    d: dict = {}
    for root_vec in sorted(edges):
        if root_vec in d:
            continue
        d[root_vec] = ONE
        stack = [root_vec]
        while stack:
            s = stack.pop()
            for t, r in edges[s]:
                want = r * d[s]
                if t in d:
                    if d[t] != want:
                        return None
                else:
                    d[t] = want
                    stack.append(t)
    return d


def action_isomorphism(cfg_a: ModelConfig, cfg_b: ModelConfig) -> str | None:
    """Describe an isomorphism of the two actions (``None`` if none is found).

    Colour relabellings tried: identity and reversal ``c -> m + 1 - c``.
    """
    A, B = KModel(cfg_a), KModel(cfg_b)
    m = cfg_a.m
    for name, perm in (("identity", {c: c for c in range(1, m + 1)}),
                       ("colour reversal", {c: m + 1 - c for c in range(1, m + 1)})):
        if _gauge(A, B, perm) is not None:
            return f"{name} + diagonal unit gauge"
    return None


# -- search ------------------------------------------------------------------------------


def _evaluate(side: str, conv: Convention, point: str, relations: list[str], workers: int) -> dict:
    configs = [ModelConfig(side, n, m, N, conv, point) for n, m, N in BOOTSTRAP_CONFIGS]
    rows = run_suite(configs, relations, workers)
    per: dict = {}
    for r in rows:
        c = r["config"]
        key = f"n={c['n']} m={c['m']} N={c['N']}"
        cell = per.setdefault(key, {}).setdefault(r["relation"], {"pass": 0, "fail": 0, "skip": 0})
        cell[r["status"]] += 1
        if r["status"] == "fail" and "witness" not in cell:
            cell["witness"] = r.get("witness", "")
        if "unit" in r:
            cell["unit"] = r["unit"]
    ok = all(v["fail"] == 0 for rels in per.values() for v in rels.values())
    return {"survives": ok, "configs": per}


def _classes(side: str, names: list[str]) -> tuple[list[list[str]], dict]:
    classes: list[list[str]] = []
    witnesses: dict = {}
    for name in names:
        conv = Convention.from_name(name)
        for cls in classes:
            rep = Convention.from_name(cls[0])
            how = []
            for n, m, N in BOOTSTRAP_CONFIGS:
                iso = action_isomorphism(ModelConfig(side, n, m, N, conv), ModelConfig(side, n, m, N, rep))
                if iso is None:
                    break
                how.append(iso)
            else:
                cls.append(name)
                witnesses[name] = {"isomorphic_to": cls[0], "via": sorted(set(how))}
                break
        else:
            classes.append([name])
    return classes, witnesses


def bootstrap_side(side: str, point: str = "generic", extra: list[str] | None = None,
                   workers: int = 1) -> BootstrapResult:
    relations = SELECTION_SUITE + list(extra or [])
    candidates = sorted(Convention.candidates(), key=lambda c: c.name)
    evidence = {c.name: _evaluate(side, c, point, relations, workers) for c in candidates}
    survivors = [name for name in sorted(evidence) if evidence[name]["survives"]]
    rot_note = "rotation weight 0 sufficed"
    if not survivors:
        raise NoConventionFound(f"{side}: no candidate convention passes the selection suite")
    # isomorphism classes are always decided at generic q, where the conventions differ
    classes, iso = _classes(side, survivors)
    if len(classes) > 1:
        raise AmbiguousConvention(
            f"{side}: {len(classes)} inequivalent conventions survive: "
            + "; ".join("{" + ", ".join(c) + "}" for c in classes), classes)
    selected = classes[0][0]
    for name, info in iso.items():
        evidence[name]["isomorphism"] = info
    units = {key: {rel: v["unit"] for rel, v in rels.items() if "unit" in v}
             for key, rels in evidence[selected]["configs"].items()}
    result = BootstrapResult(side, selected, classes, evidence, units)
    result.evidence["_rotation_weight"] = rot_note
    return result


def bootstrap(point: str = "generic", extra: list[str] | None = None, workers: int = 1,
              sides=("symmetric", "skew")) -> dict:
    """Run the bootstrap on both sides and return the ledger document."""
    doc = {
        "format": 1,
        "point": point,
        "configs": [list(c) for c in BOOTSTRAP_CONFIGS],
        "selection_suite": SELECTION_SUITE + list(extra or []),
        "selected": {},
        "classes": {},
        "units": {},
        "evidence": {},
    }
    for side in sides:
        res = bootstrap_side(side, point, extra, workers)
        doc["selected"][side] = res.selected
        doc["classes"][side] = res.classes
        doc["units"][side] = res.units
        doc["evidence"][side] = res.evidence
    return doc


def write_ledger(doc: dict, path: Path | str = DEFAULT_LEDGER) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    return path
