"""One-step rewriting, derivation traces, and the unstable/critical pair calculus."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .matching import DEFAULT_BUDGET, apply, iter_nontrivial_applications
from .sigma import sigma_rule
from .words import Identity, Word, format_word, parse_word, project


class MalformedStepError(ValueError):
    pass


def _sides(rule: Identity, direction: str) -> tuple[Word, Word]:
    if direction == "forward":
        return rule.lhs, rule.rhs
    if direction == "backward":
        return rule.rhs, rule.lhs
    raise ValueError(f"direction must be 'forward' or 'backward', not {direction!r}")


@dataclass(frozen=True)
class DerivationStep:
    rule: Identity
    direction: str
    substitution: dict
    left: Word
    right: Word
    before: Word
    after: Word

    def __str__(self):
        arrow = "->" if self.direction == "forward" else "<-"
        sub = " ".join(f"{k}={format_word(v)}" for k, v in self.substitution.items())
        return (f"{format_word(self.before)}  =[{self.rule.tag} {arrow}; {sub}; "
                f"ctx {format_word(self.left)}|{format_word(self.right)}]=>  {format_word(self.after)}")

    def inverse(self) -> "DerivationStep":
        back = "backward" if self.direction == "forward" else "forward"
        return DerivationStep(self.rule, back, self.substitution, self.left, self.right,
                              self.after, self.before)


def apply_step(w: Word, rule: Identity, theta: dict, left: Word, right: Word,
               direction: str = "forward") -> Word:
    src, dst = _sides(rule, direction)
    if tuple(left) + apply(theta, src) + tuple(right) != tuple(w):
        raise MalformedStepError(
            f"{format_word(w)} is not {format_word(left)}·({format_word(src)})θ·{format_word(right)}")
    return tuple(left) + apply(theta, dst) + tuple(right)


def make_step(w: Word, rule: Identity, theta: dict, left: Word = (), right: Word = (),
              direction: str = "forward") -> DerivationStep:
    after = apply_step(w, rule, theta, left, right, direction)
    return DerivationStep(rule, direction, dict(theta), tuple(left), tuple(right), tuple(w), after)


@dataclass
class DerivationTrace:
    start: Word
    end: Word
    steps: list = field(default_factory=list)

    def words(self) -> list[Word]:
        return [self.start] + [s.after for s in self.steps]

    def __len__(self):
        return len(self.steps)

    def reversed(self) -> "DerivationTrace":
        return DerivationTrace(self.end, self.start, [s.inverse() for s in reversed(self.steps)])

    def then(self, other: "DerivationTrace") -> "DerivationTrace":
        if other.start != self.end:
            raise ValueError("traces do not chain")
        return DerivationTrace(self.start, other.end, self.steps + other.steps)

    def to_json(self) -> str:
        def step_doc(s: DerivationStep):
            return {
                "rule": s.rule.tag,
                "lhs": format_word(s.rule.lhs),
                "rhs": format_word(s.rule.rhs),
                "direction": s.direction,
                "substitution": {k: format_word(v) for k, v in s.substitution.items()},
                "left": format_word(s.left),
                "right": format_word(s.right),
                "before": format_word(s.before),
                "after": format_word(s.after),
            }
        return json.dumps({"start": format_word(self.start), "end": format_word(self.end),
                           "steps": [step_doc(s) for s in self.steps]}, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "DerivationTrace":
        doc = json.loads(text)
        steps = []
        for d in doc["steps"]:
            rule = Identity(parse_word(d["lhs"]), parse_word(d["rhs"]), d["rule"])
            steps.append(DerivationStep(
                rule, d["direction"], {k: parse_word(v) for k, v in d["substitution"].items()},
                parse_word(d["left"]), parse_word(d["right"]),
                parse_word(d["before"]), parse_word(d["after"])))
        return cls(parse_word(doc["start"]), parse_word(doc["end"]), steps)


def remove_cycles(trace: DerivationTrace) -> DerivationTrace:
    """Drop every closed loop so that all words of the chain are distinct."""
    steps: list[DerivationStep] = []
    index = {trace.start: 0}
    for s in trace.steps:
        if s.after in index:
            k = index[s.after]
            for t in steps[k:]:
                index.pop(t.after, None)
            del steps[k:]
        else:
            steps.append(s)
            index[s.after] = len(steps)
    return DerivationTrace(trace.start, trace.end, steps)


def default_sigma_bound(trace: DerivationTrace) -> int:
    return max(2, len(trace.start))


@dataclass
class TraceVerdict:
    ok: bool
    bad_step: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def _member(rule: Identity, system, nmax: int) -> bool:
    if system is not None:
        return any(rule.lhs == r.lhs and rule.rhs == r.rhs for r in system)
    try:
        ref = sigma_rule(rule.tag)
    except KeyError:
        return False
    if ref.lhs != rule.lhs or ref.rhs != rule.rhs:
        return False
    if rule.tag.startswith("w_") and int(rule.tag[2:]) > nmax:
        return False
    return True


def verify_trace(trace: DerivationTrace, system: Iterable[Identity] | None = None,
                 nmax: int | None = None) -> TraceVerdict:
    """Check every step against ``system`` (default: Sigma with n <= nmax).

    ``nmax`` defaults to max(2, |start|).
    """
    if system is not None:
        system = list(system)
    if nmax is None:
        nmax = default_sigma_bound(trace)
    seen = {trace.start}
    current = trace.start
    for k, s in enumerate(trace.steps):
        if s.before != current:
            return TraceVerdict(False, k, "step does not start where the previous one ended")
        if not _member(s.rule, system, nmax):
            return TraceVerdict(False, k, f"rule {s.rule.tag or s.rule} is not in the system")
        try:
            after = apply_step(s.before, s.rule, s.substitution, s.left, s.right, s.direction)
        except (MalformedStepError, ValueError) as exc:
            return TraceVerdict(False, k, str(exc))
        if after != s.after:
            return TraceVerdict(False, k, "recorded result differs from the rewrite")
        if after in seen:
            return TraceVerdict(False, k, f"word {format_word(after)} repeats in the chain")
        seen.add(after)
        current = after
    if current != trace.end:
        return TraceVerdict(False, len(trace.steps), "chain does not end at the stated end word")
    return TraceVerdict(True)


# pair calculus


@dataclass(frozen=True)
class PairStatus:
    pair: tuple[str, str]
    stable: bool
    critical_occurrences: frozenset  # of ((a, i), (b, j)): occurrence i of a then j of b


def _occ_index(w: Word) -> tuple[list[int], dict]:
    idx = []
    seen: dict[str, int] = {}
    where = {}
    for p, a in enumerate(w):
        seen[a] = seen.get(a, 0) + 1
        idx.append(seen[a])
        where[(a, seen[a])] = p
    return idx, where


def _critical_refs(u: Word, v: Word) -> list[tuple[int, tuple, tuple]]:
    iu, _ = _occ_index(u)
    _, wv = _occ_index(v)
    out = []
    for p in range(len(u) - 1):
        a, b = u[p], u[p + 1]
        if a == b:
            continue
        ra, rb = (a, iu[p]), (b, iu[p + 1])
        if ra in wv and rb in wv and wv[ra] > wv[rb]:
            out.append((p, ra, rb))
    return out


def unstable_pairs(u: Word, v: Word) -> list[PairStatus]:
    """Statuses of the pairs {a, b} whose projections differ between u and v."""
    return [s for s in pair_statuses(u, v) if not s.stable]


def pair_statuses(u: Word, v: Word) -> list[PairStatus]:
    crit: dict[tuple[str, str], set] = {}
    for _, ra, rb in _critical_refs(u, v):
        crit.setdefault(tuple(sorted((ra[0], rb[0]))), set()).add((ra, rb))
    out = []
    for a, b in combinations(sorted(set(u) | set(v)), 2):
        stable = project(u, (a, b)) == project(v, (a, b))
        out.append(PairStatus((a, b), stable, frozenset(crit.get((a, b), ()))))
    return out


def unstable_count(u: Word, v: Word) -> int:
    return len(unstable_pairs(u, v))


def find_critical_pair(u: Word, v: Word):
    """Leftmost critical occurrence pair of u against v.

    Returns ((x, y), (i, j)) meaning occurrence i of x is immediately followed
    by occurrence j of y in u, while in v it comes after; None if u has none.
    """
    refs = _critical_refs(u, v)
    if not refs:
        return None
    _, (x, i), (y, j) = refs[0]
    return (x, y), (i, j)


# bounded search


@dataclass
class SearchOutcome:
    status: str  # "found", "none" (reachable class exhausted), "bound"
    trace: DerivationTrace | None = None
    explored: int = 0


def one_step_rewrites(w: Word, system: Iterable[Identity], budget: int = DEFAULT_BUDGET):
    for rule in system:
        for app in iter_nontrivial_applications(rule, w, budget):
            m = app.match
            yield DerivationStep(rule, app.direction, m.substitution, m.left, m.right, w, app.rewritten)


def bounded_search(u: Word, v: Word, system: Iterable[Identity], depth: int,
                   width: int = 10**5, budget: int = DEFAULT_BUDGET) -> SearchOutcome:
    """Breadth-first search for a derivation of u = v of at most ``depth`` steps.

    "none" means every word reachable from u was explored, so no derivation
    exists at any length; "bound" means depth or width cut the search short.
    """
    u, v = tuple(u), tuple(v)
    system = list(system)
    if u == v:
        return SearchOutcome("found", DerivationTrace(u, v, []), 1)
    parent: dict[Word, DerivationStep | None] = {u: None}
    frontier = [u]
    truncated = False
    for _ in range(depth):
        nxt = []
        for w in frontier:
            for step in one_step_rewrites(w, system, budget):
                if step.after in parent:
                    continue
                parent[step.after] = step
                if step.after == v:
                    steps = []
                    cur = v
                    while parent[cur] is not None:
                        steps.append(parent[cur])
                        cur = parent[cur].before
                    return SearchOutcome("found", DerivationTrace(u, v, steps[::-1]), len(parent))
                nxt.append(step.after)
        if len(nxt) > width:
            nxt = nxt[:width]
            truncated = True
        if not nxt:
            return SearchOutcome("bound" if truncated else "none", None, len(parent))
        frontier = nxt
    return SearchOutcome("bound", None, len(parent))

