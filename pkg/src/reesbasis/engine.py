"""Constructive derivations from Sigma for identities of M(V).

Pipeline for a satisfied identity u = v:

1. gather every letter occurring more than twice into a cube at the front
   (aperiodic trio only), on both sides;
2. on the 2-limited balanced cores, repeatedly pick the leftmost critical
   pair (x, y), reduce the word around it, build phi and n with
   w_n·phi equal to the reduced word, lift phi back, and apply
   w_n = w'_n once to swap both xy factors;
3. glue the pieces and drop any loops so the chain has distinct words.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from .derivation import (DerivationStep, DerivationTrace, find_critical_pair, make_step,
                         remove_cycles, unstable_count, verify_trace)
from .matching import apply
from .rees import ReesMonoid, SatisfactionWitness, find_violation
from .sigma import catalogue_V_words, lookup_catalogue, make_w, sigma_rule, w_identity
from .words import (EMPTY, Identity, Word, format_word, interlocks, occurrence_positions,
                    project, smallest_block)


class NotUnstableError(ValueError):
    """The configuration cannot come from an identity of M(V) with {x, y} unstable."""


class ClaimViolation(NotUnstableError):
    def __init__(self, claim: str, detail: str, refuting=None):
        msg = f"{claim} fails: {detail}"
        if refuting is not None:
            msg += f" (projection is isoterm {refuting.label}: {format_word(refuting.word)})"
        msg += "; pair is stable / input not M(V)-unstable"
        super().__init__(msg)
        self.claim = claim
        self.refuting = refuting


@lru_cache(maxsize=1)
def monoid_V() -> ReesMonoid:
    return ReesMonoid(catalogue_V_words())


A1, A2, A3 = (sigma_rule(t) for t in ("aperiodic-1", "aperiodic-2", "aperiodic-3"))


# normalization


def cube_letters(u: Word) -> list[str]:
    pos = occurrence_positions(u)
    return [a for a in pos if len(pos[a]) > 2]


def normalize_cubes(u: Word, order: list[str] | None = None) -> tuple[Word, DerivationTrace]:
    """Rewrite u to z1^3 ... zk^3 u' with u' 2-limited using the aperiodic trio.

    ``order`` fixes the order of the cubes (default: first occurrence in u).
    """
    u = tuple(u)
    if order is None:
        order = cube_letters(u)
    steps: list[DerivationStep] = []
    cur = u

    def step(rule, theta, left, right, direction):
        nonlocal cur
        s = make_step(cur, rule, theta, left, right, direction)
        steps.append(s)
        cur = s.after

    done = 0  # length of the normalized cube prefix
    for z in order:
        p = [i for i, a in enumerate(cur) if a == z]
        if len(p) < 3:
            raise ValueError(f"{z} occurs fewer than 3 times in {format_word(u)}")
        if p[2] - p[0] != 2:
            # z s1 z s2 z -> z z z s1 s2
            s1, s2 = cur[p[0] + 1:p[1]], cur[p[1] + 1:p[2]]
            step(A1, {"x": (z,), "t1": s1, "t2": s2}, cur[:p[0]], cur[p[2] + 1:], "forward")
        while True:
            p = [i for i, a in enumerate(cur) if a == z]
            if len(p) == 3:
                break
            c, nxt = p[0], p[3]
            q = cur[c + 3:nxt]
            if q:
                # z^3 q -> q z^3, bringing the cube next to the spare z
                step(A2, {"x": (z,), "t1": q, "t2": EMPTY}, cur[:c], cur[nxt:], "forward")
                c = nxt - 3
            # z^4 -> z^3
            step(A3, {"x": (z,)}, cur[:c], cur[c + 4:], "backward")
        c = cur.index(z)
        s = cur[done:c]
        if s:
            # s z^3 -> z^3 s
            step(A2, {"x": (z,), "t1": s, "t2": EMPTY}, cur[:done], cur[c + 3:], "backward")
        done += 3
    return cur, remove_cycles(DerivationTrace(u, cur, steps))


# decomposition and reductions


@dataclass(frozen=True)
class Decomposition:
    orientation: str  # "forward": u1 x y u2 x y u3; "reverse": u1 y x u2 y x u3
    u1: Word
    u2: Word
    u3: Word


def decompose_adjacent(u: Word, v: Word | None, pair: tuple[str, str]) -> Decomposition:
    """Write u as u1·xy·u2·xy·u3 with no letter of u2 linear in u."""
    u = tuple(u)
    x, y = pair
    pos = occurrence_positions(u)
    if len(pos.get(x, ())) != 2 or len(pos.get(y, ())) != 2:
        raise NotUnstableError(f"({x},{y}) must both be 2-occurring in {format_word(u)} (Lemma adjacent)")
    (px1, px2), (py1, py2) = pos[x], pos[y]
    if py1 == px1 + 1 and py2 == px2 + 1 and px2 > py1:
        orient, first, second = "forward", px1, px2
    elif px1 == py1 + 1 and px2 == py2 + 1 and py2 > px1:
        orient, first, second = "reverse", py1, py2
    else:
        raise NotUnstableError(
            f"{format_word(u)} is not u1·{x}{y}·u2·{x}{y}·u3: not an M(V)-unstable configuration "
            "(Lemma adjacent)")
    u1, u2, u3 = u[:first], u[first + 2:second], u[second + 2:]
    linear = [a for a in u2 if len(pos[a]) == 1]
    if linear:
        raise NotUnstableError(f"letter {linear[0]} of u2 is linear in {format_word(u)} (Lemma adjacent)")
    if v is not None and project(u, pair) == project(tuple(v), pair):
        raise NotUnstableError(f"pair {pair} is stable in {format_word(u)} = {format_word(v)}")
    return Decomposition(orient, u1, u2, u3)


@dataclass
class ReductionRecord:
    kind: int
    original: Word
    reduced: Word
    left: Word = EMPTY     # kind 1: flank before the block
    right: Word = EMPTY    # kind 1: flank after the block
    before_xy: Word = EMPTY  # kind 2: u_{1,2}, reinstalled through z1
    after_xy: Word = EMPTY   # kind 2: u_{3,1}, reinstalled through z2
    runs: dict = field(default_factory=dict)  # kind 3: representative letter -> collapsed factor

    @property
    def is_identity(self) -> bool:
        return self.reduced == self.original

    def lift_substitution(self, phi: dict) -> dict:
        if self.kind == 1:
            return dict(phi)
        if self.kind == 2:
            out = dict(phi)
            out["z1"] = tuple(phi.get("z1", EMPTY)) + self.before_xy
            out["z2"] = self.after_xy + tuple(phi.get("z2", EMPTY))
            return out
        expand = lambda w: tuple(b for a in w for b in self.runs.get(a, (a,)))  # noqa: E731
        return {k: expand(w) for k, w in phi.items()}

    def lift_step(self, step: DerivationStep) -> DerivationStep:
        """Transport a w_n step on ``reduced`` to the corresponding step on ``original``."""
        if step.before != self.reduced:
            raise ValueError("step does not act on the reduced word")
        if self.kind == 1:
            lifted = make_step(self.original, step.rule, step.substitution,
                               self.left + step.left, step.right + self.right, step.direction)
        else:
            if step.left or step.right:
                raise ValueError("reductions 2 and 3 lift whole-word steps only")
            lifted = make_step(self.original, step.rule, self.lift_substitution(step.substitution),
                               EMPTY, EMPTY, step.direction)
        return lifted


def reduce1_block(u: Word, pair: tuple[str, str]) -> ReductionRecord:
    """Restrict to the smallest block containing the first occurrence of x."""
    u = tuple(u)
    p = u.index(pair[0])
    lo, hi = smallest_block(u, (p, p + 1))
    return ReductionRecord(1, u, u[lo:hi], left=u[:lo], right=u[hi:])


def _common_suffix(a: Word, b: Word) -> int:
    k = 0
    while k < len(a) and k < len(b) and a[-1 - k] == b[-1 - k]:
        k += 1
    return k


def _common_prefix(a: Word, b: Word) -> int:
    k = 0
    while k < len(a) and k < len(b) and a[k] == b[k]:
        k += 1
    return k


def reduce2_trim(u1: Word, u2: Word, u3: Word, x: str = "x", y: str = "y") -> ReductionRecord:
    """Strip the common suffix of u1, u2 and the common prefix of u3, u2."""
    u1, u2, u3 = tuple(u1), tuple(u2), tuple(u3)
    s = _common_suffix(u1, u2)
    p = _common_prefix(u3, u2)
    if s + p > len(u2):
        raise NotUnstableError("trimmed affixes overlap inside u2; host is not 2-limited")
    u12, u31 = u1[len(u1) - s:], u3[:p]
    u11, u32 = u1[:len(u1) - s], u3[p:]
    u2p = u2[p:len(u2) - s]
    original = u1 + (x, y) + u2 + (x, y) + u3
    reduced = u11 + (x, y) + u2p + (x, y) + u32
    assert not (set(u12) | set(u31)) & set(reduced), "trimmed letters must not survive"
    return ReductionRecord(2, original, reduced, before_xy=u12, after_xy=u31)


def _repeated_runs(u: Word, barrier: set) -> list[tuple[int, int, int]]:
    """Maximal factors occurring twice, split at ``barrier`` letters.

    Returns (first start, second start, length) with length >= 1, for a
    word in which every letter occurs at most twice.
    """
    pos = occurrence_positions(u)
    twin = {}
    for a, ps in pos.items():
        if len(ps) == 2 and a not in barrier:
            twin[ps[0]] = ps[1]
    runs = []
    for p, q in sorted(twin.items()):
        if twin.get(p - 1) == q - 1:
            continue
        k = 1
        while twin.get(p + k) == q + k:
            k += 1
        runs.append((p, q, k))
    return runs


def reduce3_collapse(u: Word, pair: tuple[str, str]) -> ReductionRecord:
    """Replace each maximal repeated factor (other than xy) by its first letter."""
    u = tuple(u)
    runs = {}
    drop = set()
    for p, q, k in _repeated_runs(u, set(pair)):
        if k > 1:
            runs[u[p]] = u[p:p + k]
            drop.update(range(p + 1, p + k))
            drop.update(range(q + 1, q + k))
    reduced = tuple(a for i, a in enumerate(u) if i not in drop)
    return ReductionRecord(3, u, reduced, runs=runs)


# the inductive construction of phi


def find_refuting_isoterm(u: Word, letters, extra: int = 2):
    """Catalogue word equal (up to renaming) to a projection of u onto a letter
    set containing ``letters`` plus at most ``extra`` further letters."""
    base = set(letters)
    others = sorted(set(u) - base)
    for k in range(extra + 1):
        for more in combinations(others, k):
            e = lookup_catalogue(project(u, base | set(more)))
            if e is not None:
                return e
    return None


def _violation(claim: str, detail: str, u: Word, letters) -> ClaimViolation:
    return ClaimViolation(claim, detail, find_refuting_isoterm(u, letters))


def check_claims(u: Word, pair: tuple[str, str]) -> Decomposition:
    """Runtime versions of the structural claims about a fully reduced word."""
    x, y = pair
    dec = decompose_adjacent(u, None, pair)
    pos = occurrence_positions(u)
    others = [a for a in pos if a not in pair]
    u2set = set(dec.u2)
    # Claim 1
    inter_x = [a for a in others if interlocks(u, a, x)]
    for a in inter_x:
        for b in others:
            # only b with an occurrence outside u2 is constrained; axybabxy
            # is a projection of w_2 itself
            if (b != a and interlocks(u, a, b) and not interlocks(u, b, x)
                    and b in set(dec.u1) | set(dec.u3)):
                raise _violation("Claim 1", f"{a} interlocks {x} and {b} interlocks {a}, "
                                 f"but {b} does not interlock {x}", u, (a, b, x, y))
    # Claim 2
    for a in others:
        if len(pos[a]) != 2:
            raise _violation("Claim 2", f"{a} is not 2-occurring", u, (a, x, y))
        if a not in u2set:
            raise _violation("Claim 2", f"{a} has no occurrence in u2", u, (a, x, y))
    # Claim 3
    for name, part in (("u1", dec.u1), ("u3", dec.u3)):
        if len(part) > 1:
            raise _violation("Claim 3", f"|{name}| = {len(part)} > 1", u, tuple(part[-2:]) + (x, y))
    # Claim 4
    for a, b in combinations(others, 2):
        p = project(u, (a, b))
        if p[0] == p[3] and p[1] == p[2]:
            raise _violation("Claim 4", f"{format_word(p)} is a projection", u, (a, b, x, y))
    # Claim 7
    nth = {}
    seen: dict[str, int] = {}
    for i, a in enumerate(u):
        seen[a] = seen.get(a, 0) + 1
        nth[i] = seen[a]
    for i in range(len(u) - 2):
        a, b, c = u[i:i + 3]
        if {a, b, c} & {x, y} or len({a, b, c}) < 3:
            continue
        if nth[i] == nth[i + 1] == nth[i + 2]:
            raise _violation("Claim 7", f"occurrences #{nth[i]} of {a},{b},{c} are adjacent",
                             u, (a, b, c, x, y))
    # Claim 8
    for i in range(len(u) - 2):
        a, b, c = u[i:i + 3]
        if a not in pair and b not in pair and a != b and nth[i] == 1 and nth[i + 1] == 1 and c != a:
            raise _violation("Claim 8", f"first {a}, first {b} followed by {c}, not {a}", u, (a, b, c, x, y))
        if b not in pair and c not in pair and b != c and nth[i + 1] == 2 and nth[i + 2] == 2 and a != c:
            raise _violation("Claim 8", f"{a} followed by second {b}, second {c}", u, (a, b, c, x, y))
    return dec


@dataclass
class PhiBuilderState:
    assigned: list  # a_0, a_1, ...: a letter or None (empty)
    cursor: int     # position in u of the first letter not yet covered
    n: int | None = None


def _phi_for(n: int, a: list, x: str, y: str) -> dict:
    phi = {f"x{i}": ((a[i],) if a[i] is not None else EMPTY) for i in range(n + 1)}
    phi.update({"z1": EMPTY, "z2": EMPTY, "x": (x,), "y": (y,)})
    return phi


def _lift_w1(phi1: dict, x: str, y: str) -> dict:
    # w_2 under {x_i -> 1, z1 -> x0 z1, z2 -> z2 x1} is w_1
    phi = {f"x{i}": EMPTY for i in range(3)}
    phi.update({"z1": phi1["x0"] + phi1["z1"], "z2": phi1["z2"] + phi1["x1"], "x": (x,), "y": (y,)})
    return phi


def build_phi(u: Word, pair: tuple[str, str], check: bool = True) -> tuple[int, dict]:
    """Find n >= 2 and phi with w_n·phi = u, x·phi = x, y·phi = y.

    ``u`` must be fully reduced (smallest block, trimmed, collapsed).  Each
    x_i·phi is a letter or empty; z1·phi = z2·phi = 1 unless the
    construction ends at n = 1, which is lifted to n = 2 through z1, z2.
    """
    u = tuple(u)
    x, y = pair
    dec = check_claims(u, pair) if check else decompose_adjacent(u, None, pair)
    if not dec.u2:
        if dec.u1 or dec.u3:
            raise _violation("Claim 2", "a letter outside the xy factors has no occurrence in u2",
                             u, tuple(dec.u1) + tuple(dec.u3) + (x, y))
        n, a = 2, [None, None, None]
        phi = _phi_for(n, a, x, y)
        assert apply(phi, make_w(n)) == u
        return n, phi
    body = dec.u2 + (x, y) + dec.u3
    a0 = dec.u1[0] if dec.u1 else None
    state = PhiBuilderState([a0], len(dec.u1) + 2)

    def at(j):
        return body[j] if j < len(body) else None

    j = 0
    if a0 is not None:
        c = at(0)
        if c == a0:
            state.assigned.append(None)
            j = 1
        elif c == x:
            raise _violation("Claim 2", f"{a0} has no occurrence in u2", u, (a0, x, y))
        else:
            if at(1) != a0:
                raise _violation("Claim 6", f"{format_word((a0, x, y, c, a0))} is not a prefix",
                                 u, (a0, c, x, y))
            state.assigned.append(c)
            j = 2
    else:
        state.assigned.append(at(0))
        j = 1
    k = 1
    a = state.assigned
    while True:
        prev, cur = a[k - 1], a[k]
        c = at(j)
        case = ("Induction Case 1" if prev is not None and cur is not None else
                "Induction Case 2" if cur is not None else
                "Induction Case 3" if prev is not None else None)
        if case is None:
            raise NotUnstableError(f"a_{k - 1} and a_{k} are both empty (induction hypothesis (iii))")
        if c is None:
            raise NotUnstableError(f"{case}: ran off the end of {format_word(u)}")
        if c == x:
            state.n = k
            break
        if cur is not None and c == cur:
            a.append(None)
            j += 1
        else:
            if c == y or c in a:
                raise _violation(case, f"unexpected letter {c} after the prefix of length {j}", u, (c, x, y))
            a.append(c)
            j += 1
            if cur is not None:
                if at(j) != cur:
                    raise _violation(case, f"second {cur} does not follow first {c}", u, (c, cur, x, y))
                j += 1
        k += 1
        state.cursor = len(dec.u1) + 2 + j
    n = state.n
    tail = body[j:]
    expected = (x, y) + ((a[n],) if a[n] is not None else ())
    if tail != expected:
        raise _violation("Induction Case (termination)",
                         f"suffix {format_word(tail)} is not {format_word(expected)}", u, tuple(tail) + (x, y))
    phi = _phi_for(n, a, x, y)
    if n == 1:
        n, phi = 2, _lift_w1(phi, x, y)
    if apply(phi, make_w(n)) != u:
        raise AssertionError(f"construction produced phi with w_{n}·phi != {format_word(u)}")
    return n, phi


# one elimination and the full derivation


@dataclass
class Elimination:
    pair: tuple[str, str]
    n: int
    phi: dict
    reductions: list
    step: DerivationStep


def eliminate_critical_pair(u: Word, v: Word) -> tuple[Word, DerivationTrace]:
    """Swap both xy factors of the leftmost critical pair by one w_n step."""
    e = elimination(u, v)
    return e.step.after, DerivationTrace(tuple(u), e.step.after, [e.step])


def elimination(u: Word, v: Word) -> Elimination:
    u, v = tuple(u), tuple(v)
    crit = find_critical_pair(u, v)
    if crit is None:
        raise NotUnstableError(f"{format_word(u)} = {format_word(v)} has no critical pair")
    pair = crit[0]
    x, y = pair
    decompose_adjacent(u, v, pair)
    r1 = reduce1_block(u, pair)
    d = decompose_adjacent(r1.reduced, None, pair)
    r2 = reduce2_trim(d.u1, d.u2, d.u3, x, y)
    r3 = reduce3_collapse(r2.reduced, pair)
    n, phi = build_phi(r3.reduced, pair)
    step = make_step(r3.reduced, w_identity(n), phi)
    for r in (r3, r2, r1):
        step = r.lift_step(step)
    if step.before != u:
        raise AssertionError("lifted step does not start at u")
    before, after = unstable_count(u, v), unstable_count(step.after, v)
    if after >= before:
        raise AssertionError(
            f"unstable pairs did not decrease ({before} -> {after}) rewriting {format_word(u)}")
    return Elimination(pair, n, step.substitution, [r1, r2, r3], step)


def _shift(trace: DerivationTrace, left: Word) -> DerivationTrace:
    steps = [DerivationStep(s.rule, s.direction, s.substitution, left + s.left, s.right,
                            left + s.before, left + s.after) for s in trace.steps]
    return DerivationTrace(left + trace.start, left + trace.end, steps)


def derive_core(u: Word, v: Word) -> DerivationTrace:
    """Derivation of a balanced 2-limited identity satisfied by M(V)."""
    cur = tuple(u)
    v = tuple(v)
    steps = []
    while cur != v:
        nxt, tr = eliminate_critical_pair(cur, v)
        steps += tr.steps
        cur = nxt
    return DerivationTrace(tuple(u), v, steps)


def derive(u: Word, v: Word, monoid: ReesMonoid | None = None) -> DerivationTrace | SatisfactionWitness:
    """A verified derivation of u = v from Sigma, or a witness that M(V) fails it."""
    u, v = tuple(u), tuple(v)
    m = monoid_V() if monoid is None else monoid
    witness = find_violation(m, Identity(u, v))
    if witness is not None:
        return witness
    if u == v:
        return DerivationTrace(u, v, [])
    order = cube_letters(u)
    if set(order) != set(cube_letters(v)):
        raise AssertionError("sides disagree on letters occurring more than twice")
    un, tu = normalize_cubes(u, order)
    vn, tv = normalize_cubes(v, order)
    k = 3 * len(order)
    prefix = un[:k]
    assert vn[:k] == prefix
    core = _shift(derive_core(un[k:], vn[k:]), prefix)
    trace = remove_cycles(tu.then(core).then(tv.reversed()))
    verdict = verify_trace(trace)
    if not verdict:
        raise AssertionError(f"derived trace failed verification at step {verdict.bad_step}: {verdict.reason}")
    return trace
