"""The identity system Sigma and the word catalogues U and V."""
from __future__ import annotations

import re
from dataclasses import dataclass

from .words import Identity, Word, canonical_form, parse_word, reverse

APERIODIC_TAGS = ("aperiodic-1", "aperiodic-2", "aperiodic-3")

_APERIODIC = {
    "aperiodic-1": ("xt1xt2x", "xxxt1t2"),
    "aperiodic-2": ("xxxt1t2", "t1t2xxx"),
    "aperiodic-3": ("xxx", "xxxx"),
}


def make_u(n: int) -> Word:
    """x1 x0 x2 x1 ... xn x(n-1)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    out: list[str] = []
    for k in range(1, n + 1):
        out += [f"x{k}", f"x{k - 1}"]
    return tuple(out)


def make_w(n: int) -> Word:
    if n < 1:
        raise ValueError("n must be at least 1")
    mid = ("z1", "x", "y", "z2")
    return ("x0",) + mid + make_u(n) + mid + (f"x{n}",)


def make_w_prime(n: int) -> Word:
    swap = {"x": "y", "y": "x"}
    return tuple(swap.get(a, a) for a in make_w(n))


def w_identity(n: int) -> Identity:
    return Identity(make_w(n), make_w_prime(n), f"w_{n}")


def aperiodic_trio() -> list[Identity]:
    return [Identity(parse_word(l), parse_word(r), tag) for tag, (l, r) in _APERIODIC.items()]


def sigma_members(n_max: int) -> list[Identity]:
    """Aperiodic trio first, then w_n = w'_n for 2 <= n <= n_max."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    return aperiodic_trio() + [w_identity(n) for n in range(2, n_max + 1)]


_W_TAG = re.compile(r"w_(\d+)")


def sigma_rule(tag: str) -> Identity:
    """Resolve a rule tag ("aperiodic-2", "w_5", ...) to its identity."""
    if tag in _APERIODIC:
        l, r = _APERIODIC[tag]
        return Identity(parse_word(l), parse_word(r), tag)
    m = _W_TAG.fullmatch(tag)
    if m and int(m.group(1)) >= 2:
        return w_identity(int(m.group(1)))
    raise KeyError(f"no member of Sigma is tagged {tag!r}")


def w_degeneracy_substitution(n: int) -> dict[str, Word]:
    """Substitution carrying w_n onto w_1 (and w'_n onto w'_1) for n >= 2."""
    theta: dict[str, Word] = {f"x{i}": () for i in range(n + 1)}
    theta.update({"z1": ("x0", "z1"), "z2": ("z2", "x1"), "x": ("x",), "y": ("y",)})
    return theta


# catalogues

U_WORDS = ("xyyx", "xxyy", "xtyxy", "xytxy", "xyxty", "xyzyxz", "zxyzyx")

V_EXTRA = ("xxyy", "xyzyxz", "zxyzyx")

V_BASE = (
    ("1.1", "atxyaxy"),
    ("2.1", "abaxybxy"),
    ("2.2", "abxyaxyb"),
    ("3.1", "abbxyaxy"),
    ("3.2", "abxybaxy"),
    ("3.3", "xyabbaxy"),
    ("4.1", "abxyacbcxy"),
    ("5.1", "axybcbacxy"),
    ("5.2", "axybbcacxy"),
    ("5.3", "axybbaccxy"),
    ("5.4", "axybbacxyc"),
    ("6.1", "axybcabxyc"),
    ("7.1", "axybcabdcxyd"),
    ("7.2", "abxyacbddxyc"),
    ("7.3", "abxyacbdxycd"),
    ("7.4", "axybcabdcdxy"),
    ("8.1", "xyabcadbecdexy"),
    ("9.1", "xydcdabcaebexy"),
    ("9.2", "dxycdabcaebexy"),
    ("9.3", "dxycdabcaebxye"),
)

V_SIZE = 37


@dataclass(frozen=True)
class CatalogueEntry:
    word: Word
    group: str  # "1".."9", or "U" for xxyy, xyzyxz, zxyzyx
    index: int
    reversed: bool = False

    @property
    def label(self) -> str:
        if self.group == "U":
            return f"U.{self.index}"
        return f"{self.group}.{self.index}" + ("R" if self.reversed else "")


def catalogue_U() -> list[Word]:
    return [parse_word(w) for w in U_WORDS]


def catalogue_V() -> list[CatalogueEntry]:
    entries: list[CatalogueEntry] = []
    seen: set[Word] = set()

    def add(e: CatalogueEntry):
        c = canonical_form(e.word)
        if c not in seen:
            seen.add(c)
            entries.append(e)

    for k, w in enumerate(V_EXTRA, 1):
        add(CatalogueEntry(parse_word(w), "U", k))
    for label, w in V_BASE:
        g, i = label.split(".")
        word = parse_word(w)
        add(CatalogueEntry(word, g, int(i)))
        add(CatalogueEntry(reverse(word), g, int(i), reversed=True))
    if len(entries) != V_SIZE:
        raise AssertionError(f"catalogue V has {len(entries)} words, expected {V_SIZE}")
    return entries


def catalogue_V_words() -> list[Word]:
    return [e.word for e in catalogue_V()]


def self_reverse_labels() -> list[str]:
    return [
        label for label, w in V_BASE
        if canonical_form(reverse(parse_word(w))) == canonical_form(parse_word(w))
    ]


_CANON_INDEX: dict[Word, CatalogueEntry] | None = None


def lookup_catalogue(w: Word) -> CatalogueEntry | None:
    """Catalogue entry equal to ``w`` up to renaming of letters, if any."""
    global _CANON_INDEX
    if _CANON_INDEX is None:
        _CANON_INDEX = {canonical_form(e.word): e for e in catalogue_V()}
    return _CANON_INDEX.get(canonical_form(w))
