"""Command line entry point.

Exit codes: 0 pass, 1 failure or counterexample, 2 usage, 3 budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .derivation import DerivationTrace, verify_trace
from .engine import NotUnstableError, derive, monoid_V
from .matching import (DEFAULT_BUDGET, BudgetExceeded, format_substitution, match_exact,
                       match_factor, stuck_irredundancy_report)
from .oracle import cross_check, rees_candidates, semantic_irredundancy_witness
from .rees import ReesMonoid, SatisfactionWitness, UndecidedError, find_violation, isoterm_witness
from .sigma import catalogue_U, catalogue_V, sigma_members
from .suites import SUITES, run_suite
from .words import (WordSyntaxError, canonical_form, format_word, parse_identity, parse_word,
                    reverse, word_stats)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout
        self.doc: dict = {}

    def line(self, text: str = ""):
        if self.fmt == "text":
            print(text, file=self.stream)

    def put(self, **kw):
        self.doc.update(kw)

    def close(self):
        if self.fmt == "json":
            print(json.dumps(self.doc, indent=2), file=self.stream)


def load_monoid(spec: str) -> ReesMonoid:
    """A JSON monoid file, "U", "V", or comma-separated generator words."""
    if spec == "V":
        return monoid_V()
    if spec == "U":
        return ReesMonoid(catalogue_U())
    path = Path(spec)
    if path.suffix == ".json" or path.is_file():
        return ReesMonoid.from_json(path.read_text())
    return ReesMonoid(parse_word(w.strip()) for w in spec.split(","))


def _witness_doc(w: SatisfactionWitness) -> dict:
    from .rees import format_element
    return {"substitution": {k: format_word(v) for k, v in w.substitution.items()},
            "lhs_value": format_element(w.lhs_value), "rhs_value": format_element(w.rhs_value)}


# verbs


def cmd_words_info(args, out: Output) -> int:
    w = parse_word(args.word)
    st = word_stats(w)
    out.line(f"word      {format_word(w)}")
    out.line(f"length    {len(w)}")
    out.line(f"content   {' '.join(sorted(st.content))}")
    out.line(f"occ       {' '.join(f'{a}:{n}' for a, n in sorted(st.occ.items()))}")
    out.line(f"linear    {' '.join(sorted(st.linear))}")
    out.line(f"limit     {st.limit}")
    out.line(f"canonical {format_word(canonical_form(w))}")
    out.line(f"reverse   {format_word(reverse(w))}")
    out.put(word=format_word(w), length=len(w), content=sorted(st.content), occ=dict(st.occ),
            linear=sorted(st.linear), limit=st.limit, canonical=format_word(canonical_form(w)),
            reverse=format_word(reverse(w)))
    return EXIT_OK


def cmd_monoid_build(args, out: Output) -> int:
    m = ReesMonoid(parse_word(w) for w in args.words)
    text = m.to_json(include_factors=args.factors)
    if args.output:
        Path(args.output).write_text(text)
        out.line(f"wrote {args.output}")
    else:
        out.line(text)
    out.line(f"elements {len(m)}")
    out.put(order=len(m), generators=[format_word(g) for g in m.generators], file=args.output)
    return EXIT_OK


def cmd_monoid_check(args, out: Output) -> int:
    m = load_monoid(args.monoid)
    ident = parse_identity(args.identity)
    w = find_violation(m, ident)
    out.put(identity=str(ident), satisfied=w is None)
    if w is None:
        out.line("SATISFIED")
        return EXIT_OK
    out.line(f"FAILS: {w}")
    out.put(witness=_witness_doc(w))
    return EXIT_FAIL


def cmd_monoid_isoterm(args, out: Output) -> int:
    m = load_monoid(args.monoid)
    w = parse_word(args.word)
    alt = isoterm_witness(m, w)
    out.put(word=format_word(w), isoterm=alt is None)
    if alt is None:
        out.line("ISOTERM")
        return EXIT_OK
    out.line(f"NOT AN ISOTERM: {format_word(w)} = {format_word(alt)} holds")
    out.put(witness=format_word(alt))
    return EXIT_FAIL


def cmd_sigma_emit(args, out: Output) -> int:
    ids = sigma_members(args.n)
    for s in ids:
        out.line(str(s))
    out.put(identities=[{"tag": s.tag, "lhs": format_word(s.lhs), "rhs": format_word(s.rhs)} for s in ids])
    return EXIT_OK


def cmd_sigma_catalogue(args, out: Output) -> int:
    if args.set == "U":
        words = [format_word(w) for w in catalogue_U()]
        for w in words:
            out.line(w)
        out.put(set="U", words=words)
    else:
        entries = catalogue_V()
        for e in entries:
            out.line(f"{format_word(e.word)}\t{e.label}")
        out.put(set="V", words=[{"label": e.label, "word": format_word(e.word)} for e in entries])
    return EXIT_OK


def cmd_match(args, out: Output) -> int:
    pattern, target = parse_word(args.pattern), parse_word(args.target)
    nonempty = [x for x in (args.require_nonempty or "").split(",") if x]
    if args.factor:
        results = match_factor(pattern, target, nonempty, args.budget)
    else:
        results = match_exact(pattern, target, nonempty, args.budget)
    for r in results:
        out.line(str(r) if args.factor else format_substitution(r.substitution))
    out.line(f"{len(results)} match(es)")
    out.put(matches=[{"substitution": {k: format_word(v) for k, v in r.substitution.items()},
                      "left": format_word(r.left), "right": format_word(r.right)} for r in results])
    return EXIT_OK if results else EXIT_FAIL


def cmd_derive(args, out: Output) -> int:
    if args.identity is None:
        if not args.verify:
            raise SystemExit("derive: give an identity, or --verify FILE for a stored trace")
        trace = DerivationTrace.from_json(Path(args.verify).read_text())
        verdict = verify_trace(trace, nmax=args.nmax)
        out.put(verified=verdict.ok, bad_step=verdict.bad_step, reason=verdict.reason)
        out.line("VERIFIED" if verdict else f"INVALID at step {verdict.bad_step}: {verdict.reason}")
        return EXIT_OK if verdict else EXIT_FAIL
    ident = parse_identity(args.identity)
    result = derive(ident.lhs, ident.rhs)
    if isinstance(result, SatisfactionWitness):
        out.line(f"COUNTEREXAMPLE: {result}")
        out.put(identity=str(ident), derivable=False, witness=_witness_doc(result))
        return EXIT_FAIL
    verdict = verify_trace(result, nmax=args.nmax)
    for k, s in enumerate(result.steps, 1):
        out.line(f"{k:3d}. {s}")
    out.line(f"{len(result)} step(s); " + ("verified" if verdict else f"INVALID: {verdict.reason}"))
    if args.trace:
        Path(args.trace).write_text(result.to_json())
        out.line(f"wrote {args.trace}")
    out.put(identity=str(ident), derivable=True, steps=len(result), verified=verdict.ok,
            trace=json.loads(result.to_json()))
    return EXIT_OK if verdict else EXIT_FAIL


def cmd_irredundant(args, out: Output) -> int:
    ids = sigma_members(args.nmax)
    report = stuck_irredundancy_report(ids, args.budget)
    items = []
    ok = True
    for r in report:
        entry = {"tag": r.identity.tag, "certificate": r.certified}
        line = str(r)
        if not r.certified:
            rest = [s for s in ids if s.tag != r.identity.tag]
            found = semantic_irredundancy_witness(r.identity, rest, args.max_order, args.nbound,
                                                  rees_candidates(args.rees_len))
            entry["semantic_witness"] = _describe_witness(found.witness)
            line += f"; semantic witness: {entry['semantic_witness'] or 'none found within bounds'}"
            ok &= found.witness is not None
        items.append(entry)
        out.line(line)
    out.put(nmax=args.nmax, members=items, complete=ok)
    return EXIT_OK if ok else EXIT_FAIL


def _describe_witness(w) -> str | None:
    if w is None:
        return None
    if isinstance(w, ReesMonoid):
        return "M({" + ", ".join(format_word(g) for g in w.generators) + "})"
    return f"order {w.order}: " + " / ".join(" ".join(map(str, row)) for row in w.rows())


def cmd_oracle_cross_check(args, out: Output) -> int:
    m = load_monoid(args.monoid)
    cc = cross_check(m, args.max_len, args.max_vars, args.budget)
    out.line(f"{cc.identities} identities compared, {len(cc.disagreements)} disagreement(s)")
    for d in cc.disagreements[:20]:
        out.line(f"  {d[0]} = {d[1]}: exact={d[2]} naive={d[3]}")
    out.put(identities=cc.identities, disagreements=[list(d) for d in cc.disagreements])
    return EXIT_OK if cc.agree else EXIT_FAIL


def cmd_oracle_witness(args, out: Output) -> int:
    ids = sigma_members(max(args.nbound, 2))
    sigma = next((s for s in ids if s.tag == args.sigma), None)
    if sigma is None:
        raise SystemExit(f"unknown Sigma tag {args.sigma!r}")
    rest = [s for s in ids if s.tag != sigma.tag]
    found = semantic_irredundancy_witness(sigma, rest, args.max_order, args.nbound,
                                          rees_candidates(args.rees_len), args.budget)
    w = found.witness
    out.put(sigma=sigma.tag, found=w is not None, nbound=args.nbound, checked=found.tables_checked,
            witness=None if w is None else (
                {"rees_generators": [format_word(g) for g in w.generators]} if isinstance(w, ReesMonoid)
                else {"order": w.order, "table": w.rows()}))
    if w is None:
        out.line(f"none found within bounds (order <= {args.max_order}, {found.tables_checked} monoids)")
        return EXIT_FAIL
    if isinstance(w, ReesMonoid):
        out.line(f"Rees quotient {_describe_witness(w)} with {len(w)} elements")
    else:
        out.line(f"table of order {w.order}:")
        for row in w.rows():
            out.line(" ".join(map(str, row)))
    return EXIT_OK


def cmd_verify(args, out: Output) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    reports = []
    for name in names:
        rep = run_suite(name, args.jobs)
        reports.append(rep.to_dict())
        ok &= rep.passed
        for it in rep.items:
            out.line(f"[{it.status.upper():4s}] {name}: {it.name} ({it.seconds:.2f}s)"
                     + (f" -- {it.detail}" if it.detail else ""))
        out.line(f"suite {name}: {'PASS' if rep.passed else 'FAIL'}")
    out.put(suites=reports, passed=ok)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reesbasis", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="verb", required=True)

    def budget(q):
        q.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    words = sub.add_parser("words").add_subparsers(dest="action", required=True)
    q = words.add_parser("info")
    q.add_argument("word")
    q.set_defaults(func=cmd_words_info)

    monoid = sub.add_parser("monoid").add_subparsers(dest="action", required=True)
    q = monoid.add_parser("build")
    q.add_argument("words", nargs="+")
    q.add_argument("-o", "--output")
    q.add_argument("--factors", action="store_true", help="store the factor list too")
    q.set_defaults(func=cmd_monoid_build)
    q = monoid.add_parser("check")
    q.add_argument("monoid", help="JSON file, U, V, or comma-separated words")
    q.add_argument("identity")
    q.set_defaults(func=cmd_monoid_check)
    q = monoid.add_parser("isoterm")
    q.add_argument("monoid")
    q.add_argument("word")
    q.set_defaults(func=cmd_monoid_isoterm)

    sigma = sub.add_parser("sigma").add_subparsers(dest="action", required=True)
    q = sigma.add_parser("emit")
    q.add_argument("--n", type=int, default=5)
    q.set_defaults(func=cmd_sigma_emit)
    q = sigma.add_parser("catalogue")
    q.add_argument("--set", choices=("U", "V"), default="V")
    q.set_defaults(func=cmd_sigma_catalogue)

    q = sub.add_parser("match")
    q.add_argument("pattern")
    q.add_argument("target")
    q.add_argument("--factor", action="store_true")
    q.add_argument("--require-nonempty", metavar="x,y")
    budget(q)
    q.set_defaults(func=cmd_match)

    q = sub.add_parser("derive")
    q.add_argument("identity", nargs="?")
    q.add_argument("--nmax", type=int)
    q.add_argument("--trace", metavar="OUT.json")
    q.add_argument("--verify", metavar="TRACE.json", help="re-check a stored trace")
    budget(q)
    q.set_defaults(func=cmd_derive)

    q = sub.add_parser("irredundant")
    q.add_argument("--nmax", type=int, default=7)
    q.add_argument("--max-order", type=int, default=4)
    q.add_argument("--nbound", type=int, default=3)
    q.add_argument("--rees-len", type=int, default=5)
    budget(q)
    q.set_defaults(func=cmd_irredundant)

    oracle = sub.add_parser("oracle").add_subparsers(dest="action", required=True)
    q = oracle.add_parser("cross-check")
    q.add_argument("--monoid", default="xyyx,xxyy")
    q.add_argument("--max-len", type=int, default=6)
    q.add_argument("--max-vars", type=int, default=3)
    budget(q)
    q.set_defaults(func=cmd_oracle_cross_check)
    q = oracle.add_parser("witness")
    q.add_argument("--sigma", required=True)
    q.add_argument("--max-order", type=int, default=4)
    q.add_argument("--nbound", type=int, default=3)
    q.add_argument("--rees-len", type=int, default=0, help="also try M({w}) for |w| up to this")
    budget(q)
    q.set_defaults(func=cmd_oracle_witness)

    q = sub.add_parser("verify")
    q.add_argument("--suite", choices=list(SUITES) + ["all"], required=True)
    q.add_argument("--jobs", type=int, default=1)
    q.set_defaults(func=cmd_verify)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    out = Output(args.format)
    try:
        code = args.func(args, out)
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (WordSyntaxError, UndecidedError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotUnstableError as exc:
        print(f"derivation failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except SystemExit as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    out.close()
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
