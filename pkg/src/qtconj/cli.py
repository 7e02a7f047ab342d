"""Command-line interface: ``qtconj <command> FILE ...``, JSON on stdout."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import (ParseError, QTError, VerificationFailed,
                     WindowExhausted)
from .lattice import (Presentation, canonical_presentation, central_lattice,
                      entry_orders, is_fgc, symbol_decomposition)
from .matlie import MorphismWord, TorusMatrix, mad_extension_test
from .qtorus import TorusElement
from .scalars import INFINITE, Scalar, parse_scalar

EXIT_OK, EXIT_DOMAIN, EXIT_VERIFY, EXIT_WINDOW = 0, 2, 3, 4


def _load_json(text: str, source: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: {exc.msg}", exc.lineno, exc.colno) from exc


def read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    return _load_json(text, path)


def load_presentation(path: str) -> Presentation:
    data = read_json(path)
    if not isinstance(data, dict):
        raise ParseError(f"{path}: presentation JSON must be an object", 1, 1)
    return Presentation.from_json(data)


def _json_or_file(arg: str):
    if os.path.exists(arg):
        return read_json(arg)
    return _load_json(arg, "--designate")


def _designated(P: Presentation, raw) -> list:
    if not isinstance(raw, list):
        raw = [raw]
    out = []
    for item in raw:
        if isinstance(item, str):
            out.append(parse_scalar(item, P.field))
        else:
            out.append(TorusElement.from_json(P, item))
    return out


def _orders_json(P: Presentation) -> dict:
    return {f"{i + 1},{j + 1}": ("Infinite" if o is INFINITE else o)
            for (i, j), o in entry_orders(P).items()}


# ---------------------------------------------------------------------------
# commands


def cmd_centre(args) -> tuple[dict, int]:
    return central_lattice(load_presentation(args.file)).to_json(), EXIT_OK


def cmd_fgc(args):
    P = load_presentation(args.file)
    return {"fgc": is_fgc(P), "entry_orders": _orders_json(P)}, EXIT_OK


def cmd_canonical(args):
    P = load_presentation(args.file)
    A, Pc = canonical_presentation(P)
    return {"A": [list(r) for r in A], "presentation": Pc.to_json(),
            "symbol_decomposition": symbol_decomposition(Pc).to_json()}, EXIT_OK


def cmd_specialize(args):
    from .specialize import certify, propose_prime
    P = load_presentation(args.file)
    P2 = load_presentation(args.file2) if args.file2 else None
    designated = _designated(P, _json_or_file(args.designate)) if args.designate else []
    forbidden = [d for d in designated if isinstance(d, Scalar)]
    forbidden += [c for d in designated if isinstance(d, TorusElement) for c in d.terms.values()]
    p, h = propose_prime(P, P2, args.ell, args.ell2, forbidden,
                         order_bound=args.order_bound, limit=args.prime_limit)
    cert = certify(P, P2, args.ell, args.ell2, designated, h)
    out = {"prime": p, **cert.to_json()}
    return out, EXIT_OK if cert.valid else EXIT_VERIFY


def cmd_mad_check(args):
    P = load_presentation(args.file)
    M = TorusMatrix.from_json(P, read_json(args.matrix))
    return mad_extension_test(M).to_json(), EXIT_OK


def cmd_conjugate(args):
    from .conjugacy import main_conjugacy
    P = load_presentation(args.file)
    w = MorphismWord.from_json(P, read_json(args.word), args.ell)
    res = main_conjugacy(w, None, args.t_max)
    return {"g": res.g.to_json(), "g_inv": res.g_inv.to_json(), "report": res.report}, EXIT_OK


def cmd_verify_lemmas(args):
    from .lemmas import run_suite, summary_table
    P = load_presentation(args.file)
    stats = run_suite([(os.path.basename(args.file), P)], trials=args.trials, seed=args.seed)
    print(summary_table(stats), file=sys.stderr)
    out = {name: {"cases": st.cases, "violations": [v for _, v in st.violations]}
           for name, st in stats.items()}
    ok = all(st.ok for st in stats.values())
    return {"ok": ok, "lemmas": out}, EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qtconj", description="Quantum-torus conjugacy toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("centre", help="central grading lattice")
    p.add_argument("file")
    p.set_defaults(fn=cmd_centre)

    p = sub.add_parser("fgc", help="finitely-generated-over-centre test")
    p.add_argument("file")
    p.set_defaults(fn=cmd_fgc)

    p = sub.add_parser("canonical", help="canonical presentation and symbol decomposition")
    p.add_argument("file")
    p.set_defaults(fn=cmd_canonical)

    p = sub.add_parser("specialize", help="propose and certify a specialization prime")
    p.add_argument("file")
    p.add_argument("file2", nargs="?")
    p.add_argument("--prime-limit", type=int, default=100000)
    p.add_argument("--order-bound", type=int, default=None)
    p.add_argument("--designate", help="JSON list (inline or file) of scalar literals / element JSON")
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--ell2", type=int, default=None)
    p.set_defaults(fn=cmd_specialize)

    p = sub.add_parser("mad-check", help="standard-MAD extension test for a diagonal matrix")
    p.add_argument("file")
    p.add_argument("--matrix", required=True)
    p.set_defaults(fn=cmd_mad_check)

    p = sub.add_parser("conjugate", help="run the conjugacy pipeline on a morphism word")
    p.add_argument("file")
    p.add_argument("--word", required=True)
    p.add_argument("--t-max", type=int, default=None,
                   help="degree window (default 2 * max entry degree + 4)")
    p.add_argument("--ell", type=int, default=None)
    p.set_defaults(fn=cmd_conjugate)

    p = sub.add_parser("verify-lemmas", help="randomized lemma suite on one presentation")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(fn=cmd_verify_lemmas)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out, code = args.fn(args)
    except WindowExhausted as exc:
        code, err = EXIT_WINDOW, exc
    except VerificationFailed as exc:
        code, err = EXIT_VERIFY, exc
    except QTError as exc:
        code, err = EXIT_DOMAIN, exc
    else:
        json.dump(out, sys.stdout, indent=1)
        sys.stdout.write("\n")
        return code
    payload = {"error": err.qualified_name, "message": str(err)}
    if isinstance(err, ParseError):
        payload.update(line=err.line, position=err.position)
    json.dump(payload, sys.stderr)
    sys.stderr.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
