"""Command-line front end. Exit status: 0 success, 1 failing verdict, 2 input error."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import braidcore as bc
from . import complexes as cx
from . import stab
from .webalg import braid_euler_op


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _parse_gamma(text: str | None, N: int | None) -> bc.Coloring:
    if not text:
        raise InputError("--gamma is required")
    try:
        labels = tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError as exc:
        raise InputError(f"--gamma: {exc}") from exc
    N = max(labels + (0,)) if N is None else N
    if any(x > N for x in labels):
        raise InputError("N must be at least the largest color label")
    return bc.Coloring(labels, N)


def _parse_word(text: str, n: int) -> bc.BraidWord:
    try:
        return bc.BraidWord(n, tuple(int(t) for t in text.split()))
    except ValueError as exc:
        raise InputError(f"--word: {exc}") from exc


def _infinite(path: str, N: int | None = None):
    obj = _load_json(path)
    try:
        W, gamma = bc.load_infinite_word(obj)
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    if N is not None:
        gamma = bc.Coloring(gamma.labels, N)
    cert = bc.CompletenessCertificate.from_json(obj["certificate"]) if obj.get("certificate") else None
    return W, gamma, cert


def _cert(path: str | None, fallback=None):
    if path is None:
        return fallback
    return bc.CompletenessCertificate.from_json(_load_json(path))


def _emit(args, payload: dict, table_rows: list[dict] | None = None) -> None:
    if args.format == "table" and table_rows is not None:
        cols = list(table_rows[0]) if table_rows else []
        print("\t".join(cols))
        for row in table_rows:
            print("\t".join(_cell(row[c]) for c in cols))
        extra = {k: v for k, v in payload.items() if k != "steps" and not isinstance(v, (list, dict))}
        for k, v in extra.items():
            print(f"{k}\t{_cell(v)}")
    elif args.format == "table":
        for k, v in payload.items():
            print(f"{k}\t{_cell(v)}")
    else:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def _cell(v) -> str:
    if v is None:
        return "inf"
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return str(v)


# Subcommands ------------------------------------------------------------------------


def cmd_cs(args) -> int:
    gamma = _parse_gamma(args.gamma, args.N)
    _emit(args, {"gamma": list(gamma.labels), "colorSize": bc.color_size(gamma)})
    return 0


def cmd_purity(args) -> int:
    W, gamma, _ = _infinite(args.word, args.N)
    seq = bc.maximal_purity_sequence(W, gamma)
    _emit(args, {"entries": seq.take(args.steps), "head": list(seq.head),
                 "cycle": list(seq.cycle), "stride": seq.stride})
    return 0


def cmd_clasp(args) -> int:
    gamma = _parse_gamma(args.gamma, args.N)
    B = _parse_word(args.word, gamma.n)
    try:
        res = bc.find_clasp(B, gamma, args.budget)
    except bc.BudgetExhausted as exc:
        _emit(args, {"verdict": "BudgetExhausted", "detail": str(exc)})
        return 1
    _emit(args, {"word": list(res.word.letters), "position": res.position,
                 "moves": [list(m) for m in res.moves]})
    return 0


def cmd_certify(args) -> int:
    W, gamma, cert = _infinite(args.word, args.N)
    cert = _cert(args.cert, cert or bc.EMPTY_CERTIFICATE)
    try:
        ok = bc.verify_completeness_certificate(W, gamma, cert, args.budget)
    except bc.BudgetExhausted as exc:
        _emit(args, {"verdict": "BudgetExhausted", "detail": str(exc)})
        return 1
    except (bc.IntervalNotColorPure, bc.IncompatibleWithPeriod) as exc:
        _emit(args, {"verdict": "InvalidCertificate", "detail": str(exc)})
        return 1
    _emit(args, {"verdict": "Accepted" if ok else "Rejected"})
    return 0 if ok else 1


def cmd_euler(args) -> int:
    gamma = _parse_gamma(args.gamma, args.N)
    B = _parse_word(args.word, gamma.n)
    op = braid_euler_op(B, gamma, gamma.N)
    payload = op.to_json()
    payload["digest"] = op.digest(args.precision)
    _emit(args, payload)
    return 0


def cmd_skeleton(args) -> int:
    gamma = _parse_gamma(args.gamma, args.N)
    B = _parse_word(args.word, gamma.n)
    if not bc.is_color_pure(B, gamma) and args.mode != "full":
        raise InputError("word is not color-pure for this coloring")
    target = braid_euler_op(B, gamma, gamma.N)
    if args.mode == "cone":
        try:
            cp = cx.simplify_color_pure(B, gamma, args.budget)
        except bc.BudgetExhausted as exc:
            _emit(args, {"verdict": "BudgetExhausted", "detail": str(exc)})
            return 1
        payload = {"identity": cp.identity_term.to_json(), "X": cp.C.to_json(),
                   "eliminated": [t.to_json() for t in cp.eliminated], "log": cp.elimination_log,
                   "violations": cp.contract_violations(), "euler_ok": cp.euler() == target}
        ok = payload["euler_ok"] and not payload["violations"]
    else:
        sk = cx.posneg_skeleton(B, gamma, args.budget) if args.mode == "posneg" \
            else cx.braid_skeleton(B, gamma)
        payload = {"terms": sk.to_json(), "euler_ok": cx.euler_of_skeleton(sk, gamma.N) == target}
        ok = payload["euler_ok"]
    _emit(args, payload)
    return 0 if ok else 1


def _spec(path: str, cert_path: str | None, N: int | None, kind: str):
    W, gamma, cert = _infinite(path, N)
    cert = _cert(cert_path, cert)
    return stab.InverseSystemSpec(W, gamma, cert, kind)


def cmd_bound(args) -> int:
    spec = _spec(args.word, args.cert, args.N, args.kind)
    idx = stab.system_indices(spec, args.ell)
    if len(idx) < args.ell:
        raise InputError("fewer truncations than --ell")
    m = idx[args.ell - 1]
    dec = stab.twist_decomposition(spec.word, spec.gamma, spec.cert, m)
    if dec is None:
        raise InputError(f"truncation {m} falls inside a certificate interval")
    _emit(args, {"ell": args.ell, "m": m, "z": dec.z, "r": len(dec.betas), "b": stab.bound_b(dec)})
    return 0


def cmd_projector(args) -> int:
    gamma = _parse_gamma(args.gamma, args.N)
    rows = stab.projector_defects(gamma.n, gamma, gamma.N, args.steps)
    P = stab.projector_truncation(gamma.n, gamma, gamma.N, args.steps)
    _emit(args, {"steps": rows, "digest": P.digest(args.precision)}, rows)
    return 0


def cmd_stabilize(args) -> int:
    specA = _spec(args.a, args.cert_a, args.N, args.kind)
    specB = _spec(args.b, args.cert_b, args.N, args.kind)
    N = args.N if args.N is not None else specB.gamma.N
    try:
        rep = stab.stabilize(specA, specB, N, args.steps, args.precision, args.max_states)
    except stab.DimensionOverflow as exc:
        raise InputError(str(exc)) from exc
    _emit(args, rep.to_json(), rep.steps)
    return 0 if rep.verdict == "Converging" else 1


def cmd_bi(args) -> int:
    obj = _load_json(args.word)
    try:
        n = int(obj["n"])
        N = int(args.N if args.N is not None else obj["N"])
        left = bc.InfiniteBraidWord(n, tuple(obj["left"].get("prefix", ())), tuple(obj["left"]["period"]))
        right = bc.InfiniteBraidWord(n, tuple(obj["right"].get("prefix", ())), tuple(obj["right"]["period"]))
        core = bc.BraidWord(n, tuple(obj.get("core", ())))
        gamma = bc.Coloring(tuple(obj["gamma"]), N)
        gp = bc.Coloring(tuple(obj.get("gamma_prime", obj["gamma"])), N)
        Wb = stab.BiInfiniteWord(left, core, right, gamma, gp)
    except (KeyError, ValueError, TypeError, stab.ColoringMismatch) as exc:
        raise InputError(f"{args.word}: {exc}") from exc
    rep = stab.bi_infinite_analyze(Wb, N, args.steps, args.precision)
    _emit(args, rep)
    return 0 if rep["stabilizing"] and rep["shift_invariant"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="colortwist", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--N", type=int, default=None, help="ambient rank")
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--precision", "-M", type=int, default=stab.DEFAULT_PRECISION)
    common.add_argument("--budget", type=int, default=bc.DEFAULT_BUDGET)
    common.add_argument("--threads", type=int, default=1, help="accepted for compatibility; runs serially")
    common.add_argument("--steps", type=int, default=5)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("cs", cmd_cs, "color size of a coloring")
    sp.add_argument("--gamma")
    sp = add("purity", cmd_purity, "maximal purity sequence of an infinite word")
    sp.add_argument("--word", required=True)
    sp = add("clasp", cmd_clasp, "find a clasp by bounded braid-move search")
    sp.add_argument("--word", required=True)
    sp.add_argument("--gamma")
    sp = add("certify", cmd_certify, "check a completeness certificate")
    sp.add_argument("--word", required=True)
    sp.add_argument("--cert")
    sp = add("euler", cmd_euler, "Euler operator of a braid word")
    sp.add_argument("--word", required=True)
    sp.add_argument("--gamma")
    sp = add("skeleton", cmd_skeleton, "complex skeleton of a braid word")
    sp.add_argument("--word", required=True)
    sp.add_argument("--gamma")
    sp.add_argument("--mode", choices=("cone", "posneg", "full"), default="cone")
    sp = add("bound", cmd_bound, "stabilization bound b at one truncation")
    sp.add_argument("--word", required=True)
    sp.add_argument("--cert")
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--kind", choices=(stab.MAXIMAL, stab.TWIST), default=stab.TWIST)
    sp = add("projector", cmd_projector, "projector truncation defects")
    sp.add_argument("--gamma")
    sp = add("stabilize", cmd_stabilize, "compare two inverse systems")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--cert-a")
    sp.add_argument("--cert-b")
    sp.add_argument("--kind", choices=(stab.MAXIMAL, stab.TWIST), default=stab.TWIST)
    sp.add_argument("--max-states", type=int, default=stab.DEFAULT_MAX_STATES)
    sp = add("bi", cmd_bi, "bi-infinite word analysis")
    sp.add_argument("--word", required=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    for name in ("budget", "steps", "threads"):
        if getattr(args, name, 1) <= 0:
            print(f"error: --{name} must be positive", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, bc.BraidError, stab.BlockOverlap) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
