"""Command-line front end.

Exit status: 0 everything verified, 1 a verification failure was found,
2 bad input (unreadable file, invalid set, unsupported size, bad flags).
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import core, kscolour, ksgame, magicsquare, nlbox, quantumstrat

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _emit(doc, fmt="json", text=None):
    if fmt == "text" and text is not None:
        print(text)
    else:
        print(json.dumps(doc, indent=2, default=str))


def _report_text(report: core.VerificationReport) -> str:
    lines = [f"{report.game}: {report.cases_won}/{report.cases_total} cases won"]
    for f in report.failures[:20]:
        lines.append(f"  FAIL inputs={f['inputs']} branch={f['branch']} violated={','.join(f['violated'])}")
    if len(report.failures) > 20:
        lines.append(f"  ... {len(report.failures) - 20} more")
    return "\n".join(lines)


def _finish(report: core.VerificationReport, fmt: str) -> int:
    _emit(report.to_document(), fmt, _report_text(report))
    return EXIT_OK if report.all_won else EXIT_FAIL


def _parse_permutation(text):
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"--permutation must be a comma-separated list of basis indices, got {text!r}") from None


def _load_set(args) -> kscolour.KSSet:
    if getattr(args, "builtin", False) or args.set in (None, "builtin"):
        ks = kscolour.builtin_cabello18()
    else:
        try:
            ks = kscolour.load_ks_set(Path(args.set))
        except OSError as exc:
            raise InputError(f"cannot read {args.set}: {exc.strerror}") from None
    if getattr(args, "permutation", None):
        ks = ks.permuted(_parse_permutation(args.permutation))
    return ks


def _is_builtin(args) -> bool:
    return bool(getattr(args, "builtin", False) or args.set in (None, "builtin"))


def cmd_ks_verify(args) -> int:
    ks = _load_set(args)
    if _is_builtin(args) and not args.permutation:
        quad = ksgame.builtin_quad_4d()
    else:
        try:
            quad = ksgame.synthesize_quad(ks)
        except ksgame.SynthesisError as exc:
            raise InputError(str(exc)) from None
    return _finish(ksgame.verify_quad(quad), args.format)


def cmd_ks_colour(args) -> int:
    ks = _load_set(args)
    count = kscolour.count_valid_colourings(ks, mode=args.mode)
    repair = kscolour.contextual_repair_search(ks, mode=args.mode)
    suff = ksgame.check_sufficient_condition(ks)
    doc = {
        "vectors": ks.n,
        "bases": ks.r,
        "mode": args.mode,
        "colourings": count,
        "parity_witness": kscolour.parity_witness(ks),
        "repair_list": [list(ks.vectors[v]) for v in repair],
        "p": suff.p,
        "k": suff.k,
        "m_candidates": [list(ks.vectors[v]) for v in suff.flip],
        "sufficient_condition": suff.satisfied,
        "failed_clause": suff.clause,
    }
    text = "\n".join([
        f"{ks.n} vectors, {ks.r} bases ({args.mode})",
        f"valid colourings: {count}",
        f"parity witness: {doc['parity_witness']}",
        f"single-vector repairs: {len(repair)} " + " ".join(str(tuple(v)) for v in doc["repair_list"]),
        f"p = {suff.p}, k = {suff.k}, M = {[tuple(v) for v in doc['m_candidates']]}",
        f"sufficient condition: {'holds' if suff.satisfied else 'fails (' + str(suff.clause) + ')'}",
    ])
    _emit(doc, args.format, text)
    return EXIT_OK


def _classical_search_report(n: int) -> core.VerificationReport:
    if n != 3:
        raise InputError("classical-search enumerates deterministic strategies for n = 3 only")
    rows, cols = magicsquare.best_deterministic_strategy(3)
    game = magicsquare.magic_game_spec(3)
    strategy = core.Strategy(alice=lambda x, _: rows[x - 1], bob=lambda y, _: cols[y - 1])
    resource = lambda x, y: [core.ResourceBranch(0, Fraction(1), None, None)]
    return core.verify_exhaustive(game, strategy, resource, {"n": 3, "strategy": "classical-search"})


def cmd_magic(args) -> int:
    n = args.n
    magicsquare.check_size(n)
    if args.action == "impossible":
        proof = magicsquare.classical_impossibility(n)
        doc = proof.to_document()
        holds = proof.parity_verdict and proof.exhaustive_verdict is not False
        text = f"n={n}: no {n}x{n} bit matrix has even rows and odd columns (parity {proof.row_total_parity} vs {proof.column_total_parity})"
        if proof.matrices_checked:
            text += (f"\n{proof.matrices_valid}/{proof.matrices_checked} matrices valid; best deterministic pair wins "
                     f"{proof.best_deterministic_wins}/{proof.input_pairs} of {proof.strategy_pairs_checked} pairs")
        _emit(doc, args.format, text)
        return EXIT_OK if holds else EXIT_FAIL
    if args.strategy == "nlbox":
        report = magicsquare.magic_verify_nlbox(n)
    elif args.strategy == "quantum":
        if n == 3:
            report = quantumstrat.quantum_verify_n3()
        else:
            report = quantumstrat.quantum_verify_odd(n, args.low_alice, args.low_bob)
    else:
        report = _classical_search_report(n)
    return _finish(report, args.format)


def _simulation_setup(args):
    if args.game == "magic":
        if args.n is None:
            raise InputError("--game magic needs --n")
        n = args.n
        magicsquare.check_size(n)
        game = magicsquare.magic_game_spec(n)
        if args.strategy == "nlbox":
            return game, magicsquare.nlbox_strategy(n), magicsquare.nlbox_magic_resource(n)
        if args.strategy == "quantum":
            # n = 3 is the same rule with every input above n - 3
            return game, quantumstrat.quantum_strategy_odd(n), quantumstrat.quantum_resource_odd(n)
        raise InputError(f"strategy {args.strategy!r} is not available for the magic-square game")
    if args.strategy != "nlbox":
        raise InputError("the impossible-colouring game supports --strategy nlbox only")
    ks = _load_set(args)
    quad = ksgame.builtin_quad_4d() if _is_builtin(args) and not args.permutation else ksgame.synthesize_quad(ks)
    return ksgame.ks_game_spec(ks), ksgame.quad_strategy(quad), ksgame.quad_resource(quad)


def cmd_simulate(args) -> int:
    if args.rounds < 1:
        raise InputError("--rounds must be at least 1")
    game, strategy, resource = _simulation_setup(args)
    stats = core.simulate(game, strategy, resource, args.rounds, args.seed)
    doc = {"game": game.name, "strategy": args.strategy, "seed": args.seed, **stats.to_document()}
    _emit(doc, args.format, f"{game.name} [{args.strategy}] seed={args.seed}: "
                            f"{stats.wins}/{stats.rounds} won, win rate {stats.win_rate:.6f}")
    return EXIT_OK if stats.wins == stats.rounds else EXIT_FAIL


def cmd_box(args) -> int:
    if args.check == "chsh":
        pr = nlbox.chsh_value(nlbox.pr_box())
        local = max(nlbox.chsh_value(b) for b in nlbox.local_deterministic_boxes())
        doc = {
            "pr_box": str(pr),
            "local_deterministic_max": str(local),
            "uniform_box": str(nlbox.chsh_value(nlbox.uniform_box())),
            "tsirelson_bound": nlbox.TSIRELSON_BOUND,
        }
        ok = pr == nlbox.PR_BOX_CHSH and local == nlbox.LOCAL_BOUND
        text = f"CHSH: PR box {pr}, best local deterministic {local}, quantum bound {nlbox.TSIRELSON_BOUND:.6f}"
    else:
        boxes = {"pr_box": nlbox.pr_box(), "uniform_box": nlbox.uniform_box()}
        boxes.update({f"local_{i}": b for i, b in enumerate(nlbox.local_deterministic_boxes())})
        results = {name: nlbox.no_signalling_check(b) for name, b in boxes.items()}
        doc = {name: r.ok for name, r in results.items()}
        ok = all(doc.values())
        text = f"no-signalling: PR box {'pass' if doc['pr_box'] else 'FAIL'}; " \
               f"{sum(doc.values())}/{len(doc)} boxes pass"
    _emit(doc, args.format, text)
    return EXIT_OK if ok else EXIT_FAIL


def _add_set_args(p, permutation=True):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--builtin", action="store_true", help="bundled 18-vector 4D set (default)")
    src.add_argument("--set", metavar="FILE", help="KS-set JSON document")
    if permutation:
        p.add_argument("--permutation", metavar="ORDER", help="basis order, e.g. 8,0,1,2,3,4,5,6,7")


def _add_format(p):
    p.add_argument("--format", choices=("json", "text"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ptgames", description="Pseudo-telepathy game verifier")
    sub = parser.add_subparsers(dest="command", required=True)

    ks = sub.add_parser("ks", help="impossible-colouring game")
    ks_sub = ks.add_subparsers(dest="ks_command", required=True)
    p = ks_sub.add_parser("verify", help="verify the single-box strategy")
    _add_set_args(p)
    _add_format(p)
    p.set_defaults(func=cmd_ks_verify)
    p = ks_sub.add_parser("colour", help="colourability, repairs and the sufficient condition")
    _add_set_args(p)
    p.add_argument("--mode", choices=("exhaustive", "backtrack"), default="exhaustive")
    _add_format(p)
    p.set_defaults(func=cmd_ks_colour)

    p = sub.add_parser("magic", help="odd-size magic-square game")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--strategy", choices=("nlbox", "quantum", "classical-search"), default="nlbox")
    p.add_argument("--low-alice", type=int, choices=(1, 2, 3), default=1,
                   help="unitary Alice applies on inputs 1..n-3 (quantum, n >= 5)")
    p.add_argument("--low-bob", type=int, choices=(1, 2, 3), default=1)
    p.add_argument("action", choices=("verify", "impossible"))
    _add_format(p)
    p.set_defaults(func=cmd_magic)

    p = sub.add_parser("simulate", help="seeded random play")
    p.add_argument("--game", choices=("magic", "ks"), required=True)
    p.add_argument("--n", type=int)
    _add_set_args(p)
    p.add_argument("--strategy", choices=("nlbox", "quantum"), default="nlbox")
    p.add_argument("--rounds", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    _add_format(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("box", help="correlation-box diagnostics")
    p.add_argument("--check", choices=("chsh", "nosignalling"), required=True)
    _add_format(p)
    p.set_defaults(func=cmd_box)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:  # KSSetError, MagicSizeError, SynthesisError included
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
