"""Command-line entry point.

Exit codes: 0 success, 2 malformed input, 3 timeout or fuel exhausted,
4 space budget violated, 5 verification failed.
"""

from __future__ import annotations

import argparse
import itertools
import sys
import warnings
from pathlib import Path

from . import __version__
from .abstract import PRECONDITION, check_universal_op_form, check_universal_pairing_form
from .automata import build_universal_fa, class_size, mutate, verify_universal_fa
from .codec import (
    KINDS,
    CodecError,
    Scheme,
    codec_as_dfst,
    config_tokens,
    decode_config,
    decode_program,
    encode_config,
    encode_program,
    program_tokens,
)
from .formats import (
    format_word,
    parse_config,
    parse_instance_file,
    parse_machine_file,
    parse_rules_file,
    parse_word,
)
from .machine import DomainError, FuelExhausted, MachineError, computed_function, reachable_finals
from .resource import Budget, ExpressionError, eval_g, fit_overhead, measure_time_overhead, parse_g, run_space_bounded
from .rewriting import derivable
from .transducer import transduce
from .universal import build_untm, build_utm, simulate_universal, simulate_universal_nondet

OK, MALFORMED, TIMEOUT, BUDGET, FAILED = 0, 2, 3, 4, 5


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", MALFORMED) from None


def _machine(path: str):
    return parse_machine_file(_read(path))


# -- commands ------------------------------------------------------------------


def cmd_encode(args, out):
    m = _machine(args.machine)
    sch = Scheme.for_machine(args.scheme, m)
    if args.what == "program":
        code = encode_program(sch, m)
    else:
        if args.config is None:
            raise CliError("--config is required with --what config", MALFORMED)
        code = encode_config(sch, parse_config(args.config))
    if args.dfst:
        # same code, produced by the transducer instead of the direct encoder
        tokens = program_tokens(m.canonical_rules()) if args.what == "program" else config_tokens(parse_config(args.config))
        code = transduce(codec_as_dfst(sch, "encode", args.what), tokens).text
    print(code, file=out)
    return OK


def cmd_decode(args, out):
    m = _machine(args.machine)
    sch = Scheme.for_machine(args.scheme, m)
    code = args.code if args.code is not None else sys.stdin.read().strip()
    if args.what == "program":
        for r in decode_program(sch, code):
            print(f"rule {r.from_state} {r.read} -> {r.to_state} {r.write} {r.move}", file=out)
    else:
        print(decode_config(sch, code), file=out)
    return OK


def cmd_run(args, out):
    m = _machine(args.machine)
    w = parse_word(args.input)
    if m.deterministic:
        result = computed_function(m, w, args.fuel)
        print(format_word(result) if result is not None else "undefined", file=out)
        return OK
    finals = reachable_finals(m, w, args.fuel)
    for word in sorted(finals):
        print(format_word(word), file=out)
    if not finals:
        print("undefined", file=out)
    return OK


def cmd_urun(args, out):
    m = _machine(args.machine)
    w = parse_word(args.input)
    if args.nondet:
        search = simulate_universal_nondet(m, w, args.fuel, utm=build_untm())
        if args.trace:
            # breadth-first search has no single checkpoint sequence to stream
            print(f"checkpoints={search.checkpoints}", file=out)
        for word in sorted(search.finals):
            print(f"result={format_word(word)}", file=out)
        if not search.finals:
            print("result=undefined", file=out)
        print(f"u_steps={search.u_steps}", file=out)
        return OK
    run = simulate_universal(m, w, args.fuel, build_utm())
    if args.trace:
        for cp in run.checkpoints:
            print(f"step={cp.u_step} config={cp.decoded}", file=out)
    print(f"outcome={run.outcome}", file=out)
    print(f"result={format_word(run.result) if run.result is not None else 'undefined'}", file=out)
    print(f"u_steps={run.u_steps}", file=out)
    if run.outcome == "timeout":
        return TIMEOUT
    if run.outcome == "corrupted":
        return FAILED
    return OK


def cmd_bounds(args, out):
    m = _machine(args.machine)
    budget = Budget.of(args.g)
    run = run_space_bounded(m, parse_word(args.input), budget, args.fuel)
    verdict = "violation" if run.outcome == "violation" else "ok"
    line = f"c_g={budget.c_g} r_g={budget.r_g} peak={run.peak_cells} limit={run.limit} verdict={verdict}"
    if run.violation_step is not None:
        line += f" step={run.violation_step}"
    print(line, file=out)
    if verdict == "violation":
        return BUDGET
    return TIMEOUT if run.outcome == "timeout" else OK


def cmd_overhead(args, out):
    g = parse_g(args.g)
    files = sorted(Path(args.corpus).glob("*.tm"))
    if not files:
        raise CliError(f"no *.tm machine files in {args.corpus}", MALFORMED)
    entries = []
    for path in files:
        m = parse_machine_file(path.read_text())
        if not m.deterministic:
            print(f"warning: {path.name} is nondeterministic; skipped", file=sys.stderr)
            continue
        for x in range(1, args.max_len + 1):
            for w in itertools.product(range(1, m.num_symbols + 1), repeat=x):
                entries.append((m, w))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rows = measure_time_overhead(entries, g, args.fuel)
    for wrn in caught:
        print(f"warning: {wrn.message}", file=sys.stderr)
    worst = {}
    for _, x, t, _ in rows:
        worst[x] = max(worst.get(x, 0), t)
    print("x\tt_U\tg(x)", file=out)
    for x in sorted(worst):
        print(f"{x}\t{worst[x]}\t{eval_g(g, x)}", file=out)
    fit = fit_overhead(rows)
    print("# fit none" if fit is None else f"# fit C={fit[0]} d={fit[1]}", file=out)
    return OK


def cmd_fa_universal(args, out):
    print(f"class_size={class_size(args.k, args.alphabet)}", file=out)
    u = build_universal_fa(args.k, args.alphabet)
    if args.mutate:
        u = mutate(u)
    print(f"states={u.num_states}", file=out)
    if not args.verify:
        return OK
    report = verify_universal_fa(args.k, args.alphabet, args.max_len, u)
    print(f"checked={report.checked}", file=out)
    if report.counterexample:
        code, word, expected = report.counterexample
        print(f"counterexample code={code} word={word!r} expected={'accept' if expected else 'reject'}", file=out)
    print(f"verdict={'ok' if report.ok else 'fail'}", file=out)
    return OK if report.ok else FAILED


def cmd_sts(args, out):
    s = parse_rules_file(_read(args.rules), extra=args.source + args.target)
    answer = derivable(s, args.source, args.target, args.fuel)
    print(answer, file=out)
    return TIMEOUT if answer == "unknown" else OK


def cmd_check(args, out):
    system, cls = parse_instance_file(_read(args.instance))
    check = check_universal_op_form if args.form == "op" else check_universal_pairing_form
    verdict = check(system, cls, args.nmax)
    if verdict.status == PRECONDITION:
        raise CliError(f"precondition violated: {verdict.message}", MALFORMED)
    if verdict.counterexample:
        name, x, y, kind = verdict.counterexample
        print(f"counterexample relation={name} x={x} y={y} direction={kind}", file=out)
    print(f"verdict={verdict.status}", file=out)
    return OK if verdict.ok else FAILED


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unimach", description="Universal machines and their encodings.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def command(name, func, help_text):
        sp = sub.add_parser(name, help=help_text, description=help_text)
        sp.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
        sp.set_defaults(func=func)
        return sp

    for name, func, text in (
        ("encode", cmd_encode, "Encode a program or configuration."),
        ("decode", cmd_decode, "Decode a program or configuration code."),
    ):
        sp = command(name, func, text)
        sp.add_argument("--scheme", choices=KINDS, required=True)
        sp.add_argument("--what", choices=("program", "config"), required=True)
        sp.add_argument("--machine", required=True, help="machine file")
        if name == "encode":
            sp.add_argument("--config", help="configuration as 'left|q|right', e.g. 's1|q2|s2 s1'")
            sp.add_argument("--dfst", action="store_true", help="produce the code with the transducer")
        else:
            sp.add_argument("--code", help="code to decode (default: standard input)")

    sp = command("run", cmd_run, "Run a machine directly.")
    sp.add_argument("--machine", required=True)
    sp.add_argument("--input", required=True, help="word such as 's1 s2'")
    sp.add_argument("--fuel", type=int, default=10**6)

    sp = command("urun", cmd_urun, "Run a machine through the universal machine.")
    sp.add_argument("--machine", required=True)
    sp.add_argument("--input", required=True)
    sp.add_argument("--nondet", action="store_true", help="use the nondeterministic universal machine")
    sp.add_argument("--fuel", type=int, default=10**6, help="U steps (deterministic) or simulated steps (--nondet)")
    sp.add_argument("--trace", action="store_true")

    sp = command("bounds", cmd_bounds, "Universal run under a space budget g(|w|) + r_g.")
    sp.add_argument("--machine", required=True)
    sp.add_argument("--input", required=True)
    sp.add_argument("--g", required=True, help="complexity expression, e.g. '2*x'")
    sp.add_argument("--fuel", type=int, default=10**6)

    sp = command("overhead", cmd_overhead, "Measure universal running time against g.")
    sp.add_argument("--corpus", required=True, help="directory of *.tm machine files")
    sp.add_argument("--g", required=True)
    sp.add_argument("--max-len", type=int, default=4)
    sp.add_argument("--fuel", type=int, default=10**6)

    sp = command("fa-universal", cmd_fa_universal, "Universal DFA for k-state automata.")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--alphabet", required=True)
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--max-len", type=int, default=5)
    sp.add_argument("--mutate", action="store_true", help=argparse.SUPPRESS)

    sp = command("sts", None, "Semi-Thue systems.")
    sts_sub = sp.add_subparsers(dest="sts_command", required=True)
    dp = sts_sub.add_parser("derive", help="Decide derivability within a number of steps.")
    dp.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    dp.add_argument("--rules", required=True)
    dp.add_argument("--from", dest="source", required=True)
    dp.add_argument("--to", dest="target", required=True)
    dp.add_argument("--fuel", type=int, default=10)
    dp.set_defaults(func=cmd_sts)

    sp = command("check-universality", cmd_check, "Check a universality instance.")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--form", choices=("op", "pairing"), required=True)
    sp.add_argument("--nmax", type=int, default=1)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except FuelExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return TIMEOUT
    except (CodecError, DomainError, MachineError, ExpressionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return MALFORMED


if __name__ == "__main__":
    sys.exit(main())
