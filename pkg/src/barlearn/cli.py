"""Command-line interface.

Exit codes: 0 success or positive verdict, 1 negative verdict, 2 usage or
parse error, 3 limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from .assistant import (
    LimitExceeded,
    TaConfig,
    AlphabetTooSmall,
    learn_bar_language,
    learn_unknown_alphabet,
    minimal_extension,
    minimal_extension_up,
    representative,
)
from .automata import (
    BarNftaBottomUp,
    Signature,
    literal_member_tree,
    literal_member_word,
    literal_member_up,
)
from .closure import (
    ClosureBoundError,
    alpha_member,
    close,
    closure_bound,
    data_member_global,
    data_member_local,
    register_names,
)
from .formats import format_automaton, format_letters, parse_automaton, parse_letters
from .generators import (
    letters_over,
    make_rng,
    random_nfa,
    random_nfta,
    random_tree,
    random_up,
    random_word,
)
from .nominal import (
    BarTree,
    ParseError,
    UltPeriodicWord,
    alpha_eq_string,
    alpha_eq_tree,
    alpha_eq_up,
    format_nf,
    format_nf_tree,
    format_tree,
    format_up,
    format_word,
    nf_string,
    nf_tree,
    parse_tree,
    parse_up,
    parse_word,
)
from .teacher import AdversaryConfig, SimulatedTeacher, sim_eq

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class SessionReport:
    membership_queries: int
    equivalence_queries: int
    restarts: int
    final_alphabet: list
    learned_automaton: str
    wall_time_ms: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


def parse_value(text: str, kind: str = "auto"):
    """Parse a word, ultimately periodic word (contains ``;``) or tree (contains ``.``)."""
    if kind == "auto":
        kind = "up" if ";" in text else "tree" if "." in text else "word"
    if kind == "up":
        return parse_up(text)
    if kind == "tree":
        return parse_tree(text)
    return parse_word(text)


def format_value(x) -> str:
    if isinstance(x, UltPeriodicWord):
        return format_up(x)
    if isinstance(x, BarTree):
        return format_tree(x)
    return format_word(x)


def _kind_of(x) -> str:
    return "up" if isinstance(x, UltPeriodicWord) else "tree" if isinstance(x, BarTree) else "word"


def _read_automaton(path: str, kind: str):
    return parse_automaton(Path(path).read_text(), "buchi" if kind == "buchi" else "word")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_nf(args) -> int:
    x = parse_value(args.input, args.kind)
    if isinstance(x, UltPeriodicWord):
        raise UsageError(
            "ultimately periodic words have no canonical normal form; "
            "normalisation does not preserve ultimate periodicity"
        )
    print(format_nf_tree(nf_tree(x)) if isinstance(x, BarTree) else format_nf(nf_string(x)))
    return EXIT_OK


def cmd_alpha_eq(args) -> int:
    x, y = parse_value(args.left, args.kind), parse_value(args.right, args.kind)
    if _kind_of(x) != _kind_of(y):
        raise UsageError(f"cannot compare a {_kind_of(x)} with a {_kind_of(y)}")
    check = {"up": alpha_eq_up, "tree": alpha_eq_tree, "word": alpha_eq_string}[_kind_of(x)]
    same = check(x, y)
    print("equivalent" if same else "not equivalent")
    return EXIT_OK if same else EXIT_NO


def cmd_closure(args) -> int:
    a = _read_automaton(args.automaton, args.kind)
    target = parse_letters(args.target) if args.target is not None else a.alphabet
    closed = close(a, target, name_dropping=not args.maximal_only)
    k = len(register_names(a.alphabet))
    pool = len(set(register_names(a.alphabet)) | {l.name for l in target})
    n = a.n_states if not isinstance(a, BarNftaBottomUp) else a.n_states + 1
    print(
        f"source states {a.n_states}, closure states {closed.n_states}, "
        f"bound {closure_bound(n, k, pool)}",
        file=sys.stderr,
    )
    _emit(format_automaton(closed), args.output)
    return EXIT_OK


def cmd_member(args) -> int:
    a = _read_automaton(args.automaton, args.kind)
    x = parse_value(args.input, "up" if args.kind == "buchi" else "auto")
    if args.alpha:
        ok = alpha_member(a, x)
    elif isinstance(x, UltPeriodicWord):
        ok = literal_member_up(a, x)
    elif isinstance(x, BarTree):
        ok = literal_member_tree(a, x)
    else:
        ok = literal_member_word(a, x)
    print("accept" if ok else "reject")
    return EXIT_OK if ok else EXIT_NO


def cmd_data_member(args) -> int:
    a = _read_automaton(args.automaton, "word")
    u = parse_value(args.input)
    if isinstance(u, UltPeriodicWord):
        raise UsageError("data membership is defined for finite words and trees")
    check = data_member_global if args.global_freshness else data_member_local
    try:
        ok = check(a, u, max_size=args.max_size)
    except ValueError as err:
        raise LimitExceeded(str(err)) from err
    print("accept" if ok else "reject")
    return EXIT_OK if ok else EXIT_NO


def cmd_learn(args) -> int:
    hidden = _read_automaton(args.automaton, "word")
    kind = "tree" if isinstance(hidden, BarNftaBottomUp) else "word"
    if args.kind and args.kind != kind:
        raise UsageError(f"automaton file holds a {kind} automaton")
    adversary = AdversaryConfig("rename" if args.adversary == "rename" else "off", args.seed)
    teacher = SimulatedTeacher(hidden, adversary)
    signature = hidden.signature if kind == "tree" else None
    start = time.perf_counter()
    if args.discover_alphabet:
        config = TaConfig(seed=args.seed, max_restarts=args.max_restarts)
        result = learn_unknown_alphabet(teacher, kind, config, signature)
    else:
        alphabet = parse_letters(args.alphabet) if args.alphabet is not None else hidden.alphabet
        config = TaConfig(alphabet, seed=args.seed)
        try:
            result = learn_bar_language(teacher, alphabet, kind, config, signature)
        except AlphabetTooSmall as small:
            print(
                f"alphabet too small for counterexample {format_value(small.witness)}",
                file=sys.stderr,
            )
            return EXIT_NO
    elapsed = int((time.perf_counter() - start) * 1000)
    if sim_eq(teacher.target, result.automaton) is not None:
        raise AssertionError("learned automaton disagrees with the teacher")
    _emit(format_automaton(result.automaton), args.output)
    report = SessionReport(
        membership_queries=result.stats.membership_count,
        equivalence_queries=result.stats.equivalence_count,
        restarts=result.stats.restarts,
        final_alphabet=[str(l) for l in sorted(result.alphabet)],
        learned_automaton=args.output or "-",
        wall_time_ms=elapsed,
    )
    if args.stats:
        Path(args.stats).write_text(report.to_json())
    print(
        f"learned {result.automaton.n_states} states over {{{format_letters(result.alphabet)}}}: "
        f"{report.membership_queries} MQ, {report.equivalence_queries} EQ, "
        f"{report.restarts} restarts",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_represent(args) -> int:
    x = parse_value(args.input)
    rep = representative(x, parse_letters(args.alphabet))
    if rep is None:
        print("none")
        return EXIT_NO
    print(format_value(rep))
    return EXIT_OK


def cmd_extend(args) -> int:
    x = parse_value(args.input)
    alphabet = parse_letters(args.alphabet)
    if isinstance(x, UltPeriodicWord):
        extended = minimal_extension_up(x, alphabet)
    else:
        extended = minimal_extension(x, alphabet)
    print(format_letters(extended))
    return EXIT_OK


def cmd_random(args) -> int:
    rng = make_rng(args.seed)
    names = [chr(ord("a") + i) for i in range(args.names)]
    letters = letters_over(names)
    sig = Signature.of(args.signature)
    out = []
    if args.kind in ("nfa", "buchi"):
        a = random_nfa(rng, letters, args.states, args.density, buchi=args.kind == "buchi")
        out.append(format_automaton(a))
    elif args.kind == "nfta":
        out.append(format_automaton(random_nfta(rng, sig, letters, args.states)))
    else:
        for _ in range(args.count):
            if args.kind == "string":
                x = random_word(rng, letters, int(rng.integers(0, args.length + 1)))
            elif args.kind == "up":
                x = random_up(rng, letters, args.length, args.length)
            else:
                x = random_tree(rng, sig, letters, args.depth)
            out.append(format_value(x) + "\n")
    _emit("".join(out), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="barlearn", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    kinds = ("auto", "word", "tree", "up")

    p = sub.add_parser("nf", help="De Bruijn normal form of a word or tree")
    p.add_argument("input")
    p.add_argument("--kind", choices=kinds, default="auto")
    p.set_defaults(func=cmd_nf)

    p = sub.add_parser("alpha-eq", help="decide α-equivalence")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--kind", choices=kinds, default="auto")
    p.set_defaults(func=cmd_alpha_eq)

    p = sub.add_parser("closure", help="close an automaton under α-equivalence")
    p.add_argument("automaton")
    p.add_argument("--target", help="target letters, e.g. 'a b |a |b' (default: own alphabet)")
    p.add_argument("--kind", choices=("word", "buchi", "tree"), default="word")
    p.add_argument("--maximal-only", action="store_true", help="keep only maximal register maps")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("member", help="literal or α-membership")
    p.add_argument("automaton")
    p.add_argument("input")
    p.add_argument("--kind", choices=("word", "buchi", "tree"), default="word")
    p.add_argument("--alpha", action="store_true", help="membership in the bar language")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("data-member", help="membership of a data word (local freshness)")
    p.add_argument("automaton")
    p.add_argument("input", help="names separated by spaces, or a tree")
    p.add_argument("--global", dest="global_freshness", action="store_true")
    p.add_argument("--max-size", type=_positive, default=12)
    p.set_defaults(func=cmd_data_member)

    p = sub.add_parser("learn", help="learn the bar language of a hidden automaton")
    p.add_argument("automaton")
    p.add_argument("--kind", choices=("word", "tree"))
    group = p.add_mutually_exclusive_group()
    group.add_argument("--alphabet", help="fixed learning alphabet (default: hidden alphabet)")
    group.add_argument("--discover-alphabet", action="store_true")
    p.add_argument("--adversary", choices=("off", "rename"), default="off")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-restarts", type=_positive, default=32)
    p.add_argument("--stats", help="write the session report as JSON")
    p.add_argument("-o", "--output", help="write the learned automaton here")
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("represent", help="least α-variant over an alphabet")
    p.add_argument("input")
    p.add_argument("--alphabet", required=True)
    p.set_defaults(func=cmd_represent)

    p = sub.add_parser("extend", help="smallest alphabet extension admitting a variant")
    p.add_argument("input")
    p.add_argument("--alphabet", default="")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("random", help="seeded random words, trees and automata")
    p.add_argument("--kind", choices=("string", "tree", "up", "nfa", "buchi", "nfta"), required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--names", type=_positive, default=2)
    p.add_argument("--length", type=int, default=5)
    p.add_argument("--depth", type=_positive, default=3)
    p.add_argument("--states", type=_positive, default=3)
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--signature", default="f/2 c/0")
    p.add_argument("--count", type=_positive, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_random)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, UsageError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (LimitExceeded, ClosureBoundError) as err:
        print(f"limit exceeded: {err}", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main())
