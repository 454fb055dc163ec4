"""Command-line interface.

Exit codes: 0 all checks pass, 1 a check failed (witness printed),
2 refusal (uncertified degree or missing hypothesis), 64 usage or input
errors.
"""

import argparse
import os
import sys

from .dsl import DSLError, build_sequence, load_presentation, load_sequence
from .report import Refusal, Report

EX_USAGE = 64
CORPUS = os.path.join(os.path.dirname(os.path.abspath(__file__)), "corpus")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EX_USAGE)


def resolve(path):
    """Local paths win; `corpus/...` falls back to the packaged corpus."""
    if os.path.exists(path):
        return path
    norm = path.replace("\\", "/")
    if norm.startswith("corpus/"):
        cand = os.path.join(CORPUS, norm[len("corpus/"):])
        if os.path.exists(cand):
            return cand
    raise UsageError(f"file not found: {path}")


def parse_window(text):
    """'6' or 'LO..HI'; the length window is max(|LO|, |HI|)."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
            if lo > hi:
                raise ValueError
            return max(abs(lo), abs(hi))
        v = int(text)
        if v < 0:
            raise ValueError
        return v
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad window {text!r} (use N or LO..HI)") from None


def _nonneg(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return v


def build_parser():
    p = _Parser(prog="hopfcert", description="Certificates for finitely presented Hopf algebras.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def common(sp):
        sp.add_argument("--format", choices=("text", "kv"), default="text")
        return sp

    sp = common(sub.add_parser("complete", help="complete the relations to a rewriting system"))
    sp.add_argument("file")
    sp.add_argument("--degree", type=_nonneg, default=None, help="completion cap")

    sp = common(sub.add_parser("basis", help="normal-word basis dimensions"))
    sp.add_argument("file")
    sp.add_argument("--degree", type=_nonneg, default=3)
    sp.add_argument("--words", action="store_true", help="list the normal words")

    sp = common(sub.add_parser("check-hopf", help="Hopf axioms on seeded samples"))
    sp.add_argument("file")
    sp.add_argument("--degree", type=_nonneg, default=3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=_nonneg, default=100)

    sp = common(sub.add_parser("check-exact", help="exact sequence battery"))
    sp.add_argument("file")
    sp.add_argument("--degree", type=_nonneg, default=None)
    sp.add_argument("--slack", type=_nonneg, default=None)

    sp = common(sub.add_parser("ext", help="Ext certificate from the shipped resolution"))
    sp.add_argument("file")
    sp.add_argument("--i", type=_nonneg, required=True, dest="index")
    sp.add_argument("--window", type=parse_window, default=6)
    sp.add_argument("--slack", type=_nonneg, default=None)

    sp = common(sub.add_parser("verify-chain", help="cochain-level identity checks"))
    sp.add_argument("file")
    sp.add_argument("--identity", default="all",
                    choices=("all", "star", "harpoon", "phi", "uv", "hmod", "tor0", "adjoint"))
    sp.add_argument("--q", type=_nonneg, default=0)
    sp.add_argument("--degree", type=_nonneg, default=2)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=_nonneg, default=100)
    sp.add_argument("--rank", type=_nonneg, default=2, help="rank of N for the phi check")
    sp.add_argument("--corrupt", action="store_true", help="run the negative-control variants")

    sp = common(sub.add_parser("duality", help="duality-fact calculus"))
    dsub = sp.add_subparsers(dest="action", metavar="ACTION")
    dsub.required = True
    dp = common(dsub.add_parser("derive", help="run the pipeline over a manifest"))
    dp.add_argument("manifest")
    dp.add_argument("--window", type=parse_window, default=6)
    dp.add_argument("--degree", type=_nonneg, default=None)
    dp.add_argument("--ledger", default=None, help="write the fact ledger to this file")
    dp = common(dsub.add_parser("explain", help="provenance tree of a fact"))
    dp.add_argument("algebra")
    dp.add_argument("--manifest", default="corpus/manifest.txt")
    dp.add_argument("--window", type=parse_window, default=6)

    sp = common(sub.add_parser("coaction-check", help="comodule-algebra check of a coaction block"))
    sp.add_argument("file")
    sp.add_argument("--degree", type=_nonneg, default=4)
    return p


# commands

def cmd_complete(args):
    from .rewrite import complete
    path = resolve(args.file)
    pf = load_presentation(path)
    A = pf.presentation
    rs = A.rewrite
    if args.degree is not None:
        try:
            rs = complete(A.relations, A.alphabet, A.field, args.degree)
        except ValueError as e:
            raise UsageError(str(e)) from None
    rep = Report(f"completion {A.name}")
    rep.note("status", rs.status)
    rep.note("rules", len(rs.rules))
    for k, r in enumerate(rs.rules, 1):
        rep.note(f"rule{k}", rs.fmt_rule(r))
    rep.add("confluent_to_cap", rs.status.confluent or rs.status.bound is not None, str(rs.status))
    return rep


def cmd_basis(args):
    from .rewrite import degree_basis
    pf = load_presentation(resolve(args.file))
    A = pf.presentation
    rep = Report(f"basis {A.name}")
    try:
        b = degree_basis(A.rewrite, args.degree)
        dims = [0] * (args.degree + 1)
        for w in b.basis:
            dims[len(w)] += 1
        rep.note("degree", args.degree)
        rep.note("dims", " ".join(map(str, dims)))
        rep.note("total", len(b.basis))
        if args.words:
            for n in range(args.degree + 1):
                rep.note(f"words{n}", " ".join(A.alphabet.fmt_word(w) or "1" for w in b.basis if len(w) == n))
    except Refusal as e:
        rep.refuse(e)
    return rep


def cmd_check_hopf(args):
    from .hopf import SweedlerContext, check_hopf_axioms
    pf = load_presentation(resolve(args.file), strict=False)
    A = pf.presentation
    ctx = SweedlerContext(A, args.degree, seed=args.seed, samples=args.samples)
    rep = check_hopf_axioms(A, ctx)
    for k, issue in enumerate(A.issues, 1):
        rep.note(f"construction_issue{k}", issue)
    return rep


def _sequence(path, slack=None):
    sf = load_sequence(resolve(path))
    return sf, build_sequence(sf, slack)


def cmd_check_exact(args):
    from .exactseq import exactness_battery
    _, seq = _sequence(args.file, args.slack)
    return exactness_battery(seq, args.degree)


def _resolution(pf):
    from .homcalc import Resolution
    if pf.resolution is None:
        raise Refusal(f"{pf.name} ships no resolution block")
    return Resolution.from_block(pf.presentation, pf.resolution)


def cmd_ext(args):
    from .homcalc import ext_certificate, verify_resolution
    pf = load_presentation(resolve(args.file), strict=False)
    rep = Report(f"ext {pf.name}")
    try:
        res = _resolution(pf)
        check = verify_resolution(res, args.window, args.slack)
        rep.merge(check, "resolution")
        if not check.passed:
            return rep
        cert = ext_certificate(res, args.index, args.window, args.slack)
        rep.merge(cert.report())
    except Refusal as e:
        rep.refuse(e)
    return rep


def cmd_verify_chain(args):
    from . import homcalc
    from .exactseq import b_membership, tor0_iso_check
    from .hopf import SweedlerContext, adjoint_stability
    sf, seq = _sequence(args.file)
    ctx = SweedlerContext(seq.A, args.degree, seed=args.seed, samples=args.samples)
    rep = Report(f"verify-chain {seq.name}")
    rep.note("identity", args.identity)
    c = args.corrupt
    held = {}

    def res():
        if "r" not in held:
            held["r"] = _resolution(sf.ext)
        return held["r"]

    def with_res(fn, title):
        def go():
            try:
                r = res()
            except Refusal as e:
                sub = Report(f"{title} {seq.name}")
                sub.refuse(e)
                return sub
            return fn(r)
        return go

    def phi():
        try:
            r = res()
        except Refusal:
            r = None
        return homcalc.phi_map_check(seq, args.rank, ctx, res=r, q=args.q, corrupt=c)

    runs = {
        "star": with_res(lambda r: homcalc.star_action_check(seq, r, args.q, ctx, corrupt=c), "star action"),
        "harpoon": with_res(lambda r: homcalc.harpoon_action_check(seq, r, args.q, ctx, corrupt=c), "harpoon action"),
        "phi": phi,
        "uv": lambda: homcalc.uv_iso_check(seq, ctx, corrupt=c),
        "hmod": with_res(lambda r: homcalc.hmod_iso_check(seq, r, args.q, ctx, corrupt=c), "hmod iso"),
        "tor0": lambda: tor0_iso_check(seq, args.rank, args.degree + 1, corrupt=c),
        "adjoint": lambda: _adjoint(seq, ctx, c, adjoint_stability, b_membership),
    }
    names = list(runs) if args.identity == "all" else [args.identity]
    for n in names:
        sub = runs[n]()
        rep.merge(sub, n)
        rep.note(f"{n}.status", sub.status)
    return rep


def adjoint_control_sampler(seq, ctx):
    """Negative control: multiples of a witness letter, which lies outside i(B)."""
    A = seq.A
    g = A.gen(seq.witness[-1])

    def sample(rng):
        return g.scale(A.field.canonical(rng.randint(1, 5)))
    return sample


def _adjoint(seq, ctx, corrupt, adjoint_stability, b_membership):
    A = seq.A
    D = 2 * A.antipode_growth() * ctx.max_degree + 2

    def member(x):
        return b_membership(seq, x, max(D, x.degree()))
    sampler = adjoint_control_sampler(seq, ctx) if corrupt else seq.b_sampler(ctx, 1)
    rep = adjoint_stability(A, member, ctx, sampler)
    if corrupt:
        rep.note("variant", "corrupted (negative control)")
    return rep


def cmd_duality(args):
    from .pipeline import derive
    if args.action == "derive":
        store, rep = derive(resolve(args.manifest), args.window, args.degree)
        if args.ledger:
            with open(args.ledger, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(store.ledger_text())
        return rep
    store, rep = derive(resolve(args.manifest), args.window)
    if args.algebra not in store.facts:
        out = Report(f"explain {args.algebra}")
        out.refuse(f"no duality fact for {args.algebra}")
        return out
    return _Text(store.explain(args.algebra), rep.exit_code())


class _Text:
    def __init__(self, text, code):
        self.text_ = text
        self.code = code

    def render(self, fmt="text"):
        return self.text_

    def exit_code(self):
        return self.code


def cmd_coaction(args):
    from .coaction import coaction_check
    pf = load_presentation(resolve(args.file), strict=False)
    if pf.coaction is None:
        rep = Report(f"coaction {pf.name}")
        rep.refuse(f"{pf.name} ships no coaction block")
        return rep
    return coaction_check(pf.presentation, pf.var_alphabet, pf.coaction.images, args.degree)


COMMANDS = {
    "complete": cmd_complete,
    "basis": cmd_basis,
    "check-hopf": cmd_check_hopf,
    "check-exact": cmd_check_exact,
    "ext": cmd_ext,
    "verify-chain": cmd_verify_chain,
    "duality": cmd_duality,
    "coaction-check": cmd_coaction,
}


def run_command(argv, out=None, err=None):
    """Run one command; returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EX_USAGE
    try:
        rep = COMMANDS[args.command](args)
    except (UsageError, DSLError, OSError) as e:
        err.write(f"hopfcert: error: {e}\n")
        return EX_USAGE
    except Refusal as e:
        rep = Report(args.command)
        rep.refuse(e)
    out.write(rep.render(getattr(args, "format", "text")))
    return rep.exit_code()


def main(argv=None):
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
