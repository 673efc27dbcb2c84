"""Command-line entry point: ``qcpseudo <subcommand> ...``.

Exit codes: 0 success, 1 unexpected failure, 2 usage or input error,
3 a computational guard was exceeded (the guard name is printed).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import sim
from .codes import (ConvCode, QcCode, free_distance_bounds, min_distance_bruteforce, truncated_check, unwrap,
                    wrap)
from .cone import build_cone, code_cone, cone_contains
from .errors import GuardExceeded
from .fixtures import FIXTURES, get_fixture
from .lpdecode import boundary_experiment, lambda_alpha_beta, lp_decode, parse_alpha_grid, rationalize_llr
from .mpi import TannerGraph, min_sum_decode, sum_product_decode
from .polys import NonnegPolyVec, dump_pcm, parse_nonneg_vec, parse_pcm, parse_scalar_vector, reduce_mod
from .pseudoweights import min_maxfrac_lp, min_pseudoweight, pw_bound_sequences
from .weights import MEASURES, format_value, weight_report


class UsageError(Exception):
    pass


# -- input helpers ---------------------------------------------------------------------

def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _load_matrix(args):
    if getattr(args, "fixture", None):
        try:
            return get_fixture(args.fixture, args.r if args.fixture == "ex11-qc" else None)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from exc
    return parse_pcm(_read(getattr(args, "pcm", None) or "-"))


def _load_code(args):
    """QcCode or ConvCode; ``--r`` wraps convolutional input (and re-wraps QC input)."""
    m = _load_matrix(args)
    code = QcCode(m) if m.modulus else ConvCode(m)
    r = getattr(args, "r", None)
    if r is not None and not (args.fixture == "ex11-qc"):
        base = unwrap(code) if isinstance(code, QcCode) else code
        code = wrap(base, r)
    return code


def _parse_window(text: str) -> tuple:
    try:
        j, i = (int(t) for t in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--window expects J,I, got {text!r}") from exc
    return j, i


def _block(args):
    """(scalar parity-check matrix, cone system) for block-level commands."""
    code = _load_code(args)
    if isinstance(code, QcCode):
        return code.H, code_cone(code), code
    if not getattr(args, "window", None):
        raise UsageError("convolutional input needs --window J,I (or --r to wrap it)")
    j, i = _parse_window(args.window)
    H = truncated_check(code, j, i).realized
    return H, build_cone(H), code


def _read_vector(args) -> list:
    if getattr(args, "vector", None):
        return parse_scalar_vector(args.vector)
    path = getattr(args, "ray", None) or getattr(args, "llr", None)
    if not path:
        raise UsageError("no vector given")
    return parse_scalar_vector(_read(path).replace("\n", " "))


def _read_omega(args):
    """Polynomial pseudo-codeword from --omega, or a scalar vector from --vector."""
    if getattr(args, "omega", None):
        return parse_nonneg_vec(_read(args.omega))
    if getattr(args, "vector", None):
        return parse_scalar_vector(args.vector)
    raise UsageError("give --omega FILE or --vector")


# -- output helpers --------------------------------------------------------------------

def _jsonable(v):
    if isinstance(v, Fraction):
        return {"exact": str(v), "value": float(v)}
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


class Out:
    def __init__(self, args):
        self.json = args.json
        self.command = args.command
        self.result = {}
        self.lines = []

    def line(self, text: str = ""):
        self.lines.append(text)

    def flush(self):
        if self.json:
            print(json.dumps({"command": self.command, "ok": True, "result": _jsonable(self.result)}, indent=2))
        else:
            for ln in self.lines:
                print(ln)


def _vec_text(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


# -- subcommands -----------------------------------------------------------------------

def cmd_unwrap(args, out):
    m = _load_matrix(args)
    if not m.modulus:
        raise UsageError("unwrap expects a QC matrix (r > 0)")
    res = dump_pcm(m.with_modulus(None))
    out.result = {"pcm": res}
    out.line(res.rstrip("\n"))


def cmd_wrap(args, out):
    m = _load_matrix(args)
    if args.r is None or args.r < 1:
        raise UsageError("wrap needs --r >= 1")
    c = ConvCode(m.with_modulus(None)) if m.modulus else ConvCode(m)
    res = dump_pcm(wrap(c, args.r).h)
    out.result = {"pcm": res}
    out.line(res.rstrip("\n"))


def cmd_dmin(args, out):
    H, _, _ = _block(args)
    res = min_distance_bruteforce(H, cap=args.cap)
    out.result = {"dmin": res.weight, "exceeds_cap": res.exceeds_cap, "codeword": res.codeword}
    if res.weight is None:
        out.line("no nonzero codeword" if not res.exceeds_cap else f"> {args.cap}")
    else:
        out.line(str(res.weight))


def cmd_dfree(args, out):
    code = _load_code(args)
    if not isinstance(code, ConvCode):
        code = unwrap(code)
    b = free_distance_bounds(code, args.lmax)
    out.result = {"lower": b.lower, "upper": b.upper, "mu": b.mu, "nu": b.nu, "d_free": b.d_free}
    out.line("l,lower,upper")
    for l, (lo, up) in enumerate(zip(b.lower, b.upper), start=1):
        out.line(f"{l},{'' if lo is None else lo},{'' if up is None else up}")
    if b.d_free is not None:
        out.line(f"# d_free = {b.d_free}")


def cmd_cone_check(args, out):
    code = _load_code(args)
    omega = _read_omega(args)
    if getattr(args, "window", None) and isinstance(code, ConvCode):
        H = truncated_check(code, *_parse_window(args.window)).realized
        if isinstance(omega, NonnegPolyVec):
            omega = omega.to_scalar(H.shape[1] // code.L)
        res = cone_contains(H, omega)
    else:
        if isinstance(omega, NonnegPolyVec) and isinstance(code, QcCode) and omega.degree >= code.r:
            omega = reduce_mod(omega, code.r)
        res = cone_contains(code, omega)
    out.result = {"member": res.member, "row": res.row, "violated": res.text}
    out.line("member" if res else f"not a member; violated row {res.row}: {res.text}")


def cmd_pw(args, out):
    omega = _read_omega(args)
    if isinstance(omega, NonnegPolyVec):
        if args.r:
            omega = reduce_mod(omega, args.r)
        vec = omega.coefficients() or [0]
    else:
        vec = omega
    rep = weight_report(vec)
    if args.measure:
        v = rep.value(args.measure)
        out.result = {args.measure: v}
        out.line(format_value(v))
        return
    out.result = rep.as_dict()
    for m in MEASURES:
        out.line(f"{m} {format_value(rep.value(m))}")


def cmd_minpw(args, out):
    _, cone, _ = _block(args)
    res = min_pseudoweight(cone, args.measure, method=args.method)
    out.result = {"measure": res.measure, "value": res.value, "ray": res.ray, "method": res.method}
    out.line(format_value(res.value))
    if args.verbose and res.ray is not None:
        out.line(f"# ray {_vec_text(res.ray)} via {res.method}")


def cmd_minmaxfrac(args, out):
    _, cone, _ = _block(args)
    res = min_maxfrac_lp(cone)
    out.result = {"value": res.value, "witness": res.witness}
    out.line(format_value(res.value))
    if args.verbose and res.witness is not None:
        out.line(f"# witness {_vec_text(res.witness)}")


def cmd_pw_bounds(args, out):
    code = _load_code(args)
    if not isinstance(code, ConvCode):
        code = unwrap(code)
    b = pw_bound_sequences(code, args.measure, args.lmax)
    out.result = {"measure": b.measure, "lower": b.lower, "upper": b.upper, "nu_lower": b.nu_lower,
                  "nu_upper": b.nu_upper, "upper_witness": b.upper_witness, "upper_witness_l": b.upper_witness_l}
    out.line("l,lower,upper")
    for l, (lo, up) in enumerate(zip(b.lower, b.upper), start=1):
        fmt = lambda v: "" if v is None else (str(v) if not isinstance(v, Fraction) else f"{float(v):.4f}")
        out.line(f"{l},{fmt(lo)},{fmt(up)}")


def cmd_lpdecode(args, out):
    H, _, _ = _block(args)
    llr = rationalize_llr(_read(args.llr).replace(",", " ").strip("()[] \n").split(), args.precision)
    res = lp_decode(H, llr)
    status = "INTEGRAL" if res.integral else "DECODE-FAILURE"
    out.result = {"omega": res.omega, "objective": res.objective, "integral": res.integral,
                  "status": status, "tie_broken": res.tie_broken}
    out.line(f"omega {_vec_text(res.omega)}")
    out.line(f"objective {res.objective}")
    out.line(status)


def cmd_alphabeta(args, out):
    H, _, _ = _block(args)
    ray = _read_vector(args)
    rep = boundary_experiment(H, ray, parse_alpha_grid(args.alphas), Fraction(args.beta), decode=not args.no_lp)
    out.result = {"rows": [{"alpha": r.alpha, "objective": r.objective, "winner": r.winner,
                            "argmin_consistent": r.argmin_consistent} for r in rep.rows],
                  "flips_at_half": rep.flips_at_half}
    out.line("alpha,objective,winner")
    for r in rep.rows:
        out.line(f"{float(r.alpha):g},{r.objective},{r.winner}")
    if not rep.globally_consistent:
        out.line("# note: another direction beats the ray at some alpha; the flip is local to this ray")


def _decode_one(algo, H, llr, max_iter):
    g = TannerGraph(H)
    if algo == "sp":
        return sum_product_decode(g, llr, max_iter)
    return min_sum_decode(g, llr, max_iter)


def cmd_decode(args, out):
    H, _, _ = _block(args)
    llr = [float(v) for v in _read(args.llr).replace(",", " ").strip("()[] \n").split()]
    res = _decode_one(args.algo, H, llr, args.max_iter)
    out.result = {"hard": res.hard, "iterations": res.iterations, "converged": res.converged,
                  "oscillations": res.oscillations}
    out.line("hard " + "".join(str(int(b)) for b in res.hard))
    out.line(f"iterations {res.iterations}")
    out.line("converged" if res.converged else "not converged")


def cmd_alphabeta_mpi(args, out):
    H, _, _ = _block(args)
    ray = _read_vector(args)
    betas = parse_alpha_grid(args.betas)
    rows = []
    out.line("alpha,beta,iterations")
    for a in parse_alpha_grid(args.alphas):
        for b in betas:
            lam = [float(v) for v in lambda_alpha_beta(ray, a, b)]
            res = _decode_one(args.algo, H, lam, args.max_iter)
            it = res.iterations if res.converged and not res.hard.any() else -1
            rows.append({"alpha": a, "beta": b, "iterations": it})
            out.line(f"{float(a):g},{float(b):g},{it}")
    out.result = {"rows": rows, "not_zero_marker": -1}


def cmd_ber(args, out):
    code = _load_code(args)
    if args.decoder == "sw":
        target = code if isinstance(code, ConvCode) else unwrap(code)
    else:
        if isinstance(code, ConvCode):
            if not args.window:
                raise UsageError("block decoders on a convolutional code need --window J,I")
            target = truncated_check(code, *_parse_window(args.window)).realized
        else:
            target = code
    pts = sim.run_ber(target, args.decoder, args.snr, args.min_frame_errors, args.max_trials, args.seed,
                      channel=args.channel, max_iter=args.max_iter, window=args.sw_window,
                      stream_blocks=args.blocks)
    out.result = {"points": [{"snr": p.snr, "trials": p.trials, "bit_errors": p.bit_errors,
                              "frame_errors": p.frame_errors, "ber": p.ber} for p in pts],
                  "seed": args.seed}
    out.line("snr,trials,bit_errors,frame_errors,ber")
    for p in pts:
        out.line(p.csv())


def cmd_fixtures(args, out):
    if not args.name:
        out.result = {"fixtures": sorted(FIXTURES)}
        for name in sorted(FIXTURES):
            out.line(name + ("(r)" if name == "ex11-qc" else ""))
        return
    try:
        m = get_fixture(args.name, args.r)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from exc
    out.result = {"name": args.name, "pcm": dump_pcm(m)}
    out.line(dump_pcm(m).rstrip("\n"))


# -- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON document")
    common.add_argument("--threads", type=int, default=1, help="accepted for compatibility; runs single-threaded")

    code = argparse.ArgumentParser(add_help=False)
    src = code.add_mutually_exclusive_group()
    src.add_argument("--pcm", help=".pcm file ('-' for stdin, the default)")
    src.add_argument("--fixture", help=f"built-in matrix: {', '.join(sorted(FIXTURES))}")
    code.add_argument("--r", type=int, help="circulant size (wraps convolutional input)")
    code.add_argument("--window", help="J,I: use the truncated matrix H^(J,I) of a convolutional code")

    p = argparse.ArgumentParser(prog="qcpseudo", description="QC-LDPC / LDPC convolutional code pseudo-codeword tools")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, parents=(common, code)):
        sp = sub.add_parser(name, parents=list(parents), help=help_)
        sp.set_defaults(func=func)
        return sp

    add("unwrap", cmd_unwrap, "QC polynomial matrix -> convolutional matrix")
    add("wrap", cmd_wrap, "convolutional matrix -> QC matrix modulo X^r - 1")
    sp = add("dmin", cmd_dmin, "minimum Hamming distance")
    sp.add_argument("--cap", type=int, help="only search codewords of weight <= cap")
    sp = add("dfree-bounds", cmd_dfree, "column/row distance bounds on the free distance (CSV)")
    sp.add_argument("--lmax", type=int, default=8)
    for name, func, hlp in (("cone-check", cmd_cone_check, "fundamental cone membership"),):
        sp = add(name, func, hlp)
        sp.add_argument("--omega", help="pseudo-codeword file, one component per line")
        sp.add_argument("--vector", help="scalar vector such as (1,1,0)")
    sp = add("pw", cmd_pw, "pseudo-weights of a vector", parents=(common,))
    sp.add_argument("--omega", help="pseudo-codeword file, one component per line")
    sp.add_argument("--vector", help="scalar vector such as (4,5,9,8)")
    sp.add_argument("--r", type=int, help="project the polynomial vector modulo X^r - 1 first")
    sp.add_argument("--measure", choices=MEASURES)
    sp = add("minpw", cmd_minpw, "minimum pseudo-weight over the fundamental cone")
    sp.add_argument("--measure", choices=[m for m in MEASURES if m != "frac"], default="awgnc")
    sp.add_argument("--method", choices=("auto", "rays"), default="auto")
    sp.add_argument("-v", "--verbose", action="store_true")
    sp = add("minmaxfrac", cmd_minmaxfrac, "minimum max-fractional weight by LP")
    sp.add_argument("-v", "--verbose", action="store_true")
    sp = add("pw-bounds", cmd_pw_bounds, "truncated / bounded pseudo-weight sequences (CSV)")
    sp.add_argument("--measure", choices=[m for m in MEASURES if m != "frac"], default="awgnc")
    sp.add_argument("--lmax", type=int, default=5)
    sp = add("lpdecode", cmd_lpdecode, "exact LP decoding")
    sp.add_argument("--llr", required=True, help="file with one LLR per entry (exact decimals)")
    sp.add_argument("--precision", type=int, help="cap LLR denominators")
    sp = add("alphabeta", cmd_alphabeta, "LP decision boundary along lambda(alpha, beta) (CSV)")
    sp.add_argument("--ray", required=True)
    sp.add_argument("--alphas", default="0:1:0.05")
    sp.add_argument("--beta", default="1")
    sp.add_argument("--no-lp", action="store_true", help="skip the LP solves, compare objectives only")
    sp = add("decode", cmd_decode, "sum-product or min-sum decoding")
    sp.add_argument("--algo", choices=("sp", "ms"), default="sp")
    sp.add_argument("--llr", required=True)
    sp.add_argument("--max-iter", type=int, default=50)
    sp = add("alphabeta-mpi", cmd_alphabeta_mpi,
             "iterations to reach the zero codeword along lambda(alpha, beta); -1 = not reached (CSV)")
    sp.add_argument("--ray", required=True)
    sp.add_argument("--alphas", default="0:1:0.05")
    sp.add_argument("--betas", default="1")
    sp.add_argument("--algo", choices=("sp", "ms"), default="sp")
    sp.add_argument("--max-iter", type=int, default=1000)
    sp = add("ber", cmd_ber, "Monte Carlo error rates (CSV)")
    sp.add_argument("--decoder", choices=sim.DECODERS, default="sp")
    sp.add_argument("--snr", default="0:2:1", help="Es/N0 sweep in dB (or p / eps), a:b:step or a,b,c")
    sp.add_argument("--channel", choices=("awgn", "bsc", "bec"), default="awgn")
    sp.add_argument("--min-frame-errors", type=int, default=100)
    sp.add_argument("--max-trials", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-iter", type=int, default=50)
    sp.add_argument("--sw-window", type=int, help="sliding-window size in blocks")
    sp.add_argument("--blocks", type=int, help="terminated stream length in blocks")
    sp = add("fixtures", cmd_fixtures, "list or print built-in matrices", parents=(common,))
    sp.add_argument("name", nargs="?")
    sp.add_argument("--r", type=int)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Out(args)
    try:
        args.func(args, out)
    except GuardExceeded as exc:
        _fail(args, f"guard exceeded: {exc.guard}" + (f" ({exc.detail})" if exc.detail else ""), exc.guard)
        return 3
    except (UsageError, ValueError, KeyError) as exc:
        _fail(args, f"error: {exc}")
        return 2
    out.flush()
    return 0


def _fail(args, msg, guard=None):
    if args.json:
        print(json.dumps({"command": args.command, "ok": False, "error": msg, "guard": guard}))
    print(f"qcpseudo {args.command}: {msg}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
