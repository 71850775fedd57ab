"""Command-line front end.

Data (CSV, alist) goes to stdout or the configured output file; diagnostics
go to stderr.  Exit codes: 0 success, 1 decode reported Failure, 2 usage
error, 3 data error.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import channel as chan
from . import excess_lab as lab
from . import linear_code as lc
from . import lp_decoder as lpd
from . import witness as wit
from .errors import LplabError
from .rationals import rat

EXIT_OK = 0
EXIT_DECODE_FAILURE = 1
EXIT_USAGE = 2
EXIT_DATA = 3


def _load_channel(spec: str) -> chan.MsbChannel:
    if spec.startswith("bsc:"):
        return chan.bsc(spec.split(":", 1)[1])
    if spec.startswith("qawgn:"):
        parts = spec.split(":")
        if len(parts) != 4:
            raise LplabError("qawgn shorthand is qawgn:<sigma>:<bins>:<clip>")
        return chan.quantized_awgn(float(parts[1]), int(parts[2]), float(parts[3]))
    with open(spec) as fh:
        return chan.parse_channel_spec(fh.read())


def _load_matrix(path: str) -> lc.ParityCheckMatrix:
    with open(path) as fh:
        return lc.from_alist(fh.read())


def _load_llr(path: str) -> list[float]:
    values = []
    with open(path) as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise LplabError(f"{path}:{ln}: not a decimal: {line!r}")
    if not values:
        raise LplabError(f"no LLR values in {path}")
    return values


def _frac_str(v) -> str:
    f = rat(v)
    return f"{f.numerator}/{f.denominator}"


def _emit(lines: list[str], output: str | None):
    text = "\n".join(lines) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------- subcommands

def _cmd_channel_info(args) -> int:
    ch = _load_channel(args.channel)
    part = chan.sigma_partition(ch)
    kind = {}
    for a in part.minus:
        kind[a] = "minus"
    for a in part.zero:
        kind[a] = "zero"
    for a in part.plus:
        kind[a] = "plus"
    bound = repr(chan.llr_bound(ch))
    lines = ["index,label,prob,llr,partition,llr_bound"]
    for a in range(ch.alphabet_size):
        lines.append(f"{a},{ch.labels[a]},{_frac_str(ch.p[a])},"
                     f"{ch.llr(a)!r},{kind[a]},{bound}")
    _emit(lines, None)
    return EXIT_OK


def _cmd_distort(args) -> int:
    ch = _load_channel(args.channel)
    cert = chan.distort(ch, args.alpha, delta=args.delta)
    l1 = chan.l1_distance(ch, cert.distorted)
    lines = ["delta,c,s,epsilon,l1",
             f"{_frac_str(cert.delta)},{cert.c!r},{cert.s!r},"
             f"{cert.epsilon!r},{_frac_str(l1)}"]
    _emit(lines, None)
    return EXIT_OK


def _cmd_graph(args) -> int:
    H = _load_matrix(args.alist)
    if args.full_redundant:
        G = lc.full_redundant_graph(H)
    elif args.redundant is not None:
        G = lc.redundant_graph(H, args.redundant)
    else:
        G = lc.tanner_graph(H)
    sys.stdout.write(lc.to_alist(lc.matrix_from_graph(G)))
    return EXIT_OK


def _cmd_decode(args) -> int:
    H = _load_matrix(args.alist)
    P = lpd.build_polytope(lc.tanner_graph(H))
    l = _load_llr(args.llr)
    out = lpd.decode(P, l, excess=args.excess)
    header = "status,optimal_value"
    row = f"{out.status},{_frac_str(out.optimal_value)}"
    if args.emit_witness_point:
        header += ",witness_point"
        pt = ";".join(_frac_str(v) for v in out.witness_point) if out.witness_point else ""
        row += f",{pt}"
    _emit([header, row], None)
    return EXIT_OK if out.success else EXIT_DECODE_FAILURE


def _cmd_witness(args) -> int:
    H = _load_matrix(args.alist)
    l = _load_llr(args.llr)
    if args.witness_cmd == "find":
        G = lc.tanner_graph(H)
        found = wit.find_witness(G, l)
        lines = ["kind,variable,check,value"]
        if found is None:
            lines.append("no-witness,,,")
        else:
            w, slack = found
            for (i, j) in G.edges:
                lines.append(f"edge,{i},{j},{_frac_str(w.weight(i, j))}")
            lines.append(f"slack,,,{_frac_str(slack)}")
        _emit(lines, None)
        return EXIT_OK
    # trim: witness for l - eps*1 on the full redundant graph, trimmed to k
    G_bar = lc.full_redundant_graph(H)
    llr_inf = args.llr_inf if args.llr_inf is not None else max(abs(v) for v in l)
    shifted = [v - args.eps for v in l]
    found = wit.find_witness(G_bar, shifted)
    lines = ["removed_checks,risky_count,bound_rhs,verdict"]
    if found is None:
        lines.append(",,,no-witness")
        _emit(lines, None)
        return EXIT_OK
    w, _slack = found
    _trimmed, report = wit.trim(w, args.k, args.eps, llr_inf, l=l)
    removed = ";".join(str(j) for j in report.removed_checks)
    verdict = "flagged" if report.flagged else "holds"
    lines.append(f"{removed},{len(report.risky)},{report.bound_rhs!r},{verdict}")
    _emit(lines, None)
    return EXIT_OK


def _require(cfg: lab.ExperimentConfig, *keys: str):
    for key in keys:
        if getattr(cfg, key) in (None, ()):
            raise LplabError(f"config is missing required key {key!r}")


def _read_config(args) -> lab.ExperimentConfig:
    with open(args.config) as fh:
        cfg = lab.parse_experiment_config(fh.read())
    if args.seed is not None:
        cfg = lab.ExperimentConfig(**{**cfg.__dict__, "seed": args.seed})
    return cfg


def _graph_from_cfg(cfg: lab.ExperimentConfig) -> lc.TannerGraph:
    return lc.tanner_graph(_load_matrix(cfg.alist))


def _cmd_simulate(args) -> int:
    cfg = _read_config(args)
    _require(cfg, "channel", "alist")
    est = lab.estimate_success(_load_channel(cfg.channel), _graph_from_cfg(cfg),
                               cfg.eps, cfg.trials, cfg.seed)
    lines = ["eps,trials,successes,p_hat,ci_halfwidth",
             f"{cfg.eps!r},{est.trials},{est.successes},"
             f"{est.p_hat!r},{est.ci_halfwidth!r}"]
    _emit(lines, cfg.output)
    return EXIT_OK


def _cmd_excess_curve(args) -> int:
    cfg = _read_config(args)
    _require(cfg, "channel", "alist", "eps_grid")
    curve = lab.excess_curve(_load_channel(cfg.channel), _graph_from_cfg(cfg),
                             cfg.eps_grid, cfg.trials, cfg.seed)
    lines = ["eps,trials,successes,p_hat,ci_halfwidth"]
    for eps, est in zip(curve.eps_grid, curve.estimates):
        lines.append(f"{eps!r},{est.trials},{est.successes},"
                     f"{est.p_hat!r},{est.ci_halfwidth!r}")
    _emit(lines, cfg.output)
    return EXIT_OK


def _cmd_markov_check(args) -> int:
    cfg = _read_config(args)
    _require(cfg, "channel", "alist", "alpha")
    rep = lab.markov_bound_check(_load_channel(cfg.channel), cfg.alpha,
                                 _graph_from_cfg(cfg), cfg.trials, cfg.seed)
    cert = rep.certificate
    lines = ["alpha,delta,c,s,epsilon,rhs_factor,trials,"
             "lhs_fail,lhs_ci,rhs_fail,rhs_ci,lhs_hat,rhs_hat,verdict",
             f"{rep.alpha!r},{_frac_str(cert.delta)},{cert.c!r},{cert.s!r},"
             f"{cert.epsilon!r},{rep.rhs_factor!r},{rep.trials},"
             f"{1.0 - rep.lhs.p_hat!r},{rep.lhs.ci_halfwidth!r},"
             f"{1.0 - rep.rhs.p_hat!r},{rep.rhs.ci_halfwidth!r},"
             f"{rep.lhs_hat!r},{rep.rhs_hat!r},{rep.verdict}"]
    _emit(lines, cfg.output)
    return EXIT_OK


def _cmd_awgn_check(args) -> int:
    cfg = _read_config(args)
    _require(cfg, "alist", "sigma", "sigma2")
    rep = lab.awgn_coupling_check(cfg.sigma, cfg.sigma2, _graph_from_cfg(cfg),
                                  cfg.trials, cfg.seed)
    lines = ["sigma,sigma_prime,epsilon,trials,boundary,agreements,"
             "agreement_rate,max_identity_error,success_rate_prime,"
             "success_rate_shifted",
             f"{rep.sigma!r},{rep.sigma_prime!r},{rep.epsilon!r},{rep.trials},"
             f"{rep.boundary},{rep.agreements},{rep.agreement_rate!r},"
             f"{rep.max_identity_error!r},{rep.success_rate_prime!r},"
             f"{rep.success_rate_shifted!r}"]
    _emit(lines, cfg.output)
    return EXIT_OK


def _cmd_redundancy_exp(args) -> int:
    cfg = _read_config(args)
    _require(cfg, "channel", "alist", "k")
    rep = lab.redundancy_experiment(_load_channel(cfg.channel),
                                    _graph_from_cfg(cfg), cfg.k, cfg.eps,
                                    cfg.trials, cfg.seed,
                                    exhaustive=cfg.exhaustive)
    vp = "" if rep.violation_probability is None else _frac_str(rep.violation_probability)
    lines = ["k,eps,trials,base_excess_successes,trimmed_successes,"
             "violations,violation_probability",
             f"{rep.k},{rep.eps!r},{rep.trials},{rep.base_excess_successes},"
             f"{rep.trimmed_successes},{rep.violations},{vp}"]
    _emit(lines, cfg.output)
    return EXIT_OK


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="lplab",
                                  description="LP decoding laboratory")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("channel-info", help="print LLR table and partition")
    p.add_argument("--channel", required=True,
                   help="bsc:<beta>, qawgn:<sigma>:<bins>:<clip>, or spec file")
    p.set_defaults(func=_cmd_channel_info)

    p = sub.add_parser("distort", help="print a distortion certificate")
    p.add_argument("--channel", required=True)
    p.add_argument("--alpha", required=True, type=float)
    p.add_argument("--delta", type=float, default=None)
    p.set_defaults(func=_cmd_distort)

    p = sub.add_parser("graph", help="emit (redundant) Tanner graph as alist")
    p.add_argument("--alist", required=True)
    p.add_argument("--redundant", type=int, default=None, metavar="K")
    p.add_argument("--full-redundant", action="store_true")
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("decode", help="LP-decode one LLR vector")
    p.add_argument("--alist", required=True)
    p.add_argument("--llr", required=True, help="file with one decimal per line")
    p.add_argument("--excess", type=float, default=0.0)
    p.add_argument("--emit-witness-point", action="store_true")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("witness", help="dual witness search and trimming")
    wsub = p.add_subparsers(dest="witness_cmd", required=True)
    pf = wsub.add_parser("find")
    pf.add_argument("--alist", required=True)
    pf.add_argument("--llr", required=True)
    pf.set_defaults(func=_cmd_witness)
    pt = wsub.add_parser("trim")
    pt.add_argument("--alist", required=True)
    pt.add_argument("--llr", required=True)
    pt.add_argument("--k", required=True, type=int)
    pt.add_argument("--eps", required=True, type=float)
    pt.add_argument("--llr-inf", type=float, default=None)
    pt.set_defaults(func=_cmd_witness)

    for name, fn in (("simulate", _cmd_simulate),
                     ("excess-curve", _cmd_excess_curve),
                     ("markov-check", _cmd_markov_check),
                     ("awgn-check", _cmd_awgn_check),
                     ("redundancy-exp", _cmd_redundancy_exp)):
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", required=True, help="key=value config file")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config master seed")
        p.set_defaults(func=fn)
    return top


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except LplabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run())
