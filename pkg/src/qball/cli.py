"""qball command line: verification suites, tables of special values, transforms.

Exit status: 0 success, 1 identity or accuracy failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import bergman, berezin, fock, io, laplace, lattice, spherical, verify
from .qcore import AccuracyError, DomainError, QContext

TABLES = ("phi", "lambda", "b-symbol", "norms", "weights", "berezin-f0")
TRANSFORMS = ("spherical", "berezin", "inverse")


def _common(p, alpha=True):
    p.add_argument("--q", type=float, default=None, help="deformation parameter in (0,1) (default 0.5)")
    p.add_argument("--n", type=int, default=None, help="complex dimension (default 1)")
    if alpha:
        p.add_argument("--alpha", type=float, default=1.0, help="weight exponent > 0")
    p.add_argument("--K", type=int, default=64, help="lattice truncation length")
    p.add_argument("--M", type=int, default=4096, help="quadrature panels on [0, 2pi/h]")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--out", default=None, help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qball", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run an identity suite and report residuals")
    v.add_argument("--suite", choices=("all",) + verify.SUITES, default="all")
    v.add_argument("--tol", type=float, default=None, help="override every tolerance")
    _common(v)

    t = sub.add_parser("table", help="emit a table of special values")
    t.add_argument("kind", choices=TABLES)
    t.add_argument("--k-max", type=int, default=10, help="largest lattice index or degree")
    t.add_argument("--rho-nodes", type=int, default=11, help="uniform nodes on [0, 2pi/h]")
    _common(t)

    x = sub.add_parser("transform", help="apply a transform to a radial or spectral record")
    x.add_argument("kind", choices=TRANSFORMS)
    x.add_argument("--input", required=True, help="JSON record to transform")
    x.add_argument("--Kout", type=int, default=None, help="output lattice length")
    _common(x)
    return ap


def _validate(ap, args):
    if args.q is not None and not (math.isfinite(args.q) and 0.0 < args.q < 1.0):
        ap.error("q must lie in (0,1)")
    if args.n is not None and args.n < 1:
        ap.error("n must be a positive integer")
    if getattr(args, "alpha", 1.0) is not None and not (math.isfinite(args.alpha) and args.alpha > 0):
        ap.error("alpha must be a finite positive real")
    if args.K < 8:
        ap.error("K must be an integer >= 8")
    if args.M < 64 or args.M % 2:
        ap.error("M must be an even integer >= 64")
    if getattr(args, "k_max", 0) < 0:
        ap.error("k-max must be nonnegative")
    if getattr(args, "rho_nodes", 0) < 0:
        ap.error("rho-nodes must be nonnegative")
    if getattr(args, "Kout", None) is not None and args.Kout < 1:
        ap.error("Kout must be positive")


def _q(args):
    return 0.5 if args.q is None else args.q


def _n(args):
    return 1 if args.n is None else args.n


def _write(args, header, rows, default="csv"):
    fmt = args.format or default
    if fmt == "csv":
        io.write_csv(header, rows, args.out)
    else:
        io.dump_json([dict(zip(header, (float(v) if isinstance(v, np.floating) else v for v in r)))
                      for r in rows], args.out)


def run_verify(args) -> int:
    cfg = verify.VerifyConfig(q=_q(args), n=_n(args), alpha=args.alpha, K=args.K, M=args.M, tol=args.tol)
    checks = sorted(verify.run_suite(args.suite, cfg), key=lambda c: (verify.SUITES.index(c.suite), c.check_id))
    if args.format == "json":
        io.dump_json([{"suite": c.suite, "check": c.check_id, "params": c.params, "residual": c.residual,
                       "tol": c.tol, "passed": c.passed} for c in checks], args.out)
    else:
        text = "".join(c.line() + "\n" for c in checks)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    failed = [c for c in checks if not c.passed]
    for c in failed:
        print(f"FAILED {c.suite} {c.check_id}", file=sys.stderr)
        print(c.detail(), file=sys.stderr)
    return 1 if failed else 0


def _rho_nodes(ctx, count):
    if count == 0:
        return np.zeros(0)
    if count == 1:
        return np.zeros(1)
    return np.linspace(0.0, ctx.rho_max, count)


def emit_table(args) -> int:
    q, n = _q(args), _n(args)
    ctx = QContext(q, n, K=max(args.K, args.k_max + 1), M=args.M)
    rho = _rho_nodes(ctx, args.rho_nodes)
    kind = args.kind
    if kind == "phi":
        rows = []
        if rho.size:
            T = laplace.phi_table(ctx, rho, args.k_max + 1).astype(float)
            rows = [(float(r), k, float(T[i, k])) for i, r in enumerate(rho) for k in range(args.k_max + 1)]
        _write(args, ("rho", "k", "phi"), rows)
    elif kind == "lambda":
        lam = laplace.lambda_eig(rho, ctx) if rho.size else np.zeros(0)
        _write(args, ("rho", "lambda"), [(float(r), float(v)) for r, v in zip(rho, np.atleast_1d(lam))])
    elif kind == "b-symbol":
        w = bergman.WeightParam(args.alpha, q)
        b = np.atleast_1d(berezin.symbol_b(rho, w, ctx)) if rho.size else np.zeros(0)
        _write(args, ("rho", "b"), [(float(r), float(v)) for r, v in zip(rho, b)])
    elif kind == "norms":
        w = bergman.WeightParam(args.alpha, q)
        rows = [(" ".join(str(v) for v in m), d, float(bergman.monomial_norm(m, w)))
                for d in range(args.k_max + 1) for m in fock._compositions(d, n)]
        _write(args, ("m", "degree", "norm"), rows)
    elif kind == "weights":
        k = np.arange(args.k_max + 1)
        w = lattice.radial_weights(ctx, args.k_max + 1)
        _write(args, ("k", "y", "weight"), [(int(i), float(q ** (2 * i)), float(v)) for i, v in zip(k, w)])
    elif kind == "berezin-f0":
        w = bergman.WeightParam(args.alpha, q)
        f0 = lattice.RadialFunction.basis(ctx, 0)
        B = berezin.berezin_radial(f0, w, max(ctx.K, args.k_max + 1)).coeffs
        _write(args, ("k", "value"), [(k, float(B[k])) for k in range(args.k_max + 1)])
    return 0


def _match(args, ctx):
    if args.q is not None and args.q != ctx.q:
        raise DomainError(f"--q {args.q} does not match the record's q={ctx.q}")
    if args.n is not None and args.n != ctx.n:
        raise DomainError(f"--n {args.n} does not match the record's n={ctx.n}")


def apply_transform(args) -> int:
    rec = io.load_record(args.input)
    _match(args, rec.ctx)
    kind = args.kind
    if kind == "inverse":
        if not isinstance(rec, spherical.SpectralFunction):
            raise io.SchemaError("$", "inverse needs a spectral record {q, n, h, M, values}")
        out = spherical.inverse(rec, args.Kout or rec.ctx.K)
    else:
        if not isinstance(rec, lattice.RadialFunction):
            raise io.SchemaError("$", f"{kind} needs a radial record {{q, n, K, coeffs}}")
        if kind == "spherical":
            out = spherical.forward(rec, args.M)
        else:
            w = bergman.WeightParam(args.alpha, rec.ctx.q)
            out = berezin.berezin_radial(rec, w, args.Kout or rec.K)
    if isinstance(out, spherical.SpectralFunction):
        if args.format == "csv":
            io.write_csv(("rho", "value"), zip(out.nodes.tolist(), out.values.tolist()), args.out)
        else:
            io.dump_json(io.spectral_to_record(out), args.out)
    else:
        if args.format == "csv":
            io.write_csv(("k", "value"), enumerate(out.coeffs.tolist()), args.out)
        else:
            io.dump_json(io.radial_to_record(out), args.out)
    return 0


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    _validate(ap, args)
    try:
        if args.command == "verify":
            return run_verify(args)
        if args.command == "table":
            return emit_table(args)
        return apply_transform(args)
    except (DomainError, io.SchemaError) as e:
        print(f"qball: error: {e}", file=sys.stderr)
        return 2
    except AccuracyError as e:
        print(f"qball: accuracy failure: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"qball: I/O error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
