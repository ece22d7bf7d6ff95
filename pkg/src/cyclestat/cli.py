"""Command-line front end: ``cyclestat <command> [descriptor] [options]``.

Exit codes: 0 on success, 1 when a validation or inequality check fails,
2 on usage errors (bad flags, malformed descriptors, out-of-range requests).
Reports go to standard output as JSON (default) or CSV.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from fractions import Fraction

from . import __version__
from .errors import CyclestatError, InvalidDescriptor
from .report import StatReport
from .zeta import (
    AffineSpace,
    EllipticCurve,
    ProjectiveSpace,
    build_zeta,
    descriptor_to_dict,
    load_descriptor,
    pnt_report,
    validate_descriptor,
)

COMMANDS = ("zeta", "pnt", "smooth", "nu", "charpoly", "bridge", "poisson", "ek", "oracle", "validate")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _lam(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"lambda must be comma-separated integers, got {text!r}") from None


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _common(p: argparse.ArgumentParser, descriptor: bool = True):
    if descriptor:
        g = p.add_mutually_exclusive_group()
        g.add_argument("--descriptor", metavar="FILE", help="descriptor JSON file")
        g.add_argument("--affine", nargs=2, type=int, metavar=("Q", "D"))
        g.add_argument("--projective", nargs=2, type=int, metavar=("Q", "D"))
        g.add_argument("--elliptic", nargs=2, type=int, metavar=("Q", "A"))
    p.add_argument("-N", dest="order", type=int, help="truncation order of the zeta expansion")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=_u64, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--exact-cap", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cyclestat", description="Exact statistics of 0-cycles over finite fields.")
    parser.add_argument("--version", action="version", version=f"cyclestat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("zeta", help="|Sym^n|, |Conf^n|, pi_n and point counts")
    _common(p)

    p = sub.add_parser("pnt", help="prime number theorem for 0-cycles")
    _common(p)
    p.add_argument("--start", type=int, default=1)

    p = sub.add_parser("smooth", help="rough and smooth 0-cycles against omega and rho")
    _common(p)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-u", type=float, action="append", help="ratio n/m (repeatable, default 2)")
    p.add_argument("--all-m", action="store_true", help="also list Phi(n, m) and Psi(n, m) for every m")

    p = sub.add_parser("nu", help="law of the multiplicity of one closed point")
    _common(p)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=int, required=True, help="degree of the point")
    p.add_argument("--space", choices=("sym", "conf"), default="sym")

    p = sub.add_parser("charpoly", help="expectation of a character polynomial")
    _common(p)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--lam", type=_lam, required=True, help="exponents lambda_1,lambda_2,...")
    p.add_argument("--space", choices=("sym", "conf"), default="sym")
    p.add_argument("--max-support", type=int, default=4, help="largest allowed number of nonzero lambda_k")

    p = sub.add_parser("bridge", help="multichoose identity, g_n bound and comparison inequality")
    _common(p)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--check", choices=("identity", "gbound", "comparison", "all"), default="all")
    p.add_argument("--A", dest="A", type=_rational, default=None)
    p.add_argument("--s", dest="s", type=_rational, default=None)

    p = sub.add_parser("poisson", help="window statistics of random 0-cycles")
    _common(p)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--pair", nargs=2, action="append", metavar=("R", "L"), help="(r, L) pair, repeatable")
    p.add_argument("--space", choices=("sym", "conf"), default="sym")
    p.add_argument("--max-ladder", type=int, default=64)
    p.add_argument("--raw-csv", metavar="FILE", help="write per-sample mu values here")

    p = sub.add_parser("ek", help="moments of the number of prime factors")
    _common(p)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--space", choices=("sym", "conf"), default="sym")

    p = sub.add_parser("oracle", help="exhaustive factorization counts on the affine line")
    _common(p)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--method", choices=("auto", "factor", "sieve"), default="auto")
    p.add_argument("--compare", action="store_true", help="compare with the zeta model; fail on mismatch")

    p = sub.add_parser("validate", help="check that a descriptor is a plausible zeta function")
    _common(p)
    p.add_argument("--terms", type=int, default=16)
    return parser


def _descriptor(args, required: bool = True):
    if getattr(args, "descriptor", None):
        return load_descriptor(args.descriptor)
    if getattr(args, "affine", None):
        return AffineSpace(*args.affine)
    if getattr(args, "projective", None):
        return ProjectiveSpace(*args.projective)
    if getattr(args, "elliptic", None):
        return EllipticCurve(*args.elliptic)
    if required:
        raise UsageError("a descriptor is required: --descriptor FILE, --affine Q D, --projective Q D or --elliptic Q A")
    return None


def _zeta(args, need: int):
    desc = _descriptor(args)
    N = args.order if args.order is not None else need
    if N < need:
        raise UsageError(f"-N {N} is below the degree {need} this command needs")
    return desc, build_zeta(desc, N)


def _report(args, desc, params: dict, caps: dict | None = None, seeded: bool = False) -> StatReport:
    prov = {"tool": "cyclestat", "version": __version__}
    if seeded:
        prov["seed"] = None if args.seed is None else str(args.seed)
    if caps:
        prov["caps"] = caps
    return StatReport(
        command=args.command,
        descriptor=descriptor_to_dict(desc) if desc is not None else None,
        params=params,
        provenance=prov,
    )


# -- commands ----------------------------------------------------------------------


def cmd_zeta(args):
    desc, z = _zeta(args, args.order if args.order is not None else 10)
    rep = _report(args, desc, {"N": z.N})
    if z.ring_z_value is not None:
        rep.summary["ring_z"] = z.ring_z_value
    for n in range(z.N + 1):
        rep.add_row(n=n, sym=z.sym_counts[n], conf=z.conf_counts[n], pi=z.pi[n], points=z.point_counts[n])
    return rep


def cmd_pnt(args):
    N = args.order if args.order is not None else 40
    desc, z = _zeta(args, N)
    rep = _report(args, desc, {"N": N, "start": args.start})
    rep.summary["ring_z"] = z.ring_z_value
    for row in pnt_report(z, range(args.start, N + 1)):
        rep.add_row(
            n=row.n,
            pi_ratio=row.pi_ratio,
            predicted=row.predicted,
            abs_error=row.abs_error,
            scaled_error=row.scaled_error,
        )
    return rep


def cmd_smooth(args):
    from .smoothness import phi_count, psi_count, smoothness_report

    desc, z = _zeta(args, args.n)
    us = args.u or [2.0]
    rep = _report(args, desc, {"n": args.n, "u": list(us), "all_m": args.all_m})
    for u in us:
        s = smoothness_report(z, args.n, u)
        rep.add_row(
            u=s.u,
            m_rough=s.m_rough,
            m_smooth=s.m_smooth,
            phi=s.phi,
            psi=s.psi,
            total=s.total,
            phi_scaled=s.phi_scaled,
            omega=s.omega,
            phi_relative_residual=s.phi_relative_residual,
            psi_ratio=s.psi_ratio,
            rho=s.rho,
            psi_residual=s.psi_residual,
        )
    if args.all_m:
        for m in range(1, args.n + 1):
            rep.add_row(m=m, phi=phi_count(z, args.n, m), psi=psi_count(z, args.n, m))
    return rep


def cmd_nu(args):
    from .prime_orders import nu_distribution, nu_limit

    desc, z = _zeta(args, args.n)
    dist = nu_distribution(z, args.k, args.n, args.space)
    rep = _report(args, desc, {"n": args.n, "k": args.k, "space": args.space})
    for j, p in enumerate(dist.probs):
        rep.add_row(j=j, prob=p, limit=nu_limit(z, args.k, args.space, j))
    return rep


def cmd_charpoly(args):
    from .prime_orders import charpoly_expectation, charpoly_limit

    desc, z = _zeta(args, max(args.n, len(args.lam)))
    rep = _report(args, desc, {"n": args.n, "lam": list(args.lam), "space": args.space})
    e = charpoly_expectation(z, args.lam, args.n, args.space, max_support=args.max_support)
    lim = charpoly_limit(z, args.lam, args.space)
    rep.add_row(n=args.n, expectation=e, limit=lim, gap=abs(e - lim))
    return rep


def _identity_pairs(args) -> list:
    if args.A is not None or args.s is not None:
        if args.A is None or args.s is None:
            raise UsageError("--A and --s go together")
        return [(args.A, args.s)]
    import numpy as np

    rng = np.random.Generator(np.random.PCG64(args.seed if args.seed is not None else 0))
    pairs = []
    for _ in range(10):
        A = Fraction(int(rng.integers(0, 60)), int(rng.integers(1, 12)))
        s = Fraction(int(rng.integers(1, 30)), int(rng.integers(30, 90)))
        pairs.append((A, s))
    return pairs


def cmd_bridge(args):
    from .perm_bridge import (
        class_function_suite,
        comparison_check,
        comparison_constants,
        g_square_bound_check,
        multichoose_sides,
    )

    checks = ("identity", "gbound", "comparison") if args.check == "all" else (args.check,)
    if args.seed is None:
        args.seed = 0
    needs_z = any(c != "identity" for c in checks)
    if needs_z:
        desc, z = _zeta(args, args.n)
    else:
        desc, z = _descriptor(args, required=False), None
    rep = _report(args, desc, {"n": args.n, "check": args.check}, seeded="identity" in checks)
    if "identity" not in checks:
        rep.provenance.pop("seed", None)
    ok = True
    if "identity" in checks:
        for A, s in _identity_pairs(args):
            for n in range(args.n + 1):
                lhs, rhs = multichoose_sides(n, A, s)
                ok &= lhs == rhs
                rep.add_row(check="identity", n=n, A=A, s=s, lhs=lhs, rhs=rhs, holds=lhs == rhs)
    if needs_z:
        c = comparison_constants(z, args.n)
        rep.summary.update(A=c.A, A_prime=c.A_prime, B_lower=c.B_lower, B=c.B)
    if "gbound" in checks:
        for n in range(1, args.n + 1):
            g = g_square_bound_check(z, n)
            ok &= g.holds
            rep.add_row(check="gbound", n=n, e_g_squared=g.e_g_squared, bound_lower=g.bound_lower, holds=g.holds)
    if "comparison" in checks:
        for n in range(1, args.n + 1):
            c = comparison_constants(z, n)
            for name, f in class_function_suite():
                r = comparison_check(z, f, n, constants=c)
                ok &= r.holds
                rep.add_row(check="comparison", n=n, function=name, lhs=r.lhs, e_sn=r.e_sn, bound=r.rhs, holds=r.holds)
    rep.status = "ok" if ok else "fail"
    return rep


DEFAULT_PAIRS = ((0, 1.0), (1, 1.0), (2, 1.0), (1, 0.5))


def cmd_poisson(args):
    from .poisson import EXACT_CAP, PoissonParams, draw_profiles, poisson_experiment

    if args.samples is None:
        raise UsageError("poisson needs --samples")
    if args.seed is None:
        raise UsageError("poisson needs --seed")
    try:
        pairs = [(int(r), float(L)) for r, L in args.pair] if args.pair else list(DEFAULT_PAIRS)
    except ValueError:
        raise UsageError("--pair takes an integer r and a float L") from None
    cap = args.exact_cap if args.exact_cap is not None else EXACT_CAP
    desc, z = _zeta(args, args.n)
    profiles = draw_profiles(z, args.n, args.space, args.samples, args.seed, exact_cap=cap)
    rep = _report(
        args,
        desc,
        {"n": args.n, "samples": args.samples, "space": args.space, "pairs": [f"{r}:{L!r}" for r, L in pairs]},
        caps={"exact_cap": cap, "max_ladder": args.max_ladder},
        seeded=True,
    )
    raw = open(args.raw_csv, "w", encoding="utf-8", newline="") if args.raw_csv else None
    try:
        if raw is not None:
            raw.write("n,seed_index,r,L,mu\n")
        for r, L in pairs:
            params = PoissonParams(
                args.n, L, r, args.samples, args.seed, args.space, max_ladder=args.max_ladder, exact_cap=cap
            )
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                res = poisson_experiment(z, params, profiles=profiles, raw_csv=raw)
            rep.notes.extend(str(w.message) for w in caught)
            rep.add_row(
                r=r,
                L=L,
                expected=res.expected,
                mean_mu=res.mean_mu,
                mean_abs_deviation=res.mean_abs_deviation,
                max_mass_error=res.max_mass_error,
                mu_median=res.mu_quantiles["q50"],
                deviation_q95=res.deviation_quantiles["q95"],
                exceptional_fraction=res.exceptional_fraction,
                in_theorem_range=res.in_theorem_range,
            )
        rep.summary.update(y=res.y, m=res.m, mean_phi_size=res.mean_phi_size, mean_omega=res.mean_omega)
        rep.summary.update(ladder_rungs=res.ladder_rungs, ladder_r_max=res.ladder_r_max)
    finally:
        if raw is not None:
            raw.close()
    return rep


def cmd_ek(args):
    import math

    from .poisson import EXACT_CAP, omega_moments

    desc, z = _zeta(args, args.n)
    seeded = args.samples is not None
    if seeded and args.seed is None:
        raise UsageError("sampled moments need --seed")
    cap = args.exact_cap if args.exact_cap is not None else EXACT_CAP
    m = omega_moments(z, args.n, args.samples, args.seed or 0, args.space, exact_cap=cap)
    rep = _report(args, desc, {"n": args.n, "space": args.space, "samples": args.samples}, seeded=seeded)
    rep.summary["log_n"] = math.log(args.n) if args.n > 0 else 0.0
    for stat, mean, var in (("Omega", m.mean_omega, m.var_omega), ("l", m.mean_length, m.var_length)):
        rep.add_row(statistic=stat, mean=mean, variance=var)
    return rep


def cmd_oracle(args):
    from .oracle import exhaustive_stats

    desc = _descriptor(args)
    if not isinstance(desc, AffineSpace) or desc.d != 1:
        raise UsageError("the oracle covers the affine line only: use --affine Q 1")
    table = exhaustive_stats(desc.q, args.n, method=args.method)
    rep = _report(args, desc, {"n": args.n, "method": table.method, "compare": args.compare})
    rows = table.to_csv().splitlines()[1:]
    import csv

    for kind, degree, key, space, count in csv.reader(rows):
        rep.add_row(kind=kind, degree=int(degree), key=key or "-", space=space or "-", count=int(count))
    if args.compare:
        z = build_zeta(desc, args.n)
        ok = table.pi == z.pi and table.conf == tuple(z.conf_counts) and table.sym == tuple(z.sym_counts)
        rep.status = "ok" if ok else "fail"
    return rep


def cmd_validate(args):
    try:
        desc = _descriptor(args)
    except InvalidDescriptor as exc:
        rep = _report(args, None, {"terms": args.terms})
        rep.add_row(check="structure", passed=False, detail=str(exc))
        rep.status = "fail"
        return rep
    res = validate_descriptor(desc, args.terms)
    rep = _report(args, desc, {"terms": args.terms})
    for c in res.checks:
        rep.add_row(check=c.name, passed=c.passed, detail=c.detail)
    rep.status = "ok" if res.ok else "fail"
    return rep


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        rep = HANDLERS[args.command](args)
    except UsageError as exc:
        print(str(exc), file=stderr)
        return 2
    except SystemExit as exc:
        # --help and --version
        return int(exc.code or 0)
    except (CyclestatError, ValueError, OSError) as exc:
        print(f"cyclestat: error: {exc}", file=stderr)
        return 2
    stdout.write(rep.to_csv() if args.format == "csv" else rep.to_json())
    return 0 if rep.status == "ok" else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
