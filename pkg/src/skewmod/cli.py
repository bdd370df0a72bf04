"""Command-line front end: density grids, samples, verification reports, moments.

Families and their parameters are given as ``FAMILY key=value ...``; values
accept fractions such as ``2/3`` and comma-separated lists.

Exit codes: 0 success / all checks pass, 1 numeric failure or failed check,
2 usage error, 3 flip representation unavailable.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import stats

from . import families, gamma_laplace, transforms
from .bases import BivariateNormalBase
from .modulated import ModulationCdf, density_grid, grid_axes, verify_normalization
from .numerics import ConvergenceError, Tolerance, ks_one_sample, ks_two_sample
from .perturbations import SYMMETRIC, symmetry_test
from .samplers import AcceptanceWarning, RepresentationUnavailable, flip_sample, rejection_sample

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE, EXIT_NO_REPRESENTATION = 0, 1, 2, 3
DEFAULT_SEED = 20240601


class UsageError(ValueError):
    pass


# family name -> (constructor, allowed params, list-valued params, default G,
#                 default transform name or None)
FAMILIES = {
    "sn-linear": (families.skew_normal, {"alpha", "rho"}, {"alpha"}, "normal", "negation"),
    "sn-diff-sq": (families.sn_diff_sq, {"alpha", "rho"}, set(), "normal", "swap"),
    "sn-poly": (families.sn_poly, {"coeffs", "rho"}, {"coeffs"}, "normal", "swap"),
    "sn-product": (families.sn_product, {"alpha", "rho"}, set(), "normal", "rot_plus"),
    "sn-product-rho": (families.sn_product_rho, {"alpha", "rho", "form"}, set(), "normal", "branch1"),
    "gamma-laplace": (families.gamma_laplace, {"omega", "alpha"}, set(), "laplace", "swap"),
    "gumbel-laplace": (families.gumbel_laplace, {"lambda", "alpha"}, set(), "laplace", "swap"),
    "pit1d": (families.pit1d, {"alpha", "rate", "orientation"}, set(), "normal", None),
    "pit2d": (families.pit2d, {"alpha", "omega"}, set(), "normal", None),
}

TRANSFORMS = ("negation", "swap", "rot_plus", "rot_minus", "reflect_x", "reflect_y",
              "branch1", "branch2", "branch3", "branch4")


def parse_number(text: str) -> float:
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a number: {text!r}") from None


@dataclass
class FamilySpec:
    family: str
    params: dict = field(default_factory=dict)
    g: str | None = None

    @classmethod
    def parse(cls, family: str, tokens, g: str | None = None) -> "FamilySpec":
        if family not in FAMILIES:
            raise UsageError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
        _, allowed, lists, _, _ = FAMILIES[family]
        params = {}
        for tok in tokens:
            key, sep, val = tok.partition("=")
            if not sep:
                raise UsageError(f"expected key=value, got {tok!r}")
            if key not in allowed:
                raise UsageError(f"unknown parameter {key!r} for {family}; allowed: {sorted(allowed)}")
            if key == "orientation":
                if val not in ("plus", "minus"):
                    raise UsageError("orientation must be plus or minus")
                params[key] = val
            elif key in lists:
                params[key] = tuple(parse_number(v) for v in val.split(","))
            else:
                params[key] = parse_number(val)
        if g is not None and g not in ("normal", "laplace"):
            raise UsageError(f"unknown modulation cdf {g!r}")
        return cls(family, params, g)

    @property
    def g_name(self) -> str:
        return self.g or FAMILIES[self.family][3]

    def build(self):
        ctor = FAMILIES[self.family][0]
        kw = dict(self.params)
        if "lambda" in kw:
            kw["lam"] = kw.pop("lambda")
        if "form" in kw:
            kw["form"] = int(kw["form"])
        try:
            return ctor(g=self.g_name, **kw)
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    def transform(self, name: str | None = None):
        name = name or FAMILIES[self.family][4]
        if name is None:
            return None
        if name.startswith("branch"):
            if self.family != "sn-product-rho":
                raise UsageError("branch transforms apply to sn-product-rho only")
            m = self.build()
            alpha, rho, form = m.w.params
            R = transforms.product_rho_branch(int(name[-1]), rho, alpha)
            return R if form == 1 else _swap_conjugate(R)
        return transforms.linear(name)


def _swap_conjugate(R):
    """S R S for S the coordinate swap (maps the form-1 branches to form 2)."""
    s = lambda z: np.asarray(z, dtype=float)[..., ::-1]  # noqa: E731
    return transforms.GenSymTransform(R.kind + "_swapped", lambda z: s(R.forward(s(z))),
                                      lambda z: s(R.inverse(s(z))))


def _fmt(x) -> str:
    return "%.12g" % x


def _write(text: str, out: str | None):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("SKEWMOD_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"SKEWMOD_SEED must be an integer, got {env!r}") from None
    return DEFAULT_SEED


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_grid(args) -> int:
    spec = FamilySpec.parse(args.family, args.params, args.g)
    m = spec.build()
    if m.dim != 2:
        raise UsageError(f"{spec.family} is univariate; grid needs a bivariate family")
    grid = density_grid(m, (args.xmin, args.xmax), (args.ymin, args.ymax), args.nx, args.ny)
    xs, ys = grid_axes((args.xmin, args.xmax), (args.ymin, args.ymax), args.nx, args.ny)
    lines = ["x,y,density"]
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            lines.append(f"{_fmt(x)},{_fmt(y)},{_fmt(grid[i, j])}")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_sample(args) -> int:
    spec = FamilySpec.parse(args.family, args.params, args.g)
    m = spec.build()
    rng = np.random.default_rng(_seed(args))
    if args.method == "flip":
        R = spec.transform(args.transform)
        if R is None:
            print(f"error: no generalized-symmetry transform is available for {spec.family}; "
                  "the flip representation cannot be used", file=sys.stderr)
            return EXIT_NO_REPRESENTATION
        try:
            z, st = flip_sample(m, R, args.n, rng)
        except RepresentationUnavailable as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_NO_REPRESENTATION
    else:
        z, st = rejection_sample(m, args.n, rng)
    header = ",".join(f"z{k + 1}" for k in range(z.shape[1]))
    body = "\n".join(",".join(_fmt(v) for v in row) for row in z)
    _write(header + "\n" + body + "\n", args.out)
    if args.method == "flip":
        print(f"flips: {st.flips} of {st.draws_attempted}", file=sys.stderr)
    print(f"acceptance rate: {_fmt(st.acceptance_rate)}", file=sys.stderr)
    return EXIT_OK


def _check(lines, name, ok, value) -> bool:
    lines.append(f"CHECK {name} {'PASS' if ok else 'FAIL'} {_fmt(value)}")
    return ok


def cmd_verify(args) -> int:
    spec = FamilySpec.parse(args.family, args.params, args.g)
    m = spec.build()
    seed = _seed(args)
    rng = np.random.default_rng(seed)
    lines: list[str] = []
    ok = True

    norm = verify_normalization(m, Tolerance(abs_tol=args.tol))
    ok &= _check(lines, "normalization", norm.passed, norm.value)

    if m.dim == 2:
        sym = symmetry_test(m.w, m.base, args.n, rng)
        ok &= _check(lines, "symmetry_w(Y)", sym.verdict == SYMMETRIC, sym.pvalue)

    with warnings.catch_warnings():
        # reported below as a failed check instead
        warnings.simplefilter("ignore", AcceptanceWarning)
        z, st = rejection_sample(m, args.n, rng)
    ok &= _check(lines, "acceptance_rate", not st.warning, st.acceptance_rate)

    R = spec.transform(args.transform)
    if R is not None:
        rep = transforms.verify_R_conditions(m.base, m.w, R, probes=200, tol=1e-6,
                                             rng=np.random.default_rng(seed + 1))
        worst = max(rep.density_match, rep.jacobian_dev, rep.w_antisym)
        ok &= _check(lines, f"r_conditions[{R.kind}]", rep.passed, worst)
        if rep.passed:
            zf, _ = flip_sample(m, R, args.n, rng, report=rep)
            p = min(ks_two_sample(z[:, k], zf[:, k]).pvalue for k in range(2))
            ok &= _check(lines, "rejection_vs_flip_ks", p > 0.001, p)

    # invariance of an R-even statistic, from the rejection draws
    if isinstance(m.base, BivariateNormalBase):
        p = ks_one_sample(m.base.mahalanobis(z), stats.chi2(2).cdf).pvalue
        ok &= _check(lines, "mahalanobis_chi2", p > 0.01, p)
    elif spec.family in ("gamma-laplace", "gumbel-laplace"):
        y = m.base.sample(rng, args.n)
        p = ks_two_sample(z.sum(axis=1), y.sum(axis=1)).pvalue
        ok &= _check(lines, "invariance_sum", p > 0.01, p)

    if spec.family == "gamma-laplace" and m.base.omega == 1:
        alpha = m.w.params[0]
        exact = gamma_laplace.moment("Z1", 1, alpha)
        est = z[:, 0].mean()
        se = z[:, 0].std(ddof=1) / math.sqrt(len(z))
        ok &= _check(lines, "moment_EZ1", abs(est - exact) <= 3.0 * se, est)
        lines.append(f"# closed-form E[Z1] = {_fmt(exact)}, Monte Carlo s.e. = {_fmt(se)}")

    print("\n".join(lines))
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_moments(args) -> int:
    if args.family != "gamma-laplace":
        raise UsageError("moments are available for the gamma-laplace family only")
    if args.omega != 1:
        raise UsageError("closed-form moments need omega = 1")
    alpha = parse_number(args.alpha)
    rs = [parse_number(r) for r in args.r_list.split(",")]
    if any(not r > 0 for r in rs):
        raise UsageError("every r must be positive")
    corr = gamma_laplace.correlation(alpha)
    lines = ["r,EZ1r,EZ2r,correlation"]
    for r in rs:
        lines.append(",".join(_fmt(v) for v in (r, gamma_laplace.moment("Z1", r, alpha),
                                                gamma_laplace.moment("Z2", r, alpha), corr)))
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------

def _family_args(p):
    p.add_argument("family", help=f"one of: {', '.join(FAMILIES)}")
    p.add_argument("params", nargs="*", metavar="key=value")
    p.add_argument("--g", choices=("normal", "laplace"), default=None,
                   help="modulating distribution (default depends on family)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skewmod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("grid", help="density on a grid of cell centres, as CSV")
    _family_args(p)
    for name, default in (("xmin", -3.0), ("xmax", 3.0), ("ymin", -3.0), ("ymax", 3.0)):
        p.add_argument(f"--{name}", type=parse_number, default=default)
    p.add_argument("--nx", type=int, default=201)
    p.add_argument("--ny", type=int, default=201)
    p.add_argument("--out")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("sample", help="random draws, as CSV")
    _family_args(p)
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--method", choices=("rejection", "flip"), default="rejection")
    p.add_argument("--transform", choices=TRANSFORMS, default=None,
                   help="transform used by the flip method (default depends on family)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="numerical checks of a construction")
    _family_args(p)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--transform", choices=TRANSFORMS, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("moments", help="closed-form moments of the exponential-Laplace case")
    p.add_argument("--family", default="gamma-laplace")
    p.add_argument("--alpha", required=True)
    p.add_argument("--omega", type=parse_number, default=1.0)
    p.add_argument("--r-list", default="1,2")
    p.add_argument("--out")
    p.set_defaults(func=cmd_moments)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
