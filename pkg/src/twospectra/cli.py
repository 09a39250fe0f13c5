"""Command-line frontend.

    python3 -m twospectra forward --system chain.json --params p.json --out spec.json
    python3 -m twospectra invert --spectra spec.json --mode disjoint --omega 0
    python3 -m twospectra verify --system chain.json --params p.json

Exit codes: 0 ok, 2 bad input (including theta = 1 where gamma is needed),
3 numerical failure, 4 spectra not interlaced or ambiguous, 5 parameter out
of range / no solution, 6 verification failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import gmpy2
import numpy as np

from . import errors
from ._numeric import kernel
from .interlace import classify, gap_interval
from .inverse import SOLVERS, solve_at_truth
from .isospectral import admissible_omegas, family, solve_with_known_theta
from .mass_spring import MassSpringSystem, from_jacobi, physical_delta, to_jacobi
from .perturbation import PerturbationParams, apply_perturbation, m_quotient, trace_shift
from .spectral_core import JacobiMatrix, eigendecompose, moments, riccati_residual

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_INTERLACE, EXIT_RANGE, EXIT_VERIFY = 0, 2, 3, 4, 5, 6
MODES = ("disjoint", "shared-theta", "shared-h", "shared-alpha", "known-theta")
VERIFY_POINTS = 10


class InputError(Exception):
    """Malformed or inconsistent input files/flags."""


# --- serialization -----------------------------------------------------------

def _num(x):
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"cannot serialize non-finite value {x!r}")
        # fold -0.0 into 0.0
        return format(x + 0.0, ".17g")
    return json.dumps(x)


def dumps(obj, indent=0) -> str:
    """Deterministic JSON: sorted keys, every real printed with 17 significant digits."""
    pad = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent + 1)}"
                 for k, v in sorted(obj.items())]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent + 1) for v in obj) + "\n" + "  " * indent + "]"
    if isinstance(obj, (bool, type(None), str)):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    return _num(float(obj))


@dataclass
class Reader:
    """Loads JSON inputs as float64 or, above 53 bits, as exact mpfr values."""

    bits: int = 53

    @property
    def mp(self):
        return self.bits > 53

    def scalar(self, x):
        if isinstance(x, bool) or not isinstance(x, (int, float, str)):
            raise InputError(f"expected a number, got {x!r}")
        return gmpy2.mpfr(x) if self.mp else float(x)

    def vector(self, data, key):
        vals = data.get(key) if isinstance(data, dict) else None
        if not isinstance(vals, list):
            raise InputError(f"missing list field {key!r}")
        return [self.scalar(v) for v in vals]

    def load(self, path):
        try:
            with open(path, encoding="utf-8") as fh:
                # keep the decimal text so mpfr gets the exact value
                data = json.load(fh, parse_float=str if self.mp else float)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"{path}: {exc}") from exc
        if not isinstance(data, dict):
            raise InputError(f"{path}: top level must be an object")
        return data

    def matrix(self, path):
        d = self.load(path)
        return JacobiMatrix(q=self.vector(d, "q"), b=self.vector(d, "b"))

    def system(self, path):
        d = self.load(path)
        return MassSpringSystem(masses=self.vector(d, "masses"), springs=self.vector(d, "springs"))

    def params(self, path):
        d = self.load(path)
        if "theta" not in d or "h" not in d:
            raise InputError(f"{path}: params need 'theta' and 'h'")
        return PerturbationParams(theta=self.scalar(d["theta"]), h=self.scalar(d["h"]))

    def spectra(self, path):
        d = self.load(path)
        return d, self.vector(d, "lambda"), self.vector(d, "mu")


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj, out):
    _emit(dumps(obj) + "\n", out)


def _chain(args, reader):
    if bool(args.system) == bool(args.matrix):
        raise InputError("give exactly one of --system or --matrix")
    if args.system:
        s = reader.system(args.system)
        return to_jacobi(s), s
    return reader.matrix(args.matrix), None


def _orientation(args, data=None):
    value = args.orientation or (data or {}).get("orientation")
    if value is None:
        return None
    if value not in ("gt", "lt"):
        raise InputError(f"orientation must be 'gt' or 'lt', got {value!r}")
    return value == "gt"


# --- subcommands -------------------------------------------------------------

def cmd_forward(args, reader):
    J, _ = _chain(args, reader)
    p = reader.params(args.params)
    gamma = p.require_gamma()
    s = eigendecompose(J)
    mu = eigendecompose(apply_perturbation(J, p)).eigenvalues
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "lambda", "mu", "weight"])
        for i in range(J.n):
            w.writerow([i, _num(float(s.eigenvalues[i])), _num(float(mu[i])),
                        _num(float(s.weights[i]))])
        _emit(buf.getvalue(), args.out)
    else:
        _emit_json({"lambda": s.eigenvalues.astype(float).tolist(),
                    "mu": mu.astype(float).tolist(),
                    "weights": s.weights.astype(float).tolist(),
                    "gamma": float(gamma)}, args.out)
    return EXIT_OK


def cmd_perturb(args, reader):
    J, system = _chain(args, reader)
    p = reader.params(args.params)
    out = {"matrix": apply_perturbation(J, p).to_dict(), "gamma": None if p.gamma is None
           else float(p.gamma)}
    if system is not None:
        dm, dk = physical_delta(p, system.masses[0])
        masses = system.masses.copy()
        springs = system.springs.copy()
        masses[0] += dm
        springs[0] += dk
        out["delta_mass"], out["delta_spring"] = float(dm), float(dk)
        out["system"] = {"masses": masses.astype(float).tolist(),
                         "springs": springs.astype(float).tolist()}
    _emit_json(out, args.out)
    return EXIT_OK


def _problem(args, reader):
    data, lam, mu = reader.spectra(args.spectra)
    return data, classify(lam, mu, theta_gt_1=_orientation(args, data))


def _pick(args, data, *names):
    for name in names:
        value = getattr(args, name, None)
        if value is not None:
            return value
    for name in names:
        if name in data:
            return data[name]
    raise InputError(f"mode needs one of: {', '.join('--' + n for n in names)}")


def cmd_invert(args, reader):
    data, p = _problem(args, reader)
    mode = args.mode or data.get("mode")
    if mode not in MODES:
        raise InputError(f"--mode must be one of {', '.join(MODES)}")
    if mode == "known-theta":
        sols = solve_with_known_theta(p, reader.scalar(_pick(args, data, "theta")))
    else:
        if mode == "shared-theta" and args.omega is None and args.theta is not None:
            value = reader.scalar(args.theta) ** 2
        else:
            key = {"shared-h": ("h", "omega"), "shared-alpha": ("alpha", "omega")}
            value = reader.scalar(_pick(args, data, *key.get(mode, ("omega",))))
        sols = [SOLVERS[mode](p, value)]
    _emit_json({"classification": p.to_dict(), "mode": mode,
                "solutions": [{**s.to_dict(), "omega": float(s.omega)} for s in sols]},
               args.out)
    return EXIT_OK


def cmd_family(args, reader):
    data, p = _problem(args, reader)
    if args.omega is not None:
        omegas = [reader.scalar(w) for w in args.omega]
    else:
        omegas = admissible_omegas(p, args.count)
    members = family(p, omegas)
    _emit_json([m.to_dict() for m in members], args.out)
    return EXIT_OK if all(m.ok for m in members) else EXIT_RANGE


def cmd_masses(args, reader):
    if args.system:
        _emit_json(to_jacobi(reader.system(args.system)).to_dict(), args.out)
        return EXIT_OK
    if not args.matrix or args.m1 is None or args.k1 is None:
        raise InputError("masses needs --system, or --matrix with --m1 and --k1")
    s = from_jacobi(reader.matrix(args.matrix), reader.scalar(args.m1), reader.scalar(args.k1))
    _emit_json(s.to_dict(), args.out)
    return EXIT_OK


# --- verify --------------------------------------------------------------------

def _probe_points(lam, n):
    """Deterministic non-real points spread over the spectral window."""
    lo, hi = float(np.min(lam)), float(np.max(lam))
    scale = max(1.0, hi - lo, abs(lo), abs(hi))
    rng = np.random.default_rng(20240501)
    re = rng.uniform(lo - 0.1 * scale, hi + 0.1 * scale, n)
    im = rng.uniform(0.05, 1.0, n) * scale * rng.choice([-1, 1], n)
    return [complex(a, b) for a, b in zip(re, im)], scale


def verify_rows(J, p, spectra=None, tol=1e-9):
    """(name, residual, threshold) for every invariant that applies; None marks a failure
    that produced no number."""
    rows = []
    sd = eigendecompose(J)
    lam = sd.eigenvalues
    mu = eigendecompose(apply_perturbation(J, p)).eigenvalues
    if spectra is not None:
        lam, mu = spectra
        if len(lam) != J.n or len(mu) != J.n:
            raise InputError("spectra length does not match the matrix size")
        k = kernel(J.q)
        lam, mu = k.array(lam), k.array(mu)
    points, scale = _probe_points(lam, VERIFY_POINTS)
    n = J.n

    shift = (np.sum(mu) - np.sum(lam)) - trace_shift(J, p)
    rows.append(("trace", abs(float(shift)), tol * n * scale))
    if n == 1 and p.gamma is None:
        return rows

    mom = moments(sd, 3)
    b1 = J.b[0] if n > 1 else 0
    expect = [1, J.q[0], J.q[0] ** 2 + b1 ** 2]
    rows.append(("moments", max(abs(float(a - e)) / max(1.0, abs(float(e)))
                                for a, e in zip(mom, expect)), tol))
    ric = max(abs(complex(riccati_residual(J, z))) / max(1.0, abs(z)) for z in points)
    rows.append(("riccati", ric, tol))

    if p.gamma is None:
        return rows
    prod_res = 0.0
    for z in points:
        want = complex(m_quotient(J, p, z))
        got = complex(np.prod([(z - complex(a)) / (z - complex(c)) for a, c in zip(mu, lam)]))
        prod_res = max(prod_res, abs(got - want) / max(1.0, abs(want)))
    rows.append(("product-form", prod_res, tol))

    try:
        prob = classify(lam, mu, theta_gt_1=bool(p.theta > 1))
        if prob.disjoint:
            lo, hi = gap_interval(prob)
            slack = tol * scale
            gap_res = 0.0 if lo - slack < p.gamma < hi + slack else float("inf")
        else:
            gap_res = abs(float(prob.shared_value - p.gamma))
        rows.append(("classification", gap_res, tol * scale))
    except errors.SpectralError:
        rows.append(("classification", None, tol * scale))
        prob = None

    if prob is not None:
        try:
            sol = solve_at_truth(prob, p)
            got = np.concatenate([sol.matrix.q, sol.matrix.b, [sol.params.theta, sol.params.h]])
            want = np.concatenate([J.q, J.b, [p.theta, p.h]])
            ref = max(1.0, float(np.max(np.abs(want.astype(float)))))
            rt = float(np.max(np.abs((got - want).astype(float)))) / ref
            rows.append(("roundtrip", rt, max(tol, 1e-8)))
        except errors.SpectralError:
            rows.append(("roundtrip", None, max(tol, 1e-8)))
    else:
        rows.append(("roundtrip", None, max(tol, 1e-8)))
    return sorted(rows)


def cmd_verify(args, reader):
    J, _ = _chain(args, reader)
    p = reader.params(args.params)
    spectra = None
    if args.spectra:
        _, lam, mu = reader.spectra(args.spectra)
        spectra = (lam, mu)
    rows = verify_rows(J, p, spectra, args.tolerance)
    failed = []
    print(f"{'invariant':<16}{'residual':>14}{'threshold':>14}  status")
    for name, res, thr in rows:
        ok = res is not None and res <= thr
        if not ok:
            failed.append(name)
        shown = "error" if res is None else f"{res:.3e}"
        print(f"{name:<16}{shown:>14}{thr:>14.3e}  {'ok' if ok else 'FAIL'}")
    if failed:
        print("failed invariants: " + ", ".join(failed), file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


# --- entry point -------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="twospectra", description=__doc__.split("\n")[0])
    ap.add_argument("--precision", type=int, default=53,
                    help="working precision in bits; above 53 uses gmpy2 (default 53)")
    sub = ap.add_subparsers(dest="command", required=True)

    def chain_opts(sp):
        sp.add_argument("--system", help="mass-spring JSON {masses, springs}")
        sp.add_argument("--matrix", help="Jacobi JSON {q, b}")

    def common(sp):
        sp.add_argument("--out", help="output file (default: stdout)")

    sp = sub.add_parser("forward", help="spectra of a chain and its perturbation")
    chain_opts(sp)
    sp.add_argument("--params", required=True)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    common(sp)
    sp.set_defaults(func=cmd_forward)

    sp = sub.add_parser("perturb", help="apply (theta, h) to a chain")
    chain_opts(sp)
    sp.add_argument("--params", required=True)
    common(sp)
    sp.set_defaults(func=cmd_perturb)

    for name, func, hlp in (("invert", cmd_invert, "rebuild a chain from two spectra"),
                            ("family", cmd_family, "sample the isospectral family")):
        sp = sub.add_parser(name, help=hlp)
        sp.add_argument("--spectra", required=True, help="JSON {lambda, mu}")
        sp.add_argument("--orientation", choices=("gt", "lt"),
                        help="theta > 1 (gt) or < 1 (lt), when the spectra alone are ambiguous")
        common(sp)
        sp.set_defaults(func=func)
        if name == "invert":
            sp.add_argument("--mode", choices=MODES)
            sp.add_argument("--omega")
            sp.add_argument("--theta")
            sp.add_argument("--h")
            sp.add_argument("--alpha")
        else:
            sp.add_argument("--omega", action="append")
            sp.add_argument("--count", type=int, default=5)

    sp = sub.add_parser("verify", help="check the invariant suite on a chain")
    chain_opts(sp)
    sp.add_argument("--params", required=True)
    sp.add_argument("--spectra", help="use these spectra instead of computed ones")
    sp.add_argument("--tolerance", type=float, default=1e-9)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("masses", help="convert between chain and Jacobi matrix")
    chain_opts(sp)
    sp.add_argument("--m1")
    sp.add_argument("--k1")
    common(sp)
    sp.set_defaults(func=cmd_masses)
    return ap


def _code(exc):
    if isinstance(exc, (InputError, errors.ThetaOne, errors.WrongRegime)):
        return EXIT_INPUT
    if isinstance(exc, errors.NotInterlaced):
        return EXIT_INTERLACE
    if isinstance(exc, errors.OmegaOutOfRange):
        return EXIT_RANGE
    if isinstance(exc, errors.SpectralError):
        return EXIT_NUMERIC
    # validation errors from the dataclasses
    return EXIT_INPUT


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.precision < 53:
        print("error: --precision must be at least 53", file=sys.stderr)
        return EXIT_INPUT
    reader = Reader(bits=args.precision)
    try:
        with gmpy2.context(gmpy2.get_context(), precision=args.precision):
            return args.func(args, reader)
    except errors.ThetaOne as exc:
        print(f"error: {exc} (gamma requires theta != 1)", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return _code(exc)


if __name__ == "__main__":
    sys.exit(main())
