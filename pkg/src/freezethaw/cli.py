"""Command-line front end: ``freezethaw {simulate,detect,verify,taylor,scan}``.

Every output embeds the configuration that produced it and is byte-stable
for a fixed configuration.  Time is the dimensionless tau = eta * t.
"""
import argparse
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import chain, entanglement, freeze, oracle, specfun
from .errors import DomainError, PreconditionError
from .io import SCHEMA_VERSION, dumps_json, fmt_float, report_to_dict, write_csv

SIM_COLUMNS = ("tau", "ce_re", "ce_im", "ce_abs2", "f", "g", "K_A", "K_B")
SCAN_COLUMNS = (
    "n",
    "first_freeze",
    "first_thaw",
    "period",
    "predicted_freeze",
    "predicted_thaw",
    "predicted_period",
)

VERIFY_TOLERANCES = {
    "max_amp_dev_integrator": 1e-7,
    "max_amp_dev_spectral": 1e-7,
    "unitarity_max_dev": 1e-10,
    "bessel_derivative_dev": 1e-7,
    "schmidt_weight_dev": 1e-10,
    "closed_form_dev": 1e-10,
}
DERIVATIVE_POINTS = (0.5, 1.0, 2.0, 5.0, 20.0)
MAX_VERIFY_N = 100


class ConfigError(DomainError):
    pass


@dataclass(frozen=True)
class RunConfig:
    n_sites_b: int | None = 25
    theta: float = math.pi / 4
    alpha_abs: float = 0.0
    alpha_phase: float = 0.0
    tau_max: float | None = None
    tau_step: float = 0.05
    eta: float = 1.0
    window: float = 2.0
    eps: float = 0.05
    delta: float = 0.02
    min_duration: float = 4.0
    format: str = "csv"
    out: str = "-"
    seed: int = 0
    which: str = "K_B"

    def validate(self):
        if self.n_sites_b is not None and self.n_sites_b < 1:
            raise ConfigError("--n must be a positive integer or 'inf'")
        if not 0 <= self.theta <= math.pi / 2:
            raise ConfigError("--theta must lie in [0, pi/2]")
        if not 0 <= self.alpha_abs <= 1:
            raise ConfigError("--alpha-abs must lie in [0, 1]")
        if not self.tau_step > 0:
            raise ConfigError("--tau-step must be positive")
        if self.tau_max is not None and not self.tau_max >= self.tau_step:
            raise ConfigError("--tau-max must be at least --tau-step")
        if not self.eta > 0:
            raise ConfigError("--eta must be positive")
        if self.format not in ("csv", "json"):
            raise ConfigError("--format must be csv or json")
        if self.which not in ("K_A", "K_B", "both"):
            raise ConfigError("--which must be K_A, K_B or both")
        self.criteria()
        return self

    @property
    def resolved_tau_max(self):
        """Explicit --tau-max, else four predicted periods (at least 90)."""
        if self.tau_max is not None:
            return self.tau_max
        if self.n_sites_b is None:
            return 90.0
        return float(max(90, 4 * (self.n_sites_b + 2)))

    def grid(self):
        count = int(math.floor(self.resolved_tau_max / self.tau_step + 1e-9))
        return np.arange(count + 1) * self.tau_step

    def prep(self):
        return chain.QubitPreparation.from_polar(self.theta, self.alpha_abs, self.alpha_phase)

    def criteria(self):
        try:
            return freeze.FreezeCriteria(self.window, self.eps, self.delta, self.min_duration)
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc

    def echo(self):
        d = asdict(self)
        # destination is not part of the result
        del d["out"]
        d["n_sites_b"] = "inf" if self.n_sites_b is None else self.n_sites_b
        d["tau_max"] = self.resolved_tau_max
        return d


def parse_n(text):
    if str(text).strip().lower() in ("inf", "infinity"):
        return None
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"--n must be a positive integer or 'inf', got {text!r}") from None


def amplitudes(config):
    if config.n_sites_b is None:
        return chain.evolve_infinite(config.prep(), config.grid())
    return chain.evolve(chain.ChainConfig(config.n_sites_b, config.eta), config.prep(), config.grid())


def _emit(config, text):
    if config.out == "-":
        sys.stdout.write(text)
        return
    with open(config.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def render_simulate(config):
    amps = amplitudes(config)
    ent = entanglement.entanglement_series(config.prep(), amps)
    cols = [amps.tau, amps.ce.real, amps.ce.imag, amps.ce_abs2, ent.f, ent.g, ent.k_a, ent.k_b]
    if config.format == "json":
        return dumps_json(
            {
                "schema": SCHEMA_VERSION,
                "command": "simulate",
                "config": config.echo(),
                "provenance": amps.provenance.value,
                "columns": list(SIM_COLUMNS),
                "data": {name: [float(v) for v in col] for name, col in zip(SIM_COLUMNS, cols)},
            }
        )
    buf = io.StringIO()
    write_csv(
        buf,
        SIM_COLUMNS,
        zip(*cols),
        comments=(
            "freezethaw simulate",
            "config: " + json.dumps(config.echo(), sort_keys=True, separators=(",", ":")),
            f"provenance: {amps.provenance.value}",
            "time unit: tau = eta * t",
        ),
    )
    return buf.getvalue()


def detect_payload(config):
    n = config.n_sites_b
    amps = amplitudes(config)
    ent = entanglement.entanglement_series(config.prep(), amps)
    targets = ("K_A", "K_B") if config.which == "both" else (config.which,)
    reports = {w: freeze.detect_frozen_intervals(ent, w, config.criteria()) for w in targets}
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "detect",
        "config": config.echo(),
        "reports": {w: report_to_dict(r) for w, r in reports.items()},
    }
    predicted = freeze.predicted_timings(n)
    payload["predicted"] = predicted._asdict()
    payload["predicted_physical_time"] = {k: v / config.eta for k, v in predicted._asdict().items()}
    if n is None:
        payload["period_estimate"] = math.inf
    else:
        try:
            payload["period_estimate"] = freeze.revival_period_estimate(amps)
        except PreconditionError as exc:
            payload["period_estimate"] = None
            payload["period_error"] = str(exc)
    return payload, reports


def verify_payload(config, fault=0.0):
    n = config.n_sites_b
    if n is None or n > MAX_VERIFY_N:
        raise ConfigError(f"verify needs a finite --n <= {MAX_VERIFY_N}")
    grid = config.grid()
    analytic = chain.evolve(chain.ChainConfig(n), config.prep(), grid)
    matrix = oracle.HoppingMatrix.for_chain(n)
    spectral = oracle.spectral_amplitudes(matrix, grid)
    integrated = oracle.integrate_schrodinger(matrix, grid)
    integrated.ce = integrated.ce + fault

    def dev(a, b):
        return float(max(np.max(np.abs(a.ce - b.ce)), np.max(np.abs(a.cj - b.cj))))

    deriv = [specfun.bessel_derivative_identity_check(t, 1e-5) for t in DERIVATIVE_POINTS]
    rng = np.random.default_rng(config.seed)
    ka_dev, kb_dev = entanglement.closed_form_agreement(rng, trials=1000)
    results = {
        "max_amp_dev_integrator": dev(analytic, integrated),
        "max_amp_dev_spectral": dev(analytic, spectral),
        "unitarity_max_dev": analytic.unitarity_deviation(),
        "bessel_derivative_dev": float(max(abs(a - b) for a, b in deriv)),
        "schmidt_weight_dev": max(ka_dev, kb_dev),
        "closed_form_dev": float(np.max(np.abs(analytic.ce - np.cos(grid)))) if n == 1 else None,
    }
    failed = sorted(k for k, v in results.items() if v is not None and not v <= VERIFY_TOLERANCES[k])
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "verify",
        "config": config.echo(),
        **results,
        "tolerances": VERIFY_TOLERANCES,
        "failed": failed,
        "passed": not failed,
    }
    return payload


def render_taylor(n, m_max, fmt="text"):
    """Table text and pattern verdict (None when m_max < n + 1 leaves it unchecked)."""
    scan = oracle.taylor_agreement_scan(n, m_max)
    verdict = oracle.taylor_pattern_holds(scan, n) if m_max >= n + 1 else None
    if fmt == "json":
        text = dumps_json(
            {
                "schema": SCHEMA_VERSION,
                "command": "taylor",
                "n": n,
                "m_max": m_max,
                "rows": [
                    {"m": r.m, "finite": str(r.finite_n_coeff), "infinite": str(r.infinite_coeff), "equal": r.equal}
                    for r in scan
                ],
                "pattern_holds": verdict,
            }
        )
    else:
        lines = ["m\tfinite\tinfinite\tequal"]
        lines += [f"{r.m}\t{r.finite_n_coeff}\t{r.infinite_coeff}\t{str(r.equal).lower()}" for r in scan]
        text = "\n".join(lines) + "\n"
    return text, verdict


def scan_rows(config, n_list):
    def one(n):
        payload, reports = detect_payload(replace(config, n_sites_b=n))
        rep = reports["K_B"] if "K_B" in reports else next(iter(reports.values()))
        pred = freeze.predicted_timings(n)
        period = payload.get("period_estimate")
        return [
            "inf" if n is None else str(n),
            rep.first_freeze if rep.first_freeze is not None else "",
            rep.first_thaw if rep.first_thaw is not None else "",
            period if period is not None else "",
            pred.tau_freeze,
            pred.tau_thaw,
            pred.period,
        ]

    with ThreadPoolExecutor() as pool:
        return list(pool.map(one, n_list))


def render_scan(config, n_list):
    rows = scan_rows(config, n_list)
    if config.format == "json":
        return dumps_json(
            {
                "schema": SCHEMA_VERSION,
                "command": "scan",
                "config": config.echo(),
                "n_list": ["inf" if n is None else n for n in n_list],
                "rows": [dict(zip(SCAN_COLUMNS, r)) for r in rows],
            }
        )
    buf = io.StringIO()
    echo = dict(config.echo(), n_sites_b=["inf" if n is None else n for n in n_list])
    if config.tau_max is None:
        echo["tau_max"] = "auto"
    write_csv(
        buf,
        SCAN_COLUMNS,
        rows,
        comments=("freezethaw scan", "config: " + json.dumps(echo, sort_keys=True, separators=(",", ":"))),
    )
    return buf.getvalue()


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", default="25", help="lattice sites N of party B, or 'inf' (default 25)")
    common.add_argument("--theta", type=float, default=math.pi / 4, help="mixing angle in [0, pi/2] (default pi/4)")
    common.add_argument("--alpha-abs", type=float, default=0.0, help="|alpha| in [0, 1] (default 0)")
    common.add_argument("--alpha-phase", type=float, default=0.0, help="arg(alpha) in radians (default 0)")
    common.add_argument(
        "--tau-max", type=float, default=None, help="grid end in tau = eta*t (default: 4(N+2), at least 90)"
    )
    common.add_argument("--tau-step", type=float, default=0.05, help="grid spacing in tau (default 0.05)")
    common.add_argument("--eta", type=float, default=1.0, help="coupling scale, used for physical times only")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", default="-", help="output path, '-' for stdout")
    common.add_argument("--window", type=float, default=2.0, help="freeze window width in tau (default 2)")
    common.add_argument("--eps", type=float, default=0.05, help="max std/|mean-1| in a frozen window (default 0.05)")
    common.add_argument("--delta", type=float, default=0.02, help="max |dK/dtau| in a frozen window (default 0.02)")
    common.add_argument("--min-duration", type=float, default=4.0, help="shortest reported interval (default 4)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    parser = argparse.ArgumentParser(
        prog="freezethaw",
        description="Entanglement freezing and thawing in a single-excitation XY chain. "
        "The default preparation theta=pi/4, alpha=0 gives the full K_B plateau at 2.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common], help="emit c_e, f, g, K_A, K_B on a tau grid")
    det = sub.add_parser("detect", parents=[common], help="freeze/thaw report as JSON")
    det.add_argument("--which", choices=("K_A", "K_B", "both"), default="K_B")
    ver = sub.add_parser("verify", parents=[common], help="oracle cross-checks as JSON")
    ver.add_argument("--inject-fault", type=float, default=0.0, help=argparse.SUPPRESS)
    tay = sub.add_parser("taylor", parents=[common], help="exact Taylor coefficient comparison")
    tay.add_argument("--m-max", type=int, required=True)
    sub.add_parser("scan", parents=[common], help="detected vs predicted timings for a list of N (--n 25,40)")
    return parser


def config_from_args(args, n_override="keep"):
    n = parse_n(args.n) if n_override == "keep" else n_override
    default_fmt = "json" if args.command in ("detect", "verify") else "csv"
    return RunConfig(
        n_sites_b=n,
        theta=args.theta,
        alpha_abs=args.alpha_abs,
        alpha_phase=args.alpha_phase,
        tau_max=args.tau_max,
        tau_step=args.tau_step,
        eta=args.eta,
        window=args.window,
        eps=args.eps,
        delta=args.delta,
        min_duration=args.min_duration,
        format=args.format or default_fmt,
        out=args.out,
        seed=args.seed,
        which=getattr(args, "which", "K_B"),
    ).validate()


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "scan":
            n_list = [parse_n(tok) for tok in str(args.n).split(",") if tok.strip()]
            if not n_list:
                raise ConfigError("scan needs at least one N")
            config = config_from_args(args, n_override=n_list[0])
            for n in n_list:
                replace(config, n_sites_b=n).validate()
            _emit(config, render_scan(config, n_list))
            return 0
        if args.command == "taylor":
            n = parse_n(args.n)
            if n is None or not 1 <= n <= oracle.MAX_TAYLOR or not 0 <= args.m_max <= oracle.MAX_TAYLOR:
                raise ConfigError(f"taylor needs 1 <= n <= {oracle.MAX_TAYLOR} and 0 <= m-max <= {oracle.MAX_TAYLOR}")
            text, verdict = render_taylor(n, args.m_max, "json" if args.format == "json" else "text")
            if verdict is None:
                print(f"warning: m-max {args.m_max} < n + 1; agreement pattern not checked", file=sys.stderr)
            _emit(RunConfig(out=args.out), text)
            return 0 if verdict in (True, None) else 1
        config = config_from_args(args)
        if args.command == "simulate":
            _emit(config, render_simulate(config))
            return 0
        if args.command == "detect":
            payload, _ = detect_payload(config)
            _emit(config, dumps_json(payload))
            return 0
        if args.command == "verify":
            payload = verify_payload(config, fault=args.inject_fault)
            _emit(config, dumps_json(payload))
            if not payload["passed"]:
                print("verify: tolerance exceeded for " + ", ".join(payload["failed"]), file=sys.stderr)
                return 1
            return 0
    except (DomainError, PreconditionError) as exc:
        print(f"freezethaw {args.command}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"freezethaw {args.command}: cannot write output: {exc}", file=sys.stderr)
        return 3
    return 2


if __name__ == "__main__":
    sys.exit(main())
