"""Command-line front end.

Exit codes: 0 ok, 1 fitted exponents deviate beyond tolerance, 2 usage error,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import compare, fit_power_law
from .asymptotics import asymptotic_profile, leading_nonescape, leading_survival
from .errors import DomainError, FreeDecayError, InvalidParameterError
from .observables import observable_series
from .packets import Interval, load_grid_csv, make_family_packet
from .propagator import evolve

EXIT_OK, EXIT_DEVIATION, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3

FIGURES = {
    # m, (S tolerance, P tolerance)
    "fig1a": (0, (0.05, 0.05)),
    "fig1b": (1, (0.1, 0.1)),
    "fig2": (2, (0.15, 0.1)),
}
DEFAULT_TIMES = "log:0.1,1000,80"
FAMILY_KEYS = {"m": int, "a0": float, "k0": float, "x0": float}


class UsageError(FreeDecayError):
    pass


@dataclass(frozen=True)
class TimeSpec:
    kind: str
    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if self.kind not in ("log", "lin"):
            raise UsageError(f"time spec kind must be 'log' or 'lin', got {self.kind!r}")
        if self.n < 2:
            raise UsageError("time spec needs n >= 2")
        if not self.lo < self.hi:
            raise UsageError("time spec needs lo < hi")
        if self.lo < 0 or (self.kind == "log" and self.lo <= 0):
            raise UsageError("time spec needs lo > 0 for log spacing and lo >= 0 otherwise")

    def values(self):
        if self.kind == "log":
            return np.logspace(np.log10(self.lo), np.log10(self.hi), self.n)
        return np.linspace(self.lo, self.hi, self.n)

    def __str__(self):
        return f"{self.kind}:{self.lo:g},{self.hi:g},{self.n}"


@dataclass(frozen=True)
class RunConfig:
    packet_spec: str
    interval: Interval
    time_spec: TimeSpec
    outdir: Path = Path("out")
    tolerance: float = 0.1
    extra: dict = field(default_factory=dict)

    def header(self, command: str):
        lines = [
            f"# freedecay {__version__} {command}",
            f"# packet: {self.packet_spec}",
            f"# interval: {self.interval.a:.12g},{self.interval.b:.12g}",
            f"# times: {self.time_spec}",
            f"# tolerance: {self.tolerance:g}",
            "# units: hbar=1, 2M=1, T=t/a0^2",
        ]
        lines += [f"# {k}: {v}" for k, v in self.extra.items()]
        return lines


def parse_packet(spec: str):
    kind, _, body = spec.partition(":")
    if kind == "grid":
        if not body:
            raise UsageError("grid packet spec needs a path: grid:<path>")
        return load_grid_csv(body)
    if kind != "family":
        raise UsageError(f"packet spec must start with 'family:' or 'grid:', got {spec!r}")
    values = {"a0": 1.0, "k0": 0.0, "x0": 0.0}
    for item in filter(None, body.split(",")):
        key, eq, raw = item.partition("=")
        key = key.strip()
        if key not in FAMILY_KEYS or not eq:
            raise UsageError(f"packet spec field {key!r} is not one of {sorted(FAMILY_KEYS)} (as key=value)")
        try:
            values[key] = FAMILY_KEYS[key](raw)
        except ValueError:
            raise UsageError(f"packet spec field {key!r} has unparsable value {raw!r}") from None
    if "m" not in values:
        raise UsageError("packet spec field 'm' is required")
    return make_family_packet(values["m"], values["a0"], values["k0"], values["x0"])


def parse_floats(text: str, count: int, what: str):
    parts = text.split(",")
    if len(parts) != count:
        raise UsageError(f"{what} needs {count} comma-separated numbers, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"{what} has a non-numeric entry: {text!r}") from None


def parse_times(text: str) -> TimeSpec:
    kind, _, body = text.partition(":")
    parts = body.split(",")
    if len(parts) != 3:
        raise UsageError(f"time spec must look like log:lo,hi,n or lin:lo,hi,n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"time spec has a malformed number: {text!r}") from None
    return TimeSpec(kind, lo, hi, n)


def parse_interval(text: str | None, packet) -> Interval:
    if text is None:
        return Interval(-2.0 * packet.a0_ref, 2.0 * packet.a0_ref)
    a, b = parse_floats(text, 2, "--interval")
    return Interval(a, b)


def fmt(v) -> str:
    return format(float(v), ".12g")


def write_csv(path: Path, header_lines, columns, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        for line in header_lines:
            fh.write(line + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(r if isinstance(r, str) else fmt(r) for r in row) + "\n")
    return path


def _config(args, packet, **extra) -> RunConfig:
    return RunConfig(
        args.packet,
        parse_interval(getattr(args, "interval", None), packet),
        parse_times(getattr(args, "times", DEFAULT_TIMES)),
        Path(args.outdir),
        float(getattr(args, "tolerance", 0.1)),
        extra,
    )


def _profile_lines(profile):
    d_m = profile.deriv_table.values[profile.m]
    xi0 = "none" if profile.xi0 is None else fmt(profile.xi0)
    return [
        f"# m: {profile.m}",
        f"# m_bar: {profile.m_bar}",
        f"# psi_hat_m(0): {fmt(d_m.real)}{'+' if d_m.imag >= 0 else '-'}{fmt(abs(d_m.imag))}j",
        f"# xi0: {xi0}",
        f"# s_coefficient: {profile.s_coefficient:.12g}",
        f"# p_coefficient: {profile.p_coefficient:.12g}",
    ]


def write_observables(path, config, series, command):
    rows = zip(series.times, series.survival, series.nonescape)
    return write_csv(path, config.header(command), ["T", "S", "P"], rows)


def write_asymptote(path, config, profile, T, command):
    t = np.asarray(T) * profile.a0_ref**2
    rows = zip(T, leading_survival(profile, t), leading_nonescape(profile, t))
    return write_csv(path, config.header(command) + _profile_lines(profile), ["T", "S_lead", "P_lead"], rows)


REPORT_COLUMNS = [
    "label", "m", "m_bar", "predicted_S", "fitted_S", "predicted_P", "fitted_P",
    "amplitude_ratio_S", "amplitude_ratio_P", "rms_S", "rms_P", "window_lo", "window_hi", "max_norm_drift",
]


def report_row(label, report):
    p = report.profile
    return [
        label, str(p.m), str(p.m_bar), str(report.predicted_exponent_S), report.fitted_S.exponent,
        str(report.predicted_exponent_P), report.fitted_P.exponent, report.coefficient_ratios[0],
        report.coefficient_ratios[1], report.fitted_S.rms_residual, report.fitted_P.rms_residual,
        report.fitted_S.window[0], report.fitted_S.window[1], report.max_norm_drift,
    ]


def cmd_observe(args) -> int:
    packet = parse_packet(args.packet)
    config = _config(args, packet)
    series = observable_series(packet, config.time_spec.values(), config.interval)
    path = write_observables(config.outdir / args.output, config, series, "observe")
    print(f"wrote {path} ({len(series.times)} rows)")
    return EXIT_OK


def cmd_asymptote(args) -> int:
    packet = parse_packet(args.packet)
    config = _config(args, packet, declared_m="detect" if args.m is None else args.m)
    profile = asymptotic_profile(packet, config.interval, m=args.m)
    path = write_asymptote(config.outdir / args.output, config, profile, config.time_spec.values(), "asymptote")
    print(f"wrote {path}")
    for line in _profile_lines(profile):
        print(line[2:])
    return EXIT_OK


def cmd_field(args) -> int:
    packet = parse_packet(args.packet)
    Ts = parse_list(args.at, "--at")
    if any(T < 0 for T in Ts):
        raise UsageError("--at times must be >= 0")
    lo, hi, n = parse_floats(args.x, 3, "--x")
    if not lo < hi or n < 2 or n != int(n):
        raise UsageError("--x needs lo < hi and an integer n >= 2")
    x = np.linspace(lo, hi, int(n))
    config = RunConfig(args.packet, Interval(lo, hi), TimeSpec("lin", 0.0, 1.0, 2), Path(args.outdir),
                       extra={"at": args.at, "x": args.x})
    for T in Ts:
        f = evolve(packet, float(packet.units.physical_time(T)), x)
        rows = zip(x, f.values.real, f.values.imag, f.abs2)
        header = [h for h in config.header("field") if not h.startswith(("# interval", "# times", "# tolerance"))]
        header.append(f"# T: {fmt(T)}")
        path = write_csv(config.outdir / f"field_T{fmt(T)}.csv", header, ["x", "re", "im", "abs2"], rows)
        print(f"wrote {path}")
    return EXIT_OK


def parse_list(text, what):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"{what} must be a comma-separated list of numbers") from None


def _check_report(report, tolerances) -> int:
    dev_s, dev_p = report.deviations
    if report.max_norm_drift > 1e-6:
        print(f"FAIL: norm drift {report.max_norm_drift:.3g} exceeds 1e-6", file=sys.stderr)
        return EXIT_NUMERICAL
    if dev_s > tolerances[0] or dev_p > tolerances[1]:
        print(f"FAIL: exponent deviation S {dev_s:.4f} (tol {tolerances[0]}), "
              f"P {dev_p:.4f} (tol {tolerances[1]})", file=sys.stderr)
        return EXIT_DEVIATION
    return EXIT_OK


def read_series(path):
    with open(path) as fh:
        rows = [line.strip().split(",") for line in fh if line.strip() and not line.startswith("#")]
    cols = rows[0]
    missing = {"T", "S", "P"} - set(cols)
    if missing:
        raise UsageError(f"{path}: missing column(s) {', '.join(sorted(missing))}")
    try:
        values = np.array(rows[1:], dtype=float)
    except ValueError:
        raise UsageError(f"{path}: non-numeric data") from None
    return {c: values[:, i] for i, c in enumerate(cols)}


def cmd_fit(args) -> int:
    packet = parse_packet(args.packet)
    config = _config(args, packet)
    window = None if args.window is None else tuple(parse_floats(args.window, 2, "--window"))
    if args.series:
        data = read_series(args.series)
        T = data["T"]
        window = window or (T.max() / 10, T.max())
        profile = asymptotic_profile(packet, config.interval, m=args.m)
        fs = fit_power_law(T, data["S"], window)
        fp = fit_power_law(T, data["P"], window)
        print(f"S exponent {fs.exponent:+.4f} (predicted {profile.s_exponent:+d})")
        print(f"P exponent {fp.exponent:+.4f} (predicted {profile.p_exponent:+d})")
        dev = (abs(fs.exponent - profile.s_exponent), abs(fp.exponent - profile.p_exponent))
        return EXIT_DEVIATION if max(dev) > config.tolerance else EXIT_OK
    report = compare(packet, config.interval, config.time_spec.values(), window=window, m=args.m)
    path = write_csv(config.outdir / args.output, config.header("fit"), REPORT_COLUMNS,
                     [report_row(packet.describe(), report)])
    print(report.summary())
    print(f"wrote {path}")
    return _check_report(report, (config.tolerance, config.tolerance))


def cmd_reproduce(args) -> int:
    m, tolerances = FIGURES[args.figure]
    if args.tolerance is not None:
        tolerances = (args.tolerance, args.tolerance)
    spec = f"family:m={m},a0=1,k0=0,x0=0"
    packet = parse_packet(spec)
    config = RunConfig(spec, Interval(-2.0, 2.0), parse_times(DEFAULT_TIMES), Path(args.outdir),
                       max(tolerances), {"figure": args.figure,
                                         "tolerances": f"S={tolerances[0]:g},P={tolerances[1]:g}"})
    report = compare(packet, config.interval, config.time_spec.values())
    out = config.outdir
    cmd = f"reproduce {args.figure}"
    write_observables(out / f"{args.figure}_observables.csv", config, report.series, cmd)
    write_asymptote(out / f"{args.figure}_asymptote.csv", config, report.profile, report.series.times, cmd)
    write_csv(out / f"{args.figure}_report.csv", config.header(cmd), REPORT_COLUMNS,
              [report_row(args.figure, report)])
    print(report.summary())
    print(f"wrote {args.figure}_observables.csv, {args.figure}_asymptote.csv, {args.figure}_report.csv to {out}")
    return _check_report(report, tolerances)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freedecay", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, times=True, interval=True):
        p.add_argument("--packet", required=True,
                       help="family:m=<int>,a0=<float>,k0=<float>,x0=<float> or grid:<csv with k,re,im>")
        if interval:
            p.add_argument("--interval", help="a,b (default -2a0,2a0)")
        if times:
            p.add_argument("--times", default=DEFAULT_TIMES, help="log:lo,hi,n or lin:lo,hi,n (reduced time T)")
        p.add_argument("--outdir", default="out")

    p = sub.add_parser("observe", help="write T,S,P")
    common(p)
    p.add_argument("--output", default="observables.csv")
    p.set_defaults(func=cmd_observe)

    p = sub.add_parser("asymptote", help="write T,S_lead,P_lead with the asymptotic profile")
    common(p)
    p.add_argument("--m", type=int, help="declared small-momentum order (default: detect)")
    p.add_argument("--output", default="asymptote.csv")
    p.set_defaults(func=cmd_asymptote)

    p = sub.add_parser("field", help="write x,re,im,abs2 at the requested reduced times")
    common(p, times=False, interval=False)
    p.add_argument("--at", required=True, help="comma-separated reduced times")
    p.add_argument("--x", default="-8,8,801", help="lo,hi,n position grid")
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("fit", help="fit tail exponents and compare with predictions")
    common(p)
    p.add_argument("--m", type=int)
    p.add_argument("--window", help="lo,hi fit window in T (default: last decade)")
    p.add_argument("--series", help="fit an existing observe CSV instead of simulating")
    p.add_argument("--tolerance", type=float, default=0.1)
    p.add_argument("--output", default="fit_report.csv")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("reproduce", help="figure presets with exponent checks")
    p.add_argument("figure", choices=sorted(FIGURES))
    p.add_argument("--outdir", default="out")
    p.add_argument("--tolerance", type=float, default=None, help="override both exponent tolerances")
    p.set_defaults(func=cmd_reproduce)
    return parser


VALUE_FLAGS = ("--interval", "--x", "--window", "--at", "--times")


def _join_values(argv):
    # "--interval -2,2" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for tok in it:
        if tok in VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_values(sys.argv[1:] if argv is None else argv))
    try:
        return args.func(args)
    except (UsageError, InvalidParameterError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FreeDecayError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
