"""Command-line front end.

    sastirap trace  --config run.json [--protocol sa] [--plot]
    sastirap sweep  --config run.json --workers 4
    sastirap grid   --config grid.json
    sastirap pulses --config run.json

On failure a single ``error: <Type>: <message>`` line goes to stderr and
the exit status is nonzero.
"""

import argparse
import sys

from .config import ConfigError, parse_config
from .experiments import run_scenario
from .output import emit_csv, emit_plot

_PROTOCOL_FLAGS = {"stirap": "stirap", "sa": "sa", "exact-cd": "exact-cd"}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sastirap",
        description="STIRAP and superadiabatic STIRAP in a three-level V system")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [("trace", "population evolution for one protocol"),
                        ("sweep", "transfer efficiency vs. duration T"),
                        ("grid", "robustness over the (sigma, delta_t) grid"),
                        ("pulses", "pulse envelopes on a uniform grid")]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="JSON configuration file")
        p.add_argument("--protocol", choices=sorted(_PROTOCOL_FLAGS))
        p.add_argument("--family",
                       choices=["gaussian", "exponential", "trigonometric"])
        p.add_argument("--omega0-mhz", type=float, help="peak Omega0/2pi (MHz)")
        p.add_argument("--delta-mhz", type=float, help="detuning Delta/2pi (MHz)")
        p.add_argument("--phase-a-deg", type=float,
                       help="phase of the Omega_a correction (degrees)")
        p.add_argument("--T-us", dest="T_us", type=float, help="duration (us)")
        p.add_argument("--sigma-us", type=float)
        p.add_argument("--delta-t-us", type=float)
        p.add_argument("--initial-state",
                       choices=["auto", "dark", "zero", "minus1", "plus1"])
        p.add_argument("--steps", dest="step_count", type=int)
        p.add_argument("--method", choices=["magnus4", "midpoint_exponential",
                                            "rk4"])
        p.add_argument("--workers", type=int)
        p.add_argument("--output-dir")
        p.add_argument("--plot", action="store_true", default=None)
        p.add_argument("--no-csv", dest="csv", action="store_false",
                       default=None)
    return parser


def main(argv=None):
    args = parser_args = build_parser().parse_args(argv)
    overrides = {k: v for k, v in vars(parser_args).items()
                 if k not in ("command", "config")}
    if args.protocol is not None:
        overrides["protocol"] = _PROTOCOL_FLAGS[args.protocol]
    try:
        config = parse_config(args.config, overrides, kind=args.command)
        config.output_dir.mkdir(parents=True, exist_ok=True)
        record = run_scenario(config.scenario)
        written = []
        if config.csv:
            written.append(emit_csv(record, config))
        if config.plot:
            written.append(emit_plot(record, config))
    except (ConfigError, ValueError, OSError, RuntimeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    eff = getattr(record, "efficiency", None)
    if isinstance(eff, float):
        print(f"efficiency {eff:.6f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
