"""Command-line interface of the figure renderer."""

from __future__ import annotations

import argparse
import sys

from .figure import FigureSpec, render_analysis_figure, render_phase_portrait
from .schema import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tipfig",
        description="Render analysis figures and phase portraits from pipeline CSVs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", help="render a multi-panel analysis figure")
    p.add_argument("--records", required=True, help="records CSV from the analysis pipeline")
    p.add_argument("--trajectory", required=True, help="trajectory CSV")
    p.add_argument("--panels", default="ABCD", help="panel subset, e.g. AB")
    p.add_argument("--out", required=True, help="output image (png or svg)")
    p.add_argument(
        "--bifurcation-time",
        type=float,
        help="vertical-marker time (default: inferred from the forcing ramp)",
    )
    p.add_argument("--d-channel", choices=["x", "y"], default="y",
                   help="channel whose AR(1) rate panel D overlays")
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("portrait", help="render a phase-portrait CSV")
    p.add_argument("--portrait", required=True, help="portrait CSV (set,x,y)")
    p.add_argument("--out", required=True, help="output image (png or svg)")
    p.set_defaults(func=_cmd_portrait)

    return parser


def _cmd_render(args) -> int:
    spec = FigureSpec(
        records_path=args.records,
        trajectory_path=args.trajectory,
        output_path=args.out,
        panels=args.panels,
        bifurcation_time=args.bifurcation_time,
        d_channel=args.d_channel,
    )
    print(render_analysis_figure(spec))
    return 0


def _cmd_portrait(args) -> int:
    print(render_phase_portrait(args.portrait, args.out))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
