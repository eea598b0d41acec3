#!/usr/bin/env python

"""
ColourSeg CLI - command-line front end

Subcommands: segment, eval, synth, sweep, presets, schema. Diagnostics go to stderr;
machine outputs go to files only.
"""

import argparse
import asyncio
import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

from loguru import logger
from rich.console import Console
from rich.table import Table

from src.config.config_manager import ConfigManager, PipelineConfig, config_presets
from src.errors import ColourSegError
from src.evaluation.dataset import EvaluationReport, SweepReport, evaluate_directory, sweep_parameters
from src.pipeline import Segmenter
from src.raster import read_rgb, write_json, write_label_map, write_mask, write_rgb
from src.reports import REPORT_MODELS, EvalReportDocument, RunReportDocument, report_schema
from src.synth import SCENE_KINDS, SynthSceneSpec, generate_scene

# CLI flag -> PipelineConfig field
PIPELINE_FLAGS = {
    "sigma0": "sigma0",
    "sigma_g": "sigma_g",
    "delta_l": "delta_l",
    "mu_b": "mu_b",
    "homography_a": "a",
    "homography_b": "b",
    "fr": "f_r",
    "gs": "g_s",
    "radius": "radius",
    "smoothing": "smoothing",
    "use_homography": "use_homography",
    "use_lt_check": "use_lt_check",
    "use_offscale": "use_offscale",
}


def _add_pipeline_arguments(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("pipeline parameters (0-255 colour units)")
    group.add_argument("--preset", choices=sorted(config_presets()), help="reference configuration")
    group.add_argument("--config", type=Path, help="flat key = value parameter file")
    group.add_argument("--sigma0", type=float, help="rank-0 RMS threshold")
    group.add_argument("--sigma-g", dest="sigma_g", type=float, help="KL isolation threshold")
    group.add_argument("--delta-l", dest="delta_l", type=float, help="L/T-shape distance threshold")
    group.add_argument("--mu-b", dest="mu_b", type=float, help="off-scale brightness threshold")
    group.add_argument("--homography-a", "--a", dest="homography_a", type=float, help="homography parameter a")
    group.add_argument("--homography-b", "--b", dest="homography_b", type=float, help="homography parameter b")
    group.add_argument("--fr", type=float, help="bilateral range sigma")
    group.add_argument("--gs", type=float, help="bilateral spatial sigma (px)")
    group.add_argument("--radius", type=int, help="bilateral window radius (px)")
    group.add_argument("--smoothing", choices=["bilateral", "gaussian", "none"])
    group.add_argument("--no-homography", dest="use_homography", action="store_const", const=False)
    group.add_argument("--no-lt-check", dest="use_lt_check", action="store_const", const=False)
    group.add_argument("--no-offscale", dest="use_offscale", action="store_const", const=False)


def _float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


class ColourSegCLI:
    """Colour segmentation command-line application"""

    def __init__(self, env_file: Optional[str] = None):
        self.config_manager = ConfigManager(env_file)
        self._setup_logging()
        self.console = Console(stderr=True)
        self.parser = self._build_parser()

    def _setup_logging(self):
        """Setup logging configuration"""
        config = self.config_manager.config
        logger.remove()
        logger.add(
            sys.stderr,
            level=config.log_level,
            format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>",
            colorize=True,
        )
        if config.log_file:
            logger.add(
                config.log_file,
                level=config.log_level,
                format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}",
                rotation=config.log_rotation,
                retention="7 days",
                compression="zip",
                encoding="utf-8",
            )

    def _build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(prog="colorseg", description="Linear colour segmentation")
        commands = parser.add_subparsers(dest="command", required=True)

        segment = commands.add_parser("segment", help="segment one RGB image")
        segment.add_argument("input", type=Path)
        segment.add_argument("-o", "--output", type=Path, help="label map (default <stem>.labels.png)")
        segment.add_argument("--report", type=Path, help="JSON run report")
        _add_pipeline_arguments(segment)
        segment.set_defaults(handler=self.cmd_segment)

        evaluate = commands.add_parser("eval", help="score label maps against ground truth")
        evaluate.add_argument("predictions", type=Path)
        evaluate.add_argument("ground_truth", type=Path)
        evaluate.add_argument("-o", "--output", type=Path, required=True, help="JSON evaluation report")
        evaluate.add_argument("--threads", type=int, help="worker threads (default COLORSEG_THREADS)")
        evaluate.set_defaults(handler=self.cmd_eval)

        synth = commands.add_parser("synth", help="generate synthetic scenes with ground truth")
        synth.add_argument("kind", choices=SCENE_KINDS)
        synth.add_argument("-o", "--output", type=Path, required=True, help="output directory")
        synth.add_argument("--width", type=int, default=128)
        synth.add_argument("--height", type=int, default=128)
        synth.add_argument("--segments", type=int, default=6)
        synth.add_argument("--noise", type=float, default=3.0, help="Gaussian noise sigma (0-255)")
        synth.add_argument("--seed", type=int, default=0)
        synth.add_argument("--count", type=int, default=1, help="scenes with consecutive seeds")
        synth.set_defaults(handler=self.cmd_synth)

        sweep = commands.add_parser("sweep", help="grid search over thresholds on a dataset")
        sweep.add_argument("images", type=Path)
        sweep.add_argument("ground_truth", type=Path)
        sweep.add_argument("-o", "--output", type=Path, required=True, help="JSON sweep report")
        sweep.add_argument("--sigma0-values", type=_float_list, default=[6.0, 8.5, 10.0])
        sweep.add_argument("--delta-l-values", type=_float_list, default=[22.5, 25.0, 30.0])
        sweep.add_argument("--sigma-g-values", type=_float_list)
        sweep.add_argument("--mu-b-values", type=_float_list)
        sweep.add_argument("--threads", type=int)
        _add_pipeline_arguments(sweep)
        sweep.set_defaults(handler=self.cmd_sweep)

        presets = commands.add_parser("presets", help="list reference configurations")
        presets.set_defaults(handler=self.cmd_presets)

        schema = commands.add_parser("schema", help="write the JSON Schema of a report")
        schema.add_argument("kind", choices=sorted(REPORT_MODELS))
        schema.add_argument("-o", "--output", type=Path, required=True, help="schema file")
        schema.set_defaults(handler=self.cmd_schema)
        return parser

    def run(self, argv: Optional[List[str]] = None) -> int:
        """Parse arguments and dispatch; returns the process exit code"""
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as e:
            return 0 if e.code in (0, None) else 2

        try:
            args.handler(args)
            return 0
        except ColourSegError as e:
            logger.error(f"❌ {e}")
            return e.exit_code
        except OSError as e:
            logger.error(f"❌ I/O failure: {e}")
            return 2

    def _pipeline_config(self, args: argparse.Namespace) -> PipelineConfig:
        overrides = {field: getattr(args, flag) for flag, field in PIPELINE_FLAGS.items()}
        return self.config_manager.load_pipeline_config(args.preset, args.config, overrides)

    def _threads(self, args: argparse.Namespace) -> int:
        return max(1, args.threads or self.config_manager.config.threads)

    def cmd_segment(self, args: argparse.Namespace):
        config = self._pipeline_config(args)
        image = read_rgb(args.input)
        result = Segmenter(config).segment_image(image)

        output = args.output or args.input.with_name(f"{args.input.stem}.labels.png")
        echo = config.echo()
        report = RunReportDocument(
            input=str(args.input),
            preset=args.preset,
            config=echo,
            timestamp=datetime.now().isoformat(),
            success=True,
            **result.report.to_dict(),
        ).model_dump(mode="json")

        write_label_map(output, result.label_map.labels)
        write_json(
            output.with_suffix(".json"),
            {
                "source": str(args.input),
                "segment_count": result.label_map.segment_count,
                "width": result.label_map.width,
                "height": result.label_map.height,
                "config": echo,
            },
        )
        if args.report:
            write_json(args.report, report)
        logger.success(f"🎯 {result.label_map.segment_count} segments written to {output}")

    def cmd_eval(self, args: argparse.Namespace):
        evaluation = asyncio.run(
            evaluate_directory(args.predictions, args.ground_truth, self._threads(args))
        )
        document = EvalReportDocument(
            timestamp=datetime.now().isoformat(), success=True, **evaluation.to_dict()
        ).model_dump(mode="json")
        write_json(args.output, document)
        self._print_evaluation(evaluation)

    def cmd_synth(self, args: argparse.Namespace):
        specs = [
            SynthSceneSpec(
                kind=args.kind,
                width=args.width,
                height=args.height,
                segments=args.segments,
                noise=args.noise,
                seed=args.seed + k,
            )
            for k in range(max(1, args.count))
        ]
        scenes = [generate_scene(spec) for spec in specs]

        for folder in ("images", "gt", "masks"):
            (args.output / folder).mkdir(parents=True, exist_ok=True)
        for scene in scenes:
            name = f"{scene.spec.kind}-{scene.spec.seed:04d}"
            write_rgb(args.output / "images" / f"{name}.png", scene.image)
            write_label_map(args.output / "gt" / f"{name}.png", scene.labels)
            if scene.stripe_mask is not None:
                write_mask(args.output / "masks" / f"{name}.stripe.png", scene.stripe_mask)
        logger.success(f"🧪 {len(scenes)} {args.kind} scenes written to {args.output}")

    def cmd_sweep(self, args: argparse.Namespace):
        base = self._pipeline_config(args)
        grid: Dict[str, List[float]] = {"sigma0": args.sigma0_values, "delta_l": args.delta_l_values}
        if args.sigma_g_values:
            grid["sigma_g"] = args.sigma_g_values
        if args.mu_b_values:
            grid["mu_b"] = args.mu_b_values

        sweep = asyncio.run(
            sweep_parameters(args.images, args.ground_truth, base, grid, self._threads(args))
        )
        payload: Dict[str, Any] = sweep.to_dict()
        payload.update(base_config=base.echo(), timestamp=datetime.now().isoformat(), success=True)
        write_json(args.output, payload)
        self._print_sweep(sweep)

    def cmd_presets(self, args: argparse.Namespace):
        table = Table(title="Reference configurations")
        columns = ["sigma0", "sigma_g", "delta_l", "mu_b", "a", "b", "f_r", "g_s"]
        table.add_column("preset", style="cyan")
        for column in columns:
            table.add_column(column, justify="right")
        for name, config in config_presets().items():
            table.add_row(name, *(f"{getattr(config, c):g}" for c in columns))
        self.console.print(table)

    def cmd_schema(self, args: argparse.Namespace):
        write_json(args.output, report_schema(args.kind))
        logger.success(f"📝 {args.kind} report schema written to {args.output}")

    def _print_evaluation(self, evaluation: EvaluationReport):
        table = Table(title="Evaluation")
        for column in ("image", "mIoU", "matched", "GT segments", "shadow matches"):
            table.add_column(column, justify="right" if column != "image" else "left")
        for stem, result in sorted(evaluation.images.items()):
            table.add_row(
                stem,
                f"{result.score:.4f}",
                str(len(result.pairs)),
                str(result.gt_total),
                str(sum(1 for p in result.pairs if p.shadow)),
            )
        table.add_row("[bold]dataset[/bold]", f"[bold]{evaluation.miou:.4f}[/bold]", "", str(evaluation.gt_segments), "")
        self.console.print(table)

    def _print_sweep(self, sweep: SweepReport):
        best_params, _ = sweep.best
        table = Table(title="Parameter sweep")
        keys = list(best_params)
        for key in keys:
            table.add_column(key, justify="right")
        table.add_column("mIoU", justify="right")
        for params, result in sweep.rows:
            style = "bold green" if params == best_params else None
            table.add_row(*(f"{params[k]:g}" for k in keys), f"{result.miou:.4f}", style=style)
        self.console.print(table)
