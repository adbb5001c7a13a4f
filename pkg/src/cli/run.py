"""thermsal batch CLI: `python -m src.cli.run <subcommand> ...`.

Exit status: 0 success, 1 validation or usage error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import NoReturn

from src.cli.artifacts import (
    format_detection_table,
    format_saliency_table,
    read_curve_csv,
    write_curve_csv,
    write_curve_svg,
    write_detection_report,
    write_saliency_report,
)
from src.cli.workers import run_sharded
from src.config.settings import Settings, ensure_runtime_dirs, load_settings, validate_settings
from src.dataset.kaist_index import DatasetIndex, build_index, read_frame_list, write_frame_list
from src.dataset.protocol import (
    pedestrian_histogram,
    sample_split,
    select_annotation_subset,
    subset_summary,
)
from src.dataset.protocol_config import DatasetProtocol, load_protocol
from src.detmetrics.detections import read_detection_file
from src.detmetrics.evaluate import CONDITIONS, EvalReport, evaluate
from src.fusion.channels import FusionConfig, fuse_channel_replace, saliency_to_rgb
from src.imagery.raster import first_plane, load_image, save_image
from src.saliency.fine_grained import FineGrainedParams, fine_grained
from src.saliency.maps import SaliencyMap, ingest_external_saliency, load_saliency, save_saliency
from src.saliency.spectral import SpectralResidualParams, spectral_residual
from src.salmetrics.evaluate import (
    SaliencyScores,
    evaluate_saliency,
    load_ground_truth_dir,
    load_prediction_dir,
)
from src.salmetrics.measures import THRESHOLDINGS, SaliencyEvalConfig
from src.utils.errors import IoError, KeyMismatch, ValidationError
from src.utils.log import log_status, set_log_level

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2

IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg"}
SALIENCY_METHODS = ("spectral", "finegrained", "external")

# relative to THERMSAL_OUTPUT_DIR when --output/--out is omitted
DEFAULT_OUTPUTS = {
    "saliency": "saliency",
    "fuse": "fused",
    "dataset sample": "sampled_frames.txt",
    "dataset subset": "saliency_subset.txt",
    "dataset stats": "pedestrian_histogram.csv",
    "eval-det": "detection_report.csv",
    "eval-sal": "saliency_report.csv",
    "curves": "curves.svg",
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    dataset_root: str = ""
    output_dir: str = "output/"
    method: str = "spectral"
    fusion: FusionConfig = field(default_factory=FusionConfig)
    condition: str = "all"
    workers: int = 1


def validate_run_config(cfg: RunConfig) -> list[str]:
    errors: list[str] = []
    if not cfg.output_dir.strip():
        errors.append("output path must not be empty")
    if cfg.workers < 1:
        errors.append("worker count must be >= 1")
    if cfg.method not in SALIENCY_METHODS:
        errors.append(f"method must be one of {', '.join(SALIENCY_METHODS)}")
    if cfg.condition not in (*CONDITIONS, "each"):
        errors.append("condition must be day, night, all or each")
    return errors


# ---------------------------------------------------------------- helpers


def _image_files(directory: str | Path) -> dict[str, Path]:
    """Relative path without suffix -> file, sorted."""
    root = Path(directory)
    if not root.is_dir():
        raise IoError(f"{root}: not a directory")
    return {
        path.relative_to(root).with_suffix("").as_posix(): path
        for path in sorted(root.rglob("*"))
        if path.is_file() and path.suffix.lower() in IMAGE_SUFFIXES
    }


def _output_path(output_dir: str | Path, key: str) -> Path:
    target = Path(output_dir) / f"{key}.png"
    target.parent.mkdir(parents=True, exist_ok=True)
    return target


def _named(spec: str) -> tuple[str, str]:
    """`NAME=PATH` or bare `PATH` (named after its stem)."""
    if "=" in spec:
        name, _, path = spec.partition("=")
        if not name.strip() or not path.strip():
            raise ValidationError(f"expected NAME=PATH, got {spec!r}")
        return name.strip(), path.strip()
    return Path(spec).stem, spec


def _protocol(args: argparse.Namespace, settings: Settings) -> DatasetProtocol:
    return load_protocol(args.protocol or settings.protocol_config_path)


def _index(args: argparse.Namespace, protocol: DatasetProtocol) -> DatasetIndex:
    return build_index(args.dataset, protocol)


# ---------------------------------------------------------------- subcommands


def _cmd_saliency(args: argparse.Namespace, cfg: RunConfig, settings: Settings) -> int:
    inputs = _image_files(args.input)
    references = _image_files(args.reference) if args.reference else {}

    sr_params = SpectralResidualParams(
        working_width=args.working_size,
        working_height=args.working_size,
        smoothing_sigma=args.sigma,
    )
    try:
        radii = tuple(int(r) for r in args.radii.split(",") if r.strip())
    except ValueError as exc:
        raise ValidationError(f"--radii must be comma-separated integers: {args.radii}") from exc
    fg_params = FineGrainedParams(radii)

    def generate(key: str) -> str:
        source = inputs[key]
        if cfg.method == "external":
            ref = references.get(key)
            if ref is not None:
                frame = first_plane(load_image(ref))
                smap = ingest_external_saliency(source, frame.width, frame.height)
            else:
                smap = ingest_external_saliency(source)
        else:
            frame = first_plane(load_image(source))
            if cfg.method == "spectral":
                smap = spectral_residual(frame, sr_params)
            else:
                smap = fine_grained(frame, fg_params)
        save_saliency(smap, _output_path(args.output, key))
        return key

    done = run_sharded(generate, list(inputs), cfg.workers)
    for key in done:
        log_status("saliency", "success", method=cfg.method, file=key)
    log_status("saliency", "success", method=cfg.method, maps=len(done), workers=cfg.workers)
    return EXIT_OK


def _cmd_fuse(args: argparse.Namespace, cfg: RunConfig, settings: Settings) -> int:
    thermal = _image_files(args.thermal)
    saliency = _image_files(args.saliency)
    missing = sorted(set(thermal) - set(saliency))
    if missing:
        raise KeyMismatch(f"no saliency map for {len(missing)} frames, e.g. {missing[:5]}")

    def fuse(key: str) -> str:
        smap: SaliencyMap = load_saliency(saliency[key])
        if args.mode == "saliency-only":
            fused = saliency_to_rgb(smap)
        else:
            frame = first_plane(load_image(thermal[key]))
            fused = fuse_channel_replace(frame, smap, cfg.fusion)
        save_image(fused, _output_path(args.output, key))
        return key

    done = run_sharded(fuse, list(thermal), cfg.workers)
    log_status(
        "fusion",
        "success",
        mode=args.mode,
        channel=cfg.fusion.replaced_channel,
        images=len(done),
    )
    return EXIT_OK


def _cmd_dataset_sample(args: argparse.Namespace, cfg: RunConfig, settings: Settings) -> int:
    protocol = _protocol(args, settings)
    if args.offset is not None:
        protocol = replace(protocol, sample_offset=args.offset)
    index = _index(args, protocol)
    frames = sample_split(index, args.split, protocol, require_pedestrians=args.nonempty)
    write_frame_list(frames, args.out)
    summary = subset_summary(index, frames, protocol)
    log_status("dataset", "success", command="sample", split=args.split, **summary)
    return EXIT_OK


def _cmd_dataset_subset(args: argparse.Namespace, cfg: RunConfig, settings: Settings) -> int:
    protocol = _protocol(args, settings)
    index = _index(args, protocol)
    frames = select_annotation_subset(index, protocol, split=args.split)
    write_frame_list(frames, args.out)
    summary = subset_summary(index, frames, protocol)
    log_status("dataset", "success", command="subset", split=args.split, **summary)
    return EXIT_OK


def _cmd_dataset_stats(args: argparse.Namespace, cfg: RunConfig, settings: Settings) -> int:
    protocol = _protocol(args, settings)
    index = _index(args, protocol)
    if args.frames:
        frames = read_frame_list(args.frames, index)
    else:
        frames = select_annotation_subset(index, protocol)
    histogram = pedestrian_histogram(index, frames, protocol)
    text = "pedestrians,frames\n" + "".join(f"{k},{v}\n" for k, v in histogram.items())
    out = Path(args.out)
    try:
        out.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise IoError(f"{out}: {exc}") from exc
    summary = subset_summary(index, frames, protocol)
    log_status("dataset", "success", command="stats", **summary)
    return EXIT_OK


def _cmd_eval_det(args: argparse.Namespace, cfg: RunConfig, settings: Settings) -> int:
    protocol = _protocol(args, settings)
    index = _index(args, protocol)
    if args.frames:
        frames = read_frame_list(args.frames, index)
    else:
        frames = sample_split(index, "test", protocol)
    conditions = list(CONDITIONS) if cfg.condition == "each" else [cfg.condition]
    methods = [_named(spec) for spec in args.dets]
    detections = {name: read_detection_file(path, index) for name, path in methods}

    jobs = [(name, condition) for name, _ in methods for condition in conditions]

    def run_job(job: tuple[str, str]) -> EvalReport:
        name, condition = job
        return evaluate(
            index,
            detections[name],
            condition,
            frames=frames,
            protocol=protocol,
            iou_thresh=args.iou,
            eleven_point=args.eleven_point,
            method=name,
        )

    reports = run_sharded(run_job, jobs, cfg.workers)
    out = Path(args.out)
    write_detection_report(reports, out)
    for report in reports:
        curve_path = out.with_name(f"{out.stem}_{report.method}_{report.condition}_curve.csv")
        write_curve_csv(report.curve, curve_path)
        log_status(
            "eval_det",
            "success",
            method=report.method,
            condition=report.condition,
            lamr=report.lamr,
            map=report.map,
        )
    if args.svg:
        svg = Path(args.svg)
        for condition in conditions:
            target = svg if len(conditions) == 1 else svg.with_name(f"{svg.stem}_{condition}.svg")
            curves = [(r.method, r.curve) for r in reports if r.condition == condition]
            write_curve_svg(curves, target)
    print(format_detection_table(reports, baseline=args.baseline), end="")
    return EXIT_OK


def _cmd_eval_sal(args: argparse.Namespace, cfg: RunConfig, settings: Settings) -> int:
    gts = load_ground_truth_dir(args.gt)
    eval_cfg = SaliencyEvalConfig(beta_squared=args.beta2, thresholding=args.thresholding)
    methods = [_named(spec) for spec in args.pred]

    def score(method: tuple[str, str]) -> SaliencyScores:
        name, directory = method
        preds = load_prediction_dir(directory, reference=gts)
        return evaluate_saliency(preds, gts, eval_cfg, method=name)

    scores = run_sharded(score, methods, cfg.workers)
    write_saliency_report(scores, args.out)
    for item in scores:
        log_status("eval_sal", "success", method=item.method, f_beta=item.f_beta, mae=item.mae)
    print(format_saliency_table(scores), end="")
    return EXIT_OK


def _cmd_curves(args: argparse.Namespace, cfg: RunConfig, settings: Settings) -> int:
    curves = [(name, read_curve_csv(path)) for name, path in map(_named, args.curve)]
    write_curve_svg(curves, args.out)
    log_status("curves", "success", curves=len(curves), out=args.out)
    return EXIT_OK


Handler = Callable[[argparse.Namespace, RunConfig, Settings], int]


# ---------------------------------------------------------------- parser


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--config", default=None, help="key=value defaults file")


def _dataset_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dataset", required=True, help="KAIST root directory")
    parser.add_argument("--protocol", default=None, help="protocol YAML (overrides env)")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = _Parser(prog="thermsal", description="Thermal saliency pipeline and evaluation.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    leaves: dict[str, argparse.ArgumentParser] = {}

    p = sub.add_parser("saliency", help="generate static or ingest external saliency maps")
    p.add_argument("--method", choices=SALIENCY_METHODS, default="spectral")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default=None, help="default: under THERMSAL_OUTPUT_DIR")
    p.add_argument("--reference", default=None, help="thermal frames giving target sizes")
    p.add_argument("--working-size", type=int, default=64)
    p.add_argument("--sigma", type=float, default=2.5)
    p.add_argument("--radii", default="3,7,15,31")
    p.set_defaults(handler=_cmd_saliency)
    leaves["saliency"] = p

    p = sub.add_parser("fuse", help="replace one thermal channel with the saliency map")
    p.add_argument("--thermal", required=True)
    p.add_argument("--saliency", required=True)
    p.add_argument("--output", default=None, help="default: under THERMSAL_OUTPUT_DIR")
    p.add_argument("--channel", type=int, choices=(0, 1, 2), default=2)
    p.add_argument("--mode", choices=("replace", "saliency-only"), default="replace")
    p.set_defaults(handler=_cmd_fuse)
    leaves["fuse"] = p

    p = sub.add_parser("dataset", help="KAIST sampling protocol")
    dsub = p.add_subparsers(dest="dataset_command", required=True, parser_class=_Parser)
    d = dsub.add_parser("sample", help="every 3rd train / 20th test frame")
    _dataset_common(d)
    d.add_argument("--split", choices=("train", "test"), required=True)
    d.add_argument("--out", default=None, help="default: under THERMSAL_OUTPUT_DIR")
    d.add_argument("--offset", type=int, default=None)
    d.add_argument("--nonempty", action="store_true", help="drop frames without pedestrians")
    d.set_defaults(handler=_cmd_dataset_sample)
    leaves["dataset sample"] = d
    d = dsub.add_parser("subset", help="saliency annotation subset")
    _dataset_common(d)
    d.add_argument("--split", choices=("train", "test"), default="train")
    d.add_argument("--out", default=None, help="default: under THERMSAL_OUTPUT_DIR")
    d.set_defaults(handler=_cmd_dataset_subset)
    leaves["dataset subset"] = d
    d = dsub.add_parser("stats", help="pedestrians-per-frame histogram")
    _dataset_common(d)
    d.add_argument("--frames", default=None)
    d.add_argument("--out", default=None, help="default: under THERMSAL_OUTPUT_DIR")
    d.set_defaults(handler=_cmd_dataset_stats)
    leaves["dataset stats"] = d

    p = sub.add_parser("eval-det", help="LAMR and mAP of detection files")
    _dataset_common(p)
    p.add_argument("--dets", action="append", required=True, help="[NAME=]FILE, repeatable")
    p.add_argument("--condition", choices=(*CONDITIONS, "each"), default="all")
    p.add_argument("--out", default=None, help="default: under THERMSAL_OUTPUT_DIR")
    p.add_argument("--frames", default=None)
    p.add_argument("--baseline", default=None)
    p.add_argument("--svg", default=None)
    p.add_argument("--iou", type=float, default=0.5)
    p.add_argument("--eleven-point", action="store_true")
    p.set_defaults(handler=_cmd_eval_det)
    leaves["eval-det"] = p

    p = sub.add_parser("eval-sal", help="F-measure and MAE of saliency maps")
    p.add_argument("--pred", action="append", required=True, help="[NAME=]DIR, repeatable")
    p.add_argument("--gt", required=True)
    p.add_argument("--out", default=None, help="default: under THERMSAL_OUTPUT_DIR")
    p.add_argument("--beta2", type=float, default=0.3)
    p.add_argument("--thresholding", choices=THRESHOLDINGS, default="adaptive_2x_mean")
    p.set_defaults(handler=_cmd_eval_sal)
    leaves["eval-sal"] = p

    p = sub.add_parser("curves", help="plot miss rate vs FPPI curve files")
    p.add_argument("--curve", action="append", required=True, help="NAME=CSV, repeatable")
    p.add_argument("--out", default=None, help="default: under THERMSAL_OUTPUT_DIR")
    p.set_defaults(handler=_cmd_curves)
    leaves["curves"] = p

    for leaf in leaves.values():
        _common(leaf)
    return parser, leaves


def read_config_file(path: str | Path) -> dict[str, str]:
    """Plain `key=value` lines; `#` starts a comment; keys use option names."""
    file_path = Path(path)
    try:
        lines = file_path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise IoError(f"{file_path}: {exc}") from exc
    values: dict[str, str] = {}
    for line_no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ValidationError(f"{file_path}: line {line_no}: expected key=value")
        values[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return values


def _apply_config(parser: argparse.ArgumentParser, values: dict[str, str]) -> dict[str, list[str]]:
    """Install config values as option defaults so explicit flags still win.

    Repeatable options are returned separately and used only when the flag is absent.
    """
    repeatable: dict[str, list[str]] = {}
    for action in parser._actions:
        if action.dest not in values:
            continue
        raw = values[action.dest]
        if isinstance(action, argparse._AppendAction):
            repeatable[action.dest] = [item.strip() for item in raw.split(",") if item.strip()]
            action.required = False
        elif isinstance(action, argparse._StoreTrueAction):
            action.default = raw.lower() in {"1", "true", "yes", "on"}
        else:
            try:
                value = action.type(raw) if callable(action.type) else raw
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"config {action.dest}={raw!r}: {exc}") from exc
            if action.choices is not None and value not in action.choices:
                choices = ", ".join(str(choice) for choice in action.choices)
                raise ValidationError(f"config {action.dest}={raw!r}: expected one of {choices}")
            action.default = value
            action.required = False
    return repeatable


def _leaf_name(argv: Sequence[str], leaves: dict[str, argparse.ArgumentParser]) -> str | None:
    positional = [arg for arg in argv if not arg.startswith("-")]
    if len(positional) >= 2 and f"{positional[0]} {positional[1]}" in leaves:
        return f"{positional[0]} {positional[1]}"
    if positional and positional[0] in leaves:
        return positional[0]
    return None


def _config_path(argv: Sequence[str]) -> str | None:
    for pos, arg in enumerate(argv):
        if arg == "--config" and pos + 1 < len(argv):
            return argv[pos + 1]
        if arg.startswith("--config="):
            return arg.split("=", 1)[1]
    return None


def _default_output(args: argparse.Namespace, settings: Settings) -> None:
    """Put an omitted --output/--out under THERMSAL_OUTPUT_DIR."""
    dest = "output" if hasattr(args, "output") else "out"
    if getattr(args, dest, None):
        return
    leaf = args.command
    if leaf == "dataset":
        leaf = f"dataset {args.dataset_command}"
    ensure_runtime_dirs(settings)
    setattr(args, dest, str(Path(settings.output_dir) / DEFAULT_OUTPUTS[leaf]))


def run_command(argv: Sequence[str]) -> int:
    argv = list(argv)
    settings = load_settings()
    set_log_level(settings.log_level)
    errors = validate_settings(settings)
    if errors:
        for error in errors:
            log_status("config", "failed", error=error)
        return EXIT_VALIDATION

    parser, leaves = build_parser()
    try:
        repeatable: dict[str, list[str]] = {}
        config_path = _config_path(argv)
        leaf = _leaf_name(argv, leaves)
        if config_path and leaf:
            repeatable = _apply_config(leaves[leaf], read_config_file(config_path))
        args = parser.parse_args(argv)
    except _UsageError:
        return EXIT_VALIDATION
    except SystemExit as exc:
        return int(exc.code or 0)
    except ValidationError as exc:
        log_status("config", "failed", error=str(exc))
        return EXIT_VALIDATION
    except OSError as exc:
        log_status("config", "failed", error=str(exc))
        return EXIT_IO
    for dest, items in repeatable.items():
        if not getattr(args, dest, None):
            setattr(args, dest, items)

    try:
        _default_output(args, settings)
        cfg = RunConfig(
            dataset_root=getattr(args, "dataset", "") or "",
            output_dir=str(getattr(args, "output", None) or getattr(args, "out", None) or ""),
            method=getattr(args, "method", "spectral"),
            fusion=FusionConfig(replaced_channel=getattr(args, "channel", 2)),
            condition=getattr(args, "condition", "all"),
            workers=settings.workers if settings.workers_from_env else args.workers,
        )
        problems = validate_run_config(cfg)
        if problems:
            raise ValidationError("; ".join(problems))
        handler: Handler = args.handler
        return handler(args, cfg, settings)
    except ValidationError as exc:
        log_status(args.command, "failed", error=str(exc))
        return EXIT_VALIDATION
    except OSError as exc:
        log_status(args.command, "failed", error=str(exc))
        return EXIT_IO


def main() -> None:
    raise SystemExit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
