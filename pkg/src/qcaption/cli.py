"""Command-line entry point.

Subcommands: frames extract, fixtures video, eval, compare, convert, serve.
Backends and prompt overrides come from a JSON config file; secrets only via
the environment variables named there.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .datasets import (
    convert_activitynet_qa,
    convert_msrvtt,
    convert_youcook2,
    write_manifest,
)
from .errors import QCaptionError
from .eval_harness import EvalReport, RunSpec, compare_runs, run_eval
from .frame_selection import select_frames
from .fusion_pipeline import PipelineConfig
from .media_io import probe
from .media_io.fixtures import make_constant_video, make_scene_video
from .media_io.png import write_png
from .model_backends import BackendsFileConfig, BackendSet

_CLI_STRATEGIES = ("katna", "regular", "random", "first-n", "single")


def _bool_flag(value: str) -> bool:
    lowered = value.lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {value!r}")


def cmd_frames_extract(args) -> int:
    handle = probe(args.video)
    strategy = args.strategy.replace("-", "_")
    params = {}
    if strategy == "katna":
        params = {"diff_threshold": args.diff_threshold, "bins": args.bins}
    elif strategy == "first_n":
        params = {"stride_s": args.stride}
    selection = select_frames(handle, strategy, args.n, seed=args.seed, **params)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for k, frame in enumerate(selection.frames):
        png_path = out_dir / f"frame_{k:03d}.png"
        write_png(frame, png_path)
        entries.append({
            "file": png_path.name,
            "frame_index": frame.frame_index,
            "timestamp_s": frame.timestamp_s,
        })
    report = {
        "video": str(handle.path),
        "strategy": selection.strategy,
        "seed": selection.seed,
        "params": selection.params,
        "frames": entries,
        "trace": selection.trace,
    }
    report_path = out_dir / "selection.json"
    report_path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    print(f"wrote {len(entries)} frames and {report_path}")
    return 0


def cmd_fixtures_video(args) -> int:
    if args.kind == "constant":
        make_constant_video(args.out, duration_s=args.scenes * args.scene_len,
                            fps=args.fps, width=args.width, height=args.height)
    else:
        make_scene_video(args.out, n_scenes=args.scenes, scene_len_s=args.scene_len,
                         fps=args.fps, width=args.width, height=args.height,
                         kind=args.kind)
    print(f"wrote {args.out}")
    return 0


def cmd_eval(args) -> int:
    file_config = BackendsFileConfig.load(args.backends)
    out_dir = Path(args.out)
    use_cache = not args.no_cache
    cache_dir = file_config.cache_dir or str(out_dir / "cache")
    backends = BackendSet.from_file_config(file_config, use_cache=use_cache,
                                           cache_dir=cache_dir)
    strategy = args.strategy.replace("-", "_")
    label = args.label or (
        f"{strategy} n={args.n}" + (" + LLM" if args.use_llm else " (no LLM)"))
    pipeline = PipelineConfig(
        strategy=strategy,
        n_frames=args.n,
        seed=args.seed,
        use_llm=args.use_llm,
        task_kind=args.task,
        prompt_overrides=file_config.prompts,
        max_workers=args.workers,
    )
    spec = RunSpec(
        label=label,
        pipeline=pipeline,
        manifest_path=args.manifest,
        backends=backends,
        output_dir=out_dir,
        resume=args.resume,
        workers=args.workers,
    )
    try:
        run_eval(spec)
    finally:
        backends.close()
    print((out_dir / "report.txt").read_text(), end="")
    print(f"report written to {out_dir / 'report.json'}")
    return 0


def cmd_compare(args) -> int:
    reports = [EvalReport.load(p) for p in args.reports]
    table = compare_runs(reports, args.baseline)
    print(table.format_text(), end="")
    if args.out:
        Path(args.out).write_text(json.dumps(table.to_dict(), indent=2, sort_keys=True) + "\n")
    return 0


def cmd_convert(args) -> int:
    strict = not args.lenient
    if args.dataset == "youcook2":
        manifest = convert_youcook2(args.annotations, args.video_dir, strict=strict)
    elif args.dataset == "msrvtt":
        manifest = convert_msrvtt(args.annotations, args.video_dir, strict=strict)
    else:
        manifest = convert_activitynet_qa(args.questions, args.answers,
                                          args.video_dir, strict=strict)
    write_manifest(manifest, args.out)
    print(f"wrote {len(manifest.tasks)} tasks to {args.out}")
    for violation in manifest.violations:
        print(f"warning: {violation}", file=sys.stderr)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .qa_service import ServiceConfig, create_app

    file_config = BackendsFileConfig.load(args.backends)
    backends = BackendSet.from_file_config(file_config, use_cache=False)
    config = ServiceConfig(
        backends=backends,
        data_dir=args.data_dir,
        ui_dir=args.ui,
        qa_mode=args.qa_mode,
        prompt_overrides=file_config.prompts,
    )
    uvicorn.run(create_app(config), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcaption")
    sub = parser.add_subparsers(dest="command", required=True)

    frames = sub.add_parser("frames", help="frame extraction tools")
    frames_sub = frames.add_subparsers(dest="frames_command", required=True)
    extract = frames_sub.add_parser("extract", help="extract keyframes to PNG files")
    extract.add_argument("--video", required=True)
    extract.add_argument("--strategy", choices=_CLI_STRATEGIES, default="katna")
    extract.add_argument("--n", type=int, default=8)
    extract.add_argument("--seed", type=int, default=0)
    extract.add_argument("--out", required=True)
    extract.add_argument("--diff-threshold", type=float, default=5.0)
    extract.add_argument("--bins", type=int, default=16)
    extract.add_argument("--stride", type=float, default=1.0)
    extract.set_defaults(func=cmd_frames_extract)

    fixtures = sub.add_parser("fixtures", help="synthesize labeled test videos")
    fixtures_sub = fixtures.add_subparsers(dest="fixtures_command", required=True)
    fixture_video = fixtures_sub.add_parser("video")
    fixture_video.add_argument("--out", required=True)
    fixture_video.add_argument("--scenes", type=int, default=8)
    fixture_video.add_argument("--scene-len", type=float, default=1.0)
    fixture_video.add_argument("--fps", type=float, default=10.0)
    fixture_video.add_argument("--width", type=int, default=64)
    fixture_video.add_argument("--height", type=int, default=64)
    fixture_video.add_argument("--kind", choices=("solid", "checker", "constant"),
                               default="solid")
    fixture_video.set_defaults(func=cmd_fixtures_video)

    evaluate = sub.add_parser("eval", help="run a benchmark evaluation")
    evaluate.add_argument("--manifest", required=True)
    evaluate.add_argument("--task", choices=("caption", "qa"), required=True)
    evaluate.add_argument("--strategy",
                          choices=_CLI_STRATEGIES + ("multiclips",), default="katna")
    evaluate.add_argument("--n", type=int, default=8)
    evaluate.add_argument("--seed", type=int, default=17)
    evaluate.add_argument("--use-llm", type=_bool_flag, default=True)
    evaluate.add_argument("--backends", required=True)
    evaluate.add_argument("--out", required=True)
    evaluate.add_argument("--resume", action="store_true")
    evaluate.add_argument("--label", default=None)
    evaluate.add_argument("--workers", type=int, default=2)
    evaluate.add_argument("--no-cache", action="store_true")
    evaluate.set_defaults(func=cmd_eval)

    compare = sub.add_parser("compare", help="compare run reports to a baseline")
    compare.add_argument("--reports", nargs="+", required=True)
    compare.add_argument("--baseline", required=True)
    compare.add_argument("--out", default=None)
    compare.set_defaults(func=cmd_compare)

    convert = sub.add_parser("convert", help="convert benchmark annotations to manifests")
    convert_sub = convert.add_subparsers(dest="dataset", required=True)
    youcook = convert_sub.add_parser("youcook2")
    youcook.add_argument("--annotations", required=True)
    youcook.add_argument("--video-dir", required=True)
    youcook.add_argument("--out", required=True)
    youcook.add_argument("--lenient", action="store_true")
    youcook.set_defaults(func=cmd_convert)
    msrvtt = convert_sub.add_parser("msrvtt")
    msrvtt.add_argument("--annotations", required=True)
    msrvtt.add_argument("--video-dir", required=True)
    msrvtt.add_argument("--out", required=True)
    msrvtt.add_argument("--lenient", action="store_true")
    msrvtt.set_defaults(func=cmd_convert)
    anet = convert_sub.add_parser("activitynet-qa")
    anet.add_argument("--questions", required=True)
    anet.add_argument("--answers", required=True)
    anet.add_argument("--video-dir", required=True)
    anet.add_argument("--out", required=True)
    anet.add_argument("--lenient", action="store_true")
    anet.set_defaults(func=cmd_convert)

    serve = sub.add_parser("serve", help="run the interactive Q&A service")
    serve.add_argument("--backends", required=True)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--ui", default=None)
    serve.add_argument("--data-dir", default="qcaption-data")
    serve.add_argument("--qa-mode", choices=("describe_then_answer",
                                             "question_in_frame_prompt"),
                       default="describe_then_answer")
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (QCaptionError, FileNotFoundError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
