"""Fallback decoder CLI speaking the same argument subset as ffmpeg/ffprobe.

Machines without ffmpeg on PATH (CI, sandboxes) still need a working decoder
subprocess. This tool emulates exactly the invocations `qcaption.media_io`
issues — probe-to-JSON, single-frame raw RGB24 on stdout, fixed-rate raw
streaming, clip export — backed by OpenCV's bundled codecs. It is selected
automatically when ffmpeg/ffprobe are absent and can be forced via the
QCAPTION_FFMPEG / QCAPTION_FFPROBE environment variables.

Supported forms (everything else is rejected):

  avtool ffprobe -v error -select_streams v:0 \
      -show_entries stream=width,height,avg_frame_rate,nb_frames,codec_name \
      -show_entries format=duration -of json INPUT

  avtool ffmpeg -v error -ss T -i INPUT -frames:v 1 \
      -f rawvideo -pix_fmt rgb24 -

  avtool ffmpeg -v error -i INPUT -vf 'select=eq(n\,5)+eq(n\,15)' \
      -vsync 0 -frames:v N -f rawvideo -pix_fmt rgb24 -

  avtool ffmpeg -v error -i INPUT -vf fps=R -frames:v N \
      -f rawvideo -pix_fmt rgb24 -

  avtool ffmpeg -v error -y -ss T -i INPUT -t D -an OUTPUT
"""

from __future__ import annotations

import json
import math
import os
import re
import sys
from fractions import Fraction

import cv2

_COUNT_CAP = 1_000_000


def _fail(message: str) -> "int":
    print(f"avtool: {message}", file=sys.stderr)
    return 1


def _open(path: str) -> cv2.VideoCapture:
    cap = cv2.VideoCapture(path)
    if not cap.isOpened():
        raise RuntimeError(f"cannot open input: {path}")
    return cap


def _capture_info(cap: cv2.VideoCapture) -> tuple[int, int, float, int]:
    width = int(cap.get(cv2.CAP_PROP_FRAME_WIDTH))
    height = int(cap.get(cv2.CAP_PROP_FRAME_HEIGHT))
    fps = cap.get(cv2.CAP_PROP_FPS)
    if not fps or fps <= 0 or not math.isfinite(fps):
        fps = 25.0  # still images and odd containers report no rate
    count = int(cap.get(cv2.CAP_PROP_FRAME_COUNT))
    if count <= 0:
        # e.g. single images: count by reading
        count = 0
        while count < _COUNT_CAP and cap.grab():
            count += 1
        cap.set(cv2.CAP_PROP_POS_FRAMES, 0)
    if count <= 0:
        raise RuntimeError("no decodable frames")
    return width, height, fps, count


def _read_frame_rgb(cap: cv2.VideoCapture, index: int):
    cap.set(cv2.CAP_PROP_POS_FRAMES, index)
    ok, frame_bgr = cap.read()
    if not ok:
        raise RuntimeError(f"failed to decode frame {index}")
    return cv2.cvtColor(frame_bgr, cv2.COLOR_BGR2RGB)


def _parse_flags(args: list[str]) -> tuple[dict[str, str], list[str]]:
    """Split an ffmpeg-style argv into {flag: value} plus positionals."""
    flags: dict[str, str] = {}
    positional: list[str] = []
    i = 0
    value_flags = {
        "-v", "-ss", "-i", "-t", "-f", "-pix_fmt", "-frames:v", "-vf",
        "-vsync", "-select_streams", "-of",
    }
    while i < len(args):
        arg = args[i]
        if arg == "-show_entries":  # repeatable
            flags.setdefault("-show_entries", "")
            flags["-show_entries"] += ("," if flags["-show_entries"] else "") + args[i + 1]
            i += 2
        elif arg in value_flags:
            flags[arg] = args[i + 1]
            i += 2
        elif arg in ("-y", "-an", "-n"):
            flags[arg] = ""
            i += 1
        else:
            positional.append(arg)
            i += 1
    return flags, positional


def run_ffprobe(args: list[str]) -> int:
    flags, positional = _parse_flags(args)
    if flags.get("-of", "json") != "json" or len(positional) != 1:
        return _fail("unsupported ffprobe invocation")
    path = positional[0]
    if not os.path.exists(path):
        return _fail(f"no such file: {path}")
    try:
        cap = _open(path)
        try:
            width, height, fps, count = _capture_info(cap)
        finally:
            cap.release()
    except RuntimeError as exc:
        return _fail(str(exc))
    rate = Fraction(fps).limit_denominator(100_000)
    info = {
        "streams": [{
            "codec_name": "unknown",
            "width": width,
            "height": height,
            "avg_frame_rate": f"{rate.numerator}/{rate.denominator}",
            "nb_frames": str(count),
        }],
        "format": {"duration": f"{count / fps:.6f}"},
    }
    print(json.dumps(info))
    return 0


def _single_frame(path: str, seek_s: float) -> int:
    cap = _open(path)
    try:
        _, _, fps, count = _capture_info(cap)
        # ffmpeg input-seek semantics: first frame with pts >= seek point
        index = max(0, math.ceil(seek_s * fps - 1e-6))
        if index >= count:
            return 0  # like ffmpeg: seek past EOF yields empty output
        rgb = _read_frame_rgb(cap, index)
        sys.stdout.buffer.write(rgb.tobytes())
        sys.stdout.buffer.flush()
        return 0
    finally:
        cap.release()


def _select_frames(path: str, expression: str, max_frames: int | None) -> int:
    indices = sorted(int(m) for m in re.findall(r"eq\(n\\?,\s*(\d+)\)", expression))
    if not indices:
        return _fail(f"unsupported select expression: {expression}")
    if max_frames is not None:
        indices = indices[:max_frames]
    cap = _open(path)
    try:
        _, _, _, count = _capture_info(cap)
        for index in indices:
            if index >= count:
                break
            rgb = _read_frame_rgb(cap, index)
            try:
                sys.stdout.buffer.write(rgb.tobytes())
            except BrokenPipeError:
                break
        sys.stdout.buffer.flush()
        return 0
    finally:
        cap.release()


def _stream_frames(path: str, rate: float | None, max_frames: int | None) -> int:
    cap = _open(path)
    try:
        _, _, fps, count = _capture_info(cap)
        out_rate = rate if rate and rate > 0 else fps
        emitted = 0
        while max_frames is None or emitted < max_frames:
            src = math.floor(emitted * fps / out_rate + 1e-6)
            if src >= count:
                break
            rgb = _read_frame_rgb(cap, src)
            try:
                sys.stdout.buffer.write(rgb.tobytes())
            except BrokenPipeError:
                break  # reader closed early; not an error
            emitted += 1
        sys.stdout.buffer.flush()
        return 0
    finally:
        cap.release()


def _export_clip(path: str, out_path: str, seek_s: float, duration_s: float) -> int:
    cap = _open(path)
    try:
        width, height, fps, count = _capture_info(cap)
        start = max(0, math.ceil(seek_s * fps - 1e-6))
        n = int(round(duration_s * fps))
        suffix = os.path.splitext(out_path)[1].lower()
        fourcc = cv2.VideoWriter_fourcc(*("mp4v" if suffix == ".mp4" else "FFV1"))
        writer = cv2.VideoWriter(out_path, fourcc, fps, (width, height))
        if not writer.isOpened():
            return _fail(f"cannot open output for writing: {out_path}")
        try:
            written = 0
            cap.set(cv2.CAP_PROP_POS_FRAMES, start)
            while written < n and start + written < count:
                ok, frame = cap.read()
                if not ok:
                    break
                writer.write(frame)
                written += 1
        finally:
            writer.release()
        if written == 0:
            return _fail("clip export produced no frames")
        return 0
    finally:
        cap.release()


def run_ffmpeg(args: list[str]) -> int:
    flags, positional = _parse_flags(args)
    path = flags.get("-i")
    if not path:
        return _fail("missing -i input")
    if not os.path.exists(path):
        return _fail(f"no such file: {path}")
    seek_s = float(flags.get("-ss", 0.0))
    try:
        if flags.get("-f") == "rawvideo":
            if flags.get("-pix_fmt") != "rgb24" or positional != ["-"]:
                return _fail("rawvideo output must be rgb24 on stdout")
            vf = flags.get("-vf", "")
            max_frames = int(flags["-frames:v"]) if "-frames:v" in flags else None
            if vf.startswith("fps="):
                return _stream_frames(path, float(vf[4:]), max_frames)
            if vf.startswith("select="):
                return _select_frames(path, vf[len("select="):], max_frames)
            if max_frames == 1:
                return _single_frame(path, seek_s)
            return _stream_frames(path, None, max_frames)
        if len(positional) == 1 and "-t" in flags:
            return _export_clip(path, positional[0], seek_s, float(flags["-t"]))
        return _fail("unsupported ffmpeg invocation")
    except RuntimeError as exc:
        return _fail(str(exc))


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in ("ffmpeg", "ffprobe"):
        return _fail("usage: avtool {ffmpeg|ffprobe} ARGS...")
    mode, rest = argv[0], argv[1:]
    return run_ffprobe(rest) if mode == "ffprobe" else run_ffmpeg(rest)


if __name__ == "__main__":
    sys.exit(main())
