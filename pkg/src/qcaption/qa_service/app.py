"""REST service over the pipeline: register videos, browse extracted frames,
run captioning, and hold multi-turn Q&A sessions.

Endpoints are versioned under /v1 (health at /healthz); the built web UI, if
present, is served statically at /. Two Q&A modes exist: the default
describe-then-answer captions frames once per session with the generic
prompt and lets only the aggregation step see each question (cheap for
multi-turn), while question-in-frame-prompt re-captions frames with the
question embedded, matching the batch harness behavior.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from ..errors import AllFramesFailed, BackendError, DecodeError, QCaptionError
from ..frame_selection import STRATEGIES, select_frames
from ..fusion_pipeline import (
    DEFAULT_PROMPTS,
    CaptionBundle,
    PipelineConfig,
    aggregate_captions,
    caption_frames,
    concat_with_indexes,
    run_task,
)
from ..fusion_pipeline.prompts import render
from ..media_io import probe
from ..media_io.png import to_png_bytes
from ..model_backends import BackendSet
from .registry import ServiceState, SessionTurn

SESSION_PROMPT = (
    "The following are per-frame captions of one video, in temporal order:\n"
    "{captions}\n"
    "Conversation so far:\n{history}\n"
    "Using the captions and the conversation, answer concisely: {question}"
)

FRAME_STRATEGIES = tuple(s for s in STRATEGIES if s != "clips")


@dataclass
class ServiceConfig:
    backends: BackendSet
    data_dir: str | Path = "qcaption-data"
    max_upload_bytes: int = 512 * 1024 * 1024
    async_threshold_calls: int = 16
    session_turn_limit: int = 50
    qa_mode: str = "describe_then_answer"   # or "question_in_frame_prompt"
    default_strategy: str = "regular"
    default_n_frames: int = 8
    cors_origins: list[str] = field(default_factory=lambda: ["*"])
    ui_dir: str | Path | None = None
    prompt_overrides: dict = field(default_factory=dict)


class FramesRequest(BaseModel):
    strategy: str = "regular"
    n: int = 8
    seed: int = 0


class CaptionRequest(BaseModel):
    strategy: str = "regular"
    n: int = 8
    seed: int = 0
    use_llm: bool = True
    question: str | None = None


class SessionCreateRequest(BaseModel):
    video_id: str


class AskRequest(BaseModel):
    question: str


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="qcaption service", version="1")
    state = ServiceState()
    app.state.config = config
    app.state.registry = state
    data_dir = Path(config.data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)

    app.add_middleware(
        CORSMiddleware,
        allow_origins=config.cors_origins,
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def get_video_or_404(video_id: str):
        video = state.get_video(video_id)
        if video is None:
            raise HTTPException(status_code=404, detail=f"unknown video {video_id}")
        return video

    @app.get("/healthz")
    def healthz():
        reachable = {}
        for backend in config.backends.all():
            reachable[backend.config.kind] = backend.ping()
        return {"status": "ok", "backends": reachable}

    @app.post("/v1/videos")
    async def register_video(request: Request):
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("multipart/form-data"):
            form = await request.form()
            upload = form.get("file")
            if upload is None or isinstance(upload, str):
                raise HTTPException(status_code=400, detail="missing file field")
            target = data_dir / f"upload-{id(upload):x}-{upload.filename}"
            size = 0
            with open(target, "wb") as fh:
                while chunk := await upload.read(1 << 20):
                    size += len(chunk)
                    if size > config.max_upload_bytes:
                        fh.close()
                        target.unlink(missing_ok=True)
                        raise HTTPException(status_code=413, detail="upload too large")
                    fh.write(chunk)
            if size == 0:
                target.unlink(missing_ok=True)
                raise HTTPException(status_code=400, detail="empty upload")
            path = target
        else:
            try:
                body = await request.json()
            except Exception:
                raise HTTPException(status_code=400, detail="expected multipart or JSON body")
            raw_path = body.get("path") if isinstance(body, dict) else None
            if not raw_path:
                raise HTTPException(status_code=400, detail="missing 'path'")
            path = Path(raw_path)
            if not path.exists():
                raise HTTPException(status_code=400, detail=f"no such file: {path}")
            if path.stat().st_size > config.max_upload_bytes:
                raise HTTPException(status_code=413, detail="file too large")

        try:
            handle = probe(path)
        except (DecodeError, FileNotFoundError) as exc:
            raise HTTPException(status_code=400, detail=f"undecodable video: {exc}")
        video_id = state.video_id_for(path)
        state.add_video(video_id, handle)
        return {
            "video_id": video_id,
            "duration_s": handle.duration_s,
            "fps": handle.fps,
            "frame_count": handle.frame_count,
            "width": handle.width,
            "height": handle.height,
        }

    @app.post("/v1/videos/{video_id}/frames")
    def extract_frames(video_id: str, body: FramesRequest):
        video = get_video_or_404(video_id)
        if body.strategy not in FRAME_STRATEGIES:
            raise HTTPException(status_code=422,
                                detail=f"unknown strategy {body.strategy!r}")
        key = (body.strategy, body.n, body.seed)
        selection = video.selections.get(key)
        if selection is None:
            try:
                selection = select_frames(video.handle, body.strategy, body.n,
                                          seed=body.seed)
            except DecodeError as exc:
                raise HTTPException(status_code=502, detail=str(exc))
            video.selections[key] = selection
        video.current_selection = selection

        sharpness_by_index = {}
        if selection.strategy == "katna":
            sharpness_by_index = {
                c["frame_index"]: c["sharpness"]
                for c in selection.trace.get("candidates", [])
            }
        frames = []
        for k, frame in enumerate(selection.frames):
            entry = {
                "index": k,
                "frame_index": frame.frame_index,
                "timestamp_s": frame.timestamp_s,
                "url": f"/v1/videos/{video_id}/frames/{k}.png",
            }
            if frame.frame_index in sharpness_by_index:
                entry["sharpness"] = sharpness_by_index[frame.frame_index]
            frames.append(entry)
        return {"video_id": video_id, "strategy": selection.strategy,
                "seed": selection.seed, "frames": frames}

    @app.get("/v1/videos/{video_id}/frames/{k}.png")
    def get_frame_png(video_id: str, k: int):
        video = get_video_or_404(video_id)
        selection = video.current_selection
        if selection is None or not 0 <= k < len(selection.frames):
            raise HTTPException(status_code=404, detail="no such frame")
        return Response(content=to_png_bytes(selection.frames[k]),
                        media_type="image/png")

    def _run_caption(video, body: CaptionRequest) -> dict:
        pipeline_config = PipelineConfig(
            strategy=body.strategy,
            n_frames=body.n,
            seed=body.seed,
            use_llm=body.use_llm,
            task_kind="qa" if body.question else "caption",
            question=body.question,
            prompt_overrides=config.prompt_overrides,
        )
        bundle = run_task(video.handle, pipeline_config, config.backends)
        return bundle.to_dict()

    @app.post("/v1/videos/{video_id}/caption")
    def caption_video(video_id: str, body: CaptionRequest):
        video = get_video_or_404(video_id)
        if body.strategy not in FRAME_STRATEGIES + ("multiclips",):
            raise HTTPException(status_code=422,
                                detail=f"unknown strategy {body.strategy!r}")
        estimated_calls = (4 if body.strategy == "multiclips" else body.n)
        estimated_calls += 1 if body.use_llm else 0
        if estimated_calls > config.async_threshold_calls:
            job_id = state.create_job()

            def work():
                try:
                    state.finish_job(job_id, bundle=_run_caption(video, body))
                except (QCaptionError, OSError) as exc:
                    state.finish_job(job_id, error=f"{type(exc).__name__}: {exc}")

            threading.Thread(target=work, daemon=True).start()
            return JSONResponse(status_code=202, content={
                "job_id": job_id, "poll_url": f"/v1/jobs/{job_id}"})
        try:
            return _run_caption(video, body)
        except (AllFramesFailed, BackendError) as exc:
            raise HTTPException(status_code=502, detail=f"{type(exc).__name__}: {exc}")
        except DecodeError as exc:
            raise HTTPException(status_code=502, detail=str(exc))

    @app.get("/v1/jobs/{job_id}")
    def get_job(job_id: str):
        job = state.jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail="unknown job")
        return job

    @app.post("/v1/sessions")
    def create_session(body: SessionCreateRequest):
        get_video_or_404(body.video_id)
        session = state.create_session(body.video_id)
        return {"session_id": session.session_id}

    @app.post("/v1/sessions/{session_id}/ask")
    def ask(session_id: str, body: AskRequest):
        session = state.get_session(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        video = get_video_or_404(session.video_id)
        with session.lock:
            if len(session.turns) >= config.session_turn_limit:
                raise HTTPException(status_code=409, detail="session at turn limit")
            try:
                if config.qa_mode == "question_in_frame_prompt":
                    bundle_dict = _run_caption(video, CaptionRequest(
                        strategy=config.default_strategy, n=config.default_n_frames,
                        use_llm=True, question=body.question))
                    answer = bundle_dict["aggregated"]
                else:
                    bundle_dict = _ask_describe_then_answer(session, video, body.question)
                    answer = bundle_dict["aggregated"]
            except (AllFramesFailed, BackendError) as exc:
                raise HTTPException(status_code=502,
                                    detail=f"{type(exc).__name__}: {exc}")
            bundle_id = state.store_bundle(bundle_dict)
            bundle_ref = f"/v1/bundles/{bundle_id}"
            session.turns.append(SessionTurn(
                question=body.question, answer=answer, bundle_ref=bundle_ref))
            return {"answer": answer, "bundle_ref": bundle_ref,
                    "turn_index": len(session.turns) - 1}

    def _ask_describe_then_answer(session, video, question: str) -> dict:
        if session.cached_records is None:
            selection = select_frames(video.handle, config.default_strategy,
                                      config.default_n_frames, seed=0)
            prompt = config.prompt_overrides.get(
                "frame_caption", DEFAULT_PROMPTS["frame_caption"])
            records, _ = caption_frames(selection, prompt,
                                        config.backends.require("image_lmm"))
            session.cached_records = records
        records = session.cached_records
        concatenated = concat_with_indexes(records)
        history = "\n".join(f"Q: {t.question}\nA: {t.answer}" for t in session.turns)
        prompt = render(SESSION_PROMPT, captions=concatenated,
                        history=history or "(none)", question=question)
        from ..model_backends import complete_text
        response = complete_text(config.backends.require("text_llm"), prompt)
        bundle = CaptionBundle(
            records=records, concatenated=concatenated, aggregated=response.text,
            trace={"mode": "describe_then_answer", "question": question,
                   "history_turns": len(session.turns)},
        )
        return bundle.to_dict()

    @app.get("/v1/sessions/{session_id}")
    def get_session(session_id: str):
        session = state.get_session(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return {
            "session_id": session.session_id,
            "video_id": session.video_id,
            "turns": [{"question": t.question, "answer": t.answer,
                       "bundle_ref": t.bundle_ref} for t in session.turns],
        }

    @app.get("/v1/bundles/{bundle_id}")
    def get_bundle(bundle_id: str):
        bundle = state.bundles.get(bundle_id)
        if bundle is None:
            raise HTTPException(status_code=404, detail="unknown bundle")
        return bundle

    ui_dir = Path(config.ui_dir) if config.ui_dir else None
    if ui_dir and ui_dir.is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
