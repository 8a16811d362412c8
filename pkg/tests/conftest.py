"""Shared fixtures: synthetic videos (generated once per session) and
scripted backends. No test touches the network or a real model server."""

from __future__ import annotations

import hashlib

import pytest

from qcaption.media_io import probe
from qcaption.media_io.fixtures import make_constant_video, make_scene_video
from qcaption.model_backends import BackendSet, MockBackend


# --- synthetic videos -------------------------------------------------------

@pytest.fixture(scope="session")
def media_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("videos")


@pytest.fixture(scope="session")
def scenes8_path(media_dir):
    """8 solid-color scenes, 1 s each, 10 fps: frame at t shows palette
    color floor(t)."""
    return make_scene_video(media_dir / "scenes8.avi", n_scenes=8,
                            scene_len_s=1.0, fps=10.0)


@pytest.fixture(scope="session")
def scenes8(scenes8_path):
    return probe(scenes8_path)


@pytest.fixture(scope="session")
def constant8_path(media_dir):
    return make_constant_video(media_dir / "constant8.avi", duration_s=8.0, fps=10.0)


@pytest.fixture(scope="session")
def constant8(constant8_path):
    return probe(constant8_path)


@pytest.fixture(scope="session")
def video60(media_dir):
    path = make_scene_video(media_dir / "scenes60.avi", n_scenes=6,
                            scene_len_s=10.0, fps=10.0)
    return probe(path)


@pytest.fixture(scope="session")
def video12(media_dir):
    path = make_scene_video(media_dir / "scenes12.avi", n_scenes=4,
                            scene_len_s=3.0, fps=10.0)
    return probe(path)


@pytest.fixture(scope="session")
def video4(media_dir):
    path = make_scene_video(media_dir / "scenes4.avi", n_scenes=4,
                            scene_len_s=1.0, fps=10.0)
    return probe(path)


@pytest.fixture(scope="session")
def video80(media_dir):
    path = make_scene_video(media_dir / "scenes80.avi", n_scenes=8,
                            scene_len_s=10.0, fps=10.0)
    return probe(path)


@pytest.fixture(scope="session")
def tiny5(media_dir):
    """0.5 s at 10 fps: five frames total."""
    path = make_scene_video(media_dir / "tiny5.avi", n_scenes=5,
                            scene_len_s=0.1, fps=10.0)
    return probe(path)


@pytest.fixture(scope="session")
def still_png(media_dir):
    import numpy as np
    from PIL import Image
    path = media_dir / "still.png"
    Image.fromarray(np.full((48, 64, 3), (200, 40, 40), dtype=np.uint8)).save(path)
    return path


# --- scripted backends ------------------------------------------------------

def frame_caption_handler(request):
    return f"caption-{request.metadata.get('frame_index')}"


def deterministic_llm_handler(request):
    digest = hashlib.sha1(request.prompt.encode()).hexdigest()[:8]
    return f"aggregate-{digest}"


@pytest.fixture
def image_mock():
    return MockBackend(kind="image_lmm", handler=frame_caption_handler)


@pytest.fixture
def echo_llm():
    return MockBackend(kind="text_llm", handler=lambda req: req.prompt)


@pytest.fixture
def stable_llm():
    return MockBackend(kind="text_llm", handler=deterministic_llm_handler)


def make_backend_set(image=None, video=None, llm=None, judge=None) -> BackendSet:
    return BackendSet(image_lmm=image, video_lmm=video, text_llm=llm, judge=judge)


# --- acceptance reporting ---------------------------------------------------

def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = []
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            if "test_acceptance" in getattr(report, "nodeid", ""):
                rows.append((report.nodeid.split("::")[-1], status))
    if rows:
        terminalreporter.write_sep("=", "acceptance criteria")
        for name, status in sorted(rows):
            terminalreporter.write_line(
                f"[{'PASS' if status == 'passed' else 'FAIL'}] {name}")
