"""Media decoding against labeled synthetic fixtures."""

import pytest

from qcaption.errors import DecodeError, TimestampOutOfRange
from qcaption.media_io import (
    ClipSpec,
    export_clip,
    extract_clips,
    frames_at,
    iter_all_frames,
    probe,
)
from qcaption.media_io.fixtures import scene_of_frame


class TestProbe:
    def test_synthetic_metadata(self, scenes8):
        assert scenes8.duration_s == pytest.approx(8.0)
        assert scenes8.fps == pytest.approx(10.0)
        assert scenes8.frame_count == 80
        assert (scenes8.width, scenes8.height) == (64, 64)

    def test_zero_byte_file(self, tmp_path):
        empty = tmp_path / "zero.mp4"
        empty.write_bytes(b"")
        with pytest.raises(DecodeError):
            probe(empty)

    def test_garbage_file(self, tmp_path):
        bad = tmp_path / "garbage.avi"
        bad.write_bytes(b"not a container at all" * 10)
        with pytest.raises(DecodeError):
            probe(bad)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            probe(tmp_path / "nope.mp4")

    def test_still_image_single_frame(self, still_png):
        handle = probe(still_png)
        assert handle.frame_count == 1
        assert handle.width == 64 and handle.height == 48


class TestFramesAt:
    def test_scene_colors(self, scenes8):
        frames = frames_at(scenes8, [0.5, 3.5])
        assert [scene_of_frame(f) for f in frames] == [0, 3]

    def test_empty_list(self, scenes8):
        assert frames_at(scenes8, []) == []

    def test_duration_is_out_of_range(self, scenes8):
        with pytest.raises(TimestampOutOfRange):
            frames_at(scenes8, [scenes8.duration_s])

    def test_negative_out_of_range(self, scenes8):
        with pytest.raises(TimestampOutOfRange):
            frames_at(scenes8, [-0.1])

    def test_order_matches_input(self, scenes8):
        frames = frames_at(scenes8, [5.5, 0.5, 2.5])
        assert [scene_of_frame(f) for f in frames] == [5, 0, 2]

    def test_idempotent_byte_identical(self, scenes8):
        first = frames_at(scenes8, [1.25, 6.75])
        second = frames_at(scenes8, [1.25, 6.75])
        assert [f.pixels for f in first] == [f.pixels for f in second]

    def test_dimensions_match_handle(self, scenes8):
        for frame in frames_at(scenes8, [0.0, 4.2]):
            assert frame.width == scenes8.width
            assert frame.height == scenes8.height


class TestIterAllFrames:
    def test_stride_one(self, scenes8):
        frames = list(iter_all_frames(scenes8, 1.0))
        assert [f.timestamp_s for f in frames] == [float(t) for t in range(8)]
        assert [scene_of_frame(f) for f in frames] == list(range(8))

    def test_huge_stride(self, scenes8):
        frames = list(iter_all_frames(scenes8, 100.0))
        assert len(frames) == 1
        assert frames[0].timestamp_s == 0.0

    def test_zero_stride_rejected(self, scenes8):
        with pytest.raises(ValueError):
            list(iter_all_frames(scenes8, 0.0))

    @pytest.mark.parametrize("stride", [0.3, 1.0, 2.7])
    def test_strictly_increasing_timestamps(self, scenes8, stride):
        timestamps = [f.timestamp_s for f in iter_all_frames(scenes8, stride)]
        assert timestamps, "expected at least one frame"
        assert all(b > a for a, b in zip(timestamps, timestamps[1:]))
        assert all(t < scenes8.duration_s for t in timestamps)


class TestExtractClips:
    def test_sixty_seconds(self, video60):
        clips = extract_clips(video60, 4, 5.0)
        spans = [(c.start_s, c.end_s) for c in clips]
        assert spans == [(5.0, 10.0), (20.0, 25.0), (35.0, 40.0), (50.0, 55.0)]

    def test_short_video_clamps(self, video4):
        clips = extract_clips(video4, 4, 5.0)
        assert [(c.start_s, c.end_s) for c in clips] == [(0.0, 4.0)] * 4

    def test_twelve_seconds_hand_computed(self, video12):
        clips = extract_clips(video12, 4, 5.0)
        spans = [(c.start_s, c.end_s) for c in clips]
        assert spans == [(0.0, 5.0), (2.0, 7.0), (5.0, 10.0), (7.0, 12.0)]

    def test_count_and_length_invariant(self, video12, video4, video60):
        for handle in (video12, video4, video60):
            clips = extract_clips(handle, 4, 5.0)
            assert len(clips) == 4
            expected = min(5.0, handle.duration_s)
            for clip in clips:
                assert clip.duration_s == pytest.approx(expected)
                assert 0 <= clip.start_s <= clip.end_s <= handle.duration_s
            assert clips == sorted(clips, key=lambda c: c.start_s)


class TestExportClip:
    def test_exported_duration(self, video12, tmp_path):
        clip = ClipSpec(start_s=2.0, end_s=7.0)
        out = export_clip(video12, clip, tmp_path / "clip.avi")
        exported = probe(out)
        frame_tolerance = 1.0 / video12.fps
        assert exported.duration_s == pytest.approx(5.0, abs=frame_tolerance + 1e-6)

    def test_missing_output_dir(self, video12, tmp_path):
        with pytest.raises(OSError):
            export_clip(video12, ClipSpec(0.0, 2.0), tmp_path / "nope" / "c.avi")

    def test_clip_content_matches_source_region(self, video60, tmp_path):
        # scenes60 has 10 s scenes; the clip [20,25] sits inside scene 2
        out = export_clip(video60, ClipSpec(20.0, 25.0), tmp_path / "mid.avi")
        exported = probe(out)
        frames = frames_at(exported, [1.0])
        assert scene_of_frame(frames[0]) == 2
