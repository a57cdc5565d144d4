"""Frame containers, luma conversion and frame directory I/O"""
import numpy as np
import pytest
from PIL import Image

from errors import DecodeError, DimensionMismatch, InvalidParams, IoError, NoFrames
from frames.frame import Frame, SequenceHandle, frames_from_arrays, quantize_samples, requantize, to_luma
from frames.sequence_io import decode_frame, list_frame_files, load_sequence, write_sequence


def _save_gray(path, array):
    Image.fromarray(np.asarray(array, dtype=np.uint8)).save(path, format="PPM")


# ═══════════════════════════════════════════════════════════════════════════════
# CONTAINERS
# ═══════════════════════════════════════════════════════════════════════════════

class TestFrame:

    def test_gray_array_gets_channel_axis(self):
        frame = Frame(np.zeros((4, 6)))
        assert frame.size == (6, 4, 1)
        assert frame.data.shape == (4, 6, 1)

    def test_data_is_read_only(self):
        frame = Frame(np.zeros((2, 2)))
        with pytest.raises(ValueError):
            frame.data[0, 0, 0] = 1.0

    @pytest.mark.parametrize("bad", [-0.5, 255.5, np.nan, np.inf])
    def test_out_of_range_samples_rejected(self, bad):
        data = np.zeros((3, 3))
        data[1, 1] = bad
        with pytest.raises(InvalidParams):
            Frame(data)

    def test_two_channels_rejected(self):
        with pytest.raises(InvalidParams):
            Frame(np.zeros((3, 3, 2)))


class TestSequenceHandle:

    def test_empty_sequence(self):
        with pytest.raises(NoFrames):
            SequenceHandle([])

    def test_mixed_sizes(self):
        with pytest.raises(DimensionMismatch):
            frames_from_arrays([np.zeros((32, 32)), np.zeros((64, 64))])

    def test_mixed_channels(self):
        with pytest.raises(DimensionMismatch):
            frames_from_arrays([np.zeros((8, 8)), np.zeros((8, 8, 3))])

    def test_pairs_carry_later_index(self):
        seq = frames_from_arrays([np.full((2, 2), v) for v in (0, 1, 2)])
        indices = [(t, prev.data[0, 0, 0], curr.data[0, 0, 0]) for t, prev, curr in seq.pairs()]
        assert indices == [(1, 0.0, 1.0), (2, 1.0, 2.0)]
        assert seq.source_names == ["frame_000000", "frame_000001", "frame_000002"]


# ═══════════════════════════════════════════════════════════════════════════════
# LUMA AND QUANTIZATION
# ═══════════════════════════════════════════════════════════════════════════════

class TestLuma:

    def test_white_stays_white(self):
        assert to_luma(Frame(np.full((1, 1, 3), 255.0))).data[0, 0, 0] == pytest.approx(255.0, abs=1e-9)

    def test_pure_red(self):
        rgb = np.zeros((1, 1, 3))
        rgb[0, 0, 0] = 255.0
        assert to_luma(Frame(rgb)).data[0, 0, 0] == pytest.approx(76.245, abs=1e-9)

    def test_gray_frame_passes_through(self, texture_frame):
        assert to_luma(texture_frame) is texture_frame

    def test_luma_is_single_channel(self, rng):
        luma = to_luma(Frame(rng.uniform(0, 255, (5, 7, 3))))
        assert luma.size == (7, 5, 1)


class TestQuantize:

    @pytest.mark.parametrize("value, byte", [(127.5, 128), (-3.2, 0), (254.49, 254), (255.7, 255), (0.5, 1)])
    def test_round_half_away_then_clamp(self, value, byte):
        assert quantize_samples(np.array([value]))[0] == byte

    def test_requantize_keeps_names(self):
        seq = SequenceHandle([Frame(np.full((2, 2), 10.4))], ["a.pgm"])
        out = requantize(seq)
        assert out.source_names == ["a.pgm"]
        assert np.all(out[0].data == 10.0)


# ═══════════════════════════════════════════════════════════════════════════════
# DIRECTORY I/O
# ═══════════════════════════════════════════════════════════════════════════════

class TestSequenceIO:

    def test_load_three_luma_frames(self, tmp_path, rng):
        for i in range(3):
            _save_gray(tmp_path / f"frame_{i:06d}.pgm", rng.integers(0, 256, (64, 64)))
        seq = load_sequence(tmp_path)
        assert len(seq) == 3
        assert (seq.width, seq.height, seq.channels) == (64, 64, 1)

    def test_frames_ordered_by_numeric_index(self, tmp_path):
        for index in (10, 2, 1):
            _save_gray(tmp_path / f"frame_{index}.pgm", np.full((4, 4), index))
        files = list_frame_files(tmp_path)
        assert [f.name for f in files] == ["frame_1.pgm", "frame_2.pgm", "frame_10.pgm"]

    def test_mismatched_sizes_on_disk(self, tmp_path):
        _save_gray(tmp_path / "frame_000000.pgm", np.zeros((32, 32)))
        _save_gray(tmp_path / "frame_000001.pgm", np.zeros((64, 64)))
        with pytest.raises(DimensionMismatch):
            load_sequence(tmp_path)

    def test_no_matching_files(self, tmp_path):
        (tmp_path / "notes.txt").write_text("nothing here")
        with pytest.raises(NoFrames):
            load_sequence(tmp_path)

    def test_missing_directory(self, tmp_path):
        with pytest.raises(IoError):
            load_sequence(tmp_path / "absent")

    def test_garbage_file(self, tmp_path):
        (tmp_path / "frame_000000.pgm").write_bytes(b"P5\nthis is not a netpbm body")
        with pytest.raises(DecodeError):
            decode_frame(tmp_path / "frame_000000.pgm")

    def test_unsupported_mode(self, tmp_path):
        Image.new("RGBA", (4, 4)).save(tmp_path / "frame_000000.png")
        with pytest.raises(DecodeError):
            decode_frame(tmp_path / "frame_000000.png")

    def test_half_sample_written_as_128(self, tmp_path):
        seq = SequenceHandle([Frame(np.full((2, 3), 127.5))])
        [path] = write_sequence(seq, tmp_path, "pgm")
        assert path.name == "frame_000000.pgm"
        assert np.all(np.asarray(Image.open(path)) == 128)

    @pytest.mark.parametrize("fmt, channels, ext", [("pgm", 1, "pgm"), ("ppm", 3, "ppm"), ("pgm", 3, "ppm"), ("png", 3, "png")])
    def test_round_trip_is_bit_identical(self, tmp_path, rng, fmt, channels, ext):
        shape = (16, 24) if channels == 1 else (16, 24, 3)
        seq = frames_from_arrays([rng.integers(0, 256, shape).astype(np.float64) for _ in range(2)])
        paths = write_sequence(seq, tmp_path / "first", fmt)
        assert all(p.suffix == f".{ext}" for p in paths)

        reloaded = load_sequence(tmp_path / "first")
        for a, b in zip(seq, reloaded):
            assert np.array_equal(a.data, b.data)

        again = write_sequence(reloaded, tmp_path / "second", fmt)
        assert [p.read_bytes() for p in paths] == [p.read_bytes() for p in again]

    def test_unknown_format(self, tmp_path, texture_frame):
        with pytest.raises(InvalidParams):
            write_sequence(SequenceHandle([texture_frame]), tmp_path, "tiff")
