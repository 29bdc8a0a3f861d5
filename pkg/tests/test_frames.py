import numpy as np
import pytest

from irst import PgmError, as_frame, convolve, load_frame, save_frame

from oracles import convolve_bruteforce


def test_load_p2_transcribes_samples(tmp_path):
    path = tmp_path / "tiny.pgm"
    path.write_bytes(b"P2\n2 2\n255\n0 10 20 30\n")
    frame = load_frame(path)
    np.testing.assert_array_equal(frame, [[0, 10], [20, 30]])


def test_load_p2_with_comments(tmp_path):
    path = tmp_path / "tiny.pgm"
    path.write_bytes(b"P2\n# a comment\n2 1 # trailing\n255\n7 9\n")
    np.testing.assert_array_equal(load_frame(path), [[7, 9]])


def test_load_p5_16bit_is_big_endian(tmp_path):
    path = tmp_path / "wide.pgm"
    path.write_bytes(b"P5\n1 1\n65535\n" + bytes([0x01, 0x02]))
    frame = load_frame(path)
    assert frame[0, 0] == 258


def test_load_rejects_bad_magic(tmp_path):
    path = tmp_path / "bad.pgm"
    path.write_bytes(b"P6\n1 1\n255\nx")
    with pytest.raises(PgmError, match="unsupported format"):
        load_frame(path)


def test_load_rejects_truncated_payload(tmp_path):
    path = tmp_path / "short.pgm"
    path.write_bytes(b"P5\n4 4\n255\nab")
    with pytest.raises(PgmError, match="truncated"):
        load_frame(path)


def test_load_rejects_truncated_header(tmp_path):
    path = tmp_path / "header.pgm"
    path.write_bytes(b"P5\n4")
    with pytest.raises(PgmError, match="truncated"):
        load_frame(path)


def test_save_unnormalized_bytes(tmp_path):
    path = tmp_path / "pair.pgm"
    save_frame(np.array([[0.0, 255.0]]), path, normalize=False)
    assert path.read_bytes().endswith(bytes([0x00, 0xFF]))


def test_save_normalized_maps_range(tmp_path):
    path = tmp_path / "norm.pgm"
    save_frame(np.array([[-3.0, 5.0]]), path, normalize=True)
    assert path.read_bytes().endswith(bytes([0x00, 0xFF]))


def test_save_normalized_constant_is_zero(tmp_path):
    path = tmp_path / "const.pgm"
    save_frame(np.full((3, 3), 7.7), path, normalize=True)
    assert path.read_bytes().endswith(bytes(9))


def test_roundtrip_16bit_frames(tmp_path):
    rng = np.random.default_rng(11)
    for case in range(5):
        frame = rng.integers(0, 65536, size=(9, 7)).astype(float)
        path = tmp_path / f"rt_{case}.pgm"
        save_frame(frame, path, normalize=False)
        np.testing.assert_array_equal(load_frame(path), frame)


def test_as_frame_rejects_nan():
    with pytest.raises(ValueError, match="non-finite"):
        as_frame([[0.0, np.nan]])


def test_as_frame_rejects_empty():
    with pytest.raises(ValueError):
        as_frame(np.zeros((0, 4)))


def test_convolve_identity_kernel():
    rng = np.random.default_rng(3)
    frame = rng.uniform(0, 100, size=(8, 11))
    identity = np.zeros((3, 3))
    identity[1, 1] = 1.0
    np.testing.assert_array_equal(convolve(frame, identity), frame)


def test_convolve_constant_frame_scales_by_kernel_sum():
    kernel = np.array([[0.5, -1.0, 2.0], [0.0, 3.0, 0.0], [1.0, 1.0, -0.5]])
    out = convolve(np.full((6, 5), 4.0), kernel)
    np.testing.assert_allclose(out, 4.0 * kernel.sum())


def test_convolve_matches_bruteforce_oracle():
    rng = np.random.default_rng(7)
    frame = rng.uniform(-5, 5, size=(7, 7))
    kernel = rng.uniform(-1, 1, size=(3, 3))
    np.testing.assert_allclose(
        convolve(frame, kernel), convolve_bruteforce(frame, kernel), atol=1e-12
    )


def test_convolve_linearity():
    rng = np.random.default_rng(13)
    f = rng.uniform(0, 10, size=(9, 9))
    g = rng.uniform(0, 10, size=(9, 9))
    kernel = rng.uniform(-1, 1, size=(5, 5))
    a, b = 2.5, -1.25
    lhs = convolve(a * f + b * g, kernel)
    rhs = a * convolve(f, kernel) + b * convolve(g, kernel)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-9)


def test_convolve_kernel_larger_than_frame():
    out = convolve(np.full((2, 2), 3.0), np.full((5, 5), 1.0))
    np.testing.assert_allclose(out, 3.0 * 25)


def test_convolve_rejects_even_kernel():
    with pytest.raises(ValueError, match="odd"):
        convolve(np.zeros((4, 4)), np.zeros((2, 2)))
