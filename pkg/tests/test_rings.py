import math

import numpy as np
import pytest

from irst import ring_family, ring_kernel, ring_means, ring_members

from oracles import gaussian_ring_mean, ring_members_bruteforce

EXPECTED_COUNTS = {0: 1, 1: 8, 2: 12, 3: 16, 4: 32}


@pytest.mark.parametrize("radius,count", sorted(EXPECTED_COUNTS.items()))
def test_member_counts(radius, count):
    assert len(ring_members(radius)) == count


@pytest.mark.parametrize("radius", range(5))
def test_members_match_bruteforce_enumeration(radius):
    assert set(ring_members(radius)) == set(ring_members_bruteforce(radius, scan=6))


def test_radius_zero_is_center():
    assert ring_members(0) == [(0, 0)]


def test_radius_three_contains_expected_offsets():
    members = set(ring_members(3))
    for di, dj in [(3, 0), (-3, 0), (0, 3), (0, -3), (3, 1), (1, 3), (2, 2), (-2, -2)]:
        assert (di, dj) in members


def test_negative_radius_rejected():
    with pytest.raises(ValueError):
        ring_members(-1)


def test_members_row_major_order():
    members = ring_members(2)
    assert members == sorted(members)


@pytest.mark.parametrize("radius", range(5))
def test_eightfold_symmetry(radius):
    members = set(ring_members(radius))
    for di, dj in members:
        for a, b in [(di, dj), (dj, di)]:
            for sa in (a, -a):
                for sb in (b, -b):
                    assert (sa, sb) in members


@pytest.mark.parametrize("radius", range(1, 5))
def test_kernel_weights(radius):
    ring = ring_kernel(radius)
    count = len(ring.members)
    assert ring.kernel.shape == (2 * radius + 1, 2 * radius + 1)
    # exact rational construction: every weight is literally 1/count
    assert set(np.unique(ring.kernel)) == {0.0, 1.0 / count}
    assert np.count_nonzero(ring.kernel) == count
    assert abs(ring.kernel.sum() - 1.0) < 1e-15


def test_kernel_radius_zero():
    ring = ring_kernel(0)
    np.testing.assert_array_equal(ring.kernel, [[1.0]])


def test_family_partitions_disk():
    family = ring_family(4)
    union = set()
    total = 0
    for ring in family.rings:
        members = set(ring.members)
        assert not (union & members)  # pairwise disjoint
        union |= members
        total += len(members)
    disk = {
        (di, dj)
        for di in range(-6, 7)
        for dj in range(-6, 7)
        if math.floor(math.hypot(di, dj) + 0.5) <= 4
    }
    assert union == disk
    assert total == len(disk)


def test_ring_means_constant_frame():
    family = ring_family(4)
    maps = ring_means(np.full((12, 10), 6.5), family)
    assert len(maps) == 5
    for values in maps:
        np.testing.assert_allclose(values, 6.5)


def test_ring_means_single_bright_pixel():
    frame = np.zeros((11, 11))
    frame[5, 5] = 40.0
    maps = ring_means(frame, ring_family(2))
    assert maps[1][5, 5] == 0.0
    for di, dj in ring_members(1):
        assert maps[1][5 + di, 5 + dj] == pytest.approx(40.0 / 8.0)


def test_ring_means_of_gaussian_target_match_direct_evaluation():
    sigma, amplitude, background = 1.5, 100.0, 0.0
    size = 31
    center = size // 2
    ys, xs = np.mgrid[0:size, 0:size]
    frame = amplitude * np.exp(
        -((xs - center) ** 2 + (ys - center) ** 2) / (2 * sigma**2)
    ) + background
    maps = ring_means(frame, ring_family(4))
    for radius in range(5):
        expected = gaussian_ring_mean(sigma, radius, amplitude, background)
        assert maps[radius][center, center] == pytest.approx(expected, rel=1e-12)
