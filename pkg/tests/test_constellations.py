import math
import time
import warnings

import numpy as np
import pytest

from idemstc import audit
from idemstc.constellations import (
    Constellation,
    check_diversity_criterion,
    cyclic_quality,
    distance,
    find_duplicates,
    gen_angle,
    gen_cyclic,
    gen_gaussian,
    gen_rational,
    gen_real_rank1,
    is_fully_diverse,
    parse_gaussian,
    parse_tuples,
    predicted_distance_rank1,
    predicted_quality_angle,
    predicted_sum_distance_rank1,
    quality,
)
from idemstc.errors import CollisionError, NotUnitaryError, ReferenceDeviationWarning
from idemstc.idempotents import dft_set

from conftest import brute_distance, brute_quality, haar

S = math.sin
PI = math.pi
N5 = [(0, 2), (1, 4), (2, 1), (3, 3), (4, 0)]
N8_3 = [(0, 0, 7), (1, 3, 2), (2, 6, 5), (3, 1, 3), (4, 4, 0), (5, 7, 1), (6, 2, 6), (7, 5, 4)]

# independent brute-force values, frozen
RANK1_SUM_34 = 0.9982034669914626
RANK1_SUM_4_16 = 0.9761870601839527
GAUSS8_QUALITY = 0.06593804733957867
GAUSS8_MIN_ABS_DET = 0.01739130434782607


def test_constellation_container_checks():
    with pytest.raises(ValueError):
        Constellation((), ())
    with pytest.raises(ValueError):
        Constellation((np.eye(2), -np.eye(2)), ("a", "a"))
    with pytest.raises(ValueError):
        Constellation((np.eye(2), np.eye(3)), ("a", "b"))
    c = Constellation((np.eye(2), 2 * np.eye(2)), ("a", "b"))
    with pytest.raises(NotUnitaryError):
        c.validate()
    c = Constellation((np.eye(2), np.eye(2)), ("a", "b"))
    with pytest.raises(CollisionError) as exc:
        c.validate()
    assert exc.value.pair == ("a", "b")
    assert find_duplicates(c) == [("a", "b")]


def test_distance_examples(rng):
    u = haar(2, rng)
    assert distance(u, u) == 0
    assert distance(u, -u) == pytest.approx(1, abs=1e-12)
    for th in (0.3, 1.0, 2.5):
        w = np.exp(1j * th)
        assert distance(u, w * u) == pytest.approx(abs(S(th / 2)), abs=1e-12)


def test_quality_report_invariants():
    c = gen_cyclic(8, [(j, 3 * j % 8) for j in range(8)])
    r = quality(c)
    assert sum(m for _, m in r.distribution) == 28 == r.pair_count
    assert r.quality == pytest.approx(min(v for v, _ in r.distribution), abs=1e-12)
    assert r.rate == math.log2(8) / 2
    assert r.size == 8 and r.order == 2


def test_weighted_average_of_n8_spectrum():
    r = quality(gen_cyclic(8, [(j, 3 * j % 8) for j in range(8)]))
    exact = (16 * math.sqrt(S(PI / 8) * S(3 * PI / 8)) + 8 * S(PI / 4) + 4) / 28
    assert r.mean_distance == pytest.approx(exact, abs=1e-12)
    # the printed 0.684657 agrees to about 4e-6
    assert r.mean_distance == pytest.approx(0.684657, abs=1e-5)


def test_two_element_quality(rng):
    u = haar(2, rng)
    c = Constellation((u, -u), ("U", "-U")).validate()
    assert quality(c).quality == pytest.approx(1, abs=1e-12)
    assert is_fully_diverse(c) == (True, None)


def test_diversity_witness():
    c = gen_cyclic(8, [(0, 1), (3, 1)])
    ok, witness = is_fully_diverse(c)
    assert not ok and witness == ("(0,1)", "(3,1)")


def test_rank1_subsets_fully_diverse():
    rng = np.random.default_rng(3)
    for _ in range(20):
        ks = rng.choice(np.arange(1, 200), size=6, replace=False).tolist()
        assert is_fully_diverse(gen_real_rank1(ks))[0]


def test_check_diversity_criterion():
    assert check_diversity_criterion(N5, 5)
    assert not check_diversity_criterion([(0, 0), (1, 0)], 5)
    assert check_diversity_criterion([(j, 3 * j % 8) for j in range(8)], 8)
    assert not check_diversity_criterion([(1, 1), (9, 2)], 8)  # 9 = 1 mod 8
    with pytest.raises(ValueError):
        check_diversity_criterion([(0, 1), (1,)], 5)


def test_criterion_agrees_with_scan():
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(3, 10))
        tuples = sorted({tuple(rng.integers(0, n, 2).tolist()) for _ in range(5)})
        c = gen_cyclic(n, tuples)
        assert check_diversity_criterion(tuples, n) == is_fully_diverse(c)[0]


def test_parse_tuples():
    assert parse_tuples("0,2;1,4; 2,1;") == [(0, 2), (1, 4), (2, 1)]


def test_gen_cyclic_examples():
    c = gen_cyclic(5, N5)
    assert quality(c).quality == pytest.approx(math.sqrt(S(PI / 5) * S(2 * PI / 5)), abs=1e-10)
    c = gen_cyclic(32, [(j, 7 * j % 32) for j in range(32)])
    assert quality(c).quality == pytest.approx(math.sqrt(S(PI / 32) * S(7 * PI / 32)), abs=1e-10)
    c = gen_cyclic(8, N8_3)
    assert quality(c).quality == pytest.approx((S(PI / 8) * S(3 * PI / 8) * S(PI / 8)) ** (1 / 3), abs=1e-10)


def test_cyclic_rank_product_matches_scan():
    for n, tuples in [(5, N5), (8, N8_3), (16, [(j, 5 * j % 16) for j in range(16)])]:
        assert cyclic_quality(tuples, n) == pytest.approx(quality(gen_cyclic(n, tuples)).quality, abs=1e-12)


def test_cyclic_quality_independent_of_basis():
    # unitary change of basis leaves every |det| unchanged
    a = quality(gen_cyclic(5, N5)).quality
    b = quality(gen_cyclic(5, N5, dft_set(2))).quality
    assert a == pytest.approx(b, abs=1e-12)
    d = audit.generate("cyclic", {"n": 5, "tuples": N5, "basis": "dft"})
    assert d.params["basis"] == "dft"


def test_cyclic_ranked_basis():
    assert cyclic_quality([(0, 0), (1, 2)], 4, ranks=[2, 1]) == pytest.approx(
        0.5 * 4 ** (1 / 3)
    )


def test_gen_real_rank1_examples():
    c = gen_real_rank1([1])
    assert np.allclose(c.matrices[0], [[0, 1], [1, 0]])
    c = gen_real_rank1([3, 4])
    assert distance(*c.matrices) == pytest.approx(0.05991526, abs=1e-7)
    with pytest.raises(ValueError):
        gen_real_rank1([2, 2])
    with pytest.raises(ValueError):
        gen_real_rank1([0, 2])


def test_rank1_minimum_of_published_subset():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        c = gen_real_rank1([1, 2, 4, 16])
    r = quality(c)
    assert r.quality == pytest.approx((2 - math.sqrt(2)) / math.sqrt(15), abs=1e-12)
    assert r.min_pair == ("A_2", "A_4")
    assert r.quality == pytest.approx(brute_quality(c.matrices), abs=1e-12)


def test_predicted_distance_rank1():
    assert predicted_distance_rank1(3, 4) == pytest.approx(0.0599153, abs=1e-7)
    assert predicted_distance_rank1(4, 16) == pytest.approx(2 / math.sqrt(85), abs=1e-15)
    assert predicted_distance_rank1(16, 4) == predicted_distance_rank1(4, 16)
    with pytest.raises(ValueError):
        predicted_distance_rank1(1, 1)


def test_predicted_sum_distance_rank1():
    assert predicted_sum_distance_rank1(1, 1) == pytest.approx(1)
    assert predicted_sum_distance_rank1(3, 4) == pytest.approx(RANK1_SUM_34, abs=1e-12)
    assert predicted_sum_distance_rank1(4, 16) == pytest.approx(RANK1_SUM_4_16, abs=1e-12)
    for k, l in [(1, 5), (2, 9), (7, 30)]:
        c = gen_real_rank1([k, l])
        assert predicted_sum_distance_rank1(k, l) == pytest.approx(distance(c.matrices[0], -c.matrices[1]), abs=1e-12)


def test_gen_rational():
    c = gen_rational([(1, 2), (4, 7), (2, 9)])
    assert c.labels == ("A_1,2", "A_4,7", "A_2,9")
    assert quality(c).quality == pytest.approx(brute_quality(c.matrices), abs=1e-12)


@pytest.mark.parametrize("n", [3, 5, 9, 17])
def test_gen_angle_quality(n):
    c = gen_angle(n)
    assert quality(c).quality == pytest.approx(S(PI / n), abs=1e-10)
    assert quality(c).quality == pytest.approx(brute_quality(c.matrices), abs=1e-12)


def test_angle_distribution_n5():
    r = quality(gen_angle(5))
    assert r.count_at(S(PI / 5), 5e-5) == 5
    assert r.count_at(math.cos(PI / 10), 5e-5) == 5


def test_predicted_quality_angle():
    assert predicted_quality_angle(5) == pytest.approx(0.587785, abs=1e-6)
    assert predicted_quality_angle(3) == pytest.approx(0.8660254037844384, abs=1e-12)
    with pytest.raises(ValueError):
        predicted_quality_angle(4)


def test_even_angle_family_collides():
    c = gen_angle(4)
    assert quality(c).quality < 1e-12
    assert find_duplicates(c) == [("U_0", "U_2"), ("U_1", "U_3")]


GAUSS = [(1 + 2j, 2 + 1j), (1 + 3j, 3 + 1j), (2 + 3j, 3 + 1j), (2 + 3j, 1 + 1j)]


def test_gen_gaussian():
    c = gen_gaussian([(1, 0)])
    assert np.allclose(c.matrices[0], np.diag([1, -1]))
    with pytest.warns(ReferenceDeviationWarning) as rec:
        c = gen_gaussian(GAUSS)
    assert rec[0].message.deviation.code == "gaussian-trace"
    pm = list(c.matrices) + [-m for m in c.matrices]
    assert brute_quality(pm) == pytest.approx(GAUSS8_QUALITY, abs=1e-12)
    with pytest.raises(CollisionError):
        gen_gaussian([(1 + 2j, 2 + 1j), (2 + 4j, 4 + 2j)])
    with pytest.raises(CollisionError):
        gen_gaussian([(1 + 2j, 2 + 1j), (-2 + 1j, -1 + 2j)])  # i times the first


def test_gaussian_with_negatives_fully_diverse():
    from idemstc.extensions import negate_extend

    with pytest.warns(ReferenceDeviationWarning):
        c = negate_extend(gen_gaussian(GAUSS))
    assert len(c) == 8
    assert is_fully_diverse(c)[0]
    mins = min(abs(np.linalg.det(a - b)) for i, a in enumerate(c.matrices) for b in c.matrices[i + 1:])
    assert mins == pytest.approx(GAUSS8_MIN_ABS_DET, abs=1e-12)


def test_parse_gaussian():
    assert parse_gaussian("1+2i") == 1 + 2j
    assert parse_gaussian("-i") == -1j
    assert parse_gaussian("3") == 3
    assert parse_gaussian("2-i") == 2 - 1j


def test_scan_matches_brute_force_on_random_sets(rng):
    ms = [haar(3, rng) for _ in range(12)]
    c = Constellation(tuple(ms), tuple(str(i) for i in range(12))).validate()
    r = quality(c)
    assert r.quality == pytest.approx(brute_quality(ms), abs=1e-12)
    i, j = r.min_pair_index
    assert brute_distance(ms[i], ms[j]) == pytest.approx(r.quality, abs=1e-12)


def test_full_scan_speed_n128():
    c = gen_cyclic(128, [(j, 47 * j % 128) for j in range(128)])
    t0 = time.perf_counter()
    quality(c)
    assert time.perf_counter() - t0 < 1.0
