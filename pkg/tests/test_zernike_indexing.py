"""Tests for Zernike Noll indexing."""
import pytest


@pytest.mark.parametrize("j,expected", [(1, (0, 0)), (2, (1, 1)), (3, (1, -1)), (4, (2, 0)), (11, (4, 0)), (22, (6, 0))])
def test_noll_to_nm_known_values(j, expected):
    """Noll ordering reproduces piston, tilts, defocus and the spherical modes."""
    from formnet.zernike import noll_to_nm

    assert noll_to_nm(j) == expected


def test_noll_bijection_up_to_100():
    """noll_to_nm followed by nm_to_noll returns j, and no (n, m) pair repeats."""
    from formnet.zernike import nm_to_noll, noll_to_nm

    seen = set()
    for j in range(1, 101):
        n, m = noll_to_nm(j)
        assert n >= abs(m) and (n - abs(m)) % 2 == 0
        assert nm_to_noll(n, m) == j
        seen.add((n, m))
    assert len(seen) == 100


def test_noll_rejects_non_positive_index():
    """j < 1 is an invalid index."""
    from formnet.errors import InvalidIndexError
    from formnet.zernike import noll_to_nm

    with pytest.raises(InvalidIndexError):
        noll_to_nm(0)


def test_nm_to_noll_rejects_invalid_orders():
    """(n − |m|) odd or |m| > n is rejected."""
    from formnet.errors import InvalidIndexError
    from formnet.zernike import nm_to_noll

    with pytest.raises(InvalidIndexError):
        nm_to_noll(2, 1)
    with pytest.raises(InvalidIndexError):
        nm_to_noll(1, 3)


def test_zernike_index_model():
    """ZernikeIndex.from_noll fills the orders; inconsistent orders fail validation."""
    from formnet.zernike import ZernikeIndex

    idx = ZernikeIndex.from_noll(11)
    assert (idx.n, idx.m) == (4, 0)
    with pytest.raises(ValueError):
        ZernikeIndex(j=4, n=2, m=1)


def test_zernike_names():
    """Low orders carry conventional names."""
    from formnet.zernike import zernike_name

    assert zernike_name(1) == "piston"
    assert zernike_name(4) == "defocus"
    assert zernike_name(11) == "primary spherical"
    assert zernike_name(37).startswith("Z37")


def test_zernike_coeffs_validation():
    """Coefficients must be finite and keyed by valid Noll indices."""
    from formnet.zernike import ZernikeCoeffs

    c = ZernikeCoeffs.from_pairs([(5, 2.0), (4, 1.0)])
    assert c.get(4) == 1.0
    assert c.get(6) == 0.0
    assert c.max_index == 5
    with pytest.raises(ValueError):
        ZernikeCoeffs(coefficients={4: float("nan")})
    with pytest.raises(ValueError):
        ZernikeCoeffs(coefficients={0: 1.0})
