import pytest

from wciscope.errors import NotWellFormedError, StructuralError
from wciscope.wci import (
    CLASS_GROUP_Z,
    FAILS,
    INDETERMINATE,
    WELL_FORMED,
    Kind,
    WCIDescriptor,
    classify,
    generic_wellformedness,
    hilbert_series_X,
    index,
    is_linear_cone,
    restriction_surjectivity_report,
)
from wciscope.poly import count_monomials

D = WCIDescriptor.of


def test_descriptor_normalizes_and_validates():
    X = D((2, 1, 1), (3,))
    assert X.weights == (1, 1, 2) and X.dim == 1
    assert D((1, 1, 1, 1), (3, 2)).degrees == (2, 3)
    with pytest.raises(StructuralError):
        D((1, 1), (2, 2))
    with pytest.raises(StructuralError):
        D((1, 1, 1), (0,))


@pytest.mark.parametrize(
    "w, d, expected",
    [((1,) * 5, (4,), 1), ((1, 1, 1), (3,), 0), ((1, 1, 1, 3, 3), (6,), 3)],
)
def test_index(w, d, expected):
    assert index(D(w, d)) == expected


@pytest.mark.parametrize("N, a", [(3, 1), (4, 2), (6, 5)])
def test_index_of_torus_family_descriptor(N, a):
    assert index(D((1,) * (N - 1) + (a, a), (2 * a,))) == N - 1


def test_index_unchanged_by_linear_cone_extension():
    X = D((1, 1, 2, 3), (6,))
    for b in (1, 2, 5):
        Y = D(X.weights + (b,), X.degrees + (b,))
        assert index(Y) == index(X)


def test_classify_examples():
    r = classify(D((1,) * 5, (4,)))
    assert r.kind is Kind.FANO and r.rationally_connected and r.class_group_note == CLASS_GROUP_Z

    r = classify(D((1,) * 5, (5,)))
    assert r.kind is Kind.CALABI_YAU and r.not_uniruled is True and r.cy_stabilizer_note

    r = classify(D((1, 1, 1, 2), (6,)))
    assert r.index == -1 and r.kind is Kind.GENERAL_TYPE and r.not_uniruled is None
    assert r.to_dict()["not_uniruled"] == "unknown"


def test_not_uniruled_when_all_weights_divide_index():
    r = classify(D((1, 1, 1, 2), (7,)))  # index -2, divisible by 1 and 2
    assert r.index == -2 and r.not_uniruled is True and not r.cy_stabilizer_note


def test_cy_note_only_for_hypersurfaces():
    r = classify(D((1,) * 6, (3, 3)))
    assert r.index == 0 and r.not_uniruled is True and not r.cy_stabilizer_note


@pytest.mark.parametrize(
    "w, d, expected",
    [((1, 1, 1, 2), (2,), True), ((1,) * 5, (4,), False), ((1, 1, 2, 3), (6, 2), True)],
)
def test_is_linear_cone(w, d, expected):
    assert is_linear_cone(D(w, d)) is expected


def test_generic_wellformedness_examples():
    assert generic_wellformedness(D((1,) * 5, (4,))).status == WELL_FORMED

    v = generic_wellformedness(D((1, 1, 1, 3, 3), (6,)))
    assert v.status == WELL_FORMED
    assert v.details[0] == {"indices": [3, 4], "gcd": 3, "cuts": 1, "expected_dim": 0, "codim": 3}

    # odd degree never cuts the weight-2 plane, so X contains a divisor of singular points
    v = generic_wellformedness(D((1, 1, 2, 2, 2), (5,)))
    assert v.status == FAILS and v.stratum.indices == (2, 3, 4)
    assert v.details[0]["expected_dim"] == 2 and v.details[0]["codim"] == 1
    assert generic_wellformedness(D((1, 1, 2, 2, 2), (4,))).status == WELL_FORMED


def test_generic_wellformedness_strict_boundary():
    # stratum {x3, x4} of weight 2 in P(1,1,1,2,2), degree 3: no monomial of degree 3
    # in two weight-2 variables, so X contains the line and meets it in codim 2
    X = D((1, 1, 1, 2, 2), (3,))
    assert generic_wellformedness(X).status == WELL_FORMED
    assert generic_wellformedness(X, strict=True).status == INDETERMINATE


def test_generic_wellformedness_rejects_bad_ambient():
    with pytest.raises(NotWellFormedError):
        generic_wellformedness(D((1, 2, 2), (4,)))


def test_hilbert_series_X_examples():
    assert hilbert_series_X(D((1, 1, 1, 1), (2,)), 5) == [1, 4, 9, 16, 25, 36]
    assert hilbert_series_X(D((1, 1, 1), (3,)), 5) == [1, 3, 6, 9, 12, 15]
    assert hilbert_series_X(D((1, 1), (1,)), 4) == [1, 1, 1, 1, 1]


@pytest.mark.parametrize("w, d", [((1, 1, 2, 3), (6,)), ((1, 1, 1, 3, 3), (6,)), ((2, 3, 5, 5), (10,))])
def test_hypersurface_series_is_difference_of_counts(w, d):
    series = hilbert_series_X(D(w, d), 20)
    for m, c in enumerate(series):
        assert c == count_monomials(w, m) - count_monomials(w, m - d[0]) >= 0


def test_restriction_report_examples():
    rep = restriction_surjectivity_report(D((1, 1, 1, 1), (2,)), 3)
    assert rep.rows[0].to_dict() == {"m": 0, "dim_R_P": 1, "dim_R_X": 1, "kernel": 0}
    assert (rep.rows[2].ambient_dim, rep.rows[2].restricted_dim, rep.rows[2].kernel_dim) == (10, 9, 1)
    rep = restriction_surjectivity_report(D((1,) * 5, (4,)), 4)
    assert (rep.rows[4].ambient_dim, rep.rows[4].restricted_dim, rep.rows[4].kernel_dim) == (70, 69, 1)
    assert not rep.linear_cone_caveat
    assert restriction_surjectivity_report(D((1, 1, 1, 2), (2,)), 2).linear_cone_caveat


@pytest.mark.parametrize("n, d", [(2, 2), (3, 3), (4, 4), (5, 2)])
def test_kernel_grows_for_unit_weight_hypersurfaces(n, d):
    rows = restriction_surjectivity_report(D((1,) * (n + 1), (d,)), 12).rows
    kernels = [r.kernel_dim for r in rows]
    assert all(k >= 0 for k in kernels)
    assert all(b >= a for a, b in zip(kernels, kernels[1:]))
