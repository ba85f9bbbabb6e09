import numpy as np
import pytest

from isocrys.deform import (AnchoredPreconditionError, ConstraintError, FlagData, FlagLengthError,
                            anchored_type_check, build_prop23_deformation, build_twosl, check_twosl_parameters,
                            deform, prop23_family, prop23_unipotent, search_nilpotents, standard_flags,
                            validate_flags)
from isocrys.graded import build_paper_example, transpose
from isocrys.isocrystal import (generic_analysis, newton_slopes_finite, newton_slopes_generic, p_rank,
                                required_precision_generic)
from isocrys.isogeny import IsogenyType, NewtonPolygon
from isocrys.ring import PrecisionError, RingSpec, mat_identity, mat_mul

P = IsogenyType.parse


@pytest.fixture(scope="module")
def prop23():
    return prop23_family()


@pytest.fixture(scope="module")
def twosl():
    return build_twosl(8)


def test_unipotent_preserves_gram_exactly():
    spec = RingSpec(p=5, f=4, N=16, T=3)
    base = build_paper_example(spec.with_(T=1))
    U = prop23_unipotent(spec)
    fam = build_prop23_deformation(base)
    G = fam.gram
    assert np.array_equal(mat_mul(spec, mat_mul(spec, transpose(U), G), U), G)
    assert fam.unipotent_invertible()


def test_unipotent_needs_t_squared():
    with pytest.raises(ValueError):
        prop23_unipotent(RingSpec(p=5, f=4, N=16, T=2))


def test_identity_deformation_is_constant():
    base = build_paper_example(RingSpec(p=5, f=4, N=16))
    spec = base.spec.with_(T=3)
    fam = deform(base.module, mat_identity(spec, 6), base.verschiebung, 3)
    assert newton_slopes_generic(fam.module, ext_degree=4) == newton_slopes_finite(base.module)


def test_prop23_fibers(prop23):
    base = build_paper_example(prop23.spec.with_(T=1))
    assert np.array_equal(prop23.special_fiber().frobenius, base.frobenius)
    cert = prop23.window_certificate()
    assert cert["pass"] and cert["hodge_dims"] == [2, 1]
    assert prop23.pairing_preserved()
    assert newton_slopes_finite(prop23.special_fiber()).to_strings() == ["1/2"] * 6
    g = generic_analysis(prop23.module, trials=3, seed=0)
    assert g.polygon == NewtonPolygon.from_strings(["0", "0", "1/2", "1/2", "1", "1"])
    assert all(t == g.polygon for t in g.trial_polygons)
    assert all(t.total() == g.det_valuation for t in g.trial_polygons)
    assert p_rank(prop23.module) == 2
    assert p_rank(prop23.special_fiber()) == 0
    assert g.polygon.lies_on_or_below(newton_slopes_finite(prop23.special_fiber()))


def test_prop23_precision_requirement():
    low = build_prop23_deformation(build_paper_example(RingSpec(p=5, f=4, N=16)))
    need = required_precision_generic(low.special_fiber())
    assert need > 16
    with pytest.raises(PrecisionError, match="need N"):
        generic_analysis(low.module)


def test_twosl_parameter_constraints():
    check_twosl_parameters(8, 0, 5)
    for args in ((6, 0, 5), (8, 0, 4), (8, 0, 7)):
        with pytest.raises(ConstraintError):
            check_twosl_parameters(*args)


def test_flags(twosl):
    flags = standard_flags(8)
    assert validate_flags(flags) == (5, 2)
    assert len(flags.F) == 6 and len(flags.E) == 3
    assert FlagData.from_dict(flags.to_dict()) == flags
    bad = standard_flags(8)
    bad.F[2] = list(bad.F[1])
    with pytest.raises(FlagLengthError):
        validate_flags(bad)


def test_nilpotent_validation():
    with pytest.raises(ValueError):
        validate_flags(standard_flags(8, N1=[[1, 0], [0, 0]]))   # not square zero
    with pytest.raises(ValueError):
        validate_flags(standard_flags(8, N1=[[0, 0], [0, 0]]))   # zero


def test_twosl_structure(twosl):
    assert twosl.quotient_lengths == (5, 2)
    assert len(twosl.hodge_ranks_M) == 8 and min(twosl.hodge_ranks_M) >= 6
    assert twosl.K.window_certificate()["pass"] and twosl.M.window_certificate()["pass"]


def test_twosl_K_types(twosl):
    special = anchored_type_check(twosl.K, P("G_{7,1}^2"), "special")
    generic = anchored_type_check(twosl.K, P("G_{6,2}+G_{1,0}^8"), "generic")
    assert special.passed, special.to_dict()
    assert generic.passed, generic.to_dict()
    # a wrong claim must fail at least one anchor
    assert not anchored_type_check(twosl.K, P("G_{7,1}^2"), "generic").passed
    assert newton_slopes_finite(twosl.K.special_fiber()) == P("G_{7,1}^2").slope_polygon()
    assert generic_analysis(twosl.K.module).polygon == P("G_{6,2}+G_{1,0}^8").slope_polygon()


def test_twosl_M_type_additivity_and_direct(twosl):
    K_gen = IsogenyType.from_slopes(generic_analysis(twosl.K.module).polygon)
    H = IsogenyType.from_slopes(newton_slopes_finite(twosl.H))
    assert H == P("G_{7,1}")
    M_type = K_gen.scale(2) + H.scale(3)
    assert M_type.dual() == P("G_{0,1}^16+G_{1,7}^3+G_{2,6}^2")
    need = required_precision_generic(twosl.M.special_fiber())
    wide = build_twosl(8, spec=RingSpec(p=5, f=1, N=max(need, 16)))
    assert IsogenyType.from_slopes(generic_analysis(wide.M.module).polygon) == M_type


def test_anchored_precondition():
    base = build_paper_example(RingSpec(p=5, f=4, N=16))
    with pytest.raises(AnchoredPreconditionError):
        anchored_type_check(base.module, P("G_{1,2}+G_{2,1}"), "special")


@pytest.mark.slow
def test_search_reproduces_frozen_nilpotents():
    assert search_nilpotents() == ([[0, 0], [1, 0]], [[0, 1], [0, 0]])
