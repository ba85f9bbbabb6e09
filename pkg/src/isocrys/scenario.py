"""Scenario runner: each directive builds an object, checks claims and returns a report.

A scenario is a JSON document ``{"format": 1, "name": ..., "directive": ..., "params": {...},
"expect": {...}}``.  ``expect`` overrides the built-in expected values of a directive.
Reports are JSON with sorted keys; only the ``timing_seconds`` field varies between runs.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from .isogeny import IsogenyType, NewtonPolygon, classify_graded_symmetric
from .ring import PrecisionError, RingSpec

FORMAT = 1
DEFAULT_N_ENV = "ISOCRYS_DEFAULT_N"


class ScenarioError(ValueError):
    """Invalid scenario input (exit code 2)."""


def default_precision(fallback: int = 16) -> int:
    raw = os.environ.get(DEFAULT_N_ENV)
    if raw is None:
        return fallback
    try:
        n = int(raw)
    except ValueError as exc:
        raise ScenarioError(f"{DEFAULT_N_ENV} must be an integer, got {raw!r}") from exc
    if n < 2:
        raise ScenarioError(f"{DEFAULT_N_ENV} must be at least 2")
    return n


def _plain(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    if isinstance(x, (IsogenyType, NewtonPolygon)):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


@dataclass
class Claim:
    name: str
    expected: object
    observed: object
    relation: str = "eq"   # eq | all_ge | set_eq

    @property
    def passed(self) -> bool:
        if self.relation == "eq":
            return self.expected == self.observed
        if self.relation == "all_ge":
            return self.observed is not None and all(v >= self.expected for v in self.observed)
        if self.relation == "set_eq":
            return set(self.expected) == set(self.observed)
        raise ValueError(self.relation)

    def to_dict(self) -> dict:
        exp, obs = self.expected, self.observed
        if self.relation == "set_eq":
            exp, obs = sorted(map(str, exp)), sorted(map(str, obs))
        return {"claim": self.name, "relation": self.relation, "expected": _plain(exp),
                "observed": _plain(obs), "pass": bool(self.passed)}


@dataclass
class Report:
    name: str
    directive: str
    claims: list[Claim] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    errors: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.errors and all(c.passed for c in self.claims)

    def add(self, name, expected, observed, relation="eq") -> Claim:
        c = Claim(name, expected, observed, relation)
        self.claims.append(c)
        return c

    def claim(self, name: str) -> Claim:
        for c in self.claims:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self, timing: bool = True) -> dict:
        d = {"format": FORMAT, "scenario": self.name, "directive": self.directive,
             "claims": [c.to_dict() for c in self.claims], "data": _plain(self.data),
             "errors": self.errors, "pass": self.passed}
        if timing:
            d["timing_seconds"] = round(self.seconds, 3)
        return d

    def to_text(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# helpers

def _ring(params: dict, p=5, f=4, N=None, T=1) -> RingSpec:
    r = dict(params.get("ring", {}))
    try:
        return RingSpec(p=int(r.get("p", p)), f=int(r.get("f", f)),
                        N=int(r.get("N", N if N is not None else default_precision())), T=int(r.get("T", T)))
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"invalid ring: {exc}") from exc


def _slopes(strings) -> list[str]:
    return NewtonPolygon.from_strings(strings).to_strings()


HALF6 = ["1/2"] * 6


# ---------------------------------------------------------------------------
# directives

def _paper_ex1(rep: Report, params: dict, expect: dict) -> None:
    from .graded import (build_paper_example, expected_example_form, morita_split, paper_generator,
                         satisfies_f2_eq_p, skeleton_anisotropic, skeleton_matches, skeleton_solve,
                         synthetic_double)
    from .isocrystal import newton_slopes_finite
    from .ring import random_elem

    spec = _ring(params)
    m = build_paper_example(spec)
    slopes = newton_slopes_finite(m.module)
    rep.data["ring"] = spec.to_dict()
    rep.add("slopes", _slopes(expect.get("slopes", HALF6)), slopes.to_strings())
    rep.add("pairing_compatible_all_basis_pairs", True, not m.compatibility_defects())
    rep.add("fv_vf_equal_p", True, not m.fv_defects())

    sk = skeleton_solve(m)
    rep.data["skeleton"] = {"kernel_rank": sk.kernel_rank, "reliable_digits": sk.reliable_digits,
                            "diagonal": [str(x) for x in sk.diagonal()]}
    rep.add("skeleton_dimension", expect.get("skeleton_dimension", 3), sk.dimension)
    rep.add("skeleton_anisotropic", expect.get("skeleton_anisotropic", True), skeleton_anisotropic(sk))
    rep.add("skeleton_form_equivalent_to_1_2p_-2p_delta", True, skeleton_matches(sk, expected_example_form(spec)))
    rng = np.random.default_rng(int(params.get("seed", 0)))
    ok = True
    for _ in range(int(params.get("generator_samples", 4))):
        a = random_elem(spec, rng)
        b0 = random_elem(spec, rng)
        ok &= satisfies_f2_eq_p(m, paper_generator(spec, a, b0 + b0.tau(2)), spec.N - 2)
    rep.add("displayed_generators_satisfy_F2_eq_p", True, bool(ok))

    data = synthetic_double(m)
    split, _ = morita_split(data)
    same = (np.array_equal(split.frobenius.astype(object), m.frobenius.astype(object))
            and np.array_equal(split.gram.astype(object), m.gram.astype(object))
            and np.array_equal(split.verschiebung.astype(object), m.verschiebung.astype(object)))
    rep.add("idempotent_split_recovers_module", True, bool(same))
    if params.get("deform"):
        _prop23(rep, params, expect)


def _prop23(rep: Report, params: dict, expect: dict) -> None:
    from .deform import prop23_family
    from .isocrystal import generic_analysis, newton_slopes_finite, p_rank

    ring = params.get("ring", {})
    trials = int(params.get("trials", 3))
    seed = int(params.get("seed", 0))
    ext = int(params.get("ext_degree", 24))
    fam = prop23_family(p=int(ring.get("p", 5)), f=int(ring.get("f", 4)), N=params.get("N"), ext_degree=ext)
    cert = fam.window_certificate()
    rep.data["deformation"] = {"ring": fam.spec.to_dict(), "window_certificate": cert}
    special = newton_slopes_finite(fam.special_fiber())
    gen = generic_analysis(fam.module, trials=trials, ext_degree=ext, seed=seed)
    rep.data["deformation"]["generic"] = gen.to_dict()
    rep.add("deformation_window_axiom", True, cert["pass"])
    rep.add("deformation_pairing_preserved", True, fam.pairing_preserved())
    rep.add("special_slopes", _slopes(expect.get("special_slopes", HALF6)), special.to_strings())
    rep.add("generic_slopes", _slopes(expect.get("generic_slopes", ["0", "0", "1/2", "1/2", "1", "1"])),
            gen.polygon.to_strings())
    rep.add("generic_trials_agree", True, all(t == gen.trial_polygons[0] for t in gen.trial_polygons))
    rep.add("generic_det_certificates", True, all(t.total() == gen.det_valuation for t in gen.trial_polygons))
    rep.add("generic_p_rank", expect.get("generic_p_rank", 2), p_rank(fam.module, trials=trials, seed=seed))
    rep.add("special_p_rank", expect.get("special_p_rank", 0), p_rank(fam.special_fiber()))


TWOSL_DEFAULTS = {
    (8, 0, 5): {
        "K_special_type": "G_{7,1}^2",
        "K_generic_type": "G_{6,2}+G_{1,0}^8",
        "M_generic_dual_type": "G_{0,1}^16+G_{1,7}^3+G_{2,6}^2",
    }
}


def _twosl_types(res, trials, seed):
    """K~ polygons, H type, and the M~ type assembled by additivity."""
    from .deform import special_and_generic_polygons
    from .isocrystal import newton_slopes_finite

    k_special, k_gen = special_and_generic_polygons(res.K, trials=trials, seed=seed)
    h_type = IsogenyType.from_slopes(newton_slopes_finite(res.H))
    k_type = IsogenyType.from_slopes(k_gen.polygon)
    m_type = k_type.scale(2) + h_type.scale(3)
    return k_special, k_gen, h_type, k_type, m_type


def _twosl(rep: Report, params: dict, expect: dict) -> None:
    from .deform import (anchored_type_check, build_twosl, check_twosl_parameters, standard_flags)
    from .isocrystal import generic_analysis, required_precision_generic

    r = int(params.get("r", 8))
    s1 = int(params.get("sigma1", 0))
    s2 = int(params.get("sigma2", 5))
    check_twosl_parameters(r, s1, s2)
    trials = int(params.get("trials", 3))
    seed = int(params.get("seed", 0))
    p = int(params.get("p", 5))
    N = int(params.get("N", default_precision()))
    if "N1" in params or "N2" in params:
        flags = standard_flags(r, s1, s2, params.get("N1"), params.get("N2"))
    else:
        flags = standard_flags(r, s1, s2)
    res = build_twosl(r, flags=flags, spec=RingSpec(p=p, f=1, N=N))
    defaults = dict(TWOSL_DEFAULTS.get((r, s1, s2), {}))
    defaults.update(expect)
    rep.data["construction"] = res.summary()
    rep.add("quotient_lengths", list(defaults.get("quotient_lengths", [5, 2])), list(res.quotient_lengths))
    rep.add("M_hodge_ranks_at_least", int(defaults.get("min_hodge_rank", 6)), res.hodge_ranks_M, "all_ge")
    rep.add("K_window_axiom", True, res.K.window_certificate()["pass"])
    rep.add("M_window_axiom", True, res.M.window_certificate()["pass"])

    k_special, k_gen, h_type, k_type, m_type = _twosl_types(res, trials, seed)
    rep.data["K_special_slopes"] = str(k_special)
    rep.data["K_generic"] = k_gen.to_dict()
    rep.data["H_type"] = str(h_type)
    rep.data["M_generic_type_by_additivity"] = str(m_type)
    for key, fiber in (("K_special_type", "special"), ("K_generic_type", "generic")):
        if key in defaults:
            claimed = IsogenyType.parse(defaults[key])
            a = anchored_type_check(res.K, claimed, fiber, trials=trials, seed=seed)
            rep.data[f"{key}_anchored"] = a.to_dict()
            rep.add(f"{key}_anchored", True, a.passed)
            rep.add(f"{key}_polygon", str(claimed),
                    str(IsogenyType.from_slopes(k_special if fiber == "special" else k_gen.polygon)))
    if "M_generic_dual_type" in defaults:
        rep.add("M_generic_dual_type", str(IsogenyType.parse(defaults["M_generic_dual_type"])), str(m_type.dual()))
    if params.get("direct_M", True):
        # the full M~ polygon at a precision large enough for its generic fiber
        need = required_precision_generic(res.M.special_fiber())
        NM = int(params.get("N_M", max(need, N)))
        resM = res if NM == N else build_twosl(r, flags=flags, spec=RingSpec(p=p, f=1, N=NM))
        g = generic_analysis(resM.M.module, trials=trials, seed=seed)
        rep.data["M_direct"] = {"N": NM, **g.to_dict()}
        rep.add("M_generic_type_direct", str(m_type), str(IsogenyType.from_slopes(g.polygon)))


CLASSIFY_DEFAULTS = {
    4: ["G_{1,1}^2", "G_{0,1}^2+G_{1,0}^2"],
    6: ["G_{1,1}^3", "G_{0,1}^2+G_{1,1}+G_{1,0}^2"],
}


def _classify(rep: Report, params: dict, expect: dict) -> None:
    h = int(params.get("height", 6))
    got = classify_graded_symmetric(h)
    rep.data["types"] = sorted(str(t) for t in got)
    rep.data["count"] = len(got)
    exp = expect.get("types", CLASSIFY_DEFAULTS.get(h))
    if exp is not None:
        rep.add("types", {IsogenyType.parse(t) for t in exp}, got, "set_eq")
    for t in got:
        if not t.is_self_dual() or any((e * (m + n)) % 2 for (m, n), e in t.parts):
            rep.add(f"{t}_self_dual_even_blocks", True, False)


def _load_module(params: dict):
    from .isocrystal import FModule

    if "module" in params:
        return FModule.from_dict(params["module"])
    if "file" in params:
        try:
            doc = json.loads(Path(params["file"]).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ScenarioError(f"cannot read module file: {exc}") from exc
        return FModule.from_dict(doc.get("module", doc))
    raise ScenarioError("newton needs 'module' or 'file'")


def _newton(rep: Report, params: dict, expect: dict) -> None:
    from .isocrystal import determinant_valuation, generic_analysis, newton_slopes_finite

    try:
        module = _load_module(params)
    except (KeyError, TypeError) as exc:
        raise ScenarioError(f"malformed module: {exc}") from exc
    rep.data["rank"] = module.rank
    rep.data["r"] = module.r
    if params.get("generic") and not module.is_t_constant():
        g = generic_analysis(module, trials=int(params.get("trials", 3)), seed=int(params.get("seed", 0)))
        poly = g.polygon
        rep.data["generic"] = g.to_dict()
        rep.add("trial_det_certificates", True, all(t.total() == g.det_valuation for t in g.trial_polygons))
    else:
        poly = newton_slopes_finite(module)
        rep.add("slope_sum_equals_det_valuation", determinant_valuation(module), poly.total())
    rep.data["slopes"] = poly.to_strings()
    try:
        rep.data["isogeny_type"] = str(IsogenyType.from_slopes(poly))
    except ValueError:
        rep.data["isogeny_type"] = None
    if "slopes" in expect:
        rep.add("slopes", _slopes(expect["slopes"]), poly.to_strings())


def _hilbert(rep: Report, params: dict, expect: dict) -> None:
    from .localfield import LocalFieldElem, hilbert_symbol

    p, f = int(params["p"]), int(params.get("f", 1))
    if p < 3:
        raise ScenarioError("p must be odd")
    spec = RingSpec(p=p, f=f, N=int(params.get("N", 16)))
    try:
        a, b = Fraction(params["a"]), Fraction(params["b"])
    except (ValueError, ZeroDivisionError) as exc:
        raise ScenarioError(f"invalid rational: {exc}") from exc
    if a == 0 or b == 0:
        raise ScenarioError("Hilbert symbol arguments must be nonzero")
    x, y = LocalFieldElem.from_int(spec, a), LocalFieldElem.from_int(spec, b)
    h = hilbert_symbol(x, y, f)
    rep.data["symbol"] = h
    rep.add("symmetric", h, hilbert_symbol(y, x, f))
    rep.add("value_is_sign", True, h in (1, -1))
    if "symbol" in expect:
        rep.add("symbol", int(expect["symbol"]), h)


def _search_triple(rep: Report, params: dict, expect: dict) -> None:
    from .localfield import find_anisotropic_triple, quadratic_integer_to_local, ternary_anisotropic

    D, p = int(params.get("disc", 2)), int(params.get("p", 5))
    N = int(params.get("N", 16))
    try:
        triple = find_anisotropic_triple(D, p, bound=int(params.get("bound", 50)), N=N)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc
    rep.data["triple"] = [str(z) for z in triple]
    spec = RingSpec(p=p, f=2, N=N)
    rep.add("totally_positive", True, all(z.is_totally_positive() for z in triple))
    rep.add("anisotropic_rechecked", True,
            ternary_anisotropic(*[quadratic_integer_to_local(z, spec) for z in triple], degree=2))


def _octonion(rep: Report, params: dict, expect: dict) -> None:
    from .octonion import (OctonionAlgebra, commutant_dimension, derivation_basis, lambda2_split,
                           long_root_sl2_weights, pairwise_sum_weights, projections_complementary,
                           projections_equivariant, skew_defects, wedge_weights)

    check = params.get("check", "all")
    valid = ("all", "derivations", "lambda2", "weights", "commutants")
    if check not in valid:
        raise ScenarioError(f"check must be one of {valid}")
    flavors = params.get("flavors", ["division", "split"])
    split = OctonionAlgebra.split()
    ders = {}
    for fl in flavors:
        alg = OctonionAlgebra.of(fl)
        ders[fl] = derivation_basis(alg)
        if check in ("all", "derivations"):
            d = ders[fl]
            rep.add(f"{fl}_derivation_dimension", 14, d.dimension)
            rep.add(f"{fl}_derivations_skew_for_trace_form", 0, skew_defects(d))
            d.structure_constants()
            rep.add(f"{fl}_norm_witt_index", 0 if fl == "division" else 4, alg.witt_index())
    if check in ("all", "lambda2"):
        for fl in flavors:
            alg = OctonionAlgebra.of(fl)
            s = lambda2_split(alg, ders[fl])
            rep.add(f"{fl}_lambda2_ranks", [14, 7], [s.rank_g, s.rank_c])
            rep.add(f"{fl}_commutator_surjective", 7, s.commutator_rank)
            rep.add(f"{fl}_projections_complementary", True, projections_complementary(s))
            rep.add(f"{fl}_projections_equivariant", True, projections_equivariant(s, ders[fl]))
    if check in ("all", "weights"):
        d = ders.get("split") or derivation_basis(split)
        w = long_root_sl2_weights(split, d)
        w2 = long_root_sl2_weights(split, d, candidate=1)
        rep.add("long_root_weights_C0", [-1, -1, 0, 0, 0, 1, 1], w.multiset())
        rep.add("weights_independent_of_nilpotent", w.multiset(), w2.multiset())
        ww = wedge_weights(w)
        rep.data["lambda2_weights"] = ww
        rep.add("lambda2_weights_are_pairwise_sums", pairwise_sum_weights(w.multiset()), ww)
        rep.add("lambda2_zero_weight_multiplicity", expect.get("lambda2_zero_weight_multiplicity", 7),
                ww.count(0))
    if check in ("all", "commutants"):
        for fl in flavors:
            alg = OctonionAlgebra.of(fl)
            rep.add(f"{fl}_commutant_C0", 1, commutant_dimension(alg, "C0", ders[fl]))
            rep.add(f"{fl}_commutant_lambda2", 2, commutant_dimension(alg, "L2", ders[fl]))
        rep.add("unconstrained_End_C0", 49, commutant_dimension(split, "C0", constrained=False))


def _ghost(rep: Report, params: dict, expect: dict) -> None:
    from .ghost import ghost_case

    r = int(params.get("r", 8))
    cases = params.get("cases") or [params.get("case", "so3")]
    defaults = {"so3": 2, "so5": 1, "g2": r}
    for name in cases:
        if name not in defaults:
            raise ScenarioError(f"unknown ghost case {name!r}")
        c = ghost_case(name, r)
        rep.data[name] = c.to_dict()
        rep.add(f"{name}_ghost_dim", int(expect.get(f"{name}_ghost_dim", defaults[name])), c.dimension)


def _chain(rep: Report, params: dict, expect: dict) -> None:
    """M~ type -> dual -> ghost type -> indecomposability, with the G2 ghost dimension."""
    from .deform import build_twosl, check_twosl_parameters
    from .ghost import ghost_case, ghost_isogeny_type

    r = int(params.get("r", 8))
    if "M_type" in params:
        m_type = IsogenyType.parse(params["M_type"])
    else:
        check_twosl_parameters(r, 0, 5)
        res = build_twosl(r, spec=RingSpec(p=int(params.get("p", 5)), f=1, N=int(params.get("N", default_precision()))))
        m_type = _twosl_types(res, int(params.get("trials", 3)), int(params.get("seed", 0)))[4]
    dual = m_type.dual()
    rep.data["M_generic_type"] = str(m_type)
    rep.data["dual"] = str(dual)
    exp_dual = expect.get("dual", TWOSL_DEFAULTS.get((r, 0, 5), {}).get("M_generic_dual_type"))
    if exp_dual:
        rep.add("dual_type", str(IsogenyType.parse(exp_dual)), str(dual))
    # the slope-(r-1)/r block of the dual, of height r, paired with its dual
    block = [(mn, e) for mn, e in dual.parts if mn == (1, r - 1)]
    rep.add("dual_contains_G_1_r-1", True, bool(block))
    ghost = IsogenyType.of((1, r - 1)) + IsogenyType.of((1, r - 1)).dual()
    rep.data["ghost_type"] = str(ghost)
    rep.add("ghost_type", str(ghost_isogeny_type(r)), str(ghost))
    rep.add("ghost_type_self_dual", True, ghost.is_self_dual())
    rep.add("ghost_type_decomposable_into_self_duals", False, ghost.decomposable_into_self_duals())
    g2 = ghost_case("g2", r)
    rep.add("ghost_height_is_twice_ghost_dim", ghost.height, 2 * g2.dimension)


def _oort(rep: Report, params: dict, expect: dict) -> None:
    from .ghost import oort_invariant

    try:
        dim, deg = int(params["dim"]), int(params["end_degree"])
    except (KeyError, ValueError) as exc:
        raise ScenarioError(f"oort needs integer dim and end_degree: {exc}") from exc
    if deg < 1 or dim < 0:
        raise ScenarioError("end_degree must be positive and dim non-negative")
    val = oort_invariant(dim, deg)
    rep.data["value"] = str(val)
    if "value" in expect:
        rep.add("value", str(Fraction(expect["value"])), str(val))


def _tensor_lattice(rep: Report, params: dict, expect: dict) -> None:
    from .graded import (_as_ring_scalar, base_skeleton_value, height2_supersingular, skeleton_anisotropic, skeleton_solve,
                         tensor_lattice_module)
    from .isocrystal import newton_slopes_finite
    from .localfield import LocalFieldElem, QuadraticInteger, ternary_anisotropic

    spec = _ring(params, f=2)
    base = height2_supersingular(spec)
    diag = []
    for x in params.get("diag", [1, 1, 1]):
        diag.append(QuadraticInteger(int(x[0]), int(x[1]), int(x[2])) if isinstance(x, list) else int(x))
    m = tensor_lattice_module(diag, base)
    rep.add("slopes", HALF6, newton_slopes_finite(m.module).to_strings())
    sk = skeleton_solve(m)
    rep.add("skeleton_dimension", 3, sk.dimension)
    s = base_skeleton_value(base)
    scaled = [LocalFieldElem.from_ring(_as_ring_scalar(spec, x)) * s for x in diag]
    direct = ternary_anisotropic(*scaled, degree=2)
    verdict = skeleton_anisotropic(sk)
    rep.data["anisotropic"] = verdict
    rep.add("skeleton_verdict_matches_scaled_form", direct, verdict)
    if "anisotropic" in expect:
        rep.add("anisotropic", bool(expect["anisotropic"]), verdict)


DIRECTIVES = {
    "paper-ex1": _paper_ex1,
    "prop23-deform": _prop23,
    "twosl": _twosl,
    "classify": _classify,
    "newton": _newton,
    "custom": _newton,
    "hilbert": _hilbert,
    "search-triple": _search_triple,
    "octonion": _octonion,
    "ghost": _ghost,
    "chain": _chain,
    "oort": _oort,
    "tensor-lattice": _tensor_lattice,
}


def run_scenario(doc: dict) -> Report:
    if not isinstance(doc, dict):
        raise ScenarioError("scenario must be a JSON object")
    if doc.get("format", FORMAT) != FORMAT:
        raise ScenarioError(f"unsupported scenario format {doc.get('format')!r}")
    directive = doc.get("directive")
    if directive not in DIRECTIVES:
        raise ScenarioError(f"unknown directive {directive!r}")
    params = doc.get("params", {}) or {}
    expect = doc.get("expect", {}) or {}
    rep = Report(doc.get("name", directive), directive)
    t0 = time.perf_counter()
    try:
        DIRECTIVES[directive](rep, params, expect)
    except PrecisionError as exc:
        rep.errors.append(f"precision: {exc}")
    rep.seconds = time.perf_counter() - t0
    return rep


def load_scenario(path_or_name: str) -> dict:
    p = Path(path_or_name)
    if not p.exists():
        bundled = resources.files("isocrys") / "scenarios" / (path_or_name if path_or_name.endswith(".json")
                                                              else path_or_name + ".json")
        if not bundled.is_file():
            raise ScenarioError(f"no scenario file or bundled scenario named {path_or_name!r}")
        text = bundled.read_text()
    else:
        text = p.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON: {exc}") from exc


def bundled_scenarios() -> list[str]:
    root = resources.files("isocrys") / "scenarios"
    return sorted(x.name[:-5] for x in root.iterdir() if x.name.endswith(".json"))
