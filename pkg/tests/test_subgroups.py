import pytest

from tml.corpus import (axis_subgroup, base_field_tower, graph_modules,
                        tensor_square)
from tml.fields import Poly
from tml.linalg import Mat
from tml.ore import OrePoly
from tml.subgroups import (KernelSubgroup, NoWitnessUpTo, ProvablyUnstable,
                           Stable, minimal_j_scan)
from tml.tmodule import carlitz, carlitz_tensor


def _t_monomial(fq, j):
    return Poly(fq, (0,) * j + (1,))


def test_graph_contains_its_points(tower2):
    first, second, ambient, graph = graph_modules(tower2)
    t = tower2.T()
    assert graph.contains((t, t + t * t))
    assert graph.contains((tower2.one(), tower2.zero()))
    assert not graph.contains((t, t))


def test_graph_witness_is_second_action(tower2):
    first, second, ambient, graph = graph_modules(tower2)
    a = _t_monomial(tower2.fq, 1)
    verdict = graph.stability(a)
    assert isinstance(verdict, Stable)
    assert verdict.witness == second.phi_t
    assert verdict.witness * graph.presentation == \
        graph.presentation * ambient.act(a)


def test_graph_witness_is_unique_at_its_degree(tower2):
    # the second presentation column is the scalar 1, so R * P = 0 forces
    # R = 0 and the bounded witness is unique
    first, second, ambient, graph = graph_modules(tower2)
    a = _t_monomial(tower2.fq, 1)
    g = graph.presentation * ambient.act(a)
    q = second.phi_t
    for deg in range(q.degree + 1):
        bumped = q + OrePoly.scalar(
            tower2, (tower2.zero(),) * deg + (tower2.one(),))
        assert bumped * graph.presentation != g


def test_axis_verdicts(tower2):
    module = tensor_square(tower2)
    axis = axis_subgroup(module)
    under_t = axis.stability(_t_monomial(tower2.fq, 1))
    assert isinstance(under_t, ProvablyUnstable)
    assert under_t.reason == "tangent-escape"
    assert under_t.vector is not None
    under_t2 = axis.stability(_t_monomial(tower2.fq, 2))
    assert isinstance(under_t2, Stable)
    assert under_t2.witness.scalar_elems() == \
        (tower2.T() ** 2, tower2.one())


def test_escaping_axis_refutation(tower2):
    # moving the twist entry to the upper-right corner makes the second
    # axis escape through a zero column
    module = tensor_square(tower2, corner=(0, 1))
    axis = axis_subgroup(module)
    verdict = axis.stability(_t_monomial(tower2.fq, 2))
    assert isinstance(verdict, ProvablyUnstable)
    assert verdict.reason == "escaping-axis"
    assert verdict.column is not None


def test_witnesses_compose_along_products(tower2):
    module = tensor_square(tower2)
    axis = axis_subgroup(module)
    fq = tower2.fq
    a = _t_monomial(fq, 2)
    q = axis.stability(a).witness
    p = axis.presentation
    # Q_a * Q_b witnesses a*b, and Q^n witnesses a^n
    acc = q
    power = a
    for _ in range(2):
        acc = acc * q
        power = power * a
        assert acc * p == p * module.act(power)
    b = _t_monomial(fq, 4)
    qb = axis.stability(b).witness
    assert (q * qb) * p == p * module.act(a * b)


def test_full_subgroup_always_stable(tower2):
    module = carlitz_tensor(tower2, 2)
    full = KernelSubgroup.full(module)
    assert full.is_full
    verdict = full.stability(_t_monomial(tower2.fq, 1))
    assert isinstance(verdict, Stable)
    assert verdict.witness.rows == 0


def test_stability_with_constant_polynomial(tower2):
    module = tensor_square(tower2)
    axis = axis_subgroup(module)
    verdict = axis.stability(Poly(tower2.fq, (1,)))
    assert isinstance(verdict, Stable)


def test_no_witness_reported_as_bound_not_refutation(tower2):
    from tml.torsion import counterexample_module, curve_of_squares, sqrt_tower
    ext = sqrt_tower(tower2)
    curve = curve_of_squares(counterexample_module(ext))
    verdict = curve.stability(_t_monomial(tower2.fq, 1), witness_bound=2)
    assert isinstance(verdict, NoWitnessUpTo)
    assert verdict.bound == 2


def test_minimal_j_scan_stops_at_first_stable(tower2):
    module = tensor_square(tower2)
    axis = axis_subgroup(module)
    scan = minimal_j_scan(axis, max_j=5)
    assert scan.found == 2
    assert scan.searched_to == 2
    assert len(scan.rows) == 2
    assert isinstance(scan.rows[0].verdict, ProvablyUnstable)
    assert isinstance(scan.rows[1].verdict, Stable)
    assert scan.found <= scan.bound_hint


def test_minimal_j_scan_default_cap_is_bound_hint(tower2):
    module = tensor_square(tower2)
    axis = axis_subgroup(module)
    scan = minimal_j_scan(axis)
    assert scan.found == 2
    assert scan.bound_hint == module.j_bound()


def test_tangent_preserved_matches_verdicts(tower2):
    module = tensor_square(tower2)
    axis = axis_subgroup(module)
    assert not axis.tangent_preserved(_t_monomial(tower2.fq, 1))
    assert axis.tangent_preserved(_t_monomial(tower2.fq, 2))
