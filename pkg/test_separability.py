import itertools

import pytest
from sympy import Poly, QQ, Rational as SymRational

from density_ops import density_matrix, edge_factor
from errors import DensityUndefinedError, DimensionError, OrbitPairingError, PreconditionError
from exact_linalg import LAMBDA, RatMatrix, count_negative_roots
from generator import GraphGenerator
from graph_core import (
    Graph,
    Subsystem,
    TripartiteDims,
    VertexCoord,
    apply_vertex_permutation,
    complete_graph,
    edge_orbit,
    tensor_product,
    vertex_index,
)
from separability import (
    REASON_ORBIT_PAIRING,
    REASON_PPT,
    InconclusiveVerdict,
    NptVerdict,
    PureProductState,
    SeparableDecomposition,
    SeparableVerdict,
    classify,
    decompose_by_edge_orbits,
    decompose_quadruple,
    decompose_tensor_product,
    find_decomposition_mismatch,
    ppt_test,
    star_cubic,
    star_witness,
    verdict_summary,
    verify_decomposition,
)
from transpose_ops import degree_condition

# perfeito emparelhamento em dims (2, 3, 1) com graus balanceados mas sem órbitas completas
UNPAIRED_EDGES = [(1, 5), (3, 4), (2, 6)]


def sigma(x, y, dims):
    """Mistura uniforme das arestas da órbita de {x, y}"""
    orbit = edge_orbit((vertex_index(x, dims), vertex_index(y, dims)), dims)
    total = RatMatrix.zeros(dims.n)
    for e in orbit:
        total = total + edge_factor(e, dims.n, dims).mat
    return total.scale(QQ(1, len(orbit)))


def projector_set(d, dims):
    return {tuple(tuple(row) for row in state.projector(dims).rows()) for _, state in d.terms}


def test_pure_product_state_projector():
    state = PureProductState((1, 1), (1,), (1,))
    assert state.norms == (2, 1, 1)
    assert state.projector(TripartiteDims(2, 1, 1)).rows() == [[QQ(1, 2), QQ(1, 2)], [QQ(1, 2), QQ(1, 2)]]
    assert list(PureProductState((1, -1), (0, 1), (2,)).vector()) == [0, 2, 0, -2]
    with pytest.raises(PreconditionError):
        PureProductState((0, 0), (1,), (1,))
    with pytest.raises(PreconditionError):
        PureProductState((1, 1.5), (1,), (1,))
    with pytest.raises(DimensionError):
        state.projector(TripartiteDims(1, 2, 1))


def test_ppt_test_on_entangled_edge(entangled_graph):
    verdict = ppt_test(density_matrix(entangled_graph))
    assert isinstance(verdict, NptVerdict)
    assert verdict.subsystem is Subsystem.A
    assert verdict.negative_roots == 1
    assert verdict.min_eig_approx == pytest.approx(-0.5)
    expected = Poly(LAMBDA ** 8 * (LAMBDA - SymRational(1, 2)) ** 3 * (LAMBDA + SymRational(1, 2)),
                    LAMBDA, domain=QQ)
    assert verdict.charpoly.to_poly() == expected


def test_ppt_test_inconclusive_on_local_edge_and_complete_graph(local_graph, dims_222):
    assert ppt_test(density_matrix(local_graph)) == InconclusiveVerdict(REASON_PPT)
    assert ppt_test(density_matrix(complete_graph(8, dims_222))) == InconclusiveVerdict(REASON_PPT)


def test_decompose_quadruple_sign_patterns(dims_222):
    d = decompose_quadruple(1, 1, 1, 2, 2, 2, dims_222)
    assert [w for w, _ in d.terms] == [QQ(1, 4)] * 4
    assert [state.factors for _, state in d.terms] == [
        ((1, 1), (1, -1), (1, 1)),
        ((1, 1), (1, 1), (1, -1)),
        ((1, -1), (1, -1), (1, -1)),
        ((1, -1), (1, 1), (1, 1)),
    ]


@pytest.mark.parametrize('dims', [TripartiteDims(2, 2, 2), TripartiteDims(3, 2, 2)])
def test_decompose_quadruple_reproduces_sigma_exhaustively(dims):
    coords = [VertexCoord(*c) for c in itertools.product(*(range(1, size + 1) for size in dims.as_tuple()))]
    for x, y in itertools.product(coords, repeat=2):
        if x.i == y.i or x.j == y.j or x.k == y.k:
            continue
        d = decompose_quadruple(*x, *y, dims)
        assert len(d) == 4
        assert d.mixture(dims) == sigma(x, y, dims)


def test_decompose_quadruple_is_symmetric_in_endpoints(dims_322):
    forward = decompose_quadruple(1, 1, 2, 3, 2, 1, dims_322)
    backward = decompose_quadruple(3, 2, 1, 1, 1, 2, dims_322)
    assert projector_set(forward, dims_322) == projector_set(backward, dims_322)


def test_decompose_quadruple_rejects_shared_coordinate(dims_222):
    with pytest.raises(PreconditionError):
        decompose_quadruple(1, 1, 1, 2, 1, 2, dims_222)
    with pytest.raises(DimensionError):
        decompose_quadruple(1, 1, 1, 3, 2, 2, dims_222)


def test_local_edge_decomposes_into_single_term(local_graph):
    d = decompose_by_edge_orbits(local_graph)
    assert len(d) == 1
    weight, state = d.terms[0]
    assert weight == 1
    assert state.factors == ((1, 0, 0), (1, 0), (1, -1))
    assert verify_decomposition(density_matrix(local_graph), d)


def test_full_quadruple_graph_decomposes_into_four_terms(dims_222):
    g = Graph.from_edges(dims_222, edge_orbit((1, 8), dims_222))
    d = decompose_by_edge_orbits(g)
    assert len(d) == 4
    assert all(w == QQ(1, 4) for w, _ in d.terms)
    assert verify_decomposition(density_matrix(g), d)


@pytest.mark.parametrize('dims', [TripartiteDims(2, 2, 2), TripartiteDims(3, 2, 2)])
def test_complete_graph_decomposes(dims):
    g = complete_graph(dims.n, dims)
    d = decompose_by_edge_orbits(g)
    assert len(d) == g.edge_count
    assert d.weight_sum() == 1
    rho = density_matrix(g)
    assert verify_decomposition(rho, d)
    assert ppt_test(rho) == InconclusiveVerdict(REASON_PPT)


def test_decompose_by_edge_orbits_preconditions(entangled_graph, dims_222):
    with pytest.raises(PreconditionError):
        decompose_by_edge_orbits(entangled_graph)
    with pytest.raises(DensityUndefinedError):
        decompose_by_edge_orbits(Graph.from_edges(dims_222, []))


def test_orbit_pairing_failure_is_reported():
    g = Graph.from_edges(TripartiteDims(2, 3, 1), UNPAIRED_EDGES)
    assert degree_condition(g).holds
    with pytest.raises(OrbitPairingError) as info:
        decompose_by_edge_orbits(g)
    assert info.value.edge == (1, 5)
    assert info.value.missing == ((2, 4),)
    verdict = classify(g)
    assert isinstance(verdict, InconclusiveVerdict)
    assert verdict.reason == REASON_ORBIT_PAIRING


def test_tensor_decomposition_of_single_edges():
    k2 = complete_graph(2)
    d = decompose_tensor_product(k2, k2, k2)
    assert len(d) == 4
    assert all(w == QQ(1, 4) for w, _ in d.terms)
    assert verify_decomposition(density_matrix(tensor_product(k2, k2, k2)), d)


def test_tensor_decomposition_counts_terms():
    k2, k3 = complete_graph(2), complete_graph(3)
    d = decompose_tensor_product(k2, k2, k3)
    # 1·1·3 triplas de arestas, quatro termos cada
    assert len(d) == 12
    assert all(w == QQ(1, 12) for w, _ in d.terms)
    assert verify_decomposition(density_matrix(tensor_product(k2, k2, k3)), d)


def test_tensor_decomposition_on_random_factors(rng):
    gen = GraphGenerator(31)
    for _ in range(50):
        factors = [gen.random_factor(int(rng.integers(2, 4))) for _ in range(3)]
        d = decompose_tensor_product(*factors)
        assert len(d) == 4 * factors[0].edge_count * factors[1].edge_count * factors[2].edge_count
        assert d.weight_sum() == 1
        assert verify_decomposition(density_matrix(tensor_product(*factors)), d)


def test_tensor_decomposition_rejects_edgeless_factor():
    empty = Graph.from_edges(TripartiteDims(2, 1, 1), [])
    with pytest.raises(DensityUndefinedError):
        decompose_tensor_product(complete_graph(2), empty, complete_graph(2))


def test_star_witness_at_eight_vertices(dims_222):
    w = star_witness(8, dims_222)
    assert w.cubic.coefficients == (QQ(1), QQ(-9, 14), QQ(2, 49), QQ(3, 343))
    assert w.negative_roots == 1
    assert w.multiplicity == 5
    assert w.matches_closed_form
    assert w.entangled
    assert w.min_eig_approx < 0


@pytest.mark.parametrize('dims', [(2, 2, 2), (3, 2, 2), (3, 3, 2), (3, 3, 3)])
def test_star_witness_factorization(dims):
    dims = TripartiteDims(*dims)
    n = dims.n
    w = star_witness(n, dims)
    root = SymRational(1, 2 * (n - 1))
    expected = Poly((LAMBDA - root) ** 5, LAMBDA, domain=QQ) * star_cubic(n).to_poly()
    assert w.charpoly.to_poly() == expected
    assert w.multiplicity == 5
    assert w.root_product == -QQ(n + 4, 4 * (n - 1) ** 3)
    assert w.negative_roots == 1
    assert count_negative_roots(w.charpoly) == 1


def test_star_witness_root_product_at_twelve(dims_322):
    assert star_witness(12, dims_322).root_product == QQ(-4, 1331)


def test_star_witness_preconditions():
    with pytest.raises(PreconditionError):
        star_witness(8, TripartiteDims(4, 2, 1))
    with pytest.raises(DimensionError):
        star_witness(9, TripartiteDims(2, 2, 2))


def test_tampered_decompositions_are_rejected(dims_222):
    g = Graph.from_edges(dims_222, edge_orbit((1, 8), dims_222))
    rho = density_matrix(g)
    good = decompose_by_edge_orbits(g)

    heavier = SeparableDecomposition(((QQ(1, 3), good.terms[0][1]),) + good.terms[1:])
    assert not verify_decomposition(rho, heavier)
    assert find_decomposition_mismatch(rho, heavier).location == 'pesos'

    weight, state = good.terms[0]
    flipped = PureProductState(state.a, state.b, tuple(-x if idx else x for idx, x in enumerate(state.c)))
    wrong_sign = SeparableDecomposition(((weight, flipped),) + good.terms[1:])
    mismatch = find_decomposition_mismatch(rho, wrong_sign)
    assert mismatch is not None
    assert mismatch.location.startswith('entrada (')

    negative = SeparableDecomposition(((QQ(-1, 4), state),) + good.terms[1:])
    assert find_decomposition_mismatch(rho, negative).location == 'termo 1'


def test_verification_rejects_shape_mismatch(dims_222, dims_322):
    d = decompose_quadruple(1, 1, 1, 2, 2, 2, dims_222)
    rho = density_matrix(complete_graph(12, dims_322))
    with pytest.raises(DimensionError):
        verify_decomposition(rho, d)


def test_classify_examples(entangled_graph, local_graph, dims_322):
    npt = classify(entangled_graph)
    assert isinstance(npt, NptVerdict)
    assert npt.subsystem is Subsystem.A

    separable = classify(local_graph)
    assert isinstance(separable, SeparableVerdict)
    assert len(separable.decomposition) == 1

    complete = classify(complete_graph(12, dims_322))
    assert isinstance(complete, SeparableVerdict)
    assert verify_decomposition(density_matrix(complete_graph(12, dims_322)), complete.decomposition)


def test_isomorphism_does_not_preserve_verdict(entangled_graph, local_graph):
    assert apply_vertex_permutation(entangled_graph, {2: 8, 8: 2}) == local_graph
    assert classify(entangled_graph).verdict == 'npt'
    assert classify(local_graph).verdict == 'separable'


def test_classify_rejects_edgeless_graph(dims_222):
    with pytest.raises(DensityUndefinedError):
        classify(Graph.from_edges(dims_222, []))


@pytest.mark.parametrize('dims', [TripartiteDims(2, 2, 2), TripartiteDims(3, 2, 2)])
def test_nearest_point_graphs_are_separable_exactly_when_degrees_match(dims):
    gen = GraphGenerator(97)
    for trial in range(250):
        graph = gen.nearest_random(dims, noise=trial % 3).graph
        rho = density_matrix(graph)
        if degree_condition(graph).holds:
            verdict = classify(graph)
            assert isinstance(verdict, SeparableVerdict), graph.sorted_edges()
            assert verify_decomposition(rho, verdict.decomposition)
            if trial < 30:
                assert ppt_test(rho) == InconclusiveVerdict(REASON_PPT)
        else:
            verdict = ppt_test(rho)
            assert isinstance(verdict, NptVerdict), graph.sorted_edges()
            assert verdict.negative_roots >= 1


def test_verdict_summaries(entangled_graph, local_graph):
    assert verdict_summary(classify(entangled_graph)) == 'npt (corte A, mínimo ≈ -0.5)'
    assert verdict_summary(classify(local_graph)) == 'separable (1 termos)'
    assert verdict_summary(InconclusiveVerdict(REASON_PPT)) == 'inconclusive (PPT)'
