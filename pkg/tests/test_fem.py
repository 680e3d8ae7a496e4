import math

import numpy as np
import pytest
import scipy.sparse.linalg as spla
from hypothesis import given, settings, strategies as st

from conftest import UNIT
from robinhom.errors import ConvergenceError, IndefiniteMatrixError, ValidationError
from robinhom.fem import (LinearSystem, ScalarField, SparseSymMatrix, assemble_load,
                          assemble_mass, assemble_robin_boundary, assemble_robin_load,
                          assemble_stiffness, element_mass, element_stiffness, format_field,
                          l2_error, parse_field, read_field, solve_cg, write_field)
from robinhom.functions import AnalyticFunction, constant, sphere_constant
from robinhom.geometry import Hole
from robinhom.mesh import OUTER, Mesh, mesh_perforated, mesh_rectangle

REF_STIFFNESS = np.array([[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]])
REF_MASS = np.array([[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]]) / 24.0


def single_triangle(a=(0.0, 0.0), b=(1.0, 0.0), c=(0.0, 1.0)):
    return Mesh([a, b, c], [[0, 1, 2]], [[0, 1], [1, 2], [2, 0]], [OUTER] * 3, h=1.0)


def single_edge_mesh(length):
    # a thin triangle whose only boundary edge of interest is (0, 1)
    return Mesh([[0.0, 0.0], [length, 0.0], [0.0, 1.0]], [[0, 1, 2]], [[0, 1]], [OUTER],
                h=length)


def test_reference_element_matrices():
    m = single_triangle()
    assert np.array_equal(element_stiffness(m)[0], REF_STIFFNESS)
    assert element_mass(m)[0] == pytest.approx(REF_MASS, abs=1e-17)


@given(st.floats(-100, 100), st.floats(-100, 100))
@settings(max_examples=50, deadline=None)
def test_stiffness_translation_invariant(dx, dy):
    m = single_triangle((dx, dy), (dx + 1, dy), (dx, dy + 1))
    assert element_stiffness(m)[0] == pytest.approx(REF_STIFFNESS, abs=1e-12)


@given(st.floats(0.1, 10), st.floats(0.1, 10), st.floats(-5, 5))
@settings(max_examples=50, deadline=None)
def test_stiffness_rows_sum_to_zero(a, b, c):
    K = element_stiffness(single_triangle((0, 0), (a, 0), (c, b)))[0]
    assert np.abs(K.sum(axis=1)).max() < 1e-12 * np.abs(K).max()
    assert np.linalg.eigvalsh(K).min() > -1e-12 * np.abs(K).max()


@pytest.mark.parametrize("length, alpha, expected", [
    (1.0, 1.0, np.array([[2.0, 1.0], [1.0, 2.0]]) / 6),
    (1.0, 0.0, np.zeros((2, 2))),
    (0.5, 2.0, np.array([[2.0, 1.0], [1.0, 2.0]]) / 6),
])
def test_robin_edge_block(length, alpha, expected):
    R = assemble_robin_boundary(single_edge_mesh(length), "outer", alpha).toarray()
    assert R[:2, :2] == pytest.approx(expected, abs=1e-16)
    assert np.all(R[2] == 0)


def test_robin_rejects_negative_alpha():
    with pytest.raises(ValidationError):
        assemble_robin_boundary(single_edge_mesh(1.0), "outer", -1.0)


@pytest.mark.parametrize("h", [1.0, 0.25, 0.1])
def test_load_of_one_sums_to_area(h):
    m = mesh_rectangle(UNIT, h)
    assert assemble_load(m, constant(1.0)).sum() == pytest.approx(1.0, rel=1e-14)
    assert not assemble_load(m, constant(0.0)).any()


def test_load_exact_for_linear_source():
    # int (a + b x + c y) phi_i over the unit right triangle, by hand
    m = single_triangle()
    a, b, c = 1.5, -2.0, 3.0
    load = assemble_load(m, AnalyticFunction("linear", (a, b, c)))
    # int phi_i = 1/6, int x phi_i = (2, 1, 1)/24 shifted by vertex, likewise y
    int_phi = np.full(3, 1 / 6)
    int_x_phi = np.array([1, 2, 1]) / 24
    int_y_phi = np.array([1, 1, 2]) / 24
    assert load == pytest.approx(a * int_phi + b * int_x_phi + c * int_y_phi, abs=1e-15)


def test_robin_load_constant_on_edge():
    L, c = 0.7, 2.5
    b = assemble_robin_load(single_edge_mesh(L), "outer", 1.0, constant(c))
    assert b == pytest.approx([c * L / 2, c * L / 2, 0.0], abs=1e-15)
    assert not assemble_robin_load(single_edge_mesh(L), "outer", 0.0, constant(c)).any()


@pytest.fixture(scope="module")
def one_hole():
    return mesh_perforated(UNIT, [Hole((0.5, 0.5), 0.1)], 0.1)


def test_robin_load_over_hole_gives_perimeter(one_hole):
    m = one_hole
    rim = m.boundary_edges[m.edge_tags == 0]
    perimeter = np.hypot(*(m.vertices[rim[:, 1]] - m.vertices[rim[:, 0]]).T).sum()
    n = 16
    assert perimeter == pytest.approx(2 * n * 0.1 * math.sin(math.pi / n), rel=1e-13)
    b = assemble_robin_load(m, "holes", 1.0, sphere_constant(1.0))
    assert b.sum() == pytest.approx(perimeter, rel=1e-14)


def test_robin_load_uses_local_direction(one_hole):
    # h(m) = m1 integrates to zero around a symmetric polygon
    m = one_hole
    b = assemble_robin_load(m, "holes", 1.0,
                            AnalyticFunction("sphere_trace_first_harmonic", (0.0, 1.0, 0.0)))
    assert abs(b.sum()) < 1e-15
    # weight by x: int m1 * x dS = r * int cos^2 = pi r^2 on the circle
    assert b @ m.vertices[:, 0] == pytest.approx(math.pi * 0.01, rel=2e-2)


def test_robin_load_domain_checks(one_hole):
    with pytest.raises(ValidationError):
        assemble_robin_load(one_hole, "holes", 1.0, constant(1.0))
    with pytest.raises(ValidationError):
        assemble_robin_load(one_hole, "outer", 1.0, sphere_constant(1.0))


def test_assembled_matrices_are_symmetric(one_hole):
    for A in (assemble_stiffness(one_hole), assemble_mass(one_hole),
              assemble_robin_boundary(one_hole, "all", 1.3)):
        assert A.is_structurally_symmetric()
        assert A.is_symmetric()
        dense = A.toarray()
        assert np.array_equal(dense, dense.T)


def test_stiffness_kernel_is_constants(one_hole):
    K = assemble_stiffness(one_hole)
    assert np.abs(K @ np.ones(one_hole.n_vertices)).max() < 1e-12
    M = assemble_mass(one_hole)
    assert np.ones(one_hole.n_vertices) @ (M @ np.ones(one_hole.n_vertices)) == pytest.approx(
        one_hole.signed_areas.sum(), rel=1e-14)


def test_triplets_sum_duplicates():
    A = SparseSymMatrix.from_triplets(3, [0, 0, 1, 1, 2], [0, 1, 0, 1, 2], [1.0, 2.0, 2.0, 3.0, 4.0])
    assert A.toarray().tolist() == [[1, 2, 0], [2, 3, 0], [0, 0, 4]]
    B = A + SparseSymMatrix.from_triplets(3, [0], [2], [1.0])
    assert B.toarray()[2, 0] == 1.0 and B.is_symmetric()


# -- conjugate gradients -------------------------------------------------------

def dense_system(a, b):
    a = np.asarray(a, dtype=float)
    r, c = np.nonzero(np.ones_like(a))
    return LinearSystem(SparseSymMatrix.from_triplets(len(a), r, c, a[r, c]), np.asarray(b, float))


def test_cg_two_by_two():
    res = solve_cg(dense_system([[4, 1], [1, 3]], [1, 2]))
    assert res.x == pytest.approx([1 / 11, 7 / 11], abs=1e-12)
    assert res.residual_norm <= 1e-10 * res.rhs_norm


def test_cg_identity_one_iteration():
    b = np.array([3.0, -1.0, 2.5])
    res = solve_cg(dense_system(np.eye(3), b))
    assert res.iterations == 1
    assert np.array_equal(res.x, b)


def test_cg_zero_rhs():
    res = solve_cg(dense_system([[4, 1], [1, 3]], [0, 0]))
    assert res.iterations == 0 and not res.x.any()


def test_cg_indefinite():
    with pytest.raises(IndefiniteMatrixError):
        solve_cg(dense_system([[1, 0], [0, -1]], [1, 1]))
    with pytest.raises(IndefiniteMatrixError):
        solve_cg(dense_system([[1, 3], [3, 1]], [1, -1]))


def test_cg_iteration_budget():
    m = mesh_rectangle(UNIT, 1 / 32)
    A = assemble_stiffness(m) + assemble_robin_boundary(m, "outer", 1.0)
    with pytest.raises(ConvergenceError) as info:
        solve_cg(LinearSystem(A, assemble_load(m, constant(1.0))), max_iter=3)
    assert info.value.iterations == 3


def test_cg_matches_direct_solve(one_hole):
    m = one_hole
    A = assemble_stiffness(m) + assemble_robin_boundary(m, "all", 1.0)
    b = assemble_load(m, AnalyticFunction("cosine_product", (1.0, 2.0, 1.0)))
    x = solve_cg(LinearSystem(A, b), rel_tol=1e-12).x
    ref = spla.spsolve(A.csr.tocsc(), b)
    assert np.abs(x - ref).max() < 1e-9 * np.abs(ref).max()


# -- fields and norms ------------------------------------------------------------

def test_l2_examples():
    m = mesh_rectangle(UNIT, 0.125)
    x = ScalarField(m, m.vertices[:, 0])
    assert l2_error(x, x) == 0.0
    assert l2_error(x) == pytest.approx(1 / math.sqrt(3), rel=1e-14)
    shifted = ScalarField(m, m.vertices[:, 0] + 0.3)
    assert l2_error(shifted, x) == pytest.approx(0.3, rel=1e-13)
    assert l2_error(x, AnalyticFunction("linear", (0.0, 1.0, 0.0))) < 1e-15


def test_l2_cross_mesh_exact_for_linear(one_hole):
    coarse = mesh_rectangle(UNIT, 0.25)
    lin = AnalyticFunction("linear", (1.0, 2.0, -1.0))
    ref = ScalarField(coarse, lin(*coarse.vertices.T))
    f = ScalarField(one_hole, lin(*one_hole.vertices.T))
    assert l2_error(f, ref) < 1e-13


def test_field_io_round_trip(one_hole, tmp_path):
    vals = np.sin(one_hole.vertices[:, 0] * 7.3)
    f = ScalarField(one_hole, vals)
    write_field(f, tmp_path / "f.txt")
    back = read_field(tmp_path / "f.txt", one_hole)
    assert np.array_equal(back.values, vals)
    assert format_field(f).startswith(f"field {one_hole.n_vertices}\n")
    with pytest.raises(ValidationError):
        parse_field("field 3\n1\n2\n", one_hole)
