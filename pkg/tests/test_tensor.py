"""Core tensor type: construction, contraction, bending, vectorization."""

import numpy as np
import pytest

import tnq
from tnq import tensor as tz
from tnq.errors import ShapeError

rng = np.random.default_rng(7)


def rand_c(*shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


# ---------------------------------------------------------------- construction

def test_state_effect_operator_scalar():
    psi = tz.state([1, 0, 0, 1])
    assert psi.dims == (4,)
    assert psi.orients == (tz.DOWN,)
    phi = tz.effect([1, 0])
    assert phi.orients == (tz.UP,)
    m = tz.operator(np.eye(3))
    assert m.orients == (tz.DOWN, tz.UP)
    s = tz.scalar(2.5)
    assert s.order == 0
    assert complex(s.data) == 2.5


def test_multileg_state_shape():
    psi = tz.state(rand_c(2, 3, 4))
    assert psi.dims == (2, 3, 4)
    assert psi.orients == (tz.DOWN,) * 3


def test_gate_constructor():
    u = tz.gate(rand_c(4, 4), (2, 2), (2, 2))
    assert u.dims == (2, 2, 2, 2)
    assert u.orients == (tz.DOWN, tz.DOWN, tz.UP, tz.UP)
    np.testing.assert_allclose(tz.as_matrix(u, 2), u.data.reshape(4, 4))


def test_nonfinite_rejected():
    with pytest.raises(ValueError):
        tz.state([1.0, np.nan])
    with pytest.raises(ValueError):
        tz.state([1.0, np.inf * 1j])


def test_operator_needs_matrix():
    with pytest.raises(ShapeError):
        tz.operator(np.zeros((2, 2, 2)))


# ----------------------------------------------------------------- contraction

def test_matrix_vector_contraction():
    m = rand_c(3, 3)
    v = rand_c(3)
    out = tz.contract(tz.operator(m), [1], tz.state(v), [0])
    np.testing.assert_allclose(out.data, m @ v)
    assert out.orients == (tz.DOWN,)


def test_matrix_matrix_contraction():
    a, b = rand_c(3, 4), rand_c(4, 5)
    out = tz.contract(tz.operator(a), [1], tz.operator(b), [0])
    np.testing.assert_allclose(out.data, a @ b, atol=1e-12)


def test_contraction_requires_opposite_orientation():
    v, w = tz.state(rand_c(3)), tz.state(rand_c(3))
    with pytest.raises(ShapeError):
        tz.contract(v, [0], w, [0])


def test_contraction_requires_equal_dims():
    with pytest.raises(ShapeError):
        tz.contract(tz.effect(rand_c(3)), [0], tz.state(rand_c(4)), [0])


def test_inner_product_scalar():
    v = rand_c(5)
    out = tz.contract(tz.effect(v.conj()), [0], tz.state(v), [0])
    assert out.order == 0
    np.testing.assert_allclose(complex(out.data), np.vdot(v, v))


def test_multi_leg_contraction():
    a = tz.gate(rand_c(6, 6), (2, 3), (2, 3))
    b = tz.state(rand_c(2, 3))
    out = tz.contract(a, [2, 3], b, [0, 1])
    oracle = np.einsum("ijkl,kl->ij", a.data, b.data)
    np.testing.assert_allclose(out.data, oracle)


def test_tensor_product():
    a, b = tz.state(rand_c(2)), tz.effect(rand_c(3))
    out = tz.tensor_product(a, b)
    assert out.dims == (2, 3)
    assert out.orients == (tz.DOWN, tz.UP)
    np.testing.assert_allclose(out.data, np.multiply.outer(a.data, b.data))


def test_trace_pairs():
    m = rand_c(4, 4)
    out = tz.trace_pairs(tz.operator(m), [(0, 1)])
    np.testing.assert_allclose(complex(out.data), np.trace(m))


def test_permute_legs():
    t = tz.state(rand_c(2, 3, 4))
    p = tz.permute_legs(t, [2, 0, 1])
    assert p.dims == (4, 2, 3)
    np.testing.assert_allclose(p.data, t.data.transpose(2, 0, 1))


# --------------------------------------------------------------------- bending

def test_bend_flips_orientation_only():
    m = rand_c(3, 3)
    t = tz.operator(m)
    b = tz.bend_leg(t, 1)
    assert b.orients == (tz.DOWN, tz.DOWN)
    np.testing.assert_allclose(b.data, m)


def test_bend_all_is_transpose_orientation():
    t = tz.operator(rand_c(2, 2))
    b = tz.bend_all(t)
    assert b.orients == (tz.UP, tz.DOWN)
    np.testing.assert_allclose(b.data, t.data)


def test_snake_equation():
    # cup then cap on an extra wire is the identity map
    d = 3
    cup = tz.state(np.eye(d))          # legs (d, d)
    cap = tz.effect(np.eye(d))         # legs (u, u)
    v = rand_c(d)
    step1 = tz.tensor_product(tz.state(v), cup)
    out = tz.contract(step1, [0, 1], cap, [0, 1])
    np.testing.assert_allclose(out.data, v)
    assert out.orients == (tz.DOWN,)


def test_ricochet_operator_slides_around_cup():
    # (M x I)|cup> = (I x M^T)|cup>
    d = 3
    m = rand_c(d, d)
    cup = tz.state(np.eye(d))
    lhs = tz.contract(tz.operator(m), [1], cup, [0])
    mt = tz.operator(m.T)
    rhs = tz.permute_legs(tz.contract(mt, [1], cup, [1]), [1, 0])
    np.testing.assert_allclose(lhs.data, rhs.data, atol=1e-12)


def test_double_bend_is_transpose_as_matrix():
    m = rand_c(4, 4)
    b = tz.bend_all(tz.operator(m))
    # reading the bent tensor back as a matrix with swapped leg roles
    back = tz.permute_legs(b, [1, 0])
    np.testing.assert_allclose(back.data, m.T)


# ------------------------------------------------------------- conj and dagger

def test_conj_and_dagger():
    m = rand_c(3, 3)
    t = tz.operator(m)
    np.testing.assert_allclose(tz.conj(t).data, m.conj())
    assert tz.conj(t).orients == t.orients
    d = tz.dagger(t)
    assert d.orients == (tz.UP, tz.DOWN)
    # reading (row, col) = (ket leg, bra leg) recovers the adjoint matrix
    np.testing.assert_allclose(tz.as_matrix(tz.permute_legs(d, [1, 0]), 1),
                               m.conj().T)


# --------------------------------------------------------------- vectorization

def test_col_vectorization_convention():
    a = rand_c(2, 2)
    v = tz.vectorize(tz.operator(a), "col")
    bell = np.eye(2).reshape(-1)
    np.testing.assert_allclose(v.data, np.kron(np.eye(2), a) @ bell)


def test_row_vectorization_convention():
    a = rand_c(2, 2)
    v = tz.vectorize(tz.operator(a), "row")
    bell = np.eye(2).reshape(-1)
    np.testing.assert_allclose(v.data, np.kron(a, np.eye(2)) @ bell)


def test_unvectorize_round_trip():
    a = rand_c(3, 5)
    for mode in ("col", "row"):
        v = tz.vectorize(tz.operator(a), mode)
        back = tz.unvectorize(v, 3, 5, mode)
        np.testing.assert_allclose(back.data, a)


def test_roth_lemma():
    # vec(ABC) = (C^T (x) A) vec(B), column convention
    a, b, c = rand_c(3, 3), rand_c(3, 3), rand_c(3, 3)
    lhs = tz.vectorize(tz.operator(a @ b @ c), "col").data
    rhs = np.kron(c.T, a) @ tz.vectorize(tz.operator(b), "col").data
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


# ------------------------------------------------------------------ reshuffle

def test_reshuffle_identity_gives_bell_projector():
    s = tz.operator(np.eye(4))
    r = tz.reshuffle(s, 2, 2)
    bell = np.eye(2).reshape(-1)
    np.testing.assert_allclose(r.data, np.outer(bell, bell))


def test_reshuffle_involution():
    m = rand_c(9, 9)
    r2 = tz.reshuffle(tz.reshuffle(tz.operator(m), 3, 3), 3, 3)
    np.testing.assert_allclose(r2.data, m)


def test_reshuffle_rectangular():
    # d_in=2, d_out=3 superoperator <-> Choi, involution must still hold
    from tnq import channels
    m = rand_c(9, 4)
    r = channels.reshuffle_superop_choi(m, 2, 3)
    assert r.shape == (6, 6)
    back = channels.reshuffle_superop_choi(r, 2, 3)
    np.testing.assert_allclose(back, m)


# ------------------------------------------------------------------------- svd

def test_svd_reconstruction():
    m = rand_c(6, 4)
    res = tz.svd(tz.operator(m))
    u = tz.as_matrix(res.u, 1)
    vh = tz.as_matrix(res.v_dagger, 1)
    np.testing.assert_allclose(u @ np.diag(res.sigma) @ vh, m, atol=1e-12)
    assert np.all(np.diff(res.sigma) <= 1e-15)


def test_svd_rank():
    m = np.outer(rand_c(5), rand_c(5))
    res = tz.svd(tz.operator(m))
    assert res.rank == 1


# ------------------------------------------------------------------ comparison

def test_equal_up_to_scalar():
    t = tz.state(rand_c(2, 2))
    s = tz.Tensor((3 - 1j) * t.data, t.orients)
    lam = tz.equal_up_to_scalar(s, t)
    np.testing.assert_allclose(lam, 3 - 1j)
    assert tz.equal_up_to_scalar(t, tz.state(rand_c(2, 2))) is None


def test_allclose():
    t = tz.state([1, 2])
    assert tz.allclose(t, tz.state([1, 2 + 1e-12]))
    assert not tz.allclose(t, tz.state([1, 2.1]))


def test_count_rearrangements():
    # (n + m + 1)! wire-bend/exchange reshapes of an (n, m)-valence tensor
    assert tz.count_rearrangements(1, 1) == 6
    assert tz.count_rearrangements(2, 1) == 24


# ------------------------------------------------------------------ tntx files

def test_tntx_round_trip():
    t = tz.Tensor(rand_c(2, 3), (tz.DOWN, tz.UP))
    text = tz.write_tntx(t)
    back = tz.read_tntx(text)
    assert back.orients == t.orients
    np.testing.assert_allclose(back.data, t.data, atol=1e-12)


def test_tntx_rejects_garbage():
    with pytest.raises(tnq.ParseError):
        tz.read_tntx("not a tensor\n")
