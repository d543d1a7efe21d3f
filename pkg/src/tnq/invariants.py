"""Polynomial invariants of states under local groups.

Norm-type invariants J1/J2, the two-qubit determinant invariant K1 and
its composition law, determinants via the Levi-Civita tensor, the
three-qubit Kempe invariant, trace invariants from permutation
operators, (anti)symmetrizers, and binary-form covariants (Hessian,
cubic discriminant) for symmetric states.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import tensor as tz
from .errors import ShapeError, SizeCapError
from .gates import _perm_sign, epsilon_tensor
from .network import Network, contract_network
from .tensor import DOWN, UP, Tensor


def _state_matrix(state, left_legs=None):
    if state.order < 2:
        raise ShapeError("need a bipartite state")
    if left_legs is None:
        left_legs = list(range(max(1, state.order // 2)))
    left_legs = list(left_legs)
    right = [i for i in range(state.order) if i not in left_legs]
    if not right:
        raise ShapeError("left_legs must leave at least one right leg")
    arranged = tz.permute_legs(state, left_legs + right)
    dl = int(np.prod([state.dims[i] for i in left_legs], dtype=np.int64))
    return arranged.data.reshape(dl, -1)


def j1(state):
    """Norm invariant sum |alpha|^2."""
    return float(np.vdot(state.data, state.data).real)


def j2(state, left_legs=None):
    """Purity invariant Tr(rho_A^2) = sum_i lambda_i^2 of the reduced
    spectrum (= sum sigma_i^4)."""
    a = _state_matrix(state, left_legs)
    b = a @ a.conj().T
    return float(np.trace(b @ b).real)


def k1(state):
    """Two-qubit determinant invariant 2 det(alpha)."""
    a = _state_matrix(state)
    if a.shape != (2, 2):
        raise ShapeError("k1 is defined for two-qubit states")
    return complex(2.0 * (a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]))


def k1_compose(s1, s2, psi):
    """K1 of (S1 x S2) psi; equals K1(psi) det(S1) det(S2)."""
    m1 = s1.data if isinstance(s1, Tensor) else np.asarray(s1, dtype=complex)
    m2 = s2.data if isinstance(s2, Tensor) else np.asarray(s2, dtype=complex)
    if m1.shape != (2, 2) or m2.shape != (2, 2):
        raise ShapeError("local operators must be 2x2")
    a = _state_matrix(psi)
    if a.shape != (2, 2):
        raise ShapeError("k1_compose is defined for two-qubit states")
    out = m1 @ a @ m2.T
    return complex(2.0 * (out[0, 0] * out[1, 1] - out[0, 1] * out[1, 0]))


def epsilon_det(a):
    """Determinant of a square matrix as an epsilon-tensor contraction.

    One epsilon node and one row-effect node per matrix row, evaluated
    through the network planner.
    """
    m = a.data if isinstance(a, Tensor) else np.asarray(a, dtype=complex)
    n = m.shape[0]
    if m.ndim != 2 or m.shape != (n, n):
        raise ShapeError("epsilon_det expects a square matrix")
    net = Network()
    net.add_node("eps", epsilon_tensor(n))
    for k in range(n):
        net.add_node(("row", k), tz.effect(m[k]))
        net.add_bond(("eps", k), (("row", k), 0))
    net.finalize()
    return complex(contract_network(net).data)


def kempe(psi3):
    """Degree-6 permutation invariant of a three-qubit state.

    Three copies of the state and three conjugates joined in the closed
    6-node loop pattern; invariant under local unitaries.
    """
    if psi3.dims != (2, 2, 2):
        raise ShapeError("kempe expects a three-qubit state")
    ket = tz.state(psi3.data)
    bra = tz.effect(np.conj(psi3.data))
    net = Network()
    for idx in (1, 3, 5):
        net.add_node(idx, ket)
    for idx in (2, 4, 6):
        net.add_node(idx, bra)
    # psi^{ijk} psibar_{ilm} psi^{nlo} psibar_{pjo} psi^{pqm} psibar_{nqk}
    net.add_bond((1, 0), (2, 0))  # i
    net.add_bond((1, 1), (4, 1))  # j
    net.add_bond((1, 2), (6, 2))  # k
    net.add_bond((2, 1), (3, 1))  # l
    net.add_bond((2, 2), (5, 2))  # m
    net.add_bond((3, 0), (6, 0))  # n
    net.add_bond((3, 2), (4, 2))  # o
    net.add_bond((4, 0), (5, 0))  # p
    net.add_bond((5, 1), (6, 1))  # q
    net.finalize()
    return complex(contract_network(net).data)


def trace_invariant(rho, perm):
    """Tr(P_sigma rho^(x n)) for a permutation of n tensor copies."""
    r = rho.data if isinstance(rho, Tensor) else np.asarray(rho, dtype=complex)
    d = r.shape[0]
    if r.ndim != 2 or r.shape != (d, d):
        raise ShapeError("trace_invariant expects a square matrix")
    perm = list(perm)
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise ShapeError("perm must be a permutation of 0..n-1")
    if d ** (2 * n) > tz.SIZE_CAP:
        raise SizeCapError("permutation operator too large", shape=(d,) * (2 * n))
    big = r
    for _ in range(n - 1):
        big = np.kron(big, r)
    p = np.zeros((d**n, d**n), dtype=complex)
    for idx in itertools.product(range(d), repeat=n):
        src = 0
        dst = 0
        for k in range(n):
            dst = dst * d + idx[k]
        # P_sigma |i_0 ... i_{n-1}> = |i_{perm^{-1}(0)} ... >
        moved = [idx[perm[k]] for k in range(n)]
        for k in range(n):
            src = src * d + moved[k]
        p[src, dst] = 1
    return complex(np.trace(p @ big))


def symmetrize(t, group_elements):
    """Group average (1/|G|) sum_g g{t}.

    Elements may be leg permutations (sequences of ints) or matrices /
    operator tensors acting on the flattened state vector.
    """
    if not group_elements:
        raise ShapeError("group must be nonempty")
    acc = np.zeros_like(t.data)
    for g in group_elements:
        if isinstance(g, Tensor):
            g = g.data
        if isinstance(g, (list, tuple)) and all(
            isinstance(x, (int, np.integer)) for x in g
        ):
            acc = acc + tz.permute_legs(t, list(g)).data
        else:
            m = np.asarray(g, dtype=complex)
            if m.shape != (t.data.size, t.data.size):
                raise ShapeError("group element does not match tensor size")
            acc = acc + (m @ t.data.reshape(-1)).reshape(t.dims)
    return Tensor(acc / len(group_elements), t.orients)


def antisymmetrize(t):
    """Signed average over all leg permutations (sign representation)."""
    n = t.order
    acc = np.zeros_like(t.data)
    for perm in itertools.permutations(range(n)):
        acc = acc + _perm_sign(perm) * tz.permute_legs(t, list(perm)).data
    return Tensor(acc / math.factorial(n), t.orients)


# ---------------------------------------------------------------------------
# binary forms

@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous form Q(x, y) = sum_k C(n, k) a_k x^k y^(n-k).

    Stored as coefficients (a_0, ..., a_n); bijective with the symmetric
    subspace of an n-qubit state via |0> <-> x, |1> <-> y.
    """

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "coeffs", tuple(complex(c) for c in self.coeffs)
        )
        if len(self.coeffs) < 1:
            raise ShapeError("binary form needs degree >= 0")

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def monomial_coeffs(self):
        """Plain coefficients q_k of x^k y^(n-k)."""
        n = self.degree
        return [math.comb(n, k) * self.coeffs[k] for k in range(n + 1)]

    def evaluate(self, x, y):
        n = self.degree
        return sum(
            q * x**k * y ** (n - k)
            for k, q in enumerate(self.monomial_coeffs())
        )


def state_from_form(f):
    """Symmetric n-qubit state: weight-k strings get amplitude a_{n-k}."""
    n = f.degree
    if n < 1:
        raise ShapeError("need degree >= 1 for a state")
    data = np.zeros((2,) * n, dtype=complex)
    for idx in itertools.product(range(2), repeat=n):
        k = sum(idx)
        data[idx] = f.coeffs[n - k]
    return Tensor(data, [DOWN] * n)


def form_from_state(psi, tol=tz.DEFAULT_TOL):
    """Inverse of state_from_form; the state must be symmetric."""
    n = psi.order
    if psi.dims != (2,) * n:
        raise ShapeError("expected an n-qubit state")
    coeffs = [None] * (n + 1)
    for idx in itertools.product(range(2), repeat=n):
        k = sum(idx)
        amp = complex(psi.data[idx])
        if coeffs[n - k] is None:
            coeffs[n - k] = amp
        elif abs(coeffs[n - k] - amp) > tol:
            raise ShapeError("state is not in the symmetric subspace")
    return BinaryForm(coeffs)


def hessian(f):
    """Hessian covariant H = Q_xx Q_yy - Q_xy^2 (a form of degree 2n-4)."""
    n = f.degree
    if n < 2:
        raise ShapeError("Hessian needs degree >= 2")
    q = f.monomial_coeffs()

    def d_x(poly, deg):
        return [poly[k + 1] * (k + 1) for k in range(deg)]

    def d_y(poly, deg):
        return [poly[k] * (deg - k) for k in range(deg)]

    qx = d_x(q, n)
    qy = d_y(q, n)
    qxx = d_x(qx, n - 1)
    qyy = d_y(qy, n - 1)
    qxy = d_y(qx, n - 1)

    def mul(p1, p2):
        out = [0j] * (len(p1) + len(p2) - 1)
        for i, a in enumerate(p1):
            for j, b in enumerate(p2):
                out[i + j] += a * b
        return out

    h = [a - b for a, b in zip(mul(qxx, qyy), mul(qxy, qxy))]
    m = 2 * n - 4
    return BinaryForm([h[k] / math.comb(m, k) for k in range(m + 1)])


def cubic_discriminant(f):
    """Discriminant of a binary cubic in the a-coefficient convention."""
    if f.degree != 3:
        raise ShapeError("cubic_discriminant needs a degree-3 form")
    a0, a1, a2, a3 = f.coeffs
    val = (
        a0**2 * a3**2
        - 6 * a0 * a1 * a2 * a3
        + 4 * a0 * a2**3
        - 3 * a1**2 * a2**2
        + 4 * a1**3 * a3
    )
    return val if abs(val.imag) > 1e-14 else float(val.real)
