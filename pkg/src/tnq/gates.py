"""Catalogue of named tensors (gates, logical tensors, standard states)
plus Pauli-string algebra and stabilizer verification.

Gate entries are returned with output legs down followed by input legs
up, data laid out as the usual matrix.  Logical 3-leg tensors (AND, OR,
NAND, NOR, XNOR, XOR) are returned in map form: two down input-kets and
one up output-bra, matching ``(|00>+|01>+|10>)<0| + |11><1|`` for AND.
States are unnormalized by default (binary amplitudes, GHZ = |0..0>+|1..1>);
pass ``normalized=True`` to rescale to unit norm.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import tensor as tz
from .errors import ShapeError
from .tensor import DOWN, UP, Tensor

_SQ2 = math.sqrt(2.0)

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / _SQ2
P = np.array([[1, 0], [0, 1j]], dtype=complex)

PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}


def _cnot():
    m = np.zeros((4, 4), dtype=complex)
    for q, r in itertools.product(range(2), repeat=2):
        m[(q << 1) | (q ^ r), (q << 1) | r] = 1
    return m


def _toffoli():
    m = np.eye(8, dtype=complex)
    m[[6, 7]] = m[[7, 6]]
    return m


def copy_tensor(n_legs, d=2):
    """Generalized Kronecker delta: 1 iff all indices equal (all legs down)."""
    if n_legs < 1 or d < 2:
        raise ShapeError("COPY needs n_legs >= 1 and d >= 2")
    data = np.zeros((d,) * n_legs, dtype=complex)
    for i in range(d):
        data[(i,) * n_legs] = 1
    return Tensor(data, [DOWN] * n_legs)


def xor_tensor(n_legs):
    """Parity tensor: 1 iff the index assignment has an even number of 1s."""
    if n_legs < 1:
        raise ShapeError("XOR needs n_legs >= 1")
    data = np.zeros((2,) * n_legs, dtype=complex)
    for idx in itertools.product(range(2), repeat=n_legs):
        if sum(idx) % 2 == 0:
            data[idx] = 1
    return Tensor(data, [DOWN] * n_legs)


def epsilon_tensor(order):
    """Fully antisymmetric Levi-Civita tensor; every leg has dim = order."""
    if not (2 <= order <= 6):
        raise ShapeError("epsilon order supported for 2..6")
    data = np.zeros((order,) * order, dtype=complex)
    for perm in itertools.permutations(range(order)):
        data[perm] = _perm_sign(perm)
    return Tensor(data, [DOWN] * order)


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, clen = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


def _binary_map(fn, arity=2):
    """3-leg map tensor data[a, b, out] = [fn(a, b) == out]."""
    data = np.zeros((2,) * (arity + 1), dtype=complex)
    for bits in itertools.product(range(2), repeat=arity):
        data[bits + (fn(*bits),)] = 1
    return Tensor(data, [DOWN] * arity + [UP])


def dicke_state(n, k):
    """Equal superposition of all weight-k n-bit strings (unnormalized)."""
    if not (0 <= k <= n):
        raise ShapeError("DICKE requires 0 <= k <= n")
    data = np.zeros((2,) * n, dtype=complex)
    for bits in itertools.combinations(range(n), k):
        idx = [0] * n
        for b in bits:
            idx[b] = 1
        data[tuple(idx)] = 1
    return Tensor(data, [DOWN] * n)


_BELL_DATA = {
    "PHI+": np.array([[1, 0], [0, 1]], dtype=complex),
    "PHI-": np.array([[1, 0], [0, -1]], dtype=complex),
    "PSI+": np.array([[0, 1], [1, 0]], dtype=complex),
    "PSI-": np.array([[0, 1], [-1, 0]], dtype=complex),
}


def _normalize(t):
    nrm = math.sqrt(float(np.vdot(t.data, t.data).real))
    if nrm == 0:
        return t
    return Tensor(t.data / nrm, t.orients)


def standard_tensor(name, *params, normalized=False):
    """Catalogue constructor for every named tensor used in the toolkit.

    Gate names: I, X, Y, Z, H, P, CNOT, CZ, SWAP, TOFFOLI.
    Logic: COPY(n_legs[, d]), XOR(n_legs), AND, OR, NAND, NOR, XNOR.
    Wire structure: CUP(d), CAP(d), EPSILON(order).
    States: GHZ(n[, d]), W(n), DICKE(n, k), BELL(kind), PLUS, MINUS, Y+, Y-.
    """
    key = name.upper()
    gates_1q = {"I": I2, "X": X, "Y": Y, "Z": Z, "H": H, "P": P}
    if key in gates_1q:
        t = tz.operator(gates_1q[key])
    elif key == "CNOT":
        t = tz.gate(_cnot(), (2, 2), (2, 2))
    elif key == "CZ":
        t = tz.gate(np.diag([1, 1, 1, -1]).astype(complex), (2, 2), (2, 2))
    elif key == "SWAP":
        m = np.zeros((4, 4), dtype=complex)
        for a, b in itertools.product(range(2), repeat=2):
            m[(b << 1) | a, (a << 1) | b] = 1
        t = tz.gate(m, (2, 2), (2, 2))
    elif key == "TOFFOLI":
        t = tz.gate(_toffoli(), (2, 2, 2), (2, 2, 2))
    elif key == "COPY":
        n_legs = params[0] if params else 3
        d = params[1] if len(params) > 1 else 2
        t = copy_tensor(n_legs, d)
    elif key == "XOR":
        t = xor_tensor(params[0] if params else 3)
    elif key == "AND":
        t = _binary_map(lambda a, b: a & b)
    elif key == "OR":
        t = _binary_map(lambda a, b: a | b)
    elif key == "NAND":
        t = _binary_map(lambda a, b: 1 - (a & b))
    elif key == "NOR":
        t = _binary_map(lambda a, b: 1 - (a | b))
    elif key == "XNOR":
        t = _binary_map(lambda a, b: 1 - (a ^ b))
    elif key == "CUP":
        d = params[0] if params else 2
        t = Tensor(np.eye(d, dtype=complex), [DOWN, DOWN])
    elif key == "CAP":
        d = params[0] if params else 2
        t = Tensor(np.eye(d, dtype=complex), [UP, UP])
    elif key == "EPSILON":
        t = epsilon_tensor(params[0] if params else 3)
    elif key == "GHZ":
        n = params[0] if params else 3
        d = params[1] if len(params) > 1 else 2
        t = copy_tensor(n, d)
    elif key == "W":
        t = dicke_state(params[0] if params else 3, 1)
    elif key == "DICKE":
        t = dicke_state(params[0], params[1])
    elif key == "BELL":
        kind = (params[0] if params else "PHI+").upper().replace("Φ", "PHI").replace("Ψ", "PSI")
        if kind not in _BELL_DATA:
            raise ShapeError(f"unknown Bell state {params[0]!r}")
        t = Tensor(_BELL_DATA[kind], [DOWN, DOWN])
    elif key == "PLUS":
        t = tz.state([1, 1])
    elif key == "MINUS":
        t = tz.state([1, -1])
    elif key == "Y+":
        t = tz.state([1, 1j])
    elif key == "Y-":
        t = tz.state([1, -1j])
    else:
        raise ShapeError(f"unknown tensor name {name!r}")
    return _normalize(t) if normalized else t


def cnot_from_copy_xor():
    """CNOT via the contraction  sum_m COPY^{qm}_i XOR^r_{mj}."""
    copy = copy_tensor(3)                    # legs (q, m, i), all down
    copy = tz.bend_leg(copy, 2)              # i up: acts as the control input
    xor = tz.bend_leg(xor_tensor(3), 1)      # legs (r, m^, j); bend m to bra
    xor = tz.bend_leg(xor, 2)                # j up: target input
    out = tz.contract(copy, [1], xor, [1])   # legs (q, i, r, j)
    return tz.permute_legs(out, [0, 2, 1, 3])


def rotated_copy(u, tol=tz.DEFAULT_TOL):
    """COPY conjugated to copy the basis {U^dag |i>}.

    Returned as a 1-in/2-out map with legs (out, out, in).  With ``u = H``
    it equals the XOR splitting map up to the scalar 1/sqrt(2).
    """
    um = u.data if isinstance(u, Tensor) else np.asarray(u, dtype=complex)
    d = um.shape[0]
    if um.shape != (d, d) or np.abs(um @ um.conj().T - np.eye(d)).max() > tol:
        raise ShapeError("rotated_copy requires a unitary matrix")
    delta = copy_tensor(3, d).data           # delta[i, j, k]
    data = np.einsum("ai,bj,ijk,kc->abc", um.conj().T, um.conj().T, delta, um)
    return Tensor(data, [DOWN, DOWN, UP])


def and_from_toffoli():
    """AND-state prepared by contracting Toffoli with unit states.

    Controls are fed the COPY unit |0>+|1> and the target the XOR unit
    |0>; the result is exactly |000>+|010>+|100>+|111> (scalar 1).
    """
    toff = standard_tensor("TOFFOLI")
    unit = tz.state([1, 1])
    zero = tz.state([1, 0])
    out = tz.contract(toff, [3], unit, [0])
    out = tz.contract(out, [3], unit, [0])
    return tz.contract(out, [3], zero, [0])


# ---------------------------------------------------------------------------
# Pauli strings

_MUL = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}

_PHASES = (1, -1, 1j, -1j)


@dataclass(frozen=True)
class PauliString:
    """Signed Pauli word: phase in {1, -1, i, -i} times a letter per qubit."""

    letters: str
    phase: complex = 1

    def __post_init__(self):
        if any(c not in "IXYZ" for c in self.letters):
            raise ShapeError(f"bad Pauli letters {self.letters!r}")
        if self.phase not in _PHASES:
            raise ShapeError(f"phase must be a fourth root of unity")

    @property
    def n_qubits(self):
        return len(self.letters)

    def __mul__(self, other):
        if not isinstance(other, PauliString):
            return NotImplemented
        if len(self.letters) != len(other.letters):
            raise ShapeError("Pauli strings act on different qubit counts")
        phase = self.phase * other.phase
        out = []
        for a, b in zip(self.letters, other.letters):
            ph, c = _MUL[(a, b)]
            phase *= ph
            out.append(c)
        return PauliString("".join(out), complex(phase))

    def __neg__(self):
        return PauliString(self.letters, -self.phase)

    def to_matrix(self):
        m = np.array([[self.phase]], dtype=complex)
        for c in self.letters:
            m = np.kron(m, PAULI[c])
        return m

    def to_tensor(self):
        return tz.operator(self.to_matrix())

    def __str__(self):
        pre = {1: "+", -1: "-", 1j: "+i", -1j: "-i"}[self.phase]
        return pre + self.letters


def is_stabilizer(psi, op, tol=tz.DEFAULT_TOL):
    """True iff ``op`` fixes the state with eigenvalue exactly +1."""
    if isinstance(op, PauliString):
        m = op.to_matrix()
    elif isinstance(op, Tensor):
        m = tz.as_matrix(op, 1)
    else:
        m = np.asarray(op, dtype=complex)
    vec = psi.data.reshape(-1) if isinstance(psi, Tensor) else np.asarray(psi).reshape(-1)
    if m.shape != (vec.size, vec.size):
        raise ShapeError("operator size does not match state")
    return bool(np.abs(m @ vec - vec).max() <= tol * max(1.0, np.abs(vec).max()))


def evolve_generator(u, g, tol=tz.DEFAULT_TOL):
    """Heisenberg evolution U g U^dag of a stabilizer generator."""
    um = u.data if isinstance(u, Tensor) else np.asarray(u, dtype=complex)
    if np.abs(um @ um.conj().T - np.eye(um.shape[0])).max() > tol:
        raise ShapeError("evolve_generator requires a unitary")
    gm = g.to_matrix() if isinstance(g, PauliString) else (
        tz.as_matrix(g, 1) if isinstance(g, Tensor) else np.asarray(g, dtype=complex)
    )
    return tz.operator(um @ gm @ um.conj().T)


def boolean_stabilizer(b0, b1):
    """Single-qubit Boolean state and its stabilizer for bits (b0, b1).

    The stabilizer is (-1)^b1 (1-b0) Z + b0 X; the state c0|0> + c1|1>
    uses the multilinear coefficients c0 = 1 - b1 + b0*b1 and
    c1 = b0 + b1 - b0*b1, so +Z fixes |0>, -Z fixes |1>, and X fixes
    |0>+|1>.
    """
    b0, b1 = int(b0), int(b1)
    if b0 not in (0, 1) or b1 not in (0, 1):
        raise ShapeError("bits must be 0 or 1")
    c0 = 1 - b1 + b0 * b1
    c1 = b0 + b1 - b0 * b1
    psi = tz.state([c0, c1])
    if b0:
        stab = PauliString("X")
    else:
        stab = PauliString("Z", phase=(-1) ** b1)
    return psi, stab
