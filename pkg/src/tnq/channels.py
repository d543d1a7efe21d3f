"""Quantum channels in five representations with conversions and checks.

Representations: Kraus (operator list), superoperator (column-vec
convention), Choi matrix on input (x) output with Tr L = d, chi (process)
matrix over an orthonormal operator basis, and the Stinespring operator.
Also: structural checks (CP/TP/HP/unital) with witnesses, composite
unravelling, superoperator composition, reduced superoperators,
ancilla-assisted recovery of the Choi matrix, symmetric-subspace
projectors, and closed-form gate/entanglement fidelities per
representation.

Column-vec layout throughout: vec(rho) stacks columns, so the composite
index is (column, row) with the column index slowest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import tensor as tz
from .errors import NumericalError, ParseError, ShapeError
from .tensor import DOWN, UP, Tensor

REPS = ("kraus", "superop", "choi", "chi", "stinespring")

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _vec(m):
    """Column-stacking vectorization."""
    return np.asarray(m, dtype=complex).T.reshape(-1)


def _unvec(v, d_out, d_in):
    return np.asarray(v, dtype=complex).reshape(d_in, d_out).T


@dataclass(frozen=True)
class OperatorBasis:
    """Orthonormal operator basis under <A, B> = Tr(A^dag B)."""

    elements: tuple

    def __post_init__(self):
        elems = tuple(np.asarray(e, dtype=complex) for e in self.elements)
        object.__setattr__(self, "elements", elems)
        if not elems:
            raise ShapeError("empty operator basis")
        shape = elems[0].shape
        d = shape[0] * shape[1]
        if len(elems) != d:
            raise ShapeError(f"basis needs {d} elements, got {len(elems)}")
        gram = np.array(
            [[np.trace(a.conj().T @ b) for b in elems] for a in elems]
        )
        if np.abs(gram - np.eye(d)).max() > 1e-10:
            raise ShapeError("basis is not orthonormal under the HS product")

    @property
    def shape(self):
        return self.elements[0].shape

    def stack(self):
        """Matrix with vec(sigma_alpha) as columns."""
        return np.column_stack([_vec(e) for e in self.elements])


def pauli_basis():
    """{I, X, Y, Z}/sqrt(2): orthonormal, with Tr sigma_0 = sqrt(2)."""
    return OperatorBasis(
        tuple(_PAULI[k] / math.sqrt(2.0) for k in "IXYZ")
    )


def elementary_basis(d_out, d_in):
    """Matrix units ordered so their vec-stack is the identity."""
    elems = []
    for j in range(d_in):
        for i in range(d_out):
            e = np.zeros((d_out, d_in), dtype=complex)
            e[i, j] = 1
            elems.append(e)
    return OperatorBasis(tuple(elems))


def default_basis(d_out, d_in):
    if d_out == d_in == 2:
        return pauli_basis()
    return elementary_basis(d_out, d_in)


@dataclass(frozen=True)
class Channel:
    """One representation of a completely positive map."""

    rep: str
    data: tuple          # matrices; single-element tuple except for kraus
    d_in: int
    d_out: int
    basis: OperatorBasis | None = None
    d_env: int | None = None

    def matrix(self):
        if self.rep == "kraus":
            raise ShapeError("kraus channels hold a list of operators")
        return self.data[0]


def kraus_channel(operators):
    ops = tuple(np.asarray(k, dtype=complex) for k in operators)
    if not ops:
        raise ShapeError("need at least one Kraus operator")
    d_out, d_in = ops[0].shape
    for k in ops:
        if k.shape != (d_out, d_in):
            raise ShapeError("Kraus operators must share one shape")
    return Channel("kraus", ops, d_in, d_out)


def superop_channel(m, d_in, d_out):
    m = np.asarray(m, dtype=complex)
    if m.shape != (d_out**2, d_in**2):
        raise ShapeError(f"superoperator must be {d_out**2}x{d_in**2}")
    return Channel("superop", (m,), d_in, d_out)


def choi_channel(m, d_in, d_out):
    m = np.asarray(m, dtype=complex)
    if m.shape != (d_in * d_out, d_in * d_out):
        raise ShapeError("Choi matrix has side d_in*d_out")
    return Channel("choi", (m,), d_in, d_out)


def chi_channel(m, basis):
    m = np.asarray(m, dtype=complex)
    d_out, d_in = basis.shape
    if m.shape != (d_in * d_out, d_in * d_out):
        raise ShapeError("chi matrix side must match the basis size")
    return Channel("chi", (m,), d_in, d_out, basis=basis)


def stinespring_channel(a, d_out):
    a = np.asarray(a, dtype=complex)
    if a.shape[0] % d_out != 0:
        raise ShapeError("Stinespring rows must factor as d_out*d_env")
    d_env = a.shape[0] // d_out
    return Channel("stinespring", (a,), a.shape[1], d_out, d_env=d_env)


def unitary_channel(u):
    return kraus_channel([u])


def depolarizing_channel(p):
    """Qubit depolarizing: rho -> (1-p) rho + p I/2."""
    k0 = math.sqrt(1 - 3 * p / 4)
    kp = math.sqrt(p / 4)
    return kraus_channel(
        [k0 * _PAULI["I"], kp * _PAULI["X"], kp * _PAULI["Y"], kp * _PAULI["Z"]]
    )


def amplitude_damping_channel(gamma):
    k0 = np.array([[1, 0], [0, math.sqrt(1 - gamma)]], dtype=complex)
    k1 = np.array([[0, math.sqrt(gamma)], [0, 0]], dtype=complex)
    return kraus_channel([k0, k1])


# ---------------------------------------------------------------------------
# reshuffling and the representation arrows

def reshuffle_superop_choi(m, d_in, d_out):
    """Choi <-> superoperator index shuffle (self-inverse as index map).

    Maps S[(nu,mu),(n,m)] to L[(m,mu),(n,nu)] and back; for rectangular
    inputs the axis sizes decide the direction.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape == (d_out**2, d_in**2):
        four = m.reshape(d_out, d_out, d_in, d_in)
        out = four.transpose(3, 1, 2, 0)
        return out.reshape(d_in * d_out, d_in * d_out)
    if m.shape == (d_in * d_out, d_in * d_out):
        four = m.reshape(d_in, d_out, d_in, d_out)
        out = four.transpose(3, 1, 2, 0)
        return out.reshape(d_out**2, d_in**2)
    raise ShapeError(f"cannot reshuffle shape {m.shape}")


def _kraus_to_superop(ops):
    d_out, d_in = ops[0].shape
    s = np.zeros((d_out**2, d_in**2), dtype=complex)
    for k in ops:
        s += np.kron(k.conj(), k)
    return s


def _kraus_to_choi(ops):
    d = ops[0].shape[0] * ops[0].shape[1]
    lam = np.zeros((d, d), dtype=complex)
    for k in ops:
        v = _vec(k)
        lam += np.outer(v, v.conj())
    return lam


def _sorted_eigh(h):
    """Hermitian eigendecomposition, descending, deterministic phases."""
    ev, vec = np.linalg.eigh(h)
    order = np.argsort(-ev, kind="stable")
    ev = ev[order]
    vec = vec[:, order]
    for i in range(vec.shape[1]):
        col = vec[:, i]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            phase = col[nz[0]] / abs(col[nz[0]])
            vec[:, i] = col / phase
    return ev, vec


def _choi_to_kraus(lam, d_in, d_out, tol=1e-9):
    ev, vec = _sorted_eigh(lam)
    scale = max(np.abs(ev).max(), 1.0)
    if ev.min() < -tol * scale:
        raise ShapeError(
            f"Choi matrix is not CP (eigenvalue {ev.min()}); "
            "no Kraus decomposition"
        )
    ops = []
    for i in range(ev.size):
        if ev[i] <= tz.ZERO_THRESHOLD * scale:
            continue
        ops.append(math.sqrt(float(ev[i])) * _unvec(vec[:, i], d_out, d_in))
    if not ops:
        ops = [np.zeros((d_out, d_in), dtype=complex)]
    return tuple(ops)


def _kraus_to_stinespring(ops):
    d_env = len(ops)
    cols = []
    for alpha, k in enumerate(ops):
        e = np.zeros((d_env, 1), dtype=complex)
        e[alpha, 0] = 1
        cols.append(np.kron(k, e))
    return sum(cols)


def _stinespring_to_kraus(a, d_out, d_env):
    d_in = a.shape[1]
    a3 = a.reshape(d_out, d_env, d_in)
    return tuple(a3[:, alpha, :] for alpha in range(d_env))


def convert(ch, target, basis=None):
    """Convert a channel to another representation.

    The Choi matrix is the hub; chi conversions use ``basis`` (default:
    normalized Pauli for qubits, elementary otherwise).
    """
    if target not in REPS:
        raise ShapeError(f"unknown representation {target!r}")
    if ch.rep == target and (target != "chi" or basis is None):
        return ch
    d_in, d_out = ch.d_in, ch.d_out

    # to Choi
    if ch.rep == "kraus":
        lam = _kraus_to_choi(ch.data)
    elif ch.rep == "superop":
        lam = reshuffle_superop_choi(ch.matrix(), d_in, d_out)
    elif ch.rep == "choi":
        lam = ch.matrix()
    elif ch.rep == "chi":
        b = ch.basis.stack()
        lam = b @ ch.matrix() @ b.conj().T
    elif ch.rep == "stinespring":
        lam = _kraus_to_choi(
            _stinespring_to_kraus(ch.matrix(), d_out, ch.d_env)
        )
    else:
        raise ShapeError(f"unknown source representation {ch.rep!r}")

    if target == "choi":
        return choi_channel(lam, d_in, d_out)
    if target == "superop":
        return superop_channel(
            reshuffle_superop_choi(lam, d_in, d_out), d_in, d_out
        )
    if target == "chi":
        b = basis or ch.basis or default_basis(d_out, d_in)
        bs = b.stack()
        return chi_channel(bs.conj().T @ lam @ bs, b)
    ops = _choi_to_kraus(lam, d_in, d_out)
    if target == "kraus":
        return kraus_channel(ops)
    return stinespring_channel(_kraus_to_stinespring(ops), d_out)


def apply(ch, rho):
    """Evolve a density operator with the representation's own formula."""
    r = rho.data if isinstance(rho, Tensor) else np.asarray(rho, dtype=complex)
    if r.shape != (ch.d_in, ch.d_in):
        raise ShapeError(f"state must be {ch.d_in}x{ch.d_in}")
    if ch.rep == "kraus":
        out = sum(k @ r @ k.conj().T for k in ch.data)
    elif ch.rep == "superop":
        out = _unvec(ch.matrix() @ _vec(r), ch.d_out, ch.d_out)
    elif ch.rep == "choi":
        l4 = ch.matrix().reshape(ch.d_in, ch.d_out, ch.d_in, ch.d_out)
        out = np.einsum("mn,munv->uv", r, l4)
    elif ch.rep == "chi":
        sig = ch.basis.elements
        chi = ch.matrix()
        out = np.zeros((ch.d_out, ch.d_out), dtype=complex)
        for i in range(len(sig)):
            for j in range(len(sig)):
                if chi[i, j] != 0:
                    out += chi[i, j] * (sig[i] @ r @ sig[j].conj().T)
    elif ch.rep == "stinespring":
        ks = _stinespring_to_kraus(ch.matrix(), ch.d_out, ch.d_env)
        out = sum(k @ r @ k.conj().T for k in ks)
    else:
        raise ShapeError(f"unknown representation {ch.rep!r}")
    return tz.operator(out)


def check(ch, prop, tol=1e-9):
    """Structural property check on the Choi matrix.

    Returns (bool, witness): the witness is the offending eigenvalue
    (CP) or deviation norm (TP/HP/unital).
    """
    lam = convert(ch, "choi").matrix()
    d_in, d_out = ch.d_in, ch.d_out
    l4 = lam.reshape(d_in, d_out, d_in, d_out)
    scale = max(float(np.abs(lam).max()), 1.0)
    if prop == "CP":
        ev = np.linalg.eigvalsh(lam)
        wit = float(ev.min())
        return wit >= -tol * scale, wit
    if prop == "HP":
        wit = float(np.abs(lam - lam.conj().T).max())
        return wit <= tol * scale, wit
    if prop == "TP":
        t = np.einsum("munu->mn", l4)
        wit = float(np.abs(t - np.eye(d_in)).max())
        return wit <= tol * scale, wit
    if prop == "unital":
        t = np.einsum("mumv->uv", l4)
        wit = float(np.abs(t - np.eye(d_out)).max())
        return wit <= tol * scale, wit
    raise ShapeError(f"unknown property {prop!r}")


# ---------------------------------------------------------------------------
# composite systems

def unravel(v, dims):
    """Map a joint-system vectorization to per-subsystem vectorizations.

    ``dims`` lists (d_in_k, d_out_k) per subsystem; the inverse index
    permutation is :func:`unravel_inverse`.
    """
    vec = v.data.reshape(-1) if isinstance(v, Tensor) else np.asarray(v)
    dxs = [d[0] for d in dims]
    dys = [d[1] for d in dims]
    n = len(dims)
    arr = vec.reshape(dxs + dys)
    perm = []
    for k in range(n):
        perm.extend([k, n + k])
    out = arr.transpose(perm).reshape(-1)
    return Tensor(out, [DOWN]) if isinstance(v, Tensor) else out


def unravel_inverse(v, dims):
    vec = v.data.reshape(-1) if isinstance(v, Tensor) else np.asarray(v)
    n = len(dims)
    inter = []
    for dx, dy in dims:
        inter.extend([dx, dy])
    arr = vec.reshape(inter)
    perm = [2 * k for k in range(n)] + [2 * k + 1 for k in range(n)]
    out = arr.transpose(perm).reshape(-1)
    return Tensor(out, [DOWN]) if isinstance(v, Tensor) else out


def compose_superops(channels):
    """Joint superoperator of independent per-site maps.

    Conjugates the tensor product of the site superoperators by the
    unravelling permutation so it acts on the joint-system
    vectorization.
    """
    if not channels:
        raise ShapeError("need at least one superoperator")
    sops = []
    dims = []
    for ch in channels:
        if isinstance(ch, Channel):
            ch = convert(ch, "superop")
            sops.append(ch.matrix())
            dims.append((ch.d_in, ch.d_out))
        else:
            m = np.asarray(ch, dtype=complex)
            dx = int(round(math.sqrt(m.shape[1])))
            dy = int(round(math.sqrt(m.shape[0])))
            if (dy * dy, dx * dx) != m.shape:
                raise ShapeError("superoperator sides must be squares")
            sops.append(m)
            dims.append((dx, dy))
    big = sops[0]
    for s in sops[1:]:
        big = np.kron(big, s)
    n = len(sops)
    row_dims = [d for _, dy in dims for d in (dy, dy)]
    col_dims = [d for dx, _ in dims for d in (dx, dx)]
    arr = big.reshape(row_dims + col_dims)
    # interleaved (nu_k, mu_k) axes -> grouped (nu_1..nu_n, mu_1..mu_n)
    row_perm = [2 * k for k in range(n)] + [2 * k + 1 for k in range(n)]
    col_perm = [2 * n + p for p in row_perm]
    arr = arr.transpose(row_perm + col_perm)
    d_in = 1
    d_out = 1
    for dx, dy in dims:
        d_in *= dx
        d_out *= dy
    return superop_channel(
        arr.reshape(d_out**2, d_in**2), d_in, d_out
    )


def reduced_superop(s, d_x, d_y, tau0, tau1):
    """Effective map on subsystem X of a joint superoperator on X (x) Y.

    The Y input is prepared in tau0 and the Y output projected onto
    tau1 (an effect; pass the identity matrix for a partial trace).
    """
    if isinstance(s, Channel):
        s = convert(s, "superop").matrix()
    s = np.asarray(s, dtype=complex)
    d = d_x * d_y
    if s.shape != (d * d, d * d):
        raise ShapeError("joint superoperator side must be (d_x*d_y)^2")
    # joint vec index (n_x, n_y, m_x, m_y) -> (n_x, m_x, n_y, m_y)
    arr = s.reshape((d_x, d_y, d_x, d_y) * 2)
    arr = arr.transpose(0, 2, 1, 3, 4, 6, 5, 7)
    w = arr.reshape(d_x**2, d_y**2, d_x**2, d_y**2)
    v0 = _vec(np.asarray(tau0, dtype=complex))
    v1 = _vec(np.asarray(tau1, dtype=complex))
    out = np.einsum("b,abcd,d->ac", v1.conj(), w, v0)
    return superop_channel(out, d_x, d_x)


# ---------------------------------------------------------------------------
# ancilla-assisted recovery

def aapt_recover(rho_as, rho_out, cond_limit=1e12):
    """Recover the Choi matrix of a channel acting on the S half of a
    bipartite probe state.

    ``rho_as`` is the probe (ancilla (x) system, both dimension d) and
    ``rho_out`` the joint output (I (x) E)(rho_as).  The probe is
    faithful iff its reshuffled matrix is invertible; otherwise a
    :class:`NumericalError` is raised.  Returns (choi_channel,
    condition_number).
    """
    ras = rho_as.data if isinstance(rho_as, Tensor) else np.asarray(rho_as)
    rout = rho_out.data if isinstance(rho_out, Tensor) else np.asarray(rho_out)
    side = ras.shape[0]
    d = int(round(math.sqrt(side)))
    if ras.shape != (d * d, d * d) or rout.shape != ras.shape:
        raise ShapeError("probe and output must be d^2 x d^2 with equal d")
    s_as = reshuffle_superop_choi(ras, d, d)
    sv = np.linalg.svd(s_as, compute_uv=False)
    if sv[-1] <= 0 or sv[0] / sv[-1] > cond_limit:
        raise NumericalError(
            "probe state is not faithful: reshuffled matrix is singular "
            f"(singular values {sv[0]:.3e}..{sv[-1]:.3e})"
        )
    cond = float(sv[0] / sv[-1])
    s_e = reshuffle_superop_choi(rout, d, d) @ np.linalg.inv(s_as)
    lam = reshuffle_superop_choi(s_e, d, d)
    return choi_channel(lam, d, d), cond


# ---------------------------------------------------------------------------
# symmetric projectors and fidelities

def sym_projector(n, d):
    """Projector onto the symmetric subspace of n copies (n in {2, 3})."""
    if n not in (2, 3):
        raise ShapeError("sym_projector supports n in {2, 3}")
    if d > 5:
        raise ShapeError("sym_projector capped at d <= 5")
    import itertools

    dim = d**n
    acc = np.zeros((dim, dim), dtype=complex)
    for perm in itertools.permutations(range(n)):
        p = np.zeros((dim, dim), dtype=complex)
        for idx in itertools.product(range(d), repeat=n):
            src = 0
            for k in range(n):
                src = src * d + idx[perm[k]]
            dst = 0
            for k in range(n):
                dst = dst * d + idx[k]
            p[src, dst] = 1
        acc += p
    return tz.operator(acc / math.factorial(n))


def avg_gate_fidelity(ch):
    """Average gate fidelity, computed from the channel's own
    representation."""
    if ch.d_in != ch.d_out:
        raise ShapeError("average gate fidelity needs d_in = d_out")
    d = ch.d_in
    if ch.rep == "kraus":
        val = sum(abs(np.trace(k)) ** 2 for k in ch.data)
    elif ch.rep == "superop":
        val = np.trace(ch.matrix()).real
    elif ch.rep == "choi":
        vid = _vec(np.eye(d))
        val = (vid.conj() @ ch.matrix() @ vid).real
    elif ch.rep == "chi":
        s0 = ch.basis.elements[0]
        if np.abs(s0 - np.eye(d) / math.sqrt(d)).max() > 1e-10:
            raise ShapeError(
                "chi fidelity formula needs basis element 0 = I/sqrt(d)"
            )
        val = d * ch.matrix()[0, 0].real
    elif ch.rep == "stinespring":
        a3 = ch.matrix().reshape(ch.d_out, ch.d_env, ch.d_in)
        t = np.einsum("mam->a", a3)
        val = float((t.conj() @ t).real)
    else:
        raise ShapeError(f"unknown representation {ch.rep!r}")
    return float((d + np.real(val)) / (d * (d + 1)))


def entanglement_fidelity(ch, rho):
    """F_e(E, rho), again per-representation."""
    if ch.d_in != ch.d_out:
        raise ShapeError("entanglement fidelity needs d_in = d_out")
    r = rho.data if isinstance(rho, Tensor) else np.asarray(rho, dtype=complex)
    if ch.rep == "kraus":
        val = sum(abs(np.trace(r @ k)) ** 2 for k in ch.data)
    elif ch.rep == "superop":
        val = np.trace(np.kron(r.T, r) @ ch.matrix()).real
    elif ch.rep == "choi":
        v = _vec(r)
        val = (v.conj() @ ch.matrix() @ v).real
    elif ch.rep == "chi":
        sig = ch.basis.elements
        chi = ch.matrix()
        t = np.array([np.trace(r @ s) for s in sig])
        tdag = np.array([np.trace(r @ s.conj().T) for s in sig])
        val = np.real(np.einsum("i,ij,j->", t, chi, tdag))
    elif ch.rep == "stinespring":
        ks = _stinespring_to_kraus(ch.matrix(), ch.d_out, ch.d_env)
        val = sum(abs(np.trace(r @ k)) ** 2 for k in ks)
    else:
        raise ShapeError(f"unknown representation {ch.rep!r}")
    return float(np.real(val))


# ---------------------------------------------------------------------------
# CHX v1 text format

def write_chx(ch):
    header = f"chx 1 {ch.rep} {ch.d_in} {ch.d_out}"
    if ch.rep == "kraus":
        header += f" {len(ch.data)}"
        mats = ch.data
    elif ch.rep == "stinespring":
        header += f" {ch.d_env}"
        mats = ch.data
    else:
        mats = ch.data
    lines = [header]
    for m in mats:
        parts = []
        for z in np.asarray(m).reshape(-1):
            parts.append(repr(float(z.real)))
            parts.append(repr(float(z.imag)))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def read_chx(text, basis=None):
    toks = []
    for line in text.splitlines():
        body = line.split("#", 1)[0]
        toks.extend(body.split())
    it = iter(toks)

    def need(what):
        try:
            return next(it)
        except StopIteration:
            raise ParseError(f"unexpected end of input, wanted {what}",
                             code="bad-header") from None

    if need("magic") != "chx" or need("version") != "1":
        raise ParseError("not a CHX v1 stream", code="bad-header")
    rep = need("representation")
    if rep not in REPS:
        raise ParseError(f"unknown representation {rep!r}", code="bad-header")
    try:
        d_in = int(need("d_in"))
        d_out = int(need("d_out"))
    except ValueError:
        raise ParseError("bad dimension token", code="bad-token")
    if d_in < 1 or d_out < 1:
        raise ParseError("dimensions must be positive", code="bad-token")
    if rep == "kraus":
        n_mats = int(need("operator count"))
        shapes = [(d_out, d_in)] * n_mats
    elif rep == "stinespring":
        d_env = int(need("d_env"))
        shapes = [(d_out * d_env, d_in)]
    elif rep == "superop":
        shapes = [(d_out**2, d_in**2)]
    else:
        shapes = [(d_in * d_out, d_in * d_out)]

    mats = []
    for shape in shapes:
        flat = np.empty(shape[0] * shape[1], dtype=complex)
        for i in range(flat.size):
            try:
                re = float(need("real part"))
                im = float(need("imag part"))
            except ValueError:
                raise ParseError("bad float token", code="bad-token")
            flat[i] = complex(re, im)
        mats.append(flat.reshape(shape))
    for extra in it:
        raise ParseError(f"trailing token {extra!r}", code="bad-token")
    if rep == "kraus":
        return kraus_channel(mats)
    if rep == "superop":
        return superop_channel(mats[0], d_in, d_out)
    if rep == "choi":
        return choi_channel(mats[0], d_in, d_out)
    if rep == "chi":
        return chi_channel(mats[0], basis or default_basis(d_out, d_in))
    return stinespring_channel(mats[0], d_out)
