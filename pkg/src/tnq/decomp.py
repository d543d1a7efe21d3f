"""SVD-driven state factorization and entanglement measures.

Schmidt decomposition across arbitrary bipartitions, iterative matrix
product state (MPS) factorization by a left-to-right SVD sweep,
lowest-rank truncation with exact Frobenius error reporting, and the
singular-value-based measures (entropy, Renyi, concurrence and friends).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from . import tensor as tz
from .errors import NumericalError, ParseError, ShapeError
from .tensor import DOWN, UP, Tensor


@dataclass(frozen=True)
class SchmidtDecomposition:
    """State = sum_i sigma[i] |u_i>|v_i> across a declared bipartition."""

    u: Tensor            # left legs + bond (up)
    sigma: np.ndarray    # descending, nonnegative
    v_dagger: Tensor     # bond (down) + right legs
    chi: int
    left_legs: tuple
    right_legs: tuple


@dataclass(frozen=True)
class MPS:
    """Left-canonical site chain; bond_sigmas[k] holds the singular
    values of the cut between sites k and k+1."""

    sites: tuple         # of Tensors
    bond_sigmas: tuple   # of ndarrays
    site_dims: tuple


@dataclass(frozen=True)
class TruncationReport:
    error: float
    clamped: bool
    discarded: tuple


def _split_matrix(state, left_legs):
    left_legs = list(left_legs)
    right_legs = [i for i in range(state.order) if i not in left_legs]
    if not left_legs or not right_legs or len(set(left_legs)) != len(left_legs):
        raise ShapeError("left_legs must be a proper nonempty subset of legs")
    if any(not (0 <= i < state.order) for i in left_legs):
        raise ShapeError("left leg index out of range")
    perm = left_legs + right_legs
    arranged = tz.permute_legs(state, perm)
    dl = int(np.prod([state.dims[i] for i in left_legs], dtype=np.int64))
    m = arranged.data.reshape(dl, -1)
    return m, left_legs, right_legs


def schmidt(state, left_legs):
    """Schmidt decomposition of a multi-leg state across left_legs|rest."""
    m, left_legs, right_legs = _split_matrix(state, left_legs)
    res = tz.svd(Tensor(m, [DOWN, DOWN]))
    ldims = [state.dims[i] for i in left_legs]
    rdims = [state.dims[i] for i in right_legs]
    chi = res.rank
    u = Tensor(res.u.data.reshape(ldims + [-1]), [DOWN] * len(ldims) + [UP])
    vd = Tensor(res.v_dagger.data.reshape([-1] + rdims),
                [DOWN] + [DOWN] * len(rdims))
    return SchmidtDecomposition(
        u=u, sigma=res.sigma, v_dagger=vd, chi=chi,
        left_legs=tuple(left_legs), right_legs=tuple(right_legs),
    )


def schmidt_reconstruct(sd):
    """Rebuild the state (legs ordered left_legs then right_legs)."""
    ud = sd.u.data
    core = ud * sd.sigma
    data = np.tensordot(core, sd.v_dagger.data, axes=([ud.ndim - 1], [0]))
    return Tensor(data, [DOWN] * data.ndim)


def truncate_schmidt(sd, r):
    """Keep the r largest Schmidt values (Eckart-Young optimal)."""
    if r < 1:
        raise ShapeError("rank must be >= 1")
    kept = min(r, len(sd.sigma))
    clamped = r > sd.chi
    discarded = sd.sigma[kept:]
    error = float(math.sqrt(float(np.sum(discarded**2))))
    u = Tensor(sd.u.data[..., :kept], sd.u.orients)
    vd = Tensor(sd.v_dagger.data[:kept], sd.v_dagger.orients)
    out = SchmidtDecomposition(
        u=u, sigma=sd.sigma[:kept], v_dagger=vd,
        chi=min(sd.chi, kept), left_legs=sd.left_legs,
        right_legs=sd.right_legs,
    )
    return out, TruncationReport(error, clamped, tuple(float(x) for x in discarded))


def mps_factor(state, max_rank=None):
    """Factor an n-leg state into a left-canonical MPS.

    Left-to-right sweep; at each cut the singular values are recorded and
    the diag(sigma) factor is absorbed into the remainder on the right.
    Singular values below the zero threshold are dropped, so bond
    dimensions are minimal; ``max_rank`` additionally truncates.
    """
    if state.order < 1:
        raise ShapeError("state needs at least one leg")
    if any(o != DOWN for o in state.orients):
        raise ShapeError("mps_factor expects an all-ket state")
    dims = state.dims
    n = state.order
    if n == 1:
        return MPS(sites=(state,), bond_sigmas=(), site_dims=dims)
    sites = []
    bond_sigmas = []
    carry = state.data.reshape(1, -1)   # (bond_left, rest)
    chi_l = 1
    for k in range(n - 1):
        d = dims[k]
        m = carry.reshape(chi_l * d, -1)
        res = tz.svd(Tensor(m, [DOWN, DOWN]))
        keep = res.rank
        if max_rank is not None:
            keep = min(keep, max_rank)
        keep = max(keep, 1)
        u = res.u.data[:, :keep]
        s = res.sigma[:keep]
        vh = res.v_dagger.data[:keep]
        if k == 0:
            sites.append(Tensor(u.reshape(d, keep), [DOWN, UP]))
        else:
            sites.append(Tensor(u.reshape(chi_l, d, keep), [DOWN, DOWN, UP]))
        bond_sigmas.append(res.sigma.copy())
        carry = (s[:, None] * vh)
        chi_l = keep
    sites.append(Tensor(carry.reshape(chi_l, dims[-1]), [DOWN, DOWN]))
    return MPS(sites=tuple(sites), bond_sigmas=tuple(bond_sigmas),
               site_dims=dims)


def mps_contract(m):
    """Contract the site chain back into a single all-ket state tensor."""
    sites = m.sites
    if len(sites) == 1:
        return sites[0]
    acc = sites[0]
    for site in sites[1:]:
        acc = tz.contract(acc, [acc.order - 1], site, [0])
    return acc


def truncate_mps(m, r):
    """Cap every bond dimension at r by re-factoring the state."""
    if r < 1:
        raise ShapeError("rank must be >= 1")
    state = mps_contract(m)
    out = mps_factor(state, max_rank=r)
    clamped = all(len(s) <= r for s in m.bond_sigmas)
    diff = state.data - mps_contract(out).data
    error = float(math.sqrt(float(np.sum(np.abs(diff) ** 2))))
    discarded = tuple(
        float(x) for s in out.bond_sigmas for x in s[r:]
    )
    return out, TruncationReport(error, clamped, discarded)


# ---------------------------------------------------------------------------
# singular-value measures

def _spectrum(sigma, normalize):
    lam = np.asarray(sigma, dtype=float) ** 2
    if np.any(np.asarray(sigma, dtype=float) < 0):
        raise ShapeError("singular values must be nonnegative")
    total = lam.sum()
    if normalize:
        if total == 0:
            raise ShapeError("zero spectrum cannot be normalized")
        lam = lam / total
    elif abs(total - 1.0) > 1e-8:
        raise ShapeError(
            f"spectrum sums to {total}, not 1 (pass normalize=True)"
        )
    return lam


def entropy(sigma, normalize=False):
    """Entanglement entropy -sum lam ln lam with lam = sigma^2."""
    lam = _spectrum(sigma, normalize)
    lam = lam[lam > 0]
    return float(-np.sum(lam * np.log(lam)))


def renyi(sigma, alpha, normalize=False):
    """Renyi entropy of order alpha (> 0, != 1) of lam = sigma^2."""
    if alpha <= 0 or alpha == 1:
        raise ShapeError("alpha must be positive and != 1")
    lam = _spectrum(sigma, normalize)
    lam = lam[lam > 0]
    return float(np.log(np.sum(lam**alpha)) / (1.0 - alpha))


def _as_density(rho):
    if isinstance(rho, Tensor):
        if rho.order != 2:
            raise ShapeError("density operator must be a matrix")
        return rho.data
    return np.asarray(rho, dtype=complex)


def concurrence_pure(state, left_legs=None, normalize=False):
    """C = sqrt(d/(d-1) (1 - Tr rho_A^2)) for a bipartite pure state."""
    if left_legs is None:
        left_legs = list(range(state.order // 2))
    m, _, _ = _split_matrix(state, left_legs)
    nrm2 = float(np.vdot(m, m).real)
    if normalize:
        if nrm2 == 0:
            raise ShapeError("cannot normalize the zero state")
        m = m / math.sqrt(nrm2)
    elif abs(nrm2 - 1.0) > 1e-8:
        raise ShapeError("state is not normalized (pass normalize=True)")
    rho_a = m @ m.conj().T
    d = rho_a.shape[0]
    if d < 2:
        raise ShapeError("left subsystem must have dimension >= 2")
    purity = float(np.trace(rho_a @ rho_a).real)
    val = d / (d - 1) * max(0.0, 1.0 - purity)
    return float(math.sqrt(val))


_YY = np.kron(
    np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]])
).astype(complex)


def mixed_concurrence(rho):
    """Two-qubit concurrence max{l1 - l2 - l3 - l4, 0} of the spin-flip
    spectrum."""
    r = _as_density(rho)
    if r.shape != (4, 4):
        raise ShapeError("mixed concurrence is defined for two qubits")
    m = r @ _YY @ r.conj() @ _YY
    ev = np.linalg.eigvals(m)
    lam = np.sqrt(np.clip(ev.real, 0.0, None))
    lam = np.sort(lam)[::-1]
    return float(max(lam[0] - lam[1] - lam[2] - lam[3], 0.0))


def sym_poly(sigma, k):
    """k-th elementary symmetric polynomial of the spectrum lam = sigma^2."""
    lam = np.asarray(sigma, dtype=float) ** 2
    if not (0 <= k <= lam.size):
        raise ShapeError("k out of range")
    # coefficients of prod (x + lam_i) are the elementary symmetric polys
    coeffs = np.poly(-lam)
    return float(coeffs[k].real)


def power_sum(sigma, n):
    """Power-sum basis element B_n = sum lam_i^n with lam = sigma^2."""
    if n < 1:
        raise ShapeError("n must be >= 1")
    lam = np.asarray(sigma, dtype=float) ** 2
    return float(np.sum(lam**n))


def d_concurrence(sigma, k):
    """C_k = (S_k(lam) / S_k(1/d, ..., 1/d))^(1/k)."""
    lam = np.asarray(sigma, dtype=float) ** 2
    d = lam.size
    if not (1 <= k <= d):
        raise ShapeError("k must satisfy 1 <= k <= d")
    ref = sym_poly(np.full(d, math.sqrt(1.0 / d)), k)
    val = sym_poly(sigma, k) / ref
    return float(max(val, 0.0) ** (1.0 / k))


def purity_swap(rho):
    """Purity computed as Tr[(rho x rho) SWAP]."""
    r = _as_density(rho)
    d = r.shape[0]
    if r.shape != (d, d):
        raise ShapeError("density operator must be square")
    both = np.kron(r, r)
    swap = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            swap[b * d + a, a * d + b] = 1
    return float(np.trace(both @ swap).real)


def purify(rho, tol=tz.DEFAULT_TOL):
    """Pure bipartite state whose left partial trace is rho."""
    r = _as_density(rho)
    d = r.shape[0]
    if r.shape != (d, d) or np.abs(r - r.conj().T).max() > tol:
        raise ShapeError("purify expects a hermitian matrix")
    ev, vec = np.linalg.eigh(r)
    if ev.min() < -tol:
        raise NumericalError(f"negative eigenvalue {ev.min()} in purify")
    ev = np.clip(ev, 0.0, None)
    data = np.zeros((d, d), dtype=complex)
    for i in range(d):
        data[:, i] = math.sqrt(float(ev[i])) * vec[:, i]
    return Tensor(data, [DOWN, DOWN])


# ---------------------------------------------------------------------------
# MPS serialization (TNTX per site plus a manifest)

def save_mps(m, dirpath):
    os.makedirs(dirpath, exist_ok=True)
    with open(os.path.join(dirpath, "manifest.txt"), "w") as fh:
        fh.write(f"mps {len(m.sites)}\n")
    for k, site in enumerate(m.sites):
        with open(os.path.join(dirpath, f"site_{k}.tntx"), "w") as fh:
            fh.write(tz.write_tntx(site))
    for k, s in enumerate(m.bond_sigmas):
        with open(os.path.join(dirpath, f"sigma_{k}.txt"), "w") as fh:
            fh.write(" ".join(repr(float(x)) for x in s) + "\n")


def load_mps(dirpath):
    with open(os.path.join(dirpath, "manifest.txt")) as fh:
        toks = fh.read().split()
    if len(toks) != 2 or toks[0] != "mps":
        raise ParseError("bad MPS manifest", code="bad-header")
    try:
        n = int(toks[1])
    except ValueError:
        raise ParseError("bad MPS site count", code="bad-header")
    sites = []
    for k in range(n):
        with open(os.path.join(dirpath, f"site_{k}.tntx")) as fh:
            sites.append(tz.read_tntx(fh.read()))
    sigmas = []
    for k in range(n - 1):
        with open(os.path.join(dirpath, f"sigma_{k}.txt")) as fh:
            sigmas.append(np.array([float(t) for t in fh.read().split()]))
    phys = [s.dims[0] if i == 0 else s.dims[1]
            for i, s in enumerate(sites)] if n > 1 else [sites[0].dims[0]]
    return MPS(sites=tuple(sites), bond_sigmas=tuple(sigmas),
               site_dims=tuple(phys))
