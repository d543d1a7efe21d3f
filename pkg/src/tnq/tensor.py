"""Dense complex tensors with oriented legs.

A tensor is a dense complex array together with one orientation flag per
leg: ``"d"`` (down, ket index) or ``"u"`` (up, bra index).  Data is stored
row-major with the leftmost leg slowest-varying.  Bending a leg flips its
orientation flag and never touches the data; interpreted as an operator,
bending both legs of a matrix therefore yields its transpose.

All operations are pure functions; tensors are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ParseError, ShapeError, SizeCapError

DOWN = "d"
UP = "u"

#: Hard cap on entries per tensor (keeps counting workloads honest).
SIZE_CAP = 2**26

#: Relative threshold below which singular values count as zero.
ZERO_THRESHOLD = 1e-12

#: Default absolute comparison tolerance on unit-scale data.
DEFAULT_TOL = 1e-10


def _flip(orient):
    return UP if orient == DOWN else DOWN


class Tensor:
    """Immutable dense complex tensor with per-leg orientation."""

    __slots__ = ("data", "orients")

    def __init__(self, data, orients):
        arr = np.asarray(data, dtype=np.complex128)
        orients = tuple(orients)
        if arr.ndim != len(orients):
            raise ShapeError(
                f"{arr.ndim} array axes but {len(orients)} orientations"
            )
        for o in orients:
            if o not in (UP, DOWN):
                raise ShapeError(f"invalid orientation {o!r}")
        if arr.size > SIZE_CAP:
            raise SizeCapError(
                f"tensor with {arr.size} entries exceeds cap {SIZE_CAP}",
                shape=arr.shape,
            )
        if arr.ndim > 0:
            # note: ascontiguousarray would promote 0-d arrays to 1-d
            arr = np.ascontiguousarray(arr)
        else:
            arr = arr.copy()
        if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
            raise ShapeError("tensor entries must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "orients", orients)

    def __setattr__(self, name, value):
        raise AttributeError("Tensor is immutable")

    @property
    def dims(self):
        return self.data.shape

    @property
    def order(self):
        return self.data.ndim

    def __repr__(self):
        legs = ",".join(f"{d}{o}" for d, o in zip(self.dims, self.orients))
        return f"Tensor[{legs}]"

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return (
            self.orients == other.orients
            and self.dims == other.dims
            and np.array_equal(self.data, other.data)
        )

    def __hash__(self):
        return hash((self.orients, self.dims, self.data.tobytes()))


def state(amplitudes, dims=None):
    """All-ket tensor from an amplitude array (reshaped to ``dims`` if given)."""
    arr = np.asarray(amplitudes, dtype=np.complex128)
    if dims is not None:
        arr = arr.reshape(dims)
    return Tensor(arr, [DOWN] * arr.ndim)


def effect(amplitudes, dims=None):
    """All-bra tensor (dual vector)."""
    arr = np.asarray(amplitudes, dtype=np.complex128)
    if dims is not None:
        arr = arr.reshape(dims)
    return Tensor(arr, [UP] * arr.ndim)


def operator(matrix):
    """Two-leg tensor from a matrix: leg 0 down (ket/row), leg 1 up (bra/col)."""
    arr = np.asarray(matrix, dtype=np.complex128)
    if arr.ndim != 2:
        raise ShapeError("operator() expects a matrix")
    return Tensor(arr, [DOWN, UP])


def scalar(value):
    return Tensor(np.asarray(value, dtype=np.complex128), [])


def gate(matrix, out_dims, in_dims):
    """Multi-wire gate: matrix reshaped to out_dims + in_dims legs,
    outputs down followed by inputs up."""
    arr = np.asarray(matrix, dtype=np.complex128)
    shape = tuple(out_dims) + tuple(in_dims)
    arr = arr.reshape(shape)
    return Tensor(arr, [DOWN] * len(out_dims) + [UP] * len(in_dims))


def as_matrix(t, n_row_legs=None):
    """Flatten the first ``n_row_legs`` legs to rows and the rest to columns.

    Defaults to half the legs for even order and the operator reading
    (down legs as rows) is up to the caller; this is a pure reshape.
    """
    if n_row_legs is None:
        if t.order % 2 != 0:
            raise ShapeError("cannot infer row/column split for odd order")
        n_row_legs = t.order // 2
    rows = int(np.prod(t.dims[:n_row_legs], dtype=np.int64)) if n_row_legs else 1
    return np.asarray(t.data).reshape(rows, -1)


def _check_pairing(a, legs_a, b, legs_b):
    if len(legs_a) != len(legs_b):
        raise ShapeError("index lists must have equal length")
    if len(set(legs_a)) != len(legs_a) or len(set(legs_b)) != len(legs_b):
        raise ShapeError("duplicate leg index in contraction")
    for la, lb in zip(legs_a, legs_b):
        if not (0 <= la < a.order) or not (0 <= lb < b.order):
            raise ShapeError("leg index out of range")
        if a.dims[la] != b.dims[lb]:
            raise ShapeError(
                f"dimension mismatch: leg {la} (dim {a.dims[la]}) vs "
                f"leg {lb} (dim {b.dims[lb]})"
            )
        if a.orients[la] == b.orients[lb]:
            raise ShapeError(
                f"cannot contract two {a.orients[la]!r}-oriented legs"
            )


def contract(a, legs_a, b, legs_b):
    """Sum over paired legs of ``a`` and ``b``.

    Result legs are a's uncontracted legs (in order) followed by b's.
    Paired legs must have equal dimension and opposite orientation.
    """
    legs_a = list(legs_a)
    legs_b = list(legs_b)
    _check_pairing(a, legs_a, b, legs_b)
    rest_a = [i for i in range(a.order) if i not in legs_a]
    rest_b = [i for i in range(b.order) if i not in legs_b]
    out_size = 1
    for i in rest_a:
        out_size *= a.dims[i]
    for i in rest_b:
        out_size *= b.dims[i]
    if out_size > SIZE_CAP:
        raise SizeCapError(
            f"contraction result with {out_size} entries exceeds cap",
            shape=[a.dims[i] for i in rest_a] + [b.dims[i] for i in rest_b],
        )
    data = np.tensordot(a.data, b.data, axes=(legs_a, legs_b))
    orients = [a.orients[i] for i in rest_a] + [b.orients[i] for i in rest_b]
    return Tensor(data, orients)


def tensor_product(a, b):
    """Kronecker-structured juxtaposition: legs of ``a`` then legs of ``b``."""
    out_size = a.data.size * b.data.size
    if out_size > SIZE_CAP:
        raise SizeCapError(
            f"tensor product with {out_size} entries exceeds cap",
            shape=a.dims + b.dims,
        )
    data = np.multiply.outer(a.data, b.data)
    return Tensor(data, a.orients + b.orients)


def trace_pairs(t, pairs):
    """Sum over each (leg, leg) pair's shared index (graphical loop closing)."""
    pairs = [tuple(p) for p in pairs]
    used = [i for p in pairs for i in p]
    if len(set(used)) != len(used):
        raise ShapeError("leg appears in more than one trace pair")
    data = t.data
    kept = list(range(t.order))
    for i, j in pairs:
        if not (0 <= i < t.order and 0 <= j < t.order) or i == j:
            raise ShapeError("invalid trace pair")
        if t.dims[i] != t.dims[j]:
            raise ShapeError("trace pair dimensions differ")
        if t.orients[i] == t.orients[j]:
            raise ShapeError("trace pair must have opposite orientations")
    for i, j in pairs:
        ai, aj = kept.index(i), kept.index(j)
        data = np.trace(data, axis1=ai, axis2=aj)
        kept = [k for k in kept if k not in (i, j)]
    return Tensor(data, [t.orients[k] for k in kept])


def permute_legs(t, perm):
    """Reorder legs; ``perm[k]`` is the source leg placed at position ``k``."""
    perm = list(perm)
    if sorted(perm) != list(range(t.order)):
        raise ShapeError("not a permutation of leg indices")
    return Tensor(np.transpose(t.data, perm), [t.orients[p] for p in perm])


def bend_leg(t, leg):
    """Flip one leg's orientation (cup/cap duality); data is untouched."""
    if not (0 <= leg < t.order):
        raise ShapeError("leg index out of range")
    orients = list(t.orients)
    orients[leg] = _flip(orients[leg])
    return Tensor(t.data, orients)


def bend_all(t):
    return Tensor(t.data, [_flip(o) for o in t.orients])


def conj(t):
    """Entrywise complex conjugate (orientations unchanged)."""
    return Tensor(np.conj(t.data), t.orients)


def dagger(t):
    """Adjoint: conjugate and flip every leg."""
    return conj(bend_all(t))


def _require_operator(t):
    if t.order != 2 or t.orients.count(DOWN) != 1 or t.orients.count(UP) != 1:
        raise ShapeError("expected an operator (one down leg, one up leg)")


def vectorize(a, convention="col"):
    """Stack an operator's columns (col) or rows (row) into a ket.

    With ``A`` holding entries ``A[i, j]`` (row i = ket leg, col j = bra
    leg) the col-vec places ``A[i, j]`` at composite ket index ``(j, i)``
    and the row-vec at ``(i, j)``, so that ``|A>>_c = (I (x) A)|Phi+>``
    and ``|A>>_r = (A (x) I)|Phi+>`` with the unnormalized Bell pair.
    """
    _require_operator(a)
    m = a.data if a.orients[0] == DOWN else a.data.T
    if convention == "col":
        vec = m.T.reshape(-1)
    elif convention == "row":
        vec = m.reshape(-1)
    else:
        raise ShapeError(f"unknown vectorization convention {convention!r}")
    return Tensor(vec, [DOWN])


def unvectorize(v, d_out, d_in, convention="col"):
    """Inverse of :func:`vectorize` for a ``d_out x d_in`` operator."""
    if v.order != 1:
        raise ShapeError("expected a vector")
    if v.data.size != d_out * d_in:
        raise ShapeError("vector length does not factor as d_out*d_in")
    if convention == "col":
        m = v.data.reshape(d_in, d_out).T
    elif convention == "row":
        m = v.data.reshape(d_out, d_in)
    else:
        raise ShapeError(f"unknown vectorization convention {convention!r}")
    return operator(m)


def reshuffle(m, dx, dy, convention="col"):
    """Reshuffle a bipartite operator on a ``dx*dy``-dimensional space.

    Col-reshuffling maps entries ``M[(m,mu),(n,nu)] -> M[(nu,mu),(n,m)]``;
    applied twice it is the identity.  Row-reshuffling is the variant with
    the roles of the two factors exchanged.
    """
    if m.order != 2:
        raise ShapeError("reshuffle expects a two-leg (matrix) tensor")
    dmat = m.data
    if dmat.shape != (dx * dy, dx * dy):
        raise ShapeError(
            f"matrix shape {dmat.shape} does not factor as ({dx}*{dy})^2"
        )
    four = dmat.reshape(dx, dy, dx, dy)
    if convention == "col":
        out = four.transpose(3, 1, 2, 0)
    elif convention == "row":
        out = four.transpose(0, 2, 1, 3)
    else:
        raise ShapeError(f"unknown reshuffle convention {convention!r}")
    return Tensor(out.reshape(dx * dy, dx * dy), m.orients)


@dataclass(frozen=True)
class SvdResult:
    """Factorization ``M = U diag(sigma) Vh`` with descending sigma."""

    u: Tensor
    sigma: np.ndarray
    v_dagger: Tensor
    rank: int


def svd(m):
    """Singular value decomposition of a two-leg tensor.

    ``u`` keeps m's first leg and gains an up bond leg; ``v_dagger`` has
    a down bond leg and m's second leg.  ``rank`` counts singular values
    above ``ZERO_THRESHOLD * sigma_max``.
    """
    if m.order != 2:
        raise ShapeError("svd expects a two-leg tensor")
    try:
        u, s, vh = np.linalg.svd(m.data, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge: {exc}") from exc
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > ZERO_THRESHOLD * smax)) if smax > 0 else 0
    return SvdResult(
        u=Tensor(u, [m.orients[0], UP]),
        sigma=s,
        v_dagger=Tensor(vh, [DOWN, m.orients[1]]),
        rank=rank,
    )


def equal_up_to_scalar(a, b, tol=DEFAULT_TOL):
    """Return ``lam`` with ``a = lam * b`` within ``tol``, else ``None``."""
    if a.dims != b.dims or a.orients != b.orients:
        raise ShapeError("shape mismatch in equal_up_to_scalar")
    bmax = np.abs(b.data).max() if b.data.size else 0.0
    amax = np.abs(a.data).max() if a.data.size else 0.0
    if bmax <= tol:
        return 1.0 + 0.0j if amax <= tol else None
    idx = np.unravel_index(np.argmax(np.abs(b.data)), b.data.shape)
    lam = complex(a.data[idx] / b.data[idx])
    if lam == 0:
        return None
    if np.abs(a.data - lam * b.data).max() <= tol * max(1.0, abs(lam) * bmax):
        return lam
    return None


def allclose(a, b, tol=DEFAULT_TOL):
    """Entrywise comparison at absolute tolerance (shapes must match)."""
    if a.dims != b.dims or a.orients != b.orients:
        return False
    return bool(np.abs(a.data - b.data).max() <= tol) if a.data.size else True


def count_rearrangements(n, m):
    """Number of wire-bend/exchange reshapes of an (n, m)-valence tensor."""
    if n < 0 or m < 0:
        raise ShapeError("n and m must be nonnegative")
    total = n + m + 1
    value = math.factorial(total)
    if value.bit_length() > 63:
        raise OverflowError("rearrangement count exceeds 64-bit range")
    return value


# ---------------------------------------------------------------------------
# TNTX v1 textual format


def write_tntx(t):
    """Serialize a tensor to the TNTX v1 text format."""
    lines = ["tntx 1", f"legs {t.order}"]
    lines.append(" ".join(str(d) for d in t.dims))
    lines.append(" ".join(t.orients))
    flat = t.data.reshape(-1)
    parts = []
    for z in flat:
        parts.append(repr(float(z.real)))
        parts.append(repr(float(z.imag)))
    lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def _tokens(text):
    for line in text.splitlines():
        body = line.split("#", 1)[0]
        for tok in body.split():
            yield tok


def read_tntx(text):
    """Parse the TNTX v1 text format into a :class:`Tensor`."""
    toks = _tokens(text)

    def need(what):
        try:
            return next(toks)
        except StopIteration:
            raise ParseError(f"unexpected end of input, wanted {what}",
                             code="bad-header") from None

    if need("magic") != "tntx" or need("version") != "1":
        raise ParseError("not a TNTX v1 stream", code="bad-header")
    if need("legs keyword") != "legs":
        raise ParseError("missing 'legs' line", code="bad-header")
    try:
        order = int(need("leg count"))
    except ValueError:
        raise ParseError("leg count is not an integer", code="bad-header")
    if order < 0:
        raise ParseError("negative leg count", code="bad-header")
    dims = []
    for _ in range(order):
        try:
            d = int(need("dimension"))
        except ValueError:
            raise ParseError("bad dimension token", code="bad-token")
        if d <= 0:
            raise ParseError("dimensions must be positive", code="bad-token")
        dims.append(d)
    orients = []
    for _ in range(order):
        o = need("orientation")
        if o not in (UP, DOWN):
            raise ParseError(f"bad orientation {o!r}", code="bad-token")
        orients.append(o)
    count = 1
    for d in dims:
        count *= d
    flat = np.empty(count, dtype=np.complex128)
    for i in range(count):
        try:
            re = float(need("real part"))
            im = float(need("imag part"))
        except ValueError:
            raise ParseError("bad float token", code="bad-token")
        flat[i] = complex(re, im)
    for extra in toks:
        raise ParseError(f"trailing token {extra!r}", code="bad-token")
    return Tensor(flat.reshape(dims), orients)
