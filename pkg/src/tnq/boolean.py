"""Boolean functions and their quantum images.

Truth tables with ANF (positive-polarity Reed-Muller), Davio cofactors
and real multilinear forms; DIMACS CNF parsing; Boolean quantum states
(appended / post-selected), linear and polarity families, Boolean
density operators; #SAT by tensor contraction with an enumeration
oracle; and wire-based constraint networks for classical circuits.

Variable order: x1 is the most significant bit of the truth-table index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import tensor as tz
from .errors import NumericalError, ParseError, ShapeError
from .network import Network, contract_network, norm_squared
from .tensor import DOWN, UP, Tensor


@dataclass(frozen=True)
class BooleanFunction:
    """Truth vector of length 2^n_vars over {0, 1}."""

    n_vars: int
    truth: tuple

    def __post_init__(self):
        object.__setattr__(self, "truth", tuple(int(b) for b in self.truth))
        if self.n_vars < 0 or len(self.truth) != 2**self.n_vars:
            raise ShapeError("truth vector length must be 2^n_vars")
        if any(b not in (0, 1) for b in self.truth):
            raise ShapeError("truth values must be bits")

    @classmethod
    def from_callable(cls, n_vars, fn):
        truth = [
            int(bool(fn(*bits)))
            for bits in itertools.product(range(2), repeat=n_vars)
        ]
        return cls(n_vars, truth)

    def evaluate(self, bits):
        bits = tuple(int(b) for b in bits)
        if len(bits) != self.n_vars:
            raise ShapeError("wrong number of arguments")
        idx = 0
        for b in bits:
            idx = (idx << 1) | b
        return self.truth[idx]

    def __invert__(self):
        return BooleanFunction(self.n_vars, [1 - b for b in self.truth])


@dataclass(frozen=True)
class CnfFormula:
    """Clauses as lists of nonzero signed literals (1-based variables)."""

    n_vars: int
    clauses: tuple

    def __post_init__(self):
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        for c in clauses:
            for lit in c:
                if lit == 0 or abs(lit) > self.n_vars:
                    raise ShapeError(f"literal {lit} out of range")

    def evaluate(self, bits):
        for clause in self.clauses:
            ok = False
            for lit in clause:
                val = bits[abs(lit) - 1]
                if (lit > 0 and val) or (lit < 0 and not val):
                    ok = True
                    break
            if not ok:
                return 0
        return 1

    def to_function(self):
        return BooleanFunction.from_callable(
            self.n_vars, lambda *bits: self.evaluate(bits)
        )


# ---------------------------------------------------------------------------
# DIMACS

def parse_dimacs(text):
    """Parse DIMACS CNF ('c' comments, 'p cnf n m' header, 0-terminated
    clauses)."""
    header = None
    tokens = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("p"):
            if header is not None:
                raise ParseError("duplicate header", code="bad-header",
                                 line=lineno)
            parts = stripped.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise ParseError(f"bad header {stripped!r}",
                                 code="bad-header", line=lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError("non-integer header field",
                                 code="bad-header", line=lineno)
            if header[0] < 0 or header[1] < 0:
                raise ParseError("negative header field",
                                 code="bad-header", line=lineno)
            continue
        if header is None:
            raise ParseError("clause before header", code="bad-header",
                             line=lineno)
        for tok in stripped.split():
            tokens.append((tok, lineno))
    if header is None:
        raise ParseError("missing 'p cnf' header", code="bad-header")
    n_vars, n_clauses = header
    clauses = []
    current = []
    for tok, lineno in tokens:
        try:
            lit = int(tok)
        except ValueError:
            raise ParseError(f"bad token {tok!r}", code="bad-token",
                             line=lineno)
        if lit == 0:
            clauses.append(tuple(current))
            current = []
        else:
            if abs(lit) > n_vars:
                raise ParseError(f"literal {lit} out of range",
                                 code="literal-range", line=lineno)
            current.append(lit)
    if current:
        raise ParseError("unterminated clause", code="malformed")
    if len(clauses) != n_clauses:
        raise ParseError(
            f"header declares {n_clauses} clauses, found {len(clauses)}",
            code="clause-count",
        )
    return CnfFormula(n_vars, clauses)


def serialize_dimacs(cnf):
    lines = [f"p cnf {cnf.n_vars} {len(cnf.clauses)}"]
    for clause in cnf.clauses:
        lines.append(" ".join(str(l) for l in clause) + " 0")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# normal forms

def anf(f):
    """Positive-polarity Reed-Muller coefficients (Moebius transform).

    Index = monomial mask with x1 most significant; coefficient 1 means
    the product of the masked variables appears in the XOR expansion.
    """
    coeffs = list(f.truth)
    n = f.n_vars
    size = len(coeffs)
    step = 1
    while step < size:
        for base in range(0, size, 2 * step):
            for i in range(base, base + step):
                coeffs[i + step] ^= coeffs[i]
        step *= 2
    return tuple(coeffs)


def function_from_anf(n_vars, coeffs):
    """Inverse of :func:`anf` (the transform is an involution)."""
    return BooleanFunction(n_vars, anf(BooleanFunction(n_vars, coeffs)))


def davio(f, i):
    """Positive Davio cofactors: f = f0 xor x_i * (f0 xor f1).

    ``i`` is 1-based; both returned functions keep all n variables and
    are constant in x_i.
    """
    if not (1 <= i <= f.n_vars):
        raise ShapeError("variable index out of range")
    n = f.n_vars

    def fix(bit):
        truth = []
        for bits in itertools.product(range(2), repeat=n):
            b = list(bits)
            b[i - 1] = bit
            truth.append(f.evaluate(b))
        return BooleanFunction(n, truth)

    f0 = fix(0)
    f1 = fix(1)
    deriv = BooleanFunction(n, [a ^ b for a, b in zip(f0.truth, f1.truth)])
    return f0, deriv


def multilinear(f):
    """Real multilinear polynomial agreeing with f on {0,1}^n.

    Returns a map from sorted variable-index tuples (1-based) to integer
    coefficients; the empty tuple is the constant term.
    """
    n = f.n_vars
    coeffs = {}
    for mask in range(2**n):
        total = 0
        sub = mask
        while True:
            # evaluate f at the assignment given by submask bits
            bits = [(sub >> (n - 1 - k)) & 1 for k in range(n)]
            sign = (-1) ** (bin(mask).count("1") - bin(sub).count("1"))
            total += sign * f.evaluate(bits)
            if sub == 0:
                break
            sub = (sub - 1) & mask
        if total != 0:
            vars_ = tuple(
                k + 1 for k in range(n) if (mask >> (n - 1 - k)) & 1
            )
            coeffs[vars_] = total
    return coeffs


def evaluate_multilinear(coeffs, bits):
    total = 0
    for vars_, c in coeffs.items():
        term = c
        for v in vars_:
            term *= bits[v - 1]
        total += term
    return total


# ---------------------------------------------------------------------------
# Boolean quantum states

def boolean_state(f, mode="postselected"):
    """Appended: sum_x |x>|f(x)>; postselected: sum_x f(x)|x>."""
    n = f.n_vars
    if mode == "appended":
        data = np.zeros((2,) * (n + 1), dtype=complex)
        for bits in itertools.product(range(2), repeat=n):
            data[bits + (f.evaluate(bits),)] = 1
        return Tensor(data, [DOWN] * (n + 1))
    if mode == "postselected":
        data = np.array(f.truth, dtype=complex).reshape((2,) * n)
        return Tensor(data, [DOWN] * n)
    raise ShapeError(f"unknown mode {mode!r}")


def linear_state(c0, cs):
    """Affine-indicator state sum_x (c0 xor xor_i c_i x_i)|x>."""
    cs = [int(c) for c in cs]
    n = len(cs)
    fn = BooleanFunction.from_callable(
        n, lambda *bits: int(c0) ^ (sum(c * b for c, b in zip(cs, bits)) % 2)
    )
    return boolean_state(fn, "postselected")


def polarity_state(f):
    """Sign state sum_x (-1)^f(x) |x>."""
    data = np.array([1 - 2 * b for b in f.truth], dtype=complex)
    return Tensor(data.reshape((2,) * f.n_vars), [DOWN] * f.n_vars)


def boolean_density(f):
    """rho_B = sum_{x,y} f(x) f(y) |x><y| (unnormalized projector)."""
    v = np.array(f.truth, dtype=complex)
    return tz.operator(np.outer(v, v))


def boolean_partial_trace(f, k):
    """Partial trace of rho_B over the k-th bit (1-based)."""
    n = f.n_vars
    if not (1 <= k <= n):
        raise ShapeError("bit index out of range")
    dim = 2 ** (n - 1)
    out = np.zeros((dim, dim), dtype=complex)
    for x in itertools.product(range(2), repeat=n):
        for y in itertools.product(range(2), repeat=n):
            if x[k - 1] != y[k - 1]:
                continue
            if not (f.evaluate(x) and f.evaluate(y)):
                continue
            xi = _drop_bit_index(x, k)
            yi = _drop_bit_index(y, k)
            out[xi, yi] += 1
    return tz.operator(out)


def _drop_bit_index(bits, k):
    idx = 0
    for pos, b in enumerate(bits):
        if pos == k - 1:
            continue
        idx = (idx << 1) | b
    return idx


def diagonal_map(psi):
    """Diagonal operator L with L |+...+> = psi (amplitudes on the
    diagonal)."""
    return tz.operator(np.diag(psi.data.reshape(-1)))


def spin_to_pseudo_boolean(h_terms):
    """Convert diagonal spin-string terms to multilinear x-coefficients.

    Terms are (coefficient, letters) with letters over {I, Z}, or
    (coefficient, iterable of 1-based spin positions).  Substituting
    s_i = 1 - 2 x_i expands each product of Z factors.
    """
    coeffs = {}
    for coeff, spec in h_terms:
        if isinstance(spec, str):
            positions = []
            for pos, letter in enumerate(spec, start=1):
                if letter == "Z":
                    positions.append(pos)
                elif letter != "I":
                    raise ShapeError(
                        f"non-diagonal term letter {letter!r}"
                    )
        else:
            positions = sorted(int(p) for p in spec)
        for r in range(len(positions) + 1):
            for subset in itertools.combinations(positions, r):
                key = tuple(subset)
                coeffs[key] = coeffs.get(key, 0) + coeff * (-2) ** r
    return {k: v for k, v in coeffs.items() if v != 0}


def stabilizer_form_state(f, g, k):
    """sum_x (-1)^f(x) i^g(x) k(x) |x> for same-arity Boolean triples."""
    if not (f.n_vars == g.n_vars == k.n_vars):
        raise ShapeError("f, g, k must share the same number of variables")
    n = f.n_vars
    data = np.zeros((2,) * n, dtype=complex)
    for bits in itertools.product(range(2), repeat=n):
        data[bits] = (
            (-1) ** f.evaluate(bits)
            * 1j ** g.evaluate(bits)
            * k.evaluate(bits)
        )
    return Tensor(data, [DOWN] * n)


# ---------------------------------------------------------------------------
# counting

def _clause_effect(clause):
    """Effect tensor over the clause's literal wires: 1 iff satisfied."""
    w = len(clause)
    data = np.zeros((2,) * w, dtype=complex)
    for bits in itertools.product(range(2), repeat=w):
        if any(
            (lit > 0 and b) or (lit < 0 and not b)
            for lit, b in zip(clause, bits)
        ):
            data[bits] = 1
    return Tensor(data, [UP] * w)


def _copy_spider(net, key, n_legs):
    """Add an n_legs COPY spider as a chain of small fans.

    High-degree fans are split into 3-leg spiders (spider fusion makes
    the chain equivalent) so no single node exceeds the planner's size
    cap.  Returns the list of n_legs all-ket (node, leg) endpoints.
    """
    if n_legs <= 8:
        data = np.zeros((2,) * n_legs, dtype=complex)
        data[(0,) * n_legs] = 1
        data[(1,) * n_legs] = 1
        net.add_node(key, Tensor(data, [DOWN] * n_legs))
        return [(key, pos) for pos in range(n_legs)]
    delta3 = np.zeros((2, 2, 2), dtype=complex)
    delta3[0, 0, 0] = delta3[1, 1, 1] = 1
    head = Tensor(delta3, [DOWN, DOWN, DOWN])
    mid = Tensor(delta3, [UP, DOWN, DOWN])        # first leg closes the chain
    ends = []
    n_mid = n_legs - 3
    net.add_node((key, "c", 0), head)
    ends.extend([((key, "c", 0), 0), ((key, "c", 0), 1)])
    for k in range(n_mid):
        net.add_node((key, "c", k + 1), mid)
        net.add_bond(((key, "c", k), 2), ((key, "c", k + 1), 0))
        ends.append(((key, "c", k + 1), 1))
    tail = Tensor(np.eye(2, dtype=complex), [UP, DOWN])
    net.add_node((key, "c", n_mid + 1), tail)
    net.add_bond(((key, "c", n_mid), 2), ((key, "c", n_mid + 1), 0))
    ends.append(((key, "c", n_mid + 1), 1))
    return ends


def cnf_state_network(cnf):
    """Network whose contraction is the post-selected solution state.

    One COPY fan per variable (one open leg each, ordered x1..xn) and
    one satisfaction effect per clause.
    """
    net = Network()
    occurrences = {i: 0 for i in range(1, cnf.n_vars + 1)}
    for clause in cnf.clauses:
        for lit in clause:
            occurrences[abs(lit)] += 1
    free = {}
    open_legs = []
    for i in range(1, cnf.n_vars + 1):
        ends = _copy_spider(net, ("var", i), occurrences[i] + 1)
        open_legs.append(ends[-1])
        free[i] = ends[:-1]
    for j, clause in enumerate(cnf.clauses):
        net.add_node(("clause", j), _clause_effect(clause))
        for pos, lit in enumerate(clause):
            net.add_bond((("clause", j), pos), free[abs(lit)].pop())
    net.set_open_legs(open_legs)
    return net.finalize()


def count_sat(obj, engine="tensor"):
    """Number of satisfying assignments of a CNF formula or function.

    The tensor engine evaluates the squared norm of the solution state
    through the network planner; the enumeration engine is the oracle.
    """
    if engine == "enumerate":
        if isinstance(obj, BooleanFunction):
            return sum(obj.truth)
        if isinstance(obj, CnfFormula):
            return sum(
                obj.evaluate(bits)
                for bits in itertools.product(range(2), repeat=obj.n_vars)
            )
        raise ShapeError("count_sat expects a BooleanFunction or CnfFormula")
    if engine != "tensor":
        raise ShapeError(f"unknown engine {engine!r}")
    if isinstance(obj, BooleanFunction):
        psi = boolean_state(obj, "postselected")
        val = float(np.vdot(psi.data, psi.data).real)
    elif isinstance(obj, CnfFormula):
        if obj.n_vars > 26:
            raise ShapeError("tensor engine capped at 26 variables")
        val = norm_squared(cnf_state_network(obj))
    else:
        raise ShapeError("count_sat expects a BooleanFunction or CnfFormula")
    count = int(round(val))
    if abs(val - count) > 1e-6:
        raise NumericalError(f"count residue {abs(val - count)} too large")
    return count


# ---------------------------------------------------------------------------
# circuits as constraint networks

_GATE_FNS = {
    "AND": (2, lambda a, b: a & b),
    "OR": (2, lambda a, b: a | b),
    "XOR": (2, lambda a, b: a ^ b),
    "NAND": (2, lambda a, b: 1 - (a & b)),
    "NOR": (2, lambda a, b: 1 - (a | b)),
    "NOT": (1, lambda a: 1 - a),
    "CONST0": (0, lambda: 0),
    "CONST1": (0, lambda: 1),
}


def _gate_effect(name):
    """All-bra indicator tensor for one gate: legs are the input wires
    followed by the output wire."""
    if name == "COPY":
        data = np.zeros((2, 2, 2), dtype=complex)
        data[0, 0, 0] = data[1, 1, 1] = 1
        return Tensor(data, [UP] * 3)
    if name not in _GATE_FNS:
        raise ShapeError(f"unknown gate {name!r}")
    arity, fn = _GATE_FNS[name]
    data = np.zeros((2,) * (arity + 1), dtype=complex)
    for bits in itertools.product(range(2), repeat=arity):
        data[bits + (fn(*bits),)] = 1
    return Tensor(data, [UP] * (arity + 1))


def network_from_circuit(gates, inputs, outputs=(), postselect=None):
    """Constraint network for a classical circuit.

    ``gates`` is a list of {"gate": name, "in": [wires], "out": wire};
    each wire becomes a COPY node joining all its attachment points, so
    the contraction sums over consistent wire assignments.  Open legs
    are the ``inputs`` followed by ``outputs``; ``postselect`` maps wire
    names to fixed bits.
    """
    postselect = dict(postselect or {})
    inputs = list(inputs)
    outputs = list(outputs)

    produced = {}
    attachments = {w: 0 for w in inputs + outputs}
    parsed = []
    for gi, g in enumerate(gates):
        name = g["gate"].upper()
        wires_in = list(g.get("in", ()))
        out = g["out"]
        if name == "COPY":
            arity = 1
        elif name in _GATE_FNS:
            arity = _GATE_FNS[name][0]
        else:
            raise ShapeError(f"unknown gate {name!r}")
        if len(wires_in) != arity:
            raise ShapeError(f"gate {name} expects {arity} inputs")
        if out in produced:
            raise ShapeError(f"wire {out!r} produced twice")
        produced[out] = gi
        outs = [out, g["out2"]] if name == "COPY" and "out2" in g else [out]
        if name == "COPY":
            if "out2" not in g:
                raise ShapeError("COPY gate needs 'out' and 'out2'")
            if g["out2"] in produced:
                raise ShapeError(f"wire {g['out2']!r} produced twice")
            produced[g["out2"]] = gi
        for w in wires_in + outs:
            attachments[w] = attachments.get(w, 0) + 1
        parsed.append((name, wires_in, outs))

    for w in postselect:
        attachments[w] = attachments.get(w, 0) + 1

    # dangling check: every gate input must be driven or be a circuit input
    for name, wires_in, outs in parsed:
        for w in wires_in:
            if w not in produced and w not in inputs:
                raise ShapeError(f"dangling wire {w!r}")

    # cycle check over declared gate directions
    color = {}

    def visit(gi):
        if color.get(gi) == 1:
            raise ShapeError("cyclic wiring")
        if color.get(gi) == 2:
            return
        color[gi] = 1
        name, wires_in, outs = parsed[gi]
        for w in wires_in:
            if w in produced:
                visit(produced[w])
        color[gi] = 2

    for gi in range(len(parsed)):
        visit(gi)

    net = Network()
    slot = {}
    for w, count in attachments.items():
        is_open = w in inputs or w in outputs
        n_legs = count + (1 if is_open else 0)
        if n_legs == 0:
            raise ShapeError(f"unused wire {w!r}")
        data = np.zeros((2,) * n_legs, dtype=complex)
        data[(0,) * n_legs] = 1
        data[(1,) * n_legs] = 1
        net.add_node(("wire", w), Tensor(data, [DOWN] * n_legs))
        slot[w] = 0

    def attach(node_leg, wire):
        net.add_bond(node_leg, (("wire", wire), slot[wire]))
        slot[wire] += 1

    for gi, (name, wires_in, outs) in enumerate(parsed):
        net.add_node(("gate", gi), _gate_effect(name))
        for pos, w in enumerate(wires_in + outs):
            attach((("gate", gi), pos), w)

    for w, bit in postselect.items():
        vec = np.zeros(2, dtype=complex)
        vec[int(bit)] = 1
        net.add_node(("post", w), Tensor(vec, [UP]))
        attach((("post", w), 0), w)

    net.set_open_legs(
        [(("wire", w), attachments[w]) for w in inputs + outputs]
    )
    return net.finalize()


def circuit_state(gates, inputs, outputs=(), postselect=None):
    """Contract the circuit network to an all-ket state tensor."""
    return contract_network(
        network_from_circuit(gates, inputs, outputs, postselect)
    )
