"""Channel representations, conversions, fidelities, tomography."""

import itertools
import math

import numpy as np
import pytest

import tnq
from tnq import channels as cx, tensor as tz
from tnq.errors import NumericalError, ParseError, ShapeError

rng = np.random.default_rng(31)


def rand_c(*shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def rand_unitary(d):
    q, r = np.linalg.qr(rand_c(d, d))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def rand_density(d):
    m = rand_c(d, d)
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


def rand_cptp(d, n_kraus=None):
    # random isometry column -> Kraus operators (exactly trace preserving)
    k = n_kraus or d
    g = rand_c(d * k, d)
    q, _ = np.linalg.qr(g)
    return cx.kraus_channel([q[i * d:(i + 1) * d, :] for i in range(k)])


# ----------------------------------------------------------------- structure

def test_kraus_channel_shapes():
    ch = cx.amplitude_damping_channel(0.3)
    assert ch.rep == "kraus" and ch.d_in == ch.d_out == 2
    with pytest.raises(ShapeError):
        cx.kraus_channel([])
    with pytest.raises(ShapeError):
        cx.kraus_channel([np.eye(2), np.eye(3)])


def test_operator_basis_validation():
    with pytest.raises(ShapeError):
        cx.OperatorBasis((np.eye(2),))  # too few elements
    with pytest.raises(ShapeError):
        cx.OperatorBasis(tuple(np.eye(2) for _ in range(4)))  # not orthonormal
    b = cx.pauli_basis()
    assert len(b.elements) == 4
    np.testing.assert_allclose(np.trace(b.elements[0]).real, math.sqrt(2))


def test_elementary_basis_stack_is_identity():
    b = cx.elementary_basis(3, 2)
    np.testing.assert_allclose(b.stack(), np.eye(6))


# --------------------------------------------------------------- conversions

@pytest.mark.parametrize("d", [2, 3])
def test_conversion_cycle_preserves_action(d):
    ch = rand_cptp(d)
    rhos = [rand_density(d) for _ in range(5)]
    ref = [cx.apply(ch, r).data for r in rhos]
    cur = ch
    for target in ("superop", "choi", "chi", "stinespring", "kraus"):
        cur = cx.convert(cur, target)
        assert cur.rep == target
        for r, want in zip(rhos, ref):
            np.testing.assert_allclose(cx.apply(cur, r).data, want,
                                       atol=1e-9)


def test_choi_trace_is_d():
    ch = rand_cptp(3)
    lam = cx.convert(ch, "choi").matrix()
    np.testing.assert_allclose(np.trace(lam).real, 3.0, atol=1e-10)


def test_chi_in_elementary_basis_equals_choi():
    ch = rand_cptp(2)
    lam = cx.convert(ch, "choi").matrix()
    chi = cx.convert(ch, "chi", basis=cx.elementary_basis(2, 2)).matrix()
    np.testing.assert_allclose(chi, lam, atol=1e-10)


def test_chi_pauli_identity_channel():
    # identity channel: chi has a single entry d at (0, 0) in the Pauli basis
    ch = cx.unitary_channel(np.eye(2))
    chi = cx.convert(ch, "chi", basis=cx.pauli_basis()).matrix()
    want = np.zeros((4, 4))
    want[0, 0] = 2
    np.testing.assert_allclose(chi, want, atol=1e-12)


def test_superop_of_unitary_is_conjugate_kron():
    u = rand_unitary(3)
    s = cx.convert(cx.unitary_channel(u), "superop").matrix()
    np.testing.assert_allclose(s, np.kron(u.conj(), u), atol=1e-12)


def test_canonical_kraus_orthogonality():
    # Kraus operators from the Choi eigendecomposition are HS-orthogonal
    ch = cx.convert(rand_cptp(3), "choi")
    ops = cx.convert(ch, "kraus").data
    for i, a in enumerate(ops):
        for j, b in enumerate(ops):
            ip = np.trace(a.conj().T @ b)
            if i != j:
                assert abs(ip) < 1e-9
    total = sum(k.conj().T @ k for k in ops)
    np.testing.assert_allclose(total, np.eye(3), atol=1e-9)


def test_stinespring_isometry():
    a = cx.convert(rand_cptp(2), "stinespring").matrix()
    np.testing.assert_allclose(a.conj().T @ a, np.eye(2), atol=1e-9)


def test_rectangular_channel_conversion():
    # d_in=2, d_out=3 partial isometry channel survives the cycle
    g = rand_c(6, 2)
    q, _ = np.linalg.qr(g)
    ch = cx.kraus_channel([q[0:3, :], q[3:6, :]])
    rho = rand_density(2)
    want = cx.apply(ch, rho).data
    cur = ch
    for target in ("choi", "superop", "choi", "kraus"):
        cur = cx.convert(cur, target)
    np.testing.assert_allclose(cx.apply(cur, rho).data, want, atol=1e-9)


def test_depolarizing_channel_action():
    rho = rand_density(2)
    out = cx.apply(cx.depolarizing_channel(1.0), rho).data
    np.testing.assert_allclose(out, np.eye(2) / 2, atol=1e-12)
    out = cx.apply(cx.depolarizing_channel(0.0), rho).data
    np.testing.assert_allclose(out, rho, atol=1e-12)


# -------------------------------------------------------------------- checks

def test_check_cptp_properties():
    ch = rand_cptp(2)
    for prop in ("CP", "TP", "HP"):
        ok, _ = cx.check(ch, prop)
        assert ok
    ok, _ = cx.check(cx.unitary_channel(rand_unitary(2)), "unital")
    assert ok


def test_check_detects_violations():
    # amplitude damping is not unital
    ok, wit = cx.check(cx.amplitude_damping_channel(0.5), "unital")
    assert not ok and wit > 0.1
    # transpose map: HP and TP but not CP
    t = np.zeros((4, 4), dtype=complex)
    for i, j in itertools.product(range(2), repeat=2):
        t[j * 2 + i, i * 2 + j] = 1
    ch = cx.superop_channel(t, 2, 2)
    ok, wit = cx.check(ch, "CP")
    assert not ok and wit < -0.5
    assert cx.check(ch, "TP")[0]
    assert cx.check(ch, "HP")[0]


# --------------------------------------------------------- composite systems

def test_unravel_round_trip():
    dims = [(2, 2), (3, 3)]
    v = rand_c(36)
    w = cx.unravel(v, dims)
    np.testing.assert_allclose(cx.unravel_inverse(w, dims), v)


def test_unravel_product_vectorization():
    # vec(a (x) b) unravels to vec(a) (x) vec(b)
    a, b = rand_c(2, 2), rand_c(3, 3)
    joint = np.kron(a, b)
    va = joint.T.reshape(-1)  # column-stacking vec
    out = cx.unravel(va, [(2, 2), (3, 3)])
    want = np.kron(a.T.reshape(-1), b.T.reshape(-1))
    np.testing.assert_allclose(out, want)


def test_compose_superops_matches_kron_kraus():
    ch1, ch2 = rand_cptp(2), rand_cptp(2)
    joint = cx.compose_superops([ch1, ch2])
    rho = rand_density(4)
    # oracle: apply the Kraus products
    out = np.zeros((4, 4), dtype=complex)
    for k1 in ch1.data:
        for k2 in ch2.data:
            k = np.kron(k1, k2)
            out += k @ rho @ k.conj().T
    np.testing.assert_allclose(cx.apply(joint, rho).data, out, atol=1e-9)


def test_reduced_superop_partial_trace_of_product():
    # tracing out an independent second system leaves the first map intact
    ch1, ch2 = rand_cptp(2), rand_cptp(3)
    joint = cx.compose_superops([ch1, ch2])
    tau0 = rand_density(3)
    red = cx.reduced_superop(joint, 2, 3, tau0, np.eye(3))
    s1 = cx.convert(ch1, "superop").matrix()
    np.testing.assert_allclose(red.matrix(), s1, atol=1e-9)


def test_reduced_superop_swap_channel():
    # SWAP with Y prepared in tau0 and traced out sends rho -> tau0
    swap = tz.as_matrix(tnq.standard_tensor("SWAP"), 2)
    joint = cx.unitary_channel(swap)
    tau0 = rand_density(2)
    red = cx.reduced_superop(joint, 2, 2, tau0, np.eye(2))
    rho = rand_density(2)
    np.testing.assert_allclose(cx.apply(red, rho).data, tau0, atol=1e-10)


# ----------------------------------------------------------------- fidelities

def normalized_identity_basis(d):
    # orthonormal operator basis whose first element is I/sqrt(d)
    cols = [np.eye(d).reshape(-1) / math.sqrt(d)]
    cols.extend(rand_c(d * d) for _ in range(d * d - 1))
    q, _ = np.linalg.qr(np.column_stack(cols))
    q[:, 0] *= math.sqrt(d) / np.trace(q[:, 0].reshape(d, d).T)
    return cx.OperatorBasis(tuple(q[:, k].reshape(d, d).T
                                  for k in range(d * d)))


@pytest.mark.parametrize("d", [2, 3])
def test_avg_gate_fidelity_all_representations_agree(d):
    ch = rand_cptp(d)
    basis = cx.pauli_basis() if d == 2 else normalized_identity_basis(d)
    vals = []
    for rep in cx.REPS:
        conv = (cx.convert(ch, rep, basis=basis) if rep == "chi"
                else cx.convert(ch, rep))
        vals.append(cx.avg_gate_fidelity(conv))
    for v in vals[1:]:
        np.testing.assert_allclose(v, vals[0], atol=1e-10)


def test_avg_gate_fidelity_reference_points():
    np.testing.assert_allclose(
        cx.avg_gate_fidelity(cx.unitary_channel(np.eye(3))), 1.0,
        atol=1e-12)
    np.testing.assert_allclose(
        cx.avg_gate_fidelity(cx.depolarizing_channel(1.0)), 0.5,
        atol=1e-10)


def test_avg_gate_fidelity_entanglement_fidelity_relation():
    # F_avg = (d F_e(E, I/d) d + d) / (d(d+1)) with F_e at the maximally
    # mixed state: F_avg = (d + d^2 F_e) / (d(d+1))
    for d in (2, 3):
        ch = rand_cptp(d)
        fe = cx.entanglement_fidelity(ch, np.eye(d) / d)
        want = (d + d * d * fe) / (d * (d + 1))
        np.testing.assert_allclose(cx.avg_gate_fidelity(ch), want,
                                   atol=1e-10)


def test_entanglement_fidelity_representations_agree():
    ch = rand_cptp(2)
    rho = rand_density(2)
    vals = [cx.entanglement_fidelity(cx.convert(ch, rep), rho)
            for rep in cx.REPS]
    for v in vals[1:]:
        np.testing.assert_allclose(v, vals[0], atol=1e-10)


def test_entanglement_fidelity_reference_points():
    rho = rand_density(2)
    fe = cx.entanglement_fidelity(cx.unitary_channel(np.eye(2)), rho)
    np.testing.assert_allclose(fe, 1.0, atol=1e-12)
    fe = cx.entanglement_fidelity(cx.depolarizing_channel(1.0),
                                  np.eye(2) / 2)
    np.testing.assert_allclose(fe, 0.25, atol=1e-12)


# ----------------------------------------------------------------- projectors

@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_sym_projector_traces(d):
    p2 = cx.sym_projector(2, d).data
    np.testing.assert_allclose(np.trace(p2).real, d * (d + 1) / 2,
                               atol=1e-10)
    p3 = cx.sym_projector(3, d).data
    np.testing.assert_allclose(np.trace(p3).real,
                               (d**3 + 3 * d**2 + 2 * d) / 6, atol=1e-10)
    np.testing.assert_allclose(p2 @ p2, p2, atol=1e-10)
    np.testing.assert_allclose(p3 @ p3, p3, atol=1e-10)


def test_sym_projector_fixes_symmetric_vectors():
    d = 3
    v = rand_c(d)
    vv = np.kron(v, v)
    p2 = cx.sym_projector(2, d).data
    np.testing.assert_allclose(p2 @ vv, vv, atol=1e-10)


# ----------------------------------------------------------------------- aapt

def test_aapt_max_entangled_probe():
    d = 2
    ch = rand_cptp(d)
    bell = np.eye(d).reshape(-1) / math.sqrt(d)
    rho_as = np.outer(bell, bell.conj())
    lam_joint = cx.convert(ch, "choi").matrix()
    # (I x E)(rho_as) = Choi / d for the maximally entangled probe
    rho_out = np.zeros((d * d, d * d), dtype=complex)
    for ka in cx.convert(ch, "kraus").data:
        k = np.kron(np.eye(d), ka)
        rho_out += k @ rho_as @ k.conj().T
    rec, cond = cx.aapt_recover(rho_as, rho_out)
    np.testing.assert_allclose(rec.matrix(), lam_joint, atol=1e-10)
    np.testing.assert_allclose(cond, 1.0, atol=1e-10)


def test_aapt_random_full_rank_probe():
    d = 2
    ch = rand_cptp(d)
    psi = rand_c(d * d)
    psi /= np.linalg.norm(psi)
    rho_as = np.outer(psi, psi.conj())
    # make sure the probe is faithful, otherwise re-draw deterministically
    rho_out = np.zeros((d * d, d * d), dtype=complex)
    for ka in cx.convert(ch, "kraus").data:
        k = np.kron(np.eye(d), ka)
        rho_out += k @ rho_as @ k.conj().T
    rec, cond = cx.aapt_recover(rho_as, rho_out)
    want = cx.convert(ch, "choi").matrix()
    np.testing.assert_allclose(rec.matrix(), want, atol=1e-8)
    assert cond >= 1.0


def test_aapt_product_probe_fails():
    d = 2
    rho_a = rand_density(d)
    rho_s = rand_density(d)
    rho_as = np.kron(rho_a, rho_s)
    with pytest.raises(NumericalError):
        cx.aapt_recover(rho_as, rho_as)


# ------------------------------------------------------------------ chx files

@pytest.mark.parametrize("rep", cx.REPS)
def test_chx_round_trip(rep):
    ch = cx.convert(rand_cptp(2), rep)
    text = cx.write_chx(ch)
    back = cx.read_chx(text)
    assert back.rep == rep
    rho = rand_density(2)
    np.testing.assert_allclose(cx.apply(back, rho).data,
                               cx.apply(ch, rho).data, atol=1e-10)


def test_chx_rejects_garbage():
    with pytest.raises(ParseError):
        cx.read_chx("nope 1 kraus 2 2 1\n")
    with pytest.raises(ParseError):
        cx.read_chx("chx 1 wibble 2 2\n")
    with pytest.raises(ParseError):
        cx.read_chx("chx 1 superop 2 2\n1 0 0\n")
