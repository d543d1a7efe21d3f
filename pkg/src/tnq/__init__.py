"""Tensor-network toolkit for quantum information.

Dense oriented tensors and network contraction; gate/state catalogue
with Pauli-string algebra; SVD/Schmidt/MPS factorization and
entanglement measures; polynomial invariants; Boolean functions, their
quantum images and #SAT by contraction; quantum-channel representations
and fidelities; and 3-edge-coloring counts via the antisymmetric tensor.
"""

from .errors import (
    NumericalError,
    ParseError,
    ShapeError,
    SizeCapError,
    TnqError,
)
from .tensor import (
    DEFAULT_TOL,
    DOWN,
    SIZE_CAP,
    UP,
    ZERO_THRESHOLD,
    SvdResult,
    Tensor,
    allclose,
    as_matrix,
    bend_all,
    bend_leg,
    conj,
    contract,
    count_rearrangements,
    dagger,
    effect,
    equal_up_to_scalar,
    gate,
    operator,
    permute_legs,
    read_tntx,
    reshuffle,
    scalar,
    state,
    svd,
    tensor_product,
    trace_pairs,
    unvectorize,
    vectorize,
    write_tntx,
)
from .network import (
    Network,
    contract_network,
    inner_product,
    norm_squared,
    single_node_network,
)
from .gates import (
    PauliString,
    and_from_toffoli,
    boolean_stabilizer,
    cnot_from_copy_xor,
    copy_tensor,
    dicke_state,
    epsilon_tensor,
    evolve_generator,
    is_stabilizer,
    rotated_copy,
    standard_tensor,
    xor_tensor,
)
from .decomp import (
    MPS,
    SchmidtDecomposition,
    TruncationReport,
    concurrence_pure,
    d_concurrence,
    entropy,
    load_mps,
    mixed_concurrence,
    mps_contract,
    mps_factor,
    power_sum,
    purify,
    purity_swap,
    renyi,
    save_mps,
    schmidt,
    schmidt_reconstruct,
    sym_poly,
    truncate_mps,
    truncate_schmidt,
)
from .invariants import (
    BinaryForm,
    antisymmetrize,
    cubic_discriminant,
    epsilon_det,
    form_from_state,
    hessian,
    j1,
    j2,
    k1,
    k1_compose,
    kempe,
    state_from_form,
    symmetrize,
    trace_invariant,
)
from .boolean import (
    BooleanFunction,
    CnfFormula,
    anf,
    boolean_density,
    boolean_partial_trace,
    boolean_state,
    circuit_state,
    count_sat,
    davio,
    diagonal_map,
    linear_state,
    multilinear,
    network_from_circuit,
    parse_dimacs,
    polarity_state,
    serialize_dimacs,
    spin_to_pseudo_boolean,
    stabilizer_form_state,
)
from .channels import (
    Channel,
    OperatorBasis,
    aapt_recover,
    amplitude_damping_channel,
    apply,
    avg_gate_fidelity,
    check,
    chi_channel,
    choi_channel,
    compose_superops,
    convert,
    default_basis,
    depolarizing_channel,
    elementary_basis,
    entanglement_fidelity,
    kraus_channel,
    pauli_basis,
    read_chx,
    reduced_superop,
    reshuffle_superop_choi,
    stinespring_channel,
    superop_channel,
    sym_projector,
    unitary_channel,
    unravel,
    unravel_inverse,
    write_chx,
)
from .counting import (
    ColorGraph,
    count_colorings_bruteforce,
    count_colorings_epsilon,
    parse_edgelist,
)

__version__ = "0.1.0"
