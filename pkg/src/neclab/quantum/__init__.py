"""Quantum sublibrary: linear algebra, entropies and inequalities, channels,
entanglement protocols, and superoperator formula trees."""

from .linalg import (  # noqa: F401
    ATOL,
    BELL_BASIS,
    BELL_LABELS,
    H2,
    I2,
    PHI_MINUS,
    PHI_PLUS,
    PSI_MINUS,
    PSI_PLUS,
    X,
    XOR_GATE,
    Y,
    Z,
    hadamard_n,
    is_density,
    is_psd,
    is_unitary,
    ket,
    partial_trace,
    proj,
    random_density,
    random_pure_state,
    random_unitary,
)
from .info import (  # noqa: F401
    INEQUALITY_KINDS,
    binary_entropy,
    check_inequality,
    conditional_entropy,
    holevo_information,
    info,
    mutual_information,
    random_instance,
    shannon_entropy,
    sweep_inequality,
    von_neumann_entropy,
)
from .channels import (  # noqa: F401
    SuperOp,
    apply_dilation,
    choi_to_kraus,
    cptp_validate,
    depolarizing_channel,
    dilation,
    identity_channel,
    transpose_map,
)
from .protocols import (  # noqa: F401
    BELL_ERRORS,
    RetryResult,
    pqg_apply,
    pqg_branches,
    pqg_retry,
    program_state,
    relate_purifications,
    superdense,
)
from .qformula import (  # noqa: F401
    QAux,
    QConst,
    QFormulaTree,
    QGate,
    QInput,
    classical_gate_op,
    coin_source_op,
    eval_by_order,
    order_invariance_check,
    postorder_gates,
    qformula_eval,
    simulate_readonce_random,
    unentangled_inputs_check,
)
