"""Entanglement and quantum-correlation distances for multi-qubit states."""

from .ed_mixed import (
    Decomposition,
    EdResult,
    LocalUnitaryAssignment,
    OptimizerOptions,
    apply_local_mix,
    ed,
    ed_inner,
    eigen_decomposition,
    mix_decomposition,
    werner_fixed_point_angle,
    werner_schedule,
)
from .oracles import (
    bd_from_c,
    bd_qcd,
    bd_state,
    bell_state,
    concurrence,
    is_ppt,
    ppt_min_eigenvalue,
    werner_ed,
    werner_qcd,
    werner_state,
)
from .pure_ed import block_partition, fs_metric, optimal_directions, pure_ed, trace_g
from .qcd import correlation_matrix, metric_mixed, qcd, qcd_bruteforce
from .qstate import (
    DensityMatrix,
    PauliAxis,
    PureState,
    StateError,
    bloch_vector,
    hs_distance,
    make_density,
    make_pure,
    pauli_on_qubit,
    purity,
    random_pure_state,
    random_su2,
)

__version__ = "0.1.0"
