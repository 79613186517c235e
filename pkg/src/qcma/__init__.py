"""Identity check on basis states and low-complexity low-energy states.

Statevector simulation, verifier gadgets, clock Hamiltonians and Lanczos
eigensolvers for checking both reductions on small instances.
"""
from .circuit import Circuit, Gate, VerifierSpec, embed, inverse, parse, parse_circuit, serialize, validate
from .simulator import (
    StateVector,
    acceptance_operator,
    acceptance_probability,
    apply_gate,
    basis_state,
    diagonal_overlap,
    run,
    unitary_matrix,
)
from .idcheck import (
    Decision,
    IdCheckInstance,
    ReductionParams,
    TheoremBounds,
    amplify,
    build_tilde,
    build_Z,
    decide_basis_identity,
    hdh_circuit,
    min_basis_overlap,
    min_gates_prepare,
    norm_distance_to_identity,
    phase_difference,
    theorem_bounds,
    verify_preparation,
    z_star,
)
from .clock import (
    ClockLayout,
    LocalHamiltonian,
    LocalTerm,
    LowEnergyInstance,
    compile_hamiltonian,
    decide_low_energy,
    energy,
    history_prep_circuit,
    history_state,
    matvec,
)
from .spectral import EigResult, dense_spectrum, lanczos_extreme

__version__ = "0.1.0"
