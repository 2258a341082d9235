"""Finite-volume Gibbs measures on subshifts: admissibility, potentials, kernels,
DLR checks, entropy, 1D transfer matrices and pattern-swap involutions."""

from .errors import CapExceeded, EmptySubshift, IncompatibleArguments, ReducibleMatrix
from .lattice import Box, centered_box, closed_ball, one_norm, sphere_count, sup_norm
from .shiftspace import (
    Alphabet,
    FramedConfiguration,
    Pattern,
    PeriodicBackground,
    SubshiftSpec,
    enumerate_patterns,
    is_admissible,
    is_admissible_1d,
    is_locally_admissible,
    juxtapose,
    metric,
    shift,
)
from .potentials import (
    InteractionPotential,
    LocalPotential,
    VariationProfile,
    a_phi,
    absolute_summability_bound,
    hamiltonian,
    ising,
    svd_norm,
    variation,
    variation_profile,
)
from .gibbs import (
    Bernoulli,
    CocycleContext,
    CylinderMeasure,
    DLRReport,
    FiniteVolumeGibbs,
    KernelTable,
    cocycle,
    cocycle_tail_bound,
    consistency_residual,
    dlr_residual,
    kernel,
    kernel_from_interaction,
    limit_check,
    properness_check,
)
from .equilibrium1d import (
    MarkovMeasure,
    TransferMatrix,
    cylinder_prob,
    equilibrium_markov,
    ising_pair,
    markov_entropy,
    pair_potential,
    perron,
    pressure,
    transfer_matrix,
    variational_gap,
)
from .entropy import (
    Partition,
    WeightedSpace,
    bernoulli_rate,
    block_entropy_rates,
    chain_rule_residual,
    conditional_entropy,
    is_finer,
    refine,
)
from .homoclinic import (
    BlockInvolution,
    CompatibilityClassing,
    FinitePermutation,
    classify,
    compatible,
    decompose_block_automorphism,
    density_check,
    involution,
    orbit_decompose,
)

__version__ = "0.1.0"
