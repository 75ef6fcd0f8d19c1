"""latstat: exact verification of semimodularity-type inequalities and
lattice order statistics on finite distributive lattices."""

__version__ = "0.1.0"
SCHEMA_VERSION = "1"

from .scalars import (
    INF,
    BudgetExceededError,
    ConventionMode,
    InputError,
    Scalar,
)
from .report import CheckReport, Witness
from .lattice import (
    FnLattice,
    GroundSet,
    TableLattice,
    birkhoff_embed,
    build_m3,
    is_distributive,
    join,
    leq,
    meet,
    order_statistics,
    order_statistics_dual,
    order_statistics_dual_tuple,
    order_statistics_tuple,
    pointwise_order_statistics,
    product_of_chains,
    validate_table_lattice,
)
from .semimod import (
    InsertionChain,
    TransitiveRelation,
    TupleFunctional,
    check_generalized_n,
    check_generalized_nk,
    check_relaxed_hypothesis,
    insertion_chain,
    reduction_regression,
    run_counterexample_m3,
    verify_chain_sortedness,
)
from .constructions import (
    Measure,
    MultiadditiveFn,
    PotentialSpec,
    SchurSpec,
    SetRelation,
    elementary_symmetric,
    esym_orderstat_check,
    indep_association_check,
    majorizes,
    multiadd_symmetric_sum,
    perm_orderstat_check,
    permanent,
    potential_construct,
    power_inequality_check,
    product_measure_check,
    psi_transform_check,
    relation_image_measure,
    schur_construct,
    supinf_check,
    symmetrize,
)
from .correlation import (
    ExplicitSublattice,
    LatticeWeight,
    aharoni_keich_check,
    corollary_ahke_check,
    corollary_fkg_check,
    fkg_check,
    is_log_supermodular,
    nonreversibility_demo,
    orderstat_family,
)
