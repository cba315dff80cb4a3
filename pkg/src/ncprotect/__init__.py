"""Network-coded shared protection of bidirectional unicast connections.

n connections are protected against adversarial path errors and
known-location failures by M shared bidirectional protection paths carrying
GF(2^r) linear combinations of everyone's data.  Each end node decodes alone
from its primary receipt and the protection-path syndrome.

Subpackages by concern:

* ``galois``        -- GF(2^r) arithmetic, r = 1..16
* ``linalg``        -- rank / solve over a finite field
* ``model``         -- network configuration, coefficient matrix H_ext,
                       error/failure patterns
* ``coefficients``  -- assignment schemes and rank-condition verification
* ``adversary``     -- seeded error/failure injection plans
* ``protocol``      -- the per-round encoding walk and syndrome formation
* ``decoder``       -- single-error, enumeration, errors+failures, and
                       Reed-Solomon (Berlekamp-Massey) decoding
* ``provisioning``  -- cost-optimal path provisioning models and solving
* ``harness``       -- scenario files, sweeps, Monte Carlo, reports
"""

from .adversary import AdversaryPlan, apply_plan, random_plan, sweep_plans
from .coefficients import (
    StructuralInfeasibilityError,
    VerificationReport,
    assign_general_topology,
    assign_random,
    assign_rs,
    assign_simple,
    assign_vandermonde,
    independence_probability_mixed,
    independence_probability_protection,
    independence_probability_single,
    multi_error_success_bound,
    single_error_success_bound,
    verify_condition,
)
from .decoder import (
    DecodingFailure,
    decode_enumerate,
    decode_rs,
    decode_single,
    decode_with_failures,
)
from .galois import GF, gf
from .harness import (
    MonteCarloResult,
    ScenarioError,
    ScenarioReport,
    clopper_pearson,
    load_scenario,
    monte_carlo,
    run_scenario,
)
from .model import (
    CoefficientMatrix,
    ErrorPattern,
    FailurePattern,
    NetworkConfig,
    Node,
    pattern_family,
)
from .protocol import NodeObservation, run_round, syndrome_of
from .provisioning import (
    CostReport,
    ProvisionModel,
    ProvisionSolution,
    TopologyGraph,
    build_model,
    check_solution,
    compare_schemes,
    dumbbell_instance,
    export_lp,
    load_topology,
    parse_topology,
    solve_exact,
    upper_bound_from_ilp3,
)

__version__ = "0.1.0"
