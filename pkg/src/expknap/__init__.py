"""Online secretary and knapsack algorithms under an expected capacity constraint."""

__version__ = "0.1.0"

from .core import (
    ArrivalOrder,
    Instance,
    Item,
    RunOutcome,
    best_k_subset,
    buck_per_bang,
    load_instance,
    random_permutation,
)
from .generators import GeneratorSpec, generate_instance
from .harness import (
    AlgorithmSpec,
    TrialStats,
    competitive_ratio_estimate,
    run_trials,
    selection_histogram,
)
from .knapsack_offline import (
    fractional_opt,
    integral_opt,
    off_approximation_check,
    off_greedy,
    scaling_ratio_check,
)
from .knapsack_online import assumption1_check, aug_on_run, on_run
from .lowerbound import adversarial_lp_value, secretary_lower_bound
from .secretary import (
    classical_secretary_run,
    expected_count_bound,
    ksec_t_threshold_run,
    t_threshold_run,
)
