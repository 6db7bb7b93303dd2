"""Learn near-optimal bounded contracts from sampled outcomes of a hidden action."""

from .action_oracle import BOT, MetaActionRegistry
from .driver import Params, compute_params, discover_and_cover
from .environment import Environment, StratifiedEnvironment
from .find_contract import find_contract, suboptimality_audit
from .instgen import gen_hardness, gen_random
from .model import Instance, best_response, principal_utility, validate_instance
from .oracle_ref import grid_opt, solve_opt
from .regret import run_regret
from .try_cover import try_cover

__all__ = [
    "BOT", "Environment", "Instance", "MetaActionRegistry", "Params", "StratifiedEnvironment",
    "best_response", "compute_params", "discover_and_cover", "find_contract", "gen_hardness",
    "gen_random", "grid_opt", "principal_utility", "run_regret", "solve_opt",
    "suboptimality_audit", "try_cover", "validate_instance",
]
