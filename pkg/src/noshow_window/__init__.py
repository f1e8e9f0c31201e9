"""Optimal appointment scheduling windows under delay-dependent no-shows."""
from .capacity import (CapacitySearchResult, EfficiencyReport, EmptyGridError,
                       joint_gain_over_sequential, joint_optimal, levers_efficiency_report,
                       optimal_panel, panel_objective, sequential_value)
from .queues import (DETERMINISTIC, EXPONENTIAL, InstabilityError, NumericalError, QueueSpec,
                     StationaryDistribution, WindowFamily, distribution, infinite_distribution,
                     md1_distribution, md1k_distribution, md1k_recursive, mm1_distribution,
                     mm1k_distribution)
from .reward import (EconomicParams, RewardBreakdown, net_reward, net_reward_infinite,
                     overtime_cost, service_level)
from .showup import (ShowupModel, showup_at_position, showup_kopach, showup_pure_exponential,
                     showup_saturating)
from .simulation import SimConfig, SimResult, simulate
from .window import (UndefinedComparisonError, WindowSearchResult, efficiency_gain_md_vs_mm,
                     efficiency_gain_vs_infinite, optimal_window)

__version__ = "0.1.0"
