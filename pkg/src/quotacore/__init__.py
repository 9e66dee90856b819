"""Core-stable outcomes for directed network problems with quotas and
exclusive combinatorial allocation problems."""

from .core_verify import (
    BlockingCertificate,
    SearchSpaceTooLarge,
    cap_find_blocking,
    cap_in_core,
    check_blocking,
    dominates,
    enumerate_core,
    find_blocking_coalition,
    in_core,
)
from .instance_gen import GenConfig, paper_example, random_cap_instance, random_network_instance
from .model import (
    Allocation,
    CapInstance,
    DirectedNetwork,
    InvalidInstanceError,
    NetworkInstance,
    StageTrace,
    Transfer,
    is_balanced,
    is_feasible_allocation,
    is_feasible_network,
    rank,
    validate_cap_instance,
    validate_network_instance,
)
from .prices import PriceTable, personalized_prices, stage_prices, verify_price_properties
from .ttc_cap import solve_cap
from .ttc_network import find_cycles, solve_network

__version__ = "0.1.0"
