"""Randomized k-IPCG generation campaigns."""

from ipcg_search.search.certificates import Certificate
from ipcg_search.search.config import CampaignConfig, Phase, Schedule, WeightRange
from ipcg_search.search.generator import Campaign, create_campaign, generate, run_round
from ipcg_search.search.state import GeneratorState, RoundReport

__all__ = [
    "Certificate",
    "CampaignConfig",
    "Phase",
    "Schedule",
    "WeightRange",
    "Campaign",
    "create_campaign",
    "generate",
    "run_round",
    "GeneratorState",
    "RoundReport",
]
