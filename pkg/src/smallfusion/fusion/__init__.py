"""Saturated fusion systems on small p-groups."""

from .closed import (
    central_series_of_closed,
    fusion_center,
    is_controlled_by_aut_p,
    is_strongly_closed,
    quotient_fusion,
    resistance_check,
    strongly_closed_subgroups,
)
from .enumerate import (
    aut_group_perms,
    aut_p_choices,
    are_isomorphic,
    enumerate_saturated,
    isomorphism_between,
)
from .essentials import (
    EssentialCandidate,
    essential_candidates,
    essential_classes,
    essential_rank,
    has_strongly_p_embedded,
    is_centric,
    is_essential,
    out_group,
    sylow_subgroup,
)
from .report import FusionRecord, fusion_record, realizing_label
from .saturation import SaturationVerdict, is_fully_automized, is_saturated
from .system import Essential, FusionSystem, generate, trivial_system, validate

__all__ = [
    "Essential",
    "EssentialCandidate",
    "FusionRecord",
    "FusionSystem",
    "SaturationVerdict",
    "are_isomorphic",
    "aut_group_perms",
    "aut_p_choices",
    "central_series_of_closed",
    "enumerate_saturated",
    "essential_candidates",
    "essential_classes",
    "essential_rank",
    "fusion_center",
    "fusion_record",
    "generate",
    "has_strongly_p_embedded",
    "is_centric",
    "is_controlled_by_aut_p",
    "is_essential",
    "is_fully_automized",
    "is_saturated",
    "is_strongly_closed",
    "isomorphism_between",
    "out_group",
    "quotient_fusion",
    "realizing_label",
    "resistance_check",
    "strongly_closed_subgroups",
    "sylow_subgroup",
    "trivial_system",
    "validate",
]
