"""Pre-ensemble and ensemble construction with their verifiers."""
from .build import (
    Ensemble,
    NormVerdict,
    SplitDescriptor,
    SplitVerdict,
    UniqueExpansionVerdict,
    build_ensemble,
    build_from_params,
    ensemble_histogram,
    pi_window,
    prefix_products,
    split_at,
    verify_ensemble_norms,
    verify_split,
    verify_unique_expansion,
)
from .io import dump_ensemble, ensemble_from_dict, ensemble_to_dict, load_ensemble
from .params import EnsembleParams, Mode, check_identities, compute_params, depth_J
from .pre import (
    GoldenRatioReport,
    PreEnsemble,
    build_pre_ensemble,
    padding_length,
    step_count,
    verify_golden_ratio,
)

__all__ = [
    "Ensemble",
    "EnsembleParams",
    "GoldenRatioReport",
    "Mode",
    "NormVerdict",
    "PreEnsemble",
    "SplitDescriptor",
    "SplitVerdict",
    "UniqueExpansionVerdict",
    "build_ensemble",
    "build_from_params",
    "build_pre_ensemble",
    "check_identities",
    "compute_params",
    "depth_J",
    "dump_ensemble",
    "ensemble_from_dict",
    "ensemble_histogram",
    "ensemble_to_dict",
    "load_ensemble",
    "padding_length",
    "pi_window",
    "prefix_products",
    "split_at",
    "step_count",
    "verify_ensemble_norms",
    "verify_golden_ratio",
    "verify_split",
    "verify_unique_expansion",
]
