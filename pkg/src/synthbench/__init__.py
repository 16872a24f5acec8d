"""Deterministic synthetic multivariate time-series benchmark.

Generates dataset instances with exactly controlled signal components,
noise families, and signal-to-noise ratios, and evaluates forecasters
against the noise-free latent signal in both time and frequency domains.
"""

__version__ = "0.1.0"

from .assignment import (
    AssignmentState,
    VariateRecipe,
    build_recipes,
    selection_probabilities,
)
from .baseline import LinearForecaster
from .bench import evaluate_predictions, run_benchmark
from .components import (
    BrownianNoiseSpec,
    DependentNoiseSpec,
    ImpulseSpec,
    SeasonalSpec,
    TrendSpec,
    WhiteNoiseSpec,
    znormalize,
)
from .config import (
    ComponentCensus,
    GridSpec,
    InstanceConfig,
    SplitSpec,
    load_config,
    load_grid,
)
from .dataset import (
    DatasetInstance,
    expand_grid,
    generate_instance,
    read_instance,
    split_ranges,
    windows,
    write_instance,
)
from .errors import (
    CensusError,
    ConfigError,
    DegenerateSeriesError,
    FormatVersionError,
    IntegrityError,
    NotFittedError,
    SynthBenchError,
)
from .metrics import (
    EvalReport,
    aggregate_runs,
    capture_threshold,
    horizon_profile,
    mse_clean,
    spectral_error,
    spectrum,
)
from .predictions import (
    read_predictions,
    read_predictions_csv,
    write_predictions,
    write_predictions_csv,
)
from .prng import StreamPath, derive
from .synthesis import (
    VariateTriple,
    aggregate,
    mixing_weights,
    pearson,
    sample_snr,
    sample_weights,
    synthesize_variate,
)

__all__ = [
    "__version__",
    "AssignmentState",
    "VariateRecipe",
    "build_recipes",
    "selection_probabilities",
    "LinearForecaster",
    "evaluate_predictions",
    "run_benchmark",
    "BrownianNoiseSpec",
    "DependentNoiseSpec",
    "ImpulseSpec",
    "SeasonalSpec",
    "TrendSpec",
    "WhiteNoiseSpec",
    "znormalize",
    "ComponentCensus",
    "GridSpec",
    "InstanceConfig",
    "SplitSpec",
    "load_config",
    "load_grid",
    "DatasetInstance",
    "expand_grid",
    "generate_instance",
    "read_instance",
    "split_ranges",
    "windows",
    "write_instance",
    "CensusError",
    "ConfigError",
    "DegenerateSeriesError",
    "FormatVersionError",
    "IntegrityError",
    "NotFittedError",
    "SynthBenchError",
    "EvalReport",
    "aggregate_runs",
    "capture_threshold",
    "horizon_profile",
    "mse_clean",
    "spectral_error",
    "spectrum",
    "read_predictions",
    "read_predictions_csv",
    "write_predictions",
    "write_predictions_csv",
    "StreamPath",
    "derive",
    "VariateTriple",
    "aggregate",
    "mixing_weights",
    "pearson",
    "sample_snr",
    "sample_weights",
    "synthesize_variate",
]
