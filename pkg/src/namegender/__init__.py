"""Gender inference from names and web images, with fusion and bias-aware evaluation."""

from .core import (
    BackendId,
    GenderLabel,
    PersonRecord,
    Prediction,
    abstain,
    prediction_from_probability,
)
from .evaluation import (
    ConfusionTally,
    CountryReport,
    MethodMetrics,
    accuracy_identity_check,
    country_breakdown,
    metrics,
    tally,
)
from .fusion import ImageEvidence, aggregate_faces, mixed1, mixed2
from .namedb import (
    NameDatabase,
    lookup_counts,
    lookup_dict,
    parse_census_csv,
    parse_dict_file,
    parse_ssa_dir,
)
from .normalize import NameKey, extract_first_name, image_query

__version__ = "0.1.0"

__all__ = [
    "BackendId",
    "ConfusionTally",
    "CountryReport",
    "GenderLabel",
    "ImageEvidence",
    "MethodMetrics",
    "NameDatabase",
    "NameKey",
    "PersonRecord",
    "Prediction",
    "abstain",
    "accuracy_identity_check",
    "aggregate_faces",
    "country_breakdown",
    "extract_first_name",
    "image_query",
    "lookup_counts",
    "lookup_dict",
    "metrics",
    "mixed1",
    "mixed2",
    "parse_census_csv",
    "parse_dict_file",
    "parse_ssa_dir",
    "prediction_from_probability",
    "tally",
]
