"""Text readers and emitters."""

from .readers import (
    parse_distance_matrix,
    parse_metric_kind,
    parse_point_cloud,
    parse_rational,
    snap_point_cloud,
)
from .emitters import (
    emit_approximation,
    emit_barcode,
    emit_euler,
    emit_level_comparison,
    emit_limits,
    emit_magnitude,
    emit_magnitude_function,
    emit_mh_table,
    format_distance_matrix,
)

__all__ = [
    "parse_distance_matrix",
    "parse_metric_kind",
    "parse_point_cloud",
    "parse_rational",
    "snap_point_cloud",
    "emit_approximation",
    "emit_barcode",
    "emit_euler",
    "emit_level_comparison",
    "emit_limits",
    "emit_magnitude",
    "emit_magnitude_function",
    "emit_mh_table",
    "format_distance_matrix",
]
