"""Python bindings for the subsync document exchange library."""

from ._core import (
    SubsyncError,
    apply_edit,
    ball_size_upper_bound,
    confusion_ball,
    decode,
    edit_ball,
    encode_average,
    encode_worst,
    encoding_info,
    find_separating_modulus,
    is_dense,
    label,
    restricted_confusion_ball,
)

__all__ = [
    "SubsyncError",
    "apply_edit",
    "ball_size_upper_bound",
    "confusion_ball",
    "decode",
    "edit_ball",
    "encode_average",
    "encode_worst",
    "encoding_info",
    "find_separating_modulus",
    "is_dense",
    "label",
    "restricted_confusion_ball",
]
