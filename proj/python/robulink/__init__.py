"""Python access to the robulink corruption engine and metrics."""

from ._core import (
    __version__,
    bootstrap_ci,
    corrupt,
    dimensions,
    label,
    psnr,
    relative,
    srocc,
    token_f1,
)

__all__ = [
    "__version__",
    "bootstrap_ci",
    "corrupt",
    "dimensions",
    "label",
    "psnr",
    "relative",
    "srocc",
    "token_f1",
]
