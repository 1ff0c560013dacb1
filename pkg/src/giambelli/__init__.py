"""Giambelli-compatible averages of Schur functions: z-measures on partitions,
their correlation kernels, and orthogonal polynomial ensembles."""

from .partition import Partition, from_frobenius, from_parts, hook
from .zmeasure import MixedZParams, ZParams

__version__ = "0.1.0"

__all__ = ["Partition", "from_parts", "from_frobenius", "hook", "ZParams", "MixedZParams", "__version__"]
