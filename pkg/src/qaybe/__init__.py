"""Graded operators over C^{N|N}, the queer R-matrix families, and numerical
certification of the Yang-Baxter type identities they satisfy."""

__version__ = "0.1.0"

from .families import PoleError, RFamily, SpectralPoint  # noqa: E402
from .graded import GradedOp, Superspace, make_space  # noqa: E402
from .verify import Identity, IdentityCheck  # noqa: E402

__all__ = [
    "__version__",
    "GradedOp",
    "Identity",
    "IdentityCheck",
    "PoleError",
    "RFamily",
    "SpectralPoint",
    "Superspace",
    "make_space",
]
