"""Galois-point criteria for plane curves over finite fields.

Decides and certifies when a smooth projective curve admits a birational
embedding into the plane whose image has two or three prescribed collinear
Galois points, constructs the embeddings and the image quartic models, and
decides linear extendability of Galois-group elements.  Every positive answer
carries a machine-checkable certificate; every negative answer names the
violated condition with a witness.
"""

__version__ = "0.1.0"

from ._backend import backend_name

__all__ = ["backend_name", "__version__"]
