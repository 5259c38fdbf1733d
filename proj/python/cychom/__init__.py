"""Exact cyclic homology of mixed complexes over finite windows."""

from _cychom import (  # noqa: F401
    builtins,
    canonical_spec,
    flavours,
    homology,
    loop,
    verify,
)

__all__ = ["homology", "verify", "loop", "flavours", "builtins", "canonical_spec"]
