"""Exact finite-field toolkit for Dickson invariants and the Coxeter Deligne-Lusztig variety of GL_n."""

from .ff_tower import FieldCtx, FieldElem, FieldSpec, make_field

__all__ = ["FieldCtx", "FieldElem", "FieldSpec", "make_field"]
__version__ = "0.1.0"
