"""ECO-mini: a small class-based language with extenders, E-methods and classers.

Pipeline: :mod:`lexer` and :mod:`parser` build the AST, :mod:`analysis`
enforces the static rules, :mod:`lowering` rewrites ECO constructs into core
text, and :mod:`interpreter` runs it on top of :mod:`runtime`.
"""

__version__ = "0.1.0"
