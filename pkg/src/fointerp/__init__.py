"""Multi-sorted first-order interpretation engine with an exact
computer-algebra backend.

Subpackages:
    logic       syntax trees, parser, printer, macros
    structures  exact structures (rationals, polynomials, Laurent, GF(p), ...)
    tuples      number-tuple codecs and list superstructures
    interp      interpretation codes, quotients, translation, composition
    codes       the shipped interpretation codes and formula library
Modules:
    evaluator   three-valued budgeted satisfaction checking
    cli         command-line front end
"""

__version__ = "0.1.0"
