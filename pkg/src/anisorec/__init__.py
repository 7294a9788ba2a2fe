"""Recovery of anisotropic periodic functions from i.i.d. point samples.

The package provides frequency index sets (hyperbolic crosses and weighted
sublevel sets), sequence-space tooling (rearrangements, weak Lorentz norms,
best s-term errors), finitely supported periodic functions with anisotropic
Sobolev norms, randomized Fourier measurement operators, a square-root LASSO
solver, the smoothness-blind reconstruction pipeline built on top of them,
and ellipsoid width calculators.
"""

__version__ = "0.1.0"
