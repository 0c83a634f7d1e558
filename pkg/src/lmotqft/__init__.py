"""Exact diagram algebra for the LMO three-manifold invariant and its TQFT.

The package is organized bottom-up:

    linalg        sparse exact linear algebra over the rationals
    diagrams      Jacobi diagrams on tangle/graph skeletons, canonical forms
    enumeration   brute-force diagram generation used for bases and oracles
    spaces        relation generators and quotient spaces, normal forms
    hopf          stacking product, coproduct, exp/log, primitives
    tangles       sliced tangle words and the truncated Kontsevich integral
    lmo           colored diagram spaces and the maps iota_n
    tqft          triplets, tau, the pairing ell, composition and gluing
    casson        degree-one layer: Casson-Walker-Lescop invariant
    cli           command line front end

Everything is computed over Fraction; there is no floating point anywhere.
"""

from .config import Config, DEFAULT_CONFIG

__all__ = ["Config", "DEFAULT_CONFIG"]

__version__ = "0.1.0"
