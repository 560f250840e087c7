"""Verdier and Gorenstein* deciders for finite posets.

Exact chain-level models for homotopy limits of poset diagrams, the
sheaf-to-cosheaf duality functor, and executable checks of the equivalence
between the vanishing and Gorenstein* characterizations.
"""
__version__ = "0.1.0"
