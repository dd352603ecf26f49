"""Idempotent (max-plus) probability measures on finite metric spaces.

Scalars are ``fractions.Fraction``; the bottom element is ``float("-inf")``.
Inputs accept ints, Fractions, ``"p/q"`` strings and ``"-inf"``.
"""

from ._core import (
    Coupling,
    IdemError,
    Measure,
    Space,
    Tower,
    chebyshev,
    check_names,
    d_plus,
    dirac,
    dirac_distance,
    dirac_set_distance,
    distance,
    eta,
    eta_nm,
    eval_formula1,
    feasible,
    level_distance,
    limit_rep,
    load,
    oracle_distance,
    p7_check,
    product_coupling,
    psi,
    psi_mn,
    pushforward,
    q_embed,
    run_suite,
    theta,
)

BOTTOM = float("-inf")

__all__ = [name for name in dir() if not name.startswith("_")]
