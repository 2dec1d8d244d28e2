"""Shared Hypothesis settings tiers.

Usage:
    from tests.settings import STANDARD_SETTINGS

    @given(matrix=small_matrices())
    @STANDARD_SETTINGS
    def test_something(matrix):
        ...

Tiers:
- EXHAUSTIVE_SETTINGS: 1000 examples - normal form suites, evenness of the Kummer lattice
- ORACLE_SETTINGS: 500 examples - agreement with brute-force enumeration
- STANDARD_SETTINGS: 100 examples - regular property tests
- QUICK_SETTINGS: 20 examples - properties running sympy on 16x16 lattices
"""

from hypothesis import HealthCheck, settings

EXHAUSTIVE_SETTINGS = settings(max_examples=1000, deadline=None, suppress_health_check=[HealthCheck.too_slow])
ORACLE_SETTINGS = settings(max_examples=500, deadline=None)
STANDARD_SETTINGS = settings(max_examples=100, deadline=None)
QUICK_SETTINGS = settings(max_examples=20, deadline=None)
