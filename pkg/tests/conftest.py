"""Shared fixtures; the expensive tables are built once per session."""

from __future__ import annotations

import pytest

import lpfstat as L


@pytest.fixture(scope="session")
def rho_table() -> L.RhoTable:
    return L.build_rho_table()


@pytest.fixture(scope="session")
def prime_table() -> L.PrimeTable:
    return L.build_prime_table(200_000)
