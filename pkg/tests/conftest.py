from __future__ import annotations

import mpmath
import pytest

from ramasum.numeric import PrecisionContext


@pytest.fixture
def ctx() -> PrecisionContext:
    return PrecisionContext(256)


@pytest.fixture
def ctx128() -> PrecisionContext:
    return PrecisionContext(128)


def oracle(dps: int = 80):
    """Independent mpmath context at its own precision."""
    return mpmath.workdps(dps)
