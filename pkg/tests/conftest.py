import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hasse_sieve.construct import construct_deg4, construct_even  # noqa: E402

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def cert_even():
    return construct_even(7, 8, 3)


@pytest.fixture(scope="session")
def cert_deg4():
    return construct_deg4(79, 8)


def load_table():
    rows = []
    for line in (DATA / "pure_cubic.txt").read_text().splitlines():
        if line.startswith("#") or not line.strip():
            continue
        P, a, b, c, h = map(int, line.split())
        rows.append((P, (a, b, c), h))
    return rows
