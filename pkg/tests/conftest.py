import random
from pathlib import Path

import pytest

from elgamal_image import keys
from elgamal_image.keys import PrivateKey

FIXTURE_DIR = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixture_dir():
    return FIXTURE_DIR


def toy_private(p, a, r=None):
    """Private key over ``p`` with its smallest primitive root."""
    from elgamal_image import modmath
    return PrivateKey(p=p, r=r or modmath.find_primitive_root(p), a=a)


@pytest.fixture(scope="session")
def keypair64():
    return keys.generate_keypair(64, random.Random(2024))


_CRITERIA = {
    "ac1": "roundtrip fidelity (64-bit key, both modes, < 10 s each way)",
    "ac2": "scalar known-answer trace p=7 r=3 a=2 m=4 k=3",
    "ac3": "number-theory oracle equivalence",
    "ac4": "primitive root 3 of 7, phi(7) = 6",
    "ac5": "ciphertext randomness proxy (entropy >= 7.9, |corr| <= 0.05)",
    "ac6": "paper-mode equal-pixel leakage",
    "ac7": "BSGS key recovery, p < 2^20, < 5 s",
    "ac8": "container roundtrip and golden bytes",
}


def pytest_terminal_summary(terminalreporter):
    results = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_ac" not in nodeid:
                continue
            key = nodeid.split("::test_")[1][:3]
            ok = outcome == "passed"
            results[key] = results.get(key, True) and ok
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        status = "PASS" if results[key] else "FAIL"
        terminalreporter.write_line(f"{status}  {key.upper()}  {_CRITERIA.get(key, '')}")
