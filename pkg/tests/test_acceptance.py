"""The nine acceptance criteria, at exact equality.

Each criterion contributes one PASS/FAIL line, printed in the pytest terminal
summary (see ``conftest.py``) and by ``python tests/test_acceptance.py``.  Criterion 9 bundles three checks; its chain sweep turns
up chains that satisfy the per-step bound but violate the 2-adic chain bound.
That part is a recorded finding against the generation recursion and is
marked as an expected failure, so the criterion line stays FAIL.
"""

import pytest

from steenrod_charp import checks


LINES = {}


def _run(check):
    result = check()
    LINES[result.number] = result.line()
    print(result.line())
    return result


@pytest.mark.parametrize(
    "check",
    [
        checks.check_adem_quadrics,
        checks.check_adem_odd_projspace,
        checks.check_cartan,
        checks.check_power_and_instability,
        checks.check_wu_oracle,
        checks.check_tau_square,
        checks.check_rost,
        checks.check_pinned_forms,
    ],
    ids=lambda f: f.__name__,
)
def test_criterion(check):
    result = _run(check)
    assert result.passed, result.detail


def test_criterion_9_hoffmann_and_inq():
    result = _run(checks.check_qforms)
    for part in ("hoffmann", "inq"):
        ok, msg = result.parts[part]
        assert ok, msg


@pytest.mark.xfail(strict=True, reason="per-step Hoffmann recursion generates chains the 2-adic bound rejects")
def test_criterion_9_chain_sweep():
    result = checks.check_qforms()
    ok, msg = result.parts["chains"]
    assert ok, msg


if __name__ == "__main__":
    for r in checks.run_all():
        print(r.line())
