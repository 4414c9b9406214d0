import json

import pytest

from uniholder.verify import SUITES, run_suite


@pytest.mark.parametrize("name", ["theta", "gap", "meyer", "cex1", "fabe"])
def test_fast_suites_pass(name):
    result = run_suite(name)
    assert result.passed, json.dumps(result.to_dict(), indent=1)
    assert result.elapsed >= 0
    assert json.loads(json.dumps(result.to_dict()))["suite"] == name


def test_suite_lookup():
    assert set(SUITES) >= {"theta", "criterion-equivalence", "meyer", "cex1", "fabe", "monofractal"}
    with pytest.raises(KeyError):
        run_suite("nope")
    result = run_suite("gap")
    assert result.check("criterion_upper_index").measured["value"] == pytest.approx(0.5, abs=0.03)
    with pytest.raises(KeyError):
        result.check("missing")
