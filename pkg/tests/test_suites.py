from gradealg.suites import run_suites, suite_fin_algebra, suite_morita


def test_fin_algebra_suite():
    res = suite_fin_algebra(seed=1)
    assert res.passed, res.failures


def test_morita_suite():
    res = suite_morita(seed=0, max_vertices=3)
    assert res.passed, res.failures


def test_suites_are_deterministic():
    a = [r.to_json() for r in run_suites(["fin_algebra", "morita"], seed=5)]
    b = [r.to_json() for r in run_suites(["fin_algebra", "morita"], seed=5)]
    assert a == b and all(r["passed"] for r in a)
