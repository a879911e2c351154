from fewnomial.campaign import CLASSES, campaign_jobs, instance_seed, run_campaign, run_instance


def test_jobs_cycle_through_classes():
    jobs = campaign_jobs(8, 5)
    assert [(n, k) for _, n, k, _ in jobs] == list(CLASSES) * 2
    assert jobs[3][3] == instance_seed(5, 3)


def test_instance_result_fields():
    r = run_instance((0, 1, 1, 42))
    assert r.match and r.kr_count == r.oracle_count <= 3
    assert r.oracle_count <= r.kouchnirenko


def test_parallel_equals_serial():
    a = run_campaign("small", seed=9, size=8, jobs=1).to_dict()
    b = run_campaign("small", seed=9, size=8, jobs=2).to_dict()
    assert a == b
    assert a["mismatches"] == 0 and a["ledger_violations"] == 0
