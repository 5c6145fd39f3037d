import pytest

from cli.app import run
from cli.verify import CRITERIA, CriterionFailed, Suite, check_trace, expect, run_suite


def test_criteria_are_numbered_in_order():
    assert [c.index for c in CRITERIA] == list(range(1, len(CRITERIA) + 1))
    assert {c.suite for c in CRITERIA} == {"paper-examples", "properties"}


def test_expect():
    expect(True, "unused")
    with pytest.raises(CriterionFailed, match="broken"):
        expect(False, "broken")


def test_suite_rng_is_seeded():
    ra, rb = Suite(seed=3).rng(1), Suite(seed=3).rng(1)
    assert [ra.random() for _ in range(3)] == [rb.random() for _ in range(3)]
    assert Suite(seed=3).rng(2).random() != Suite(seed=3).rng(1).random()


def test_tampered_ring_is_detected():
    suite = Suite(fault="marks-table")
    assert suite.ring("S3").table.rows[0][0] == 7


@pytest.mark.slow
def test_acceptance_suite_passes():
    report = run_suite("all")
    assert report.ok, report.tables[0].rows
    assert report.flags["failed"] == "none"
    assert report.flags["criteria"] == len(CRITERIA)


@pytest.mark.slow
def test_injected_fault_fails_the_run():
    assert run(["verify", "--suite", "paper-examples", "--inject-fault", "marks-table"]) == 1


@pytest.mark.slow
def test_trace_criterion_handles_even_index():
    assert "fixed units" in check_trace(Suite())
