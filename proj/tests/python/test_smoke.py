import sys

import qsep


def main():
    assert qsep.genus(3, 2) == 4
    assert [k for _, k, _ in qsep.index_map(3, 2)] == [1, 2, 2, 2]
    assert qsep.check_ybe(2)
    d = qsep.dimension_report(3, 2)
    assert d["ok"] and d["dim_M"] == 12
    table = qsep.bracket_table(2, 1)
    assert table["l0_11,l0_12"] == "(-1/2)*l0_11*l0_12"
    samples, violations, singular = qsep.classical_reduce_batch(3, 1, 20, 5)
    assert samples == 20 and violations == 0
    assert "ybe" in qsep.suite_names()
    rep = qsep.run_suite("ybe", N="2..3")
    statuses = {r["status"] for r in rep["records"]}
    assert statuses == {"pass"}, statuses
    print("python smoke ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
