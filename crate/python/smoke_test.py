"""Smoke test for the slopepy extension module.

Build with `cargo build --release -p slope-py`, copy
target/release/libslopepy.so next to this file as slopepy.so, then run
`python3 python/smoke_test.py`.
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import slopepy


def main():
    assert len(slopepy.methods()) == 8
    assert "forest" in slopepy.worlds()

    m = slopepy.GridMap(["...", ".@.", "..."])
    assert (m.width, m.height) == (3, 3)
    assert m.start == (0, 0) and m.goal == (2, 2)
    assert not m.is_free(1, 1)

    gt = slopepy.ground_truth(m)
    assert gt["optimal_cost_exact"] == (2, 1)
    assert gt["ratings"][0] == 1.0

    rec = slopepy.plan(m, "h_EUC")
    assert rec["status"] == "success"
    assert rec["path"][0] == (0, 0) and rec["path"][-1] == (2, 2)
    assert math.isclose(rec["path_cost"], 2 + math.sqrt(2))

    forest = slopepy.GridMap.generate("forest", 32, seed=7)
    again = slopepy.GridMap.parse(forest.to_text(), id=forest.id)
    assert again.to_text() == forest.to_text()

    gt_run = slopepy.plan(forest, "SLOPE_GT")
    assert gt_run["status"] == "success"
    assert gt_run["path_rel_err"] <= 1.0

    zeros = [0.0] * (forest.width * forest.height)
    pruned = slopepy.plan(forest, "SLOPE", ratings=zeros)
    assert pruned["status"] == "success" and pruned["failsafe_count"] >= 1

    exact = slopepy.plan(forest, "h_ML")
    assert exact["path_rel_err"] == 0.0

    try:
        slopepy.plan(forest, "SLOPE")
    except ValueError:
        pass
    else:
        raise AssertionError("SLOPE without ratings should fail")

    print("slopepy smoke test passed:", gt_run["method"], gt_run["open_norm"])


if __name__ == "__main__":
    main()
