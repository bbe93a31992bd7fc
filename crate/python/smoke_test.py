"""Smoke test for the del_py extension.

Build and install first:

    pip install --no-build-isolation ./crates/python
"""

import math
import sys
import tempfile

import del_py


def close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    failures = []

    def check(name, ok):
        print(f"{'PASS' if ok else 'FAIL'} {name}")
        if not ok:
            failures.append(name)

    check("log_gamma(0.5)", close(del_py.log_gamma(0.5), 0.5 * math.log(math.pi), 1e-14))
    check("kummer_m(1, 2, 1) = e - 1", close(del_py.kummer_m(1.0, 2.0, 1.0), math.e - 1.0, 1e-14))
    check("tricomi_u(1, 1, 1) = e E1(1)", close(del_py.tricomi_u(1.0, 1.0, 1.0), 0.5963473623231940, 1e-12))
    w = [del_py.wronskian(t) * math.exp(t) for t in (0.5, 2.0, 8.0)]
    check("wronskian constant", max(w) - min(w) < 1e-12)
    check("wronskian value", close(w[0], -1.0 / math.gamma(0.75), 1e-12))

    a, b, edge = del_py.barenblatt(2.0)
    check("barenblatt support", close(edge, math.sqrt(a / b), 1e-14))
    gaps = [del_py.limit_gap(g, points=4001) for g in (2.0, 1.5, 1.1)]
    check("limit gap decreasing", gaps[0] > gaps[1] > gaps[2])

    tau, tau_dot = del_py.tau([0.0, 0.1, 1e4])
    check("tau(0) = 1", tau[0] == 1.0 and tau_dot[0] == 0.0)
    check("tau(0.1)", abs(tau[1] - 1.009667) < 1e-5)
    check("tau asymptotics", abs(tau[2] / 200.0 - 1.0) < 0.05)

    with tempfile.TemporaryDirectory() as d:
        passed, checks, files = del_py.run_experiment("name = tau-study\nsamples = 50\n", d)
        check("run_experiment tau-study", passed and all(checks.values()) and len(files) >= 3)
    check("experiments listed", "figure1" in del_py.experiments())

    try:
        del_py.run_experiment("name = bogus")
        check("bad config raises", False)
    except ValueError:
        check("bad config raises", True)

    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
