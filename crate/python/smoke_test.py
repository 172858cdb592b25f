"""Smoke test for the sl2q extension module. Build it first with
`maturin build --release -m crates/py/Cargo.toml` and install the wheel."""

import json
from fractions import Fraction

import sl2q


def main():
    m = sl2q.Mtc(5)
    assert len(m) == 74 and m.order == 120
    dims = [m.info(x)[1] for x in m.simples()]
    assert sum(d * d for d in dims) == 120 ** 2

    closed = m.fuse("A:1:1", "C:1:1")
    assert closed == m.oracle_fuse("A:1:1", "C:1:1")
    assert sum(n * m.info(x)[1] for x, n in closed) == m.info("A:1:1")[1] * m.info("C:1:1")[1]

    md = m.modular_data()
    assert md.relations_ok
    assert md.s("E:+:1", "E:+:1") == "1/120"
    assert md.anomaly() == "1"
    re, im = md.s_complex("E:+:1", "A:1:1")
    assert abs(re - 1 / 4) < 1e-12 and abs(im) < 1e-12

    assert Fraction(*m.dw("t3")) == 74
    assert Fraction(*m.dw("lens:3:1")) == Fraction(7, 40)

    checks = sl2q.verify(5, "fields", 7)
    assert checks and all(ok for _, _, ok in checks)

    code, out, _ = sl2q.run_cli(["verify", "5", "--suite", "dw", "--seed", "7"])
    report = json.loads(out)
    assert code == 0 and report["schema"] == sl2q.SCHEMA and report["seed"] == 7

    try:
        sl2q.Mtc(7)
    except ValueError:
        pass
    else:
        raise AssertionError("q = 7 should be rejected")
    print("smoke test passed")


if __name__ == "__main__":
    main()
