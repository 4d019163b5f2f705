"""Import the compiled `hecke` module and exercise each binding once."""

import json
import sys

import hecke


def main() -> int:
    a1 = json.loads(hecke.root_datum("a1"))
    assert a1["rank"] == 1, a1

    ce = json.loads(hecke.counterexample())
    assert ce, "empty counterexample report"

    sat = json.loads(hecke.satake_check("a1", 0))
    assert sat["kernel_dimension"] == 1 and sat["all_central"], sat
    terms = sat["basis"][0]["terms"]
    assert terms == [{"lambda": [0], "w": [], "coeff": "1"}], terms

    torus = json.loads(hecke.torus_center("gl2", 3, 1))
    assert torus, "empty torus report"

    cliff = json.loads(hecke.clifford())
    statuses = {c["status"] for c in cliff["checks"]}
    assert statuses == {"PASS"}, statuses

    try:
        hecke.root_datum("e9")
    except ValueError as e:
        assert "unknown root datum" in str(e)
    else:
        raise AssertionError("unknown datum accepted")

    print(f"hecke {hecke.__version__}: smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
