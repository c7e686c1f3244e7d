"""Write bimodule spec files for A and End_A(A + P_extra), for `katohull morita-check`."""
import argparse
import json
from pathlib import Path

from katohull.morita import morita_pair
from katohull.specs import algebra_to_spec, bimodule_to_spec, parse_algebra, read_json


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--algebra", required=True)
    ap.add_argument("--extra", default="0", help="comma-separated projective indices added to A")
    ap.add_argument("--out", default=".")
    args = ap.parse_args()

    a = parse_algebra(read_json(args.algebra))
    extra = tuple(int(t) for t in args.extra.split(",")) if args.extra else ()
    pair = morita_pair(a, extra)
    a_spec, b_spec = algebra_to_spec(pair.a), algebra_to_spec(pair.b)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "m.json").write_text(json.dumps(bimodule_to_spec(pair.m, a_spec, b_spec)))
    (out / "n.json").write_text(json.dumps(bimodule_to_spec(pair.n, b_spec, a_spec)))
    print(f"B has dimension {pair.b.dim}; wrote {out / 'm.json'} and {out / 'n.json'}")


if __name__ == "__main__":
    main()
