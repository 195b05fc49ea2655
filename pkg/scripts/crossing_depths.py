"""Crossing depths of the cataloged l_p witnesses against l_q.

For each (p, q) the witness x_n = n^(-1/p) log(n+1)^(-2/p) is scanned until
its partial q-power sum exceeds the threshold.  Prints one row per pair.

    python3 scripts/crossing_depths.py --threshold 1000 --n-max 100000000
"""
import argparse
import time

from seqspace.norms import SpaceDescriptor, divergence_certificate
from seqspace.spaceability import AvoidanceSet, witness_catalog


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--threshold", type=float, default=1e3)
    ap.add_argument("--n-max", type=int, default=10**8)
    ap.add_argument("--pairs", default="0.5:0.25,1:0.5,2:1,2:0.5,4:2",
                    help="comma-separated p:q pairs with q < p")
    args = ap.parse_args()
    print(f"{'p':>5} {'q':>5} {'||x||_p <=':>12} {'depth':>12} {'q-sum':>12} {'L_q(depth)':>12} {'sec':>6}")
    for pair in args.pairs.split(","):
        p, q = (float(v) for v in pair.split(":"))
        w = witness_catalog(SpaceDescriptor.lp(p), AvoidanceSet.union_lq([q]))
        if not w:
            print(f"{p:5g} {q:5g}  {w.reason}")
            continue
        upper = w.home.certified_upper(w.sequence, 1000, w.envelope).value
        t0 = time.perf_counter()
        cert = divergence_certificate(w.sequence, q, args.threshold, args.n_max)
        sec = time.perf_counter() - t0
        bound = w.profiles[q](cert.depth) if cert.reached else float("nan")
        depth = cert.depth if cert.reached else f">{args.n_max}"
        print(f"{p:5g} {q:5g} {upper:12.6g} {depth:>12} {cert.value:12.6g} {bound:12.6g} {sec:6.1f}")


if __name__ == "__main__":
    main()
