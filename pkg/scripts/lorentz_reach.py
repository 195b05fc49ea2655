"""How far the provisional Lorentz witnesses get towards a divergence threshold.

Differences l_{s,r} - l_q diverge slowly (for q = s only like a power of
log N), so the q-sum reached within N_max is reported next to the analytic
lower profile rather than a pass/fail verdict.

    python3 scripts/lorentz_reach.py --n-max 10000000
"""
import argparse

from seqspace.norms import SpaceDescriptor, divergence_certificate
from seqspace.spaceability import AvoidanceSet, witness_catalog

CASES = [(2, 1, 1), (1, 2, 1), (2, 2, 1), (1, 0.5, 0.5), (0.5, 1, 0.25), (2, 4, 2)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=10**7)
    ap.add_argument("--threshold", type=float, default=1e3)
    args = ap.parse_args()
    print(f"{'space':>10} {'q':>5} {'gamma':>6} {'||x|| <=':>10} {'q-sum':>12} {'profile':>10} {'reached':>8}")
    for s, r, q in CASES:
        space = SpaceDescriptor.lorentz(s, r)
        w = witness_catalog(space, AvoidanceSet.union_lq([q]))
        if not w:
            print(f"{space.name:>10} {q:5g}  {w.reason}")
            continue
        upper = space.certified_upper(w.sequence, 1000, w.envelope).value
        cert = divergence_certificate(w.sequence, q, args.threshold, args.n_max)
        N = cert.depth or args.n_max
        print(f"{space.name:>10} {q:5g} {w.params['gamma']:6.3g} {upper:10.5g} {cert.value:12.6g} "
              f"{w.profiles[q](N):10.5g} {str(cert.reached):>8}")


if __name__ == "__main__":
    main()
