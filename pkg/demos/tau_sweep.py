#!/usr/bin/env python3
"""Threshold sweep: reconstruction quality vs. skeleton size across tau.

Shows the knee that motivates the default threshold of 0.47: raising tau
sheds low-score (noise-prone) skeleton points quickly while the
reconstruction quality stays essentially flat, until the threshold
starts eating structural branches.
"""

from cpma import jaccard, reconstruct, score_function
from cpma.distfield import edt
from cpma.shapes import l_shape, rectangle
from cpma.skeleton import MedialAxisTransform

TAUS = (0.05, 0.1, 0.2, 0.3, 0.4, 0.47, 0.55, 0.65, 0.75, 0.85)


def main():
    for name, g in (("rectangle", rectangle(96, height=20, width=68)),
                    ("l_shape", l_shape(96, arm=64, thickness=20))):
        field = score_function(g)
        dist = edt(g).dist
        print(f"{name}:")
        print(f"{'tau':>6} {'points':>7} {'jaccard':>8}")
        for tau in TAUS:
            mat = MedialAxisTransform.from_mask((field > tau) & g.data, dist)
            j = jaccard(reconstruct(mat, g.dims), g)
            marker = "  <- default" if tau == 0.47 else ""
            print(f"{tau:>6.2f} {len(mat):>7} {j:>8.4f}{marker}")
        print()


if __name__ == "__main__":
    main()
