#!/usr/bin/env python3
"""Noise sensitivity: how far does each skeleton drift under boundary noise?

For a few shapes, compares the skeleton of the clean shape against the
skeleton of progressively noisier versions, using the outlier-robust
average nearest-point distance.  Lower is better; the cosine-pruned
skeleton should degrade much more slowly than the raw medial axis.
"""

import numpy as np

from cpma import NoiseKind, NoiseSpec, apply_noise, dubuisson_jain, extract_cpma, extract_mat, thinning
from cpma.shapes import blob_2d, disc, l_shape

LEVELS = (2, 5, 10, 15, 20)
SEEDS = (0, 1, 2)


def main():
    shapes = {"disc": disc(96), "l_shape": l_shape(96, arm=64, thickness=20), "blob": blob_2d(96)}
    methods = {
        "mat": lambda g: extract_mat(g),
        "cpma": lambda g: extract_cpma(g)[0],
        "thinning": lambda g: thinning(g),
    }
    print(f"{'level':>5} " + " ".join(f"{m:>9}" for m in methods))
    for level in LEVELS:
        drift = {m: [] for m in methods}
        for name, g in shapes.items():
            refs = {m: fn(g) for m, fn in methods.items()}
            for seed in SEEDS:
                noisy = apply_noise(g, NoiseSpec(NoiseKind.CONTOUR_2D, level=level, seed=seed))
                for m, fn in methods.items():
                    drift[m].append(dubuisson_jain(fn(noisy).points, refs[m].points))
        print(f"{level:>5} " + " ".join(f"{np.mean(drift[m]):>9.3f}" for m in methods))
    print("\n(values are average nearest-point distances to the clean skeleton, in pixels)")


if __name__ == "__main__":
    main()
