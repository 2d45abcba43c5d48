#!/usr/bin/env python3
"""Regenerate the committed test fixtures in tests/fixtures/.

All fixtures are produced by deterministic generators in cpma.shapes, so
rerunning this script must leave the tree unchanged (checked by the test
suite).  2D shapes are 128x128 PBM images, 3D shapes are 48^3 VOX
volumes, and the two meshes are ASCII PLY files.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from cpma import shapes  # noqa: E402
from cpma.grid import save_grid  # noqa: E402

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "..", "tests", "fixtures")

GRIDS_2D = {
    "disc": lambda: shapes.disc(128),
    "rectangle": lambda: shapes.rectangle(128),
    "l_shape": lambda: shapes.l_shape(128),
    "rectangle_with_bump": lambda: shapes.rectangle_with_bump(128),
    "star": lambda: shapes.star(128),
    "quadruped": lambda: shapes.quadruped(128),
    "blob": lambda: shapes.blob_2d(128),
}

GRIDS_3D = {
    "box": lambda: shapes.box_3d(48),
    "l_prism": lambda: shapes.l_prism(48),
    "cylinder": lambda: shapes.cylinder(48),
}

MESHES = {
    "cube": shapes.cube_mesh,
    "sphere": lambda: shapes.icosphere_mesh(subdivisions=3),
}


def write_ply(mesh, path):
    with open(path, "w") as fh:
        fh.write("ply\nformat ascii 1.0\n")
        fh.write(f"element vertex {len(mesh.vertices)}\n")
        fh.write("property float x\nproperty float y\nproperty float z\n")
        fh.write(f"element face {len(mesh.faces)}\n")
        fh.write("property list uchar int vertex_indices\nend_header\n")
        for v in mesh.vertices:
            fh.write(f"{v[0]:.9g} {v[1]:.9g} {v[2]:.9g}\n")
        for f in mesh.faces:
            fh.write(f"3 {f[0]} {f[1]} {f[2]}\n")


def main():
    os.makedirs(FIXTURE_DIR, exist_ok=True)
    for name, gen in GRIDS_2D.items():
        save_grid(gen(), os.path.join(FIXTURE_DIR, f"{name}.pbm"))
    for name, gen in GRIDS_3D.items():
        save_grid(gen(), os.path.join(FIXTURE_DIR, f"{name}.vox"))
    for name, gen in MESHES.items():
        write_ply(gen(), os.path.join(FIXTURE_DIR, f"{name}.ply"))
    print(f"wrote {len(GRIDS_2D) + len(GRIDS_3D) + len(MESHES)} fixtures to {FIXTURE_DIR}")


if __name__ == "__main__":
    main()
