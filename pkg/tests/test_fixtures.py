"""The committed fixtures must match their generators bit for bit."""

import os
import subprocess
import sys

from conftest import FIXTURE_DIR, SUITE_2D, SUITE_3D, load_fixture

TOOL = os.path.join(os.path.dirname(__file__), "..", "tools", "make_fixtures.py")


def test_fixture_files_present():
    names = sorted(os.listdir(FIXTURE_DIR))
    assert names == sorted(
        [f"{n}.pbm" for n in SUITE_2D] + [f"{n}.vox" for n in SUITE_3D] + ["cube.ply", "sphere.ply"]
    )


def test_regeneration_is_deterministic(tmp_path):
    before = {
        name: open(os.path.join(FIXTURE_DIR, name), "rb").read()
        for name in os.listdir(FIXTURE_DIR)
    }
    subprocess.run([sys.executable, TOOL], check=True, capture_output=True)
    after = {
        name: open(os.path.join(FIXTURE_DIR, name), "rb").read()
        for name in os.listdir(FIXTURE_DIR)
    }
    assert before == after


def test_fixture_sizes():
    for name in SUITE_2D:
        assert load_fixture(name).dims == (128, 128)
    for name in SUITE_3D:
        assert load_fixture(name).dims == (48, 48, 48)
