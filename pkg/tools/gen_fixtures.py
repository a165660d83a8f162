"""Regenerate the packaged fixture documents from the builders."""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from photonlab.fixtures import fixture_board, fixture_names
from photonlab.setupdoc import save

out_dir = pathlib.Path(__file__).resolve().parent.parent / "src/photonlab/data/fixtures"
out_dir.mkdir(parents=True, exist_ok=True)

for stale in out_dir.glob("*.json"):
    stale.unlink()

for name in fixture_names():
    save(fixture_board(name), out_dir / f"{name}.json")
    print(name)
