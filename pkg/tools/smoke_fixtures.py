import math
import sys

sys.path.insert(0, "src")

from photonlab.engine import SimConfig, run_tree
from photonlab.fixtures import fixture_board, fixture_names

for name in fixture_names():
    board = fixture_board(name)
    tree = run_tree(board, SimConfig(max_steps=60))
    det = tree.detector_probabilities()
    defect = tree.conservation_defect()
    total = tree.explored_probability() + tree.truncated_probability()
    print(f"== {name}  leaves={len(tree.leaves())} defect={defect:.2e} total={total:.12f}")
    for det_name, p in sorted(det.items()):
        print(f"   {det_name:12s} {p:.6f}")

print("\nexpected references:")
print("  zeno-2", math.cos(math.pi / 4) ** 4)
print("  zeno-4", math.cos(math.pi / 8) ** 8)
print("  zeno-8", math.cos(math.pi / 16) ** 16)
print("  discrimination", math.cos(math.pi / 8) ** 2)
print("  ND probe dark", 0.5 / 4 + (1 - math.sqrt(0.5)) ** 2 / 4)
