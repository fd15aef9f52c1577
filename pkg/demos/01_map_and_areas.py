"""Parse the canonical map and look at its area decomposition.

The map is a plain ASCII document: '#' walls, '.' floor, lowercase
letters are doors, '@' is the NPC start, uppercase letters are points of
interest.  Doors are always area boundaries, whatever their state, so the
decomposition never changes while doors open and close -- only beliefs do.
"""

from pathlib import Path

from gridagents import build_area_graph, decompose_areas, dump_labels, parse_map

map_text = (Path(__file__).parent / "data" / "canonical.map").read_text()
world = parse_map(map_text)

print("The map as written:")
print(map_text)

decomp = decompose_areas(world)
print("Connected-component labels (doors shown as D):")
print(dump_labels(world, decomp))
print()
print(f"Areas and their sizes: {decomp.area_tiles}")
print(f"Door waypoints (door, area pair): {list(decomp.waypoints)}")
print(f"Points of interest: {decomp.points_of_interest}")

graph = build_area_graph(decomp)
print()
print("Area graph adjacency:")
for area in sorted(graph.nodes):
    print(f"  area {area}: {graph.neighbors(area)}")
print()
print("Three areas joined in a triangle: the left room, the right room,")
print("and the corridor below, with doors a, b, c as the only crossings.")
