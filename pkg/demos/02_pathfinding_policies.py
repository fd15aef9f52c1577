"""One A* engine, three views of the same doors.

The pathfinder is parameterized by a passability policy.  Ground truth
answers "can anything actually walk this?", beliefs answer "does this NPC
think it can?", and ignore-doors is the classic engine-wide pathfinder
that pretends obstacles do not exist.
"""

from pathlib import Path

from gridagents import (
    GROUND_TRUTH,
    IGNORE_DOORS,
    DoorState,
    TilePos,
    astar,
    beliefs_policy,
    decompose_areas,
    init_beliefs,
    parse_map,
    path_cost,
    set_door_state,
)

map_text = (Path(__file__).parent / "data" / "canonical.map").read_text()
world = parse_map(map_text)
start, goal = TilePos(2, 1), TilePos(2, 9)


def show(label, path):
    if path is None:
        print(f"  {label}: no path")
    else:
        print(f"  {label}: cost {path_cost(path)} via {[tuple(p) for p in path[1:-1]]}")


print("All doors closed in ground truth:")
show("ground truth", astar(world, start, goal, GROUND_TRUTH))
show("ignore doors", astar(world, start, goal, IGNORE_DOORS))
print("  (the ignore-doors route happily runs through the closed door a)")
print()

beliefs = init_beliefs(decompose_areas(world))
print("A fresh NPC believes every door closed:")
show("beliefs", astar(world, start, goal, beliefs_policy(beliefs)))
print()

set_door_state(world, "a", DoorState.OPEN)
print("Door a opens in ground truth, but the NPC has not seen it:")
show("ground truth", astar(world, start, goal, GROUND_TRUTH))
show("beliefs", astar(world, start, goal, beliefs_policy(beliefs)))
print()

beliefs.update("a", DoorState.OPEN, tick=1)
print("After the NPC observes door a open:")
show("beliefs", astar(world, start, goal, beliefs_policy(beliefs)))
