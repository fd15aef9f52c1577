"""Tile-level A* search parameterized by a passability policy.

One engine serves three callers: ground-truth routing, belief-based
routing (doors passable iff believed open), and door-oblivious routing.
Walls are impassable under every policy.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Protocol

from .errors import OutOfBounds, StartBlocked
from .world import DoorState, TileKind, TilePos, WorldState

Path = list[TilePos]


class DoorBeliefs(Protocol):
    def is_open(self, door_id: str) -> bool: ...


@dataclass(frozen=True)
class PassabilityPolicy:
    """Decides how door tiles are treated; everything else is terrain.

    mode 'ground_truth': doors passable iff actually open.
    mode 'beliefs':      doors passable iff the given beliefs say open.
    mode 'ignore_doors': doors always passable (the door-blind baseline).
    """

    mode: str
    beliefs: DoorBeliefs | None = None

    def allows(self, world: WorldState, pos: TilePos) -> bool:
        if not world.in_bounds(pos):
            return False
        tile = world.tiles[pos.row][pos.col]
        if tile.kind is TileKind.WALL:
            return False
        if tile.kind is TileKind.FLOOR:
            return True
        if self.mode == "ignore_doors":
            return True
        if self.mode == "beliefs":
            return self.beliefs.is_open(tile.door_id)
        return world.objects[tile.door_id].state is DoorState.OPEN


GROUND_TRUTH = PassabilityPolicy("ground_truth")
IGNORE_DOORS = PassabilityPolicy("ignore_doors")


def beliefs_policy(beliefs: DoorBeliefs) -> PassabilityPolicy:
    return PassabilityPolicy("beliefs", beliefs)


def astar(
    world: WorldState, start: TilePos, goal: TilePos, policy: PassabilityPolicy
) -> Path | None:
    """Minimum-cost 4-connected path from start to goal, or None.

    Unit edge costs, Manhattan heuristic.  The open list is ordered by
    (f, h, row, col) so ties resolve identically on every run.
    """
    if not world.in_bounds(goal):
        raise OutOfBounds(f"goal {goal} out of bounds")
    if not policy.allows(world, start):
        raise StartBlocked(f"start {start} is not passable under {policy.mode}")
    if start == goal:
        return [start]

    def h(pos: TilePos) -> int:
        return abs(pos.row - goal.row) + abs(pos.col - goal.col)

    open_list: list[tuple[int, int, int, int]] = []
    heapq.heappush(open_list, (h(start), h(start), start.row, start.col))
    g = {start: 0}
    parent: dict[TilePos, TilePos] = {}
    closed: set[TilePos] = set()
    while open_list:
        _, _, row, col = heapq.heappop(open_list)
        current = TilePos(row, col)
        if current in closed:
            continue
        if current == goal:
            path = [current]
            while current in parent:
                current = parent[current]
                path.append(current)
            path.reverse()
            return path
        closed.add(current)
        for dr, dc in ((-1, 0), (0, 1), (1, 0), (0, -1)):
            nxt = TilePos(row + dr, col + dc)
            if nxt in closed or not policy.allows(world, nxt):
                continue
            tentative = g[current] + 1
            if tentative < g.get(nxt, 1 << 30):
                g[nxt] = tentative
                parent[nxt] = current
                hn = h(nxt)
                heapq.heappush(open_list, (tentative + hn, hn, nxt.row, nxt.col))
    return None


def path_cost(path: Path) -> int:
    return len(path) - 1


def path_is_valid(world: WorldState, path: Path, policy: PassabilityPolicy) -> bool:
    """True iff every tile is passable under the policy and steps are 4-adjacent."""
    if not path:
        return False
    for pos in path:
        if not policy.allows(world, pos):
            return False
    for a, b in zip(path, path[1:]):
        if abs(a.row - b.row) + abs(a.col - b.col) != 1:
            return False
    return True
