"""Area decomposition of the map and the door-linked area graph.

Floor tiles are grouped into areas by connected-component labeling with
4-connectivity.  Door tiles are always treated as boundaries, whatever
their current state, so the decomposition is structural: toggling doors
never relabels the map, only beliefs about doors change planning.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import MalformedDoor, OutOfBounds, UnknownArea
from .world import TileKind, TilePos, WorldState


@dataclass(frozen=True)
class AreaDecomposition:
    """Labels per floor tile plus the door waypoints linking area pairs.

    Labels are contiguous 1..N, assigned in first-encounter row-major
    order.  Wall and door tiles carry label 0.  Each waypoint is
    ``(door_id, (area_lo, area_hi))`` with the area pair sorted.
    """

    labels: tuple[tuple[int, ...], ...]
    area_tiles: dict[int, int]
    waypoints: tuple[tuple[str, tuple[int, int]], ...]
    points_of_interest: dict[str, TilePos] = field(default_factory=dict)

    @property
    def area_ids(self) -> list[int]:
        return sorted(self.area_tiles)


@dataclass(frozen=True)
class AreaGraph:
    """Undirected multigraph: nodes are areas, edges are doors."""

    nodes: frozenset[int]
    edges: tuple[tuple[str, int, int], ...]

    def neighbors(self, area: int) -> list[tuple[str, int]]:
        """(door_id, other_area) pairs leaving ``area``, sorted by door id."""
        if area not in self.nodes:
            raise UnknownArea(f"no area {area}")
        out = []
        for door_id, a, b in self.edges:
            if a == area:
                out.append((door_id, b))
            elif b == area:
                out.append((door_id, a))
        return sorted(out)


def decompose_areas(world: WorldState) -> AreaDecomposition:
    """Label floor tiles into areas and derive the door waypoint list.

    Raises MalformedDoor for any door tile that does not adjoin exactly
    two distinct areas among its 4 neighbors; that is a map-authoring
    error and is reported rather than skipped.
    """
    labels = [[0] * world.width for _ in range(world.height)]
    area_tiles: dict[int, int] = {}
    next_label = 1
    for r in range(world.height):
        for c in range(world.width):
            if world.tiles[r][c].kind is not TileKind.FLOOR or labels[r][c]:
                continue
            label = next_label
            next_label += 1
            count = 0
            queue = deque([TilePos(r, c)])
            labels[r][c] = label
            while queue:
                pos = queue.popleft()
                count += 1
                for dr, dc in ((-1, 0), (0, 1), (1, 0), (0, -1)):
                    nr, nc = pos.row + dr, pos.col + dc
                    if not (0 <= nr < world.height and 0 <= nc < world.width):
                        continue
                    if labels[nr][nc] or world.tiles[nr][nc].kind is not TileKind.FLOOR:
                        continue
                    labels[nr][nc] = label
                    queue.append(TilePos(nr, nc))
            area_tiles[label] = count

    waypoints = []
    for door_id in world.door_ids():
        pos = world.objects[door_id].position
        adjoining = set()
        for dr, dc in ((-1, 0), (0, 1), (1, 0), (0, -1)):
            nr, nc = pos.row + dr, pos.col + dc
            if 0 <= nr < world.height and 0 <= nc < world.width and labels[nr][nc]:
                adjoining.add(labels[nr][nc])
        if len(adjoining) != 2:
            raise MalformedDoor(
                f"door {door_id!r} at {tuple(pos)} adjoins {len(adjoining)} "
                f"area(s), expected exactly 2"
            )
        lo, hi = sorted(adjoining)
        waypoints.append((door_id, (lo, hi)))

    return AreaDecomposition(
        labels=tuple(tuple(row) for row in labels),
        area_tiles=area_tiles,
        waypoints=tuple(waypoints),
        points_of_interest=dict(world.pois),
    )


def area_of(decomp: AreaDecomposition, pos: TilePos) -> int | None:
    """Area label for a floor tile, None for walls and doors."""
    if not (0 <= pos.row < len(decomp.labels) and 0 <= pos.col < len(decomp.labels[0])):
        raise OutOfBounds(f"{pos} outside labeled grid")
    return decomp.labels[pos.row][pos.col] or None


def build_area_graph(decomp: AreaDecomposition) -> AreaGraph:
    edges = tuple((door_id, a, b) for door_id, (a, b) in decomp.waypoints)
    return AreaGraph(nodes=frozenset(decomp.area_tiles), edges=edges)


def dump_labels(world: WorldState, decomp: AreaDecomposition) -> str:
    """Text block for golden tests: area label mod 10, 'D' doors, '#' walls."""
    out = []
    for r in range(world.height):
        chars = []
        for c in range(world.width):
            kind = world.tiles[r][c].kind
            if kind is TileKind.WALL:
                chars.append("#")
            elif kind is TileKind.DOOR:
                chars.append("D")
            else:
                chars.append(str(decomp.labels[r][c] % 10))
        out.append("".join(chars))
    return "\n".join(out)
