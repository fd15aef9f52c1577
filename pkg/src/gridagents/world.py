"""Ground-truth grid world: map parsing, doors, NPC poses, and movement.

The world holds the single authoritative state of a simulation.  Agent
beliefs live elsewhere and are updated only through perception, never by
the mutators in this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, NamedTuple

from .errors import (
    DuplicateDoorId,
    DuplicatePoi,
    NoNpcStart,
    OutOfBounds,
    RaggedMap,
    UnknownDoor,
    UnknownGlyph,
    UnknownNpc,
)

DEFAULT_NPC_ID = "npc0"


class TilePos(NamedTuple):
    """Grid position, row-major from the top-left of the ASCII map."""

    row: int
    col: int


class Facing(Enum):
    N = (-1, 0)
    E = (0, 1)
    S = (1, 0)
    W = (0, -1)

    @property
    def delta(self) -> tuple[int, int]:
        return self.value

    @classmethod
    def from_delta(cls, dr: int, dc: int) -> "Facing":
        for facing in cls:
            if facing.value == (dr, dc):
                return facing
        raise ValueError(f"not a unit step: ({dr}, {dc})")


class TileKind(Enum):
    WALL = "wall"
    FLOOR = "floor"
    DOOR = "door"


@dataclass(frozen=True)
class Tile:
    kind: TileKind
    door_id: str | None = None


class DoorState(Enum):
    OPEN = "open"
    CLOSED = "closed"


class MoveOutcome(Enum):
    MOVED = "moved"
    BLOCKED = "blocked"


@dataclass
class WorldObject:
    """A game object with a type tag and, for non-static objects, a state.

    Static objects never change state after initialization.  Doors are the
    only non-static objects in this world.
    """

    object_id: str
    object_type: str
    position: TilePos
    is_static: bool
    state: DoorState


@dataclass
class NpcPose:
    position: TilePos
    facing: Facing


@dataclass(frozen=True)
class StateChangeEvent:
    object_id: str
    old_state: DoorState
    new_state: DoorState


@dataclass
class WorldState:
    """The one authoritative game state: terrain, objects, NPC poses, tick.

    Terrain (``tiles``) is immutable after parsing; door state lives on the
    door objects, not on the tiles.
    """

    width: int
    height: int
    tiles: tuple[tuple[Tile, ...], ...]
    objects: dict[str, WorldObject]
    npcs: dict[str, NpcPose]
    pois: dict[str, TilePos] = field(default_factory=dict)
    tick: int = 0

    def in_bounds(self, pos: TilePos) -> bool:
        return 0 <= pos.row < self.height and 0 <= pos.col < self.width

    def door(self, door_id: str) -> WorldObject:
        obj = self.objects.get(door_id)
        if obj is None or obj.object_type != "door":
            raise UnknownDoor(f"no door {door_id!r}")
        return obj

    def door_ids(self) -> list[str]:
        return sorted(o.object_id for o in self.objects.values() if o.object_type == "door")

    def npc(self, npc_id: str) -> NpcPose:
        pose = self.npcs.get(npc_id)
        if pose is None:
            raise UnknownNpc(f"no NPC {npc_id!r}")
        return pose

    def signature(self) -> tuple:
        """Field-wise fingerprint of the mutable state, excluding the tick."""
        doors = tuple(
            (oid, obj.state.value) for oid, obj in sorted(self.objects.items())
        )
        npcs = tuple(
            (nid, pose.position, pose.facing.name) for nid, pose in sorted(self.npcs.items())
        )
        return (self.tiles, doors, npcs)


def parse_map(text: str) -> WorldState:
    """Build a WorldState from an ASCII map document.

    Alphabet: ``#`` wall, ``.`` floor, ``a``-``z`` door, ``@`` NPC start
    (floor beneath), ``A``-``Z`` point of interest (floor beneath).
    Optional header lines ``!open <door-glyph>`` before the grid set a
    door's initial ground-truth state to open; all other doors start
    closed.
    """
    lines = text.splitlines()
    open_at_start: list[str] = []
    while lines and lines[0].startswith("!"):
        header = lines.pop(0).strip()
        parts = header.split()
        if len(parts) != 2 or parts[0] != "!open":
            raise UnknownGlyph(f"bad header line: {header!r}")
        open_at_start.append(parts[1])
    while lines and not lines[-1].strip():
        lines.pop()

    if len(lines) < 3:
        raise RaggedMap(f"map needs at least 3 rows, got {len(lines)}")
    width = len(lines[0])
    for i, line in enumerate(lines):
        if len(line) != width:
            raise RaggedMap(f"line {i} has length {len(line)}, expected {width}")
    if width < 3:
        raise RaggedMap(f"map needs at least 3 columns, got {width}")

    rows: list[tuple[Tile, ...]] = []
    objects: dict[str, WorldObject] = {}
    pois: dict[str, TilePos] = {}
    starts: list[TilePos] = []
    for r, line in enumerate(lines):
        row: list[Tile] = []
        for c, ch in enumerate(line):
            pos = TilePos(r, c)
            if ch == "#":
                row.append(Tile(TileKind.WALL))
            elif ch == ".":
                row.append(Tile(TileKind.FLOOR))
            elif ch == "@":
                starts.append(pos)
                row.append(Tile(TileKind.FLOOR))
            elif ch.islower() and ch.isalpha():
                if ch in objects:
                    raise DuplicateDoorId(f"door {ch!r} appears more than once")
                objects[ch] = WorldObject(ch, "door", pos, False, DoorState.CLOSED)
                row.append(Tile(TileKind.DOOR, door_id=ch))
            elif ch.isupper() and ch.isalpha():
                if ch in pois:
                    raise DuplicatePoi(f"point of interest {ch!r} appears more than once")
                pois[ch] = pos
                row.append(Tile(TileKind.FLOOR))
            else:
                raise UnknownGlyph(f"unknown glyph {ch!r} at ({r}, {c})")
        rows.append(tuple(row))

    if len(starts) != 1:
        raise NoNpcStart(f"expected exactly one '@' start marker, found {len(starts)}")

    for glyph in open_at_start:
        if glyph not in objects:
            raise UnknownDoor(f"header opens unknown door {glyph!r}")
        objects[glyph].state = DoorState.OPEN

    npcs = {DEFAULT_NPC_ID: NpcPose(starts[0], Facing.N)}
    return WorldState(
        width=width,
        height=len(lines),
        tiles=tuple(rows),
        objects=objects,
        npcs=npcs,
        pois=pois,
    )


def tile_at(world: WorldState, pos: TilePos) -> Tile:
    if not world.in_bounds(pos):
        raise OutOfBounds(f"{pos} outside {world.width}x{world.height} map")
    return world.tiles[pos.row][pos.col]


def set_door_state(
    world: WorldState, door_id: str, new_state: DoorState
) -> StateChangeEvent | None:
    """Flip a door in ground truth.  NPC beliefs are not touched.

    Returns the state-change event, or None when the door already had the
    requested state.
    """
    door = world.door(door_id)
    if door.state is new_state:
        return None
    old = door.state
    door.state = new_state
    return StateChangeEvent(door_id, old, new_state)


def is_passable(world: WorldState, pos: TilePos) -> bool:
    """True iff pos is in bounds and a floor tile or an open door tile."""
    if not world.in_bounds(pos):
        return False
    tile = world.tiles[pos.row][pos.col]
    if tile.kind is TileKind.FLOOR:
        return True
    if tile.kind is TileKind.DOOR:
        return world.objects[tile.door_id].state is DoorState.OPEN
    return False


def step_npc(world: WorldState, npc_id: str, direction: Facing) -> MoveOutcome:
    """Try to move an NPC one tile; the NPC turns to face the direction
    whether or not the move succeeds."""
    pose = world.npc(npc_id)
    dr, dc = direction.delta
    target = TilePos(pose.position.row + dr, pose.position.col + dc)
    pose.facing = direction
    if is_passable(world, target):
        pose.position = target
        return MoveOutcome.MOVED
    return MoveOutcome.BLOCKED


def spawn_npc(
    world: WorldState, npc_id: str, pos: TilePos, facing: Facing = Facing.N
) -> None:
    """Add an extra NPC (the map marker only places the first one)."""
    if npc_id in world.npcs:
        raise ValueError(f"NPC {npc_id!r} already exists")
    if not is_passable(world, pos):
        raise ValueError(f"cannot spawn NPC on impassable tile {pos}")
    world.npcs[npc_id] = NpcPose(pos, facing)


def iter_floor(world: WorldState) -> Iterator[TilePos]:
    for r in range(world.height):
        for c in range(world.width):
            if world.tiles[r][c].kind is TileKind.FLOOR:
                yield TilePos(r, c)


CANONICAL_MAP = """\
###########
#....#....#
#@...a...G#
#....#....#
##b#####c##
#.........#
###########
"""
