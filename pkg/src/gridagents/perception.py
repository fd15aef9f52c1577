"""Field-of-view perception: sight-cone sweeps and percept events.

A sweep reports objects whose tile is within the configured radius
(Euclidean center distance), within the half-angle of the facing
direction, and reachable by an unobstructed straight line.  Walls and
closed doors block sight; a door never blocks its own visibility.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import UnknownNpc
from .world import DoorState, NpcPose, TileKind, TilePos, WorldState

ENTERED_FOV = "entered_fov"
LEFT_FOV = "left_fov"
STATUS_CHANGED = "status_changed"
EVENT_NOTIFICATION = "event"


@dataclass(frozen=True)
class FovConfig:
    radius: int = 4
    half_angle: float = 45.0
    object_types: frozenset[str] = frozenset({"door"})

    def __post_init__(self):
        if self.radius < 1:
            raise ValueError("radius must be >= 1")
        if not 0 < self.half_angle <= 180:
            raise ValueError("half_angle must be in (0, 180]")


def register_filter(cfg: FovConfig, object_types: set[str]) -> FovConfig:
    """New config reporting only the given object types."""
    return replace(cfg, object_types=frozenset(object_types))


@dataclass(frozen=True)
class ObjectSnapshot:
    object_id: str
    object_type: str
    position: TilePos
    state: str


@dataclass(frozen=True)
class PerceptEvent:
    kind: str
    object_id: str | None = None
    snapshot: ObjectSnapshot | None = None
    state: str | None = None
    name: str | None = None
    payload: dict | None = None


def line_of_sight(world: WorldState, src: TilePos, dst: TilePos) -> bool:
    """Bresenham walk from src to dst; intermediate walls or closed doors
    block.  Endpoints never block themselves."""
    r, c = src
    r1, c1 = dst
    dr = abs(r1 - r)
    dc = abs(c1 - c)
    sr = 1 if r1 > r else -1
    sc = 1 if c1 > c else -1
    err = dc - dr
    while True:
        if (r, c) != tuple(src) and (r, c) != tuple(dst):
            tile = world.tiles[r][c]
            if tile.kind is TileKind.WALL:
                return False
            if tile.kind is TileKind.DOOR:
                if world.objects[tile.door_id].state is DoorState.CLOSED:
                    return False
        if (r, c) == (r1, c1):
            return True
        e2 = 2 * err
        if e2 > -dr:
            err -= dr
            c += sc
        if e2 < dc:
            err += dc
            r += sr


def in_sight_cone(pose: NpcPose, target: TilePos, cfg: FovConfig) -> bool:
    """Radius and angle test only; line of sight is checked separately."""
    dr = target.row - pose.position.row
    dc = target.col - pose.position.col
    dist_sq = dr * dr + dc * dc
    if dist_sq > cfg.radius * cfg.radius:
        return False
    if dist_sq == 0:
        return True
    fr, fc = pose.facing.delta
    cos_angle = (fr * dr + fc * dc) / math.sqrt(dist_sq)
    return cos_angle >= math.cos(math.radians(cfg.half_angle)) - 1e-9


def visible_tiles(world: WorldState, pose: NpcPose, cfg: FovConfig) -> set[TilePos]:
    """All in-bounds tiles the pose can currently see under cfg."""
    out = set()
    r0, c0 = pose.position
    for r in range(max(0, r0 - cfg.radius), min(world.height, r0 + cfg.radius + 1)):
        for c in range(max(0, c0 - cfg.radius), min(world.width, c0 + cfg.radius + 1)):
            pos = TilePos(r, c)
            if in_sight_cone(pose, pos, cfg) and line_of_sight(world, pose.position, pos):
                out.add(pos)
    return out


def perceivable_objects(world: WorldState, observer_id: str) -> list[ObjectSnapshot]:
    """World objects plus other NPCs, as immutable snapshots."""
    snaps = [
        ObjectSnapshot(o.object_id, o.object_type, o.position, o.state.value)
        for o in world.objects.values()
    ]
    for npc_id, pose in world.npcs.items():
        if npc_id != observer_id:
            snaps.append(ObjectSnapshot(npc_id, "npc", pose.position, "present"))
    return sorted(snaps, key=lambda s: s.object_id)


def perception_sweep(
    world: WorldState,
    npc_id: str,
    cfg: FovConfig,
    previous: dict[str, str],
) -> tuple[dict[str, str], list[PerceptEvent]]:
    """One sweep for one config.

    ``previous`` maps object id -> last reported state.  Returns the new
    visible map and the entered/left/status-changed events relative to it.
    """
    if npc_id not in world.npcs:
        raise UnknownNpc(f"no NPC {npc_id!r}")
    pose = world.npcs[npc_id]

    current: dict[str, ObjectSnapshot] = {}
    for snap in perceivable_objects(world, npc_id):
        if snap.object_type not in cfg.object_types:
            continue
        if not in_sight_cone(pose, snap.position, cfg):
            continue
        if not line_of_sight(world, pose.position, snap.position):
            continue
        current[snap.object_id] = snap

    events: list[PerceptEvent] = []
    for oid in sorted(set(current) - set(previous)):
        events.append(PerceptEvent(ENTERED_FOV, oid, snapshot=current[oid]))
    for oid in sorted(set(previous) - set(current)):
        events.append(PerceptEvent(LEFT_FOV, oid))
    for oid in sorted(set(current) & set(previous)):
        if current[oid].state != previous[oid]:
            events.append(PerceptEvent(STATUS_CHANGED, oid, state=current[oid].state))

    return {oid: snap.state for oid, snap in current.items()}, events
