"""Deliberators: the belief-based planner and the two contrast baselines.

The belief deliberator keeps a personalized record of door states, plans
at area level over the doors it believes open, and refines each macro
step into a tile path.  The baselines share the tile-level engine but
read door state from ground truth (omniscient) or not at all (oblivious);
both exist to show how each shortcut breaks believability.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .agents import ActionRequest, BeliefChange, NoPlan, TickContext
from .errors import RefinementFailed, StartBlocked, UnknownArea, UnknownDoor
from .pathfinding import (
    GROUND_TRUTH,
    IGNORE_DOORS,
    PassabilityPolicy,
    astar,
    beliefs_policy,
    path_cost,
    path_is_valid,
)
from .perception import ENTERED_FOV, STATUS_CHANGED, PerceptEvent
from .topology import AreaDecomposition, AreaGraph, area_of
from .trace import PLAN_COMPUTED
from .world import DoorState, TileKind, TilePos, WorldState

logger = logging.getLogger(__name__)


class BeliefState:
    """One NPC's belief about every door, plus when it last saw each.

    Every door starts believed closed and never observed; observations are
    the only thing that changes an entry.
    """

    def __init__(self, door_ids):
        self.believed: dict[str, DoorState] = {d: DoorState.CLOSED for d in sorted(door_ids)}
        self.last_observed_tick: dict[str, int | None] = {d: None for d in self.believed}

    def update(self, door_id: str, state: DoorState, tick: int) -> bool:
        """Record an observation; returns True when the believed state flipped."""
        if door_id not in self.believed:
            raise UnknownDoor(f"no door {door_id!r} in belief state")
        changed = self.believed[door_id] is not state
        self.believed[door_id] = state
        self.last_observed_tick[door_id] = tick
        return changed

    def is_open(self, door_id: str) -> bool:
        if door_id not in self.believed:
            raise UnknownDoor(f"no door {door_id!r} in belief state")
        return self.believed[door_id] is DoorState.OPEN

    def as_dict(self) -> dict[str, dict]:
        return {
            d: {"state": s.value, "observed_tick": self.last_observed_tick[d]}
            for d, s in self.believed.items()
        }

    def copy(self) -> "BeliefState":
        clone = BeliefState(self.believed)
        clone.believed = dict(self.believed)
        clone.last_observed_tick = dict(self.last_observed_tick)
        return clone


def init_beliefs(decomp: AreaDecomposition) -> BeliefState:
    """All doors believed closed, never observed; domain = the waypoint list."""
    return BeliefState([door_id for door_id, _ in decomp.waypoints])


def plan_high_level(
    beliefs: BeliefState, graph: AreaGraph, src: int, dst: int
) -> list[tuple[str, int]] | None:
    """Fewest-door area path over edges believed open, or None.

    Breadth-first over the area graph; neighbor expansion is ordered by
    door id, so ties always resolve to the lexicographically smallest door
    sequence the search reaches first.
    """
    for area in (src, dst):
        if area not in graph.nodes:
            raise UnknownArea(f"no area {area}")
    if src == dst:
        return []
    parent: dict[int, tuple[int, str]] = {src: None}  # type: ignore[dict-item]
    frontier = [src]
    while frontier:
        next_frontier = []
        for area in frontier:
            for door_id, other in graph.neighbors(area):
                if not beliefs.is_open(door_id) or other in parent:
                    continue
                parent[other] = (area, door_id)
                if other == dst:
                    steps = []
                    node = dst
                    while node != src:
                        prev, door = parent[node]
                        steps.append((door, node))
                        node = prev
                    steps.reverse()
                    return steps
                next_frontier.append(other)
        frontier = next_frontier
    return None


@dataclass
class MacroPlan:
    """Area-level route: door hops then a tile target in the final area."""

    steps: list[tuple[str, int]]
    final_target: TilePos
    target_area: int
    goal: TilePos
    start_area: int

    def route_doors(self) -> list[str]:
        return [door for door, _ in self.steps]

    def summary(self) -> dict:
        return {
            "goal": [self.goal.row, self.goal.col],
            "steps": [[door, area] for door, area in self.steps],
            "target_area": self.target_area,
            "start_area": self.start_area,
            "route_doors": self.route_doors(),
        }


def _door_exit(
    world: WorldState, decomp: AreaDecomposition, door_id: str, dest_area: int
) -> TilePos:
    pos = world.objects[door_id].position
    candidates = []
    for dr, dc in ((-1, 0), (0, 1), (1, 0), (0, -1)):
        n = TilePos(pos.row + dr, pos.col + dc)
        if world.in_bounds(n) and decomp.labels[n.row][n.col] == dest_area:
            candidates.append(n)
    if not candidates:
        raise RefinementFailed(f"door {door_id!r} has no exit into area {dest_area}")
    return min(candidates)


def refine_macro(
    world: WorldState,
    decomp: AreaDecomposition,
    beliefs: BeliefState,
    current: TilePos,
    step: tuple[str, int] | None = None,
    target: TilePos | None = None,
) -> ActionRequest:
    """Turn one macro step (or the final target) into a concrete action.

    Paths are computed under the beliefs policy; inside an area that can
    only fail if the decomposition is corrupted, which is reported as
    RefinementFailed rather than silently replanned around.
    """
    policy = beliefs_policy(beliefs)
    if step is not None:
        door_id, dest_area = step
        door_pos = world.objects[door_id].position
        path = astar(world, current, door_pos, policy)
        if path is None:
            raise RefinementFailed(f"no path from {current} to door {door_id!r}")
        path = path + [_door_exit(world, decomp, door_id, dest_area)]
        return ActionRequest("traverse-door", {"door": door_id, "path": path})
    assert target is not None
    path = astar(world, current, target, policy)
    if path is None:
        raise RefinementFailed(f"no path from {current} to {target}")
    return ActionRequest("move-to", {"target": target, "path": path})


class BeliefDeliberator:
    """Plans only with what this NPC has personally seen.

    Replanning happens when the current plan's remaining doors are no
    longer all believed open, or when the goal changes; unobserved door
    openings never alter a plan.
    """

    kind = "belief"

    def __init__(
        self, npc_id: str, world: WorldState, decomp: AreaDecomposition, graph: AreaGraph
    ):
        self.npc_id = npc_id
        self.world = world
        self.decomp = decomp
        self.graph = graph
        self.beliefs = init_beliefs(decomp)
        self.goal: TilePos | None = None
        self.plan: MacroPlan | None = None
        self._notes: list[tuple[str, dict]] = []

    # -- perception input ------------------------------------------------

    def notify_object(self, percept: PerceptEvent, tick: int) -> list[BeliefChange]:
        if percept.kind == ENTERED_FOV and percept.snapshot is not None:
            if percept.snapshot.object_type != "door":
                return []
            door_id = percept.snapshot.object_id
            state = percept.snapshot.state
        elif percept.kind == STATUS_CHANGED:
            door_id = percept.object_id
            state = percept.state
        else:
            return []
        if door_id not in self.beliefs.believed:
            logger.warning("%s: percept for unknown object %r ignored", self.npc_id, door_id)
            return []
        changed = self.beliefs.update(door_id, DoorState(state), tick)
        if changed:
            return [BeliefChange(door_id, state, tick)]
        return []

    def notify_event(self, name: str, payload: dict) -> None:
        if name == "goal":
            self.goal = payload["target"]
            self.plan = None
        elif name == "cancel":
            self.goal = None
            self.plan = None
        # action_finished needs no bookkeeping: progress is read from the pose

    # -- planning ---------------------------------------------------------

    def _remaining_steps(self, pos: TilePos) -> list[tuple[str, int]]:
        # A step is complete once the NPC stands in its destination area;
        # completed steps are dropped from the plan for good.
        assert self.plan is not None
        current_area = self.decomp.labels[pos.row][pos.col] or None
        while self.plan.steps and current_area == self.plan.steps[0][1]:
            self.plan.steps.pop(0)
        return list(self.plan.steps)

    def plan_still_valid(self, ctx: TickContext) -> bool:
        if self.plan is None or self.goal != self.plan.goal:
            return False
        return all(self.beliefs.is_open(door) for door, _ in self._remaining_steps(ctx.position))

    def _start_areas(self, pos: TilePos) -> list[int]:
        label = self.decomp.labels[pos.row][pos.col]
        if label:
            return [label]
        tile = self.world.tiles[pos.row][pos.col]
        if tile.kind is TileKind.DOOR:
            for door_id, pair in self.decomp.waypoints:
                if door_id == tile.door_id:
                    return list(pair)
        return []

    def get_next_action(self, ctx: TickContext) -> ActionRequest | NoPlan:
        if self.goal is None:
            return NoPlan("idle")
        if ctx.position == self.goal:
            self.goal = None
            self.plan = None
            return NoPlan("satisfied", goal=ctx.position)
        goal_area = self.decomp.labels[self.goal.row][self.goal.col]
        if not goal_area:
            goal, self.goal = self.goal, None
            return NoPlan("invalid_goal", goal=goal)

        if not self.plan_still_valid(ctx):
            planned = self._plan_from(ctx.position, goal_area)
            if planned is None:
                return NoPlan("no_route", goal=self.goal)
            steps, start_area = planned
            self.plan = MacroPlan(steps, self.goal, goal_area, self.goal, start_area)
            self._notes.append((PLAN_COMPUTED, self.plan.summary()))

        remaining = self._remaining_steps(ctx.position)
        if remaining:
            return refine_macro(
                self.world, self.decomp, self.beliefs, ctx.position, step=remaining[0]
            )
        return refine_macro(
            self.world, self.decomp, self.beliefs, ctx.position, target=self.goal
        )

    def _plan_from(self, pos: TilePos, goal_area: int) -> tuple[list[tuple[str, int]], int] | None:
        best: tuple[list[tuple[str, int]], int] | None = None
        for start_area in self._start_areas(pos):
            steps = plan_high_level(self.beliefs, self.graph, start_area, goal_area)
            if steps is not None and (best is None or len(steps) < len(best[0])):
                best = (steps, start_area)
        return best

    # -- reporting ---------------------------------------------------------

    def drain_notes(self) -> list[tuple[str, dict]]:
        notes, self._notes = self._notes, []
        return notes

    def plan_summary(self) -> dict | None:
        return self.plan.summary() if self.plan else None

    def beliefs_snapshot(self) -> dict | None:
        return self.beliefs.as_dict()


class _PathDeliberator:
    """Shared machinery for the NPC-agnostic baselines: plan a tile path
    under a fixed policy, hand it to move-to, replan when asked again."""

    kind = "path"
    policy: PassabilityPolicy

    def __init__(
        self, npc_id: str, world: WorldState, decomp: AreaDecomposition, graph: AreaGraph
    ):
        self.npc_id = npc_id
        self.world = world
        self.decomp = decomp
        self.goal: TilePos | None = None
        self.path: list[TilePos] | None = None
        self._cursor = 0
        self._notes: list[tuple[str, dict]] = []

    def notify_object(self, percept: PerceptEvent, tick: int) -> list[BeliefChange]:
        return []

    def notify_event(self, name: str, payload: dict) -> None:
        if name == "goal":
            self.goal = payload["target"]
            self.path = None
        elif name == "cancel":
            self.goal = None
            self.path = None
        elif name == "action_finished":
            self.path = None

    def _suffix_from(self, pos: TilePos) -> list[TilePos] | None:
        if self.path is None:
            return None
        for i in range(self._cursor, len(self.path)):
            if self.path[i] == pos:
                self._cursor = i
                return self.path[i:]
        return None

    def plan_still_valid(self, ctx: TickContext) -> bool:
        if self.path is None or self.goal is None or self.path[-1] != self.goal:
            return False
        suffix = self._suffix_from(ctx.position)
        if suffix is None:
            return False
        return path_is_valid(self.world, suffix, self.policy)

    def get_next_action(self, ctx: TickContext) -> ActionRequest | NoPlan:
        if self.goal is None:
            return NoPlan("idle")
        if ctx.position == self.goal:
            self.goal = None
            self.path = None
            return NoPlan("satisfied", goal=ctx.position)
        goal_tile = self.world.tiles[self.goal.row][self.goal.col]
        if goal_tile.kind is not TileKind.FLOOR:
            goal, self.goal = self.goal, None
            return NoPlan("invalid_goal", goal=goal)
        try:
            path = astar(self.world, ctx.position, self.goal, self.policy)
        except StartBlocked:
            path = None
        if path is None:
            return NoPlan("no_route", goal=self.goal)
        self.path = path
        self._cursor = 0
        self._notes.append(
            (
                PLAN_COMPUTED,
                {
                    "goal": [self.goal.row, self.goal.col],
                    "path_cost": path_cost(path),
                    "start_area": self.decomp.labels[ctx.position.row][ctx.position.col],
                    "route_doors": self._route_doors(path),
                },
            )
        )
        return ActionRequest("move-to", {"target": self.goal, "path": path})

    def drain_notes(self) -> list[tuple[str, dict]]:
        notes, self._notes = self._notes, []
        return notes

    def plan_summary(self) -> dict | None:
        if self.path is None or self.goal is None:
            return None
        return {
            "goal": [self.goal.row, self.goal.col],
            "path_cost": path_cost(self.path),
            "route_doors": self._route_doors(self.path),
        }

    def _route_doors(self, path: list[TilePos]) -> list[str]:
        return sorted(
            {
                self.world.tiles[p.row][p.col].door_id
                for p in path
                if self.world.tiles[p.row][p.col].kind is TileKind.DOOR
            }
        )

    def beliefs_snapshot(self) -> dict | None:
        return None


class ObliviousDeliberator(_PathDeliberator):
    """Baseline that routes as if doors did not exist; it can walk into the
    same closed door forever because nothing it sees is remembered."""

    kind = "oblivious"
    policy = IGNORE_DOORS


class OmniscientDeliberator(_PathDeliberator):
    """Baseline that routes on ground truth; it reroutes around doors it
    never saw change, which is exactly the tell the belief NPC avoids."""

    kind = "omniscient"
    policy = GROUND_TRUTH


DELIBERATORS = {
    "belief": BeliefDeliberator,
    "oblivious": ObliviousDeliberator,
    "omniscient": OmniscientDeliberator,
}


def make_deliberator(
    kind: str, npc_id: str, world: WorldState, decomp: AreaDecomposition, graph: AreaGraph
):
    try:
        cls = DELIBERATORS[kind]
    except KeyError:
        raise ValueError(f"unknown deliberator {kind!r}; choose from {sorted(DELIBERATORS)}")
    return cls(npc_id, world, decomp, graph)
