"""The deterministic tick loop hosting each NPC's component chain.

Every tick runs a fixed phase order: (1) apply external commands,
(2) perception sweep per NPC, (3) controller dispatch per NPC,
(4) at most one movement step per NPC.  Per-NPC phases run in ascending
NPC id, so a run is a pure function of (map text, command sequence).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import trace as tr
from .agents import ActionRuntime, Controller, TickContext, default_registry
from .deliberators import make_deliberator
from .errors import InvalidGoal, SimError, UnknownNpc
from .perception import FovConfig, PerceptEvent, perception_sweep, visible_tiles
from .topology import build_area_graph, decompose_areas
from .world import (
    DoorState,
    Facing,
    TileKind,
    TilePos,
    WorldState,
    parse_map,
    set_door_state,
    spawn_npc,
)


@dataclass(frozen=True)
class OpenDoor:
    door_id: str


@dataclass(frozen=True)
class CloseDoor:
    door_id: str


@dataclass(frozen=True)
class ToggleDoor:
    door_id: str


@dataclass(frozen=True)
class MoveTo:
    npc_id: str
    target: TilePos


@dataclass(frozen=True)
class CancelGoal:
    npc_id: str


@dataclass(frozen=True)
class Stop:
    pass


Command = OpenDoor | CloseDoor | ToggleDoor | MoveTo | CancelGoal | Stop


@dataclass
class AgentBundle:
    npc_id: str
    deliberator: object
    controller: Controller
    runtime: ActionRuntime
    fov_configs: list[FovConfig]
    seen: list[dict[str, str]] = field(default_factory=list)

    def __post_init__(self):
        if not self.seen:
            self.seen = [{} for _ in self.fov_configs]


class Simulation:
    """One world, its decomposition, and one agent bundle per NPC."""

    def __init__(
        self,
        world: WorldState,
        deliberator: str = "belief",
        fov_configs: list[FovConfig] | None = None,
    ):
        self.world = world
        self.decomp = decompose_areas(world)
        self.graph = build_area_graph(self.decomp)
        self.fov_configs = fov_configs or [FovConfig()]
        self.trace = tr.Trace()
        self.stopped = False
        self.any_goal_commanded = False
        self.agents: dict[str, AgentBundle] = {}
        for npc_id in sorted(world.npcs):
            self._add_agent(npc_id, deliberator)

    @classmethod
    def from_map(
        cls,
        text: str,
        deliberator: str = "belief",
        fov_configs: list[FovConfig] | None = None,
    ) -> "Simulation":
        return cls(parse_map(text), deliberator, fov_configs)

    def _add_agent(self, npc_id: str, deliberator_kind: str) -> None:
        deliberator = make_deliberator(
            deliberator_kind, npc_id, self.world, self.decomp, self.graph
        )
        runtime = ActionRuntime(self.world, npc_id, default_registry())

        def emit(kind: str, data: dict, npc_id=npc_id) -> None:
            self._emit(kind, npc_id, data)

        controller = Controller(npc_id, deliberator, runtime, emit)
        self.agents[npc_id] = AgentBundle(
            npc_id, deliberator, controller, runtime, list(self.fov_configs)
        )

    def spawn_agent(
        self,
        npc_id: str,
        pos: TilePos,
        deliberator: str = "belief",
        facing: Facing = Facing.N,
    ) -> None:
        spawn_npc(self.world, npc_id, pos, facing)
        self._add_agent(npc_id, deliberator)

    # -- tick loop ---------------------------------------------------------

    def _emit(self, kind: str, npc_id: str | None, data: dict) -> None:
        self.trace.append(tr.TraceEvent(self.world.tick, kind, npc_id, data))

    def advance_tick(self, commands: tuple[Command, ...] | list[Command] = ()) -> list[tr.TraceEvent]:
        """Run one tick; returns the trace events it produced."""
        start = len(self.trace.events)
        self.world.tick += 1
        self._emit(tr.TICK_BOUNDARY, None, {})

        for command in commands:
            self._apply_command(command)

        for npc_id in sorted(self.agents):
            bundle = self.agents[npc_id]
            for i, cfg in enumerate(bundle.fov_configs):
                bundle.seen[i], events = perception_sweep(
                    self.world, npc_id, cfg, bundle.seen[i]
                )
                for percept in events:
                    self._emit(tr.PERCEPT, npc_id, _encode_percept(percept))
                    bundle.controller.push("percept", percept)

        for npc_id in sorted(self.agents):
            bundle = self.agents[npc_id]
            pose = self.world.npcs[npc_id]
            ctx = TickContext(self.world.tick, pose.position, pose.facing)
            bundle.controller.dispatch(ctx)

        for npc_id in sorted(self.agents):
            bundle = self.agents[npc_id]
            moved, statuses = bundle.runtime.tick()
            if moved is not None:
                pose = self.world.npcs[npc_id]
                self._emit(
                    tr.MOVE,
                    npc_id,
                    {"to": [moved.row, moved.col], "facing": pose.facing.name},
                )
            for status in statuses:
                payload = {"action": status.action, "status": status.status, **status.data}
                if status.reason:
                    payload["reason"] = status.reason
                self._emit(tr.ACTION_STATUS, npc_id, payload)
                bundle.controller.push("status", status)

        return self.trace.events[start:]

    def quiescent(self) -> bool:
        """Nothing in flight and nothing queued: the world will not change
        again without external commands."""
        return all(
            bundle.controller.idle and getattr(bundle.deliberator, "goal", None) is None
            for bundle in self.agents.values()
        )

    def visible_map(self) -> dict[str, list[TilePos]]:
        out = {}
        for npc_id in sorted(self.agents):
            pose = self.world.npcs[npc_id]
            tiles: set[TilePos] = set()
            for cfg in self.agents[npc_id].fov_configs:
                tiles |= visible_tiles(self.world, pose, cfg)
            out[npc_id] = sorted(tiles)
        return out

    # -- commands -----------------------------------------------------------

    def _apply_command(self, command: Command) -> None:
        # The payload always carries the command's own arguments so a
        # trace's command stream can be replayed verbatim, errors included.
        payload = _describe(command)
        try:
            payload.update(self._run_command(command))
        except SimError as err:
            payload.update({"error": type(err).__name__, "detail": str(err)})
        self._emit(tr.COMMAND, None, payload)

    def _run_command(self, command: Command) -> dict:
        if isinstance(command, OpenDoor):
            change = set_door_state(self.world, command.door_id, DoorState.OPEN)
            return {"result": "opened" if change else "noop"}
        if isinstance(command, CloseDoor):
            change = set_door_state(self.world, command.door_id, DoorState.CLOSED)
            return {"result": "closed" if change else "noop"}
        if isinstance(command, ToggleDoor):
            door = self.world.door(command.door_id)
            new = DoorState.CLOSED if door.state is DoorState.OPEN else DoorState.OPEN
            set_door_state(self.world, command.door_id, new)
            return {"result": new.value}
        if isinstance(command, MoveTo):
            self._validate_goal(command.target)
            bundle = self._bundle(command.npc_id)
            bundle.controller.push("goal", {"target": command.target})
            self.any_goal_commanded = True
            return {}
        if isinstance(command, CancelGoal):
            bundle = self._bundle(command.npc_id)
            bundle.controller.push("cancel", {})
            return {}
        if isinstance(command, Stop):
            self.stopped = True
            return {}
        raise ValueError(f"unknown command {command!r}")

    def _bundle(self, npc_id: str) -> AgentBundle:
        bundle = self.agents.get(npc_id)
        if bundle is None:
            raise UnknownNpc(f"no NPC {npc_id!r}")
        return bundle

    def _validate_goal(self, target: TilePos) -> None:
        if not self.world.in_bounds(target):
            raise InvalidGoal(f"target {tuple(target)} out of bounds")
        tile = self.world.tiles[target.row][target.col]
        if tile.kind is not TileKind.FLOOR:
            raise InvalidGoal(f"target {tuple(target)} is not a floor tile")


def _describe(command: Command) -> dict:
    if isinstance(command, (OpenDoor, CloseDoor, ToggleDoor)):
        verb = {OpenDoor: "open", CloseDoor: "close", ToggleDoor: "toggle"}[type(command)]
        return {"verb": verb, "door": command.door_id}
    if isinstance(command, MoveTo):
        return {
            "verb": "goto",
            "npc": command.npc_id,
            "target": [command.target.row, command.target.col],
        }
    if isinstance(command, CancelGoal):
        return {"verb": "cancel", "npc": command.npc_id}
    return {"verb": "stop"}


def _encode_percept(percept: PerceptEvent) -> dict:
    data: dict = {"event": percept.kind}
    if percept.object_id is not None:
        data["object"] = percept.object_id
    if percept.snapshot is not None:
        data["type"] = percept.snapshot.object_type
        data["state"] = percept.snapshot.state
        data["position"] = [percept.snapshot.position.row, percept.snapshot.position.col]
    if percept.state is not None:
        data["state"] = percept.state
    if percept.name is not None:
        data["name"] = percept.name
    return data
