"""Headless scenario execution: scripted commands, traces, comparisons.

Scenario files are line-oriented: ``@<tick> open <door>``, ``@<tick>
close <door>``, ``@<tick> goto <npc> <POI|row,col>``, ``@<tick> cancel
<npc>``, ``@<tick> stop``.  ``#`` starts a comment.  Ticks must be
non-decreasing and start at 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import InvalidGoal, NonMonotoneTicks, ParseError, UnknownReference
from .simulation import (
    CancelGoal,
    CloseDoor,
    Command,
    MoveTo,
    OpenDoor,
    Simulation,
    Stop,
    ToggleDoor,
)
from .trace import (
    ACTION_STATUS,
    BELIEF_UPDATE,
    COMMAND,
    NO_PLAN,
    PLAN_COMPUTED,
    TICK_BOUNDARY,
    Trace,
)
from .world import TileKind, TilePos, WorldState, parse_map

DEFAULT_MAX_TICKS = 1000


@dataclass(frozen=True)
class Scenario:
    commands: tuple[tuple[int, Command], ...]

    def last_tick(self) -> int:
        return self.commands[-1][0] if self.commands else 0

    def by_tick(self) -> dict[int, list[Command]]:
        out: dict[int, list[Command]] = {}
        for tick, command in self.commands:
            out.setdefault(tick, []).append(command)
        return out


_LINE = re.compile(r"@(\d+)\s+(\w[\w-]*)\s*(.*)$")


def load_scenario(text: str, world: WorldState) -> Scenario:
    """Parse and validate a scenario against a map."""
    commands: list[tuple[int, Command]] = []
    last = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _LINE.match(line)
        if not match:
            raise ParseError(f"line {lineno}: cannot parse {raw!r}")
        tick = int(match.group(1))
        verb = match.group(2)
        args = match.group(3).split()
        if tick < 1:
            raise ParseError(f"line {lineno}: ticks start at 1")
        if tick < last:
            raise NonMonotoneTicks(f"line {lineno}: tick {tick} after tick {last}")
        last = tick
        commands.append((tick, _parse_command(verb, args, world, lineno)))
    return Scenario(tuple(commands))


def _parse_command(verb: str, args: list[str], world: WorldState, lineno: int) -> Command:
    if verb in ("open", "close", "toggle"):
        if len(args) != 1:
            raise ParseError(f"line {lineno}: {verb} takes one door id")
        door = args[0]
        if door not in world.objects or world.objects[door].object_type != "door":
            raise UnknownReference(f"line {lineno}: no door {door!r} in map")
        cls = {"open": OpenDoor, "close": CloseDoor, "toggle": ToggleDoor}[verb]
        return cls(door)
    if verb == "goto":
        if len(args) != 2:
            raise ParseError(f"line {lineno}: goto takes <npc> <POI|row,col>")
        npc, target = args
        if npc not in world.npcs:
            raise UnknownReference(f"line {lineno}: no NPC {npc!r} in map")
        return MoveTo(npc, _parse_target(target, world, lineno))
    if verb == "cancel":
        if len(args) != 1:
            raise ParseError(f"line {lineno}: cancel takes one NPC id")
        if args[0] not in world.npcs:
            raise UnknownReference(f"line {lineno}: no NPC {args[0]!r} in map")
        return CancelGoal(args[0])
    if verb == "stop":
        if args:
            raise ParseError(f"line {lineno}: stop takes no arguments")
        return Stop()
    raise ParseError(f"line {lineno}: unknown verb {verb!r}")


def _parse_target(token: str, world: WorldState, lineno: int) -> TilePos:
    if "," in token:
        try:
            row, col = (int(part) for part in token.split(","))
        except ValueError:
            raise ParseError(f"line {lineno}: bad tile {token!r}") from None
        pos = TilePos(row, col)
        if not world.in_bounds(pos):
            raise UnknownReference(f"line {lineno}: tile {token} out of bounds")
        if world.tiles[row][col].kind is not TileKind.FLOOR:
            raise InvalidGoal(f"line {lineno}: tile {token} is not a floor tile")
        return pos
    if token not in world.pois:
        raise UnknownReference(f"line {lineno}: no point of interest {token!r}")
    return world.pois[token]


def run_scenario(
    world: WorldState,
    scenario: Scenario,
    deliberator: str = "belief",
    max_ticks: int = DEFAULT_MAX_TICKS,
    fov_configs=None,
) -> Trace:
    """Run a scenario to completion on a fresh (tick-0) world.

    Terminates at a stop command, at quiescence after the last scheduled
    command (provided at least one goto was issued and resolved), or at
    the tick budget, which is recorded in the trace rather than raised.
    """
    sim = Simulation(world, deliberator, fov_configs)
    by_tick = scenario.by_tick()
    last_scheduled = scenario.last_tick()
    while sim.world.tick < max_ticks:
        next_tick = sim.world.tick + 1
        pending = next_tick <= last_scheduled
        if not pending and sim.any_goal_commanded and sim.quiescent():
            break
        sim.advance_tick(by_tick.get(next_tick, ()))
        if sim.stopped:
            break
    else:
        # Tick budget exhausted: recorded in the trace on a final
        # bookkeeping tick, never raised.
        sim.world.tick += 1
        sim._emit(TICK_BOUNDARY, None, {})
        sim._emit(COMMAND, None, {"verb": "stop", "cause": "max_ticks"})
    return sim.trace


def replay_commands(trace: Trace) -> Scenario:
    """Rebuild the (tick, Command) schedule recorded in a trace.

    Synthetic budget-exhaustion markers are skipped; errored commands are
    replayed verbatim so the error events reproduce too.
    """
    commands: list[tuple[int, Command]] = []
    for event in trace.of_kind(COMMAND):
        data = event.data
        if "cause" in data:
            continue
        verb = data["verb"]
        if verb == "open":
            commands.append((event.tick, OpenDoor(data["door"])))
        elif verb == "close":
            commands.append((event.tick, CloseDoor(data["door"])))
        elif verb == "toggle":
            commands.append((event.tick, ToggleDoor(data["door"])))
        elif verb == "goto":
            row, col = data["target"]
            commands.append((event.tick, MoveTo(data["npc"], TilePos(row, col))))
        elif verb == "cancel":
            commands.append((event.tick, CancelGoal(data["npc"])))
        elif verb == "stop":
            commands.append((event.tick, Stop()))
    return Scenario(tuple(commands))


# -- comparison reports ----------------------------------------------------


@dataclass
class DeliberatorMetrics:
    deliberator: str
    ticks_to_goal: int | None = None
    reached_goal: bool = False
    blocked_attempts: int = 0
    clairvoyant_plan_changes: int = 0
    plans_computed: int = 0
    no_plan_tick: int | None = None
    total_ticks: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class ComparisonReport:
    npc_id: str
    metrics: dict[str, DeliberatorMetrics] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "npc": self.npc_id,
            "deliberators": {k: m.as_dict() for k, m in self.metrics.items()},
        }


def trace_metrics(trace: Trace, npc_id: str, deliberator: str) -> DeliberatorMetrics:
    """Believability bookkeeping extracted from a finished trace.

    A blocked-door attempt is a route through a door abandoned because the
    door turned out closed: either the NPC physically bumped it, or a
    belief update flipped a door on the active route to closed.  Each is
    counted at most once per computed plan.  A clairvoyant plan change is
    a new plan for a (goal, start area) pair planned before, whose door
    route differs with no belief update in between; keying on the start
    area keeps ordinary position-dependent route differences out of it.
    """
    m = DeliberatorMetrics(deliberator)
    last_goto_tick: int | None = None
    route_doors: set[str] = set()
    attempted: set[str] = set()
    belief_updates = 0
    plans_by_goal: dict[tuple, tuple[tuple, int]] = {}
    for event in trace.events:
        data = event.data
        if event.kind == COMMAND and data.get("verb") == "goto" and data.get("npc") == npc_id:
            last_goto_tick = event.tick
            m.reached_goal = False
            m.ticks_to_goal = None
        if event.npc != npc_id:
            continue
        if event.kind == BELIEF_UPDATE:
            belief_updates += 1
            door = data["door"]
            if data["state"] == "closed" and door in route_doors and door not in attempted:
                m.blocked_attempts += 1
                attempted.add(door)
        elif event.kind == PLAN_COMPUTED:
            m.plans_computed += 1
            key = (tuple(data["goal"]), data.get("start_area"))
            route = tuple(data["route_doors"])
            previous = plans_by_goal.get(key)
            if previous is not None:
                prev_route, prev_updates = previous
                if prev_route != route and prev_updates == belief_updates:
                    m.clairvoyant_plan_changes += 1
            plans_by_goal[key] = (route, belief_updates)
            route_doors = set(data["route_doors"])
            attempted = set()
        elif event.kind == ACTION_STATUS:
            if data.get("status") == "failed" and data.get("reason") == "blocked":
                door = data.get("blocked_door")
                if door and door not in attempted:
                    m.blocked_attempts += 1
                    attempted.add(door)
        elif event.kind == NO_PLAN:
            if data["reason"] == "no_route" and m.no_plan_tick is None:
                m.no_plan_tick = event.tick
            elif data["reason"] == "satisfied" and last_goto_tick is not None:
                m.reached_goal = True
                m.ticks_to_goal = event.tick - last_goto_tick
    m.total_ticks = trace.events[-1].tick if trace.events else 0
    return m


def compare_deliberators(
    map_text: str,
    scenario_text: str,
    deliberators: tuple[str, ...] = ("belief", "omniscient", "oblivious"),
    max_ticks: int = DEFAULT_MAX_TICKS,
    npc_id: str = "npc0",
) -> ComparisonReport:
    """Run the same scenario once per deliberator on fresh worlds."""
    report = ComparisonReport(npc_id)
    for kind in deliberators:
        world = parse_map(map_text)
        scenario = load_scenario(scenario_text, world)
        trace = run_scenario(world, scenario, deliberator=kind, max_ticks=max_ticks)
        report.metrics[kind] = trace_metrics(trace, npc_id, kind)
    return report
