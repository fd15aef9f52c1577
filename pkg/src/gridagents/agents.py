"""The four-part agent architecture: action execution and the controller.

The controller is a pure mediator.  It holds no reference to the world;
everything it learns arrives as events (percepts, action statuses, player
commands) and everything it does goes out through the deliberator and the
action runtime.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Protocol

from . import trace as tr
from .errors import DuplicateAction
from .pathfinding import GROUND_TRUTH, astar
from .perception import EVENT_NOTIFICATION, PerceptEvent
from .world import Facing, MoveOutcome, TileKind, TilePos, WorldState, step_npc

logger = logging.getLogger(__name__)

RUNNING = "running"
SUCCEEDED = "succeeded"
FAILED = "failed"


@dataclass(frozen=True)
class TickContext:
    """Immutable per-tick view handed to the controller and deliberator."""

    tick: int
    position: TilePos
    facing: Facing


@dataclass(frozen=True)
class ActionRequest:
    name: str
    params: dict


@dataclass(frozen=True)
class NoPlan:
    """Deliberator result when there is nothing to do."""

    reason: str  # "idle" | "satisfied" | "no_route" | "invalid_goal"
    goal: TilePos | None = None


@dataclass(frozen=True)
class ActionStatusEvent:
    action: str
    status: str
    reason: str | None = None
    data: dict = field(default_factory=dict)

    @property
    def terminal(self) -> bool:
        return self.status in (SUCCEEDED, FAILED)


@dataclass(frozen=True)
class BeliefChange:
    door_id: str
    state: str
    observed_tick: int


class Deliberator(Protocol):
    """Decision component contract; one instance per NPC."""

    def get_next_action(self, ctx: TickContext) -> ActionRequest | NoPlan: ...

    def notify_object(self, percept: PerceptEvent, tick: int) -> list[BeliefChange]: ...

    def notify_event(self, name: str, payload: dict) -> None: ...

    def plan_still_valid(self, ctx: TickContext) -> bool: ...

    def drain_notes(self) -> list[tuple[str, dict]]: ...

    def plan_summary(self) -> dict | None: ...

    def beliefs_snapshot(self) -> dict | None: ...


class _WalkExecution:
    """Walks a stored tile path one step per tick."""

    def __init__(self, name: str, npc_id: str, path: list[TilePos], data: dict):
        self.name = name
        self.npc_id = npc_id
        self.path = path
        self.index = 0
        self.data = data

    @property
    def finished(self) -> bool:
        return self.index >= len(self.path) - 1

    def step(self, world: WorldState) -> tuple[TilePos | None, ActionStatusEvent | None]:
        """One movement attempt: (tile moved to or None, terminal status or None)."""
        if self.finished:
            return None, ActionStatusEvent(self.name, SUCCEEDED, data=self.data)
        nxt = self.path[self.index + 1]
        here = self.path[self.index]
        direction = Facing.from_delta(nxt.row - here.row, nxt.col - here.col)
        outcome = step_npc(world, self.npc_id, direction)
        if outcome is MoveOutcome.BLOCKED:
            blocked: dict = {"blocked": [nxt.row, nxt.col]}
            tile = world.tiles[nxt.row][nxt.col]
            if tile.kind is TileKind.DOOR:
                blocked["blocked_door"] = tile.door_id
            return None, ActionStatusEvent(self.name, FAILED, "blocked", {**self.data, **blocked})
        self.index += 1
        if self.finished:
            return nxt, ActionStatusEvent(self.name, SUCCEEDED, data=self.data)
        return nxt, None


def _make_move_to(world: WorldState, npc_id: str, request: ActionRequest) -> _WalkExecution:
    params = request.params
    path = params.get("path")
    if path is None:
        path = astar(world, world.npc(npc_id).position, params["target"], GROUND_TRUTH)
        if path is None:
            raise ValueError(f"no ground-truth path to {params['target']}")
    target = path[-1]
    return _WalkExecution("move-to", npc_id, list(path), {"target": [target.row, target.col]})


def _make_traverse_door(world: WorldState, npc_id: str, request: ActionRequest) -> _WalkExecution:
    params = request.params
    return _WalkExecution(
        "traverse-door", npc_id, list(params["path"]), {"door": params["door"]}
    )


class ActionRegistry:
    """Name -> implementation mapping for symbolic action invocation."""

    def __init__(self):
        self._factories: dict[str, Callable] = {}

    def register(self, name: str, factory: Callable) -> None:
        if name in self._factories:
            raise DuplicateAction(f"action {name!r} already registered")
        self._factories[name] = factory

    def names(self) -> list[str]:
        return sorted(self._factories)

    def create(self, world: WorldState, npc_id: str, request: ActionRequest):
        factory = self._factories.get(request.name)
        if factory is None:
            return None
        return factory(world, npc_id, request)


def default_registry() -> ActionRegistry:
    registry = ActionRegistry()
    registry.register("move-to", _make_move_to)
    registry.register("traverse-door", _make_traverse_door)
    return registry


class ActionRuntime:
    """Executes at most one action per NPC, one movement step per tick."""

    def __init__(self, world: WorldState, npc_id: str, registry: ActionRegistry):
        self.world = world
        self.npc_id = npc_id
        self.registry = registry
        self._execution: _WalkExecution | None = None

    @property
    def busy(self) -> bool:
        return self._execution is not None

    @property
    def current_action(self) -> str | None:
        return self._execution.name if self._execution else None

    @property
    def remaining_path(self) -> list[TilePos] | None:
        if self._execution is None:
            return None
        return self._execution.path[self._execution.index:]

    def invoke(self, request: ActionRequest) -> list[ActionStatusEvent]:
        """Start an action.  Emits a running status immediately and, when
        the action completes without movement (already at the target), the
        terminal status in the same call."""
        if self._execution is not None:
            raise RuntimeError(f"{self.npc_id} already has an action running")
        execution = self.registry.create(self.world, self.npc_id, request)
        if execution is None:
            return [ActionStatusEvent(request.name, FAILED, "unknown_action")]
        events = [ActionStatusEvent(execution.name, RUNNING, data=dict(execution.data))]
        if execution.finished:
            events.append(ActionStatusEvent(execution.name, SUCCEEDED, data=execution.data))
            return events
        self._execution = execution
        return events

    def tick(self) -> tuple[TilePos | None, list[ActionStatusEvent]]:
        """Advance the running action by one movement step."""
        if self._execution is None:
            return None, []
        moved, status = self._execution.step(self.world)
        if status is not None and status.terminal:
            self._execution = None
            return moved, [status]
        return moved, []

    def cancel(self) -> ActionStatusEvent | None:
        if self._execution is None:
            return None
        name = self._execution.name
        data = self._execution.data
        self._execution = None
        return ActionStatusEvent(name, FAILED, "canceled", data)


class Controller:
    """Mediator between perception, deliberation, and action.

    Queries the deliberator at most once per tick, and only when something
    happened: a new goal, a finished action, a belief change, or an
    invalidated plan.  That keeps a persistent no-plan NPC quiet instead of
    spinning.
    """

    def __init__(
        self,
        npc_id: str,
        deliberator: Deliberator,
        runtime: ActionRuntime,
        emit: Callable[[str, dict], None],
    ):
        self.npc_id = npc_id
        self.deliberator = deliberator
        self.runtime = runtime
        self.emit = emit
        self._inbox: list[tuple[str, object]] = []
        self.needs_query = False

    def push(self, kind: str, data: object) -> None:
        self._inbox.append((kind, data))

    @property
    def idle(self) -> bool:
        return not self.runtime.busy and not self._inbox and not self.needs_query

    def dispatch(self, ctx: TickContext) -> None:
        inbox, self._inbox = self._inbox, []
        for kind, data in inbox:
            if kind == "status":
                status: ActionStatusEvent = data
                if status.terminal:
                    self.deliberator.notify_event(
                        "action_finished",
                        {"action": status.action, "status": status.status,
                         "reason": status.reason},
                    )
                    self.needs_query = True
            elif kind == "goal":
                self.deliberator.notify_event("goal", data)
                self.needs_query = True
            elif kind == "cancel":
                self.deliberator.notify_event("cancel", {})
                canceled = self.runtime.cancel()
                if canceled is not None:
                    self._emit_status(canceled)
                self.needs_query = True
            elif kind == "percept":
                self._handle_percept(data, ctx)
            else:
                logger.warning("%s: dropping malformed event %r", self.npc_id, kind)
        self._flush_notes()

        # Execution monitoring: abort an in-flight action whose plan the
        # deliberator no longer stands behind.
        if self.runtime.busy and not self.deliberator.plan_still_valid(ctx):
            canceled = self.runtime.cancel()
            if canceled is not None:
                self._emit_status(canceled)
            self.needs_query = True

        if not self.runtime.busy and self.needs_query:
            self.needs_query = False
            result = self.deliberator.get_next_action(ctx)
            self._flush_notes()
            if isinstance(result, NoPlan):
                payload: dict = {"reason": result.reason}
                if result.goal is not None:
                    payload["goal"] = [result.goal.row, result.goal.col]
                self.emit(tr.NO_PLAN, payload)
            else:
                self._invoke(result)

    def _invoke(self, request: ActionRequest) -> None:
        statuses = self.runtime.invoke(request)
        for status in statuses:
            if status.status == RUNNING:
                self.emit(tr.ACTION_START, {"action": status.action, **status.data})
            else:
                self._emit_status(status)
                if status.terminal:
                    # Processed next tick, like statuses from execution.
                    self.push("status", status)

    def _handle_percept(self, percept: PerceptEvent, ctx: TickContext) -> None:
        if percept.kind == EVENT_NOTIFICATION:
            self.deliberator.notify_event(percept.name or "", percept.payload or {})
            return
        changes = self.deliberator.notify_object(percept, ctx.tick)
        for change in changes:
            self.emit(
                tr.BELIEF_UPDATE,
                {"door": change.door_id, "state": change.state,
                 "observed_tick": change.observed_tick},
            )
            self.needs_query = True

    def _emit_status(self, status: ActionStatusEvent) -> None:
        payload = {"action": status.action, "status": status.status, **status.data}
        if status.reason:
            payload["reason"] = status.reason
        self.emit(tr.ACTION_STATUS, payload)

    def _flush_notes(self) -> None:
        for kind, payload in self.deliberator.drain_notes():
            self.emit(kind, payload)
