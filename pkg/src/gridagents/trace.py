"""Structured trace events: the observability layer for every run.

Events within one tick always appear in the fixed phase order of the tick
loop, and serialization is byte-stable so two runs of the same scenario
can be compared as text.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

TICK_BOUNDARY = "tick_boundary"
COMMAND = "command"
PERCEPT = "percept"
BELIEF_UPDATE = "belief_update"
PLAN_COMPUTED = "plan_computed"
NO_PLAN = "no_plan"
ACTION_START = "action_start"
ACTION_STATUS = "action_status"
MOVE = "move"

KINDS = (
    TICK_BOUNDARY,
    COMMAND,
    PERCEPT,
    BELIEF_UPDATE,
    PLAN_COMPUTED,
    NO_PLAN,
    ACTION_START,
    ACTION_STATUS,
    MOVE,
)

# Phase each kind may appear in; used by the schema check.
_PHASE = {
    TICK_BOUNDARY: 0,
    COMMAND: 1,
    PERCEPT: 2,
    BELIEF_UPDATE: 3,
    PLAN_COMPUTED: 3,
    NO_PLAN: 3,
    ACTION_START: 3,
    ACTION_STATUS: 3,  # invoke-time statuses; execution statuses are phase 4
    MOVE: 4,
}


@dataclass(frozen=True)
class TraceEvent:
    tick: int
    kind: str
    npc: str | None
    data: dict

    def as_dict(self) -> dict:
        return {"tick": self.tick, "kind": self.kind, "npc": self.npc, "data": self.data}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))


def event_from_json(line: str) -> TraceEvent:
    raw = json.loads(line)
    return TraceEvent(raw["tick"], raw["kind"], raw["npc"], raw["data"])


@dataclass
class Trace:
    events: list[TraceEvent] = field(default_factory=list)

    def append(self, event: TraceEvent) -> None:
        self.events.append(event)

    def of_kind(self, *kinds: str) -> list[TraceEvent]:
        return [e for e in self.events if e.kind in kinds]

    def for_npc(self, npc_id: str) -> list[TraceEvent]:
        return [e for e in self.events if e.npc == npc_id]

    def to_jsonl(self) -> str:
        return "\n".join(e.to_json() for e in self.events) + ("\n" if self.events else "")

    def ticks(self) -> list[int]:
        return sorted({e.tick for e in self.events})

    def phase_order_valid(self) -> bool:
        """Within each tick, events must follow the tick-loop phase order.

        Action statuses are legal in both phase 3 (invoke-time) and phase 4
        (execution), so the check treats them as order-compatible with
        moves.
        """
        current_tick = None
        last_phase = -1
        for event in self.events:
            if event.tick != current_tick:
                if current_tick is not None and event.tick < current_tick:
                    return False
                if event.kind != TICK_BOUNDARY:
                    return False
                current_tick = event.tick
                last_phase = 0
                continue
            phase = _PHASE.get(event.kind)
            if phase is None:
                return False
            if event.kind in (ACTION_STATUS, MOVE):
                phase = max(phase, last_phase)
            if phase < last_phase:
                return False
            last_phase = phase
        return True


def parse_jsonl(text: str) -> Trace:
    trace = Trace()
    for line in text.splitlines():
        if line.strip():
            trace.append(event_from_json(line))
    return trace
