"""Live simulation service: snapshots, command queue, event streaming.

One session owns one simulation.  The tick loop is the single writer;
client connections feed an ordered command queue that is drained only at
tick boundaries, and every tick fans out its trace events followed by a
full snapshot.  Ground truth and per-NPC beliefs are both present in
every snapshot; their divergence is the point of the exercise.

Wire messages are JSON objects with a ``type`` discriminator:
server -> client: ``hello``, ``snapshot``, ``trace``, ``ack``,
``reject``, ``heartbeat``; client -> server: ``cmd.toggle_door``,
``cmd.move_to``, ``cmd.pause``, ``cmd.resume``, ``cmd.tick_rate``.
"""

from __future__ import annotations

import asyncio
import contextlib
import logging

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .perception import visible_tiles
from .simulation import Command, MoveTo, Simulation, ToggleDoor
from .trace import TraceEvent
from .world import TileKind, TilePos

logger = logging.getLogger(__name__)

DEFAULT_TICK_RATE = 5.0


def tile_glyphs(sim: Simulation) -> str:
    """Row-major glyph string: '#' wall, '.' floor, door id for doors."""
    world = sim.world
    chars = []
    for row in world.tiles:
        for tile in row:
            if tile.kind is TileKind.WALL:
                chars.append("#")
            elif tile.kind is TileKind.DOOR:
                chars.append(tile.door_id)
            else:
                chars.append(".")
    return "".join(chars)


def rle_encode(text: str) -> list[list]:
    runs: list[list] = []
    for ch in text:
        if runs and runs[-1][1] == ch:
            runs[-1][0] += 1
        else:
            runs.append([1, ch])
    return runs


def rle_decode(runs: list[list]) -> str:
    return "".join(ch * count for count, ch in runs)


def build_snapshot(sim: Simulation) -> dict:
    """Pure serialization of the full dual state: truth plus beliefs."""
    world = sim.world
    doors = {
        oid: obj.state.value
        for oid, obj in sorted(world.objects.items())
        if obj.object_type == "door"
    }
    npcs = {}
    beliefs = {}
    plans = {}
    visible = {}
    for npc_id in sorted(sim.agents):
        bundle = sim.agents[npc_id]
        pose = world.npcs[npc_id]
        npcs[npc_id] = {
            "position": [pose.position.row, pose.position.col],
            "facing": pose.facing.name,
        }
        beliefs[npc_id] = bundle.deliberator.beliefs_snapshot()
        summary = bundle.deliberator.plan_summary()
        if summary is not None:
            summary = dict(summary)
            summary["action"] = bundle.runtime.current_action
            remaining = bundle.runtime.remaining_path
            summary["path"] = (
                [[p.row, p.col] for p in remaining] if remaining else []
            )
        plans[npc_id] = summary
        seen: set[TilePos] = set()
        for cfg in bundle.fov_configs:
            seen |= visible_tiles(world, pose, cfg)
        visible[npc_id] = [[p.row, p.col] for p in sorted(seen)]
    return {
        "type": "snapshot",
        "tick": world.tick,
        "width": world.width,
        "height": world.height,
        "tiles": rle_encode(tile_glyphs(sim)),
        "doors": doors,
        "npcs": npcs,
        "beliefs": beliefs,
        "plans": plans,
        "visible": visible,
    }


def build_hello(sim: Simulation, tick_rate: float, paused: bool) -> dict:
    world = sim.world
    return {
        "type": "hello",
        "tick": world.tick,
        "width": world.width,
        "height": world.height,
        "tiles": rle_encode(tile_glyphs(sim)),
        "doors": sorted(world.door_ids()),
        "pois": {name: [p.row, p.col] for name, p in sorted(world.pois.items())},
        "npcs": sorted(world.npcs),
        "tick_rate": tick_rate,
        "paused": paused,
    }


class LiveSession:
    """Owns one simulation; applies queued commands at tick boundaries and
    broadcasts each tick's events plus a snapshot to every subscriber."""

    def __init__(self, sim: Simulation, tick_rate: float = DEFAULT_TICK_RATE):
        self.sim = sim
        self.tick_rate = tick_rate
        self.paused = False
        self._queue: list[Command] = []
        self._subscribers: list[asyncio.Queue] = []

    # -- command ingestion ---------------------------------------------------

    def enqueue(self, message: dict) -> dict:
        """Validate a client command message; queue it or reject it."""
        msg_type = message.get("type", "")
        try:
            if msg_type == "cmd.toggle_door":
                door = message.get("door", "")
                self.sim.world.door(door)
                self._queue.append(ToggleDoor(door))
            elif msg_type == "cmd.move_to":
                npc = message.get("npc", "")
                target = message.get("target", [])
                if npc not in self.sim.agents:
                    return self._reject(msg_type, f"no NPC {npc!r}")
                if not isinstance(target, (list, tuple)) or len(target) != 2:
                    return self._reject(msg_type, "target must be [row, col]")
                pos = TilePos(int(target[0]), int(target[1]))
                if not self.sim.world.in_bounds(pos):
                    return self._reject(msg_type, "target out of bounds")
                if self.sim.world.tiles[pos.row][pos.col].kind is not TileKind.FLOOR:
                    return self._reject(msg_type, "impassable target")
                self._queue.append(MoveTo(npc, pos))
            elif msg_type == "cmd.pause":
                self.paused = True
            elif msg_type == "cmd.resume":
                self.paused = False
            elif msg_type == "cmd.tick_rate":
                hz = message.get("hz", 0)
                if not isinstance(hz, (int, float)) or hz <= 0:
                    return self._reject(msg_type, "rate must be positive")
                self.tick_rate = float(hz)
            else:
                return self._reject(msg_type or "?", f"unknown command type {msg_type!r}")
        except Exception as err:  # validation errors become rejects
            return self._reject(msg_type, str(err))
        return {"type": "ack", "cmd": msg_type}

    def _reject(self, cmd: str, reason: str) -> dict:
        return {"type": "reject", "cmd": cmd, "reason": reason}

    def queue_commands(self, *commands: Command) -> None:
        """Programmatic ingestion: same ordered queue the wire commands use."""
        self._queue.extend(commands)

    # -- ticking ---------------------------------------------------------------

    def step(self) -> list[dict]:
        """Advance one tick: drain the queue, run, emit trace + snapshot."""
        commands, self._queue = self._queue, []
        events = self.sim.advance_tick(commands)
        messages = [self._trace_message(e) for e in events]
        messages.append(build_snapshot(self.sim))
        return messages

    def heartbeat(self) -> dict:
        return {"type": "heartbeat", "tick": self.sim.world.tick, "paused": self.paused}

    @staticmethod
    def _trace_message(event: TraceEvent) -> dict:
        return {"type": "trace", "event": event.as_dict()}

    # -- broadcast -----------------------------------------------------------

    def subscribe(self) -> asyncio.Queue:
        queue: asyncio.Queue = asyncio.Queue()
        self._subscribers.append(queue)
        return queue

    def unsubscribe(self, queue: asyncio.Queue) -> None:
        if queue in self._subscribers:
            self._subscribers.remove(queue)

    def broadcast(self, messages: list[dict]) -> None:
        for queue in list(self._subscribers):
            for message in messages:
                queue.put_nowait(message)

    async def run(self) -> None:
        while True:
            await asyncio.sleep(1.0 / self.tick_rate)
            if self.paused:
                self.broadcast([self.heartbeat()])
            else:
                self.broadcast(self.step())


def create_app(
    map_text: str,
    deliberator: str = "belief",
    tick_rate: float = DEFAULT_TICK_RATE,
) -> FastAPI:
    session = LiveSession(Simulation.from_map(map_text, deliberator), tick_rate)

    @contextlib.asynccontextmanager
    async def lifespan(app: FastAPI):
        task = asyncio.create_task(session.run())
        yield
        task.cancel()
        with contextlib.suppress(asyncio.CancelledError):
            await task

    app = FastAPI(lifespan=lifespan)
    app.state.session = session

    @app.websocket("/ws")
    async def ws_endpoint(websocket: WebSocket):
        await websocket.accept()
        queue = session.subscribe()
        await websocket.send_json(build_hello(session.sim, session.tick_rate, session.paused))

        async def pump_outgoing():
            while True:
                await websocket.send_json(await queue.get())

        sender = asyncio.create_task(pump_outgoing())
        try:
            while True:
                message = await websocket.receive_json()
                await websocket.send_json(session.enqueue(message))
        except WebSocketDisconnect:
            pass
        finally:
            sender.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await sender
            session.unsubscribe(queue)

    return app
