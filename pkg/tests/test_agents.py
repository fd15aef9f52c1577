import pytest

from gridagents.agents import (
    FAILED,
    RUNNING,
    SUCCEEDED,
    ActionRegistry,
    ActionRequest,
    ActionRuntime,
    default_registry,
)
from gridagents.errors import DuplicateAction
from gridagents.simulation import MoveTo, OpenDoor, Simulation
from gridagents.trace import ACTION_START, ACTION_STATUS, NO_PLAN
from gridagents.world import DoorState, TilePos, set_door_state


def runtime_for(world):
    return ActionRuntime(world, "npc0", default_registry())


class TestRegistry:
    def test_builtins_present(self):
        assert default_registry().names() == ["move-to", "traverse-door"]

    def test_duplicate_registration(self):
        registry = ActionRegistry()
        registry.register("move-to", lambda *a: None)
        with pytest.raises(DuplicateAction):
            registry.register("move-to", lambda *a: None)

    def test_unknown_action_fails_as_event(self, world):
        runtime = runtime_for(world)
        statuses = runtime.invoke(ActionRequest("fly", {}))
        assert [s.status for s in statuses] == [FAILED]
        assert statuses[0].reason == "unknown_action"
        assert not runtime.busy


class TestMoveTo:
    def test_adjacent_tile_runs_then_succeeds(self, world):
        runtime = runtime_for(world)
        path = [TilePos(2, 1), TilePos(2, 2)]
        statuses = runtime.invoke(ActionRequest("move-to", {"path": path}))
        assert [s.status for s in statuses] == [RUNNING]
        moved, statuses = runtime.tick()
        assert moved == TilePos(2, 2)
        assert [s.status for s in statuses] == [SUCCEEDED]
        assert not runtime.busy

    def test_current_position_succeeds_immediately(self, world):
        runtime = runtime_for(world)
        statuses = runtime.invoke(ActionRequest("move-to", {"path": [TilePos(2, 1)]}))
        assert [s.status for s in statuses] == [RUNNING, SUCCEEDED]
        assert not runtime.busy

    def test_blocked_at_closed_door(self, world):
        runtime = runtime_for(world)
        path = [TilePos(2, i) for i in range(1, 7)]  # through closed door a
        runtime.invoke(ActionRequest("move-to", {"path": path}))
        statuses = []
        for _ in range(5):
            _, events = runtime.tick()
            statuses.extend(events)
            if statuses:
                break
        assert statuses[0].status == FAILED
        assert statuses[0].reason == "blocked"
        assert statuses[0].data["blocked_door"] == "a"
        assert world.npcs["npc0"].position == TilePos(2, 4)

    def test_one_action_at_a_time(self, world):
        runtime = runtime_for(world)
        runtime.invoke(ActionRequest("move-to", {"path": [TilePos(2, 1), TilePos(2, 2)]}))
        with pytest.raises(RuntimeError):
            runtime.invoke(ActionRequest("move-to", {"path": [TilePos(2, 1), TilePos(3, 1)]}))

    def test_cancel_is_terminal(self, world):
        runtime = runtime_for(world)
        runtime.invoke(ActionRequest("move-to", {"path": [TilePos(2, 1), TilePos(2, 2)]}))
        status = runtime.cancel()
        assert status.status == FAILED and status.reason == "canceled"
        assert not runtime.busy
        assert runtime.cancel() is None


class TestControllerThroughSimulation:
    """Controller behavior observed through full ticks; the controller
    itself never touches the world."""

    def test_idle_goal_produces_invoke(self, world):
        sim = Simulation(world)
        events = sim.advance_tick([MoveTo("npc0", TilePos(2, 3))])
        kinds = [e.kind for e in events]
        assert ACTION_START in kinds

    def test_failed_action_requeried_same_tick_as_arrival(self, world):
        sim = Simulation(world, deliberator="oblivious")
        sim.advance_tick([MoveTo("npc0", TilePos(2, 9))])  # blind route through a
        failure_tick = None
        requery_tick = None
        for _ in range(8):
            events = sim.advance_tick()
            for e in events:
                if e.kind == ACTION_STATUS and e.data.get("reason") == "blocked":
                    failure_tick = failure_tick or e.tick
                if failure_tick and e.kind == ACTION_START and e.tick > failure_tick:
                    requery_tick = requery_tick or e.tick
        assert failure_tick is not None and requery_tick == failure_tick + 1

    def test_mid_action_tick_emits_no_deliberation(self, world):
        sim = Simulation(world)
        sim.advance_tick([MoveTo("npc0", TilePos(2, 4))])
        events = sim.advance_tick()
        kinds = {e.kind for e in events}
        assert ACTION_START not in kinds and NO_PLAN not in kinds

    def test_exactly_one_terminal_status_per_invocation(self, world):
        set_door_state(world, "a", DoorState.OPEN)
        sim = Simulation(world)
        sim.advance_tick([MoveTo("npc0", TilePos(2, 9))])
        for _ in range(20):
            sim.advance_tick()
        starts = sim.trace.of_kind(ACTION_START)
        terminals = [
            e for e in sim.trace.of_kind(ACTION_STATUS)
            if e.data["status"] in (SUCCEEDED, FAILED)
        ]
        assert len(starts) == len(terminals)

    def test_cancel_command_clears_goal_and_action(self, world):
        sim = Simulation(world)
        sim.advance_tick([MoveTo("npc0", TilePos(2, 4))])
        from gridagents.simulation import CancelGoal

        events = sim.advance_tick([CancelGoal("npc0")])
        canceled = [e for e in events if e.kind == ACTION_STATUS]
        assert canceled and canceled[0].data["reason"] == "canceled"
        assert sim.agents["npc0"].deliberator.goal is None
        position = world.npcs["npc0"].position
        sim.advance_tick()
        assert world.npcs["npc0"].position == position
