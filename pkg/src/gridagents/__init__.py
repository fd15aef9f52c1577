"""Deterministic grid-world simulator with belief-driven NPC agents.

A library for studying how a non-player character should act when its
knowledge of the world (which doors are open) diverges from ground truth:
area-level planning over a connected-component decomposition, tile-level
A* with pluggable passability, a perception/deliberation/control/action
agent loop, a headless scenario harness, and a live websocket service.
"""

from .agents import ActionRequest, NoPlan, TickContext
from .deliberators import (
    BeliefDeliberator,
    BeliefState,
    MacroPlan,
    ObliviousDeliberator,
    OmniscientDeliberator,
    init_beliefs,
    make_deliberator,
    plan_high_level,
    refine_macro,
)
from .pathfinding import (
    GROUND_TRUTH,
    IGNORE_DOORS,
    PassabilityPolicy,
    astar,
    beliefs_policy,
    path_cost,
    path_is_valid,
)
from .perception import FovConfig, line_of_sight, perception_sweep, register_filter, visible_tiles
from .scenario import (
    Scenario,
    compare_deliberators,
    load_scenario,
    replay_commands,
    run_scenario,
    trace_metrics,
)
from .simulation import (
    CancelGoal,
    CloseDoor,
    MoveTo,
    OpenDoor,
    Simulation,
    Stop,
    ToggleDoor,
)
from .topology import (
    AreaDecomposition,
    AreaGraph,
    area_of,
    build_area_graph,
    decompose_areas,
    dump_labels,
)
from .trace import Trace, TraceEvent, parse_jsonl
from .world import (
    CANONICAL_MAP,
    DoorState,
    Facing,
    MoveOutcome,
    NpcPose,
    Tile,
    TileKind,
    TilePos,
    WorldObject,
    WorldState,
    is_passable,
    parse_map,
    set_door_state,
    spawn_npc,
    step_npc,
    tile_at,
)

__version__ = "0.1.0"
