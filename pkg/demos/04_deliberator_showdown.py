"""Blocked-shortcut showdown: three deliberators, one closed door.

The NPC tours a fully open map, learning every door.  Then the player
closes the shortcut door a while nobody is looking and orders a second
trip.  The door-blind baseline walks into the closed door over and over;
the ground-truth baseline swerves around a door it never saw change (the
clairvoyance tell); the belief NPC tries once, sees, reroutes, and never
tries again.
"""

from pathlib import Path

from gridagents import compare_deliberators

base = Path(__file__).parent / "data"
report = compare_deliberators(
    (base / "blocked_shortcut.map").read_text(),
    (base / "blocked_shortcut.scenario").read_text(),
    max_ticks=200,
)

print(f"{'deliberator':<12} {'blocked':>8} {'clairvoyant':>12} {'reached':>8} {'ticks':>6}")
for kind in ("oblivious", "omniscient", "belief"):
    m = report.metrics[kind]
    ticks = m.ticks_to_goal if m.ticks_to_goal is not None else "-"
    print(
        f"{kind:<12} {m.blocked_attempts:>8} {m.clairvoyant_plan_changes:>12}"
        f" {str(m.reached_goal):>8} {ticks:>6}"
    )

print()
print("blocked     = times a route was abandoned at a closed door")
print("clairvoyant = plan changes with no observation that could explain them")
