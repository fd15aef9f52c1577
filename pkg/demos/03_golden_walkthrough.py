"""The four-step door walkthrough, narrated from the trace.

1. Told to reach G with every door believed closed, the NPC reports that
   no plan exists.
2. The player opens door a by command.  The NPC cannot see it, so a
   repeated order still yields no plan -- the world changed, its
   knowledge did not.
3. Scripted to stroll within sight of door a and back, the NPC now knows
   a is open; the next order produces the macro plan [traverse a] and it
   walks to G.
4. Door b opens while the NPC is elsewhere.  Asked again, it produces
   exactly the same plan: unobserved openings never change its mind.
"""

from pathlib import Path

from gridagents import load_scenario, parse_map, run_scenario

base = Path(__file__).parent / "data"
world = parse_map((base / "canonical.map").read_text())
scenario = load_scenario((base / "door_knowledge.scenario").read_text(), world)

trace = run_scenario(world, scenario, deliberator="belief")

INTERESTING = {"command", "no_plan", "plan_computed", "belief_update", "action_status"}
for event in trace.events:
    if event.kind not in INTERESTING:
        continue
    if event.kind == "action_status" and event.data.get("status") != "succeeded":
        continue
    who = event.npc or "world"
    print(f"tick {event.tick:>3}  {who:<6} {event.kind:<14} {event.data}")

plans = [e for e in trace.events if e.kind == "plan_computed" and e.data["goal"] == [2, 9]]
print()
print(f"Plan after observing a: {plans[0].data['steps']}")
print(f"Plan after b opened unobserved: {plans[1].data['steps']}  (identical)")
