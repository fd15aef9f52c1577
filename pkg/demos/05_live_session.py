"""Drive a live session by hand: the same machinery the websocket serves.

A LiveSession wraps one simulation behind a command queue.  Wire clients
send JSON commands; here we feed the queue directly and step the loop
ourselves, watching ground truth and belief diverge in the snapshots.

To run the real server instead:  gridagents serve --map demos/data/canonical.map --port 8000
then open the web client in frontend/ (see its README).
"""

from pathlib import Path

from gridagents import Simulation
from gridagents.server import LiveSession, build_snapshot

map_text = (Path(__file__).parent / "data" / "canonical.map").read_text()
session = LiveSession(Simulation.from_map(map_text, "belief"))


def door_line(snap):
    truth = ", ".join(f"{d}={s}" for d, s in snap["doors"].items())
    belief = ", ".join(
        f"{d}={v['state']}" for d, v in snap["beliefs"]["npc0"].items()
    )
    return f"truth[{truth}]  npc0-belief[{belief}]"


print("tick 0:", door_line(build_snapshot(session.sim)))

print("\n> toggle door a (applies at the next tick boundary)")
print("server says:", session.enqueue({"type": "cmd.toggle_door", "door": "a"}))
session.step()
print("tick 1:", door_line(build_snapshot(session.sim)))
print("  ground truth moved, the belief table did not: the NPC wasn't looking.")

print("\n> order npc0 toward the door and step a few ticks")
session.enqueue({"type": "cmd.move_to", "npc": "npc0", "target": [2, 4]})
for _ in range(4):
    session.step()
snap = build_snapshot(session.sim)
print(f"tick {snap['tick']}:", door_line(snap))
print(f"  npc0 now at {snap['npcs']['npc0']['position']}, and its belief caught up by seeing.")

print("\n> a wall click would be rejected before ever entering the queue")
print("server says:", session.enqueue({"type": "cmd.move_to", "npc": "npc0", "target": [0, 0]}))
