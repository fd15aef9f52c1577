import pytest

from gridagents.topology import build_area_graph, decompose_areas
from gridagents.world import CANONICAL_MAP, parse_map

DOOR_KNOWLEDGE_SCENARIO = """\
# golden knowledge walkthrough on the canonical map
@1  goto npc0 G        # all doors believed closed: no plan
@3  open a             # ground truth changes out of sight
@4  goto npc0 G        # still no plan, belief unchanged
@6  goto npc0 2,3      # walk within sight of door a...
@10 goto npc0 2,1      # ...and back to the start
@14 goto npc0 G        # now the plan goes through a
@41 goto npc0 2,1      # return once more
@50 open b             # unobserved opening...
@55 goto npc0 G        # ...must not change the plan
@80 stop
"""

BLOCKED_SHORTCUT_MAP = "!open a\n!open b\n!open c\n" + CANONICAL_MAP

BLOCKED_SHORTCUT_SCENARIO = """\
# every door starts open; the NPC tours the map, then the player shuts
# the shortcut behind its back
@1   goto npc0 2,2     # door a enters the sight cone
@4   goto npc0 3,2     # door b enters the sight cone
@8   goto npc0 5,7     # through b, door c enters the sight cone
@20  goto npc0 2,1     # back home
@45  goto npc0 G       # first trip: shortcut open
@80  goto npc0 2,1     # home again
@110 close a           # shut the shortcut, unobserved
@111 goto npc0 G       # second trip
@160 stop
"""


@pytest.fixture
def world():
    return parse_map(CANONICAL_MAP)


@pytest.fixture
def decomp(world):
    return decompose_areas(world)


@pytest.fixture
def graph(decomp):
    return build_area_graph(decomp)
