"""Exception types shared across the simulator."""


class SimError(Exception):
    """Base class for all simulator errors."""


class MapError(SimError):
    """Base class for map parsing and validation errors."""


class RaggedMap(MapError):
    """Map lines are not all the same length, or the grid is too small."""


class DuplicateDoorId(MapError):
    """The same door glyph appears on more than one tile."""


class DuplicatePoi(MapError):
    """The same point-of-interest glyph appears on more than one tile."""


class NoNpcStart(MapError):
    """The map does not contain exactly one NPC start marker."""


class UnknownGlyph(MapError):
    """The map contains a character outside the map alphabet."""


class OutOfBounds(SimError):
    """A tile position lies outside the map."""


class UnknownDoor(SimError):
    """Referenced door id does not exist."""


class UnknownNpc(SimError):
    """Referenced NPC id does not exist."""


class UnknownArea(SimError):
    """Referenced area label does not exist."""


class MalformedDoor(MapError):
    """A door tile does not adjoin exactly two distinct areas."""


class StartBlocked(SimError):
    """Pathfinding was asked to start from an impassable tile."""


class RefinementFailed(SimError):
    """A macro plan step could not be refined into a tile path.

    Signals a corrupted area decomposition: within one area every tile
    is supposed to be reachable from every other.
    """


class DuplicateAction(SimError):
    """An action name was registered twice."""


class InvalidGoal(SimError):
    """A movement goal does not name a floor tile."""


class ParseError(SimError):
    """A scenario document could not be parsed."""


class UnknownReference(ParseError):
    """A scenario command references a door, POI, or NPC not in the map."""


class NonMonotoneTicks(ParseError):
    """Scenario command ticks are not non-decreasing."""
