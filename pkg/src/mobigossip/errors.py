"""Exception hierarchy. Everything raised on bad input derives from ``GossipError``."""


class GossipError(Exception):
    pass


class InvalidEdge(GossipError, ValueError):
    pass


class DisconnectedGraph(GossipError, ValueError):
    pass


class InvalidParams(GossipError, ValueError):
    pass


class GenerationFailed(GossipError, RuntimeError):
    pass


class StabilityViolation(GossipError, ValueError):
    pass


class DisconnectedFrame(DisconnectedGraph):
    pass


class ParseError(GossipError, ValueError):
    pass


class SchemaError(GossipError, ValueError):
    pass


class EmptySubset(GossipError, ValueError):
    pass


class FullSubset(GossipError, ValueError):
    pass


class TooLargeForExact(GossipError, ValueError):
    pass


class FrameMismatch(GossipError, ValueError):
    pass


class InvalidSpec(GossipError, ValueError):
    pass


class TraceIncomplete(GossipError, ValueError):
    pass
