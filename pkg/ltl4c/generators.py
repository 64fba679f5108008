"""
Synthetic trace shapes for the gen and bench commands.
Each shape mirrors one of the monitored case studies and ships with its property.
"""

import json
import logging
import os
import random

logger = logging.getLogger('ltl4c.generators')

PROPERTIES_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "properties")

MAX_CHUNK_SIZE = 4 * 1024 * 1024  # bytes


class TraceShape:
    """Base class for trace shapes"""

    def __init__(self, name, description, property_file):
        self.name = name
        self.description = description
        self.property_file = property_file
        self.logger = logging.getLogger(f'ltl4c.generators.{name}')

    @property
    def property_path(self):
        return os.path.join(PROPERTIES_DIR, self.property_file)

    def records(self, size, cardinality, rng):
        """Yield size records over cardinality objects"""
        raise NotImplementedError("Subclasses must implement records()")


class SocketShape(TraceShape):
    """Requests and responses on sockets; a share of requests is never answered"""

    def __init__(self, unanswered=0.02):
        super().__init__(
            name="socket",
            description="receive/respond events keyed by socket descriptor",
            property_file="socket.ltl4c",
        )
        self.unanswered = unanswered

    def records(self, size, cardinality, rng):
        pending = set()
        dropped = set()
        for _ in range(size):
            socket = str(rng.randrange(cardinality))
            if socket in pending and socket not in dropped:
                pending.discard(socket)
                yield {"socket": socket, "respond": socket}
            else:
                pending.add(socket)
                if rng.random() < self.unanswered:
                    dropped.add(socket)
                yield {"socket": socket, "receive": socket}


class ChunkShape(TraceShape):
    """Upload chunks per user; below_max binds the user when the chunk is small enough"""

    def __init__(self):
        super().__init__(
            name="chunk",
            description="chunk uploads keyed by user",
            property_file="chunk.ltl4c",
        )

    def records(self, size, cardinality, rng):
        for _ in range(size):
            user = f"u{rng.randrange(cardinality)}"
            chunk_size = rng.randint(MAX_CHUNK_SIZE // 4, MAX_CHUNK_SIZE + MAX_CHUNK_SIZE // 4)
            record = {"user": user, "chunk_size": chunk_size}
            if chunk_size <= MAX_CHUNK_SIZE:
                record["below_max"] = user
            yield record


class CacheShape(TraceShape):
    """Video requests; cached videos are occasionally fetched externally"""

    def __init__(self, external_rate=0.01):
        super().__init__(
            name="cache",
            description="video requests keyed by video and request id",
            property_file="cache.ltl4c",
        )
        self.external_rate = external_rate

    def records(self, size, cardinality, rng):
        cached = set()
        for request in range(size):
            video = f"v{rng.randrange(cardinality)}"
            record = {"vid": video, "req": str(request)}
            if video in cached:
                record["cached"] = video
                if rng.random() < self.external_rate:
                    record["external"] = str(request)
            else:
                record["external"] = str(request)
                cached.add(video)
            yield record


class LoginShape(TraceShape):
    """Login requests per user, some of them unauthorized"""

    def __init__(self, unauthorized_rate=0.1):
        super().__init__(
            name="login",
            description="login requests keyed by user and request id",
            property_file="login.ltl4c",
        )
        self.unauthorized_rate = unauthorized_rate

    def records(self, size, cardinality, rng):
        for request in range(size):
            status = "unauthorized" if rng.random() < self.unauthorized_rate else "authorized"
            yield {"rid": str(request), "user": f"user{rng.randrange(cardinality)}", "login": True, status: True}


def get_all_shapes():
    """Get all available trace shapes"""
    return [SocketShape(), ChunkShape(), CacheShape(), LoginShape()]


def get_shape(name):
    for shape in get_all_shapes():
        if shape.name == name:
            return shape
    raise ValueError(f"unknown trace shape {name!r}")


def generate_lines(shape_name, size, cardinality, seed=0):
    """JSON lines for a shape; identical output for identical arguments"""
    if size < 0 or cardinality < 1:
        raise ValueError("size must be >= 0 and cardinality >= 1")
    shape = get_shape(shape_name)
    rng = random.Random(seed)
    logger.info(f"Generating {size} {shape.name} events over {cardinality} objects (seed {seed})")
    for record in shape.records(size, cardinality, rng):
        yield json.dumps(record, sort_keys=True)
