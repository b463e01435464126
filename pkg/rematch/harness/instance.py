"""Instance files: a metric section, then the server set and the client order.

    metric line          # or general, star, hst
    point 0 -3
    ...
    servers 1 4 7
    clients 0 2 3        # optional, arrival order
    adversary star       # optional, clients come from the adaptive adversary
"""

import logging
from pathlib import Path

from rematch.adversaries import GeneratedInstance
from rematch.errors import ContractError, InfeasibleError, InstanceFormatError, InvalidPointError
from rematch.events import arrival_events, read_events, validate_stream, write_events
from rematch.hst import Hst, format_hst, parse_hst
from rematch.metrics import MetricSpace, StarMetric, format_metric, meaningful_lines, parse_metric
from rematch.metrics.serialization import Line

logger = logging.getLogger(__name__)

ADVERSARIES = ("star",)


def _ids(tokens: list[str], source: str, number: int) -> list[int]:
    try:
        return [int(x) for x in tokens]
    except ValueError:
        raise InstanceFormatError("point ids must be integers", source, number) from None


def _parse_metric_section(lines: list[Line], source: str) -> tuple[MetricSpace, int]:
    """Metric section at the head of `lines`; `metric hst` is followed by `node` lines."""
    if lines and lines[0][1].split() == ["metric", "hst"]:
        end = 1
        while end < len(lines) and lines[end][1].split()[0] == "node":
            end += 1
        return parse_hst(lines[1:end], source), end
    return parse_metric(lines, source)


def parse_instance(text: str, source: str = "<input>") -> GeneratedInstance:
    lines = meaningful_lines(text)
    metric, index = _parse_metric_section(lines, source)

    servers: list[int] | None = None
    clients: list[int] = []
    adversary: str | None = None
    for number, content in lines[index:]:
        keyword, *rest = content.split()
        if keyword == "servers" and servers is None:
            servers = _ids(rest, source, number)
        elif keyword == "clients" and not clients:
            clients = _ids(rest, source, number)
        elif keyword == "adversary" and adversary is None and len(rest) == 1:
            if rest[0] not in ADVERSARIES:
                raise InstanceFormatError(f"unknown adversary {rest[0]!r}", source, number)
            adversary = rest[0]
        else:
            raise InstanceFormatError(f"unexpected line {content!r}", source, number)

    if servers is None:
        raise InstanceFormatError("missing `servers` line", source)
    if adversary is not None and clients:
        raise InstanceFormatError("an adversary instance cannot list clients", source)
    if adversary == "star" and not isinstance(metric, StarMetric):
        raise InstanceFormatError("the star adversary needs a star metric", source)

    # ids, duplicates and feasibility of the arrival order
    try:
        validate_stream(arrival_events(servers, clients), metric.n_points)
    except (ContractError, InfeasibleError, InvalidPointError) as e:
        raise InstanceFormatError(str(e), source) from None
    return GeneratedInstance(
        metric=metric, servers=servers, clients=clients, adversary=adversary,
        name=Path(source).stem,
    )


def format_instance(instance: GeneratedInstance) -> str:
    metric = instance.metric
    lines = (
        ["metric hst", *format_hst(metric)] if isinstance(metric, Hst) else format_metric(metric)
    )
    lines.append("servers " + " ".join(str(s) for s in instance.servers))
    if instance.clients:
        lines.append("clients " + " ".join(str(c) for c in instance.clients))
    if instance.adversary is not None:
        lines.append(f"adversary {instance.adversary}")
    return "\n".join(lines) + "\n"


def read_instance(path: str | Path, events: str | Path | None = None) -> GeneratedInstance:
    instance = parse_instance(Path(path).read_text(encoding="utf-8"), str(path))
    if events is not None:
        if instance.clients or instance.adversary:
            raise InstanceFormatError("an events file replaces the client list", str(path))
        stream = read_events(events)
        prefix = len(instance.servers)
        # a stream may repeat the instance's servers as its leading arrivals
        head = arrival_events(instance.servers, [])
        if stream[:prefix] == head:
            stream = stream[prefix:]
        instance.events = stream
    logger.info(
        f"Loaded instance {path}: {instance.metric.METRIC_KIND} metric with "
        f"{instance.metric.n_points} points, {len(instance.servers)} servers"
    )
    return instance


def write_instance(instance: GeneratedInstance, path: str | Path,
                   events: str | Path | None = None) -> None:
    Path(path).write_text(format_instance(instance), encoding="utf-8")
    if instance.events is not None:
        if events is None:
            raise InstanceFormatError("instance has an event stream but no events path", str(path))
        write_events(arrival_events(instance.servers, []) + instance.events, events)
