"""Activity/artifact dependency graph and progress linting.

Edges are stored as written: ``(x, y, input_for)`` means x is input for y,
``(y, x, needs)`` means y needs x, ``(a, z, results_in)`` means activity a
results in artifact z.  The graph itself is data; see ``data/default_graph.json``.
"""

from __future__ import annotations

import enum
import graphlib
import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping, Optional

SCHEMA_VERSION = 1

COLUMNS = ("External", "Internal", "Code", "Tests")
KINDS = ("Analysis", "Design", "Specification", "Test", "View")


class Relation(str, enum.Enum):
    INPUT_FOR = "input_for"
    NEEDS = "needs"
    RESULTS_IN = "results_in"


class Status(str, enum.Enum):
    ABSENT = "absent"
    DRAFT = "draft"
    COMPLETE = "complete"

    @property
    def rank(self) -> int:
        return ("absent", "draft", "complete").index(self.value)


class GraphError(ValueError):
    """Malformed graph or state data."""


class WorkflowUsageError(ValueError):
    """A query named something the graph does not contain."""


@dataclass(frozen=True)
class Node:
    name: str
    type: str  # activity | artifact
    column: str
    kind: str


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    relation: Relation


@dataclass(frozen=True)
class ActivityGraph:
    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]

    def node(self, name: str) -> Optional[Node]:
        return next((n for n in self.nodes if n.name == name), None)

    @property
    def activities(self) -> list[str]:
        return [n.name for n in self.nodes if n.type == "activity"]

    @property
    def artifacts(self) -> list[str]:
        return [n.name for n in self.nodes if n.type == "artifact"]

    def result_of(self, activity: str) -> Optional[str]:
        return next((e.target for e in self.edges if e.relation is Relation.RESULTS_IN and e.source == activity), None)

    def producers(self, artifact: str) -> list[str]:
        return [e.source for e in self.edges if e.relation is Relation.RESULTS_IN and e.target == artifact]

    def tracked(self) -> list[str]:
        """Names carrying their own status: artifacts, and activities that produce none."""
        return [n.name for n in self.nodes if n.type == "artifact" or self.result_of(n.name) is None]

    def validate(self) -> None:
        names = [n.name for n in self.nodes]
        if len(set(names)) != len(names):
            raise GraphError("duplicate node names")
        for n in self.nodes:
            if n.type not in ("activity", "artifact"):
                raise GraphError(f"{n.name}: type must be activity or artifact")
            if n.column not in COLUMNS or n.kind not in KINDS:
                raise GraphError(f"{n.name}: unknown column or kind")
        for e in self.edges:
            src, dst = self.node(e.source), self.node(e.target)
            if src is None or dst is None:
                raise GraphError(f"edge {e.source} -> {e.target} names an unknown node")
            if e.relation is Relation.RESULTS_IN and (src.type, dst.type) != ("activity", "artifact"):
                raise GraphError(f"results_in must go activity -> artifact: {e.source} -> {e.target}")
        sorter = graphlib.TopologicalSorter({n: set() for n in names})
        for e in self.edges:
            if e.relation is not Relation.NEEDS:
                sorter.add(e.target, e.source)
        try:
            sorter.prepare()
        except graphlib.CycleError as exc:
            raise GraphError(f"input_for/results_in cycle: {' -> '.join(exc.args[1])}") from None

    def to_json(self) -> str:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "kind": "good.activity-graph",
            "nodes": [{"name": n.name, "type": n.type, "column": n.column, "kind": n.kind} for n in self.nodes],
            "edges": [{"from": e.source, "to": e.target, "relation": e.relation.value} for e in self.edges],
        }
        return json.dumps(doc, indent=2) + "\n"


def load_graph(text: str) -> ActivityGraph:
    try:
        doc = json.loads(text)
        graph = ActivityGraph(
            tuple(Node(n["name"], n["type"], n["column"], n["kind"]) for n in doc["nodes"]),
            tuple(Edge(e["from"], e["to"], Relation(e["relation"])) for e in doc["edges"]),
        )
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"unreadable graph: {exc}") from None
    graph.validate()
    return graph


def default_graph() -> ActivityGraph:
    return load_graph(resources.files("good").joinpath("data/default_graph.json").read_text(encoding="utf-8"))


@dataclass(frozen=True)
class ArtifactState:
    """Progress snapshot.  Anything the graph tracks but the snapshot omits is absent."""

    statuses: Mapping[str, Status]
    robustness_pass: bool = False

    @classmethod
    def fresh(cls, graph: ActivityGraph) -> "ArtifactState":
        return cls({name: Status.ABSENT for name in graph.tracked()})

    @classmethod
    def of(cls, graph: ActivityGraph, statuses: Mapping[str, str], robustness_pass: bool = False) -> "ArtifactState":
        tracked = graph.tracked()
        unknown = sorted(set(statuses) - set(tracked))
        if unknown:
            raise GraphError(f"state names untracked nodes: {', '.join(unknown)}")
        try:
            full = {name: Status(statuses.get(name, "absent")) for name in tracked}
        except ValueError as exc:
            raise GraphError(str(exc)) from None
        return cls(full, robustness_pass)

    def status_of(self, graph: ActivityGraph, name: str) -> Status:
        """An activity's status is that of the artifact it results in."""
        target = graph.result_of(name) or name
        return self.statuses.get(target, Status.ABSENT)


def load_state(graph: ActivityGraph, text: str) -> ArtifactState:
    try:
        doc = json.loads(text)
        return ArtifactState.of(graph, doc.get("statuses", {}), bool(doc.get("robustness_pass", False)))
    except (json.JSONDecodeError, AttributeError) as exc:
        raise GraphError(f"unreadable state: {exc}") from None


@dataclass(frozen=True)
class Violation:
    needing: str
    needed: str
    needing_status: Status
    needed_status: Status

    def describe(self) -> str:
        return (
            f"{self.needing!r} is {self.needing_status.value} but needs {self.needed!r}, "
            f"which is {self.needed_status.value}"
        )


def _violations(graph: ActivityGraph, states: ArtifactState, subjects: Optional[set[str]] = None) -> list[Violation]:
    out = []
    for e in graph.edges:
        if e.relation is not Relation.NEEDS or (subjects is not None and e.source not in subjects):
            continue
        y, x = states.status_of(graph, e.source), states.status_of(graph, e.target)
        if y is Status.COMPLETE and x is not Status.COMPLETE:
            out.append(Violation(e.source, e.target, y, x))
    return out


def completion_check(graph: ActivityGraph, states: ArtifactState, artifact: str) -> list[Violation]:
    """Needs-rule violations that stop ``artifact`` from counting as complete."""
    if graph.node(artifact) is None:
        raise WorkflowUsageError(f"unknown artifact {artifact!r}")
    return _violations(graph, states, {artifact, *graph.producers(artifact)})


@dataclass(frozen=True)
class WorkflowReport:
    startable: tuple[str, ...]
    in_progress: tuple[str, ...]
    violations: tuple[Violation, ...]
    robustness_pass: bool = False
    revisitable: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "good.workflow-report",
            "startable": list(self.startable),
            "in_progress": list(self.in_progress),
            "violations": [
                {
                    "needing": v.needing,
                    "needed": v.needed,
                    "needing_status": v.needing_status.value,
                    "needed_status": v.needed_status.value,
                }
                for v in self.violations
            ],
            "robustness_pass": self.robustness_pass,
            "revisitable": list(self.revisitable),
        }


def status(graph: ActivityGraph, states: ArtifactState) -> WorkflowReport:
    """Where a project stands.  Reports only; nothing here prevents going back to an activity."""
    inputs: dict[str, list[str]] = {a: [] for a in graph.activities}
    for e in graph.edges:
        if e.relation is Relation.INPUT_FOR and e.target in inputs:
            inputs[e.target].append(e.source)

    def available(a: str) -> bool:
        return all(states.status_of(graph, src).rank >= Status.DRAFT.rank for src in inputs[a])

    startable = tuple(a for a in graph.activities if states.status_of(graph, a) is Status.ABSENT and available(a))
    in_progress = tuple(n for n in graph.tracked() if states.statuses.get(n) is Status.DRAFT)
    revisitable: tuple[str, ...] = ()
    if states.robustness_pass:
        # second pass over the same graph: every started activity may be reopened
        revisitable = tuple(a for a in graph.activities if states.status_of(graph, a) is not Status.ABSENT)
    return WorkflowReport(startable, in_progress, tuple(_violations(graph, states)), states.robustness_pass, revisitable)
