"""Instance store with trigger-derived event firing.

The store is the single mutable surface of the package: an ABox over a
generated ontology model. Creating, updating or deleting an individual
fires every event binding compiled from a matching trigger: a snapshot of
the touched individual is copied into the binding's target class, an
Event-subclass individual is minted carrying Agent (the firing class) and
Time (UTC timestamp) values, and a record is appended to the event log.

Copies made by a firing never fire bindings themselves (depth-1 cut), so
an audit class that itself owns triggers cannot start a cascade. Every
operation validates before mutating; a rejected operation leaves the store
untouched.

Single-writer contract: mutations must be externally serialized.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, replace
from datetime import datetime, timezone

from .errors import (
    CardinalityViolation,
    ScenarioError,
    UnknownClass,
    UnknownIndividual,
    UnknownProperty,
)
from .ontology import EventBinding, Individual, OntologyModel
from .relational import TriggerKind

__all__ = [
    "EventBinding",
    "EventRecord",
    "InstanceStore",
    "run_scenario",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EventRecord:
    """One firing: which event class, which class fired it, when, and which
    individual was touched."""

    event_class: str  # Insert | Update | Delete
    agent: str
    time: str  # ISO-8601 UTC, millisecond precision
    subject_individual: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "event": self.event_class,
                "agent": self.agent,
                "time": self.time,
                "subject": self.subject_individual,
            }
        )


class InstanceStore:
    """Mutable set of individuals over an immutable ontology model."""

    def __init__(self, model: OntologyModel):
        self.model = model
        self.individuals: dict[str, Individual] = {}
        self.event_log: list[EventRecord] = []
        self._counters: dict[str, int] = {}
        self._last_time = ""

    # -- operations -----------------------------------------------------------

    def create_instance(self, class_name: str, values: dict) -> str:
        """Add an individual; fires insert bindings owned by its class."""
        if not self.model.has_class(class_name):
            raise UnknownClass(f"no class named {class_name!r}")
        values = dict(values)
        self._check_values(class_name, values)
        new_id = self._next_id(class_name)
        self.individuals[new_id] = Individual(new_id, class_name, values)
        self._fire(TriggerKind.INSERT, class_name, new_id, values)
        return new_id

    def update_instance(self, ind_id: str, new_values: dict) -> None:
        """Merge values into an individual; update bindings fire on the
        after-image even when the value map is empty (an update happened)."""
        ind = self._get(ind_id)
        merged = {**ind.values, **new_values}
        self._check_values(ind.cls, merged)
        ind.values.clear()
        ind.values.update(merged)
        self._fire(TriggerKind.UPDATE, ind.cls, ind_id, dict(merged))

    def delete_instance(self, ind_id: str) -> None:
        """Remove an individual; delete bindings copy its final snapshot."""
        ind = self._get(ind_id)
        snapshot = dict(ind.values)
        del self.individuals[ind_id]
        self._fire(TriggerKind.DELETE, ind.cls, ind_id, snapshot)

    def query_events(
        self, class_name: str | None = None, kind: str | TriggerKind | None = None
    ) -> list[EventRecord]:
        """Log entries in append order, optionally filtered by firing class
        and/or event kind."""
        if isinstance(kind, TriggerKind):
            kind = kind.class_name
        out = []
        for record in self.event_log:
            if class_name is not None and record.agent != class_name:
                continue
            if kind is not None and record.event_class != kind:
                continue
            out.append(record)
        return out

    def to_model(self) -> OntologyModel:
        """The ontology model with the store's individuals attached."""
        individuals = tuple(sorted(self.individuals.values(), key=lambda i: i.id))
        return replace(self.model, individuals=individuals)

    # -- internals --------------------------------------------------------------

    def _get(self, ind_id: str) -> Individual:
        ind = self.individuals.get(ind_id)
        if ind is None:
            raise UnknownIndividual(f"no individual with id {ind_id!r}")
        return ind

    def _next_id(self, class_name: str) -> str:
        self._counters[class_name] = self._counters.get(class_name, 0) + 1
        return f"{class_name}_{self._counters[class_name]}"

    def _now(self) -> str:
        stamp = (
            datetime.now(timezone.utc)
            .isoformat(timespec="milliseconds")
            .replace("+00:00", "Z")
        )
        # keep the log nondecreasing even if the wall clock steps back
        if stamp < self._last_time:
            stamp = self._last_time
        self._last_time = stamp
        return stamp

    def _check_values(self, class_name: str, values: dict) -> None:
        domains = {class_name} | self.model.ancestors(class_name)
        for key, value in values.items():
            prop = self.model.data_property(key) or self.model.object_property(key)
            if prop is None:
                raise UnknownProperty(f"no property named {key!r}")
            if prop.domain not in domains:
                raise UnknownProperty(
                    f"property {key!r} has domain {prop.domain!r}, not {class_name!r}"
                )
            functional = getattr(prop, "functional", False) or (
                getattr(prop, "max_cardinality", None) == 1
            )
            if functional and isinstance(value, (list, tuple)) and len(value) > 1:
                raise CardinalityViolation(
                    f"property {key!r} allows at most one value, got {len(value)}"
                )
        for prop in self.model.datatype_properties:
            if prop.min_cardinality >= 1 and prop.domain in domains:
                if values.get(prop.name) is None:
                    raise CardinalityViolation(
                        f"class {class_name!r} requires a value for {prop.name!r}"
                    )

    def _fire(self, kind: TriggerKind, owner_class: str, subject_id: str, snapshot: dict) -> None:
        fired = [
            b
            for b in self.model.event_bindings
            if b.owner_class == owner_class and b.kind is kind
        ]
        for binding in sorted(fired, key=lambda b: b.trigger_name):
            stamp = self._now()
            copy_id = self._next_id(binding.target_class)
            copy_values = self._remap_values(owner_class, binding.target_class, snapshot)
            # direct insert: a binding-made copy must not fire further bindings
            self.individuals[copy_id] = Individual(copy_id, binding.target_class, copy_values)
            event_cls = kind.class_name
            event_id = self._next_id(event_cls)
            self.individuals[event_id] = Individual(
                event_id, event_cls, {"Agent": owner_class, "Time": stamp}
            )
            self.event_log.append(EventRecord(event_cls, owner_class, stamp, subject_id))

    def _remap_values(self, owner: str, target: str, snapshot: dict) -> dict:
        """Copy values across by property local name: Owner_x -> Target_x.

        Values with no counterpart on the target class are dropped (the
        audit table is assumed structurally parallel; mismatches warn)."""
        out: dict = {}
        prefix = owner + "_"
        for key in sorted(snapshot):
            if key.startswith(prefix):
                candidate = f"{target}_{key[len(prefix):]}"
                prop = self.model.data_property(candidate) or self.model.object_property(candidate)
                if prop is not None and prop.domain == target:
                    out[candidate] = snapshot[key]
                    continue
            log.warning(
                "dropping value of %r: no matching property on target class %r", key, target
            )
        return out


# -- scenario scripts ----------------------------------------------------------

_CREATE_RE = re.compile(r"^create\s+(\S+)\s*\{(.*)\}\s*$")
_UPDATE_RE = re.compile(r"^update\s+(\S+)\s*\{(.*)\}\s*$")
_DELETE_RE = re.compile(r"^delete\s+(\S+)\s*$")


def _parse_value(text: str):
    text = text.strip()
    if len(text) >= 2 and text[0] == '"' and text[-1] == '"':
        return text[1:-1]
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def _parse_value_map(body: str, line_no: int) -> dict:
    body = body.strip()
    if not body:
        return {}
    values: dict = {}
    # split on commas outside double quotes
    parts, buf, quoted = [], [], False
    for ch in body:
        if ch == '"':
            quoted = not quoted
        if ch == "," and not quoted:
            parts.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
    parts.append("".join(buf))
    for part in parts:
        if "=" not in part:
            raise ScenarioError(line_no, f"expected key=value, got {part.strip()!r}")
        key, _, raw = part.partition("=")
        key = key.strip()
        if not key:
            raise ScenarioError(line_no, "empty property name")
        values[key] = _parse_value(raw)
    return values


def run_scenario(store: InstanceStore, text: str) -> list[str]:
    """Execute a line-oriented scenario script against the store.

    Commands: `create <Class> {k=v,...}`, `update <id> {k=v,...}`,
    `delete <id>`, `dump-events`. Blank lines and `#` comments are skipped.
    Returns output lines; raises ScenarioError naming the failing line.
    """
    outputs: list[str] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line == "dump-events":
                outputs.extend(r.to_json() for r in store.event_log)
                continue
            m = _CREATE_RE.match(line)
            if m:
                new_id = store.create_instance(m.group(1), _parse_value_map(m.group(2), line_no))
                outputs.append(f"created {new_id}")
                continue
            m = _UPDATE_RE.match(line)
            if m:
                store.update_instance(m.group(1), _parse_value_map(m.group(2), line_no))
                outputs.append(f"updated {m.group(1)}")
                continue
            m = _DELETE_RE.match(line)
            if m:
                store.delete_instance(m.group(1))
                outputs.append(f"deleted {m.group(1)}")
                continue
        except ScenarioError:
            raise
        except (UnknownClass, UnknownIndividual, UnknownProperty, CardinalityViolation) as exc:
            raise ScenarioError(line_no, str(exc)) from exc
        raise ScenarioError(line_no, f"unrecognized command: {line!r}")
    return outputs
