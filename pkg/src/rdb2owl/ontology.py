"""Ontology model lifted from the conceptual graph.

Class nodes become OWL classes; attribute nodes become datatype properties
whose typing mirrors the column constraints (key -> functional with exact
cardinality 1, unique -> functional with max cardinality 1, not-null ->
min cardinality 1); Has_A edges become object properties (join-table pairs
mutually inverse, unique foreign keys inverse-functional); IS_A edges become
subclass axioms. Triggers add an Event class carrying Time and Agent
properties, one Event subclass per trigger kind, one object property per
trigger, and an EventBinding consumed by the instance-store runtime.

All names entering the model are IRI-safe; distinct sources that sanitize
to the same name raise NameCollision rather than silently merging.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import HierarchyCycle, NameCollision, SchemaError, UnknownClass
from .graph import ConceptualGraph, EdgeLabel, GraphNode, NodeKind
from .iri import DEFAULT_IRI_BASE, sanitize_iri_fragment
from .relational import RelationalSchema, TriggerKind

EVENT_CLASS = "Event"
TIME_PROPERTY = "Time"
AGENT_PROPERTY = "Agent"

# SQL type token (arguments stripped) -> XSD datatype
_XSD_BY_SQL_TYPE = {
    "INT": "xsd:integer",
    "INTEGER": "xsd:integer",
    "SMALLINT": "xsd:integer",
    "BIGINT": "xsd:integer",
    "DECIMAL": "xsd:decimal",
    "NUMERIC": "xsd:decimal",
    "FLOAT": "xsd:double",
    "REAL": "xsd:double",
    "DOUBLE": "xsd:double",
    "CHAR": "xsd:string",
    "VARCHAR": "xsd:string",
    "TEXT": "xsd:string",
    "DATE": "xsd:date",
    "TIME": "xsd:time",
    "TIMESTAMP": "xsd:dateTime",
    "DATETIME": "xsd:dateTime",
    "BOOLEAN": "xsd:boolean",
}
# dialect synonyms normalized before lookup
_SQL_TYPE_SYNONYMS = {
    "DOUBLE PRECISION": "DOUBLE",
    "CHARACTER VARYING": "VARCHAR",
    "CHARACTER": "CHAR",
}


def xsd_datatype(sql_type: str) -> tuple[str, bool]:
    """Map a SQL type token (e.g. 'VARCHAR(50)') to an XSD datatype.

    Returns (datatype, known); unknown types fall back to xsd:string.
    """
    token = re.sub(r"\(.*\)", "", sql_type).strip().upper()
    token = " ".join(token.split())
    token = _SQL_TYPE_SYNONYMS.get(token, token)
    if token in _XSD_BY_SQL_TYPE:
        return _XSD_BY_SQL_TYPE[token], True
    return "xsd:string", False


@dataclass(frozen=True)
class OntClass:
    name: str
    is_event_subclass: bool = False


@dataclass(frozen=True)
class ObjectProp:
    name: str
    domain: str
    range: str
    inverse_of: str | None = None
    inverse_functional: bool = False


@dataclass(frozen=True)
class DataProp:
    name: str
    domain: str
    range_datatype: str
    functional: bool = False
    min_cardinality: int = 0
    max_cardinality: int | None = None

    def __post_init__(self) -> None:
        if self.functional and self.max_cardinality != 1:
            raise ValueError(f"functional property {self.name!r} must have max cardinality 1")
        if self.max_cardinality is not None and self.min_cardinality > self.max_cardinality:
            raise ValueError(f"cardinality bounds crossed on {self.name!r}")


@dataclass(frozen=True)
class EventBinding:
    """A compiled trigger: operations of `kind` on `owner_class` copy the
    touched individual into `target_class`."""

    trigger_name: str
    owner_class: str
    kind: TriggerKind
    target_class: str


@dataclass
class Individual:
    """An ABox member; `values` maps property names to literals, individual
    ids, or lists thereof. Mutable only through the instance store."""

    id: str
    cls: str
    values: dict = field(default_factory=dict)


@dataclass(frozen=True)
class OntologyModel:
    classes: tuple[OntClass, ...] = ()
    object_properties: tuple[ObjectProp, ...] = ()
    datatype_properties: tuple[DataProp, ...] = ()
    subclass_axioms: tuple[tuple[str, str], ...] = ()
    individuals: tuple[Individual, ...] = ()
    iri_base: str = DEFAULT_IRI_BASE
    event_bindings: tuple[EventBinding, ...] = ()
    warnings: tuple[str, ...] = ()

    def cls(self, name: str) -> OntClass:
        for c in self.classes:
            if c.name == name:
                return c
        raise UnknownClass(f"no class named {name!r}")

    def has_class(self, name: str) -> bool:
        return any(c.name == name for c in self.classes)

    def data_property(self, name: str) -> DataProp | None:
        for p in self.datatype_properties:
            if p.name == name:
                return p
        return None

    def object_property(self, name: str) -> ObjectProp | None:
        for p in self.object_properties:
            if p.name == name:
                return p
        return None

    def ancestors(self, class_name: str) -> set[str]:
        """Proper superclasses of `class_name` via the subclass axioms."""
        parents: dict[str, set[str]] = {}
        for sub, sup in self.subclass_axioms:
            parents.setdefault(sub, set()).add(sup)
        out: set[str] = set()
        frontier = [class_name]
        while frontier:
            for parent in parents.get(frontier.pop(), ()):
                if parent not in out:
                    out.add(parent)
                    frontier.append(parent)
        return out


# -- transformation rules -----------------------------------------------------

def rule_class_node(node: GraphNode) -> OntClass:
    """A class node becomes an ontology class."""
    if node.kind is not NodeKind.CLASS:
        raise SchemaError(f"{node.name!r} is not a class node")
    return OntClass(name=sanitize_iri_fragment(node.name))


def rule_attribute_node(node: GraphNode, owner: str, sql_type: str) -> DataProp:
    """An attribute node becomes a datatype property on its owning class.

    key      -> functional, exact cardinality 1
    unique   -> functional, max cardinality 1
    not_null -> min cardinality 1
    (none)   -> unconstrained
    """
    if node.kind is not NodeKind.ATTRIBUTE:
        raise SchemaError(f"{node.name!r} is not an attribute node")
    column = node.display_label or node.name
    name = sanitize_iri_fragment(f"{owner}.{column}")
    datatype, _known = xsd_datatype(sql_type)
    domain = sanitize_iri_fragment(owner)
    if node.type_tag == "key":
        return DataProp(name, domain, datatype, functional=True, min_cardinality=1, max_cardinality=1)
    if node.type_tag == "unique":
        return DataProp(name, domain, datatype, functional=True, max_cardinality=1)
    if node.type_tag == "not_null":
        return DataProp(name, domain, datatype, min_cardinality=1)
    return DataProp(name, domain, datatype)


def rule_edges(graph: ConceptualGraph) -> tuple[list[ObjectProp], list[tuple[str, str]]]:
    """Has_A edges become object properties (join-table pairs mutually
    inverse, unique edges inverse-functional); IS_A edges become subclass
    axioms."""
    inverse_of: dict[str, str] = {}
    for a, b in graph.inverse_pairs:
        inverse_of[a] = b
        inverse_of[b] = a
    props = []
    for edge in sorted(graph.edges_labeled(EdgeLabel.HAS_A), key=lambda e: e.edge_name):
        partner = inverse_of.get(edge.edge_name)
        props.append(
            ObjectProp(
                name=sanitize_iri_fragment(edge.edge_name),
                domain=sanitize_iri_fragment(edge.source),
                range=sanitize_iri_fragment(edge.target),
                inverse_of=sanitize_iri_fragment(partner) if partner else None,
                inverse_functional=edge.type_tag == "unique",
            )
        )
    axioms = [
        (sanitize_iri_fragment(e.source), sanitize_iri_fragment(e.target))
        for e in sorted(graph.edges_labeled(EdgeLabel.IS_A), key=lambda e: e.edge_name)
    ]
    return props, axioms


def rule_event_nodes(
    graph: ConceptualGraph,
) -> tuple[list[OntClass], list[ObjectProp], list[DataProp]]:
    """Event nodes bring in the Event class with Time and Agent properties,
    one Event subclass per trigger kind present (flagged is_event_subclass),
    and one object property per trigger from owner class to target class."""
    event_nodes = sorted(graph.nodes_of_kind(NodeKind.EVENT), key=lambda n: n.name)
    if not event_nodes:
        return [], [], []
    classes = [OntClass(EVENT_CLASS)]
    for tag in sorted({n.type_tag for n in event_nodes if n.type_tag}):
        classes.append(OntClass(TriggerKind(tag).class_name, is_event_subclass=True))
    data_props = [
        DataProp(AGENT_PROPERTY, EVENT_CLASS, "xsd:string"),
        DataProp(TIME_PROPERTY, EVENT_CLASS, "xsd:dateTime"),
    ]
    object_props = []
    for node in event_nodes:
        owner = _event_owner(graph, node.name)
        target = _event_target(graph, node.name)
        object_props.append(
            ObjectProp(
                name=sanitize_iri_fragment(node.name),
                domain=sanitize_iri_fragment(owner),
                range=sanitize_iri_fragment(target),
            )
        )
    return classes, object_props, data_props


def event_bindings(graph: ConceptualGraph) -> list[EventBinding]:
    """Compile each event node into a runtime binding."""
    out = []
    for node in sorted(graph.nodes_of_kind(NodeKind.EVENT), key=lambda n: n.name):
        out.append(
            EventBinding(
                trigger_name=sanitize_iri_fragment(node.name),
                owner_class=sanitize_iri_fragment(_event_owner(graph, node.name)),
                kind=TriggerKind(node.type_tag),
                target_class=sanitize_iri_fragment(_event_target(graph, node.name)),
            )
        )
    return out


def _event_owner(graph: ConceptualGraph, event_name: str) -> str:
    for e in graph.edges_labeled(EdgeLabel.HAS_EVENT):
        if e.target == event_name:
            return e.source
    raise SchemaError(f"event node {event_name!r} has no owning class")


def _event_target(graph: ConceptualGraph, event_name: str) -> str:
    for e in graph.edges_labeled(EdgeLabel.TO):
        if e.source == event_name:
            return e.target
    raise SchemaError(f"event node {event_name!r} has no target class")


# -- model assembly -------------------------------------------------------------

class _Registry:
    """Name -> (item, source description); collisions fail loudly."""

    def __init__(self, what: str):
        self.what = what
        self.items: dict[str, tuple[object, str]] = {}

    def add(self, name: str, item: object, source: str) -> None:
        if name in self.items:
            raise NameCollision(
                f"{self.what} name {name!r} produced by both {self.items[name][1]} and {source}"
            )
        self.items[name] = (item, source)

    def values(self) -> list:
        return [item for item, _src in self.items.values()]


def build_ontology(
    graph: ConceptualGraph,
    schema: RelationalSchema,
    iri_base: str = DEFAULT_IRI_BASE,
) -> OntologyModel:
    """Lift a conceptual graph into an ontology model.

    Deterministic and invariant under reordering of graph elements; raises
    NameCollision when two sources sanitize to one name.
    """
    warnings: list[str] = []
    classes = _Registry("class")
    props = _Registry("property")

    for node in sorted(graph.nodes_of_kind(NodeKind.CLASS), key=lambda n: n.name):
        classes.add(rule_class_node(node).name, rule_class_node(node), f"table {node.name!r}")

    for node in sorted(graph.nodes_of_kind(NodeKind.ATTRIBUTE), key=lambda n: n.name):
        owner = graph.attribute_owner(node.name)
        column = node.display_label or node.name
        sql_type = schema.table(owner).column(column).sql_type
        _dt, known = xsd_datatype(sql_type)
        if not known:
            warnings.append(
                f"unknown SQL type {sql_type!r} on {owner}.{column}; using xsd:string"
            )
        prop = rule_attribute_node(node, owner, sql_type)
        props.add(prop.name, prop, f"column {owner}.{column}")

    object_props, axioms = rule_edges(graph)
    for prop in object_props:
        props.add(prop.name, prop, f"edge {prop.name!r}")

    ev_classes, ev_props, ev_data = rule_event_nodes(graph)
    for cls in ev_classes:
        classes.add(cls.name, cls, "trigger event machinery")
        if cls.is_event_subclass:
            axioms.append((cls.name, EVENT_CLASS))
    for prop in ev_data:
        props.add(prop.name, prop, "trigger event machinery")
    for prop in ev_props:
        props.add(prop.name, prop, f"trigger {prop.name!r}")

    _check_axioms_acyclic(axioms)

    return OntologyModel(
        classes=tuple(sorted(classes.values(), key=lambda c: c.name)),
        object_properties=tuple(
            sorted((p for p in props.values() if isinstance(p, ObjectProp)), key=lambda p: p.name)
        ),
        datatype_properties=tuple(
            sorted((p for p in props.values() if isinstance(p, DataProp)), key=lambda p: p.name)
        ),
        subclass_axioms=tuple(sorted(axioms)),
        iri_base=iri_base,
        event_bindings=tuple(event_bindings(graph)),
        warnings=tuple(warnings),
    )


def _check_axioms_acyclic(axioms: list[tuple[str, str]]) -> None:
    succ: dict[str, list[str]] = {}
    for sub, sup in axioms:
        succ.setdefault(sub, []).append(sup)
    done: set[str] = set()
    for start in sorted(succ):
        path: list[str] = []
        on_path: set[str] = set()

        def visit(node: str) -> None:
            if node in done:
                return
            if node in on_path:
                cycle = path[path.index(node):] + [node]
                raise HierarchyCycle("subclass cycle: " + " -> ".join(cycle))
            on_path.add(node)
            path.append(node)
            for nxt in succ.get(node, ()):
                visit(nxt)
            path.pop()
            on_path.discard(node)
            done.add(node)

        visit(start)
