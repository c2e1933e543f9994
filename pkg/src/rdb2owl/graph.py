"""Conceptual middle graph between the relational schema and the ontology.

Nodes are classes (from entity tables), attributes (from columns) and events
(from triggers); edges carry one of five labels:

  Has_A      class -> class        association (join tables, foreign keys)
  Has_Att    class -> attribute    column ownership
  IS_A       class -> class        hierarchy (a foreign key that is the
                                   whole primary key)
  Has_event  class -> event        trigger ownership
  To         event -> class        trigger insert target

Attribute node names are qualified "<Table>.<column>" so they stay unique
graph-wide; the bare column name survives as the display label. Edge names
are deterministic per table, so rebuilding from a reordered script yields
the same node and edge sets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from .errors import HierarchyCycle, NameCollision, SchemaError
from .relational import (
    RelationalSchema,
    TableDef,
    TableKind,
    data_columns,
)

ATTRIBUTE_TAGS = ("key", "unique", "not_null")
EVENT_TAGS = ("insert", "update", "delete")


class NodeKind(Enum):
    CLASS = "class"
    ATTRIBUTE = "attribute"
    EVENT = "event"


class EdgeLabel(Enum):
    HAS_A = "Has_A"
    HAS_ATT = "Has_Att"
    IS_A = "IS_A"
    HAS_EVENT = "Has_event"
    TO = "To"


@dataclass(frozen=True)
class GraphNode:
    name: str
    kind: NodeKind
    type_tag: str | None = None
    display_label: str | None = None

    def __post_init__(self) -> None:
        if self.type_tag is not None:
            allowed = {
                NodeKind.ATTRIBUTE: ATTRIBUTE_TAGS,
                NodeKind.EVENT: EVENT_TAGS,
                NodeKind.CLASS: (),
            }[self.kind]
            if self.type_tag not in allowed:
                raise ValueError(f"{self.kind.value} node cannot carry type {self.type_tag!r}")


@dataclass(frozen=True)
class GraphEdge:
    source: str
    label: EdgeLabel
    target: str
    edge_name: str
    type_tag: str | None = None

    def __post_init__(self) -> None:
        if self.type_tag is not None and self.type_tag != "unique":
            raise ValueError(f"edge type must be 'unique', not {self.type_tag!r}")


@dataclass(frozen=True)
class ConceptualGraph:
    nodes: tuple[GraphNode, ...] = ()
    edges: tuple[GraphEdge, ...] = ()
    # edge-name pairs born of one join table; consumed by inverse-property pairing
    inverse_pairs: tuple[tuple[str, str], ...] = ()

    def node(self, name: str) -> GraphNode:
        for n in self.nodes:
            if n.name == name:
                return n
        raise KeyError(name)

    def nodes_of_kind(self, kind: NodeKind) -> list[GraphNode]:
        return [n for n in self.nodes if n.kind is kind]

    def edges_labeled(self, label: EdgeLabel) -> list[GraphEdge]:
        return [e for e in self.edges if e.label is label]

    def attribute_owner(self, node_name: str) -> str:
        """Source class of the single Has_Att edge into an attribute node."""
        owners = [
            e.source for e in self.edges if e.label is EdgeLabel.HAS_ATT and e.target == node_name
        ]
        if len(owners) != 1:
            raise SchemaError(f"attribute node {node_name!r} has {len(owners)} owners")
        return owners[0]


# -- transformation rules -----------------------------------------------------

def rule_entity_table(table: TableDef) -> GraphNode:
    """An entity table becomes a class node (casing preserved)."""
    if table.kind is not TableKind.ENTITY:
        raise SchemaError(f"{table.name!r} is not an entity table")
    return GraphNode(name=table.name, kind=NodeKind.CLASS)


def rule_relational_table(
    table: TableDef, schema: RelationalSchema
) -> tuple[GraphEdge, GraphEdge]:
    """A join table becomes two Has_A edges with swapped endpoints, later
    paired as mutually inverse relations. Contributes no nodes."""
    if table.kind is not TableKind.RELATIONAL:
        raise SchemaError(f"{table.name!r} is not a relational table")
    fk1, fk2 = table.foreign_keys
    ref1 = schema.table(fk1.referenced_table).name
    ref2 = schema.table(fk2.referenced_table).name
    name1 = f"{table.name}_{ref1}_has_{ref2}"
    name2 = f"{table.name}_{ref2}_has_{ref1}"
    if name1 == name2:  # self-join table: both keys point at the same table
        name2 += "_2"
    return (
        GraphEdge(ref1, EdgeLabel.HAS_A, ref2, name1),
        GraphEdge(ref2, EdgeLabel.HAS_A, ref1, name2),
    )


def _column_tag(table: TableDef, col_name: str, is_unique: bool, is_not_null: bool) -> str | None:
    # one tag per node; key subsumes unique subsumes not_null
    if col_name.casefold() in {c.casefold() for c in table.primary_key}:
        return "key"
    if is_unique:
        return "unique"
    if is_not_null:
        return "not_null"
    return None


def rule_columns(table: TableDef) -> list[tuple[GraphNode, GraphEdge]]:
    """Columns of an entity table become attribute nodes plus Has_Att edges.

    Foreign-key columns are skipped (they surface as edges); primary-key
    columns get 'key' type, then declared UNIQUE, then declared NOT NULL.
    """
    if table.kind is not TableKind.ENTITY:
        raise SchemaError(f"{table.name!r} is not an entity table")
    fk_cols = table.fk_column_names
    out: list[tuple[GraphNode, GraphEdge]] = []
    for col in table.columns:
        if col.name.casefold() in fk_cols:
            continue
        node = GraphNode(
            name=f"{table.name}.{col.name}",
            kind=NodeKind.ATTRIBUTE,
            type_tag=_column_tag(table, col.name, col.is_unique, col.is_not_null),
            display_label=col.name,
        )
        edge = GraphEdge(
            source=table.name,
            label=EdgeLabel.HAS_ATT,
            target=node.name,
            edge_name=f"{table.name}_has_att_{col.name}",
        )
        out.append((node, edge))
    return out


def rule_foreign_keys(table: TableDef, schema: RelationalSchema) -> list[GraphEdge]:
    """Foreign keys of an entity table become edges toward the referenced
    class: IS_A when the key columns are exactly the primary key (hierarchy),
    otherwise Has_A, carrying 'unique' type for unique foreign keys.

    A second key to the same table gets an ordinal suffix, counted per
    table so names do not depend on statement order.
    """
    if table.kind is not TableKind.ENTITY:
        raise SchemaError(f"{table.name!r} is not an entity table")
    pk_ci = frozenset(c.casefold() for c in table.primary_key)
    out: list[GraphEdge] = []
    used: dict[str, int] = {}
    for fk in table.foreign_keys:
        target = schema.table(fk.referenced_table).name
        is_hierarchy = bool(pk_ci) and frozenset(c.casefold() for c in fk.local_columns) == pk_ci
        base = f"{table.name}_is_a_{target}" if is_hierarchy else f"{table.name}_has_{target}"
        used[base] = used.get(base, 0) + 1
        name = base if used[base] == 1 else f"{base}_{used[base]}"
        if is_hierarchy:
            out.append(GraphEdge(table.name, EdgeLabel.IS_A, target, name))
        else:
            out.append(
                GraphEdge(
                    table.name, EdgeLabel.HAS_A, target, name,
                    type_tag="unique" if fk.is_unique else None,
                )
            )
    return out


def rule_triggers(schema: RelationalSchema) -> list[tuple[GraphNode, GraphEdge, GraphEdge]]:
    """Each trigger becomes an event node wired between its owner class and
    the class it inserts into."""
    out = []
    for tr in schema.triggers:
        owner = schema.table(tr.owner_table).name
        target = schema.table(tr.target_table).name
        node = GraphNode(name=tr.name, kind=NodeKind.EVENT, type_tag=tr.kind.value)
        own_edge = GraphEdge(owner, EdgeLabel.HAS_EVENT, tr.name, f"{owner}_has_event_{tr.name}")
        to_edge = GraphEdge(tr.name, EdgeLabel.TO, target, f"{tr.name}_to_{target}")
        out.append((node, own_edge, to_edge))
    return out


def build_graph(schema: RelationalSchema) -> ConceptualGraph:
    """Apply all transformation rules in order: entity tables, join tables,
    columns, foreign keys, triggers. Deterministic; raises HierarchyCycle
    when IS_A edges loop."""
    if any(t.kind is None for t in schema.tables):
        raise SchemaError("schema must be classified before building the graph")

    nodes: list[GraphNode] = []
    edges: list[GraphEdge] = []
    pairs: list[tuple[str, str]] = []

    entity = [t for t in schema.tables if t.kind is TableKind.ENTITY]
    relational = [t for t in schema.tables if t.kind is TableKind.RELATIONAL]

    nodes.extend(rule_entity_table(t) for t in entity)
    for t in relational:
        e1, e2 = rule_relational_table(t, schema)
        edges.extend((e1, e2))
        pairs.append((e1.edge_name, e2.edge_name))
    for t in entity:
        for node, edge in rule_columns(t):
            nodes.append(node)
            edges.append(edge)
    for t in entity:
        edges.extend(rule_foreign_keys(t, schema))
    for node, own_edge, to_edge in rule_triggers(schema):
        nodes.append(node)
        edges.extend((own_edge, to_edge))

    _check_unique_names(nodes, edges)
    graph = ConceptualGraph(tuple(nodes), tuple(edges), tuple(pairs))
    _check_hierarchy_acyclic(graph)
    return graph


def _check_unique_names(nodes: list[GraphNode], edges: list[GraphEdge]) -> None:
    seen: dict[str, GraphNode] = {}
    for n in nodes:
        if n.name in seen:
            raise NameCollision(
                f"node name {n.name!r} produced by both a {seen[n.name].kind.value} "
                f"and a {n.kind.value}"
            )
        seen[n.name] = n
    edge_seen: set[str] = set()
    for e in edges:
        if e.edge_name in edge_seen:
            raise NameCollision(f"edge name {e.edge_name!r} produced twice")
        edge_seen.add(e.edge_name)


def _check_hierarchy_acyclic(graph: ConceptualGraph) -> None:
    succ: dict[str, list[str]] = {}
    for e in graph.edges_labeled(EdgeLabel.IS_A):
        succ.setdefault(e.source, []).append(e.target)
    done: set[str] = set()
    for start in sorted(succ):
        stack: list[str] = []
        on_path: set[str] = set()

        def visit(node: str) -> None:
            if node in done:
                return
            if node in on_path:
                cycle = stack[stack.index(node):] + [node]
                raise HierarchyCycle("IS_A cycle: " + " -> ".join(cycle))
            on_path.add(node)
            stack.append(node)
            for nxt in succ.get(node, ()):
                visit(nxt)
            stack.pop()
            on_path.discard(node)
            done.add(node)

        visit(start)


# -- exports ------------------------------------------------------------------

_DOT_SHAPES = {NodeKind.CLASS: "ellipse", NodeKind.ATTRIBUTE: "box", NodeKind.EVENT: "triangle"}


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(graph: ConceptualGraph) -> str:
    """Deterministic DOT rendering: classes as ellipses, attributes as boxes,
    events as triangles; nodes and edges in sorted order."""
    lines = ["digraph G {"]
    for node in sorted(graph.nodes, key=lambda n: n.name):
        label = node.display_label or node.name
        if node.type_tag:
            label += f"\\n[{node.type_tag}]"
        lines.append(
            f'  "{_dot_escape(node.name)}" [shape={_DOT_SHAPES[node.kind]}, label="{_dot_escape(label)}"];'
        )
    for edge in sorted(graph.edges, key=lambda e: e.edge_name):
        label = f"{edge.label.value}\\n{edge.edge_name}"
        if edge.type_tag:
            label += f"\\n[{edge.type_tag}]"
        lines.append(
            f'  "{_dot_escape(edge.source)}" -> "{_dot_escape(edge.target)}" [label="{_dot_escape(label)}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_json(graph: ConceptualGraph) -> str:
    """Stable JSON dump of nodes and edges for external tooling."""
    payload = {
        "nodes": [
            {
                "name": n.name,
                "kind": n.kind.value,
                "type": n.type_tag,
                "label": n.display_label or n.name,
            }
            for n in sorted(graph.nodes, key=lambda n: n.name)
        ],
        "edges": [
            {
                "name": e.edge_name,
                "source": e.source,
                "label": e.label.value,
                "target": e.target,
                "type": e.type_tag,
            }
            for e in sorted(graph.edges, key=lambda e: e.edge_name)
        ],
        "inverse_pairs": sorted(list(p) for p in graph.inverse_pairs),
    }
    return json.dumps(payload, indent=2) + "\n"
