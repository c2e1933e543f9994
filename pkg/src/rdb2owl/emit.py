"""Deterministic OWL serialization: Turtle and RDF/XML.

Output is fully sorted (classes, then object properties, then datatype
properties, then individuals, each alphabetical), so the same model and
config always produce byte-identical documents. Cardinality constraints
are emitted as owl:Restriction blank nodes under rdfs:subClassOf of the
property's domain class: exact cardinality 1 for key-derived properties,
max 1 for unique-derived, min 1 for not-null-derived.

Values of xsd:string properties are written as plain literals in both
syntaxes; every other datatype gets an explicit literal type, keeping the
two formats triple-equivalent.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import InvalidIri, UnknownProperty
from .iri import DEFAULT_IRI_BASE, FRAGMENT_RE, require_iri_base, sanitize_iri_fragment
from .ontology import DataProp, Individual, ObjectProp, OntologyModel

__all__ = ["OwlFormat", "EmitConfig", "emit", "sanitize_iri_fragment"]

_XSD_BASE = "http://www.w3.org/2001/XMLSchema#"
_OWL_BASE = "http://www.w3.org/2002/07/owl#"
_RDF_BASE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
_RDFS_BASE = "http://www.w3.org/2000/01/rdf-schema#"


class OwlFormat(Enum):
    TURTLE = "turtle"
    RDFXML = "rdfxml"


@dataclass(frozen=True)
class EmitConfig:
    format: OwlFormat = OwlFormat.TURTLE
    iri_base: str = DEFAULT_IRI_BASE
    ontology_iri: str | None = None

    def __post_init__(self) -> None:
        require_iri_base(self.iri_base)
        if self.ontology_iri is None:
            object.__setattr__(self, "ontology_iri", self.iri_base.rstrip("#/"))

    def resolve(self, name: str) -> str:
        return self.iri_base + name


def _safe_name(name: str) -> str:
    """Sanitize (idempotent for model-built names) and insist on legality."""
    safe = sanitize_iri_fragment(name)
    if not FRAGMENT_RE.match(safe):
        raise InvalidIri(f"cannot build an IRI fragment from {name!r}")
    return safe


def _restriction_facet(prop: DataProp) -> tuple[str, int] | None:
    """Which cardinality restriction a property contributes, if any."""
    if prop.min_cardinality == 1 and prop.max_cardinality == 1:
        return ("cardinality", 1)
    if prop.max_cardinality == 1:
        return ("maxCardinality", 1)
    if prop.min_cardinality == 1:
        return ("minCardinality", 1)
    return None


@dataclass(frozen=True)
class _ClassView:
    name: str
    supers: tuple[str, ...]
    restrictions: tuple[tuple[str, str, int], ...]  # (property, facet, value)


def _class_views(model: OntologyModel) -> list[_ClassView]:
    supers: dict[str, list[str]] = {}
    for sub, sup in model.subclass_axioms:
        supers.setdefault(_safe_name(sub), []).append(_safe_name(sup))
    restrictions: dict[str, list[tuple[str, str, int]]] = {}
    for prop in model.datatype_properties:
        facet = _restriction_facet(prop)
        if facet is not None:
            restrictions.setdefault(_safe_name(prop.domain), []).append(
                (_safe_name(prop.name), facet[0], facet[1])
            )
    views = []
    for cls in sorted(model.classes, key=lambda c: c.name):
        name = _safe_name(cls.name)
        views.append(
            _ClassView(
                name=name,
                supers=tuple(sorted(supers.get(name, ()))),
                restrictions=tuple(sorted(restrictions.get(name, ()))),
            )
        )
    return views


def _literal_parts(model: OntologyModel, prop: DataProp, value: object) -> tuple[str, str | None]:
    """Lexical form plus datatype IRI suffix (None for plain xsd:string)."""
    if isinstance(value, bool):
        lexical = "true" if value else "false"
    else:
        lexical = str(value)
    local = prop.range_datatype.removeprefix("xsd:")
    if local == "string":
        return lexical, None
    return lexical, local


def _individual_values(model: OntologyModel, ind: Individual):
    """Yield (prop_name, kind, payload) per value, sorted and flattened.

    kind is 'lit' (payload: lexical, datatype-local-or-None) or 'ref'
    (payload: target individual name).
    """
    for key in sorted(ind.values):
        value = ind.values[key]
        values = value if isinstance(value, (list, tuple)) else [value]
        dp = model.data_property(key)
        op = model.object_property(key)
        if dp is None and op is None:
            raise UnknownProperty(f"individual {ind.id!r} asserts unknown property {key!r}")
        rendered = []
        for v in values:
            if dp is not None:
                rendered.append(("lit", _literal_parts(model, dp, v)))
            else:
                rendered.append(("ref", _safe_name(str(v))))
        for kind, payload in sorted(rendered, key=lambda item: str(item[1])):
            yield _safe_name(key), kind, payload


def emit(model: OntologyModel, config: EmitConfig | None = None) -> str:
    """Serialize the model in the configured concrete syntax."""
    config = config or EmitConfig()
    if config.format is OwlFormat.TURTLE:
        return _emit_turtle(model, config)
    return _emit_rdfxml(model, config)


# -- Turtle ---------------------------------------------------------------------

def _ttl_escape(text: str) -> str:
    return (
        text.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
    )


def _ttl_literal(lexical: str, datatype_local: str | None) -> str:
    quoted = f'"{_ttl_escape(lexical)}"'
    return quoted if datatype_local is None else f"{quoted}^^xsd:{datatype_local}"


def _emit_turtle(model: OntologyModel, config: EmitConfig) -> str:
    out = [
        f"@prefix : <{config.iri_base}> .",
        f"@prefix owl: <{_OWL_BASE}> .",
        f"@prefix rdf: <{_RDF_BASE}> .",
        f"@prefix rdfs: <{_RDFS_BASE}> .",
        f"@prefix xsd: <{_XSD_BASE}> .",
        "",
        f"<{config.ontology_iri}> a owl:Ontology .",
    ]

    views = _class_views(model)
    if views:
        out += ["", "### Classes"]
    for view in views:
        parts = [f":{view.name} a owl:Class"]
        for sup in view.supers:
            parts.append(f"    rdfs:subClassOf :{sup}")
        for prop, facet, value in view.restrictions:
            parts.append(
                "    rdfs:subClassOf [\n"
                "        a owl:Restriction ;\n"
                f"        owl:onProperty :{prop} ;\n"
                f'        owl:{facet} "{value}"^^xsd:nonNegativeInteger\n'
                "    ]"
            )
        out += ["", " ;\n".join(parts) + " ."]

    obj_props = sorted(model.object_properties, key=lambda p: p.name)
    if obj_props:
        out += ["", "### Object properties"]
    for prop in obj_props:
        types = "owl:ObjectProperty"
        if prop.inverse_functional:
            types += " , owl:InverseFunctionalProperty"
        parts = [
            f":{_safe_name(prop.name)} a {types}",
            f"    rdfs:domain :{_safe_name(prop.domain)}",
            f"    rdfs:range :{_safe_name(prop.range)}",
        ]
        if prop.inverse_of:
            parts.append(f"    owl:inverseOf :{_safe_name(prop.inverse_of)}")
        out += ["", " ;\n".join(parts) + " ."]

    data_props = sorted(model.datatype_properties, key=lambda p: p.name)
    if data_props:
        out += ["", "### Datatype properties"]
    for prop in data_props:
        types = "owl:DatatypeProperty"
        if prop.functional:
            types += " , owl:FunctionalProperty"
        parts = [
            f":{_safe_name(prop.name)} a {types}",
            f"    rdfs:domain :{_safe_name(prop.domain)}",
            f"    rdfs:range xsd:{prop.range_datatype.removeprefix('xsd:')}",
        ]
        out += ["", " ;\n".join(parts) + " ."]

    individuals = sorted(model.individuals, key=lambda i: i.id)
    if individuals:
        out += ["", "### Individuals"]
    for ind in individuals:
        parts = [f":{_safe_name(ind.id)} a owl:NamedIndividual , :{_safe_name(ind.cls)}"]
        for prop_name, kind, payload in _individual_values(model, ind):
            if kind == "lit":
                lexical, dt_local = payload  # type: ignore[misc]
                parts.append(f"    :{prop_name} {_ttl_literal(lexical, dt_local)}")
            else:
                parts.append(f"    :{prop_name} :{payload}")
        out += ["", " ;\n".join(parts) + " ."]

    return "\n".join(out) + "\n"


# -- RDF/XML ----------------------------------------------------------------------

def _xml_escape(text: str, attr: bool = False) -> str:
    text = text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    if attr:
        text = text.replace('"', "&quot;")
    return text


def _emit_rdfxml(model: OntologyModel, config: EmitConfig) -> str:
    base = config.iri_base

    def about(name: str) -> str:
        return _xml_escape(config.resolve(name), attr=True)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        "<rdf:RDF",
        f'    xmlns:rdf="{_RDF_BASE}"',
        f'    xmlns:rdfs="{_RDFS_BASE}"',
        f'    xmlns:owl="{_OWL_BASE}"',
        f'    xmlns:xsd="{_XSD_BASE}"',
        f'    xmlns:ns="{_xml_escape(base, attr=True)}">',
        f'  <owl:Ontology rdf:about="{_xml_escape(config.ontology_iri, attr=True)}"/>',  # type: ignore[arg-type]
    ]

    for view in _class_views(model):
        if not view.supers and not view.restrictions:
            out.append(f'  <owl:Class rdf:about="{about(view.name)}"/>')
            continue
        out.append(f'  <owl:Class rdf:about="{about(view.name)}">')
        for sup in view.supers:
            out.append(f'    <rdfs:subClassOf rdf:resource="{about(sup)}"/>')
        for prop, facet, value in view.restrictions:
            out += [
                "    <rdfs:subClassOf>",
                "      <owl:Restriction>",
                f'        <owl:onProperty rdf:resource="{about(prop)}"/>',
                f'        <owl:{facet} rdf:datatype="{_XSD_BASE}nonNegativeInteger">{value}</owl:{facet}>',
                "      </owl:Restriction>",
                "    </rdfs:subClassOf>",
            ]
        out.append("  </owl:Class>")

    for prop in sorted(model.object_properties, key=lambda p: p.name):
        out.append(f'  <owl:ObjectProperty rdf:about="{about(_safe_name(prop.name))}">')
        if prop.inverse_functional:
            out.append(f'    <rdf:type rdf:resource="{_OWL_BASE}InverseFunctionalProperty"/>')
        out.append(f'    <rdfs:domain rdf:resource="{about(_safe_name(prop.domain))}"/>')
        out.append(f'    <rdfs:range rdf:resource="{about(_safe_name(prop.range))}"/>')
        if prop.inverse_of:
            out.append(f'    <owl:inverseOf rdf:resource="{about(_safe_name(prop.inverse_of))}"/>')
        out.append("  </owl:ObjectProperty>")

    for prop in sorted(model.datatype_properties, key=lambda p: p.name):
        out.append(f'  <owl:DatatypeProperty rdf:about="{about(_safe_name(prop.name))}">')
        if prop.functional:
            out.append(f'    <rdf:type rdf:resource="{_OWL_BASE}FunctionalProperty"/>')
        out.append(f'    <rdfs:domain rdf:resource="{about(_safe_name(prop.domain))}"/>')
        local = prop.range_datatype.removeprefix("xsd:")
        out.append(f'    <rdfs:range rdf:resource="{_XSD_BASE}{local}"/>')
        out.append("  </owl:DatatypeProperty>")

    for ind in sorted(model.individuals, key=lambda i: i.id):
        out.append(f'  <owl:NamedIndividual rdf:about="{about(_safe_name(ind.id))}">')
        out.append(f'    <rdf:type rdf:resource="{about(_safe_name(ind.cls))}"/>')
        for prop_name, kind, payload in _individual_values(model, ind):
            if kind == "lit":
                lexical, dt_local = payload  # type: ignore[misc]
                body = _xml_escape(lexical)
                if dt_local is None:
                    out.append(f"    <ns:{prop_name}>{body}</ns:{prop_name}>")
                else:
                    out.append(
                        f'    <ns:{prop_name} rdf:datatype="{_XSD_BASE}{dt_local}">{body}</ns:{prop_name}>'
                    )
            else:
                out.append(f'    <ns:{prop_name} rdf:resource="{about(payload)}"/>')  # type: ignore[arg-type]
        out.append("  </owl:NamedIndividual>")

    out.append("</rdf:RDF>")
    return "\n".join(out) + "\n"
