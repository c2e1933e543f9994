"""IRI fragment sanitation and base-IRI validation."""

from __future__ import annotations

import re

from .errors import InvalidIri

DEFAULT_IRI_BASE = "http://example.org/rdb2owl#"

FRAGMENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_\-]*$")
_ABSOLUTE_IRI_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*://\S+$")


def sanitize_iri_fragment(name: str) -> str:
    """Turn an arbitrary nonempty name into a legal IRI fragment.

    Characters outside ``[A-Za-z0-9_-]`` become ``_``; a leading digit or
    ``-`` gets a ``_`` prefix. Idempotent, but not injective: collisions are
    the caller's problem (detected upstream as NameCollision).
    """
    if not name:
        raise InvalidIri("cannot sanitize an empty name")
    safe = re.sub(r"[^A-Za-z0-9_\-]", "_", name)
    if safe[0].isdigit() or safe[0] == "-":
        safe = "_" + safe
    return safe


def require_fragment(name: str) -> str:
    """Return `name` if it is already a legal fragment, else raise InvalidIri."""
    if not name or not FRAGMENT_RE.match(name):
        raise InvalidIri(f"not a legal IRI fragment: {name!r}")
    return name


def require_iri_base(base: str) -> str:
    """Validate an IRI base: absolute and ending in '#' or '/'."""
    if not _ABSOLUTE_IRI_RE.match(base):
        raise InvalidIri(f"iri_base must be an absolute IRI: {base!r}")
    if not base.endswith(("#", "/")):
        raise InvalidIri(f"iri_base must end in '#' or '/': {base!r}")
    return base
