"""Relational schema model: tables, columns, constraints and triggers.

Tables come in two kinds. Entity tables carry data and end up as classes.
Relational tables are pure join tables -- exactly two foreign keys, a
primary key composed of those foreign-key columns and nothing else -- that
exist only to break a many-to-many relationship apart; they end up as a
pair of mutually inverse relations instead of a class.

All values here are immutable after construction; `classify_tables` returns
a new schema rather than mutating its input.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Sequence

from .errors import SchemaError, UnresolvedReference


class TableKind(Enum):
    ENTITY = "entity"
    RELATIONAL = "relational"


class TriggerKind(Enum):
    INSERT = "insert"
    UPDATE = "update"
    DELETE = "delete"

    @property
    def class_name(self) -> str:
        """Capitalized form used for event subclass names."""
        return self.value.capitalize()


def _ci(names: Iterable[str]) -> frozenset[str]:
    return frozenset(n.casefold() for n in names)


@dataclass(frozen=True)
class ColumnDef:
    """A column with its declared constraints.

    The flags record what was declared (plus NOT NULL materialized onto
    primary-key columns by the parser); a primary-key column is implicitly
    unique and not-null regardless, which downstream typing honors via the
    key > unique > not_null precedence.
    """

    name: str
    sql_type: str
    is_not_null: bool = False
    is_unique: bool = False


@dataclass(frozen=True)
class ForeignKeyDef:
    """A foreign-key constraint; `is_unique` means the key columns are
    covered by a UNIQUE constraint."""

    local_columns: tuple[str, ...]
    referenced_table: str
    is_unique: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "local_columns", tuple(self.local_columns))
        if not self.referenced_table:
            raise SchemaError("foreign key must name a referenced table")
        if not self.local_columns:
            raise SchemaError("foreign key must cover at least one column")


@dataclass(frozen=True)
class TriggerDef:
    """An AFTER INSERT/UPDATE/DELETE trigger whose body inserts into
    `target_table`."""

    name: str
    owner_table: str
    kind: TriggerKind
    target_table: str
    timing: str = "AFTER"


@dataclass(frozen=True)
class TableDef:
    name: str
    columns: tuple[ColumnDef, ...]
    primary_key: frozenset[str] = frozenset()
    foreign_keys: tuple[ForeignKeyDef, ...] = ()
    kind: TableKind | None = None  # assigned by classify_tables

    def __post_init__(self) -> None:
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "primary_key", frozenset(self.primary_key))
        object.__setattr__(self, "foreign_keys", tuple(self.foreign_keys))

    def column(self, name: str) -> ColumnDef:
        """Case-insensitive column lookup."""
        wanted = name.casefold()
        for col in self.columns:
            if col.name.casefold() == wanted:
                return col
        raise UnresolvedReference(f"no column {name!r} in table {self.name!r}")

    @property
    def fk_column_names(self) -> frozenset[str]:
        """Casefolded names of all columns covered by any foreign key."""
        return _ci(c for fk in self.foreign_keys for c in fk.local_columns)


@dataclass(frozen=True)
class RelationalSchema:
    tables: tuple[TableDef, ...] = ()
    triggers: tuple[TriggerDef, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "tables", tuple(self.tables))
        object.__setattr__(self, "triggers", tuple(self.triggers))

    def table(self, name: str) -> TableDef:
        """Case-insensitive table lookup."""
        wanted = name.casefold()
        for t in self.tables:
            if t.name.casefold() == wanted:
                return t
        raise UnresolvedReference(f"no table named {name!r}")

    def has_table(self, name: str) -> bool:
        try:
            self.table(name)
            return True
        except UnresolvedReference:
            return False

    def validate(self) -> None:
        """Check structural invariants; raise SchemaError on the first breach."""
        seen: set[str] = set()
        for t in self.tables:
            key = t.name.casefold()
            if key in seen:
                raise SchemaError(f"duplicate table name {t.name!r}")
            seen.add(key)

            col_names = [c.name.casefold() for c in t.columns]
            if len(col_names) != len(set(col_names)):
                raise SchemaError(f"duplicate column name in table {t.name!r}")
            for pk_col in t.primary_key:
                if pk_col.casefold() not in col_names:
                    raise SchemaError(
                        f"primary-key column {pk_col!r} missing from table {t.name!r}"
                    )
            for fk in t.foreign_keys:
                for c in fk.local_columns:
                    if c.casefold() not in col_names:
                        raise SchemaError(
                            f"foreign-key column {c!r} missing from table {t.name!r}"
                        )
                if not self.has_table(fk.referenced_table):
                    raise UnresolvedReference(
                        f"table {t.name!r} references unknown table {fk.referenced_table!r}"
                    )
            if t.kind is TableKind.RELATIONAL and not _is_relational(t):
                raise SchemaError(
                    f"table {t.name!r} is marked relational but does not qualify"
                )
        for tr in self.triggers:
            if not self.has_table(tr.owner_table):
                raise UnresolvedReference(
                    f"trigger {tr.name!r} is on unknown table {tr.owner_table!r}"
                )
            if not self.has_table(tr.target_table):
                raise UnresolvedReference(
                    f"trigger {tr.name!r} targets unknown table {tr.target_table!r}"
                )


def _is_relational(table: TableDef) -> bool:
    """A pure join table: 2 foreign keys, PK = their column union, no extras."""
    if len(table.foreign_keys) != 2:
        return False
    fk_cols = table.fk_column_names
    if _ci(table.primary_key) != fk_cols:
        return False
    # "do not carry data": no column may live outside the key
    return _ci(c.name for c in table.columns) == fk_cols


def classify_tables(schema: RelationalSchema) -> RelationalSchema:
    """Assign a kind to every table; classification is total and pure."""
    schema.validate()
    tables = tuple(
        replace(t, kind=TableKind.RELATIONAL if _is_relational(t) else TableKind.ENTITY)
        for t in schema.tables
    )
    return replace(schema, tables=tables)


# -- accessor projections ---------------------------------------------------

def pkey(table: TableDef) -> frozenset[str]:
    """Primary-key column names (possibly empty)."""
    return table.primary_key


def fkeys(table: TableDef) -> tuple[ForeignKeyDef, ...]:
    return table.foreign_keys


def ref(fk: ForeignKeyDef, schema: RelationalSchema) -> TableDef:
    """Resolve the table a foreign key points at."""
    return schema.table(fk.referenced_table)


def data_columns(table: TableDef) -> list[ColumnDef]:
    """Columns that are neither in the primary key nor in any foreign key."""
    pk = _ci(table.primary_key)
    fk = table.fk_column_names
    return [c for c in table.columns if c.name.casefold() not in pk | fk]


def unique_columns(table: TableDef) -> list[ColumnDef]:
    return [c for c in table.columns if c.is_unique]


def notnull_columns(table: TableDef) -> list[ColumnDef]:
    return [c for c in table.columns if c.is_not_null]


def triggers_of(table: TableDef, schema: RelationalSchema) -> list[TriggerDef]:
    wanted = table.name.casefold()
    return [tr for tr in schema.triggers if tr.owner_table.casefold() == wanted]
