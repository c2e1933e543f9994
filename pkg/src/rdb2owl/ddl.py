"""SQL DDL parser for a small, fixed dialect.

Supported statements (each terminated by ';'):

  CREATE TABLE name ( element, ... )
    element:  column-def | table-constraint
    column-def:
      name type[(args)] [PRIMARY KEY | UNIQUE | NOT NULL | NULL
                         | DEFAULT value | REFERENCES table [(col)]
                         | CHECK (...)]*
    table-constraint (optionally prefixed by CONSTRAINT name):
      PRIMARY KEY (cols) | UNIQUE (cols)
      | FOREIGN KEY (cols) REFERENCES table [(cols)] [ON DELETE|UPDATE action]

  CREATE TRIGGER name AFTER INSERT|UPDATE|DELETE ON table
    FOR EACH ROW <single INSERT statement>

Identifiers are bare or double-quoted; comments are `--` and `/* */`.
Statements that are recognized but outside the dialect (CREATE INDEX, ALTER,
BEFORE triggers, conditional or multi-statement trigger bodies, ...) degrade
to Warning diagnostics and are skipped, so noisy dumps still compile.
Foreign keys and triggers may reference tables declared later in the script;
resolution happens in a second pass over the whole source.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import UnsupportedTriggerBody
from .relational import (
    ColumnDef,
    ForeignKeyDef,
    RelationalSchema,
    TableDef,
    TriggerDef,
    TriggerKind,
)


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: Severity
    line: int
    column: int
    message: str
    offending_statement: str = ""

    def render(self, filename: str = "<input>") -> str:
        return f"{filename}:{self.line}:{self.column}: {self.severity.value}: {self.message}"


@dataclass
class ParseResult:
    """Outcome of `parse_ddl`: a schema when no Error diagnostics occurred,
    plus every diagnostic (warnings survive on success)."""

    schema: RelationalSchema | None
    diagnostics: list[ParseDiagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.schema is not None

    @property
    def errors(self) -> list[ParseDiagnostic]:
        return [d for d in self.diagnostics if d.severity is Severity.ERROR]

    @property
    def warnings(self) -> list[ParseDiagnostic]:
        return [d for d in self.diagnostics if d.severity is Severity.WARNING]


# -- lexer --------------------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str  # ident | qident | number | string | punct
    text: str  # unquoted for qident/string
    line: int
    col: int
    pos: int  # absolute start offset
    end: int  # absolute end offset

    def kw(self) -> str:
        """Keyword view: uppercase text of a bare identifier, else ''."""
        return self.text.upper() if self.kind == "ident" else ""


_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_$]*")
_NUMBER_RE = re.compile(r"\d+(?:\.\d+)?")
_PUNCT = set("(),;.=*+-<>")


def _tokenize(source: str) -> tuple[list[_Token], list[ParseDiagnostic]]:
    tokens: list[_Token] = []
    diags: list[ParseDiagnostic] = []
    i, line, col = 0, 1, 1
    n = len(source)

    def advance(text: str) -> None:
        nonlocal line, col
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)

    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            advance(ch)
            i += 1
            continue
        if source.startswith("--", i):
            end = source.find("\n", i)
            end = n if end == -1 else end
            advance(source[i:end])
            i = end
            continue
        if source.startswith("/*", i):
            end = source.find("*/", i + 2)
            if end == -1:
                diags.append(ParseDiagnostic(Severity.ERROR, line, col, "unterminated /* comment"))
                break
            advance(source[i : end + 2])
            i = end + 2
            continue
        if ch == '"':
            end = source.find('"', i + 1)
            if end == -1:
                diags.append(ParseDiagnostic(Severity.ERROR, line, col, "unterminated quoted identifier"))
                break
            text = source[i + 1 : end]
            tokens.append(_Token("qident", text, line, col, i, end + 1))
            advance(source[i : end + 1])
            i = end + 1
            continue
        if ch == "'":
            j = i + 1
            while j < n:
                if source[j] == "'" and source[j : j + 2] != "''":
                    break
                j += 2 if source[j : j + 2] == "''" else 1
            if j >= n:
                diags.append(ParseDiagnostic(Severity.ERROR, line, col, "unterminated string literal"))
                break
            text = source[i + 1 : j].replace("''", "'")
            tokens.append(_Token("string", text, line, col, i, j + 1))
            advance(source[i : j + 1])
            i = j + 1
            continue
        m = _IDENT_RE.match(source, i)
        if m:
            tokens.append(_Token("ident", m.group(), line, col, i, m.end()))
            advance(m.group())
            i = m.end()
            continue
        m = _NUMBER_RE.match(source, i)
        if m:
            tokens.append(_Token("number", m.group(), line, col, i, m.end()))
            advance(m.group())
            i = m.end()
            continue
        if ch in _PUNCT:
            tokens.append(_Token("punct", ch, line, col, i, i + 1))
            advance(ch)
            i += 1
            continue
        diags.append(ParseDiagnostic(Severity.ERROR, line, col, f"unexpected character {ch!r}"))
        advance(ch)
        i += 1
    return tokens, diags


def _split_statements(tokens: list[_Token]) -> list[list[_Token]]:
    """Split on top-level ';'. BEGIN...END blocks keep their inner ';'
    so a compound trigger body stays one (rejectable) statement."""
    statements: list[list[_Token]] = []
    current: list[_Token] = []
    depth = 0
    for tok in tokens:
        kw = tok.kw()
        if kw == "BEGIN":
            depth += 1
        elif kw == "END" and depth > 0:
            depth -= 1
        if tok.text == ";" and tok.kind == "punct" and depth == 0:
            if current:
                statements.append(current)
                current = []
            continue
        current.append(tok)
    if current:
        statements.append(current)
    return statements


# -- per-statement parsing ----------------------------------------------------

class _StatementError(Exception):
    """Internal: aborts one statement and carries its diagnostic."""

    def __init__(self, diag: ParseDiagnostic):
        super().__init__(diag.message)
        self.diag = diag


@dataclass
class _PendingColumn:
    name: str
    sql_type: str
    is_not_null: bool = False
    is_unique: bool = False


@dataclass
class _PendingTable:
    name: str
    token: _Token
    excerpt: str
    columns: list[_PendingColumn] = field(default_factory=list)
    primary_key: list[str] = field(default_factory=list)
    # (local columns, referenced table, token of the referenced-table name)
    foreign_keys: list[tuple[tuple[str, ...], str, _Token]] = field(default_factory=list)
    unique_sets: list[frozenset[str]] = field(default_factory=list)


@dataclass
class _PendingTrigger:
    trigger: TriggerDef
    token: _Token
    excerpt: str


class _Cursor:
    def __init__(self, tokens: list[_Token], source: str):
        self.tokens = tokens
        self.source = source
        self.i = 0

    def peek(self, offset: int = 0) -> _Token | None:
        j = self.i + offset
        return self.tokens[j] if j < len(self.tokens) else None

    def at_kw(self, *words: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kw() in words

    def take(self) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1]
            raise _StatementError(
                ParseDiagnostic(Severity.ERROR, last.line, last.col, "unexpected end of statement")
            )
        self.i += 1
        return tok

    def expect_kw(self, word: str) -> _Token:
        tok = self.take()
        if tok.kw() != word:
            raise _StatementError(
                ParseDiagnostic(Severity.ERROR, tok.line, tok.col, f"expected {word}, found {tok.text!r}")
            )
        return tok

    def expect_punct(self, ch: str) -> _Token:
        tok = self.take()
        if not (tok.kind == "punct" and tok.text == ch):
            raise _StatementError(
                ParseDiagnostic(Severity.ERROR, tok.line, tok.col, f"expected {ch!r}, found {tok.text!r}")
            )
        return tok

    def expect_name(self, what: str) -> _Token:
        tok = self.take()
        if tok.kind not in ("ident", "qident"):
            raise _StatementError(
                ParseDiagnostic(Severity.ERROR, tok.line, tok.col, f"expected {what}, found {tok.text!r}")
            )
        return tok

    def skip_balanced_parens(self) -> None:
        """Consume a '(' ... ')' group, any nesting."""
        self.expect_punct("(")
        depth = 1
        while depth:
            tok = self.take()
            if tok.kind == "punct":
                if tok.text == "(":
                    depth += 1
                elif tok.text == ")":
                    depth -= 1


def _excerpt(source: str, tokens: list[_Token], limit: int = 80) -> str:
    text = " ".join(source[tokens[0].pos : tokens[-1].end].split())
    return text if len(text) <= limit else text[: limit - 3] + "..."


_MULTIWORD_TYPE_TAILS = {"PRECISION", "VARYING"}
_FK_ACTIONS = {"CASCADE", "RESTRICT", "SET", "NO"}


def _parse_name_list(cur: _Cursor) -> list[str]:
    cur.expect_punct("(")
    names = [cur.expect_name("a column name").text]
    while True:
        tok = cur.take()
        if tok.kind == "punct" and tok.text == ",":
            names.append(cur.expect_name("a column name").text)
        elif tok.kind == "punct" and tok.text == ")":
            return names
        else:
            raise _StatementError(
                ParseDiagnostic(Severity.ERROR, tok.line, tok.col, f"expected ',' or ')', found {tok.text!r}")
            )


def _parse_references(cur: _Cursor) -> _Token:
    """Parse `REFERENCES table [(cols)]` after the keyword; return the
    referenced-table token. Referenced column names are ignored: resolution
    is at table granularity."""
    table_tok = cur.expect_name("a table name")
    nxt = cur.peek()
    if nxt is not None and nxt.kind == "punct" and nxt.text == "(":
        cur.skip_balanced_parens()
    return table_tok


def _parse_fk_actions(cur: _Cursor) -> None:
    # ON DELETE CASCADE / ON UPDATE SET NULL / ... -- accepted and ignored
    while cur.at_kw("ON"):
        cur.take()
        tok = cur.take()
        if tok.kw() not in ("DELETE", "UPDATE"):
            raise _StatementError(
                ParseDiagnostic(Severity.ERROR, tok.line, tok.col, f"expected DELETE or UPDATE, found {tok.text!r}")
            )
        action = cur.take()
        if action.kw() not in _FK_ACTIONS:
            raise _StatementError(
                ParseDiagnostic(
                    Severity.ERROR, action.line, action.col, f"unsupported referential action {action.text!r}"
                )
            )
        if action.kw() in ("SET", "NO"):  # SET NULL / SET DEFAULT / NO ACTION
            cur.take()


def _parse_column_def(cur: _Cursor, table: _PendingTable, diags: list[ParseDiagnostic]) -> None:
    name_tok = cur.expect_name("a column name")
    type_tok = cur.take()
    if type_tok.kind != "ident":
        raise _StatementError(
            ParseDiagnostic(Severity.ERROR, type_tok.line, type_tok.col, f"expected a type, found {type_tok.text!r}")
        )
    sql_type = type_tok.text
    nxt = cur.peek()
    if nxt is not None and nxt.kw() in _MULTIWORD_TYPE_TAILS:
        sql_type += " " + cur.take().text
        nxt = cur.peek()
    if nxt is not None and nxt.kind == "punct" and nxt.text == "(":
        args_start = cur.peek().pos  # type: ignore[union-attr]
        cur.skip_balanced_parens()
        args_end = cur.tokens[cur.i - 1].end
        sql_type += cur.source[args_start:args_end]

    col = _PendingColumn(name=name_tok.text, sql_type=sql_type)
    table.columns.append(col)

    while cur.peek() is not None:
        tok = cur.peek()
        kw = tok.kw()  # type: ignore[union-attr]
        if kw == "PRIMARY":
            cur.take()
            cur.expect_kw("KEY")
            if table.primary_key:
                raise _StatementError(
                    ParseDiagnostic(Severity.ERROR, tok.line, tok.col, "more than one PRIMARY KEY declaration")
                )
            table.primary_key.append(col.name)
        elif kw == "UNIQUE":
            cur.take()
            col.is_unique = True
        elif kw == "NOT":
            cur.take()
            cur.expect_kw("NULL")
            col.is_not_null = True
        elif kw == "NULL":
            cur.take()
        elif kw == "DEFAULT":
            cur.take()
            val = cur.peek()
            if val is not None and val.kind == "punct" and val.text == "(":
                cur.skip_balanced_parens()
            else:
                val = cur.take()
                if val.kind == "punct" and val.text in "+-":
                    cur.take()
        elif kw == "REFERENCES":
            cur.take()
            ref_tok = _parse_references(cur)
            _parse_fk_actions(cur)
            table.foreign_keys.append(((col.name,), ref_tok.text, ref_tok))
        elif kw == "CHECK":
            cur.take()
            diags.append(
                ParseDiagnostic(Severity.WARNING, tok.line, tok.col, f"CHECK constraint on column {col.name!r} ignored")  # type: ignore[union-attr]
            )
            cur.skip_balanced_parens()
        else:
            raise _StatementError(
                ParseDiagnostic(
                    Severity.ERROR, tok.line, tok.col, f"unsupported column constraint {tok.text!r}"  # type: ignore[union-attr]
                )
            )


def _parse_table_constraint(cur: _Cursor, table: _PendingTable, diags: list[ParseDiagnostic]) -> None:
    tok = cur.peek()
    kw = tok.kw()  # type: ignore[union-attr]
    if kw == "CONSTRAINT":
        cur.take()
        cur.expect_name("a constraint name")
        tok = cur.peek()
        kw = tok.kw()  # type: ignore[union-attr]
    if kw == "PRIMARY":
        cur.take()
        cur.expect_kw("KEY")
        if table.primary_key:
            raise _StatementError(
                ParseDiagnostic(Severity.ERROR, tok.line, tok.col, "more than one PRIMARY KEY declaration")  # type: ignore[union-attr]
            )
        table.primary_key.extend(_parse_name_list(cur))
    elif kw == "UNIQUE":
        cur.take()
        cols = _parse_name_list(cur)
        if len(cols) == 1:
            # single-column table-level UNIQUE is the same as an inline one
            for col in table.columns:
                if col.name.casefold() == cols[0].casefold():
                    col.is_unique = True
                    break
        table.unique_sets.append(frozenset(c.casefold() for c in cols))
    elif kw == "FOREIGN":
        cur.take()
        cur.expect_kw("KEY")
        cols = _parse_name_list(cur)
        cur.expect_kw("REFERENCES")
        ref_tok = _parse_references(cur)
        _parse_fk_actions(cur)
        table.foreign_keys.append((tuple(cols), ref_tok.text, ref_tok))
    else:
        raise _StatementError(
            ParseDiagnostic(Severity.ERROR, tok.line, tok.col, f"unsupported table constraint {tok.text!r}")  # type: ignore[union-attr]
        )


def _parse_create_table(stmt: list[_Token], source: str, diags: list[ParseDiagnostic]) -> _PendingTable:
    cur = _Cursor(stmt, source)
    cur.expect_kw("CREATE")
    cur.expect_kw("TABLE")
    if cur.at_kw("IF"):  # IF NOT EXISTS
        cur.take()
        cur.expect_kw("NOT")
        cur.expect_kw("EXISTS")
    name_tok = cur.expect_name("a table name")
    table = _PendingTable(name=name_tok.text, token=name_tok, excerpt=_excerpt(source, stmt))
    cur.expect_punct("(")
    while True:
        tok = cur.peek()
        if tok is None:
            raise _StatementError(
                ParseDiagnostic(Severity.ERROR, name_tok.line, name_tok.col, "unterminated CREATE TABLE body")
            )
        if tok.kw() in ("PRIMARY", "UNIQUE", "FOREIGN", "CONSTRAINT"):
            _parse_table_constraint(cur, table, diags)
        else:
            _parse_column_def(cur, table, diags)
        sep = cur.take()
        if sep.kind == "punct" and sep.text == ",":
            continue
        if sep.kind == "punct" and sep.text == ")":
            break
        raise _StatementError(
            ParseDiagnostic(Severity.ERROR, sep.line, sep.col, f"expected ',' or ')', found {sep.text!r}")
        )
    trailing = cur.peek()
    if trailing is not None:
        raise _StatementError(
            ParseDiagnostic(
                Severity.ERROR, trailing.line, trailing.col, f"unexpected trailing tokens after ')': {trailing.text!r}"
            )
        )
    if not table.columns:
        raise _StatementError(
            ParseDiagnostic(Severity.ERROR, name_tok.line, name_tok.col, f"table {table.name!r} declares no columns")
        )
    col_names = {c.name.casefold() for c in table.columns}
    for pk_col in table.primary_key:
        if pk_col.casefold() not in col_names:
            raise _StatementError(
                ParseDiagnostic(
                    Severity.ERROR, name_tok.line, name_tok.col,
                    f"primary-key column {pk_col!r} is not a column of {table.name!r}",
                )
            )
    for cols, _ref, tok in table.foreign_keys:
        for c in cols:
            if c.casefold() not in col_names:
                raise _StatementError(
                    ParseDiagnostic(
                        Severity.ERROR, tok.line, tok.col,
                        f"foreign-key column {c!r} is not a column of {table.name!r}",
                    )
                )
    return table


class _SkipStatement(Exception):
    """Internal: statement outside the dialect; already warned."""


def _parse_create_trigger(
    stmt: list[_Token], source: str, diags: list[ParseDiagnostic]
) -> _PendingTrigger:
    cur = _Cursor(stmt, source)
    head = stmt[0]
    excerpt = _excerpt(source, stmt)
    cur.expect_kw("CREATE")
    cur.expect_kw("TRIGGER")
    name_tok = cur.expect_name("a trigger name")
    timing = cur.take()
    if timing.kw() in ("BEFORE", "INSTEAD"):
        diags.append(
            ParseDiagnostic(
                Severity.WARNING, timing.line, timing.col,
                f"only AFTER triggers are supported; {timing.text.upper()} trigger {name_tok.text!r} skipped",
                excerpt,
            )
        )
        raise _SkipStatement
    if timing.kw() != "AFTER":
        raise _StatementError(
            ParseDiagnostic(Severity.ERROR, timing.line, timing.col, f"expected AFTER, found {timing.text!r}")
        )
    kind_tok = cur.take()
    kinds = {"INSERT": TriggerKind.INSERT, "UPDATE": TriggerKind.UPDATE, "DELETE": TriggerKind.DELETE}
    if kind_tok.kw() not in kinds:
        raise _StatementError(
            ParseDiagnostic(
                Severity.ERROR, kind_tok.line, kind_tok.col,
                f"expected INSERT, UPDATE or DELETE, found {kind_tok.text!r}",
            )
        )
    if cur.at_kw("OF"):  # UPDATE OF col-list: recognized, unsupported
        diags.append(
            ParseDiagnostic(
                Severity.WARNING, kind_tok.line, kind_tok.col,
                f"column-list triggers are not supported; trigger {name_tok.text!r} skipped",
                excerpt,
            )
        )
        raise _SkipStatement
    cur.expect_kw("ON")
    owner_tok = cur.expect_name("a table name")
    cur.expect_kw("FOR")
    cur.expect_kw("EACH")
    cur.expect_kw("ROW")
    body = stmt[cur.i :]
    target, reason = _trigger_target(body)
    if reason is not None:
        at = body[0] if body else head
        diags.append(
            ParseDiagnostic(
                Severity.WARNING, at.line, at.col,
                f"unsupported trigger body ({reason}); trigger {name_tok.text!r} skipped",
                excerpt,
            )
        )
        raise _SkipStatement
    trigger = TriggerDef(
        name=name_tok.text,
        owner_table=owner_tok.text,
        kind=kinds[kind_tok.kw()],
        target_table=target,
    )
    return _PendingTrigger(trigger=trigger, token=name_tok, excerpt=excerpt)


def _trigger_target(body: list[_Token]) -> tuple[str, str | None]:
    """Extract the INSERT target from a trigger body, or explain why not.

    Returns (target_table, None) on success, ("", reason) otherwise.
    """
    if not body:
        return "", "empty body"
    head = body[0].kw()
    if head in ("WHEN", "IF"):
        return "", "conditional bodies are not supported"
    if head == "BEGIN":
        return "", "compound BEGIN...END bodies are not supported"
    if head != "INSERT":
        return "", "body must be a single INSERT statement"
    if len(body) < 3 or body[1].kw() != "INTO" or body[2].kind not in ("ident", "qident"):
        return "", "INSERT must name a target table"
    rest = body[3:]
    for i, tok in enumerate(rest):
        if tok.kind == "punct" and tok.text == ";":
            if any(t.kind != "punct" or t.text != ";" for t in rest[i + 1 :]):
                return "", "multiple statements in body"
            break
        if tok.kw() in ("WHEN", "IF"):
            return "", "conditional bodies are not supported"
    return body[2].text, None


def parse_trigger_body(body: str) -> str:
    """Parse the statement after FOR EACH ROW; return the INSERT target table.

    Raises UnsupportedTriggerBody for anything but one unconditional INSERT.
    """
    tokens, diags = _tokenize(body)
    if any(d.severity is Severity.ERROR for d in diags):
        raise UnsupportedTriggerBody(diags[0].message)
    target, reason = _trigger_target(tokens)
    if reason is not None:
        raise UnsupportedTriggerBody(reason)
    return target


# -- whole-script parsing ------------------------------------------------------

_SKIPPABLE_HEADS = {
    "ALTER", "DROP", "INSERT", "UPDATE", "DELETE", "SELECT", "SET", "GRANT",
    "REVOKE", "COMMENT", "BEGIN", "COMMIT", "USE", "PRAGMA",
}


def parse_ddl(source: str) -> ParseResult:
    """Parse a DDL script into a validated (unclassified) RelationalSchema.

    Every diagnostic ever produced is returned; the schema is present iff
    no Error-severity diagnostic occurred.
    """
    tokens, diags = _tokenize(source)
    statements = _split_statements(tokens)

    tables: list[_PendingTable] = []
    triggers: list[_PendingTrigger] = []
    for stmt in statements:
        head = stmt[0]
        kw = head.kw()
        try:
            if kw == "CREATE":
                second = stmt[1].kw() if len(stmt) > 1 else ""
                if second == "TABLE":
                    tables.append(_parse_create_table(stmt, source, diags))
                elif second == "TRIGGER":
                    triggers.append(_parse_create_trigger(stmt, source, diags))
                else:
                    diags.append(
                        ParseDiagnostic(
                            Severity.WARNING, head.line, head.col,
                            f"unsupported statement skipped: CREATE {second or '?'}",
                            _excerpt(source, stmt),
                        )
                    )
            elif kw in _SKIPPABLE_HEADS:
                diags.append(
                    ParseDiagnostic(
                        Severity.WARNING, head.line, head.col,
                        f"unsupported statement skipped: {kw}",
                        _excerpt(source, stmt),
                    )
                )
            else:
                diags.append(
                    ParseDiagnostic(
                        Severity.ERROR, head.line, head.col,
                        f"unrecognized statement starting with {head.text!r}",
                        _excerpt(source, stmt),
                    )
                )
        except _StatementError as exc:
            diags.append(
                ParseDiagnostic(
                    exc.diag.severity, exc.diag.line, exc.diag.column,
                    exc.diag.message, _excerpt(source, stmt),
                )
            )
        except _SkipStatement:
            pass

    _resolve(tables, triggers, diags)
    if any(d.severity is Severity.ERROR for d in diags):
        return ParseResult(None, diags)
    return ParseResult(_build_schema(tables, triggers), diags)


def _resolve(
    tables: list[_PendingTable],
    triggers: list[_PendingTrigger],
    diags: list[ParseDiagnostic],
) -> None:
    """Second pass: cross-statement name resolution (declaration order is free)."""
    by_name: dict[str, _PendingTable] = {}
    for t in tables:
        key = t.name.casefold()
        if key in by_name:
            diags.append(
                ParseDiagnostic(
                    Severity.ERROR, t.token.line, t.token.col,
                    f"duplicate table name {t.name!r}", t.excerpt,
                )
            )
        else:
            by_name[key] = t
    for t in tables:
        for _cols, ref_name, tok in t.foreign_keys:
            if ref_name.casefold() not in by_name:
                diags.append(
                    ParseDiagnostic(
                        Severity.ERROR, tok.line, tok.col,
                        f"foreign key references unknown table {ref_name!r}", t.excerpt,
                    )
                )
    seen_triggers: set[str] = set()
    for tr in triggers:
        t = tr.trigger
        key = t.name.casefold()
        if key in seen_triggers:
            diags.append(
                ParseDiagnostic(
                    Severity.ERROR, tr.token.line, tr.token.col,
                    f"duplicate trigger name {t.name!r}", tr.excerpt,
                )
            )
        seen_triggers.add(key)
        if t.owner_table.casefold() not in by_name:
            diags.append(
                ParseDiagnostic(
                    Severity.ERROR, tr.token.line, tr.token.col,
                    f"trigger {t.name!r} is on unknown table {t.owner_table!r}", tr.excerpt,
                )
            )
        if t.target_table.casefold() not in by_name:
            diags.append(
                ParseDiagnostic(
                    Severity.ERROR, tr.token.line, tr.token.col,
                    f"trigger {t.name!r} inserts into unknown table {t.target_table!r}", tr.excerpt,
                )
            )
        if t.owner_table.casefold() == t.target_table.casefold():
            diags.append(
                ParseDiagnostic(
                    Severity.ERROR, tr.token.line, tr.token.col,
                    f"trigger {t.name!r} inserts into its own table and would fire itself", tr.excerpt,
                )
            )


def _build_schema(tables: list[_PendingTable], triggers: list[_PendingTrigger]) -> RelationalSchema:
    table_defs = []
    for t in tables:
        pk = frozenset(t.primary_key)
        pk_ci = {c.casefold() for c in pk}
        columns = tuple(
            ColumnDef(
                name=c.name,
                sql_type=c.sql_type,
                # PRIMARY KEY implies NOT NULL; uniqueness stays declared-only
                is_not_null=c.is_not_null or c.name.casefold() in pk_ci,
                is_unique=c.is_unique,
            )
            for c in t.columns
        )
        fks = []
        col_by_name = {c.name.casefold(): c for c in columns}
        for cols, ref_name, _tok in t.foreign_keys:
            cols_ci = frozenset(c.casefold() for c in cols)
            if len(cols) == 1:
                is_unique = col_by_name[cols[0].casefold()].is_unique or cols_ci in t.unique_sets
            else:
                is_unique = cols_ci in t.unique_sets
            fks.append(ForeignKeyDef(local_columns=cols, referenced_table=ref_name, is_unique=is_unique))
        table_defs.append(
            TableDef(name=t.name, columns=columns, primary_key=pk, foreign_keys=tuple(fks))
        )
    schema = RelationalSchema(tables=tuple(table_defs), triggers=tuple(tr.trigger for tr in triggers))
    schema.validate()  # unreachable failures after _resolve; defensive
    return schema
