"""JSON algebra documents: parsing, emission and conversion to algebras.

A document lists element labels and cover pairs, optionally a star table
(rows in element order; meet when absent), a designated fixpoint label and
box/diamond tables as label maps.  See ``docs/format.md`` for the schema.
"""

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ParseError, SchemaError
from .lattice import FiniteLattice
from .modal import ModalPair
from .residuated import ResiduatedAlgebra

FORMAT = "rotalg/1"
_FIELDS = ("format", "elements", "covers", "star", "fixpoint", "modal", "metadata")
_OPERATORS = ("box", "diamond")


@dataclass
class AlgebraDocument:
    elements: tuple
    covers: tuple
    star: tuple = None
    fixpoint: str = None
    modal: dict = None
    metadata: dict = field(default_factory=dict)
    format: str = FORMAT

    @property
    def name(self):
        return self.metadata.get("name", "")


def _expect(cond, fld, msg):
    if not cond:
        raise SchemaError(fld, msg)


def _label(value, fld, known):
    _expect(isinstance(value, str), fld, f"expected a label string, got {value!r}")
    _expect(value in known, fld, f"unknown element {value!r}")
    return value


def parse_document(text):
    """Parse and schema-check a document; ParseError carries line and column."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return document_from_dict(raw)


def document_from_dict(raw):
    _expect(isinstance(raw, dict), "document", "top level must be an object")
    extra = sorted(set(raw) - set(_FIELDS))
    _expect(not extra, extra[0] if extra else "", "unknown field")
    fmt = raw.get("format", FORMAT)
    _expect(fmt == FORMAT, "format", f"unsupported version {fmt!r}, expected {FORMAT!r}")

    _expect("elements" in raw, "elements", "missing")
    elements = raw["elements"]
    _expect(isinstance(elements, list), "elements", "expected a list of labels")
    _expect(len(elements) > 0, "elements", "must not be empty")
    for e in elements:
        _expect(isinstance(e, str) and e != "", "elements", f"labels must be non-empty strings, got {e!r}")
    _expect(len(set(elements)) == len(elements), "elements", "labels must be unique")
    known = set(elements)

    covers = raw.get("covers", [])
    _expect(isinstance(covers, list), "covers", "expected a list of [lower, upper] pairs")
    out_covers = []
    for c in covers:
        _expect(isinstance(c, list) and len(c) == 2, "covers", f"bad cover entry {c!r}")
        out_covers.append((_label(c[0], "covers", known), _label(c[1], "covers", known)))

    star = raw.get("star")
    if star is not None:
        n = len(elements)
        _expect(isinstance(star, list) and len(star) == n, "star", f"expected {n} rows")
        rows = []
        for row in star:
            _expect(isinstance(row, list) and len(row) == n, "star", f"each row needs {n} entries")
            rows.append(tuple(_label(v, "star", known) for v in row))
        star = tuple(rows)

    fixpoint = raw.get("fixpoint")
    if fixpoint is not None:
        fixpoint = _label(fixpoint, "fixpoint", known)

    modal = raw.get("modal")
    if modal is not None:
        _expect(isinstance(modal, dict), "modal", "expected an object with box and diamond")
        extra = sorted(set(modal) - set(_OPERATORS))
        _expect(not extra, "modal", f"unknown operator {extra[0] if extra else ''!r}")
        tables = {}
        for op in _OPERATORS:
            fld = f"modal.{op}"
            _expect(op in modal, fld, "missing")
            t = modal[op]
            _expect(isinstance(t, dict), fld, "expected a label -> label map")
            for k, v in t.items():
                _label(k, fld, known)
                _label(v, fld, known)
            missing = [e for e in elements if e not in t]
            _expect(not missing, fld, f"not total, missing {missing}")
            tables[op] = {e: t[e] for e in elements}
        modal = tables

    metadata = raw.get("metadata", {})
    _expect(isinstance(metadata, dict), "metadata", "expected an object")
    return AlgebraDocument(tuple(elements), tuple(out_covers), star, fixpoint, modal,
                           dict(metadata), fmt)


def document_to_dict(doc):
    d = {"format": doc.format, "elements": list(doc.elements),
         "covers": [list(c) for c in doc.covers]}
    if doc.star is not None:
        d["star"] = [list(r) for r in doc.star]
    if doc.fixpoint is not None:
        d["fixpoint"] = doc.fixpoint
    if doc.modal is not None:
        d["modal"] = {op: dict(doc.modal[op]) for op in _OPERATORS}
    if doc.metadata:
        d["metadata"] = doc.metadata
    return d


def emit_document(doc):
    """Serialize with a fixed field order; ``parse_document`` inverts it."""
    return json.dumps(document_to_dict(doc), indent=2, ensure_ascii=False) + "\n"


def doc_to_algebra(doc):
    """Build ``(algebra, modal pair or None)``; algebraic checks happen here."""
    lattice = FiniteLattice.from_covers(doc.elements, doc.covers)
    star = None
    if doc.star is not None:
        idx = {e: i for i, e in enumerate(doc.elements)}
        star = [[idx[v] for v in row] for row in doc.star]
    fix = None if doc.fixpoint is None else lattice.index(doc.fixpoint)
    A = ResiduatedAlgebra(lattice, star, fixpoint=fix, name=doc.name)
    m = None
    if doc.modal is not None:
        m = ModalPair(A, doc.modal["box"], doc.modal["diamond"])
    return A, m


def algebra_to_document(A, modal=None, metadata=None):
    """Document for an algebra; the star table is written only when it is not meet."""
    labels = A.labels
    covers = tuple(sorted(((labels[i], labels[j]) for i, j in A.lattice.covers),
                          key=lambda c: (A.index(c[0]), A.index(c[1]))))
    star = None
    if not (A.star == A.meet).all():
        star = tuple(tuple(labels[v] for v in row) for row in A.star.tolist())
    fix = None if A.fixpoint is None else labels[A.fixpoint]
    tables = None
    if modal is not None:
        tables = {"box": modal.box_labels(), "diamond": modal.diamond_labels()}
    meta = {"name": A.name} if A.name else {}
    meta.update(metadata or {})
    return AlgebraDocument(tuple(labels), covers, star, fix, tables, meta)


def fixture_names():
    root = resources.files("rotalg") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def read_text(source):
    """Text of a file path, ``-`` for stdin, or a shipped fixture name."""
    import sys

    if source == "-":
        return sys.stdin.read()
    path = Path(source)
    if path.exists():
        return path.read_text(encoding="utf-8")
    name = source[:-5] if source.endswith(".json") else source
    res = resources.files("rotalg") / "fixtures" / f"{name}.json"
    if res.is_file():
        return res.read_text(encoding="utf-8")
    raise FileNotFoundError(f"no such file or fixture: {source}")


def load(source):
    """Parse a file or fixture and build ``(algebra, modal pair or None, document)``."""
    doc = parse_document(read_text(source))
    A, m = doc_to_algebra(doc)
    return A, m, doc
