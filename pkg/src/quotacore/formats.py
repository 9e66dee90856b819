"""JSON file formats.  Serialization is canonical: sorted keys, sorted id
sets, two-space indent and a trailing newline, so equal inputs give
byte-identical files."""

from __future__ import annotations

import json
import re
import sys
from pathlib import Path
from typing import Any, Union

from .core_verify import BlockingCertificate
from .model import (
    Allocation,
    CapInstance,
    DirectedNetwork,
    NetworkInstance,
    StageTrace,
    Transfer,
    validate_cap_instance,
    validate_network_instance,
)
from .prices import PriceReport, PriceTable

Instance = Union[NetworkInstance, CapInstance]


class FormatError(ValueError):
    """Unreadable or invalid input file; the message carries a line number."""


def dumps(doc: dict[str, Any]) -> str:
    """Canonical text: sorted keys, one line per array of scalars."""
    return _encode(doc, 0) + "\n"


def _encode(value: Any, depth: int) -> str:
    pad = "  " * (depth + 1)
    end = "  " * depth
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_encode(value[k], depth + 1)}"
            for k in sorted(value, key=str)
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(value, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in value):
            return "[" + ", ".join(json.dumps(v, ensure_ascii=False) for v in value) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, depth + 1) for v in value) + "\n" + end + "]"
    return json.dumps(value, ensure_ascii=False)


def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _line_of(text: str, key: str) -> int:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else 1


def parse_json(text: str, source: str = "<input>") -> dict[str, Any]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{source}:{exc.lineno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise FormatError(f"{source}:1: top level must be an object")
    return doc


class _Reader:
    def __init__(self, doc: dict[str, Any], text: str, source: str):
        self.doc, self.text, self.source = doc, text, source

    def fail(self, key: str, msg: str) -> FormatError:
        return FormatError(f"{self.source}:{_line_of(self.text, key)}: {msg}")

    def get(self, key: str) -> Any:
        if key not in self.doc:
            raise FormatError(f"{self.source}:1: missing field {key!r}")
        return self.doc[key]

    def int_(self, key: str) -> int:
        v = self.get(key)
        if not isinstance(v, int) or isinstance(v, bool):
            raise self.fail(key, f"{key!r} must be an integer")
        return v

    def int_rows(self, key: str) -> list[list[int]]:
        v = self.get(key)
        if not isinstance(v, list) or not all(isinstance(r, list) for r in v):
            raise self.fail(key, f"{key!r} must be a list of integer lists")
        for r in v:
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in r):
                raise self.fail(key, f"{key!r} must contain only integers")
        return v


def _labels(reader: _Reader, key: str, size: int) -> list[str] | None:
    labels = reader.doc.get(key)
    if labels is None:
        return None
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise reader.fail(key, f"{key!r} must be a list of strings")
    if len(labels) != size or len(set(labels)) != size:
        raise reader.fail(key, f"{key!r} must give {size} distinct names")
    return labels


def parse_instance(text: str, source: str = "<input>") -> tuple[Instance, dict[str, list[str]]]:
    """Parse and validate an instance file; returns the instance and any label tables."""
    doc = parse_json(text, source)
    r = _Reader(doc, text, source)
    kind = r.get("kind")
    labels: dict[str, list[str]] = {}
    if kind == "network":
        n = r.int_("agents")
        quotas = r.get("quotas")
        if not isinstance(quotas, list) or not all(isinstance(q, int) and not isinstance(q, bool) for q in quotas):
            raise r.fail("quotas", "'quotas' must be a list of integers")
        if len(quotas) != n:
            raise r.fail("quotas", f"expected {n} quotas, got {len(quotas)}")
        prefs = r.int_rows("preferences")
        inst: Instance = NetworkInstance(quotas, prefs)
        problems = validate_network_instance(inst)
        if (names := _labels(r, "labels", n)) is not None:
            labels["labels"] = names
    elif kind == "cap":
        n = r.int_("agents")
        m = r.int_("items")
        endowments = r.int_rows("endowments")
        if len(endowments) != n:
            raise r.fail("endowments", f"expected {n} endowments, got {len(endowments)}")
        for i, s in enumerate(endowments):
            if len(set(s)) != len(s):
                raise r.fail("endowments", f"S({i}) lists an item twice")
        prefs = r.int_rows("preferences")
        inst = CapInstance(m, endowments, prefs)
        problems = validate_cap_instance(inst)
        if (names := _labels(r, "labels", n)) is not None:
            labels["labels"] = names
        if (names := _labels(r, "item_labels", m)) is not None:
            labels["item_labels"] = names
    else:
        raise r.fail("kind", f"unknown kind {kind!r}; expected 'network' or 'cap'")
    if problems:
        key = "preferences" if any("preference" in p for p in problems) else ("quotas" if kind == "network" else "endowments")
        raise r.fail(key, "; ".join(problems))
    return inst, labels


def instance_to_dict(inst: Instance, labels: dict[str, list[str]] | None = None) -> dict[str, Any]:
    if isinstance(inst, NetworkInstance):
        doc: dict[str, Any] = {
            "kind": "network",
            "agents": inst.n,
            "quotas": list(inst.quotas),
            "preferences": [list(p) for p in inst.preferences],
        }
    else:
        doc = {
            "kind": "cap",
            "agents": inst.n,
            "items": inst.n_items,
            "endowments": [sorted(s) for s in inst.endowments],
            "preferences": [list(p) for p in inst.preferences],
        }
    if labels:
        doc.update(labels)
    return doc


def outcome_to_dict(outcome: DirectedNetwork | Allocation, trace: StageTrace | None = None) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "kind": "network-result" if isinstance(outcome, DirectedNetwork) else "cap-result",
        "assignments": outcome.as_lists(),
    }
    if trace is not None:
        doc["stages"] = trace.stages
    return doc


def parse_outcome(text: str, inst: Instance, source: str = "<candidate>") -> DirectedNetwork | Allocation:
    """Read the ``assignments`` of a result file as an outcome for ``inst``."""
    doc = parse_json(text, source)
    r = _Reader(doc, text, source)
    rows = r.int_rows("assignments")
    if len(rows) != inst.n:
        raise r.fail("assignments", f"expected {inst.n} rows, got {len(rows)}")
    size = inst.n if isinstance(inst, NetworkInstance) else inst.n_items
    for i, row in enumerate(rows):
        if len(set(row)) != len(row):
            raise r.fail("assignments", f"A({i}) lists an id twice")
        bad = [x for x in row if not 0 <= x < size]
        if bad:
            raise r.fail("assignments", f"A({i}) references unknown ids {bad}")
    if isinstance(inst, NetworkInstance):
        return DirectedNetwork.from_lists(rows)
    return Allocation.from_lists(rows)


def trace_to_dict(trace: StageTrace) -> dict[str, Any]:
    return {
        "kind": "trace",
        "stages": trace.stages,
        "transfers": [list(t) for t in trace.transfers],
    }


def parse_trace(text: str, source: str = "<trace>") -> StageTrace:
    doc = parse_json(text, source)
    rows = _Reader(doc, text, source).int_rows("transfers")
    if any(len(row) != 3 for row in rows):
        raise FormatError(f"{source}:{_line_of(text, 'transfers')}: transfers are [receiver, item, stage] triples")
    return StageTrace(tuple(Transfer(*row) for row in rows))


def certificate_to_dict(cert: BlockingCertificate) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "coalition": list(cert.coalition),
        "permutation": list(cert.permutation),
        "witnesses": list(cert.witnesses),
    }
    if cert.offers is not None:
        doc["offers"] = list(cert.offers)
    return doc


def prices_to_dict(table: PriceTable, report: PriceReport | None = None) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "stage_prices": list(table.stage_prices),
        "personalized": [[i, j, p] for (i, j), p in sorted(table.personalized.items())],
        "market": [[j, p] for j, p in sorted(table.market.items())],
    }
    if report is not None:
        doc["properties"] = report.as_dict()
    return doc
