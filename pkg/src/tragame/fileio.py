"""Instance and result file formats.

Instances live in YAML (``nodes``, ``edges`` as undirected pairs,
``flows`` as route + intrinsic category).  Tabular results go to CSV or
JSON lines; either way the file starts with ``# key=value`` comment lines
carrying version, parameters and seeds, which all readers here skip.
"""

from __future__ import annotations

import csv
import io
import json
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version as _pkg_version
from importlib.resources import files as _resource_files
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import yaml

from .costs import NodeStatus
from .model import (
    AccessCategory,
    E2eFlow,
    HearabilityGraph,
    NetworkInstance,
    Route,
)

try:
    _VERSION = _pkg_version("tragame")
except PackageNotFoundError:  # running from a source tree without install
    _VERSION = "0+unknown"

CSV_FORMAT = "csv"
JSONL_FORMAT = "json-lines"
FORMATS = (CSV_FORMAT, JSONL_FORMAT)


def header_lines(meta: Mapping[str, Any] | None = None) -> list[str]:
    """Comment header stamped on every output file."""
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    lines = [f"# tragame_version={_VERSION}", f"# timestamp={stamp}"]
    for key, value in (meta or {}).items():
        lines.append(f"# {key}={value}")
    return lines


def read_header(path: str | Path) -> dict[str, str]:
    """Parse the leading ``# key=value`` lines back into a dict."""
    meta: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            body = line[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                meta[key.strip()] = value.strip()
    return meta


def save_instance(
    path: str | Path,
    instance: NetworkInstance,
    meta: Mapping[str, Any] | None = None,
) -> Path:
    path = Path(path)
    doc = {
        "nodes": instance.node_count,
        "edges": [list(edge) for edge in instance.graph.undirected_edges],
        "flows": [
            {"route": list(flow.route.nodes), "ac": flow.intrinsic_ac.value}
            for flow in instance.flows
        ],
    }
    body = yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(header_lines(meta)) + "\n" + body, encoding="utf-8")
    return path


def load_instance(path: str | Path) -> NetworkInstance:
    doc = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: expected a mapping at top level")
    for key in ("nodes", "edges", "flows"):
        if key not in doc:
            raise ValueError(f"{path}: missing required key {key!r}")
    graph = HearabilityGraph.from_undirected_edges(
        int(doc["nodes"]), [tuple(edge) for edge in doc["edges"]]
    )
    flows = tuple(
        E2eFlow(
            route=Route(tuple(int(n) for n in spec["route"])),
            intrinsic_ac=AccessCategory(spec["ac"]),
            flow_id=idx,
        )
        for idx, spec in enumerate(doc["flows"])
    )
    instance = NetworkInstance(graph=graph, flows=flows)
    instance.ensure_valid()
    return instance


def bundled_instance_path() -> Path:
    """The packaged 10-node reference scenario."""
    return Path(str(_resource_files("tragame") / "data" / "example10.yaml"))


def bundled_reference_status_path() -> Path:
    """Externally reported status classifications for the reference scenario."""
    return Path(
        str(_resource_files("tragame") / "data" / "example10_reference_status.csv")
    )


def save_status_corpus(
    path: str | Path,
    corpus: Mapping[int, Sequence[NodeStatus]],
    meta: Mapping[str, Any] | None = None,
    fmt: str = CSV_FORMAT,
) -> Path:
    rows = [
        {
            "attacker_set_bitmask": mask,
            "node_id": node,
            "status": status.value,
        }
        for mask in sorted(corpus)
        for node, status in enumerate(corpus[mask])
    ]
    return write_rows(
        path,
        fieldnames=("attacker_set_bitmask", "node_id", "status"),
        rows=rows,
        meta=meta,
        fmt=fmt,
    )


def load_status_corpus(path: str | Path) -> dict[int, tuple[NodeStatus, ...]]:
    """Read a ground-truth corpus; every mask must cover nodes 0..n-1."""
    by_mask: dict[int, dict[int, NodeStatus]] = {}
    for row in read_rows(path):
        mask = int(row["attacker_set_bitmask"])
        node = int(row["node_id"])
        status = NodeStatus(row["status"])
        entry = by_mask.setdefault(mask, {})
        if node in entry:
            raise ValueError(f"{path}: duplicate (mask={mask}, node={node})")
        entry[node] = status
    if not by_mask:
        raise ValueError(f"{path}: empty status corpus")
    node_count = 1 + max(max(nodes) for nodes in by_mask.values())
    corpus = {}
    for mask, entry in by_mask.items():
        if sorted(entry) != list(range(node_count)):
            raise ValueError(
                f"{path}: mask {mask} does not cover all {node_count} nodes"
            )
        corpus[mask] = tuple(entry[node] for node in range(node_count))
    return corpus


def write_rows(
    path: str | Path,
    fieldnames: Sequence[str],
    rows: Iterable[Mapping[str, Any]],
    meta: Mapping[str, Any] | None = None,
    fmt: str = CSV_FORMAT,
) -> Path:
    """Write tabular rows with the standard comment header, CSV or JSON lines."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}, expected one of {FORMATS}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    for line in header_lines(meta):
        buf.write(line + "\n")
    if fmt == CSV_FORMAT:
        writer = csv.DictWriter(buf, fieldnames=list(fieldnames), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    else:
        for row in rows:
            ordered = {name: row[name] for name in fieldnames if name in row}
            buf.write(json.dumps(ordered) + "\n")
    path.write_text(buf.getvalue(), encoding="utf-8")
    return path


def read_rows(path: str | Path) -> list[dict[str, Any]]:
    """Read rows back from either output format, skipping comment lines."""
    lines = [
        line
        for line in Path(path).read_text(encoding="utf-8").splitlines()
        if line and not line.startswith("#")
    ]
    if not lines:
        return []
    if lines[0].lstrip().startswith("{"):
        return [json.loads(line) for line in lines]
    reader = csv.DictReader(lines)
    return [dict(row) for row in reader]
