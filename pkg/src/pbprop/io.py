"""Reading and writing instances.

Native format is JSON with rational numbers encoded as strings ("7/10",
"0.35"); there is also a reader for the semicolon-separated .pb election
format (approval ballots only).
"""

from __future__ import annotations

import json
from fractions import Fraction

from .model import PBInstance, as_fraction, validate


class FormatError(Exception):
    """Input file does not match the expected schema."""


def _fraction_field(container, key, where):
    if key not in container:
        raise FormatError(f"{where}: missing {key!r}")
    try:
        return as_fraction(container[key])
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise FormatError(f"{where}: bad rational {container[key]!r} ({exc})") from exc


def parse_instance(text: str) -> PBInstance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise FormatError("top level must be an object")
    meta = data.get("meta", {})
    budget = _fraction_field(meta, "budget", "meta")
    description = meta.get("description", "")
    projects = []
    cost = {}
    for idx, entry in enumerate(data.get("projects", [])):
        where = f"projects[{idx}]"
        if not isinstance(entry, dict) or "id" not in entry:
            raise FormatError(f"{where}: expected an object with an id")
        pid = str(entry["id"])
        if pid in cost:
            raise FormatError(f"{where}: duplicate project id {pid!r}")
        projects.append(pid)
        cost[pid] = _fraction_field(entry, "cost", where)
    utilities = {}
    voters = []
    for idx, entry in enumerate(data.get("voters", [])):
        where = f"voters[{idx}]"
        if not isinstance(entry, dict) or "id" not in entry:
            raise FormatError(f"{where}: expected an object with an id")
        vid = str(entry["id"])
        if vid in utilities:
            raise FormatError(f"{where}: duplicate voter id {vid!r}")
        voters.append(vid)
        row = entry.get("utilities", {})
        if not isinstance(row, dict):
            raise FormatError(f"{where}: utilities must be an object")
        utilities[vid] = {
            str(c): _fraction_field(row, c, f"{where}.utilities") for c in row
        }
    for vid, row in utilities.items():
        for c in row:
            if c not in cost:
                raise FormatError(f"voter {vid} rates unknown project {c!r}")
    instance = PBInstance.build(voters, projects, cost, utilities, budget, description)
    report = validate(instance)
    if not report.ok:
        raise FormatError("; ".join(report.problems))
    return instance


def load_instance(path) -> PBInstance:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if str(path).endswith(".pb"):
        return parse_pabulib(text)
    return parse_instance(text)


def _frac_str(x: Fraction) -> str:
    return str(x)


def serialize_instance(instance: PBInstance) -> str:
    data = {
        "meta": {
            "budget": _frac_str(instance.budget),
            "description": instance.description,
        },
        "projects": [
            {"id": c, "cost": _frac_str(instance.cost[c])} for c in instance.projects
        ],
        "voters": [
            {
                "id": v,
                "utilities": {
                    c: _frac_str(u)
                    for c, u in instance.utilities[v].items()
                    if u != 0
                },
            }
            for v in instance.voters
        ],
    }
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


def parse_pabulib(text: str) -> PBInstance:
    """Read a .pb participatory-budgeting election (approval ballots only)."""
    section = None
    header = None
    meta = {}
    cost = {}
    approvals = {}
    order = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.upper() in ("META", "PROJECTS", "VOTES"):
            section = line.upper()
            header = None
            continue
        if section is None:
            raise FormatError(f"line {lineno}: content before any section header")
        fields = [f.strip() for f in line.split(";")]
        if section == "META":
            if header is None and fields[:2] == ["key", "value"]:
                header = fields
                continue
            if len(fields) < 2:
                raise FormatError(f"line {lineno}: META rows need key;value")
            meta[fields[0]] = fields[1]
        elif section == "PROJECTS":
            if header is None:
                header = fields
                if "project_id" not in header or "cost" not in header:
                    raise FormatError(
                        f"line {lineno}: PROJECTS header needs project_id and cost"
                    )
                continue
            row = dict(zip(header, fields))
            pid = row["project_id"]
            try:
                cost[pid] = as_fraction(row["cost"])
            except (ValueError, TypeError) as exc:
                raise FormatError(f"line {lineno}: bad cost {row['cost']!r}") from exc
        elif section == "VOTES":
            if header is None:
                header = fields
                if "voter_id" not in header or "vote" not in header:
                    raise FormatError(
                        f"line {lineno}: VOTES header needs voter_id and vote"
                    )
                continue
            row = dict(zip(header, fields))
            vid = row["voter_id"]
            order.append(vid)
            approvals[vid] = [p for p in row["vote"].split(",") if p]
    vote_type = meta.get("vote_type", "approval")
    if vote_type != "approval":
        raise FormatError(f"only approval ballots are supported, not {vote_type!r}")
    if "budget" not in meta:
        raise FormatError("META has no budget")
    try:
        budget = as_fraction(meta["budget"])
    except (ValueError, TypeError) as exc:
        raise FormatError(f"bad budget {meta['budget']!r}") from exc
    utilities = {}
    for vid in order:
        row = {}
        for pid in approvals[vid]:
            if pid not in cost:
                raise FormatError(f"voter {vid} approves unknown project {pid!r}")
            row[pid] = Fraction(1)
        utilities[vid] = row
    instance = PBInstance.build(
        order, list(cost), cost, utilities, budget, meta.get("description", "")
    )
    report = validate(instance)
    if not report.ok:
        raise FormatError("; ".join(report.problems))
    return instance
