"""Seeded class propagation over the significant co-occurrence graph.

Starting from a few seed hashtags per opinion class, unassigned neighbors
are proposed for the class whose assigned members carry the strictly
largest total edge significance toward them. Proposals pass an occurrence
filter, then curation (a human, a recorded decisions file, or auto-accept
for synthetic worlds), and after each round every non-seed assignment is
re-checked and pruned if it no longer wins its class strictly. The loop
repeats until nothing changes.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

from .cooccur import HashtagStats, SignificantGraph

SEED = "seed"
PROPAGATED = "propagated"
CURATED = "curated-in"


class PropagationError(Exception):
    pass


@dataclass(frozen=True)
class SeedAssignment:
    classes: tuple[str, ...]
    seeds: dict[str, frozenset[str]]

    def __post_init__(self):
        if len(self.classes) < 2:
            raise PropagationError("need at least two classes")
        all_seeds: set[str] = set()
        for cls in self.classes:
            tags = self.seeds.get(cls, frozenset())
            if not tags:
                raise PropagationError(f"class {cls!r} has no seeds")
            overlap = all_seeds & tags
            if overlap:
                raise PropagationError(f"seed sets overlap on {sorted(overlap)}")
            all_seeds |= tags

    def validate_against(self, graph: SignificantGraph) -> None:
        missing = [t for tags in self.seeds.values() for t in tags if t not in graph.vertices]
        if missing:
            raise PropagationError(f"seeds not present in graph: {sorted(missing)}")


@dataclass(frozen=True)
class AssignmentEntry:
    cls: str
    provenance: str  # seed | propagated | curated-in
    iteration: int


@dataclass
class ClassAssignment:
    classes: tuple[str, ...]
    entries: dict[str, AssignmentEntry] = field(default_factory=dict)

    def tags_of(self, cls: str) -> list[str]:
        return sorted(t for t, e in self.entries.items() if e.cls == cls)

    def class_of(self, tag: str) -> str | None:
        e = self.entries.get(tag)
        return e.cls if e else None

    def as_label_map(self) -> dict[str, str]:
        return {t: e.cls for t, e in self.entries.items()}

    def to_json_obj(self) -> dict:
        return {
            "classes": list(self.classes),
            "entries": {
                t: {"class": e.cls, "provenance": e.provenance, "iteration": e.iteration}
                for t, e in sorted(self.entries.items())
            },
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ClassAssignment":
        out = cls(classes=tuple(obj["classes"]))
        for t, e in obj["entries"].items():
            out.entries[t] = AssignmentEntry(e["class"], e["provenance"], e["iteration"])
        return out

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_obj(), fh, sort_keys=True, indent=1)

    @classmethod
    def load(cls, path) -> "ClassAssignment":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json_obj(json.load(fh))


@dataclass(frozen=True)
class Candidate:
    tag: str
    cls: str
    score: float
    class_scores: tuple[tuple[str, float], ...]


@dataclass
class PropagationState:
    graph: SignificantGraph
    assignment: ClassAssignment
    candidates: dict[str, list[Candidate]] = field(default_factory=dict)
    rejected: set[str] = field(default_factory=set)
    iteration: int = 1
    stable: bool = False

    def candidate_tags(self) -> set[str]:
        return {c.tag for lst in self.candidates.values() for c in lst}

    def find_candidate(self, tag: str) -> Candidate | None:
        for lst in self.candidates.values():
            for c in lst:
                if c.tag == tag:
                    return c
        return None


def initial_state(graph: SignificantGraph, seeds: SeedAssignment) -> PropagationState:
    seeds.validate_against(graph)
    assignment = ClassAssignment(classes=seeds.classes)
    for cls in seeds.classes:
        for tag in sorted(seeds.seeds[cls]):
            assignment.entries[tag] = AssignmentEntry(cls, SEED, 0)
    return PropagationState(graph=graph, assignment=assignment)


def class_scores(state: PropagationState, tag: str) -> dict[str, float]:
    """Per-class sum of edge significances from tag to assigned members."""
    scores = {cls: 0.0 for cls in state.assignment.classes}
    for nb, s in state.graph.neighbors(tag).items():
        entry = state.assignment.entries.get(nb)
        if entry is not None:
            scores[entry.cls] += s
    return scores


def _strict_argmax(scores: dict[str, float]) -> str | None:
    """Class with the strictly largest score; None on ties or no support."""
    ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    if ordered[0][1] <= 0.0:
        return None
    if len(ordered) > 1 and ordered[0][1] == ordered[1][1]:
        return None
    return ordered[0][0]


def propagate_step(state: PropagationState) -> dict[str, list[Candidate]]:
    """Propose unassigned neighbors of the assigned set for their strictly
    winning class. Ties abstain; rejected tags are never re-proposed."""
    assigned = state.assignment.entries
    frontier: set[str] = set()
    for tag in assigned:
        for nb in state.graph.neighbors(tag):
            if nb not in assigned and nb not in state.rejected:
                frontier.add(nb)
    proposals: dict[str, list[Candidate]] = {cls: [] for cls in state.assignment.classes}
    for tag in sorted(frontier):
        scores = class_scores(state, tag)
        winner = _strict_argmax(scores)
        if winner is None:
            continue
        proposals[winner].append(
            Candidate(
                tag=tag,
                cls=winner,
                score=scores[winner],
                class_scores=tuple(sorted(scores.items())),
            )
        )
    for cls in proposals:
        proposals[cls].sort(key=lambda c: (-c.score, c.tag))
    return proposals


def occurrence_filter(
    candidates: dict[str, list[Candidate]],
    stats: HashtagStats,
    assignment: ClassAssignment,
    r: float,
) -> dict[str, list[Candidate]]:
    """Keep a candidate for class k only when its occurrence count strictly
    exceeds r times the largest count among k's currently assigned tags."""
    if not (0.0 < r < 1.0):
        raise PropagationError("r must be in (0, 1)")
    out: dict[str, list[Candidate]] = {}
    for cls, lst in candidates.items():
        member_counts = [stats.count(t) for t in assignment.tags_of(cls)]
        cutoff = r * max(member_counts) if member_counts else 0.0
        out[cls] = [c for c in lst if stats.count(c.tag) > cutoff]
    return out


@dataclass(frozen=True)
class Decision:
    hashtag: str
    action: str  # accept | reject

    def __post_init__(self):
        if self.action not in ("accept", "reject"):
            raise PropagationError(f"unknown decision action {self.action!r}")


def apply_curation(
    state: PropagationState,
    decisions,
    provenance: str = CURATED,
) -> tuple[list[Decision], list[str]]:
    """Apply curation decisions to the current candidate set.

    Returns (applied decisions, diagnostics). A decision about a tag that is
    not currently a candidate is skipped with a diagnostic rather than
    applied.
    """
    applied: list[Decision] = []
    diagnostics: list[str] = []
    for dec in decisions:
        cand = state.find_candidate(dec.hashtag)
        if cand is None:
            diagnostics.append(f"{dec.hashtag!r} is not a candidate at iteration {state.iteration}")
            continue
        if dec.action == "accept":
            state.assignment.entries[cand.tag] = AssignmentEntry(
                cand.cls, provenance, state.iteration
            )
        else:
            state.rejected.add(cand.tag)
        state.candidates[cand.cls] = [c for c in state.candidates[cand.cls] if c.tag != cand.tag]
        applied.append(dec)
    return applied, diagnostics


def consistency_prune(state: PropagationState) -> list[str]:
    """Remove non-seed assignments that no longer win their class strictly,
    cascading until a fixed point."""
    pruned_total: list[str] = []
    while True:
        violators: list[str] = []
        for tag in sorted(state.assignment.entries):
            entry = state.assignment.entries[tag]
            if entry.provenance == SEED:
                continue
            if _strict_argmax(class_scores(state, tag)) != entry.cls:
                violators.append(tag)
        if not violators:
            break
        for tag in violators:
            del state.assignment.entries[tag]
        pruned_total.extend(violators)
    return pruned_total


# --- curation sources -------------------------------------------------------


def auto_accept_all(state: PropagationState) -> list[Decision]:
    """Accept every filtered candidate (synthetic/harness mode)."""
    return [
        Decision(c.tag, "accept")
        for cls in sorted(state.candidates)
        for c in state.candidates[cls]
    ]


class BatchDecisions:
    """Curation source replaying a pre-recorded decisions file."""

    def __init__(self, rows):
        # rows: iterable of (iteration, hashtag, action)
        self.by_iteration: dict[int, list[Decision]] = {}
        for it, tag, action in rows:
            self.by_iteration.setdefault(int(it), []).append(Decision(tag, action))

    @classmethod
    def from_csv(cls, path) -> "BatchDecisions":
        rows = []
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is not None and header[:3] != ["iteration", "hashtag", "action"]:
                # no header line: treat it as data
                rows.append((int(header[0]), header[1], header[2]))
            for row in reader:
                if row:
                    rows.append((int(row[0]), row[1], row[2]))
        return cls(rows)

    def __call__(self, state: PropagationState) -> list[Decision]:
        return self.by_iteration.get(state.iteration, [])


def write_decisions_csv(path, rows) -> None:
    """rows: iterable of (iteration, hashtag, action)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("iteration,hashtag,action\n")
        for it, tag, action in rows:
            fh.write(f"{it},{tag},{action}\n")


# --- driver ------------------------------------------------------------------


@dataclass
class PropagationResult:
    assignment: ClassAssignment
    iterations: int  # rounds that changed the assignment
    stable: bool
    audit: list[dict]
    rejected: set[str]

    def write_audit(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for event in self.audit:
                fh.write(json.dumps(event, sort_keys=True, separators=(",", ":")) + "\n")


def run_until_stable(
    graph: SignificantGraph,
    seeds: SeedAssignment,
    stats: HashtagStats,
    r: float,
    curation_source,
    max_iterations: int = 20,
    provenance: str = CURATED,
) -> PropagationResult:
    """Iterate propagate -> filter -> curate -> prune until the assignment
    stops changing. Returns the last state flagged unstable when
    max_iterations is exhausted first."""
    state = initial_state(graph, seeds)
    audit: list[dict] = [
        {"iteration": 0, "event": "seed", "hashtag": t, "class": e.cls}
        for t, e in sorted(state.assignment.entries.items())
    ]
    productive = 0
    stable = False
    for _ in range(max_iterations):
        proposals = propagate_step(state)
        state.candidates = occurrence_filter(proposals, stats, state.assignment, r)
        for cls in sorted(state.candidates):
            for cand in state.candidates[cls]:
                audit.append(
                    {
                        "iteration": state.iteration,
                        "event": "propose",
                        "hashtag": cand.tag,
                        "class": cand.cls,
                        "score": cand.score,
                    }
                )
        decisions = curation_source(state)
        applied, diagnostics = apply_curation(state, decisions, provenance=provenance)
        for msg in diagnostics:
            audit.append({"iteration": state.iteration, "event": "skip", "detail": msg})
        accepted = 0
        for dec in applied:
            if dec.action == "accept":
                accepted += 1
                entry = state.assignment.entries[dec.hashtag]
                audit.append(
                    {
                        "iteration": state.iteration,
                        "event": "accept",
                        "hashtag": dec.hashtag,
                        "class": entry.cls,
                        "provenance": entry.provenance,
                    }
                )
            else:
                audit.append(
                    {"iteration": state.iteration, "event": "reject", "hashtag": dec.hashtag}
                )
        pruned = consistency_prune(state)
        for tag in pruned:
            audit.append({"iteration": state.iteration, "event": "prune", "hashtag": tag})
        changed = accepted > 0 or len(pruned) > 0
        state.iteration += 1
        if not changed:
            stable = True
            break
        productive += 1
    state.stable = stable
    return PropagationResult(
        assignment=state.assignment,
        iterations=productive,
        stable=stable,
        audit=audit,
        rejected=state.rejected,
    )


def replay_audit(classes: tuple[str, ...], audit) -> ClassAssignment:
    """Reconstruct the assignment that produced an audit log."""
    assignment = ClassAssignment(classes=classes)
    for event in audit:
        kind = event["event"]
        if kind == "seed":
            assignment.entries[event["hashtag"]] = AssignmentEntry(event["class"], SEED, 0)
        elif kind == "accept":
            assignment.entries[event["hashtag"]] = AssignmentEntry(
                event["class"], event.get("provenance", CURATED), event["iteration"]
            )
        elif kind == "prune":
            assignment.entries.pop(event["hashtag"], None)
    return assignment


def subsample_assignment(assignment: ClassAssignment, frac: float, rng) -> ClassAssignment:
    """Random per-class subsample of the assignment (robustness harness)."""
    out = ClassAssignment(classes=assignment.classes)
    for cls in assignment.classes:
        tags = assignment.tags_of(cls)
        keep = max(1, int(round(frac * len(tags))))
        chosen = sorted(rng.choice(len(tags), size=keep, replace=False).tolist())
        for idx in chosen:
            out.entries[tags[idx]] = assignment.entries[tags[idx]]
    return out


# --- seeds file --------------------------------------------------------------


def load_seeds_file(path) -> SeedAssignment:
    """Parse a seeds file: one line per class, ``class: tag tag tag``."""
    classes: list[str] = []
    seeds: dict[str, frozenset[str]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if ":" not in line:
                raise PropagationError(f"bad seeds line: {line!r}")
            cls, tags = line.split(":", 1)
            cls = cls.strip()
            classes.append(cls)
            seeds[cls] = frozenset(tags.split())
    return SeedAssignment(classes=tuple(classes), seeds=seeds)


def write_seeds_file(path, seeds: SeedAssignment) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for cls in seeds.classes:
            fh.write(f"{cls}: {' '.join(sorted(seeds.seeds[cls]))}\n")
