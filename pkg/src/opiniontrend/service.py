"""HTTP curation and series service.

Hosts the human-validation step over the co-occurrence graph artifacts and
serves the computed series to the browser dashboard. Plain JSON over
stdlib HTTP, no authentication: this is a local analyst tool. State
transitions are serialized behind one lock per session; the decisions the
analyst posts are appended to the same CSV format batch mode replays, so an
interactive session is reproducible headlessly.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import os
import threading
from dataclasses import dataclass
from datetime import date
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from .cooccur import SignificantGraph, HashtagStats, load_graph_csv, load_stats_json
from .pipeline import ArtifactStore, PipelineConfig
from .propagation import (
    CURATED,
    Decision,
    PropagationError,
    SeedAssignment,
    apply_curation,
    consistency_prune,
    initial_state,
    load_seeds_file,
    occurrence_filter,
    propagate_step,
)

log = logging.getLogger(__name__)


class SessionConflict(Exception):
    def __init__(self, tags):
        super().__init__(f"not current candidates: {sorted(tags)}")
        self.tags = sorted(tags)


class CurationSession:
    """Single-writer propagation session mirroring the batch loop: propose,
    curate via POSTed decisions, then iterate (prune + advance + propose)."""

    def __init__(
        self,
        graph: SignificantGraph,
        seeds: SeedAssignment,
        stats: HashtagStats,
        r: float,
        decisions_path: str,
        audit_path: str,
        communities: dict[str, int] | None = None,
        session_id: str = "session-1",
    ):
        self.lock = threading.Lock()
        self.session_id = session_id
        self.stats = stats
        self.r = r
        self.decisions_path = decisions_path
        self.audit_path = audit_path
        self.communities = communities or {}
        self.state = initial_state(graph, seeds)
        self.stable = False
        self._accepted_since_propose = 0
        if not os.path.exists(decisions_path):
            with open(decisions_path, "w", encoding="utf-8", newline="") as fh:
                fh.write("iteration,hashtag,action\n")
        for tag, entry in sorted(self.state.assignment.entries.items()):
            self._audit({"iteration": 0, "event": "seed", "hashtag": tag, "class": entry.cls})
        self._propose()

    def _audit(self, event: dict) -> None:
        with open(self.audit_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True, separators=(",", ":")) + "\n")

    def _propose(self) -> None:
        proposals = propagate_step(self.state)
        self.state.candidates = occurrence_filter(
            proposals, self.stats, self.state.assignment, self.r
        )
        for cls in sorted(self.state.candidates):
            for cand in self.state.candidates[cls]:
                self._audit(
                    {
                        "iteration": self.state.iteration,
                        "event": "propose",
                        "hashtag": cand.tag,
                        "class": cand.cls,
                        "score": cand.score,
                    }
                )
        self._accepted_since_propose = 0

    def post_decisions(self, decisions: list[Decision]) -> dict:
        with self.lock:
            missing = [d.hashtag for d in decisions if self.state.find_candidate(d.hashtag) is None]
            if missing:
                raise SessionConflict(missing)
            applied, _ = apply_curation(self.state, decisions, provenance=CURATED)
            with open(self.decisions_path, "a", encoding="utf-8", newline="") as fh:
                for dec in applied:
                    fh.write(f"{self.state.iteration},{dec.hashtag},{dec.action}\n")
            for dec in applied:
                if dec.action == "accept":
                    self._accepted_since_propose += 1
                    entry = self.state.assignment.entries[dec.hashtag]
                    self._audit(
                        {
                            "iteration": self.state.iteration,
                            "event": "accept",
                            "hashtag": dec.hashtag,
                            "class": entry.cls,
                            "provenance": entry.provenance,
                        }
                    )
                else:
                    self._audit(
                        {
                            "iteration": self.state.iteration,
                            "event": "reject",
                            "hashtag": dec.hashtag,
                        }
                    )
            return self.state_summary_locked()

    def iterate(self) -> dict:
        with self.lock:
            pruned = consistency_prune(self.state)
            for tag in pruned:
                self._audit({"iteration": self.state.iteration, "event": "prune", "hashtag": tag})
            if self._accepted_since_propose == 0 and not pruned:
                self.stable = True
            self.state.iteration += 1
            self._propose()
            return self.state_summary_locked()

    def state_summary_locked(self) -> dict:
        assignment = self.state.assignment
        return {
            "session_id": self.session_id,
            "iteration": self.state.iteration,
            "stable": self.stable,
            "classes": list(assignment.classes),
            "assigned_counts": {cls: len(assignment.tags_of(cls)) for cls in assignment.classes},
            "candidate_counts": {
                cls: len(lst) for cls, lst in sorted(self.state.candidates.items())
            },
            "rejected_count": len(self.state.rejected),
        }

    def state_summary(self) -> dict:
        with self.lock:
            return self.state_summary_locked()

    def candidates_view(self) -> dict:
        with self.lock:
            out: dict[str, list[dict]] = {}
            for cls in sorted(self.state.candidates):
                rows = []
                for cand in self.state.candidates[cls]:
                    neighbors = sorted(
                        (
                            (nb, s)
                            for nb, s in self.state.graph.neighbors(cand.tag).items()
                            if nb in self.state.assignment.entries
                        ),
                        key=lambda kv: -kv[1],
                    )[:8]
                    rows.append(
                        {
                            "hashtag": cand.tag,
                            "score": cand.score,
                            "class_scores": dict(cand.class_scores),
                            "occurrences": self.stats.count(cand.tag),
                            "top_neighbors": [
                                {"hashtag": nb, "s": s,
                                 "class": self.state.assignment.class_of(nb)}
                                for nb, s in neighbors
                            ],
                        }
                    )
                out[cls] = rows
            return {"iteration": self.state.iteration, "candidates": out}

    def graph_view(self) -> dict:
        with self.lock:
            assignment = self.state.assignment.as_label_map()
            candidates = {c.tag: c.cls for lst in self.state.candidates.values() for c in lst}
            nodes = []
            for tag in sorted(self.state.graph.vertices):
                node = {"id": tag, "count": self.state.graph.vertices[tag]}
                if tag in self.communities:
                    node["community"] = self.communities[tag]
                if tag in assignment:
                    node["class"] = assignment[tag]
                    node["provenance"] = self.state.assignment.entries[tag].provenance
                if tag in candidates:
                    node["candidate_for"] = candidates[tag]
                nodes.append(node)
            links = [
                {"source": a, "target": b, "s": info.s, "k": info.k}
                for (a, b), info in sorted(self.state.graph.edges.items())
            ]
            return {"nodes": nodes, "links": links}


def _read_csv_columns(path: str) -> tuple[list[str], list[list[str]]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [row for row in reader if row]
    return header, rows


def _series_payload(header, rows, label_cols) -> dict:
    days = [row[0] for row in rows]
    series = {}
    for col in label_cols:
        idx = header.index(col)
        series[col] = [None if row[idx] == "" else float(row[idx]) for row in rows]
    return {"days": days, "series": series}


class SeriesProvider:
    """Reads computed series out of the pipeline artifact store."""

    def __init__(self, store: ArtifactStore):
        self.store = store

    def opinion(self, scope: str = "whole") -> dict:
        header, rows = _read_csv_columns(self.store.artifact_path("opinion", scope))
        ratio_cols = [c for c in header if c.startswith("r_")]
        count_cols = [c for c in header if c.startswith("n_")]
        payload = _series_payload(header, rows, ratio_cols + count_cols)
        payload["scope"] = scope
        return payload

    def polls(self) -> dict:
        header, rows = _read_csv_columns(self.store.artifact_path("fit", "polls"))
        return _series_payload(header, rows, ["y_a"])

    def fit(self) -> dict:
        with open(self.store.artifact_path("fit", "fit"), "r", encoding="utf-8") as fh:
            fit = json.load(fh)
        from .pollfit import backward_moving_average
        from .series import DailySeries

        header, rows = _read_csv_columns(self.store.artifact_path("opinion", "whole"))
        ratio_col = next(c for c in header if c.startswith("r_"))
        idx = header.index(ratio_col)
        mapping = {
            date.fromisoformat(row[0]): (float(row[idx]) if row[idx] != "" else math.nan)
            for row in rows
        }
        ratio = DailySeries.from_mapping(mapping)
        smoothed = backward_moving_average(ratio, int(fit["w"]))
        days = []
        fitted = []
        for i in range(len(smoothed)):
            v = smoothed.values[i]
            if math.isnan(v):
                continue
            days.append(smoothed.day_at(i).isoformat())
            fitted.append(fit["A"] * float(v) + fit["b"])
        return {"params": fit, "days": days, "series": {"fitted": fitted}}

    def baselines(self) -> dict:
        out = {}
        entry = self.store.manifest["stages"].get("benchmark", {}).get("artifacts", {})
        for name in entry:
            if name == "comparison":
                with open(self.store.artifact_path("benchmark", name), "r", encoding="utf-8") as fh:
                    out["comparison"] = json.load(fh)
                continue
            header, rows = _read_csv_columns(self.store.artifact_path("benchmark", name))
            out[name] = _series_payload(header, rows, header[1:])
        return out


class _Handler(BaseHTTPRequestHandler):
    server_version = "opiniontrend/0.1"
    session: CurationSession | None = None
    series: SeriesProvider | None = None
    static_dir: str | None = None

    def log_message(self, fmt, *args):
        log.debug("http: " + fmt, *args)

    def _send_json(self, obj, status: int = 200) -> None:
        body = json.dumps(obj).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _send_error_json(self, status: int, message: str) -> None:
        self._send_json({"error": message}, status=status)

    def do_GET(self):  # noqa: N802
        parsed = urlparse(self.path)
        path = parsed.path
        try:
            if path == "/session/state":
                self._require_session()
                self._send_json(self.session.state_summary())
            elif path == "/session/candidates":
                self._require_session()
                self._send_json(self.session.candidates_view())
            elif path == "/session/graph":
                self._require_session()
                self._send_json(self.session.graph_view())
            elif path == "/series/opinion":
                scope = parse_qs(parsed.query).get("scope", ["whole"])[0]
                self._send_json(self.series.opinion(scope))
            elif path == "/series/polls":
                self._send_json(self.series.polls())
            elif path == "/series/fit":
                self._send_json(self.series.fit())
            elif path == "/series/baselines":
                self._send_json(self.series.baselines())
            else:
                self._serve_static(path)
        except (KeyError, FileNotFoundError) as exc:
            self._send_error_json(404, str(exc))
        except Exception as exc:  # pragma: no cover - defensive
            log.exception("GET %s failed", path)
            self._send_error_json(500, str(exc))

    def do_POST(self):  # noqa: N802
        path = urlparse(self.path).path
        try:
            length = int(self.headers.get("Content-Length", "0"))
            body = json.loads(self.rfile.read(length) or b"{}")
            if path == "/session/decisions":
                self._require_session()
                decisions = [
                    Decision(d["hashtag"], d["action"]) for d in body.get("decisions", [])
                ]
                self._send_json(self.session.post_decisions(decisions))
            elif path == "/session/iterate":
                self._require_session()
                self._send_json(self.session.iterate())
            else:
                self._send_error_json(404, f"no such endpoint: {path}")
        except SessionConflict as exc:
            self._send_json({"error": str(exc), "conflicts": exc.tags}, status=409)
        except (PropagationError, ValueError, KeyError) as exc:
            self._send_error_json(400, str(exc))
        except Exception as exc:  # pragma: no cover - defensive
            log.exception("POST %s failed", path)
            self._send_error_json(500, str(exc))

    def _require_session(self):
        if self.session is None:
            raise KeyError("no curation session configured")

    def _serve_static(self, path: str) -> None:
        if self.static_dir is None:
            self._send_error_json(404, "no static assets configured")
            return
        rel = path.lstrip("/") or "index.html"
        full = os.path.normpath(os.path.join(self.static_dir, rel))
        if not full.startswith(os.path.abspath(self.static_dir)):
            self._send_error_json(404, "not found")
            return
        if not os.path.isfile(full):
            self._send_error_json(404, f"not found: {rel}")
            return
        ctype = {
            ".html": "text/html", ".js": "text/javascript", ".css": "text/css",
            ".json": "application/json", ".svg": "image/svg+xml", ".map": "application/json",
        }.get(os.path.splitext(full)[1], "application/octet-stream")
        with open(full, "rb") as fh:
            body = fh.read()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


@dataclass
class ServiceHandles:
    server: ThreadingHTTPServer
    session: CurationSession | None
    series: SeriesProvider

    @property
    def port(self) -> int:
        return self.server.server_address[1]

    def serve_forever(self):
        self.server.serve_forever()

    def shutdown(self):
        self.server.shutdown()
        self.server.server_close()


def build_session_from_artifacts(cfg: PipelineConfig, store: ArtifactStore) -> CurationSession:
    graph = load_graph_csv(
        store.artifact_path("cooccur", "edges"),
        store.artifact_path("cooccur", "vertices"),
        cfg.p0,
    )
    stats = load_stats_json(store.artifact_path("cooccur", "stats"))
    seeds = load_seeds_file(cfg.seeds)
    communities: dict[str, int] = {}
    try:
        with open(store.artifact_path("cooccur", "node_link"), "r", encoding="utf-8") as fh:
            node_link = json.load(fh)
        communities = {
            n["id"]: n["community"] for n in node_link["nodes"] if "community" in n
        }
    except KeyError:
        pass
    return CurationSession(
        graph=graph,
        seeds=seeds,
        stats=stats,
        r=cfg.r,
        decisions_path=os.path.join(store.out_dir, "session_decisions.csv"),
        audit_path=os.path.join(store.out_dir, "session_audit.jsonl"),
        communities=communities,
    )


def create_service(
    cfg: PipelineConfig,
    store: ArtifactStore,
    host: str = "127.0.0.1",
    port: int = 0,
    static_dir: str | None = None,
    with_session: bool = True,
) -> ServiceHandles:
    session = build_session_from_artifacts(cfg, store) if with_session else None
    series = SeriesProvider(store)

    class Handler(_Handler):
        pass

    Handler.session = session
    Handler.series = series
    Handler.static_dir = os.path.abspath(static_dir) if static_dir else None
    server = ThreadingHTTPServer((host, port), Handler)
    return ServiceHandles(server=server, session=session, series=series)
