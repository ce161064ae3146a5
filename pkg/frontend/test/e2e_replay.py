"""Replay a recorded decisions file in batch mode and print the final
assignment as JSON (hashtag -> class). Used by the frontend end-to-end test
to check interactive/batch equivalence."""

import json
import sys

from opiniontrend.cooccur import load_graph_csv, load_stats_json
from opiniontrend.pipeline import ArtifactStore
from opiniontrend.propagation import BatchDecisions, load_seeds_file, run_until_stable


def main() -> None:
    out_dir, seeds_path, decisions_csv, p0, r = sys.argv[1:6]
    store = ArtifactStore(out_dir)
    graph = load_graph_csv(
        store.artifact_path("cooccur", "edges"),
        store.artifact_path("cooccur", "vertices"),
        float(p0),
    )
    stats = load_stats_json(store.artifact_path("cooccur", "stats"))
    seeds = load_seeds_file(seeds_path)
    result = run_until_stable(
        graph, seeds, stats, float(r), BatchDecisions.from_csv(decisions_csv)
    )
    print(json.dumps({
        "stable": result.stable,
        "assignment": result.assignment.as_label_map(),
    }, sort_keys=True))


if __name__ == "__main__":
    main()
