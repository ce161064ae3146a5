"""Daily directed influence graphs and their component decomposition.

Edge direction encodes influence: when user i retweets, replies to, mentions
or quotes user j, the edge runs j -> i (attention target to acting user).
Each day's graph decomposes into the strongly connected giant component
(SCGC), the weakly connected giant component (WCGC) and the corona of
remaining interacting users.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from datetime import date

from .records import CorpusWindow

# Giant components need at least two nodes: a lone vertex is trivially
# strongly connected but is not part of any interaction loop.
GIANT_MIN_SIZE = 2


@dataclass(frozen=True)
class DailyGraph:
    day: date
    nodes: frozenset[str]
    # adjacency with multiplicity collapsed; edges[u] = successors of u
    edges: dict[str, frozenset[str]]

    @property
    def edge_count(self) -> int:
        return sum(len(s) for s in self.edges.values())

    def edge_set(self) -> set[tuple[str, str]]:
        return {(u, v) for u, succ in self.edges.items() for v in succ}


@dataclass(frozen=True)
class ComponentDecomposition:
    scgc: frozenset[str]
    wcgc: frozenset[str]
    corona: frozenset[str]


@dataclass
class ComponentSeries:
    days: list[date] = field(default_factory=list)
    scgc_size: list[int] = field(default_factory=list)
    wcgc_size: list[int] = field(default_factory=list)
    corona_size: list[int] = field(default_factory=list)
    scgc_new: list[int] = field(default_factory=list)
    wcgc_new: list[int] = field(default_factory=list)
    corona_new: list[int] = field(default_factory=list)

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["day", "scgc_size", "wcgc_size", "corona_size",
                        "scgc_new", "wcgc_new", "corona_new"])
            for i, d in enumerate(self.days):
                w.writerow([d.isoformat(), self.scgc_size[i], self.wcgc_size[i],
                            self.corona_size[i], self.scgc_new[i], self.wcgc_new[i],
                            self.corona_new[i]])


def build_daily_graph(
    corpus: CorpusWindow, day: date, excluded_accounts: frozenset[str] = frozenset()
) -> DailyGraph:
    """Build the influence graph for one day.

    Excluded accounts (the tracked candidates' own handles) never appear as
    nodes. A user whose only interactions targeted excluded accounts stays in
    the graph as an isolated node so the decomposition can place it in the
    corona. Users who did not interact at all are not part of the graph.
    """
    succ: dict[str, set[str]] = {}
    nodes: set[str] = set()
    for rec in corpus.days.get(day, []):
        if rec.user_id in excluded_accounts:
            continue
        targets = rec.interaction_targets()
        if not targets:
            continue
        interacted = False
        for target in targets:
            interacted = True
            if target in excluded_accounts or target == rec.user_id:
                continue
            nodes.add(target)
            nodes.add(rec.user_id)
            succ.setdefault(target, set()).add(rec.user_id)
        if interacted:
            # only-candidate interactions leave the author isolated in-graph
            nodes.add(rec.user_id)
    edges = {u: frozenset(vs) for u, vs in succ.items()}
    return DailyGraph(day=day, nodes=frozenset(nodes), edges=edges)


def strongly_connected_components(nodes, successors) -> list[set[str]]:
    """Tarjan's single-pass SCC algorithm, iterative, O(V+E).

    ``successors`` maps node -> iterable of successor nodes.
    """
    index_of: dict[str, int] = {}
    lowlink: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    sccs: list[set[str]] = []
    counter = 0

    for root in nodes:
        if root in index_of:
            continue
        # work stack holds (node, iterator over successors)
        work = [(root, iter(successors.get(root, ())))]
        index_of[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index_of:
                    index_of[w] = lowlink[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    if index_of[w] < lowlink[v]:
                        lowlink[v] = index_of[w]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if lowlink[v] < lowlink[parent]:
                    lowlink[parent] = lowlink[v]
            if lowlink[v] == index_of[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                sccs.append(comp)
    return sccs


def weakly_connected_components(nodes, successors) -> list[set[str]]:
    """Connected components of the symmetrized graph (union-find)."""
    parent: dict[str, str] = {n: n for n in nodes}

    def find(x: str) -> str:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for u, vs in successors.items():
        ru = find(u)
        for v in vs:
            rv = find(v)
            if ru != rv:
                parent[rv] = ru
    comps: dict[str, set[str]] = {}
    for n in nodes:
        comps.setdefault(find(n), set()).add(n)
    return list(comps.values())


def _largest_component(comps: list[set[str]]) -> set[str]:
    """Largest component of size >= GIANT_MIN_SIZE; ties broken by the
    lexicographically smallest member id. Empty set when none qualifies."""
    best: set[str] = set()
    best_key = None
    for comp in comps:
        if len(comp) < GIANT_MIN_SIZE:
            continue
        key = (-len(comp), min(comp))
        if best_key is None or key < best_key:
            best, best_key = comp, key
    return best


def decompose_components(g: DailyGraph) -> ComponentDecomposition:
    """Partition graph nodes into SCGC, WCGC \\ SCGC, and corona.

    The WCGC is the largest weakly connected component. The SCGC is the
    largest strongly connected component inside the WCGC, which keeps the
    SCGC-inside-WCGC invariant on every input. Nodes outside the WCGC form
    the corona.
    """
    nodes = sorted(g.nodes)
    succ = {u: sorted(vs) for u, vs in g.edges.items()}
    wcgc = _largest_component(weakly_connected_components(nodes, succ))
    if wcgc:
        sub_nodes = sorted(wcgc)
        sub_succ = {u: [v for v in succ.get(u, ()) if v in wcgc] for u in sub_nodes}
        scgc = _largest_component(strongly_connected_components(sub_nodes, sub_succ))
    else:
        scgc = set()
    corona = set(g.nodes) - wcgc
    return ComponentDecomposition(
        scgc=frozenset(scgc), wcgc=frozenset(wcgc), corona=frozenset(corona)
    )


def daily_decompositions(
    corpus: CorpusWindow, excluded_accounts: frozenset[str] = frozenset()
) -> dict[date, ComponentDecomposition]:
    return {
        day: decompose_components(build_daily_graph(corpus, day, excluded_accounts))
        for day in corpus.day_list
    }


def component_size_series(
    corpus: CorpusWindow, excluded_accounts: frozenset[str] = frozenset()
) -> ComponentSeries:
    """Per-day compartment sizes plus first-appearance user counts.

    A user is new on the first day they appear in any daily graph; the
    arrival is attributed to the compartment holding the user that day.
    """
    series = ComponentSeries()
    seen: set[str] = set()
    for day in corpus.day_list:
        g = build_daily_graph(corpus, day, excluded_accounts)
        dec = decompose_components(g)
        parts = {
            "scgc": dec.scgc,
            "wcgc": dec.wcgc - dec.scgc,
            "corona": dec.corona,
        }
        new_counts = {}
        for name, members in parts.items():
            new_counts[name] = sum(1 for u in members if u not in seen)
        seen.update(g.nodes)
        series.days.append(day)
        series.scgc_size.append(len(dec.scgc))
        series.wcgc_size.append(len(dec.wcgc))
        series.corona_size.append(len(dec.corona))
        series.scgc_new.append(new_counts["scgc"])
        series.wcgc_new.append(new_counts["wcgc"] + new_counts["scgc"])
        series.corona_new.append(new_counts["corona"])
    return series
