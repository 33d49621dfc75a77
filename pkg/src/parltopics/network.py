"""Per-term speaker-topic networks and their analysis.

Builds the bipartite speaker-topic graph for one parliamentary term, projects
it onto a weighted speaker network (edge weight = number of shared topics),
and provides degree distributions, party assortativity with a
degree-preserving rewiring null model, greedy modularity communities, and
GraphML export.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .aggregate import SpeakerYearRow
from .corpus import _majority
from .errors import DegenerateMixingError

DEFAULT_LINK_THRESHOLD = 0.067  # twice the uniform share across 30 topics
DEFAULT_MIN_WORDS_PER_TERM = 10_000
DEFAULT_NULL_RUNS = 1000
THRESHOLD_SCOPES = ("year", "term")

# Louvain stops when no move improves modularity by more than this.
GAIN_EPS = 1e-9


@dataclass(frozen=True)
class SpeakerNode:
    speaker_id: str
    party: str
    words: int


@dataclass
class BipartiteGraph:
    """Speakers and topics of one term, with links only between the two sets."""

    term: int
    speakers: list[SpeakerNode]
    topics: list[int]
    edges: set[tuple[str, int]]  # (speaker_id, topic_id)

    @property
    def speaker_ids(self) -> list[str]:
        return [node.speaker_id for node in self.speakers]

    def topic_neighbors(self) -> dict[str, set[int]]:
        """Topic set per speaker, including degree-0 speakers."""
        neighbors: dict[str, set[int]] = {node.speaker_id: set() for node in self.speakers}
        for speaker_id, topic in self.edges:
            neighbors[speaker_id].add(topic)
        return neighbors


@dataclass
class WeightedProjection:
    """Speaker network; edge weight counts the topics both endpoints share.

    Edge keys are ordered pairs with the lexicographically smaller speaker id
    first; isolated speakers stay in ``nodes``.
    """

    term: int
    nodes: list[SpeakerNode]
    edges: dict[tuple[str, str], int]

    @property
    def node_ids(self) -> list[str]:
        return [node.speaker_id for node in self.nodes]

    def degrees(self) -> dict[str, int]:
        """Unweighted degree per node, isolated nodes included with 0."""
        degree = {node.speaker_id: 0 for node in self.nodes}
        for u, v in self.edges:
            degree[u] += 1
            degree[v] += 1
        return degree

    def parties(self) -> dict[str, str]:
        return {node.speaker_id: node.party for node in self.nodes}


@dataclass
class Partition:
    """Node -> community assignment plus the modularity it achieves."""

    communities: dict[str, int]
    modularity: float


@dataclass
class HomophilyReport:
    """Observed assortativity against the rewiring null distribution."""

    empirical_r: float
    null_mean: float
    null_std: float
    runs: int
    degenerate: bool = False


@dataclass
class CommunitySummary:
    rank: int
    community_id: int
    size: int
    party_counts: dict[str, int] = field(default_factory=dict)


def build_bipartite(
    rows: Sequence[SpeakerYearRow],
    topic_ids: Sequence[int],
    threshold: float = DEFAULT_LINK_THRESHOLD,
    min_words: int = DEFAULT_MIN_WORDS_PER_TERM,
    scope: str = "year",
) -> BipartiteGraph:
    """Speaker-topic graph for the single term covered by ``rows``.

    Speakers whose summed words across the term fall below ``min_words`` are
    dropped from the node set entirely. With ``scope="year"`` a speaker links
    to a topic iff the topic's share reaches ``threshold`` in at least one of
    their years; with ``scope="term"`` the per-year shares are first combined
    into one word-weighted vector and the threshold applied to that. Speakers
    whose shares never reach the threshold stay as degree-0 nodes.
    """
    if not rows:
        raise ValueError("empty speaker-year table")
    if not 0 < threshold < 1:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    if scope not in THRESHOLD_SCOPES:
        raise ValueError(f"scope must be one of {THRESHOLD_SCOPES}, got {scope!r}")
    terms = {row.term for row in rows}
    if len(terms) != 1:
        raise ValueError(f"rows span terms {sorted(terms)}; expected exactly one")
    (term,) = terms
    if any(len(row.proportions) != len(topic_ids) for row in rows):
        raise ValueError("proportion vector length disagrees with topic_ids")

    by_speaker: dict[str, list[SpeakerYearRow]] = {}
    for row in rows:
        by_speaker.setdefault(row.speaker_id, []).append(row)

    speakers: list[SpeakerNode] = []
    edges: set[tuple[str, int]] = set()
    for speaker_id in sorted(by_speaker):
        member_rows = by_speaker[speaker_id]
        total_words = sum(row.words_spoken for row in member_rows)
        if total_words < min_words:
            continue
        party = _majority(row.party for row in member_rows)
        speakers.append(SpeakerNode(speaker_id, party, total_words))
        if scope == "year":
            for k, topic in enumerate(topic_ids):
                if any(row.proportions[k] >= threshold for row in member_rows):
                    edges.add((speaker_id, int(topic)))
        else:
            weights = np.array([row.words_spoken for row in member_rows], dtype=float)
            if weights.sum() == 0:
                weights = np.ones(len(member_rows))
            combined = weights @ np.vstack([row.proportions for row in member_rows])
            combined /= combined.sum()
            for k, topic in enumerate(topic_ids):
                if combined[k] >= threshold:
                    edges.add((speaker_id, int(topic)))

    if not speakers:
        raise ValueError(
            f"no speakers with at least {min_words} words in term {term}"
        )
    return BipartiteGraph(term, speakers, [int(t) for t in topic_ids], edges)


def project(graph: BipartiteGraph) -> WeightedProjection:
    """Project onto speakers: edge weight = shared-topic count, no self-edges."""
    neighbors = graph.topic_neighbors()
    ids = sorted(neighbors)
    edges: dict[tuple[str, str], int] = {}
    for i, u in enumerate(ids):
        for v in ids[i + 1:]:
            shared = len(neighbors[u] & neighbors[v])
            if shared:
                edges[(u, v)] = shared
    return WeightedProjection(graph.term, list(graph.speakers), edges)


def degree_distributions(
    graph: BipartiteGraph, projection: WeightedProjection
) -> tuple[Counter, Counter, Counter]:
    """Three exact-integer degree histograms.

    Returns counters over (a) speakers linked per topic, (b) topics linked
    per speaker in the bipartite graph, and (c) neighbors per speaker in the
    projection. Zero-degree nodes contribute to the 0 bin.
    """
    topic_degree = Counter(topic for _, topic in graph.edges)
    speaker_degree = Counter(speaker for speaker, _ in graph.edges)
    hist_topics = Counter(topic_degree.get(t, 0) for t in graph.topics)
    hist_speakers = Counter(speaker_degree.get(s, 0) for s in graph.speaker_ids)
    hist_projection = Counter(projection.degrees().values())
    return hist_topics, hist_speakers, hist_projection


def average_degree_by_party(projection: WeightedProjection) -> dict[str, float]:
    """Mean unweighted projected degree per party, isolated nodes included."""
    degree = projection.degrees()
    per_party: dict[str, list[int]] = {}
    for node in projection.nodes:
        per_party.setdefault(node.party, []).append(degree[node.speaker_id])
    return {
        party: sum(values) / len(values)
        for party, values in sorted(per_party.items())
    }


def _assortativity_from_edges(
    edges: Iterable[tuple[str, str]], attribute: Mapping[str, str]
) -> float:
    """Newman's discrete assortativity coefficient over an unweighted edge set:

        r = (sum_i e_ii - sum_i a_i * b_i) / (1 - sum_i a_i * b_i)

    where e is the edge-end mixing matrix and a, b its marginals.
    """
    edges = list(edges)
    if not edges:
        raise ValueError("assortativity needs at least one edge")
    classes = sorted({attribute[u] for u, v in edges} | {attribute[v] for u, v in edges})
    index = {cls: i for i, cls in enumerate(classes)}
    mixing = np.zeros((len(classes), len(classes)))
    for u, v in edges:
        i, j = index[attribute[u]], index[attribute[v]]
        mixing[i, j] += 1.0
        mixing[j, i] += 1.0
    mixing /= mixing.sum()
    marginals = mixing.sum(axis=1)
    agreement_by_chance = float(marginals @ marginals)
    if abs(1.0 - agreement_by_chance) < 1e-12:
        raise DegenerateMixingError(
            "every edge endpoint carries the same attribute value; "
            "the assortativity denominator is zero"
        )
    return float((np.trace(mixing) - agreement_by_chance) / (1.0 - agreement_by_chance))


def attribute_assortativity(projection: WeightedProjection) -> float:
    """Party assortativity of the projection's unweighted edge set."""
    return _assortativity_from_edges(projection.edges, projection.parties())


def double_edge_swap(
    edges: Sequence[tuple[str, str]],
    rng: np.random.Generator,
    target_factor: int = 10,
    max_attempt_factor: int = 20,
) -> list[tuple[str, str]]:
    """Rewire a simple undirected edge list, preserving every node's degree.

    Repeatedly picks two distinct edges (u, v) and (x, y), randomly orients
    the second, and replaces them with (u, x) and (v, y) unless that would
    create a self-loop or a duplicate edge. Stops after ``target_factor *
    len(edges)`` accepted swaps, or after ``max_attempt_factor`` times that
    many attempts for graphs that are rigid or nearly so.
    """
    edges = [tuple(edge) for edge in edges]
    edge_set = set(edges)
    m = len(edges)
    if m < 2:
        return edges
    target = target_factor * m
    max_attempts = max(max_attempt_factor * target, 100)
    accepted = attempts = 0
    while accepted < target and attempts < max_attempts:
        attempts += 1
        i = int(rng.integers(m))
        j = int(rng.integers(m))
        if i == j:
            continue
        u, v = edges[i]
        x, y = edges[j]
        if rng.random() < 0.5:
            x, y = y, x
        if u == x or v == y:
            continue
        new_a = (u, x) if u < x else (x, u)
        new_b = (v, y) if v < y else (y, v)
        if new_a == new_b or new_a in edge_set or new_b in edge_set:
            continue
        edge_set.remove(edges[i])
        edge_set.remove(edges[j])
        edge_set.add(new_a)
        edge_set.add(new_b)
        edges[i] = new_a
        edges[j] = new_b
        accepted += 1
    return edges


def configuration_null(
    projection: WeightedProjection,
    runs: int = DEFAULT_NULL_RUNS,
    seed: int = 0,
) -> HomophilyReport:
    """Assortativity of the observed edges against degree-preserving rewirings.

    Each run rewires the unweighted edge set with :func:`double_edge_swap`
    (independent per-run seeds spawned from ``seed``) and records the party
    assortativity of the result. Graphs with fewer than two edges cannot be
    rewired; the report then equals the empirical value with zero spread and
    is flagged ``degenerate``.
    """
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    empirical = attribute_assortativity(projection)
    edges = sorted(projection.edges)
    if len(edges) < 2:
        return HomophilyReport(empirical, empirical, 0.0, runs, degenerate=True)
    attribute = projection.parties()
    child_seeds = np.random.SeedSequence(seed).spawn(runs)
    samples = np.empty(runs)
    for run in range(runs):
        rng = np.random.default_rng(child_seeds[run])
        rewired = double_edge_swap(edges, rng)
        samples[run] = _assortativity_from_edges(rewired, attribute)
    return HomophilyReport(
        empirical_r=empirical,
        null_mean=float(samples.mean()),
        null_std=float(samples.std()),
        runs=runs,
    )


def modularity(projection: WeightedProjection, communities: Mapping[str, int]) -> float:
    """Weighted modularity of a node -> community assignment:

        Q = (1 / 2m) * sum_ij [A_ij - k_i * k_j / 2m] * delta(c_i, c_j)

    with edge weights as A. An edgeless projection has Q = 0 by convention.
    """
    if not projection.edges:
        return 0.0
    strength: dict[str, float] = {node.speaker_id: 0.0 for node in projection.nodes}
    for (u, v), weight in projection.edges.items():
        strength[u] += weight
        strength[v] += weight
    two_m = sum(strength.values())
    internal: Counter = Counter()
    for (u, v), weight in projection.edges.items():
        if communities[u] == communities[v]:
            internal[communities[u]] += 2.0 * weight
    totals: Counter = Counter()
    for node_id, k in strength.items():
        totals[communities[node_id]] += k
    return float(
        sum(
            internal.get(c, 0.0) / two_m - (totals[c] / two_m) ** 2
            for c in totals
        )
    )


def _one_level(adjacency: list[dict[int, float]], self_weight: list[float]) -> tuple[bool, list[int]]:
    """Local-move phase on one aggregation level.

    Nodes are visited in ascending index order; a node moves to the first
    (lowest-id) community achieving the maximal gain, and only if that gain
    beats staying by more than GAIN_EPS in modularity units.
    """
    n = len(adjacency)
    strength = [
        2.0 * self_weight[i] + sum(adjacency[i].values()) for i in range(n)
    ]
    two_m = sum(strength)
    gain_eps = GAIN_EPS * (two_m / 2.0)
    community = list(range(n))
    totals = strength[:]
    moved_any = False
    while True:
        moved = False
        for x in range(n):
            home = community[x]
            weight_to: dict[int, float] = {}
            for y, weight in adjacency[x].items():
                if y != x:
                    c = community[y]
                    weight_to[c] = weight_to.get(c, 0.0) + weight
            totals[home] -= strength[x]
            candidates = sorted(weight_to.keys() | {home})
            best_community = home
            best_gain = None
            for c in candidates:
                gain = weight_to.get(c, 0.0) - totals[c] * strength[x] / two_m
                if best_gain is None or gain > best_gain:
                    best_gain = gain
                    best_community = c
            home_gain = weight_to.get(home, 0.0) - totals[home] * strength[x] / two_m
            if best_community != home and best_gain - home_gain > gain_eps:
                community[x] = best_community
                totals[best_community] += strength[x]
                moved = moved_any = True
            else:
                community[x] = home
                totals[home] += strength[x]
        if not moved:
            break
    return moved_any, community


def _aggregate(
    adjacency: list[dict[int, float]],
    self_weight: list[float],
    community: list[int],
) -> tuple[list[dict[int, float]], list[float], dict[int, int]]:
    """Collapse communities into supernodes; intra-community weight becomes self-loops.

    Community labels are renumbered densely in ascending order of their
    smallest member index, keeping the node order stable across levels.
    """
    labels: dict[int, int] = {}
    for node in range(len(adjacency)):
        labels.setdefault(community[node], len(labels))
    size = len(labels)
    new_adjacency: list[dict[int, float]] = [dict() for _ in range(size)]
    new_self = [0.0] * size
    for x in range(len(adjacency)):
        cx = labels[community[x]]
        new_self[cx] += self_weight[x]
        for y, weight in adjacency[x].items():
            if y < x:
                continue  # each undirected edge once
            if y == x:
                continue  # already carried via self_weight
            cy = labels[community[y]]
            if cx == cy:
                new_self[cx] += weight
            else:
                new_adjacency[cx][cy] = new_adjacency[cx].get(cy, 0.0) + weight
                new_adjacency[cy][cx] = new_adjacency[cy].get(cx, 0.0) + weight
    return new_adjacency, new_self, labels


def louvain(projection: WeightedProjection) -> Partition:
    """Greedy modularity communities on the weighted projection.

    Alternating local-move and aggregation phases; deterministic because
    nodes are visited in ascending id order and ties go to the lowest
    community id. The returned partition's modularity is evaluated directly
    with :func:`modularity`. An edgeless projection yields singleton
    communities with Q = 0.
    """
    node_ids = sorted(projection.node_ids)
    if not projection.edges:
        return Partition({u: i for i, u in enumerate(node_ids)}, 0.0)

    index = {u: i for i, u in enumerate(node_ids)}
    adjacency: list[dict[int, float]] = [dict() for _ in node_ids]
    for (u, v), weight in sorted(projection.edges.items()):
        adjacency[index[u]][index[v]] = float(weight)
        adjacency[index[v]][index[u]] = float(weight)
    self_weight = [0.0] * len(node_ids)

    flat = list(range(len(node_ids)))  # original node -> current supernode
    while True:
        moved, community = _one_level(adjacency, self_weight)
        if not moved:
            break
        adjacency, self_weight, labels = _aggregate(adjacency, self_weight, community)
        flat = [labels[community[s]] for s in flat]
        if len(adjacency) == 1:
            break

    assignment = {u: flat[index[u]] for u in node_ids}
    return Partition(assignment, modularity(projection, assignment))


def community_composition(
    partition: Partition,
    projection: WeightedProjection,
    top_n: int = 3,
) -> list[CommunitySummary]:
    """The ``top_n`` largest communities with per-party member counts.

    Communities are ranked by size descending, ties by their smallest member
    node id; fewer than ``top_n`` communities are all returned.
    """
    members: dict[int, list[str]] = {}
    for node_id in sorted(partition.communities):
        members.setdefault(partition.communities[node_id], []).append(node_id)
    party = projection.parties()
    ordered = sorted(members.items(), key=lambda item: (-len(item[1]), min(item[1])))
    summaries = []
    for rank, (community_id, node_ids) in enumerate(ordered[:top_n], start=1):
        counts: dict[str, int] = {}
        for node_id in node_ids:
            counts[party[node_id]] = counts.get(party[node_id], 0) + 1
        summaries.append(
            CommunitySummary(
                rank=rank,
                community_id=community_id,
                size=len(node_ids),
                party_counts=dict(sorted(counts.items())),
            )
        )
    return summaries


def bipartite_to_networkx(graph: BipartiteGraph, codes: Mapping[str, str] | None = None):
    """Bipartite graph as a ``networkx.Graph`` for GraphML export.

    Speaker labels come from ``codes`` (speaker id -> short code) when given,
    otherwise the speaker id itself; topic nodes are named ``topic_<id>``.
    """
    import networkx as nx

    codes = codes or {}
    g = nx.Graph()
    for node in sorted(graph.speakers, key=lambda n: n.speaker_id):
        g.add_node(
            node.speaker_id,
            label=codes.get(node.speaker_id, node.speaker_id),
            kind="speaker",
            party=node.party,
            words=node.words,
        )
    for topic in sorted(graph.topics):
        g.add_node(f"topic_{topic}", label=f"topic_{topic}", kind="topic")
    for speaker_id, topic in sorted(graph.edges):
        g.add_edge(speaker_id, f"topic_{topic}")
    return g


def projection_to_networkx(
    projection: WeightedProjection,
    partition: Partition | None = None,
    codes: Mapping[str, str] | None = None,
):
    """Weighted projection as a ``networkx.Graph`` for GraphML export."""
    import networkx as nx

    codes = codes or {}
    communities = partition.communities if partition else {}
    g = nx.Graph()
    for node in sorted(projection.nodes, key=lambda n: n.speaker_id):
        g.add_node(
            node.speaker_id,
            label=codes.get(node.speaker_id, node.speaker_id),
            party=node.party,
            words=node.words,
            community=int(communities.get(node.speaker_id, -1)),
        )
    for (u, v), weight in sorted(projection.edges.items()):
        g.add_edge(u, v, weight=int(weight))
    return g


def write_graphml(graph, path) -> None:
    """Write a ``networkx`` graph as GraphML with stable key order."""
    import networkx as nx

    nx.write_graphml(graph, path, encoding="utf-8", prettyprint=True)
