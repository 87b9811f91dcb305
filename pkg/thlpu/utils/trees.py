
"""Small-tree utilities: Prüfer enumeration, paths between hubs, tree checks"""

import itertools

import networkx as nx


def canonical_edge(k, m):
    return (k, m) if k < m else (m, k)


def prufer_trees(labels):
    """
    Yield every labelled spanning tree on `labels` as a sorted tuple of canonical edges.
    There are len(labels) ** (len(labels) - 2) of them (Cayley), one per Prüfer sequence.
    """
    labels = sorted(labels)
    size = len(labels)
    if size == 1:
        yield ()
        return
    if size == 2:
        yield (tuple(labels),)
        return
    for sequence in itertools.product(range(size), repeat=size - 2):
        tree = nx.from_prufer_sequence(list(sequence))
        yield tuple(sorted(canonical_edge(labels[u], labels[v]) for u, v in tree.edges()))


def is_spanning_tree(nodes, edges):
    graph = nx.Graph()
    graph.add_nodes_from(nodes)
    graph.add_edges_from(edges)
    if graph.number_of_nodes() != len(set(nodes)):
        return False  # an edge touches a node outside the set
    return nx.is_tree(graph)


def tree_paths(nodes, edges):
    """Canonical edges of the unique path between every ordered pair of tree nodes"""
    graph = nx.Graph()
    graph.add_nodes_from(nodes)
    graph.add_edges_from(edges)
    paths = {}
    for source, targets in nx.all_pairs_shortest_path(graph):
        for target, path in targets.items():
            paths[source, target] = [canonical_edge(a, b) for a, b in zip(path[:-1], path[1:])]
    return paths


def oriented_tree(nodes, edges, root):
    """Arcs of the tree oriented away from `root` with the node set beyond each arc"""
    graph = nx.Graph()
    graph.add_nodes_from(nodes)
    graph.add_edges_from(edges)
    tree = nx.bfs_tree(graph, root)
    return [((k, m), {m} | nx.descendants(tree, m)) for k, m in tree.edges()]
