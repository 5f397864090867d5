#pragma once

#include <map>
#include <optional>
#include <vector>

#include "qmv/core.hpp"

namespace qmv {

struct Edge {
    int label;  // task index, distinct within a graph
    int tail;
    int head;
};

/// Directed multigraph on the alphabet, one labeled edge per task.
/// Edges are kept in ascending label order; loops are allowed.
struct ReportGraph {
    int vertex_count = 0;
    std::vector<Edge> edges;
};

/// Edge k runs from the profile's k-th signal to the message's k-th signal,
/// with labels 1..K. Throws LengthMismatch.
ReportGraph build_report_graph(const Alphabet& alphabet, const Profile& profile,
                               const Message& message);

/// Validating constructor for graphs given as raw edge lists (labels must be
/// distinct, endpoints in range). Sorts edges by label.
ReportGraph make_report_graph(int vertex_count, std::vector<Edge> edges);

/// True iff the loop-free simple digraph obtained by dropping loops and
/// collapsing parallel edges contains a directed cycle.
bool has_nonloop_cycle(const ReportGraph& graph);

/// Closed directed walk over distinct-label edges with pairwise-distinct
/// tail vertices; a single loop edge is a length-1 cycle.
struct Cycle {
    std::vector<int> labels;
};

/// A simple directed cycle of length >= 2 if one exists, found by a
/// depth-first walk that prefers the lowest-label edge closing onto the
/// current path, else descends along the lowest-label unexplored edge.
/// The result is rotated to start at its lowest label.
std::optional<Cycle> find_simple_cycle(const ReportGraph& graph);

/// Peels edge-disjoint cycles off a balanced multigraph: walk from the
/// lowest-index vertex with unused edges, always taking the lowest unused
/// label, and cut the cycle as soon as the path revisits a vertex.
/// The returned labels partition the edge set. Throws NotBalanced.
std::vector<Cycle> decompose_cycles(const ReportGraph& graph);

/// Label set T whose edges form a balanced sub-multigraph, with a bijection
/// pi on T satisfying head(k) = tail(pi(k)) for all k in T.
struct BalancedMatch {
    std::vector<int> t_set;    // ascending
    std::map<int, int> pi;
};

/// Maximum-cardinality balanced label subset, computed as a unit-capacity
/// maximum circulation (augmentation may cancel earlier picks, so greedy
/// cycle grabbing is not enough). pi pairs, within each symbol class, the
/// T-edges entering the class with the T-edges leaving it in label order.
BalancedMatch max_balanced_subset(const ReportGraph& graph);

/// Exhaustive reference for max_balanced_subset; throws TooLarge above
/// 16 edges. Intended for tests.
BalancedMatch brute_force_balanced_subset(const ReportGraph& graph);

}  // namespace qmv
