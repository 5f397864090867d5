#include "qmv/graph.hpp"

#include <algorithm>
#include <unordered_set>

namespace qmv {

namespace {

void rotate_to_lowest_label(std::vector<int>& labels) {
    auto lowest = std::min_element(labels.begin(), labels.end());
    std::rotate(labels.begin(), lowest, labels.end());
}

// Edge indices with the given tail, ascending label (edges are label-sorted).
std::vector<std::vector<int>> out_lists(const ReportGraph& graph, bool include_loops) {
    std::vector<std::vector<int>> out(static_cast<size_t>(graph.vertex_count));
    for (size_t i = 0; i < graph.edges.size(); ++i) {
        const Edge& e = graph.edges[i];
        if (include_loops || e.tail != e.head)
            out[static_cast<size_t>(e.tail)].push_back(static_cast<int>(i));
    }
    return out;
}

BalancedMatch assemble_match(const ReportGraph& graph, const std::vector<char>& selected) {
    BalancedMatch match;
    std::vector<std::vector<int>> entering(static_cast<size_t>(graph.vertex_count));
    std::vector<std::vector<int>> leaving(static_cast<size_t>(graph.vertex_count));
    for (size_t i = 0; i < graph.edges.size(); ++i) {
        if (!selected[i])
            continue;
        const Edge& e = graph.edges[i];
        match.t_set.push_back(e.label);
        entering[static_cast<size_t>(e.head)].push_back(e.label);
        leaving[static_cast<size_t>(e.tail)].push_back(e.label);
    }
    std::sort(match.t_set.begin(), match.t_set.end());
    for (int w = 0; w < graph.vertex_count; ++w) {
        auto& in_labels = entering[static_cast<size_t>(w)];
        auto& out_labels = leaving[static_cast<size_t>(w)];
        if (in_labels.size() != out_labels.size())
            throw Error("internal: selected edge set is not balanced");
        std::sort(in_labels.begin(), in_labels.end());
        std::sort(out_labels.begin(), out_labels.end());
        for (size_t i = 0; i < in_labels.size(); ++i)
            match.pi[in_labels[i]] = out_labels[i];
    }
    return match;
}

}  // namespace

ReportGraph build_report_graph(const Alphabet& alphabet, const Profile& profile,
                               const Message& message) {
    if (profile.entries.size() != message.entries.size())
        throw LengthMismatch("profile has " + std::to_string(profile.entries.size()) +
                             " entries, message has " + std::to_string(message.entries.size()));
    ReportGraph graph;
    graph.vertex_count = alphabet.size();
    graph.edges.reserve(profile.entries.size());
    for (size_t k = 0; k < profile.entries.size(); ++k)
        graph.edges.push_back(Edge{static_cast<int>(k) + 1, profile.entries[k], message.entries[k]});
    return graph;
}

ReportGraph make_report_graph(int vertex_count, std::vector<Edge> edges) {
    if (vertex_count < 1)
        throw Error("graph needs at least one vertex");
    std::unordered_set<int> labels;
    for (const Edge& e : edges) {
        if (e.tail < 0 || e.tail >= vertex_count || e.head < 0 || e.head >= vertex_count)
            throw Error("edge " + std::to_string(e.label) + " has an endpoint out of range");
        if (!labels.insert(e.label).second)
            throw Error("duplicate edge label " + std::to_string(e.label));
    }
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return a.label < b.label; });
    return ReportGraph{vertex_count, std::move(edges)};
}

bool has_nonloop_cycle(const ReportGraph& graph) {
    const int n = graph.vertex_count;
    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    for (const Edge& e : graph.edges)
        if (e.tail != e.head)
            adj[static_cast<size_t>(e.tail)].push_back(e.head);
    for (auto& heads : adj) {
        std::sort(heads.begin(), heads.end());
        heads.erase(std::unique(heads.begin(), heads.end()), heads.end());
    }
    std::vector<int> indegree(static_cast<size_t>(n), 0);
    for (const auto& heads : adj)
        for (int h : heads)
            ++indegree[static_cast<size_t>(h)];
    // Kahn: peel zero-indegree vertices; leftovers mean a cycle.
    std::vector<int> queue;
    for (int v = 0; v < n; ++v)
        if (indegree[static_cast<size_t>(v)] == 0)
            queue.push_back(v);
    int removed = 0;
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        ++removed;
        for (int h : adj[static_cast<size_t>(v)])
            if (--indegree[static_cast<size_t>(h)] == 0)
                queue.push_back(h);
    }
    return removed != n;
}

std::optional<Cycle> find_simple_cycle(const ReportGraph& graph) {
    const int n = graph.vertex_count;
    const auto out = out_lists(graph, /*include_loops=*/false);

    enum : signed char { kWhite, kGray, kBlack };
    std::vector<signed char> color(static_cast<size_t>(n), kWhite);
    std::vector<int> path_pos(static_cast<size_t>(n), -1);

    struct Frame {
        int vertex;
        size_t next;
    };

    for (int root = 0; root < n; ++root) {
        if (color[static_cast<size_t>(root)] != kWhite)
            continue;
        std::vector<Frame> stack;
        std::vector<int> path_edges;  // path_edges[i] enters stack[i+1].vertex
        color[static_cast<size_t>(root)] = kGray;
        path_pos[static_cast<size_t>(root)] = 0;
        stack.push_back(Frame{root, 0});
        while (!stack.empty()) {
            int v = stack.back().vertex;
            if (stack.back().next == 0) {
                // On entry, close onto the path if any out-edge can; the
                // out list is label-sorted so the first hit is the lowest.
                for (int ei : out[static_cast<size_t>(v)]) {
                    int h = graph.edges[static_cast<size_t>(ei)].head;
                    if (color[static_cast<size_t>(h)] != kGray)
                        continue;
                    std::vector<int> labels;
                    for (size_t i = static_cast<size_t>(path_pos[static_cast<size_t>(h)]);
                         i < path_edges.size(); ++i)
                        labels.push_back(graph.edges[static_cast<size_t>(path_edges[i])].label);
                    labels.push_back(graph.edges[static_cast<size_t>(ei)].label);
                    rotate_to_lowest_label(labels);
                    return Cycle{labels};
                }
            }
            bool descended = false;
            while (stack.back().next < out[static_cast<size_t>(v)].size()) {
                int ei = out[static_cast<size_t>(v)][stack.back().next++];
                int h = graph.edges[static_cast<size_t>(ei)].head;
                if (color[static_cast<size_t>(h)] != kWhite)
                    continue;
                color[static_cast<size_t>(h)] = kGray;
                path_pos[static_cast<size_t>(h)] = static_cast<int>(stack.size());
                path_edges.push_back(ei);
                stack.push_back(Frame{h, 0});
                descended = true;
                break;
            }
            if (descended)
                continue;
            color[static_cast<size_t>(v)] = kBlack;
            path_pos[static_cast<size_t>(v)] = -1;
            stack.pop_back();
            if (!path_edges.empty())
                path_edges.pop_back();
        }
    }
    return std::nullopt;
}

std::vector<Cycle> decompose_cycles(const ReportGraph& graph) {
    const int n = graph.vertex_count;
    std::vector<int> indeg(static_cast<size_t>(n), 0), outdeg(static_cast<size_t>(n), 0);
    for (const Edge& e : graph.edges) {
        ++outdeg[static_cast<size_t>(e.tail)];
        ++indeg[static_cast<size_t>(e.head)];
    }
    for (int v = 0; v < n; ++v)
        if (indeg[static_cast<size_t>(v)] != outdeg[static_cast<size_t>(v)])
            throw NotBalanced("vertex " + std::to_string(v) + " has in-degree " +
                              std::to_string(indeg[static_cast<size_t>(v)]) + " but out-degree " +
                              std::to_string(outdeg[static_cast<size_t>(v)]));

    const auto out = out_lists(graph, /*include_loops=*/true);
    std::vector<char> used(graph.edges.size(), 0);
    std::vector<int> path_pos(static_cast<size_t>(n), -1);
    size_t remaining = graph.edges.size();
    std::vector<Cycle> cycles;

    auto lowest_unused_out = [&](int v) -> int {
        for (int ei : out[static_cast<size_t>(v)])
            if (!used[static_cast<size_t>(ei)])
                return ei;
        return -1;
    };

    while (remaining > 0) {
        int start = -1;
        for (int v = 0; v < n && start < 0; ++v)
            if (lowest_unused_out(v) >= 0)
                start = v;
        if (start < 0)
            throw Error("internal: unused edges but no start vertex");

        std::vector<int> path_vertices{start};
        std::vector<int> path_edges;
        path_pos[static_cast<size_t>(start)] = 0;
        int cur = start;
        while (true) {
            int ei = lowest_unused_out(cur);
            if (ei < 0)
                throw Error("internal: walk stuck in a balanced graph");
            int head = graph.edges[static_cast<size_t>(ei)].head;
            if (path_pos[static_cast<size_t>(head)] >= 0) {
                std::vector<int> labels;
                for (size_t i = static_cast<size_t>(path_pos[static_cast<size_t>(head)]);
                     i < path_edges.size(); ++i) {
                    labels.push_back(graph.edges[static_cast<size_t>(path_edges[i])].label);
                    used[static_cast<size_t>(path_edges[i])] = 1;
                }
                labels.push_back(graph.edges[static_cast<size_t>(ei)].label);
                used[static_cast<size_t>(ei)] = 1;
                remaining -= labels.size();
                rotate_to_lowest_label(labels);
                cycles.push_back(Cycle{std::move(labels)});
                for (int v : path_vertices)
                    path_pos[static_cast<size_t>(v)] = -1;
                break;
            }
            path_pos[static_cast<size_t>(head)] = static_cast<int>(path_vertices.size());
            path_vertices.push_back(head);
            path_edges.push_back(ei);
            cur = head;
        }
    }
    return cycles;
}

BalancedMatch max_balanced_subset(const ReportGraph& graph) {
    const int n = graph.vertex_count;
    const size_t m = graph.edges.size();
    std::vector<char> selected(m, 0);

    // Loops are always in a maximum circulation: each is its own cycle and
    // never competes for capacity with anything else.
    std::vector<int> nonloop;
    for (size_t i = 0; i < m; ++i) {
        if (graph.edges[i].tail == graph.edges[i].head)
            selected[i] = 1;
        else
            nonloop.push_back(static_cast<int>(i));
    }

    // Cycle canceling on the non-loop edges: while the residual graph has a
    // negative cycle (cost -1 to pick an edge, +1 to drop one), toggle it.
    struct Arc {
        int from;
        int to;
        int cost;
        int edge_index;
    };
    while (true) {
        std::vector<Arc> arcs;
        arcs.reserve(nonloop.size());
        for (int ei : nonloop) {
            const Edge& e = graph.edges[static_cast<size_t>(ei)];
            if (selected[static_cast<size_t>(ei)])
                arcs.push_back(Arc{e.head, e.tail, +1, ei});
            else
                arcs.push_back(Arc{e.tail, e.head, -1, ei});
        }
        // Bellman-Ford from a virtual source (all distances start at 0).
        std::vector<int> dist(static_cast<size_t>(n), 0);
        std::vector<int> pred(static_cast<size_t>(n), -1);
        bool changed = true;
        for (int round = 0; round < n && changed; ++round) {
            changed = false;
            for (size_t a = 0; a < arcs.size(); ++a) {
                const Arc& arc = arcs[a];
                if (dist[static_cast<size_t>(arc.from)] + arc.cost <
                    dist[static_cast<size_t>(arc.to)]) {
                    dist[static_cast<size_t>(arc.to)] =
                        dist[static_cast<size_t>(arc.from)] + arc.cost;
                    pred[static_cast<size_t>(arc.to)] = static_cast<int>(a);
                    changed = true;
                }
            }
        }
        if (!changed)
            break;  // converged, so no negative cycle remains
        // One more pass: a vertex that still improves lies on a chain whose
        // predecessor links are all set, and n steps back land inside the cycle.
        int start = -1;
        for (size_t a = 0; a < arcs.size() && start < 0; ++a) {
            const Arc& arc = arcs[a];
            if (dist[static_cast<size_t>(arc.from)] + arc.cost <
                dist[static_cast<size_t>(arc.to)]) {
                pred[static_cast<size_t>(arc.to)] = static_cast<int>(a);
                start = arc.to;
            }
        }
        if (start < 0)
            break;  // converged exactly at the round limit
        int x = start;
        for (int i = 0; i < n; ++i)
            x = arcs[static_cast<size_t>(pred[static_cast<size_t>(x)])].from;
        int v = x;
        do {
            int a = pred[static_cast<size_t>(v)];
            selected[static_cast<size_t>(arcs[static_cast<size_t>(a)].edge_index)] ^= 1;
            v = arcs[static_cast<size_t>(a)].from;
        } while (v != x);
    }
    return assemble_match(graph, selected);
}

BalancedMatch brute_force_balanced_subset(const ReportGraph& graph) {
    const size_t m = graph.edges.size();
    if (m > 16)
        throw TooLarge("exhaustive subset search is capped at 16 edges, got " + std::to_string(m));
    std::vector<long long> net(static_cast<size_t>(graph.vertex_count), 0);
    unsigned best_mask = 0;
    int best_count = 0;
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        int count = 0;
        bool balanced = true;
        for (size_t i = 0; i < m; ++i) {
            if (!(mask & (1u << i)))
                continue;
            ++count;
            ++net[static_cast<size_t>(graph.edges[i].tail)];
            --net[static_cast<size_t>(graph.edges[i].head)];
        }
        for (size_t i = 0; i < m && balanced; ++i)
            if (mask & (1u << i))
                balanced = net[static_cast<size_t>(graph.edges[i].tail)] == 0 &&
                           net[static_cast<size_t>(graph.edges[i].head)] == 0;
        if (balanced && count > best_count) {
            best_count = count;
            best_mask = mask;
        }
        for (size_t i = 0; i < m; ++i) {
            if (!(mask & (1u << i)))
                continue;
            --net[static_cast<size_t>(graph.edges[i].tail)];
            ++net[static_cast<size_t>(graph.edges[i].head)];
        }
    }
    std::vector<char> selected(m, 0);
    for (size_t i = 0; i < m; ++i)
        if (best_mask & (1u << i))
            selected[i] = 1;
    return assemble_match(graph, selected);
}

}  // namespace qmv
