#include "qmv/cyclicity.hpp"

#include <algorithm>

namespace qmv {

bool validate_witness(const Profile& profile, const Message& message,
                      const CyclicityWitness& witness, std::string* why) {
    auto fail = [&](const std::string& reason) {
        if (why)
            *why = reason;
        return false;
    };
    const int k_total = static_cast<int>(profile.entries.size());
    if (message.entries.size() != profile.entries.size())
        return fail("profile and message lengths differ");
    const auto& tau = witness.tau;
    if (tau.size() < 2)
        return fail("witness needs at least 2 labels, got " + std::to_string(tau.size()));
    for (int label : tau)
        if (label < 1 || label > k_total)
            return fail("label " + std::to_string(label) + " outside 1.." + std::to_string(k_total));
    for (size_t i = 0; i < tau.size(); ++i)
        for (size_t j = i + 1; j < tau.size(); ++j) {
            if (tau[i] == tau[j])
                return fail("label " + std::to_string(tau[i]) + " repeats");
            // condition (i): true signals pairwise distinct over the set
            if (profile.entries[static_cast<size_t>(tau[i] - 1)] ==
                profile.entries[static_cast<size_t>(tau[j] - 1)])
                return fail("labels " + std::to_string(tau[i]) + " and " + std::to_string(tau[j]) +
                            " share the true signal");
        }
    // condition (ii): each report equals the next label's true signal, cyclically
    for (size_t i = 0; i < tau.size(); ++i) {
        int cur = tau[i];
        int next = tau[(i + 1) % tau.size()];
        if (message.entries[static_cast<size_t>(cur - 1)] !=
            profile.entries[static_cast<size_t>(next - 1)])
            return fail("report at label " + std::to_string(cur) +
                        " does not equal the true signal at label " + std::to_string(next));
    }
    return true;
}

namespace {

// Lexicographic depth-first enumeration of label sequences. A prefix is
// extendable only if the new label keeps true signals distinct and chains
// off the previous report, so a prefix is a witness exactly when its last
// report closes back onto the first true signal.
bool search_witness(const Profile& profile, const Message& message, std::vector<int>& prefix,
                    std::vector<char>& used) {
    const int k_total = static_cast<int>(profile.entries.size());
    if (prefix.size() >= 2) {
        int last = prefix.back();
        int first = prefix.front();
        if (message.entries[static_cast<size_t>(last - 1)] ==
            profile.entries[static_cast<size_t>(first - 1)])
            return true;
    }
    for (int label = 1; label <= k_total; ++label) {
        if (used[static_cast<size_t>(label)])
            continue;
        if (!prefix.empty()) {
            int prev = prefix.back();
            if (message.entries[static_cast<size_t>(prev - 1)] !=
                profile.entries[static_cast<size_t>(label - 1)])
                continue;
            bool distinct = true;
            for (int chosen : prefix)
                if (profile.entries[static_cast<size_t>(chosen - 1)] ==
                    profile.entries[static_cast<size_t>(label - 1)]) {
                    distinct = false;
                    break;
                }
            if (!distinct)
                continue;
        }
        prefix.push_back(label);
        used[static_cast<size_t>(label)] = 1;
        if (search_witness(profile, message, prefix, used))
            return true;
        used[static_cast<size_t>(label)] = 0;
        prefix.pop_back();
    }
    return false;
}

}  // namespace

std::optional<CyclicityWitness> is_cyclic_definition(const Profile& profile,
                                                     const Message& message,
                                                     int exhaustive_cap) {
    if (profile.entries.size() != message.entries.size())
        throw LengthMismatch("profile and message lengths differ");
    const int k_total = static_cast<int>(profile.entries.size());
    if (k_total > exhaustive_cap)
        throw TooLarge("exhaustive cyclicity search capped at K = " +
                       std::to_string(exhaustive_cap) + ", got K = " + std::to_string(k_total));
    std::vector<int> prefix;
    std::vector<char> used(static_cast<size_t>(k_total) + 1, 0);
    if (search_witness(profile, message, prefix, used))
        return CyclicityWitness{prefix};
    return std::nullopt;
}

bool is_cyclic(const Alphabet& alphabet, const Profile& profile, const Message& message) {
    return has_nonloop_cycle(build_report_graph(alphabet, profile, message));
}

std::optional<CyclicityWitness> extract_witness(const Alphabet& alphabet,
                                                const Profile& profile,
                                                const Message& message) {
    auto cycle = find_simple_cycle(build_report_graph(alphabet, profile, message));
    if (!cycle)
        return std::nullopt;
    return CyclicityWitness{std::move(cycle->labels)};
}

CyclicityWitness construct_witness_from_violation(const Alphabet& alphabet,
                                                  const Profile& profile,
                                                  const Message& message,
                                                  const Quota& quota) {
    if (check_inequality2(profile, message, quota))
        throw PreconditionViolated("bound (2) holds for this pair; nothing to replay");

    const BalancedMatch match = max_balanced_subset(build_report_graph(alphabet, profile, message));

    // Lowest matched label whose partner carries a different true signal.
    int start_label = -1;
    for (int label : match.t_set) {
        int partner = match.pi.at(label);
        if (profile.entries[static_cast<size_t>(partner - 1)] !=
            profile.entries[static_cast<size_t>(label - 1)]) {
            start_label = label;
            break;
        }
    }
    if (start_label < 0)
        throw CoverBoundBreach(
            "no matched label is reported away from its true signal although bound (2) fails; "
            "this contradicts the balanced-cover bound");

    // Matched sub-multigraph: edge k runs from its true signal to its
    // partner's true signal (equal to the reported signal for matched k).
    std::vector<Edge> edges;
    edges.reserve(match.t_set.size());
    for (int label : match.t_set) {
        int partner = match.pi.at(label);
        edges.push_back(Edge{label, profile.entries[static_cast<size_t>(label - 1)],
                             profile.entries[static_cast<size_t>(partner - 1)]});
    }
    const auto cycles = decompose_cycles(make_report_graph(alphabet.size(), std::move(edges)));

    const Cycle* home = nullptr;
    for (const Cycle& c : cycles)
        if (std::find(c.labels.begin(), c.labels.end(), start_label) != c.labels.end()) {
            home = &c;
            break;
        }
    if (home == nullptr)
        throw Error("internal: matched label missing from its own decomposition");

    // tau(1) is the chosen label; each next label is the unique cycle edge
    // whose true signal equals the previous partner's true signal.
    std::vector<int> label_with_tail(static_cast<size_t>(alphabet.size()), -1);
    for (int label : home->labels)
        label_with_tail[static_cast<size_t>(profile.entries[static_cast<size_t>(label - 1)])] =
            label;
    std::vector<int> tau{start_label};
    for (size_t step = 1; step < home->labels.size(); ++step) {
        int prev = tau.back();
        int partner = match.pi.at(prev);
        int next = label_with_tail[static_cast<size_t>(
            profile.entries[static_cast<size_t>(partner - 1)])];
        if (next < 0)
            throw Error("internal: cycle has no edge at the expected vertex");
        tau.push_back(next);
    }
    return CyclicityWitness{std::move(tau)};
}

}  // namespace qmv
