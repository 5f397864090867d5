#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmv/core.hpp"
#include "qmv/graph.hpp"

namespace qmv {

/// Ordered task labels tau(1), ..., tau(#S) certifying a cyclic report:
/// the labels are distinct, the referenced profile signals are pairwise
/// distinct, and each label's reported signal equals the next label's true
/// signal, wrapping around at the end.
struct CyclicityWitness {
    std::vector<int> tau;  // 1-based task labels
};

/// Checks a candidate witness against the pair. Never throws: an invalid
/// or out-of-range witness yields false, with the reason in *why if given.
bool validate_witness(const Profile& profile, const Message& message,
                      const CyclicityWitness& witness, std::string* why = nullptr);

/// Exhaustive search over all ordered sequences of >= 2 distinct labels, in
/// lexicographic order, returning the first valid witness. Intended as the
/// reference oracle; throws TooLarge when K exceeds the cap.
std::optional<CyclicityWitness> is_cyclic_definition(const Profile& profile,
                                                     const Message& message,
                                                     int exhaustive_cap = 8);

/// Fast checker: true iff the report graph keeps a directed cycle after
/// dropping loops. Agrees with is_cyclic_definition (tested exhaustively).
bool is_cyclic(const Alphabet& alphabet, const Profile& profile, const Message& message);

/// A witness for any cyclic pair, taken from a simple cycle of the report
/// graph; empty exactly when the pair is not cyclic.
std::optional<CyclicityWitness> extract_witness(const Alphabet& alphabet,
                                                const Profile& profile,
                                                const Message& message);

/// Replays the constructive argument for a pair violating bound (2):
/// take the maximum balanced label set with its bijection, pick the lowest
/// label reported away from its true signal, peel cycles off the matched
/// sub-multigraph, and read the witness off the cycle through that label.
/// Throws PreconditionViolated if bound (2) actually holds, and
/// CoverBoundBreach if no starting label exists (impossible unless the
/// balanced-cover bound itself fails).
CyclicityWitness construct_witness_from_violation(const Alphabet& alphabet,
                                                  const Profile& profile,
                                                  const Message& message,
                                                  const Quota& quota);

}  // namespace qmv
