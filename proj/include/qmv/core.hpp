#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmv/errors.hpp"

namespace qmv {

/// Finite set of signal identifiers. Symbols are dense indices 0..size-1,
/// each carrying a display name. At least two symbols, names distinct.
class Alphabet {
public:
    explicit Alphabet(std::vector<std::string> names);

    /// Alphabet with generated names A, B, C, ... (n <= 26).
    static Alphabet with_size(int n);

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int symbol) const { return names_.at(static_cast<size_t>(symbol)); }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<int> index_of(std::string_view name) const;

private:
    std::vector<std::string> names_;
};

/// Per-symbol positive counts B with K = sum of counts.
class Quota {
public:
    const std::vector<int>& counts() const { return counts_; }
    int count(int symbol) const { return counts_.at(static_cast<size_t>(symbol)); }
    int k_total() const { return k_total_; }
    int alphabet_size() const { return static_cast<int>(counts_.size()); }

private:
    friend Quota validate_quota(const Alphabet&, const std::vector<int>&);
    Quota(std::vector<int> counts, int k_total)
        : counts_(std::move(counts)), k_total_(k_total) {}

    std::vector<int> counts_;
    int k_total_;
};

/// K signal indices in task order. Arbitrary: no quota consistency required.
struct Profile {
    std::vector<int> entries;
};

/// K signal indices whose per-symbol tallies equal the quota exactly.
/// Build through to_message() or enumerate_messages() to keep the invariant.
struct Message {
    std::vector<int> entries;
};

/// Per-symbol tallies of a profile; sums to K.
struct SignalCounts {
    std::vector<long long> counts;
};

/// Builds a quota from one raw count per symbol.
/// Throws SizeMismatch on wrong arity, NonPositiveCount if any entry < 1.
Quota validate_quota(const Alphabet& alphabet, const std::vector<int>& raw_counts);

/// Checks a profile against the quota and returns it as a Message.
/// Throws MessageNotInM if any per-symbol tally differs from B.
Message to_message(const Quota& quota, const Profile& profile);

/// All quota-consistent K-vectors in lexicographic order by symbol index.
/// The list has exactly K! / prod_w B(w)! entries.
std::vector<Message> enumerate_messages(const Alphabet& alphabet, const Quota& quota);

/// K! / prod_w B(w)!, or nullopt on 64-bit overflow.
std::optional<long long> message_space_size(const Quota& quota);

SignalCounts count_signals(const Alphabet& alphabet, const Profile& profile);

/// Number of positions where the message differs from the profile.
/// Throws LengthMismatch. The fractional form divides this by K.
long long mismatch_count(const Profile& profile, const Message& message);

/// Sum over symbols of |n(w) - B(w)|; the fractional form divides by K.
/// Zero exactly when the tallied profile lies in the message space.
long long quota_deviation(const SignalCounts& counts, const Quota& quota);

/// Bound (1), cleared of denominators: mismatch <= deviation.
bool check_inequality1(const Profile& profile, const Message& message, const Quota& quota);

/// Bound (2), cleared of denominators: 2*mismatch <= (|alphabet|-1)*deviation.
bool check_inequality2(const Profile& profile, const Message& message, const Quota& quota);

/// Parses a comma-separated list of symbol names into indices.
/// Throws Error on an empty item or a name outside the alphabet.
std::vector<int> parse_symbol_list(const Alphabet& alphabet, std::string_view csv);

}  // namespace qmv
