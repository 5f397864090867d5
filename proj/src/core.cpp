#include "qmv/core.hpp"

#include <algorithm>
#include <unordered_set>

namespace qmv {

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() < 2)
        throw Error("alphabet needs at least 2 symbols, got " + std::to_string(names_.size()));
    std::unordered_set<std::string_view> seen;
    for (const auto& n : names_) {
        if (n.empty())
            throw Error("alphabet symbol names must be non-empty");
        if (!seen.insert(n).second)
            throw Error("duplicate alphabet symbol: " + n);
    }
}

Alphabet Alphabet::with_size(int n) {
    if (n < 2 || n > 26)
        throw Error("generated alphabet size must be in [2, 26], got " + std::to_string(n));
    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        names.push_back(std::string(1, static_cast<char>('A' + i)));
    return Alphabet(std::move(names));
}

std::optional<int> Alphabet::index_of(std::string_view name) const {
    for (size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name)
            return static_cast<int>(i);
    return std::nullopt;
}

Quota validate_quota(const Alphabet& alphabet, const std::vector<int>& raw_counts) {
    if (static_cast<int>(raw_counts.size()) != alphabet.size())
        throw SizeMismatch("quota needs one count per symbol: got " +
                           std::to_string(raw_counts.size()) + " for alphabet of " +
                           std::to_string(alphabet.size()));
    int k_total = 0;
    for (size_t i = 0; i < raw_counts.size(); ++i) {
        if (raw_counts[i] < 1)
            throw NonPositiveCount("quota count for " + alphabet.name(static_cast<int>(i)) +
                                   " must be >= 1, got " + std::to_string(raw_counts[i]));
        k_total += raw_counts[i];
    }
    return Quota(raw_counts, k_total);
}

Message to_message(const Quota& quota, const Profile& profile) {
    std::vector<long long> tally(static_cast<size_t>(quota.alphabet_size()), 0);
    for (int s : profile.entries) {
        if (s < 0 || s >= quota.alphabet_size())
            throw MessageNotInM("symbol index " + std::to_string(s) + " out of range");
        ++tally[static_cast<size_t>(s)];
    }
    for (int w = 0; w < quota.alphabet_size(); ++w) {
        if (tally[static_cast<size_t>(w)] != quota.count(w))
            throw MessageNotInM("per-symbol tally " + std::to_string(tally[static_cast<size_t>(w)]) +
                                " for symbol " + std::to_string(w) + " differs from quota " +
                                std::to_string(quota.count(w)));
    }
    return Message{profile.entries};
}

namespace {

void emit_messages(std::vector<int>& remaining, std::vector<int>& prefix, int k_total,
                   std::vector<Message>& out) {
    if (static_cast<int>(prefix.size()) == k_total) {
        out.push_back(Message{prefix});
        return;
    }
    for (size_t w = 0; w < remaining.size(); ++w) {
        if (remaining[w] == 0)
            continue;
        --remaining[w];
        prefix.push_back(static_cast<int>(w));
        emit_messages(remaining, prefix, k_total, out);
        prefix.pop_back();
        ++remaining[w];
    }
}

}  // namespace

std::vector<Message> enumerate_messages(const Alphabet& alphabet, const Quota& quota) {
    if (alphabet.size() != quota.alphabet_size())
        throw SizeMismatch("quota arity differs from alphabet size");
    std::vector<int> remaining = quota.counts();
    std::vector<int> prefix;
    prefix.reserve(static_cast<size_t>(quota.k_total()));
    std::vector<Message> out;
    if (auto n = message_space_size(quota))
        out.reserve(static_cast<size_t>(*n));
    emit_messages(remaining, prefix, quota.k_total(), out);
    return out;
}

std::optional<long long> message_space_size(const Quota& quota) {
    // K!/prod B! built incrementally as prod over symbols of C(partial_k, B(w)).
    long long total = 1;
    int used = 0;
    for (int w = 0; w < quota.alphabet_size(); ++w) {
        for (int i = 1; i <= quota.count(w); ++i) {
            ++used;
            // total = total * used / i, kept exact by dividing first where possible.
            long long num = total;
            if (__builtin_mul_overflow(num, static_cast<long long>(used), &num))
                return std::nullopt;
            total = num / i;  // binomial prefix products are divisible
        }
    }
    return total;
}

SignalCounts count_signals(const Alphabet& alphabet, const Profile& profile) {
    SignalCounts sc;
    sc.counts.assign(static_cast<size_t>(alphabet.size()), 0);
    for (int s : profile.entries)
        ++sc.counts.at(static_cast<size_t>(s));
    return sc;
}

long long mismatch_count(const Profile& profile, const Message& message) {
    if (profile.entries.size() != message.entries.size())
        throw LengthMismatch("profile has " + std::to_string(profile.entries.size()) +
                             " entries, message has " + std::to_string(message.entries.size()));
    long long mismatches = 0;
    for (size_t k = 0; k < profile.entries.size(); ++k)
        if (profile.entries[k] != message.entries[k])
            ++mismatches;
    return mismatches;
}

long long quota_deviation(const SignalCounts& counts, const Quota& quota) {
    if (counts.counts.size() != static_cast<size_t>(quota.alphabet_size()))
        throw SizeMismatch("signal counts arity differs from quota arity");
    long long total = 0;
    for (int w = 0; w < quota.alphabet_size(); ++w) {
        long long d = counts.counts[static_cast<size_t>(w)] - quota.count(w);
        total += d < 0 ? -d : d;
    }
    return total;
}

namespace {

long long deviation_of(const Profile& profile, const Quota& quota) {
    std::vector<long long> tally(static_cast<size_t>(quota.alphabet_size()), 0);
    for (int s : profile.entries)
        ++tally.at(static_cast<size_t>(s));
    long long total = 0;
    for (int w = 0; w < quota.alphabet_size(); ++w) {
        long long d = tally[static_cast<size_t>(w)] - quota.count(w);
        total += d < 0 ? -d : d;
    }
    return total;
}

}  // namespace

bool check_inequality1(const Profile& profile, const Message& message, const Quota& quota) {
    // Both sides of the fractional form multiplied by K.
    return mismatch_count(profile, message) <= deviation_of(profile, quota);
}

bool check_inequality2(const Profile& profile, const Message& message, const Quota& quota) {
    // Fractional form multiplied by 2K: 2*mismatch <= (|alphabet|-1)*deviation.
    return 2 * mismatch_count(profile, message) <=
           static_cast<long long>(quota.alphabet_size() - 1) * deviation_of(profile, quota);
}

std::vector<int> parse_symbol_list(const Alphabet& alphabet, std::string_view csv) {
    std::vector<int> out;
    size_t pos = 0;
    while (pos <= csv.size()) {
        size_t comma = csv.find(',', pos);
        std::string_view item = csv.substr(pos, comma == std::string_view::npos ? csv.size() - pos
                                                                                : comma - pos);
        if (item.empty())
            throw Error("empty symbol name in list: '" + std::string(csv) + "'");
        auto idx = alphabet.index_of(item);
        if (!idx)
            throw Error("unknown symbol '" + std::string(item) + "'");
        out.push_back(*idx);
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace qmv
