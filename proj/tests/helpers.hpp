#pragma once

// Shared helpers for the qmv test suites.

#include <string>
#include <vector>

#include "qmv/core.hpp"

namespace qmvtest {

inline qmv::Profile prof(const qmv::Alphabet& alphabet, const std::string& csv) {
    return qmv::Profile{qmv::parse_symbol_list(alphabet, csv)};
}

inline qmv::Message msg(const qmv::Alphabet& alphabet, const qmv::Quota& quota,
                        const std::string& csv) {
    return qmv::to_message(quota, qmv::Profile{qmv::parse_symbol_list(alphabet, csv)});
}

// Odometer over all length-k index vectors in lexicographic order.
inline bool next_entries(int n, std::vector<int>& entries) {
    for (size_t pos = entries.size(); pos-- > 0;) {
        if (++entries[pos] < n)
            return true;
        entries[pos] = 0;
    }
    return false;
}

}  // namespace qmvtest
