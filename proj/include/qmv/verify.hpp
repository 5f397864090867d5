#pragma once

#include <optional>
#include <vector>

#include "qmv/core.hpp"
#include "qmv/cyclicity.hpp"

namespace qmv {

struct VerifyOptions {
    long long budget = 1'000'000'000;  // max profile-message pairs per run
    int workers = 1;
    int record_cap = 1000;             // stored records per violation list
};

/// All quotas for the alphabet at the given K: compositions of K into
/// |alphabet| positive parts, lexicographic. Throws Infeasible if K < |alphabet|.
std::vector<Quota> enumerate_quotas(const Alphabet& alphabet, int k_total);

/// |alphabet|^K * |M|, or nullopt on 64-bit overflow.
std::optional<long long> pair_count(const Alphabet& alphabet, const Quota& quota);

/// One offending (profile, message) pair with the quantities both bounds
/// compare; every field is recomputable from the pair and the quota.
struct ViolationRecord {
    Profile profile;
    Message message;
    long long mismatch = 0;
    long long deviation = 0;
    bool ineq1_holds = false;
    bool ineq2_holds = false;
    bool cyclic = false;
    std::optional<CyclicityWitness> witness;
    std::optional<long long> t_max;  // matched-set size, set by the cover-bound audit
};

struct VerificationReport {
    int alphabet_size = 0;
    std::vector<int> quota_counts;
    int k_total = 0;
    long long pairs_checked = 0;

    // Pairs where bound (2) fails at all; each one has its witness replayed.
    long long ineq2_violating_pairs = 0;

    // Non-cyclic pairs that violate bound (2); empty iff the claim holds.
    long long theorem_violation_count = 0;
    std::vector<ViolationRecord> theorem_violations;

    // Pairs violating (2) whose replayed witness failed validation.
    long long witness_failure_count = 0;
    std::vector<ViolationRecord> witness_failures;

    // Non-cyclic pairs that violate bound (1) while satisfying the theorem.
    long long ineq1_violation_count = 0;
    std::vector<ViolationRecord> ineq1_violations;

    // Pairs with 2*(K - #T_max) > (|alphabet|-1)*deviation; empty iff the
    // balanced-cover bound holds.
    long long cover_bound_violation_count = 0;
    std::vector<ViolationRecord> cover_bound_violations;

    bool budget_exceeded = false;
    long long required_pairs = 0;
    double elapsed_seconds = 0.0;
};

/// Sweeps every (profile, message) pair, recording non-cyclic pairs that
/// violate bound (2), and replaying the witness construction on every pair
/// violating (2). Throws BudgetExceeded (with the pair count) before any work.
VerificationReport verify_theorem(const Alphabet& alphabet, const Quota& quota,
                                  const VerifyOptions& options = {});

/// Capped record list plus the exact total, so heavy runs stay bounded
/// without losing the count.
struct ViolationScan {
    std::vector<ViolationRecord> records;
    long long total = 0;
};

/// All non-cyclic pairs violating bound (1), lexicographic by (profile, message).
ViolationScan search_ineq1_violations(const Alphabet& alphabet, const Quota& quota,
                                      const VerifyOptions& options = {});

/// Flags every pair whose maximum balanced label set leaves more than
/// (|alphabet|-1)/2 * deviation tasks unmatched (scaled by 2K). Expected empty.
ViolationScan audit_cover_bound(const Alphabet& alphabet, const Quota& quota,
                                const VerifyOptions& options = {});

/// verify_theorem plus both scans, merged into one report.
VerificationReport verify_quota(const Alphabet& alphabet, const Quota& quota,
                                const VerifyOptions& options = {});

struct GridCell {
    int alphabet_size;
    int k_total;
};

/// Runs all three sweeps for every quota of every grid cell. A cell whose
/// pair count exceeds the budget is recorded as budget_exceeded and skipped;
/// the sweep continues. Output order and content do not depend on workers.
std::vector<VerificationReport> sweep(const std::vector<GridCell>& grid,
                                      const VerifyOptions& options = {});

}  // namespace qmv
