#include "qmv/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <climits>
#include <map>
#include <thread>
#include <utility>

namespace qmv {

namespace {

void compositions_rec(const Alphabet& alphabet, int position, int remaining,
                      std::vector<int>& parts, std::vector<Quota>& out) {
    const int n = alphabet.size();
    if (position == n - 1) {
        parts[static_cast<size_t>(position)] = remaining;
        out.push_back(validate_quota(alphabet, parts));
        return;
    }
    const int slots_after = n - position - 1;
    for (int value = 1; value + slots_after <= remaining; ++value) {
        parts[static_cast<size_t>(position)] = value;
        compositions_rec(alphabet, position + 1, remaining - value, parts, out);
    }
}

}  // namespace

std::vector<Quota> enumerate_quotas(const Alphabet& alphabet, int k_total) {
    if (k_total < alphabet.size())
        throw Infeasible("K = " + std::to_string(k_total) + " cannot give " +
                         std::to_string(alphabet.size()) + " symbols positive counts");
    std::vector<Quota> out;
    std::vector<int> parts(static_cast<size_t>(alphabet.size()), 0);
    compositions_rec(alphabet, 0, k_total, parts, out);
    return out;
}

std::optional<long long> pair_count(const Alphabet& alphabet, const Quota& quota) {
    auto messages = message_space_size(quota);
    if (!messages)
        return std::nullopt;
    long long profiles = 1;
    for (int i = 0; i < quota.k_total(); ++i)
        if (__builtin_mul_overflow(profiles, static_cast<long long>(alphabet.size()), &profiles))
            return std::nullopt;
    long long total = 0;
    if (__builtin_mul_overflow(profiles, *messages, &total))
        return std::nullopt;
    return total;
}

namespace {

// ---- shared sweep machinery ----------------------------------------------

void decode_profile(long long rank, int n, std::vector<int>& entries) {
    for (size_t pos = entries.size(); pos-- > 0;) {
        entries[pos] = static_cast<int>(rank % n);
        rank /= n;
    }
}

bool next_profile(int n, std::vector<int>& entries) {
    for (size_t pos = entries.size(); pos-- > 0;) {
        if (++entries[pos] < n)
            return true;
        entries[pos] = 0;
    }
    return false;
}

// Contiguous lexicographic profile-rank ranges, split along a leading
// prefix. Any split gives the same merged output, so the prefix length
// only tunes parallel grain.
std::vector<std::pair<long long, long long>> chunk_ranges(int n, int k, int workers) {
    long long total = 1;
    for (int i = 0; i < k; ++i)
        total *= n;
    int prefix_len = 0;
    long long chunks = 1;
    if (workers > 1)
        while (prefix_len < k && chunks < static_cast<long long>(workers) * 4) {
            chunks *= n;
            ++prefix_len;
        }
    const long long block = total / chunks;
    std::vector<std::pair<long long, long long>> ranges;
    ranges.reserve(static_cast<size_t>(chunks));
    for (long long c = 0; c < chunks; ++c)
        ranges.emplace_back(c * block, (c + 1) * block);
    return ranges;
}

template <typename ChunkOut, typename Fn>
std::vector<ChunkOut> run_chunks(int workers,
                                 const std::vector<std::pair<long long, long long>>& ranges,
                                 Fn fn) {
    std::vector<ChunkOut> results(ranges.size());
    if (workers <= 1 || ranges.size() == 1) {
        for (size_t i = 0; i < ranges.size(); ++i)
            results[i] = fn(ranges[i].first, ranges[i].second);
        return results;
    }
    std::atomic<size_t> next{0};
    auto body = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= ranges.size())
                break;
            results[i] = fn(ranges[i].first, ranges[i].second);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back(body);
    for (auto& t : pool)
        t.join();
    return results;
}

// Allocation-free cyclicity test on the loop-stripped, collapsed digraph.
struct PairScratch {
    std::vector<std::pair<int, int>> arcs;
    std::vector<int> stamp;
    std::vector<int> local_id;
    std::vector<int> verts;
    std::vector<int> indeg;
    std::vector<std::vector<int>> adj;
    std::vector<int> queue;
    int generation = 0;

    bool cyclic(const std::vector<int>& tails, const std::vector<int>& heads, int n) {
        arcs.clear();
        for (size_t k = 0; k < tails.size(); ++k)
            if (tails[k] != heads[k])
                arcs.emplace_back(tails[k], heads[k]);
        if (arcs.empty())
            return false;
        std::sort(arcs.begin(), arcs.end());
        arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
        if (static_cast<int>(stamp.size()) < n) {
            stamp.assign(static_cast<size_t>(n), 0);
            local_id.assign(static_cast<size_t>(n), 0);
        }
        ++generation;
        verts.clear();
        auto touch = [&](int v) {
            if (stamp[static_cast<size_t>(v)] != generation) {
                stamp[static_cast<size_t>(v)] = generation;
                local_id[static_cast<size_t>(v)] = static_cast<int>(verts.size());
                verts.push_back(v);
            }
        };
        for (const auto& [t, h] : arcs) {
            touch(t);
            touch(h);
        }
        const size_t m = verts.size();
        if (adj.size() < m)
            adj.resize(m);
        for (size_t i = 0; i < m; ++i)
            adj[i].clear();
        indeg.assign(m, 0);
        for (const auto& [t, h] : arcs) {
            int lt = local_id[static_cast<size_t>(t)];
            int lh = local_id[static_cast<size_t>(h)];
            adj[static_cast<size_t>(lt)].push_back(lh);
            ++indeg[static_cast<size_t>(lh)];
        }
        queue.clear();
        for (size_t v = 0; v < m; ++v)
            if (indeg[v] == 0)
                queue.push_back(static_cast<int>(v));
        size_t removed = 0;
        while (!queue.empty()) {
            int v = queue.back();
            queue.pop_back();
            ++removed;
            for (int h : adj[static_cast<size_t>(v)])
                if (--indeg[static_cast<size_t>(h)] == 0)
                    queue.push_back(h);
        }
        return removed != m;
    }
};

long long profile_deviation(const std::vector<int>& entries, const Quota& quota,
                            std::vector<long long>& tally) {
    tally.assign(static_cast<size_t>(quota.alphabet_size()), 0);
    for (int s : entries)
        ++tally[static_cast<size_t>(s)];
    long long total = 0;
    for (int w = 0; w < quota.alphabet_size(); ++w) {
        long long d = tally[static_cast<size_t>(w)] - quota.count(w);
        total += d < 0 ? -d : d;
    }
    return total;
}

ViolationRecord make_record(const std::vector<int>& profile, const std::vector<int>& message,
                            const Quota& quota, long long mismatch, long long deviation,
                            bool cyclic) {
    ViolationRecord rec;
    rec.profile = Profile{profile};
    rec.message = Message{message};
    rec.mismatch = mismatch;
    rec.deviation = deviation;
    rec.ineq1_holds = mismatch <= deviation;
    rec.ineq2_holds = 2 * mismatch <= static_cast<long long>(quota.alphabet_size() - 1) * deviation;
    rec.cyclic = cyclic;
    return rec;
}

long long checked_pairs_or_throw(const Alphabet& alphabet, const Quota& quota,
                                 const VerifyOptions& options) {
    auto pairs = pair_count(alphabet, quota);
    const long long required = pairs ? *pairs : LLONG_MAX;
    if (!pairs || *pairs > options.budget)
        throw BudgetExceeded("run needs " +
                                 (pairs ? std::to_string(required) : std::string("> 2^63")) +
                                 " pairs but the budget is " + std::to_string(options.budget),
                             required, options.budget);
    return required;
}

void append_capped(std::vector<ViolationRecord>& dst, std::vector<ViolationRecord>& src,
                   int cap) {
    for (auto& rec : src) {
        if (static_cast<int>(dst.size()) >= cap)
            break;
        dst.push_back(std::move(rec));
    }
}

}  // namespace

VerificationReport verify_theorem(const Alphabet& alphabet, const Quota& quota,
                                  const VerifyOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    const long long required = checked_pairs_or_throw(alphabet, quota, options);

    const int n = alphabet.size();
    const int k = quota.k_total();
    const std::vector<Message> messages = enumerate_messages(alphabet, quota);

    struct Chunk {
        long long pairs = 0;
        long long violating2 = 0;
        long long violations = 0;
        long long failures = 0;
        std::vector<ViolationRecord> violation_records;
        std::vector<ViolationRecord> failure_records;
    };

    auto body = [&](long long begin, long long end) {
        Chunk out;
        PairScratch scratch;
        std::vector<long long> tally;
        std::vector<int> profile(static_cast<size_t>(k));
        decode_profile(begin, n, profile);
        for (long long rank = begin; rank < end; ++rank) {
            const long long deviation = profile_deviation(profile, quota, tally);
            const Profile prof{profile};
            for (const Message& msg : messages) {
                ++out.pairs;
                long long mismatch = 0;
                for (size_t i = 0; i < profile.size(); ++i)
                    if (profile[i] != msg.entries[i])
                        ++mismatch;
                const bool ineq2 = 2 * mismatch <= static_cast<long long>(n - 1) * deviation;
                if (ineq2)
                    continue;
                ++out.violating2;
                const bool cyclic = scratch.cyclic(profile, msg.entries, n);
                if (!cyclic) {
                    ++out.violations;
                    if (static_cast<int>(out.violation_records.size()) < options.record_cap)
                        out.violation_records.push_back(
                            make_record(profile, msg.entries, quota, mismatch, deviation, cyclic));
                }
                // Replay the constructive argument on every violating pair.
                std::optional<CyclicityWitness> witness;
                bool ok = false;
                try {
                    witness = construct_witness_from_violation(alphabet, prof, msg, quota);
                    ok = witness->tau.size() >= 2 && validate_witness(prof, msg, *witness);
                } catch (const Error&) {
                    ok = false;
                }
                if (!ok) {
                    ++out.failures;
                    if (static_cast<int>(out.failure_records.size()) < options.record_cap) {
                        ViolationRecord rec =
                            make_record(profile, msg.entries, quota, mismatch, deviation, cyclic);
                        rec.witness = std::move(witness);
                        out.failure_records.push_back(std::move(rec));
                    }
                }
            }
            if (rank + 1 < end)
                next_profile(n, profile);
        }
        return out;
    };

    const auto ranges = chunk_ranges(n, k, options.workers);
    auto chunks = run_chunks<Chunk>(options.workers, ranges, body);

    VerificationReport report;
    report.alphabet_size = n;
    report.quota_counts = quota.counts();
    report.k_total = k;
    report.required_pairs = required;
    for (auto& c : chunks) {
        report.pairs_checked += c.pairs;
        report.ineq2_violating_pairs += c.violating2;
        report.theorem_violation_count += c.violations;
        report.witness_failure_count += c.failures;
        append_capped(report.theorem_violations, c.violation_records, options.record_cap);
        append_capped(report.witness_failures, c.failure_records, options.record_cap);
    }
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

ViolationScan search_ineq1_violations(const Alphabet& alphabet, const Quota& quota,
                                      const VerifyOptions& options) {
    checked_pairs_or_throw(alphabet, quota, options);

    const int n = alphabet.size();
    const int k = quota.k_total();
    const std::vector<Message> messages = enumerate_messages(alphabet, quota);

    struct Chunk {
        long long total = 0;
        std::vector<ViolationRecord> records;
    };

    auto body = [&](long long begin, long long end) {
        Chunk out;
        PairScratch scratch;
        std::vector<long long> tally;
        std::vector<int> profile(static_cast<size_t>(k));
        decode_profile(begin, n, profile);
        for (long long rank = begin; rank < end; ++rank) {
            const long long deviation = profile_deviation(profile, quota, tally);
            for (const Message& msg : messages) {
                long long mismatch = 0;
                for (size_t i = 0; i < profile.size(); ++i)
                    if (profile[i] != msg.entries[i])
                        ++mismatch;
                if (mismatch <= deviation)
                    continue;
                if (scratch.cyclic(profile, msg.entries, n))
                    continue;
                ++out.total;
                if (static_cast<int>(out.records.size()) < options.record_cap)
                    out.records.push_back(
                        make_record(profile, msg.entries, quota, mismatch, deviation, false));
            }
            if (rank + 1 < end)
                next_profile(n, profile);
        }
        return out;
    };

    const auto ranges = chunk_ranges(n, k, options.workers);
    auto chunks = run_chunks<Chunk>(options.workers, ranges, body);

    ViolationScan scan;
    for (auto& c : chunks) {
        scan.total += c.total;
        append_capped(scan.records, c.records, options.record_cap);
    }
    return scan;
}

ViolationScan audit_cover_bound(const Alphabet& alphabet, const Quota& quota,
                                const VerifyOptions& options) {
    checked_pairs_or_throw(alphabet, quota, options);

    const int n = alphabet.size();
    const int k = quota.k_total();
    const std::vector<Message> messages = enumerate_messages(alphabet, quota);

    struct Chunk {
        long long total = 0;
        std::vector<ViolationRecord> records;
    };

    auto body = [&](long long begin, long long end) {
        Chunk out;
        PairScratch scratch;
        std::vector<long long> tally;
        std::vector<int> profile(static_cast<size_t>(k));
        // The matched-set size depends only on the edge multiset, so cache it.
        std::map<std::vector<int>, long long> memo;
        std::vector<int> key(static_cast<size_t>(k));
        decode_profile(begin, n, profile);
        for (long long rank = begin; rank < end; ++rank) {
            const long long deviation = profile_deviation(profile, quota, tally);
            for (const Message& msg : messages) {
                for (size_t i = 0; i < profile.size(); ++i)
                    key[i] = profile[i] * n + msg.entries[i];
                std::sort(key.begin(), key.end());
                long long t_max;
                if (auto it = memo.find(key); it != memo.end()) {
                    t_max = it->second;
                } else {
                    std::vector<Edge> edges;
                    edges.reserve(static_cast<size_t>(k));
                    for (size_t i = 0; i < key.size(); ++i)
                        edges.push_back(
                            Edge{static_cast<int>(i) + 1, key[i] / n, key[i] % n});
                    t_max = static_cast<long long>(
                        max_balanced_subset(ReportGraph{n, std::move(edges)}).t_set.size());
                    memo.emplace(key, t_max);
                }
                if (2 * (k - t_max) <= static_cast<long long>(n - 1) * deviation)
                    continue;
                ++out.total;
                if (static_cast<int>(out.records.size()) < options.record_cap) {
                    long long mismatch = 0;
                    for (size_t i = 0; i < profile.size(); ++i)
                        if (profile[i] != msg.entries[i])
                            ++mismatch;
                    ViolationRecord rec =
                        make_record(profile, msg.entries, quota, mismatch, deviation,
                                    scratch.cyclic(profile, msg.entries, n));
                    rec.t_max = t_max;
                    out.records.push_back(std::move(rec));
                }
            }
            if (rank + 1 < end)
                next_profile(n, profile);
        }
        return out;
    };

    const auto ranges = chunk_ranges(n, k, options.workers);
    auto chunks = run_chunks<Chunk>(options.workers, ranges, body);

    ViolationScan scan;
    for (auto& c : chunks) {
        scan.total += c.total;
        append_capped(scan.records, c.records, options.record_cap);
    }
    return scan;
}

VerificationReport verify_quota(const Alphabet& alphabet, const Quota& quota,
                                const VerifyOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    VerificationReport report = verify_theorem(alphabet, quota, options);
    ViolationScan ineq1 = search_ineq1_violations(alphabet, quota, options);
    report.ineq1_violation_count = ineq1.total;
    report.ineq1_violations = std::move(ineq1.records);
    ViolationScan cover = audit_cover_bound(alphabet, quota, options);
    report.cover_bound_violation_count = cover.total;
    report.cover_bound_violations = std::move(cover.records);
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

std::vector<VerificationReport> sweep(const std::vector<GridCell>& grid,
                                      const VerifyOptions& options) {
    std::vector<VerificationReport> reports;
    for (const GridCell& cell : grid) {
        const Alphabet alphabet = Alphabet::with_size(cell.alphabet_size);
        for (const Quota& quota : enumerate_quotas(alphabet, cell.k_total)) {
            try {
                reports.push_back(verify_quota(alphabet, quota, options));
            } catch (const BudgetExceeded& e) {
                VerificationReport report;
                report.alphabet_size = alphabet.size();
                report.quota_counts = quota.counts();
                report.k_total = quota.k_total();
                report.budget_exceeded = true;
                report.required_pairs = e.required;
                reports.push_back(std::move(report));
            }
        }
    }
    return reports;
}

}  // namespace qmv
