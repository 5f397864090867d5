// Acceptance suite for the quota mechanism verifier. Each criterion runs
// end to end and prints exactly one [PASS]/[FAIL] line; the process exits
// nonzero if any criterion fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qmv/core.hpp"
#include "qmv/cyclicity.hpp"
#include "qmv/graph.hpp"
#include "qmv/verify.hpp"

using nlohmann::json;
using namespace qmv;

namespace {

int g_failures = 0;
std::vector<std::pair<int, std::string>> g_lines;

void criterion(int index, const std::string& name, bool pass, const std::string& detail) {
    g_lines.emplace_back(index, std::string("[") + (pass ? "PASS" : "FAIL") + "] " +
                                    std::to_string(index) + ". " + name + ": " + detail);
    if (!pass)
        ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(QMV_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return {-1, ""};
    std::string out;
    char buffer[4096];
    size_t got;
    while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0)
        out.append(buffer, got);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

json load_golden(const std::string& name) {
    std::ifstream in(std::string(QMV_GOLDEN_DIR) + "/" + name);
    return json::parse(in);
}

std::string fmt(long long value) {
    std::string raw = std::to_string(value);
    std::string out;
    int group = 0;
    for (size_t i = raw.size(); i-- > 0;) {
        out += raw[i];
        if (++group == 3 && i > 0) {
            out += ',';
            group = 0;
        }
    }
    std::reverse(out.begin(), out.end());
    return out;
}

// The grid every exhaustive criterion runs over.
std::vector<GridCell> certification_grid() {
    std::vector<GridCell> grid;
    for (int n = 2; n <= 4; ++n)
        for (int k = n; k <= 6; ++k)
            grid.push_back(GridCell{n, k});
    return grid;
}

const Edge* edge_by_label(const ReportGraph& graph, int label) {
    for (const Edge& e : graph.edges)
        if (e.label == label)
            return &e;
    return nullptr;
}

bool cycle_is_valid(const ReportGraph& graph, const Cycle& cycle) {
    if (cycle.labels.empty())
        return false;
    std::set<int> tails;
    for (size_t i = 0; i < cycle.labels.size(); ++i) {
        const Edge* cur = edge_by_label(graph, cycle.labels[i]);
        const Edge* next = edge_by_label(graph, cycle.labels[(i + 1) % cycle.labels.size()]);
        if (!cur || !next || cur->head != next->tail || !tails.insert(cur->tail).second)
            return false;
    }
    return true;
}

// ---- criterion 1 -----------------------------------------------------------

void criterion_counterexample() {
    const auto start = std::chrono::steady_clock::now();
    const RunResult run = run_cli(
        "check --alphabet A,B,C,D --quota 1,1,1,1 --profile A,A,B,C --message A,B,C,D");
    const double elapsed = seconds_since(start);
    bool pass = run.exit_code == 0 && elapsed < 1.0;
    std::string detail;
    try {
        const json j = json::parse(run.output);
        pass = pass && j.at("mismatch") == 3 && j.at("deviation") == 2 &&
               j.at("lhs_times_K") == 3 && j.at("rhs1_times_K") == 2 &&
               j.at("rhs2_times_2K") == 6 && j.at("ineq1_holds") == false &&
               j.at("ineq2_holds") == true && j.at("cyclic") == false;
        detail = "mismatch 3/4, deviation 1/2, bound (1) fails, bound (2) holds, non-cyclic (" +
                 std::to_string(elapsed).substr(0, 5) + "s)";
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("bad check output: ") + e.what();
    }
    criterion(1, "counterexample reproduction", pass, detail);
}

// ---- criteria 2, 3, 6, 7 share one sweep ------------------------------------

void criteria_from_sweep() {
    const auto start = std::chrono::steady_clock::now();
    VerifyOptions options;
    options.workers = 1;  // the time target is for a single core
    const std::vector<VerificationReport> reports = sweep(certification_grid(), options);
    const double elapsed = seconds_since(start);

    long long pairs = 0, theorem_violations = 0, replayed = 0, witness_failures = 0,
              cover_violations = 0;
    bool completed = true;
    for (const auto& rep : reports) {
        completed = completed && !rep.budget_exceeded;
        pairs += rep.pairs_checked;
        theorem_violations += rep.theorem_violation_count;
        replayed += rep.ineq2_violating_pairs;
        witness_failures += rep.witness_failure_count;
        cover_violations += rep.cover_bound_violation_count;
    }

    criterion(2, "theorem certification", completed && theorem_violations == 0 && elapsed < 300.0,
              fmt(theorem_violations) + " non-cyclic bound-(2) violations in " + fmt(pairs) +
                  " pairs over " + fmt(static_cast<long long>(reports.size())) +
                  " quota cells, single worker (" + std::to_string(elapsed).substr(0, 5) + "s)");

    // criterion 3: sharpness boundary against the frozen counts
    bool sharp = true;
    std::string sharp_note;
    long long four_total = 0;
    try {
        const json golden = load_golden("sharpness_counts.json");
        size_t cell_index = 0;
        for (int n = 2; n <= 4 && sharp; ++n) {
            for (int k = n; k <= 6 && sharp; ++k) {
                const json& cell = golden.at("cells").at(cell_index++);
                sharp = cell.at("alphabet_size") == n && cell.at("k") == k;
                long long cell_total = 0;
                for (const auto& rep : reports) {
                    if (rep.alphabet_size != n || rep.k_total != k)
                        continue;
                    cell_total += rep.ineq1_violation_count;
                    bool matched = false;
                    for (const json& q : cell.at("quotas"))
                        if (q.at("quota").get<std::vector<int>>() == rep.quota_counts) {
                            matched = true;
                            sharp = sharp &&
                                    q.at("ineq1_violations") == rep.ineq1_violation_count;
                        }
                    sharp = sharp && matched;
                }
                sharp = sharp && cell.at("total") == cell_total;
                if (n <= 3)
                    sharp = sharp && cell_total == 0;
                else {
                    sharp = sharp && cell_total > 0;
                    four_total += cell_total;
                }
            }
        }
    } catch (const std::exception& e) {
        sharp = false;
        sharp_note = std::string("golden mismatch: ") + e.what();
    }
    // the known pair must be the first stored violation of the K=4 cell
    for (const auto& rep : reports) {
        if (rep.alphabet_size != 4 || rep.k_total != 4)
            continue;
        const Alphabet four = Alphabet::with_size(4);
        sharp = sharp && !rep.ineq1_violations.empty();
        if (!rep.ineq1_violations.empty()) {
            const ViolationRecord& first = rep.ineq1_violations.front();
            sharp = sharp &&
                    first.profile.entries == std::vector<int>{0, 0, 1, 2} &&
                    first.message.entries == std::vector<int>{0, 1, 2, 3};
        }
    }
    if (sharp_note.empty())
        sharp_note = "bound-(1) violations: none for 2 or 3 symbols, " + fmt(four_total) +
                     " for 4 symbols (known pair found first); counts match the golden file";
    criterion(3, "sharpness boundary", sharp, sharp_note);

    criterion(6, "cover bound audit", completed && cover_violations == 0,
              fmt(cover_violations) + " violations of 2*(K - #T_max) <= (|alphabet|-1)*deviation");

    criterion(7, "constructive proof replay", completed && witness_failures == 0 && replayed > 0,
              fmt(replayed) + " bound-(2) violating pairs replayed, " + fmt(witness_failures) +
                  " invalid witnesses");
}

// ---- criterion 4 -------------------------------------------------------------

void criterion_cyclicity_oracle() {
    const auto start = std::chrono::steady_clock::now();
    long long checked = 0, disagreements = 0;

    for (int n = 2; n <= 3; ++n) {
        const Alphabet alphabet = Alphabet::with_size(n);
        for (int k = n; k <= 5; ++k) {
            for (const Quota& quota : enumerate_quotas(alphabet, k)) {
                const auto messages = enumerate_messages(alphabet, quota);
                std::vector<int> entries(static_cast<size_t>(k), 0);
                bool more = true;
                while (more) {
                    const Profile p{entries};
                    for (const Message& m : messages) {
                        ++checked;
                        if (is_cyclic_definition(p, m).has_value() != is_cyclic(alphabet, p, m))
                            ++disagreements;
                    }
                    more = false;
                    for (size_t pos = entries.size(); pos-- > 0;) {
                        if (++entries[pos] < n) {
                            more = true;
                            break;
                        }
                        entries[pos] = 0;
                    }
                }
            }
        }
    }
    const long long exhaustive = checked;

    const Alphabet four = Alphabet::with_size(4);
    std::mt19937 rng(190681);
    for (int k = 6; k <= 8; ++k) {
        const auto quotas = enumerate_quotas(four, k);
        std::uniform_int_distribution<size_t> pick_quota(0, quotas.size() - 1);
        std::uniform_int_distribution<int> symbol(0, 3);
        for (int trial = 0; trial < 4000; ++trial) {
            const Quota& quota = quotas[pick_quota(rng)];
            Profile p{std::vector<int>(static_cast<size_t>(k))};
            for (int& s : p.entries)
                s = symbol(rng);
            std::vector<int> reported;
            for (int w = 0; w < 4; ++w)
                reported.insert(reported.end(), static_cast<size_t>(quota.count(w)), w);
            std::shuffle(reported.begin(), reported.end(), rng);
            const Message m{reported};
            ++checked;
            if (is_cyclic_definition(p, m).has_value() != is_cyclic(four, p, m))
                ++disagreements;
        }
    }

    criterion(4, "cyclicity oracle equivalence", disagreements == 0,
              fmt(exhaustive) + " exhaustive pairs (2-3 symbols, K <= 5) and " +
                  fmt(checked - exhaustive) + " random pairs (4 symbols, K 6-8), " +
                  fmt(disagreements) + " disagreements (" +
                  std::to_string(seconds_since(start)).substr(0, 5) + "s)");
}

// ---- criterion 5 -------------------------------------------------------------

void criterion_matching_oracle() {
    const auto start = std::chrono::steady_clock::now();
    long long checked = 0, disagreements = 0;

    for (int n = 2; n <= 3; ++n) {
        const Alphabet alphabet = Alphabet::with_size(n);
        for (int k = n; k <= 5; ++k) {
            for (const Quota& quota : enumerate_quotas(alphabet, k)) {
                const auto messages = enumerate_messages(alphabet, quota);
                std::vector<int> entries(static_cast<size_t>(k), 0);
                bool more = true;
                while (more) {
                    const Profile p{entries};
                    for (const Message& m : messages) {
                        ++checked;
                        const ReportGraph g = build_report_graph(alphabet, p, m);
                        if (max_balanced_subset(g).t_set.size() !=
                            brute_force_balanced_subset(g).t_set.size())
                            ++disagreements;
                    }
                    more = false;
                    for (size_t pos = entries.size(); pos-- > 0;) {
                        if (++entries[pos] < n) {
                            more = true;
                            break;
                        }
                        entries[pos] = 0;
                    }
                }
            }
        }
    }
    const long long exhaustive = checked;

    // the instance where grabbing a short cycle first is suboptimal
    const ReportGraph trap =
        make_report_graph(3, {Edge{1, 0, 1}, Edge{2, 1, 2}, Edge{3, 2, 0}, Edge{4, 1, 0}});
    bool trap_ok = max_balanced_subset(trap).t_set.size() == 3 &&
                   brute_force_balanced_subset(trap).t_set.size() == 3;

    std::mt19937 rng(5915587);
    std::uniform_int_distribution<int> nv(2, 6);
    std::uniform_int_distribution<int> ne(0, 12);
    for (int trial = 0; trial < 1500; ++trial) {
        const int n = nv(rng);
        const int m = ne(rng);
        std::uniform_int_distribution<int> vertex(0, n - 1);
        std::vector<Edge> edges;
        for (int i = 0; i < m; ++i)
            edges.push_back(Edge{i + 1, vertex(rng), vertex(rng)});
        const ReportGraph g = make_report_graph(n, std::move(edges));
        ++checked;
        if (max_balanced_subset(g).t_set.size() != brute_force_balanced_subset(g).t_set.size())
            ++disagreements;
    }

    criterion(5, "matching oracle equivalence", disagreements == 0 && trap_ok,
              fmt(exhaustive) + " exhaustive report graphs and " + fmt(checked - exhaustive) +
                  " random instances (K <= 12), " + fmt(disagreements) +
                  " cardinality disagreements; greedy-trap answer " +
                  (trap_ok ? "3" : "wrong") + " (" +
                  std::to_string(seconds_since(start)).substr(0, 5) + "s)");
}

// ---- criterion 8 -------------------------------------------------------------

ReportGraph balanced_instance(int index) {
    std::mt19937 rng(static_cast<unsigned>(881200 + index));
    std::uniform_int_distribution<int> nv(2, 6);
    const int n = nv(rng);
    std::uniform_int_distribution<int> vertex(0, n - 1);
    std::uniform_int_distribution<int> walk_len(1, 4);
    std::vector<std::pair<int, int>> arcs;
    while (static_cast<int>(arcs.size()) < 12) {
        const int start = vertex(rng);
        int cur = start;
        const int len = walk_len(rng);
        for (int i = 0; i + 1 < len && static_cast<int>(arcs.size()) + 1 < 12; ++i) {
            const int next = vertex(rng);
            arcs.emplace_back(cur, next);
            cur = next;
        }
        arcs.emplace_back(cur, start);
    }
    std::vector<int> labels(arcs.size());
    std::iota(labels.begin(), labels.end(), 1);
    std::shuffle(labels.begin(), labels.end(), rng);
    std::vector<Edge> edges;
    for (size_t i = 0; i < arcs.size(); ++i)
        edges.push_back(Edge{labels[i], arcs[i].first, arcs[i].second});
    return make_report_graph(n, std::move(edges));
}

std::string decompose_all(int instances, int workers) {
    std::vector<std::string> slots(static_cast<size_t>(instances));
    std::atomic<int> next{0};
    auto body = [&] {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= instances)
                break;
            const ReportGraph g = balanced_instance(i);
            const auto cycles = decompose_cycles(g);
            std::ostringstream line;
            line << i << ':';
            for (const Cycle& c : cycles) {
                line << " [";
                for (size_t j = 0; j < c.labels.size(); ++j)
                    line << (j ? "," : "") << c.labels[j];
                line << ']';
            }
            line << '\n';
            slots[static_cast<size_t>(i)] = line.str();
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back(body);
    for (auto& t : pool)
        t.join();
    std::string out;
    for (const auto& s : slots)
        out += s;
    return out;
}

void criterion_decomposition() {
    const auto start = std::chrono::steady_clock::now();
    const int instances = 10000;

    long long bad = 0;
    for (int i = 0; i < instances; ++i) {
        const ReportGraph g = balanced_instance(i);
        const auto cycles = decompose_cycles(g);
        std::set<int> seen;
        bool ok = true;
        for (const Cycle& c : cycles) {
            ok = ok && cycle_is_valid(g, c);
            for (int label : c.labels)
                ok = ok && seen.insert(label).second;
        }
        ok = ok && seen.size() == g.edges.size();
        if (!ok)
            ++bad;
    }

    const std::string serial_a = decompose_all(instances, 1);
    const std::string serial_b = decompose_all(instances, 1);
    const std::string parallel = decompose_all(instances, 4);
    const bool deterministic = serial_a == serial_b && serial_a == parallel;

    criterion(8, "decomposition soundness", bad == 0 && deterministic,
              fmt(instances) + " random balanced multigraphs: " + fmt(bad) +
                  " bad partitions; output byte-identical across runs and worker counts (" +
                  std::to_string(seconds_since(start)).substr(0, 5) + "s)");
}

}  // namespace

int main() {
    criterion_counterexample();
    criteria_from_sweep();
    criterion_cyclicity_oracle();
    criterion_matching_oracle();
    criterion_decomposition();
    std::sort(g_lines.begin(), g_lines.end());
    for (const auto& [index, line] : g_lines)
        std::printf("%s\n", line.c_str());
    std::printf("acceptance: %d/8 criteria passed\n", 8 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
