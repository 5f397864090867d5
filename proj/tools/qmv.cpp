// qmv: command-line front end for the quota mechanism verifier.
//
// Subcommands: check, verify, search, witness, decompose. One-shot commands
// emit a single JSON document; verify and search stream JSON Lines. Exit
// codes: 0 success/verified, 1 falsification found, 2 usage or validation
// error, 3 negative search result.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmv/core.hpp"
#include "qmv/cyclicity.hpp"
#include "qmv/graph.hpp"
#include "qmv/verify.hpp"

using nlohmann::json;

namespace {

constexpr int kExitVerified = 0;
constexpr int kExitFalsified = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNotFound = 3;

std::string error_kind(const qmv::Error& e) {
    if (dynamic_cast<const qmv::SizeMismatch*>(&e)) return "SizeMismatch";
    if (dynamic_cast<const qmv::NonPositiveCount*>(&e)) return "NonPositiveCount";
    if (dynamic_cast<const qmv::LengthMismatch*>(&e)) return "LengthMismatch";
    if (dynamic_cast<const qmv::MessageNotInM*>(&e)) return "MessageNotInM";
    if (dynamic_cast<const qmv::NotBalanced*>(&e)) return "NotBalanced";
    if (dynamic_cast<const qmv::TooLarge*>(&e)) return "TooLarge";
    if (dynamic_cast<const qmv::Infeasible*>(&e)) return "Infeasible";
    if (dynamic_cast<const qmv::BudgetExceeded*>(&e)) return "BudgetExceeded";
    if (dynamic_cast<const qmv::PreconditionViolated*>(&e)) return "PreconditionViolated";
    if (dynamic_cast<const qmv::CoverBoundBreach*>(&e)) return "CoverBoundBreach";
    return "Error";
}

// ---- output plumbing -------------------------------------------------------

struct Output {
    std::string path;
    std::ofstream file;

    std::ostream& stream() {
        if (path.empty())
            return std::cout;
        if (!file.is_open()) {
            file.open(path);
            if (!file)
                throw qmv::Error("cannot open output file: " + path);
        }
        return file;
    }
};

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i)
            os << ',';
        os << csv_escape(cells[i]);
    }
    os << '\n';
}

std::string join(const std::vector<std::string>& items, char sep) {
    std::string out;
    for (size_t i = 0; i < items.size(); ++i) {
        if (i)
            out += sep;
        out += items[i];
    }
    return out;
}

std::string fraction(long long numerator, long long denominator) {
    long long g = std::gcd(numerator, denominator);
    if (g > 1) {
        numerator /= g;
        denominator /= g;
    }
    return std::to_string(numerator) + "/" + std::to_string(denominator);
}

// ---- parsing ---------------------------------------------------------------

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep))
        out.push_back(item);
    if (!text.empty() && text.back() == sep)
        out.push_back("");
    return out;
}

int parse_int(const std::string& text, const std::string& what) {
    try {
        size_t used = 0;
        int value = std::stoi(text, &used);
        if (used != text.size())
            throw qmv::Error("trailing characters in " + what + ": '" + text + "'");
        return value;
    } catch (const std::exception&) {
        throw qmv::Error("cannot parse " + what + ": '" + text + "'");
    }
}

qmv::Alphabet make_alphabet(const std::string& alphabet_csv, int alphabet_size) {
    if (!alphabet_csv.empty() && alphabet_size > 0)
        throw qmv::Error("give either --alphabet or --alphabet-size, not both");
    if (!alphabet_csv.empty())
        return qmv::Alphabet(split(alphabet_csv, ','));
    if (alphabet_size > 0)
        return qmv::Alphabet::with_size(alphabet_size);
    throw qmv::Error("an alphabet is required (--alphabet or --alphabet-size)");
}

qmv::Quota make_quota(const qmv::Alphabet& alphabet, const std::string& quota_csv) {
    std::vector<int> counts;
    for (const std::string& item : split(quota_csv, ','))
        counts.push_back(parse_int(item, "quota count"));
    return qmv::validate_quota(alphabet, counts);
}

qmv::Profile make_profile(const qmv::Alphabet& alphabet, const qmv::Quota& quota,
                          const std::string& csv) {
    qmv::Profile profile{qmv::parse_symbol_list(alphabet, csv)};
    if (static_cast<int>(profile.entries.size()) != quota.k_total())
        throw qmv::Error("profile has " + std::to_string(profile.entries.size()) +
                         " entries but K = " + std::to_string(quota.k_total()));
    return profile;
}

long long default_budget() {
    if (const char* env = std::getenv("QMV_BUDGET")) {
        try {
            return std::stoll(env);
        } catch (const std::exception&) {
            throw qmv::Error(std::string("cannot parse QMV_BUDGET: '") + env + "'");
        }
    }
    return qmv::VerifyOptions{}.budget;
}

// ---- serialization ---------------------------------------------------------

json symbols_json(const qmv::Alphabet& alphabet, const std::vector<int>& entries) {
    json arr = json::array();
    for (int s : entries)
        arr.push_back(alphabet.name(s));
    return arr;
}

std::string symbols_cell(const qmv::Alphabet& alphabet, const std::vector<int>& entries) {
    std::vector<std::string> names;
    for (int s : entries)
        names.push_back(alphabet.name(s));
    return join(names, ';');
}

std::string labels_cell(const std::vector<int>& labels) {
    std::vector<std::string> items;
    for (int l : labels)
        items.push_back(std::to_string(l));
    return join(items, ';');
}

json record_json(const qmv::Alphabet& alphabet, const qmv::Quota& quota,
                 const qmv::ViolationRecord& rec) {
    json j;
    j["profile"] = symbols_json(alphabet, rec.profile.entries);
    j["message"] = symbols_json(alphabet, rec.message.entries);
    j["quota"] = quota.counts();
    j["mismatch"] = rec.mismatch;
    j["deviation"] = rec.deviation;
    j["ineq1_holds"] = rec.ineq1_holds;
    j["ineq2_holds"] = rec.ineq2_holds;
    j["cyclic"] = rec.cyclic;
    if (rec.witness)
        j["witness"] = rec.witness->tau;
    if (rec.t_max)
        j["t_max"] = *rec.t_max;
    return j;
}

json report_json(const qmv::Alphabet& alphabet, const qmv::VerificationReport& rep,
                 bool timings) {
    json j;
    j["alphabet_size"] = rep.alphabet_size;
    j["k"] = rep.k_total;
    j["quota"] = rep.quota_counts;
    j["pairs_checked"] = rep.pairs_checked;
    j["ineq2_violating_pairs"] = rep.ineq2_violating_pairs;
    j["theorem_violation_count"] = rep.theorem_violation_count;
    j["witness_failure_count"] = rep.witness_failure_count;
    j["ineq1_violation_count"] = rep.ineq1_violation_count;
    j["cover_bound_violation_count"] = rep.cover_bound_violation_count;
    j["budget_exceeded"] = rep.budget_exceeded;
    j["required_pairs"] = rep.required_pairs;
    const qmv::Quota quota = qmv::validate_quota(alphabet, rep.quota_counts);
    auto records = [&](const std::vector<qmv::ViolationRecord>& list) {
        json arr = json::array();
        for (const auto& rec : list)
            arr.push_back(record_json(alphabet, quota, rec));
        return arr;
    };
    j["theorem_violations"] = records(rep.theorem_violations);
    j["witness_failures"] = records(rep.witness_failures);
    j["ineq1_violations"] = records(rep.ineq1_violations);
    j["cover_bound_violations"] = records(rep.cover_bound_violations);
    if (timings)
        j["elapsed_seconds"] = rep.elapsed_seconds;
    return j;
}

const std::vector<std::string> kRecordColumns = {
    "profile", "message", "quota",  "mismatch", "deviation", "ineq1_holds",
    "ineq2_holds", "cyclic", "witness", "t_max"};

std::vector<std::string> record_cells(const qmv::Alphabet& alphabet, const qmv::Quota& quota,
                                      const qmv::ViolationRecord& rec) {
    std::vector<std::string> quota_items;
    for (int c : quota.counts())
        quota_items.push_back(std::to_string(c));
    return {symbols_cell(alphabet, rec.profile.entries),
            symbols_cell(alphabet, rec.message.entries),
            join(quota_items, ';'),
            std::to_string(rec.mismatch),
            std::to_string(rec.deviation),
            rec.ineq1_holds ? "true" : "false",
            rec.ineq2_holds ? "true" : "false",
            rec.cyclic ? "true" : "false",
            rec.witness ? labels_cell(rec.witness->tau) : "",
            rec.t_max ? std::to_string(*rec.t_max) : ""};
}

}  // namespace

// ---- check -----------------------------------------------------------------

namespace {

struct CheckArgs {
    std::string alphabet_csv;
    int alphabet_size = 0;
    std::string quota_csv;
    std::string profile_csv;
    std::string message_csv;
};

int run_check(const CheckArgs& args, const std::string& format, Output& out) {
    const qmv::Alphabet alphabet = make_alphabet(args.alphabet_csv, args.alphabet_size);
    const qmv::Quota quota = make_quota(alphabet, args.quota_csv);
    const qmv::Profile profile = make_profile(alphabet, quota, args.profile_csv);
    const qmv::Message message =
        qmv::to_message(quota, qmv::Profile{qmv::parse_symbol_list(alphabet, args.message_csv)});

    const long long mismatch = qmv::mismatch_count(profile, message);
    const long long deviation =
        qmv::quota_deviation(qmv::count_signals(alphabet, profile), quota);
    const long long rhs2 = static_cast<long long>(alphabet.size() - 1) * deviation;
    const bool ineq1 = mismatch <= deviation;
    const bool ineq2 = 2 * mismatch <= rhs2;
    const bool cyclic = qmv::is_cyclic(alphabet, profile, message);
    std::optional<qmv::CyclicityWitness> witness;
    if (cyclic)
        witness = qmv::extract_witness(alphabet, profile, message);

    if (format == "json") {
        json j;
        j["mismatch"] = mismatch;
        j["deviation"] = deviation;
        j["lhs_times_K"] = mismatch;
        j["rhs1_times_K"] = deviation;
        j["rhs2_times_2K"] = rhs2;
        j["ineq1_holds"] = ineq1;
        j["ineq2_holds"] = ineq2;
        j["cyclic"] = cyclic;
        if (witness)
            j["witness"] = witness->tau;
        out.stream() << j.dump() << '\n';
    } else if (format == "csv") {
        write_csv_row(out.stream(),
                      {"mismatch", "deviation", "lhs_times_K", "rhs1_times_K", "rhs2_times_2K",
                       "ineq1_holds", "ineq2_holds", "cyclic", "witness"});
        write_csv_row(out.stream(),
                      {std::to_string(mismatch), std::to_string(deviation),
                       std::to_string(mismatch), std::to_string(deviation), std::to_string(rhs2),
                       ineq1 ? "true" : "false", ineq2 ? "true" : "false",
                       cyclic ? "true" : "false", witness ? labels_cell(witness->tau) : ""});
    } else {
        const long long k = quota.k_total();
        std::ostream& os = out.stream();
        os << "mismatch:  " << mismatch << " of " << k << " (" << fraction(mismatch, k) << ")\n";
        os << "deviation: " << deviation << " of " << k << " (" << fraction(deviation, k)
           << ")\n";
        os << "bound (1) mismatch <= deviation: "
           << (ineq1 ? "holds" : "violated") << " (" << mismatch
           << (ineq1 ? " <= " : " > ") << deviation << ")\n";
        os << "bound (2) 2*mismatch <= (|alphabet|-1)*deviation: "
           << (ineq2 ? "holds" : "violated") << " (" << 2 * mismatch
           << (ineq2 ? " <= " : " > ") << rhs2 << ")\n";
        os << "cyclic: " << (cyclic ? "yes" : "no") << "\n";
        if (witness)
            os << "witness: " << labels_cell(witness->tau) << "\n";
    }
    return kExitVerified;
}

// ---- verify and search -----------------------------------------------------

struct SweepArgs {
    std::string alphabet_csv;
    int alphabet_size = 0;
    int k_total = 0;
    std::string quota_csv;
    bool all_quotas = false;
    long long budget = 0;
    int workers = 1;
    int record_cap = 1000;
    bool timings = false;
};

std::vector<qmv::Quota> select_quotas(const qmv::Alphabet& alphabet, const SweepArgs& args) {
    if (!args.quota_csv.empty() && args.all_quotas)
        throw qmv::Error("give either --quota or --all-quotas, not both");
    if (!args.quota_csv.empty()) {
        qmv::Quota quota = make_quota(alphabet, args.quota_csv);
        if (args.k_total > 0 && args.k_total != quota.k_total())
            throw qmv::Error("--k " + std::to_string(args.k_total) +
                             " disagrees with the quota sum " + std::to_string(quota.k_total()));
        return {quota};
    }
    if (args.k_total <= 0)
        throw qmv::Error("--k is required when no explicit quota is given");
    return qmv::enumerate_quotas(alphabet, args.k_total);
}

qmv::VerifyOptions sweep_options(const SweepArgs& args) {
    qmv::VerifyOptions options;
    options.budget = args.budget > 0 ? args.budget : default_budget();
    options.workers = args.workers;
    options.record_cap = args.record_cap;
    return options;
}

int run_verify(const SweepArgs& args, const std::string& format, Output& out) {
    const qmv::Alphabet alphabet = make_alphabet(args.alphabet_csv, args.alphabet_size);
    const std::vector<qmv::Quota> quotas = select_quotas(alphabet, args);
    const qmv::VerifyOptions options = sweep_options(args);

    // Budget gate before any work.
    for (const qmv::Quota& quota : quotas) {
        auto pairs = qmv::pair_count(alphabet, quota);
        if (!pairs || *pairs > options.budget)
            throw qmv::BudgetExceeded(
                "quota (" + labels_cell(quota.counts()) + ") needs " +
                    (pairs ? std::to_string(*pairs) : std::string("> 2^63")) +
                    " pairs but the budget is " + std::to_string(options.budget),
                pairs ? *pairs : -1, options.budget);
    }

    std::vector<qmv::VerificationReport> reports;
    reports.reserve(quotas.size());
    for (const qmv::Quota& quota : quotas)
        reports.push_back(qmv::verify_quota(alphabet, quota, options));

    if (format == "json") {
        for (const auto& rep : reports)
            out.stream() << report_json(alphabet, rep, args.timings).dump() << '\n';
    } else if (format == "csv") {
        std::vector<std::string> header = {"row_type",      "alphabet_size",
                                           "k",             "quota",
                                           "pairs_checked", "ineq2_violating_pairs",
                                           "theorem_violation_count",
                                           "witness_failure_count", "ineq1_violation_count",
                                           "cover_bound_violation_count", "budget_exceeded",
                                           "required_pairs", "kind"};
        header.insert(header.end(), kRecordColumns.begin(), kRecordColumns.end());
        write_csv_row(out.stream(), header);
        for (const auto& rep : reports) {
            std::vector<std::string> quota_items;
            for (int c : rep.quota_counts)
                quota_items.push_back(std::to_string(c));
            const std::string quota_cell = join(quota_items, ';');
            std::vector<std::string> row = {"report",
                                            std::to_string(rep.alphabet_size),
                                            std::to_string(rep.k_total),
                                            quota_cell,
                                            std::to_string(rep.pairs_checked),
                                            std::to_string(rep.ineq2_violating_pairs),
                                            std::to_string(rep.theorem_violation_count),
                                            std::to_string(rep.witness_failure_count),
                                            std::to_string(rep.ineq1_violation_count),
                                            std::to_string(rep.cover_bound_violation_count),
                                            rep.budget_exceeded ? "true" : "false",
                                            std::to_string(rep.required_pairs),
                                            ""};
            row.insert(row.end(), kRecordColumns.size(), "");
            write_csv_row(out.stream(), row);
            const qmv::Quota quota = qmv::validate_quota(alphabet, rep.quota_counts);
            auto emit = [&](const char* kind, const std::vector<qmv::ViolationRecord>& list) {
                for (const auto& rec : list) {
                    std::vector<std::string> vrow = {"violation",
                                                     std::to_string(rep.alphabet_size),
                                                     std::to_string(rep.k_total),
                                                     quota_cell,
                                                     "", "", "", "", "", "", "", "",
                                                     kind};
                    auto cells = record_cells(alphabet, quota, rec);
                    vrow.insert(vrow.end(), cells.begin(), cells.end());
                    write_csv_row(out.stream(), vrow);
                }
            };
            emit("theorem", rep.theorem_violations);
            emit("witness_failure", rep.witness_failures);
            emit("ineq1", rep.ineq1_violations);
            emit("cover_bound", rep.cover_bound_violations);
        }
    } else {
        for (const auto& rep : reports) {
            std::ostream& os = out.stream();
            std::vector<std::string> quota_items;
            for (int c : rep.quota_counts)
                quota_items.push_back(std::to_string(c));
            os << "alphabet " << rep.alphabet_size << ", K " << rep.k_total << ", quota ("
               << join(quota_items, ',') << "): " << rep.pairs_checked << " pairs, "
               << rep.theorem_violation_count << " theorem violations, "
               << rep.witness_failure_count << " witness failures, "
               << rep.ineq1_violation_count << " bound-(1) violations, "
               << rep.cover_bound_violation_count << " cover-bound violations";
            if (args.timings)
                os << " [" << rep.elapsed_seconds << "s]";
            os << "\n";
        }
    }

    for (const auto& rep : reports)
        if (rep.theorem_violation_count > 0 || rep.witness_failure_count > 0 ||
            rep.cover_bound_violation_count > 0)
            return kExitFalsified;
    return kExitVerified;
}

int run_search(const SweepArgs& args, const std::string& format, Output& out) {
    const qmv::Alphabet alphabet = make_alphabet(args.alphabet_csv, args.alphabet_size);
    const std::vector<qmv::Quota> quotas = select_quotas(alphabet, args);
    const qmv::VerifyOptions options = sweep_options(args);

    for (const qmv::Quota& quota : quotas) {
        auto pairs = qmv::pair_count(alphabet, quota);
        if (!pairs || *pairs > options.budget)
            throw qmv::BudgetExceeded(
                "quota (" + labels_cell(quota.counts()) + ") needs " +
                    (pairs ? std::to_string(*pairs) : std::string("> 2^63")) +
                    " pairs but the budget is " + std::to_string(options.budget),
                pairs ? *pairs : -1, options.budget);
    }

    long long total = 0;
    bool wrote_header = false;
    for (const qmv::Quota& quota : quotas) {
        qmv::ViolationScan scan = qmv::search_ineq1_violations(alphabet, quota, options);
        total += scan.total;
        if (format == "json") {
            for (const auto& rec : scan.records)
                out.stream() << record_json(alphabet, quota, rec).dump() << '\n';
        } else if (format == "csv") {
            if (!wrote_header) {
                write_csv_row(out.stream(), kRecordColumns);
                wrote_header = true;
            }
            for (const auto& rec : scan.records)
                write_csv_row(out.stream(), record_cells(alphabet, quota, rec));
        } else {
            for (const auto& rec : scan.records) {
                out.stream() << symbols_cell(alphabet, rec.profile.entries) << " -> "
                             << symbols_cell(alphabet, rec.message.entries) << ": mismatch "
                             << rec.mismatch << ", deviation " << rec.deviation
                             << ", non-cyclic, bound (1) violated\n";
            }
        }
    }
    return total > 0 ? kExitVerified : kExitNotFound;
}

// ---- witness ----------------------------------------------------------------

int run_witness(const CheckArgs& args, const std::string& format, Output& out) {
    const qmv::Alphabet alphabet = make_alphabet(args.alphabet_csv, args.alphabet_size);
    const qmv::Quota quota = make_quota(alphabet, args.quota_csv);
    const qmv::Profile profile = make_profile(alphabet, quota, args.profile_csv);
    const qmv::Message message =
        qmv::to_message(quota, qmv::Profile{qmv::parse_symbol_list(alphabet, args.message_csv)});

    std::optional<qmv::CyclicityWitness> witness;
    if (!qmv::check_inequality2(profile, message, quota))
        witness = qmv::construct_witness_from_violation(alphabet, profile, message, quota);
    else if (qmv::is_cyclic(alphabet, profile, message))
        witness = qmv::extract_witness(alphabet, profile, message);

    if (!witness) {
        if (format == "json") {
            out.stream() << json{{"cyclic", false}}.dump() << '\n';
        } else if (format == "csv") {
            write_csv_row(out.stream(), {"cyclic"});
            write_csv_row(out.stream(), {"false"});
        } else {
            out.stream() << "not cyclic\n";
        }
        return kExitNotFound;
    }

    const bool valid = qmv::validate_witness(profile, message, *witness);
    if (format == "json") {
        json j;
        j["tau"] = witness->tau;
        j["valid"] = valid;
        out.stream() << j.dump() << '\n';
    } else if (format == "csv") {
        write_csv_row(out.stream(), {"tau", "valid"});
        write_csv_row(out.stream(), {labels_cell(witness->tau), valid ? "true" : "false"});
    } else {
        out.stream() << "tau: " << labels_cell(witness->tau) << (valid ? " (valid)" : " (INVALID)")
                     << "\n";
    }
    return kExitVerified;
}

// ---- decompose ---------------------------------------------------------------

int run_decompose(const std::string& edges_text, const std::string& format, Output& out) {
    std::vector<std::string> names;
    auto symbol_index = [&](const std::string& name) {
        if (name.empty())
            throw qmv::Error("empty vertex name in edge list");
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == name)
                return static_cast<int>(i);
        names.push_back(name);
        return static_cast<int>(names.size()) - 1;
    };
    std::vector<qmv::Edge> edges;
    for (const std::string& item : split(edges_text, ',')) {
        size_t colon = item.find(':');
        size_t arrow = item.find('>');
        if (colon == std::string::npos || arrow == std::string::npos || arrow < colon)
            throw qmv::Error("edge must look like label:tail>head, got '" + item + "'");
        int label = parse_int(item.substr(0, colon), "edge label");
        int tail = symbol_index(item.substr(colon + 1, arrow - colon - 1));
        int head = symbol_index(item.substr(arrow + 1));
        edges.push_back(qmv::Edge{label, tail, head});
    }
    if (edges.empty())
        throw qmv::Error("empty edge list");

    const auto cycles =
        qmv::decompose_cycles(qmv::make_report_graph(static_cast<int>(names.size()), edges));

    if (format == "json") {
        json arr = json::array();
        for (const auto& cycle : cycles)
            arr.push_back(cycle.labels);
        out.stream() << json{{"cycles", arr}}.dump() << '\n';
    } else if (format == "csv") {
        write_csv_row(out.stream(), {"cycle_index", "labels"});
        for (size_t i = 0; i < cycles.size(); ++i)
            write_csv_row(out.stream(), {std::to_string(i), labels_cell(cycles[i].labels)});
    } else {
        for (const auto& cycle : cycles)
            out.stream() << labels_cell(cycle.labels) << "\n";
    }
    return kExitVerified;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quota mechanism verifier"};
    app.require_subcommand(1);
    app.fallthrough();  // lets --format / --out sit after the subcommand too

    std::string format = "json";
    Output out;
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
    app.add_option("--out", out.path, "write output to this file instead of stdout");

    CheckArgs check_args;
    CLI::App* check = app.add_subcommand("check", "evaluate both bounds and cyclicity for a pair");
    check->add_option("--alphabet", check_args.alphabet_csv, "comma-separated symbol names");
    check->add_option("--alphabet-size", check_args.alphabet_size, "generated alphabet size");
    check->add_option("--quota", check_args.quota_csv, "comma-separated quota counts")->required();
    check->add_option("--profile", check_args.profile_csv, "true signals, comma-separated")
        ->required();
    check->add_option("--message", check_args.message_csv, "reported signals, comma-separated")
        ->required();

    SweepArgs verify_args;
    CLI::App* verify = app.add_subcommand("verify", "exhaustively certify the corrected bound");
    verify->add_option("--alphabet", verify_args.alphabet_csv, "comma-separated symbol names");
    verify->add_option("--alphabet-size", verify_args.alphabet_size, "generated alphabet size");
    verify->add_option("--k", verify_args.k_total, "number of tasks K");
    verify->add_option("--quota", verify_args.quota_csv, "single quota to verify");
    verify->add_flag("--all-quotas", verify_args.all_quotas, "verify every quota at K");
    verify->add_option("--budget", verify_args.budget, "max pairs (default 1e9, env QMV_BUDGET)");
    verify->add_option("--workers", verify_args.workers, "worker threads");
    verify->add_option("--cap", verify_args.record_cap, "stored records per violation list");
    verify->add_flag("--timings", verify_args.timings, "include elapsed times in output");

    SweepArgs search_args;
    CLI::App* search =
        app.add_subcommand("search", "list non-cyclic pairs violating bound (1)");
    search->add_option("--alphabet", search_args.alphabet_csv, "comma-separated symbol names");
    search->add_option("--alphabet-size", search_args.alphabet_size, "generated alphabet size");
    search->add_option("--k", search_args.k_total, "number of tasks K");
    search->add_option("--quota", search_args.quota_csv, "single quota to search");
    search->add_flag("--all-quotas", search_args.all_quotas, "search every quota at K");
    search->add_option("--budget", search_args.budget, "max pairs (default 1e9, env QMV_BUDGET)");
    search->add_option("--workers", search_args.workers, "worker threads");
    search->add_option("--cap", search_args.record_cap, "stored records per quota");

    CheckArgs witness_args;
    CLI::App* witness = app.add_subcommand("witness", "produce a cyclicity witness for a pair");
    witness->add_option("--alphabet", witness_args.alphabet_csv, "comma-separated symbol names");
    witness->add_option("--alphabet-size", witness_args.alphabet_size, "generated alphabet size");
    witness->add_option("--quota", witness_args.quota_csv, "comma-separated quota counts")
        ->required();
    witness->add_option("--profile", witness_args.profile_csv, "true signals, comma-separated")
        ->required();
    witness->add_option("--message", witness_args.message_csv, "reported signals, comma-separated")
        ->required();

    std::string edges_text;
    CLI::App* decompose =
        app.add_subcommand("decompose", "edge-disjoint cycle decomposition of a balanced graph");
    decompose->add_option("edges", edges_text, "edges as label:tail>head, comma-separated")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*check)
            return run_check(check_args, format, out);
        if (*verify)
            return run_verify(verify_args, format, out);
        if (*search)
            return run_search(search_args, format, out);
        if (*witness)
            return run_witness(witness_args, format, out);
        if (*decompose)
            return run_decompose(edges_text, format, out);
    } catch (const qmv::CoverBoundBreach& e) {
        std::cerr << "error: CoverBoundBreach: " << e.what() << "\n";
        return kExitFalsified;
    } catch (const qmv::Error& e) {
        std::cerr << "error: " << error_kind(e) << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
