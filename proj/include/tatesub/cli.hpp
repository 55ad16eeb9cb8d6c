#pragma once

#include "tatesub/power.hpp"
#include "tatesub/qseries.hpp"
#include "tatesub/subgroups.hpp"
#include "tatesub/tate_series.hpp"
#include "tatesub/torsion.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tatesub::cli {

inline constexpr long kDefaultSeriesOrder = 20;
inline constexpr long kDefaultBound = 24;

inline void print_usage(std::ostream& err) {
    err << "usage: tatesub <command> [arguments] [flags]\n"
        << "\n"
        << "commands:\n"
        << "  series <kind...>   q-expansions; kinds: a4 a6 disc eta24 j\n"
        << "  torsion <N>        the N^2 torsion points and their pairing matrix\n"
        << "  subgroups <N>      classification of the sigma(N) order-N subgroups\n"
        << "  pullback <N>       psi* tables and formula-vs-pointwise comparison\n"
        << "  verify <Nmax>      full invariant suite for all N <= Nmax\n"
        << "\n"
        << "flags:\n"
        << "  --order <M>   series truncation order (default " << kDefaultSeriesOrder
        << ", minimum 2)\n"
        << "  --max <B>     bound for torsion/subgroups N (default " << kDefaultBound << ")\n"
        << "  --json        machine-readable report instead of text\n"
        << "\n"
        << "exit codes: 0 success, 1 verification failure, 2 usage error\n";
}

struct ParsedArgs {
    std::string command;
    std::vector<std::string> positional;
    std::optional<long> order;
    std::optional<long> max;
    bool json = false;
};

inline bool parse_long(const std::string& s, long& out) {
    if (s.empty()) return false;
    size_t pos = 0;
    try {
        out = std::stol(s, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == s.size();
}

/// Returns the parsed arguments, or an error message for usage problems.
inline std::optional<std::string> parse_args(const std::vector<std::string>& args,
                                             ParsedArgs& parsed) {
    if (args.empty()) return "missing command";
    parsed.command = args[0];
    for (size_t i = 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--json") {
            parsed.json = true;
            continue;
        }
        if (a == "--order" || a == "--max") {
            if (i + 1 == args.size()) return a + " requires a value";
            long v = 0;
            if (!parse_long(args[++i], v)) return a + " requires an integer, got '" + args[i] + "'";
            (a == "--order" ? parsed.order : parsed.max) = v;
            continue;
        }
        if (a.rfind("--", 0) == 0) return "unknown flag '" + a + "'";
        parsed.positional.push_back(a);
    }
    return std::nullopt;
}

/// Sign-aware one-line rendering: "-5*q - 45*q^2 - 140*q^3",
/// "q^-1 + 744 + 196884*q".
inline std::string series_text(const QSeries& s) {
    if (s.coefficients().empty()) return "0";
    std::string outs;
    for (const auto& [e, c] : s.coefficients()) {
        Rat mag = c < 0 ? Rat(-c) : c;
        std::string term;
        if (e == 0) {
            term = rat_str(mag);
        } else {
            if (mag != 1) term = rat_str(mag) + "*";
            term += "q";
            if (e != 1) term += "^" + std::to_string(e);
        }
        if (outs.empty()) {
            outs = (c < 0 ? "-" : "") + term;
        } else {
            outs += (c < 0 ? " - " : " + ") + term;
        }
    }
    return outs;
}

inline nlohmann::ordered_json make_report(const std::string& command,
                                          nlohmann::ordered_json parameters,
                                          nlohmann::ordered_json payload,
                                          const std::string& status) {
    nlohmann::ordered_json report;
    report["command"] = command;
    report["parameters"] = std::move(parameters);
    report["payload"] = std::move(payload);
    report["status"] = status;
    return report;
}

inline void emit_json(std::ostream& out, const nlohmann::ordered_json& report) {
    out << report.dump(2) << "\n";
}

// --- series ----------------------------------------------------------------

inline int cmd_series(const ParsedArgs& args, std::ostream& out, std::ostream& err) {
    static const std::vector<std::string> kinds = {"a4", "a6", "disc", "eta24", "j"};
    if (args.positional.empty()) {
        err << "error: series needs at least one kind\n";
        print_usage(err);
        return 2;
    }
    long order = args.order.value_or(kDefaultSeriesOrder);
    if (order < 2) {
        err << "error: --order must be at least 2\n";
        print_usage(err);
        return 2;
    }
    for (const auto& kind : args.positional) {
        if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) {
            err << "error: unknown series kind '" << kind << "'\n";
            print_usage(err);
            return 2;
        }
    }

    auto compute = [order](const std::string& kind) {
        if (kind == "a4") return tate_a4(order);
        if (kind == "a6") return tate_a6(order);
        if (kind == "disc") return discriminant(order);
        if (kind == "eta24") return eta_product_24(order);
        return j_invariant(order);
    };

    if (args.json) {
        nlohmann::ordered_json payload;
        for (const auto& kind : args.positional) payload[kind] = compute(kind).to_json();
        emit_json(out, make_report("series",
                                   {{"kinds", args.positional}, {"order", order}},
                                   std::move(payload), "ok"));
    } else {
        for (const auto& kind : args.positional) out << series_text(compute(kind)) << "\n";
    }
    return 0;
}

// --- torsion ---------------------------------------------------------------

inline std::vector<std::vector<long>> pairing_matrix(long N,
                                                     const std::vector<TatePoint>& pts) {
    std::vector<std::vector<long>> matrix;
    for (const auto& p : pts) {
        std::vector<long> row;
        for (const auto& r : pts) {
            row.push_back(rat_to_long(Rat(N) * weil_pairing(p, r, N).root_exponent()));
        }
        matrix.push_back(std::move(row));
    }
    return matrix;
}

inline int cmd_torsion(const ParsedArgs& args, std::ostream& out, std::ostream& err) {
    long N = 0;
    long bound = args.max.value_or(kDefaultBound);
    if (args.positional.size() != 1 || !parse_long(args.positional[0], N) || N < 1) {
        err << "error: torsion needs one positive integer N\n";
        print_usage(err);
        return 2;
    }
    if (N > bound) {
        err << "error: N = " << N << " exceeds the bound " << bound << " (raise with --max)\n";
        print_usage(err);
        return 2;
    }

    std::vector<TatePoint> pts = enumerate_torsion(N, CycloQUnit::q_unit());
    std::vector<std::vector<long>> matrix = pairing_matrix(N, pts);

    if (args.json) {
        nlohmann::ordered_json payload;
        payload["N"] = N;
        auto arr = nlohmann::ordered_json::array();
        for (const auto& p : pts) arr.push_back(p.to_json());
        payload["points"] = std::move(arr);
        payload["pairing"] = matrix;
        emit_json(out, make_report("torsion", {{"N", N}, {"max", bound}}, std::move(payload),
                                   "ok"));
    } else {
        out << "torsion N=" << N << ": " << pts.size() << " points\n";
        for (const auto& p : pts) out << p.str() << "\n";
        out << "pairing matrix (exponents of zeta_" << N << "):\n";
        for (const auto& row : matrix) {
            for (size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i];
            out << "\n";
        }
    }
    return 0;
}

// --- subgroups -------------------------------------------------------------

inline std::vector<SubgroupRecord> classified_records(long N) {
    std::vector<SubgroupRecord> records = enumerate_subgroups(N);
    for (auto& rec : records) {
        Classification cls = classify(rec.points, N);
        rec.d = cls.d;
        rec.e = cls.e;
        rec.q_prime = cls.q_prime;
    }
    std::sort(records.begin(), records.end(), [](const SubgroupRecord& a, const SubgroupRecord& b) {
        if (a.d != b.d) return a.d < b.d;
        return a.q_prime.root_exponent() < b.q_prime.root_exponent();
    });
    return records;
}

inline int cmd_subgroups(const ParsedArgs& args, std::ostream& out, std::ostream& err) {
    long N = 0;
    long bound = args.max.value_or(kDefaultBound);
    if (args.positional.size() != 1 || !parse_long(args.positional[0], N) || N < 1) {
        err << "error: subgroups needs one positive integer N\n";
        print_usage(err);
        return 2;
    }
    if (N > bound) {
        err << "error: N = " << N << " exceeds the bound " << bound << " (raise with --max)\n";
        print_usage(err);
        return 2;
    }

    std::vector<SubgroupRecord> records = classified_records(N);
    BijectionCertificate cert = verify_universal_bijection(N);
    std::string status = cert.pass ? "pass" : "fail";

    if (args.json) {
        nlohmann::ordered_json payload;
        payload["N"] = N;
        payload["sigma"] = rat_to_long(Rat(divisor_sum(N)));
        auto arr = nlohmann::ordered_json::array();
        for (const auto& rec : records) arr.push_back(rec.to_json());
        payload["records"] = std::move(arr);
        payload["roundtrip"] = cert.to_json()["roundtrip"];
        emit_json(out, make_report("subgroups", {{"N", N}, {"max", bound}}, std::move(payload),
                                   status));
    } else {
        out << "subgroups N=" << N << ": sigma=" << records.size() << "\n";
        for (const auto& rec : records) {
            out << "(d=" << rec.d << ", e=" << rec.e << ") q' = " << rec.q_prime.str()
                << " hermite=[[" << rec.hermite[0][0] << "," << rec.hermite[0][1] << "],[0,"
                << rec.hermite[1][1] << "]]\n";
        }
        out << "roundtrip: " << (cert.pass ? "pass" : "FAIL (" + cert.first_failure + ")")
            << "\n";
    }
    return cert.pass ? 0 : 1;
}

// --- pullback --------------------------------------------------------------

inline int cmd_pullback(const ParsedArgs& args, std::ostream& out, std::ostream& err) {
    long N = 0;
    if (args.positional.size() != 1 || !parse_long(args.positional[0], N) || N < 1) {
        err << "error: pullback needs one positive integer N\n";
        print_usage(err);
        return 2;
    }

    ComparisonReport comparison = compare_formula_vs_pointwise(N);
    PsiStarCertificate cert = verify_psi_star_hom(N);
    bool qprime_ok = qprime_image_check(N);
    bool pass = comparison.match() && cert.pass && qprime_ok;

    std::vector<PullbackTable> tables;
    for (auto [d, e] : divisor_pairs(N)) {
        for (long k = 0; k < N; ++k) tables.push_back(pullback_xk_pointwise(N, d, e, k));
    }

    if (args.json) {
        nlohmann::ordered_json payload;
        payload["N"] = N;
        auto arr = nlohmann::ordered_json::array();
        for (const auto& t : tables) arr.push_back(t.to_json());
        payload["tables"] = std::move(arr);
        payload["comparison"] = comparison.to_json();
        payload["psi_star"] = cert.to_json();
        payload["qprime_image"] = qprime_ok;
        emit_json(out, make_report("pullback", {{"N", N}}, std::move(payload),
                                   pass ? "pass" : "fail"));
    } else {
        out << "pullback N=" << N << ": " << tables.size() << " tables, "
            << (comparison.match() ? "match" : "MISMATCH") << "\n";
        for (const auto& t : tables) {
            out << "(d=" << t.d << ", e=" << t.e << ") k=" << t.k << ":";
            bool all_zero = true;
            for (long m = 0; m < t.N; ++m) {
                const auto& entry = t.entries[static_cast<size_t>(m)];
                if (!entry) continue;
                out << " [m=" << m << "] " << entry->str() << ";";
                all_zero = false;
            }
            if (all_zero) out << " 0";
            out << "\n";
        }
        for (const auto& d : comparison.discrepancies) out << "discrepancy: " << d << "\n";
        out << "psi*: " << (cert.pass ? "pass" : "FAIL (" + cert.first_failure + ")") << " ("
            << cert.homs_checked << " homs, " << cert.killed_levels << " killed levels)\n";
        out << "q -> q': " << (qprime_ok ? "pass" : "FAIL") << "\n";
    }
    return pass ? 0 : 1;
}

// --- verify ----------------------------------------------------------------

inline int cmd_verify(const ParsedArgs& args, std::ostream& out, std::ostream& err) {
    long nmax = 0;
    if (args.positional.size() != 1 || !parse_long(args.positional[0], nmax) || nmax < 1) {
        err << "error: verify needs one positive integer Nmax\n";
        print_usage(err);
        return 2;
    }

    bool all_pass = true;
    auto sections = nlohmann::ordered_json::array();
    std::vector<std::string> lines;
    for (long N = 1; N <= nmax; ++N) {
        BijectionCertificate bij = verify_universal_bijection(N);
        TorsionCertificate tor = verify_torsion_suite(N);
        ComparisonReport cmp = compare_formula_vs_pointwise(N);
        PsiStarCertificate psi = verify_psi_star_hom(N);
        bool qprime_ok = qprime_image_check(N);
        Int sigma = divisor_sum(N);
        bool ranks_ok = build_O_TN(N).total_rank() == Int(N) * N &&
                        build_O_Sub(N).total_rank() == sigma;
        bool section_pass =
            bij.pass && tor.pass && cmp.match() && psi.pass && qprime_ok && ranks_ok;
        all_pass = all_pass && section_pass;

        nlohmann::ordered_json sec;
        sec["N"] = N;
        sec["sigma"] = rat_to_long(Rat(sigma));
        sec["subgroups"] = bij.subgroup_count;
        sec["roundtrip"] = bij.to_json()["roundtrip"];
        sec["torsion_points"] = tor.points;
        sec["torsion"] = tor.pass ? "pass" : ("fail: " + tor.first_failure);
        sec["pullback_tables"] = cmp.tables;
        sec["pullback"] = cmp.match() ? "match" : "mismatch";
        sec["psi_star_homs"] = psi.homs_checked;
        sec["psi_star"] = psi.pass ? "pass" : ("fail: " + psi.first_failure);
        sec["qprime_image"] = qprime_ok;
        sec["rank_O_TN"] = N * N;
        sec["rank_O_Sub"] = rat_to_long(Rat(sigma));
        sec["ranks"] = ranks_ok ? "pass" : "fail";
        sections.push_back(std::move(sec));

        lines.push_back("N=" + std::to_string(N) + ": sigma=" + rat_str(Rat(sigma)) +
                        " roundtrip=" + (bij.pass ? "pass" : "FAIL") +
                        " torsion=" + (tor.pass ? "pass" : "FAIL") +
                        " pullback=" + (cmp.match() ? "match" : "MISMATCH") +
                        " psi*=" + (psi.pass ? "pass" : "FAIL") +
                        " qprime=" + (qprime_ok ? "pass" : "FAIL") +
                        " ranks=" + (ranks_ok ? "pass" : "FAIL"));
    }

    if (args.json) {
        nlohmann::ordered_json payload;
        payload["nmax"] = nmax;
        payload["sections"] = std::move(sections);
        emit_json(out, make_report("verify", {{"nmax", nmax}}, std::move(payload),
                                   all_pass ? "pass" : "fail"));
    } else {
        for (const auto& line : lines) out << line << "\n";
        out << "verify: " << (all_pass ? "PASS" : "FAIL") << " (" << nmax << " sections)\n";
    }
    return all_pass ? 0 : 1;
}

// --- dispatch --------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    ParsedArgs parsed;
    if (auto problem = parse_args(args, parsed)) {
        err << "error: " << *problem << "\n";
        print_usage(err);
        return 2;
    }

    if (parsed.order && parsed.command != "series") {
        err << "error: --order only applies to series\n";
        print_usage(err);
        return 2;
    }
    if (parsed.max && parsed.command != "torsion" && parsed.command != "subgroups") {
        err << "error: --max only applies to torsion and subgroups\n";
        print_usage(err);
        return 2;
    }

    try {
        if (parsed.command == "series") return cmd_series(parsed, out, err);
        if (parsed.command == "torsion") return cmd_torsion(parsed, out, err);
        if (parsed.command == "subgroups") return cmd_subgroups(parsed, out, err);
        if (parsed.command == "pullback") return cmd_pullback(parsed, out, err);
        if (parsed.command == "verify") return cmd_verify(parsed, out, err);
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return 1;
    }

    err << "error: unknown command '" << parsed.command << "'\n";
    print_usage(err);
    return 2;
}

}  // namespace tatesub::cli
