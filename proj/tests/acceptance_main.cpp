// Acceptance harness: one [PASS]/[FAIL] line per criterion, exit code equals
// the number of failed criteria.  All arithmetic is exact; the budgets are
// wall-clock upper bounds enforced per criterion.

#include "tatesub/cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace tatesub;

namespace {

constexpr long kSigma[13] = {0, 1, 3, 4, 7, 6, 12, 8, 15, 13, 18, 12, 28};

struct Harness {
    int failures = 0;

    void criterion(int index, const std::string& label, double budget_seconds,
                   const std::function<bool(std::string&)>& body) {
        std::string detail;
        auto start = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = body(detail);
        } catch (const std::exception& ex) {
            detail = std::string("exception: ") + ex.what();
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (ok && budget_seconds > 0 && elapsed > budget_seconds) {
            ok = false;
            std::ostringstream b;
            b << "budget " << budget_seconds << " s exceeded";
            detail = b.str();
        }
        if (!ok) ++failures;
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << index << ": " << label << " ["
                  << std::fixed << std::setprecision(2) << elapsed << " s]";
        if (!ok && !detail.empty()) std::cout << " -- " << detail;
        std::cout << "\n";
    }
};

/// Independent cross-check for the subgroup census: close every generator
/// pair under the group law and keep the distinct order-N subgroups.
std::set<std::vector<TatePoint>> subgroups_by_closure(long N) {
    std::vector<TatePoint> pts = enumerate_torsion(N, CycloQUnit::q_unit());
    std::set<std::vector<TatePoint>> found;
    for (const auto& g1 : pts) {
        for (const auto& g2 : pts) {
            std::set<TatePoint> closure;
            TatePoint row = g1.scaled(0);
            for (long i = 0; i < N; ++i) {
                TatePoint cur = row;
                for (long j = 0; j < N; ++j) {
                    closure.insert(cur);
                    cur = point_add(cur, g2);
                }
                row = point_add(row, g1);
            }
            if (static_cast<long>(closure.size()) != N) continue;
            found.emplace(closure.begin(), closure.end());
        }
    }
    return found;
}

}  // namespace

int main() {
    Harness h;

    h.criterion(1, "series identities (disc = eta^24, integral a4/a6, j-expansion)", 5.0,
                [](std::string& detail) {
                    if (!(discriminant(50) == eta_product_24(50))) {
                        detail = "discriminant(50) != eta_product_24(50)";
                        return false;
                    }
                    QSeries a4 = tate_a4(200);
                    QSeries a6 = tate_a6(200);
                    for (const auto& [e, c] : a4.coefficients()) {
                        if (!is_integer(c)) {
                            detail = "a4 coefficient at q^" + std::to_string(e) + " not integral";
                            return false;
                        }
                    }
                    for (const auto& [e, c] : a6.coefficients()) {
                        if (!is_integer(c)) {
                            detail = "a6 coefficient at q^" + std::to_string(e) + " not integral";
                            return false;
                        }
                    }
                    QSeries j = j_invariant(3);
                    if (j.coeff(-1) != 1 || j.coeff(0) != 744 || j.coeff(1) != 196884 ||
                        j.coeff(2) != 21493760) {
                        detail = "j-expansion mismatch";
                        return false;
                    }
                    return true;
                });

    h.criterion(2, "torsion structure and pairing laws for N <= 12", 10.0,
                [](std::string& detail) {
                    for (long N = 1; N <= 12; ++N) {
                        TorsionCertificate cert = verify_torsion_suite(N);
                        if (!cert.pass || cert.points != static_cast<size_t>(N) * N) {
                            detail = "N=" + std::to_string(N) + ": " + cert.first_failure;
                            return false;
                        }
                        std::vector<long> winding_count(static_cast<size_t>(N), 0);
                        for (const auto& p : enumerate_torsion(N, CycloQUnit::q_unit())) {
                            ++winding_count[static_cast<size_t>(b_n(p, N))];
                        }
                        for (long k = 0; k < N; ++k) {
                            if (winding_count[static_cast<size_t>(k)] != N) {
                                detail = "N=" + std::to_string(N) + ": level " +
                                         std::to_string(k) + " has wrong fibre size";
                                return false;
                            }
                        }
                    }
                    return true;
                });

    h.criterion(3, "subgroup census sigma(N), closure cross-check for N <= 8", 0.0,
                [](std::string& detail) {
                    for (long N = 1; N <= 12; ++N) {
                        std::vector<SubgroupRecord> recs = enumerate_subgroups(N);
                        if (static_cast<long>(recs.size()) != kSigma[N]) {
                            detail = "N=" + std::to_string(N) + ": enumerated " +
                                     std::to_string(recs.size()) + " subgroups, expected " +
                                     std::to_string(kSigma[N]);
                            return false;
                        }
                        if (N > 8) continue;
                        std::set<std::vector<TatePoint>> oracle = subgroups_by_closure(N);
                        std::set<std::vector<TatePoint>> enumerated;
                        for (const auto& rec : recs) enumerated.insert(rec.points);
                        if (oracle != enumerated) {
                            detail = "N=" + std::to_string(N) +
                                     ": closure oracle disagrees with enumeration";
                            return false;
                        }
                    }
                    return true;
                });

    h.criterion(4, "universal-property roundtrip for N <= 12", 30.0, [](std::string& detail) {
        for (long N = 1; N <= 12; ++N) {
            BijectionCertificate cert = verify_universal_bijection(N);
            if (!cert.pass) {
                detail = "N=" + std::to_string(N) + ": " + cert.first_failure;
                return false;
            }
            if (cert.subgroup_count != kSigma[N]) {
                detail = "N=" + std::to_string(N) + ": certificate covers " +
                         std::to_string(cert.subgroup_count) + " subgroups";
                return false;
            }
            for (const auto& rec : enumerate_subgroups(N)) {
                Classification cls = classify(rec.points, N);
                std::vector<TatePoint> kernel = kernel_of_psi(N, cls.d, cls.e, cls.q_prime);
                if (kernel != rec.points || static_cast<long>(kernel.size()) != N) {
                    detail = "N=" + std::to_string(N) + ": kernel roundtrip mismatch";
                    return false;
                }
                if (!(cls.q_prime.pow(Int(cls.e)) ==
                      CycloQUnit::q_unit().pow(Int(cls.d)))) {
                    detail = "N=" + std::to_string(N) + ": q'^e != q^d";
                    return false;
                }
            }
        }
        return true;
    });

    h.criterion(5, "power-operation formula vs pointwise oracle, psi* homs, N <= 8", 0.0,
                [](std::string& detail) {
                    for (long N = 1; N <= 8; ++N) {
                        ComparisonReport report = compare_formula_vs_pointwise(N);
                        if (!report.match()) {
                            detail = "N=" + std::to_string(N) + ": " +
                                     (report.discrepancies.empty() ? "mismatch"
                                                                   : report.discrepancies[0]);
                            return false;
                        }
                        PsiStarCertificate cert = verify_psi_star_hom(N);
                        if (!cert.pass) {
                            detail = "N=" + std::to_string(N) + ": " + cert.first_failure;
                            return false;
                        }
                        if (!qprime_image_check(N)) {
                            detail = "N=" + std::to_string(N) + ": q -> q' image check failed";
                            return false;
                        }
                    }
                    return true;
                });

    h.criterion(6, "ring ranks: O_Sub has rank sigma(N), O_T[N] has rank N^2, N <= 12", 0.0,
                [](std::string& detail) {
                    for (long N = 1; N <= 12; ++N) {
                        if (build_O_Sub(N).total_rank() != Int(kSigma[N])) {
                            detail = "N=" + std::to_string(N) + ": O_Sub rank mismatch";
                            return false;
                        }
                        if (build_O_TN(N).total_rank() != Int(N) * N) {
                            detail = "N=" + std::to_string(N) + ": O_T[N] rank mismatch";
                            return false;
                        }
                    }
                    return true;
                });

    h.criterion(7, "determinism: verify 12 --json byte-identical and matches golden file", 0.0,
                [](std::string& detail) {
                    const std::vector<std::string> args = {"verify", "12", "--json"};
                    std::ostringstream out1, err1, out2, err2;
                    int code1 = cli::run(args, out1, err1);
                    int code2 = cli::run(args, out2, err2);
                    if (code1 != 0 || code2 != 0) {
                        detail = "verify 12 exited with code " + std::to_string(code1 ? code1 : code2);
                        return false;
                    }
                    if (out1.str() != out2.str()) {
                        detail = "two runs differ";
                        return false;
                    }
                    std::ifstream golden(std::string(TATESUB_GOLDEN_DIR) + "/verify12.json",
                                         std::ios::binary);
                    if (!golden) {
                        detail = "golden file verify12.json missing";
                        return false;
                    }
                    std::ostringstream filed;
                    filed << golden.rdbuf();
                    if (filed.str() != out1.str()) {
                        detail = "output differs from golden file";
                        return false;
                    }
                    return true;
                });

    std::cout << (h.failures == 0 ? "acceptance: all criteria passed"
                                  : "acceptance: " + std::to_string(h.failures) +
                                        " criterion(s) failed")
              << "\n";
    return h.failures;
}
