#pragma once

#include "tatesub/ring.hpp"
#include "tatesub/torsion.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tatesub {

/// An order-N subgroup of the N-torsion together with its classification
/// data (d, e, q') and the Hermite matrix that produced it.
struct SubgroupRecord {
    long N = 0;
    std::vector<TatePoint> points;  // sorted canonical forms
    long d = 0;
    long e = 0;
    CycloQUnit q_prime;
    std::array<std::array<long, 2>, 2> hermite{{{0, 0}, {0, 0}}};

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["d"] = d;
        j["e"] = e;
        j["qprime"] = q_prime.to_json();
        auto pts = nlohmann::ordered_json::array();
        for (const auto& p : points) pts.push_back(p.to_json());
        j["points"] = std::move(pts);
        j["hermite"] = {{hermite[0][0], hermite[0][1]}, {hermite[1][0], hermite[1][1]}};
        return j;
    }
};

inline Int divisor_sum(long N) {
    Int s = 0;
    for (long d = 1; d <= N; ++d)
        if (N % d == 0) s += d;
    return s;
}

/// The canonical N-torsion point for (a, k) in (Z/N)^2: [zeta_N^a q^{k/N}, k/N].
inline TatePoint lattice_point(long N, long a, long k) {
    a = ((a % N) + N) % N;
    k = ((k % N) + N) % N;
    CycloQUnit u = CycloQUnit::root_of_unity(Rat(a, N)) * CycloQUnit(0, Rat(k, N));
    return TatePoint(u, Rat(k, N), CycloQUnit::q_unit());
}

/// All sigma(N) order-N subgroups of T(K)[N] ~ (Z/N)^2, one per index-N
/// sublattice of Z^2 in Hermite form [[a, b], [0, c]] with a*c = N and
/// 0 <= b < c, enumerated lexicographically in (a, b). Classification
/// fields are left unfilled.
inline std::vector<SubgroupRecord> enumerate_subgroups(long N) {
    if (N < 1) throw std::domain_error("enumerate_subgroups: N must be >= 1");
    std::vector<SubgroupRecord> records;
    for (long a = 1; a <= N; ++a) {
        if (N % a != 0) continue;
        long c = N / a;
        for (long b = 0; b < c; ++b) {
            std::set<std::pair<long, long>> span;
            for (long i = 0; i < c; ++i) {        // multiples of row (a, b)
                for (long j = 0; j < a; ++j) {    // multiples of row (0, c)
                    span.emplace(((i * a) % N + N) % N, ((i * b + j * c) % N + N) % N);
                }
            }
            SubgroupRecord rec;
            rec.N = N;
            rec.hermite = {{{a, b}, {0, c}}};
            for (auto [xa, yk] : span) rec.points.push_back(lattice_point(N, xa, yk));
            std::sort(rec.points.begin(), rec.points.end());
            if (rec.points.size() != static_cast<size_t>(N)) {
                throw std::logic_error("enumerate_subgroups: Hermite span has wrong order");
            }
            records.push_back(std::move(rec));
        }
    }
    return records;
}

inline void require_subgroup(const std::vector<TatePoint>& pts, long N, const char* who) {
    if (pts.size() != static_cast<size_t>(N)) {
        throw std::invalid_argument(std::string(who) + ": expected " + std::to_string(N) +
                                    " points, got " + std::to_string(pts.size()));
    }
    std::set<TatePoint> set(pts.begin(), pts.end());
    if (set.size() != pts.size()) throw std::invalid_argument(std::string(who) + ": repeated points");
    for (const auto& p : pts) {
        require_torsion(p, N, who);
        if (!set.count(p.negated())) {
            throw std::invalid_argument(std::string(who) + ": not closed under negation");
        }
        for (const auto& q : pts) {
            if (!set.count(point_add(p, q))) {
                throw std::invalid_argument(std::string(who) + ": not closed under addition");
            }
        }
    }
}

struct Classification {
    long d = 0;
    long e = 0;
    CycloQUnit q_prime;
};

/// Step through the extension structure of H: d counts the points over the
/// trivial winding class, e = N/d, and q' is the d-th power of the unit of
/// any point at winding 1/e (choice-independent: candidates differ by mu_d).
/// For e = 1 the winding-1 representative of the identity gives q' = q^d.
inline Classification classify(const std::vector<TatePoint>& pts, long N) {
    require_subgroup(pts, N, "classify");
    long d = 0;
    for (const auto& p : pts)
        if (p.winding() == 0) ++d;
    if (d == 0 || N % d != 0) throw std::logic_error("classify: bad kernel size " + std::to_string(d));
    long e = N / d;
    Classification cls;
    cls.d = d;
    cls.e = e;
    if (e == 1) {
        cls.q_prime = CycloQUnit(0, d);
        return cls;
    }
    for (const auto& p : pts) {
        if (p.winding() == Rat(1, e)) {
            cls.q_prime = p.unit().pow(Int(d));
            return cls;
        }
    }
    throw std::logic_error("classify: no point at winding 1/e");
}

/// The e admissible parameters for the pair (d, e): zeta_e^j * q^{d/e}.
inline std::vector<CycloQUnit> admissible_q_primes(long d, long e) {
    std::vector<CycloQUnit> qs;
    for (long j = 0; j < e; ++j) qs.emplace_back(Rat(j, e), Rat(d, e));
    return qs;
}

inline void require_compatible(const CycloQUnit& q_prime, const CycloQUnit& base, long d, long e,
                               const char* who) {
    if (!(q_prime.pow(Int(e)) == base.pow(Int(d)))) {
        throw std::invalid_argument(std::string(who) + ": q'^e != q^d for q' = " + q_prime.str());
    }
}

/// The degree-N isogeny [a, x] -> [a^d, e*x] from the curve of P onto the
/// curve with parameter q_prime (requires q_prime^e = p^d).
inline TatePoint isogeny_psi(const TatePoint& p, long d, long e, const CycloQUnit& q_prime) {
    require_compatible(q_prime, p.curve_param(), d, e, "isogeny_psi");
    return TatePoint(p.unit().pow(Int(d)), Rat(e) * p.winding(), q_prime);
}

/// Points of T(K)[N] killed by [a, x] -> [a^d, e*x] onto Tate(q_prime).
inline std::vector<TatePoint> kernel_of_psi(long N, long d, long e, const CycloQUnit& q_prime) {
    if (d * e != N) throw std::invalid_argument("kernel_of_psi: d*e must equal N");
    require_compatible(q_prime, CycloQUnit::q_unit(), d, e, "kernel_of_psi");
    std::vector<TatePoint> kernel;
    for (const auto& p : enumerate_torsion(N, CycloQUnit::q_unit())) {
        if (isogeny_psi(p, d, e, q_prime).is_identity()) kernel.push_back(p);
    }
    std::sort(kernel.begin(), kernel.end());
    return kernel;
}

/// The ring-level leg of the classification: the map
/// Z[q+-][q']/(q'^e - q^d) -> Z[z]/(z^e - 1)[u+-] with q -> u^e and
/// q' -> z^j u^d, where q' = zeta_e^j q^{d/e}. Construction checks
/// well-definedness.
inline RingHom classification_ring_map(long d, long e, const CycloQUnit& q_prime) {
    require_compatible(q_prime, CycloQUnit::q_unit(), d, e, "classification_ring_map");
    Rat j_over_e = q_prime.root_exponent();
    Rat j_exact = j_over_e * e;
    if (!is_integer(j_exact)) {
        throw std::invalid_argument("classification_ring_map: root exponent of q' is not in (1/e)Z");
    }
    long j = rat_to_long(j_exact);
    PresentationPtr src = sub_factor_ring(d, e);
    PresentationPtr dst = cyclo_q_model_ring(e);
    std::map<std::string, RingElement> images;
    images.emplace("q", RingElement::monomial(dst, {0, e}));
    images.emplace("qp", RingElement::monomial(dst, {j, d}));
    return RingHom(src, dst, std::move(images));
}

/// Roundtrip certificate for one N: classify and kernel_of_psi are mutually
/// inverse, every admissible (d, e, q') arises, and the ring-level maps are
/// well defined.
struct BijectionCertificate {
    long N = 0;
    Int sigma_expected;
    size_t subgroup_count = 0;
    bool pass = false;
    std::string first_failure;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["N"] = N;
        j["sigma"] = static_cast<long>(sigma_expected);
        j["subgroups"] = subgroup_count;
        if (pass) {
            j["roundtrip"] = "pass";
        } else {
            j["roundtrip"] = nlohmann::ordered_json{{"fail", first_failure}};
        }
        return j;
    }
};

inline bool same_point_set(const std::vector<TatePoint>& a, const std::vector<TatePoint>& b) {
    return a == b;  // both sorted
}

inline BijectionCertificate verify_universal_bijection(long N) {
    BijectionCertificate cert;
    cert.N = N;
    cert.sigma_expected = divisor_sum(N);

    auto fail = [&cert](std::string msg) {
        if (cert.first_failure.empty()) cert.first_failure = std::move(msg);
    };

    std::vector<SubgroupRecord> records = enumerate_subgroups(N);
    cert.subgroup_count = records.size();
    if (Int(records.size()) != cert.sigma_expected) {
        fail("count " + std::to_string(records.size()) + " != sigma(N)");
    }

    std::set<std::vector<TatePoint>> enumerated;
    for (auto& rec : records) {
        enumerated.insert(rec.points);
        Classification cls = classify(rec.points, N);
        rec.d = cls.d;
        rec.e = cls.e;
        rec.q_prime = cls.q_prime;
        std::vector<TatePoint> back = kernel_of_psi(N, cls.d, cls.e, cls.q_prime);
        if (!same_point_set(back, rec.points)) {
            fail("kernel(classify(H)) != H for Hermite [[" + std::to_string(rec.hermite[0][0]) +
                 "," + std::to_string(rec.hermite[0][1]) + "],[0," +
                 std::to_string(rec.hermite[1][1]) + "]]");
        }
    }
    if (enumerated.size() != records.size()) fail("duplicate subgroups in enumeration");

    // Reverse direction: every admissible triple reconstructs, its kernel is
    // an enumerated subgroup, and kernels exhaust the enumeration.
    std::set<std::vector<TatePoint>> kernels;
    for (auto [d, e] : divisor_pairs(N)) {
        for (const auto& qp : admissible_q_primes(d, e)) {
            std::vector<TatePoint> ker = kernel_of_psi(N, d, e, qp);
            if (ker.size() != static_cast<size_t>(N)) {
                fail("kernel size " + std::to_string(ker.size()) + " != N at (d,e) = (" +
                     std::to_string(d) + "," + std::to_string(e) + ")");
                continue;
            }
            Classification cls = classify(ker, N);
            if (cls.d != d || cls.e != e || !(cls.q_prime == qp)) {
                fail("classify(kernel(" + std::to_string(d) + "," + std::to_string(e) + "," +
                     qp.str() + ")) mismatch");
            }
            if (!enumerated.count(ker)) fail("kernel not among enumerated subgroups");
            kernels.insert(ker);
            try {
                classification_ring_map(d, e, qp);
            } catch (const WellDefinednessError& err) {
                fail(std::string("classification ring map: ") + err.what());
            }
        }
    }
    if (kernels != enumerated) fail("kernels do not exhaust the enumerated subgroups");

    cert.pass = cert.first_failure.empty();
    return cert;
}

}  // namespace tatesub
