#pragma once

#include "tatesub/cyclo.hpp"
#include "tatesub/rational.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tatesub {

// ---------------------------------------------------------------------------
// Reduction convention (normative for the whole library)
//
// Points of the curve with parameter p live in (K* x Q) modulo the relation
//
//     [a, t + 1] = [a * p^{-1}, t],
//
// so lowering t by j multiplies the unit by p^{-j}. Canonical form has
// t in [0, 1). Consequences, all of which downstream modules rely on:
//
//   * [p, 1] = [1, 0]: the parameter is the identity.
//   * N-torsion: N*t in Z and u^N = p^{N*t}; on Tate(q) the canonical
//     N-torsion points are [zeta_N^a * q^{k/N}, k/N] (normal form
//     u = zeta * q^{+t}), so the coordinate at level t = k/N satisfies
//     x_k^N = q^{+k}.
//   * For a subgroup H of order N = d*e with |H ∩ ker b_N| = d, any point
//     h in H at t = 1/e yields q' := u(h)^d with q'^e = q^d exactly, and
//     e*[q', 1/e] reduces to [q'^e * q^{-d}, 0] = [1, 0] on Tate(q^d).
//   * Ker([a, x] -> [a^d, e*x]) has order N, and for the principal root
//     q' = q^{d/e} it is { [mu_d^n * q^{m/e}, m/e] }.
// ---------------------------------------------------------------------------

/// A class [u, t] on the curve with multiplicative parameter curve_param,
/// held in canonical form (t in [0, 1), reduced by the convention above).
class TatePoint {
public:
    TatePoint(CycloQUnit u, Rat t, CycloQUnit curve_param)
        : u_(std::move(u)), t_(std::move(t)), curve_(std::move(curve_param)) {
        Int j = rat_floor(t_);
        if (j != 0) {
            u_ = u_ * curve_.pow(Int(-j));
            t_ = t_ - Rat(j);
        }
    }

    static TatePoint identity(const CycloQUnit& curve_param) {
        return TatePoint(CycloQUnit::one(), 0, curve_param);
    }

    const CycloQUnit& unit() const { return u_; }
    const Rat& winding() const { return t_; }
    const CycloQUnit& curve_param() const { return curve_; }

    bool is_identity() const { return u_.is_one() && t_ == 0; }

    /// N*[u, t] = [u^N * p^{-floor(N t)}..., canonical].
    TatePoint scaled(const Int& n) const { return TatePoint(u_.pow(n), Rat(n) * t_, curve_); }

    TatePoint negated() const { return TatePoint(u_.inverse(), -t_, curve_); }

    /// True iff N*t in Z and u^N = p^{N t}.
    bool is_torsion(long N) const {
        Rat nt = Rat(N) * t_;
        if (!is_integer(nt)) return false;
        return u_.pow(Int(N)) == curve_.pow(nt);
    }

    friend bool operator==(const TatePoint&, const TatePoint&) = default;

    friend bool operator<(const TatePoint& a, const TatePoint& b) {
        if (a.t_ != b.t_) return a.t_ < b.t_;
        return a.u_ < b.u_;
    }

    std::string str() const {
        return "[" + u_.str() + ", " + rat_str(t_) + "]";
    }

    nlohmann::ordered_json to_json() const {
        return {{"root", rat_str(u_.root_exponent())},
                {"qexp", rat_str(u_.q_exponent())},
                {"t", rat_str(t_)}};
    }

private:
    CycloQUnit u_;
    Rat t_;
    CycloQUnit curve_;
};

inline TatePoint point_add(const TatePoint& p, const TatePoint& q) {
    if (p.curve_param() != q.curve_param()) {
        throw std::invalid_argument("point_add: points live on different curves");
    }
    return TatePoint(p.unit() * q.unit(), p.winding() + q.winding(), p.curve_param());
}

/// All N^2 canonical N-torsion points of the curve with the given parameter:
/// for each level k the unit solves u^N = p^k, so u = zeta_N^a * r_k with
/// r_k the canonical N-th root of p^k (exponents divided by N).
inline std::vector<TatePoint> enumerate_torsion(long N, const CycloQUnit& q_param) {
    if (N < 1) throw std::domain_error("enumerate_torsion: N must be >= 1");
    std::vector<TatePoint> pts;
    pts.reserve(static_cast<size_t>(N) * N);
    for (long k = 0; k < N; ++k) {
        CycloQUnit base(q_param.root_exponent() * Rat(k, N), q_param.q_exponent() * Rat(k, N));
        for (long a = 0; a < N; ++a) {
            CycloQUnit u = CycloQUnit::root_of_unity(Rat(a, N)) * base;
            pts.emplace_back(u, Rat(k, N), q_param);
        }
    }
    return pts;
}

inline void require_torsion(const TatePoint& p, long N, const char* who) {
    if (!p.is_torsion(N)) {
        throw std::invalid_argument(std::string(who) + ": point " + p.str() + " is not " +
                                    std::to_string(N) + "-torsion");
    }
}

/// Projection T[N] -> Z/N, [u, t] -> N*t.
inline long b_n(const TatePoint& p, long N) {
    require_torsion(p, N, "b_n");
    return rat_to_long(Rat(N) * p.winding());
}

/// Coordinate function of the level-k component: the unit of the canonical
/// representative when t = k/N, absent otherwise.
inline std::optional<CycloQUnit> char_x(long k, const TatePoint& p, long N) {
    require_torsion(p, N, "char_x");
    if (b_n(p, N) == ((k % N) + N) % N) return p.unit();
    return std::nullopt;
}

/// e_N([u1,t1],[u2,t2]) = u1^{N t2} * u2^{-N t1}. The torsion relations
/// cancel the q-exponents, leaving a value in mu_N.
inline CycloQUnit weil_pairing(const TatePoint& p, const TatePoint& q, long N) {
    require_torsion(p, N, "weil_pairing");
    require_torsion(q, N, "weil_pairing");
    if (p.curve_param() != q.curve_param()) {
        throw std::invalid_argument("weil_pairing: points live on different curves");
    }
    CycloQUnit v = p.unit().pow(Rat(N) * q.winding()) * q.unit().pow(-Rat(N) * p.winding());
    if (v.q_exponent() != 0 || !v.order_divides(N)) {
        throw std::logic_error("weil_pairing: value " + v.str() + " is not in mu_" + std::to_string(N));
    }
    return v;
}

/// Character of (Z x R)/(Z(N,0) + Z(k,1)) given by [a, t] -> (k t - a)/N
/// mod 1, invariant under both lattice generators.
inline Rat lambda_character(long N, long k, const Int& a, const Rat& t) {
    return mod1((Rat(k) * t - Rat(a)) / Rat(N));
}

/// Outcome of the exhaustive point-level checks for one N: group structure,
/// exactness of mu_N -> T[N] -> Z/N, character sign, and the full pairing
/// axioms (bilinear, alternating, nondegenerate, compatible with b_N).
struct TorsionCertificate {
    long N = 0;
    size_t points = 0;
    bool pass = false;
    std::string first_failure;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["N"] = N;
        j["points"] = points;
        j["status"] = pass ? "pass" : ("fail: " + first_failure);
        return j;
    }
};

inline TorsionCertificate verify_torsion_suite(long N) {
    TorsionCertificate cert;
    cert.N = N;
    auto fail = [&cert](std::string msg) {
        if (cert.first_failure.empty()) cert.first_failure = std::move(msg);
    };

    const CycloQUnit Q = CycloQUnit::q_unit();
    std::vector<TatePoint> pts = enumerate_torsion(N, Q);
    cert.points = pts.size();
    std::set<TatePoint> set(pts.begin(), pts.end());
    if (pts.size() != static_cast<size_t>(N) * N || set.size() != pts.size()) {
        fail("expected " + std::to_string(N * N) + " distinct points");
    }

    std::set<TatePoint> mu_copy, b_kernel;
    for (long a = 0; a < N; ++a) {
        mu_copy.insert(TatePoint(CycloQUnit::root_of_unity(Rat(a, N)), 0, Q));
    }
    for (const auto& p : pts) {
        if (!p.is_torsion(N) || !p.scaled(N).is_identity()) {
            fail("point " + p.str() + " is not killed by " + std::to_string(N));
        }
        if (b_n(p, N) == 0) b_kernel.insert(p);
        auto xv = char_x(b_n(p, N), p, N);
        if (!xv || !(xv->pow(Int(N)) == Q.pow(Int(b_n(p, N))))) {
            fail("x_k(P)^N != q^k at " + p.str());
        }
        if (!(weil_pairing(p, p, N) == CycloQUnit::one())) {
            fail("pairing is not alternating at " + p.str());
        }
    }
    if (b_kernel != mu_copy) fail("kernel of b_N differs from the mu_N copy");

    // Index the canonical points and precompute the full pairing matrix and
    // addition table once; the quadratic axioms below are then pure lookups.
    const size_t n_pts = pts.size();
    std::map<TatePoint, size_t> index;
    for (size_t i = 0; i < n_pts; ++i) index.emplace(pts[i], i);

    std::vector<size_t> sum_of(n_pts * n_pts, 0);
    for (size_t i = 0; i < n_pts; ++i) {
        for (size_t j = 0; j < n_pts; ++j) {
            auto it = index.find(point_add(pts[i], pts[j]));
            if (it == index.end()) {
                fail("group law leaves the torsion set");
            } else {
                sum_of[i * n_pts + j] = it->second;
            }
        }
    }

    std::vector<CycloQUnit> pairing(n_pts * n_pts, CycloQUnit::one());
    for (size_t i = 0; i < n_pts; ++i) {
        for (size_t j = 0; j < n_pts; ++j) {
            pairing[i * n_pts + j] = weil_pairing(pts[i], pts[j], N);
        }
    }
    auto at = [&pairing, n_pts](size_t i, size_t j) -> const CycloQUnit& {
        return pairing[i * n_pts + j];
    };

    for (size_t i = 0; i < n_pts; ++i) {
        bool hits = false;
        for (size_t j = 0; j < n_pts; ++j) {
            const CycloQUnit& v = at(i, j);
            if (!v.order_divides(N)) fail("pairing value outside mu_N");
            if (j >= i && !(v == at(j, i).inverse())) fail("pairing is not antisymmetric");
            if (!(v == CycloQUnit::one())) hits = true;
        }
        if (hits == pts[i].is_identity()) fail("pairing degenerate at " + pts[i].str());
    }

    if (N > 1 && cert.first_failure.empty()) {
        // bilinearity against the spanning pair (S, T) in both slots
        size_t si = index.at(TatePoint(CycloQUnit::root_of_unity(Rat(1, N)), 0, Q));
        size_t ti = index.at(TatePoint(Q.pow(Rat(1, N)), Rat(1, N), Q));
        for (size_t i = 0; i < n_pts; ++i) {
            for (size_t j = 0; j < n_pts; ++j) {
                size_t s = sum_of[i * n_pts + j];
                if (!(at(s, si) == at(i, si) * at(j, si)) ||
                    !(at(s, ti) == at(i, ti) * at(j, ti)) ||
                    !(at(si, s) == at(si, i) * at(si, j)) ||
                    !(at(ti, s) == at(ti, i) * at(ti, j))) {
                    fail("pairing is not bilinear at (" + pts[i].str() + ", " + pts[j].str() +
                         ")");
                }
            }
        }
    }

    // e_N(a_N(zeta), y) = zeta^{b_N(y)}
    for (long a = 0; a < N; ++a) {
        CycloQUnit zeta = CycloQUnit::root_of_unity(Rat(a, N));
        size_t zi = index.at(TatePoint(zeta, 0, Q));
        for (size_t j = 0; j < n_pts; ++j) {
            if (!(at(zi, j) == zeta.pow(Int(b_n(pts[j], N))))) {
                fail("compatibility e_N(a_N(x), y) = x^b_N(y) fails");
            }
        }
    }

    cert.pass = cert.first_failure.empty();
    return cert;
}

}  // namespace tatesub
