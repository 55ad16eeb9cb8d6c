#pragma once

#include "tatesub/rational.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <stdexcept>
#include <utility>

namespace tatesub {

/// Truncated Laurent series in q with exact rational coefficients.
///
/// A series carries a truncation order T: coefficients are known exactly for
/// every exponent < T, and any exponent >= T is unknown. Only nonzero
/// coefficients are stored. The value is immutable after construction; all
/// arithmetic returns new series whose truncation accounts for valuation
/// shifts (min of the operands' orders for sums, shifted for products and
/// inverses).
class QSeries {
public:
    explicit QSeries(long truncation) : trunc_(truncation) {}

    static QSeries zero(long truncation) { return QSeries(truncation); }

    static QSeries one(long truncation) { return monomial(1, 0, truncation); }

    static QSeries monomial(Rat coeff, long exponent, long truncation) {
        QSeries s(truncation);
        if (coeff != 0 && exponent < truncation) s.coeffs_.emplace(exponent, std::move(coeff));
        return s;
    }

    long truncation() const { return trunc_; }
    bool is_zero() const { return coeffs_.empty(); }

    /// Smallest stored exponent; equals truncation() for a zero series.
    long lowest_exponent() const {
        return coeffs_.empty() ? trunc_ : coeffs_.begin()->first;
    }

    const std::map<long, Rat>& coefficients() const { return coeffs_; }

    /// Coefficient at q^e. Throws if e lies beyond the known range.
    Rat coeff(long e) const {
        if (e >= trunc_) {
            throw std::out_of_range("QSeries::coeff: exponent " + std::to_string(e) +
                                    " not below truncation " + std::to_string(trunc_));
        }
        auto it = coeffs_.find(e);
        return it == coeffs_.end() ? Rat(0) : it->second;
    }

    QSeries operator-() const {
        QSeries r(trunc_);
        for (const auto& [e, c] : coeffs_) r.coeffs_.emplace(e, -c);
        return r;
    }

    friend QSeries operator+(const QSeries& a, const QSeries& b) {
        QSeries r(std::min(a.trunc_, b.trunc_));
        for (const auto& [e, c] : a.coeffs_) r.add_term(e, c);
        for (const auto& [e, c] : b.coeffs_) r.add_term(e, c);
        return r;
    }

    friend QSeries operator-(const QSeries& a, const QSeries& b) { return a + (-b); }

    friend QSeries operator*(const QSeries& a, const QSeries& b) {
        // Product coefficient at n is known iff every contributing pair is,
        // which holds below min(Ta + val(b), Tb + val(a)).
        long ta = a.trunc_ + b.lowest_exponent();
        long tb = b.trunc_ + a.lowest_exponent();
        QSeries r(std::min(ta, tb));
        for (const auto& [ea, ca] : a.coeffs_)
            for (const auto& [eb, cb] : b.coeffs_) r.add_term(ea + eb, ca * cb);
        return r;
    }

    friend QSeries operator*(const Rat& c, const QSeries& a) {
        QSeries r(a.trunc_);
        if (c == 0) return r;
        for (const auto& [e, cc] : a.coeffs_) r.coeffs_.emplace(e, c * cc);
        return r;
    }

    /// Multiplicative inverse. The input must be a unit, i.e. nonzero to its
    /// truncation; the result has valuation -val(a) and truncation T - 2*val(a).
    QSeries inverted() const {
        if (coeffs_.empty()) throw std::domain_error("QSeries::inverted: series is zero to its truncation");
        const long v = lowest_exponent();
        const Rat lead = coeffs_.begin()->second;
        const long n = trunc_ - v;  // known length of the unit power-series part
        // u = a / (lead * q^v) has constant term 1; invert by the standard
        // recursion b_0 = 1, b_m = -sum_{i=1..m} u_i b_{m-i}.
        std::map<long, Rat> u;
        for (const auto& [e, c] : coeffs_) u.emplace(e - v, c / lead);
        std::map<long, Rat> inv;
        inv.emplace(0, 1);
        for (long m = 1; m < n; ++m) {
            Rat s = 0;
            for (const auto& [i, ui] : u) {
                if (i < 1 || i > m) continue;
                auto it = inv.find(m - i);
                if (it != inv.end()) s += ui * it->second;
            }
            if (s != 0) inv.emplace(m, -s);
        }
        QSeries r(trunc_ - 2 * v);
        for (const auto& [e, c] : inv) r.add_term(e - v, c / lead);
        return r;
    }

    /// Same series with the truncation lowered to T (drops higher terms).
    QSeries truncated(long T) const {
        if (T > trunc_) {
            throw std::domain_error("QSeries::truncated: cannot raise truncation");
        }
        QSeries r(T);
        for (const auto& [e, c] : coeffs_) {
            if (e < T) r.coeffs_.emplace(e, c);
        }
        return r;
    }

    friend bool operator==(const QSeries& a, const QSeries& b) {
        return a.trunc_ == b.trunc_ && a.coeffs_ == b.coeffs_;
    }

    /// Coefficientwise agreement on the shared known range.
    friend bool agree(const QSeries& a, const QSeries& b) {
        long T = std::min(a.trunc_, b.trunc_);
        for (const auto& [e, c] : a.coeffs_)
            if (e < T && b.coeff(e) != c) return false;
        for (const auto& [e, c] : b.coeffs_)
            if (e < T && a.coeff(e) != c) return false;
        return true;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["lowest"] = lowest_exponent();
        j["truncation"] = trunc_;
        auto arr = nlohmann::ordered_json::array();
        for (const auto& [e, c] : coeffs_) {
            arr.push_back(nlohmann::ordered_json::array({e, rat_str(c)}));
        }
        j["coeffs"] = std::move(arr);
        return j;
    }

private:
    void add_term(long e, const Rat& c) {
        if (e >= trunc_ || c == 0) return;
        auto [it, inserted] = coeffs_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) coeffs_.erase(it);
        }
    }

    long trunc_;
    std::map<long, Rat> coeffs_;
};

inline QSeries pow(const QSeries& a, unsigned n) {
    QSeries r = QSeries::one(a.truncation());
    for (unsigned i = 0; i < n; ++i) r = r * a;
    return r;
}

}  // namespace tatesub
