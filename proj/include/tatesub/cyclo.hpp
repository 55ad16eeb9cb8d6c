#pragma once

#include "tatesub/rational.hpp"

#include <nlohmann/json.hpp>

#include <compare>
#include <string>

namespace tatesub {

/// A unit zeta * q^beta in the coefficient group K* = mu_infinity x q^Q:
/// zeta = e^{2 pi i r} with r = root_exponent canonical in [0, 1), and
/// beta = q_exponent an exact rational. q itself is transcendental, so
/// u = 1 only when both exponents vanish.
class CycloQUnit {
public:
    CycloQUnit() : root_(0), qexp_(0) {}
    CycloQUnit(Rat root_exponent, Rat q_exponent)
        : root_(mod1(root_exponent)), qexp_(std::move(q_exponent)) {}

    static CycloQUnit one() { return CycloQUnit(); }
    static CycloQUnit q_unit() { return CycloQUnit(0, 1); }
    static CycloQUnit root_of_unity(const Rat& r) { return CycloQUnit(r, 0); }

    const Rat& root_exponent() const { return root_; }
    const Rat& q_exponent() const { return qexp_; }

    bool is_one() const { return root_ == 0 && qexp_ == 0; }

    friend CycloQUnit operator*(const CycloQUnit& a, const CycloQUnit& b) {
        return CycloQUnit(a.root_ + b.root_, a.qexp_ + b.qexp_);
    }

    CycloQUnit inverse() const { return CycloQUnit(-root_, -qexp_); }

    CycloQUnit pow(const Int& n) const { return CycloQUnit(Rat(n) * root_, Rat(n) * qexp_); }
    CycloQUnit pow(const Rat& n) const { return CycloQUnit(n * root_, n * qexp_); }

    /// u^N = 1 iff N*root in Z and N*qexp = 0.
    bool order_divides(const Int& N) const {
        return is_integer(Rat(N) * root_) && qexp_ == 0;
    }

    friend bool operator==(const CycloQUnit&, const CycloQUnit&) = default;

    friend bool operator<(const CycloQUnit& a, const CycloQUnit& b) {
        if (a.qexp_ != b.qexp_) return a.qexp_ < b.qexp_;
        return a.root_ < b.root_;
    }

    /// ASCII rendering, e.g. "zeta(1/2)*q^(3/2)", "q^(1/2)", "1".
    std::string str() const {
        std::string s;
        if (root_ != 0) s += "zeta(" + rat_str(root_) + ")";
        if (qexp_ != 0) {
            if (!s.empty()) s += "*";
            if (qexp_ == 1) {
                s += "q";
            } else {
                s += "q^(" + rat_str(qexp_) + ")";
            }
        }
        return s.empty() ? "1" : s;
    }

    nlohmann::ordered_json to_json() const {
        return {{"root", rat_str(root_)}, {"qexp", rat_str(qexp_)}};
    }

private:
    Rat root_;  // canonical in [0, 1)
    Rat qexp_;
};

}  // namespace tatesub
