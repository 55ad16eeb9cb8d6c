#pragma once

#include "tatesub/rational.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tatesub {

using Monomial = std::vector<long>;  // exponent per generator, in presentation order

/// One generator of a presentation. modulus == 0 means unbounded (a q-type
/// generator with exponents ranging over Z); modulus m > 0 installs the
/// rewrite g^m -> replacement, so normal forms keep the exponent in [0, m).
/// Replacements may only involve generators that come later in the list;
/// that triangularity makes the rewrite system terminating and confluent
/// and lets normal_form run in a single left-to-right pass.
struct GeneratorSpec {
    std::string name;
    long modulus = 0;
    Monomial replacement;  // same arity as the presentation; empty means 1
};

class RingPresentation {
public:
    RingPresentation(std::string label, std::vector<GeneratorSpec> gens)
        : label_(std::move(label)), gens_(std::move(gens)) {
        for (size_t i = 0; i < gens_.size(); ++i) {
            auto& g = gens_[i];
            if (g.modulus < 0) throw std::invalid_argument("RingPresentation: negative modulus");
            if (g.replacement.empty()) g.replacement.assign(gens_.size(), 0);
            if (g.replacement.size() != gens_.size()) {
                throw std::invalid_argument("RingPresentation: replacement arity mismatch");
            }
            for (size_t j = 0; j <= i; ++j) {
                if (g.modulus > 0 && g.replacement[j] != 0) {
                    throw std::invalid_argument("RingPresentation: replacement must be triangular");
                }
            }
        }
    }

    const std::string& label() const { return label_; }
    size_t arity() const { return gens_.size(); }
    const std::vector<GeneratorSpec>& generators() const { return gens_; }

    size_t index_of(const std::string& name) const {
        for (size_t i = 0; i < gens_.size(); ++i)
            if (gens_[i].name == name) return i;
        throw std::out_of_range("RingPresentation '" + label_ + "': no generator " + name);
    }

    bool has_generator(const std::string& name) const {
        for (const auto& g : gens_)
            if (g.name == name) return true;
        return false;
    }

    /// Unique normal form: each bounded exponent is reduced into [0, modulus)
    /// by floored division, folding the quotient into the replacement
    /// monomial. Idempotent by construction.
    Monomial normal_form(Monomial m) const {
        if (m.size() != gens_.size()) throw std::invalid_argument("normal_form: arity mismatch");
        for (size_t i = 0; i < gens_.size(); ++i) {
            const auto& g = gens_[i];
            if (g.modulus == 0) continue;
            long r = m[i] % g.modulus;
            if (r < 0) r += g.modulus;
            long c = (m[i] - r) / g.modulus;
            m[i] = r;
            if (c != 0) {
                for (size_t j = 0; j < gens_.size(); ++j) m[j] += c * g.replacement[j];
            }
        }
        return m;
    }

    /// Rank as a free module over the invertible-generator base: product of
    /// the moduli of the bounded generators.
    Int rank() const {
        Int r = 1;
        for (const auto& g : gens_)
            if (g.modulus > 0) r *= g.modulus;
        return r;
    }

    friend bool operator==(const RingPresentation& a, const RingPresentation& b) {
        if (a.label_ != b.label_ || a.gens_.size() != b.gens_.size()) return false;
        for (size_t i = 0; i < a.gens_.size(); ++i) {
            const auto& x = a.gens_[i];
            const auto& y = b.gens_[i];
            if (x.name != y.name || x.modulus != y.modulus || x.replacement != y.replacement)
                return false;
        }
        return true;
    }

private:
    std::string label_;
    std::vector<GeneratorSpec> gens_;
};

using PresentationPtr = std::shared_ptr<const RingPresentation>;

/// An element of a presented ring: an integer combination of normal-form
/// monomials. Immutable value semantics; every constructor and operation
/// re-normalizes, so equality is map equality.
class RingElement {
public:
    explicit RingElement(PresentationPtr pres) : pres_(std::move(pres)) {}

    static RingElement zero(PresentationPtr pres) { return RingElement(std::move(pres)); }

    static RingElement monomial(PresentationPtr pres, Monomial m, Int coeff = 1) {
        RingElement e(std::move(pres));
        e.add_term(e.pres_->normal_form(std::move(m)), coeff);
        return e;
    }

    static RingElement one(PresentationPtr pres) {
        Monomial m(pres->arity(), 0);
        return monomial(std::move(pres), std::move(m));
    }

    static RingElement generator(PresentationPtr pres, const std::string& name, long exp = 1) {
        Monomial m(pres->arity(), 0);
        m[pres->index_of(name)] = exp;
        return monomial(std::move(pres), std::move(m));
    }

    const PresentationPtr& presentation() const { return pres_; }
    const std::map<Monomial, Int>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_monomial_unit() const {
        return terms_.size() == 1 &&
               (terms_.begin()->second == 1 || terms_.begin()->second == -1);
    }

    friend RingElement operator+(const RingElement& a, const RingElement& b) {
        a.require_same_ring(b, "+");
        RingElement r(a.pres_);
        r.terms_ = a.terms_;
        for (const auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }

    friend RingElement operator-(const RingElement& a, const RingElement& b) {
        a.require_same_ring(b, "-");
        RingElement r(a.pres_);
        r.terms_ = a.terms_;
        for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
        return r;
    }

    RingElement operator-() const {
        RingElement r(pres_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    friend RingElement operator*(const RingElement& a, const RingElement& b) {
        a.require_same_ring(b, "*");
        RingElement r(a.pres_);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m(ma.size());
                for (size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
                r.add_term(a.pres_->normal_form(std::move(m)), ca * cb);
            }
        }
        return r;
    }

    friend RingElement operator*(const Int& c, const RingElement& a) {
        RingElement r(a.pres_);
        if (c == 0) return r;
        for (const auto& [m, cc] : a.terms_) r.terms_.emplace(m, c * cc);
        return r;
    }

    /// Inverse of a +/-1-coefficient monomial (every generator in these
    /// presentations is a unit, so such elements are invertible).
    RingElement inverse() const {
        if (!is_monomial_unit()) {
            throw std::domain_error("RingElement::inverse: not a monomial unit");
        }
        Monomial m = terms_.begin()->first;
        for (auto& e : m) e = -e;
        return monomial(pres_, std::move(m), terms_.begin()->second);
    }

    RingElement pow(long n) const {
        if (n < 0) return inverse().pow(-n);
        RingElement r = one(pres_);
        for (long i = 0; i < n; ++i) r = r * *this;
        return r;
    }

    friend bool operator==(const RingElement& a, const RingElement& b) {
        return *a.pres_ == *b.pres_ && a.terms_ == b.terms_;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [m, c] : terms_) {
            if (!s.empty()) s += " + ";
            std::string mono;
            for (size_t i = 0; i < m.size(); ++i) {
                if (m[i] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += pres_->generators()[i].name;
                if (m[i] != 1) mono += "^" + std::to_string(m[i]);
            }
            if (mono.empty()) {
                s += c.str();
            } else if (c == 1) {
                s += mono;
            } else if (c == -1) {
                s += "-" + mono;
            } else {
                s += c.str() + "*" + mono;
            }
        }
        return s;
    }

    /// {"factor": label, "terms": [[{"q":..., "x":..., "qp":...}, coeff], ...]}
    /// with monomials in the presentation's lexicographic key order.
    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["factor"] = pres_->label();
        auto arr = nlohmann::ordered_json::array();
        for (const auto& [m, c] : terms_) {
            nlohmann::ordered_json mono;
            mono["q"] = exponent_or_zero(m, "q");
            mono["x"] = exponent_or_zero(m, "x");
            mono["qp"] = exponent_or_zero(m, "qp");
            arr.push_back(nlohmann::ordered_json::array({mono, c.str()}));
        }
        j["terms"] = std::move(arr);
        return j;
    }

private:
    long exponent_or_zero(const Monomial& m, const std::string& name) const {
        if (!pres_->has_generator(name)) return 0;
        return m[pres_->index_of(name)];
    }

    void require_same_ring(const RingElement& other, const char* op) const {
        if (!(*pres_ == *other.pres_)) {
            throw std::invalid_argument(std::string("RingElement ") + op +
                                        ": elements of different rings ('" + pres_->label() +
                                        "' vs '" + other.pres_->label() + "')");
        }
    }

    void add_term(Monomial m, const Int& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(std::move(m), c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    PresentationPtr pres_;
    std::map<Monomial, Int> terms_;
};

/// Raised when a candidate generator assignment fails to respect a defining
/// relation of the source ring.
class WellDefinednessError : public std::runtime_error {
public:
    WellDefinednessError(std::string relation, std::string residual)
        : std::runtime_error("relation " + relation + " maps to nonzero normal form " + residual),
          relation_(std::move(relation)),
          residual_(std::move(residual)) {}

    const std::string& relation() const { return relation_; }
    const std::string& residual() const { return residual_; }

private:
    std::string relation_;
    std::string residual_;
};

/// A checked ring homomorphism given by generator images. Construction
/// verifies that every source rewrite rule maps to a relation that
/// normalizes to zero in the target, and that unbounded (q-type) generators
/// go to units.
class RingHom {
public:
    RingHom(PresentationPtr source, PresentationPtr target,
            std::map<std::string, RingElement> images)
        : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
        for (const auto& g : source_->generators()) {
            auto it = images_.find(g.name);
            if (it == images_.end()) {
                throw std::invalid_argument("RingHom: no image for generator " + g.name);
            }
            if (!(*it->second.presentation() == *target_)) {
                throw std::invalid_argument("RingHom: image of " + g.name + " lives in the wrong ring");
            }
            if (g.modulus == 0 && !it->second.is_monomial_unit()) {
                throw WellDefinednessError(g.name + " (invertible)",
                                           "image " + it->second.str() + " is not a unit");
            }
        }
        for (const auto& g : source_->generators()) {
            if (g.modulus == 0) continue;
            RingElement lhs = images_.at(g.name).pow(g.modulus);
            RingElement rhs = RingElement::one(target_);
            for (size_t j = 0; j < source_->arity(); ++j) {
                long e = g.replacement[j];
                if (e != 0) rhs = rhs * images_.at(source_->generators()[j].name).pow(e);
            }
            RingElement diff = lhs - rhs;
            if (!diff.is_zero()) {
                throw WellDefinednessError(relation_str(g), diff.str());
            }
        }
    }

    const PresentationPtr& source() const { return source_; }
    const PresentationPtr& target() const { return target_; }
    const RingElement& image(const std::string& name) const { return images_.at(name); }

    /// Substitute generator images and renormalize.
    RingElement apply(const RingElement& e) const {
        if (!(*e.presentation() == *source_)) {
            throw std::invalid_argument("RingHom::apply: element not in the source ring");
        }
        RingElement r = RingElement::zero(target_);
        for (const auto& [m, c] : e.terms()) {
            RingElement term = RingElement::one(target_);
            for (size_t i = 0; i < m.size(); ++i) {
                if (m[i] != 0) term = term * images_.at(source_->generators()[i].name).pow(m[i]);
            }
            r = r + c * term;
        }
        return r;
    }

private:
    std::string relation_str(const GeneratorSpec& g) const {
        std::string rep;
        for (size_t j = 0; j < source_->arity(); ++j) {
            if (g.replacement[j] == 0) continue;
            if (!rep.empty()) rep += "*";
            rep += source_->generators()[j].name;
            if (g.replacement[j] != 1) rep += "^" + std::to_string(g.replacement[j]);
        }
        if (rep.empty()) rep = "1";
        return g.name + "^" + std::to_string(g.modulus) + " - " + rep;
    }

    PresentationPtr source_;
    PresentationPtr target_;
    std::map<std::string, RingElement> images_;
};

inline RingHom compose(const RingHom& outer, const RingHom& inner) {
    if (!(*inner.target() == *outer.source())) {
        throw std::invalid_argument("compose: inner target does not match outer source");
    }
    std::map<std::string, RingElement> images;
    for (const auto& g : inner.source()->generators()) {
        images.emplace(g.name, outer.apply(inner.image(g.name)));
    }
    return RingHom(inner.source(), outer.target(), std::move(images));
}

/// An ordered product of presented rings; elements are tuples with one
/// RingElement per factor.
struct ProductRing {
    std::vector<PresentationPtr> factors;

    Int total_rank() const {
        Int r = 0;
        for (const auto& f : factors) r += f->rank();
        return r;
    }
};

/// All ordered pairs (d, e) with d*e = N, ascending in d.
inline std::vector<std::pair<long, long>> divisor_pairs(long N) {
    std::vector<std::pair<long, long>> ps;
    for (long d = 1; d <= N; ++d)
        if (N % d == 0) ps.emplace_back(d, N / d);
    return ps;
}

// --- The fixed presentations -----------------------------------------------

/// Z[q^[+-]]: one unbounded generator.
inline PresentationPtr base_ring() {
    static const PresentationPtr p =
        std::make_shared<RingPresentation>("Z[q+-]", std::vector<GeneratorSpec>{{"q", 0, {}}});
    return p;
}

/// Z[q^[+-]][x]/(x^N - q^k), the level-k component of the N-torsion ring.
inline PresentationPtr component_ring(long N, long k) {
    if (k < 0 || k >= N) throw std::domain_error("component_ring: k must lie in [0, N)");
    std::vector<GeneratorSpec> gens(2);
    gens[0] = {"x", N, {0, k}};
    gens[1] = {"q", 0, {}};
    return std::make_shared<RingPresentation>(
        "T[" + std::to_string(N) + "]:k=" + std::to_string(k), std::move(gens));
}

/// Z[q^[+-]][q']/(q'^e - q^d), one classifying factor.
inline PresentationPtr sub_factor_ring(long d, long e) {
    if (d < 1 || e < 1) throw std::domain_error("sub_factor_ring: d, e must be >= 1");
    std::vector<GeneratorSpec> gens(2);
    gens[0] = {"qp", e, {0, d}};
    gens[1] = {"q", 0, {}};
    return std::make_shared<RingPresentation>(
        "Sub:(d=" + std::to_string(d) + ",e=" + std::to_string(e) + ")", std::move(gens));
}

/// Tensor factor over the shared q: generators x, q', q with x^N -> q^k and
/// q'^e -> q^d.
inline PresentationPtr sstar_factor_ring(long N, long d, long e, long k) {
    if (d * e != N) throw std::domain_error("sstar_factor_ring: d*e must equal N");
    if (k < 0 || k >= N) throw std::domain_error("sstar_factor_ring: k must lie in [0, N)");
    std::vector<GeneratorSpec> gens(3);
    gens[0] = {"x", N, {0, 0, k}};
    gens[1] = {"qp", e, {0, 0, d}};
    gens[2] = {"q", 0, {}};
    return std::make_shared<RingPresentation>("sStar:(d=" + std::to_string(d) + ",e=" +
                                                  std::to_string(e) + "):k=" + std::to_string(k),
                                              std::move(gens));
}

/// Same tensor with the torsion-side structural q identified with q' (the
/// identification is oriented to eliminate that q): x^N -> q'^k and
/// q'^e -> Q^d, where Q is the classifying side's structural unit.
inline PresentationPtr tstar_factor_ring(long N, long d, long e, long k) {
    if (d * e != N) throw std::domain_error("tstar_factor_ring: d*e must equal N");
    if (k < 0 || k >= N) throw std::domain_error("tstar_factor_ring: k must lie in [0, N)");
    std::vector<GeneratorSpec> gens(3);
    gens[0] = {"x", N, {0, k, 0}};
    gens[1] = {"qp", e, {0, 0, d}};
    gens[2] = {"Q", 0, {}};
    return std::make_shared<RingPresentation>("tStar:(d=" + std::to_string(d) + ",e=" +
                                                  std::to_string(e) + "):k=" + std::to_string(k),
                                              std::move(gens));
}

/// The N-torsion coordinate ring: one component per level k.
inline ProductRing build_O_TN(long N) {
    if (N < 1) throw std::domain_error("build_O_TN: N must be >= 1");
    ProductRing r;
    for (long k = 0; k < N; ++k) r.factors.push_back(component_ring(N, k));
    return r;
}

/// The subgroup-classifying ring: one factor per ordered divisor pair.
inline ProductRing build_O_Sub(long N) {
    if (N < 1) throw std::domain_error("build_O_Sub: N must be >= 1");
    ProductRing r;
    for (auto [d, e] : divisor_pairs(N)) r.factors.push_back(sub_factor_ring(d, e));
    return r;
}

inline ProductRing build_O_sStar(long N) {
    if (N < 1) throw std::domain_error("build_O_sStar: N must be >= 1");
    ProductRing r;
    for (auto [d, e] : divisor_pairs(N))
        for (long k = 0; k < N; ++k) r.factors.push_back(sstar_factor_ring(N, d, e, k));
    return r;
}

inline ProductRing build_O_tStar(long N) {
    if (N < 1) throw std::domain_error("build_O_tStar: N must be >= 1");
    ProductRing r;
    for (auto [d, e] : divisor_pairs(N))
        for (long k = 0; k < N; ++k) r.factors.push_back(tstar_factor_ring(N, d, e, k));
    return r;
}

/// Z[z]/(z^e - 1) with an adjoined unbounded unit u: the presented model of
/// the cyclotomic-q coefficient object, with u standing for q^{1/e}. Targets
/// the classification's ring-level check (q -> u^e, q' -> z^j u^d).
inline PresentationPtr cyclo_q_model_ring(long e) {
    if (e < 1) throw std::domain_error("cyclo_q_model_ring: e must be >= 1");
    std::vector<GeneratorSpec> gens(2);
    gens[0] = {"z", e, {0, 0}};
    gens[1] = {"u", 0, {}};
    return std::make_shared<RingPresentation>("K(e=" + std::to_string(e) + ")", std::move(gens));
}

}  // namespace tatesub
