#pragma once

#include "tatesub/qseries.hpp"

#include <stdexcept>

namespace tatesub {

/// a4 = -5 * sum_{n>=1} n^3 q^n / (1 - q^n), expanded by summing the
/// geometric series of each term: the coefficient of q^m accumulates n^3
/// over every n whose multiples reach m.
inline QSeries tate_a4(long order) {
    if (order < 1) throw std::domain_error("tate_a4: order must be >= 1");
    QSeries acc = QSeries::zero(order);
    for (long n = 1; n < order; ++n) {
        Rat n3 = Rat(Int(n) * n * n);
        for (long m = n; m < order; m += n) acc = acc + QSeries::monomial(n3, m, order);
    }
    return Rat(-5) * acc;
}

/// a6 = -(1/12) * sum_{n>=1} (7n^5 + 5n^3) q^n / (1 - q^n). Every
/// coefficient must reduce to an integer; a non-integer coefficient means
/// the arithmetic is broken and raises.
inline QSeries tate_a6(long order) {
    if (order < 1) throw std::domain_error("tate_a6: order must be >= 1");
    QSeries acc = QSeries::zero(order);
    for (long n = 1; n < order; ++n) {
        Int n3 = Int(n) * n * n;
        Rat w = Rat(7 * n3 * n * n + 5 * n3);
        for (long m = n; m < order; m += n) acc = acc + QSeries::monomial(w, m, order);
    }
    QSeries r = Rat(-1, 12) * acc;
    for (const auto& [e, c] : r.coefficients()) {
        if (!is_integer(c)) {
            throw std::logic_error("tate_a6: non-integral coefficient " + rat_str(c) +
                                   " at q^" + std::to_string(e));
        }
    }
    return r;
}

/// c4 = b2^2 - 24 b4 for y^2 + xy = x^3 + a4 x + a6 (a1 = 1, a2 = a3 = 0,
/// so b2 = 1, b4 = 2 a4).
inline QSeries c4_series(long order) {
    if (order < 2) throw std::domain_error("c4_series: order must be >= 2");
    return QSeries::one(order) - Rat(48) * tate_a4(order);
}

/// Weierstrass discriminant of y^2 + xy = x^3 + a4 x + a6 via the standard
/// b-invariants: b2 = 1, b4 = 2 a4, b6 = 4 a6, b8 = a6 - a4^2,
/// Delta = -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6.
inline QSeries discriminant(long order) {
    if (order < 2) throw std::domain_error("discriminant: order must be >= 2");
    QSeries a4 = tate_a4(order);
    QSeries a6 = tate_a6(order);
    QSeries b4 = Rat(2) * a4;
    QSeries b6 = Rat(4) * a6;
    QSeries b8 = a6 - a4 * a4;
    return (-b8) - Rat(8) * pow(b4, 3) - Rat(27) * (b6 * b6) + Rat(9) * (b4 * b6);
}

/// q * prod_{n>=1} (1 - q^n)^24, the eta-product expansion of the
/// discriminant; an independent route used to cross-check discriminant().
inline QSeries eta_product_24(long order) {
    if (order < 2) throw std::domain_error("eta_product_24: order must be >= 2");
    const long T = order - 1;  // shifted by q below
    QSeries acc = QSeries::one(T);
    for (long n = 1; n < order; ++n) {
        QSeries factor = QSeries::one(T) - QSeries::monomial(1, n, T);
        acc = acc * pow(factor, 24);
    }
    QSeries r = QSeries::zero(order);
    for (const auto& [e, c] : acc.coefficients()) r = r + QSeries::monomial(c, e + 1, order);
    return r;
}

/// j = c4^3 / Delta; a Laurent series with lowest exponent -1 and leading
/// coefficient 1. Inputs are computed with extra margin so the division
/// loss never drops below the requested order.
inline QSeries j_invariant(long order) {
    if (order < 2) throw std::domain_error("j_invariant: order must be >= 2");
    const long M = order + 4;
    QSeries num = pow(c4_series(M), 3);
    QSeries j = num * discriminant(M).inverted();
    return j.truncated(order);
}

}  // namespace tatesub
