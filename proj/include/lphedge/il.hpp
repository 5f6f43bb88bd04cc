#ifndef LPHEDGE_IL_HPP
#define LPHEDGE_IL_HPP

#include <cmath>

#include "errors.hpp"

namespace lphedge {

/**
 * A liquidity position opened at price p0 with capital c (quote currency).
 *
 * Entering a constant product pool at the prevailing price forces a 50/50
 * split by value, so the position holds c/2 of the quote asset and
 * c/(2 p0) units of the base asset. Prices are quote per base.
 */
struct PositionParams {
    double capital;
    double entry_price;

    PositionParams(double c, double p0) : capital(c), entry_price(p0) {
        detail::require_positive(c, "capital");
        detail::require_positive(p0, "entry price");
    }

    double quote_held() const noexcept { return 0.5 * capital; }
    double base_held() const noexcept { return 0.5 * capital / entry_price; }
};

/// Pool position value at price p: c sqrt(p / p0).
inline double v_pool(const PositionParams& pos, double p) {
    detail::require_positive(p, "price");
    return pos.capital * std::sqrt(p / pos.entry_price);
}

/// Value of simply holding the entry tokens: (c/2)(p/p0 + 1).
inline double v_hold(const PositionParams& pos, double p) {
    detail::require_positive(p, "price");
    return 0.5 * pos.capital * (p / pos.entry_price + 1.0);
}

/// Impermanent loss v_pool - v_hold. Never positive; zero only at p0.
inline double il(const PositionParams& pos, double p) {
    detail::require_positive(p, "price");
    const double r = p / pos.entry_price;
    // same as c (sqrt(r) - (r + 1) / 2), without the cancellation near r = 1
    const double d = std::sqrt(r) - 1.0;
    return 0.0 - 0.5 * pos.capital * d * d;  // +0 at the entry price
}

/// d il / d p = (c / (2 p0)) (sqrt(p0 / p) - 1).
inline double il_derivative(const PositionParams& pos, double p) {
    detail::require_positive(p, "price");
    return pos.capital / (2.0 * pos.entry_price) * (std::sqrt(pos.entry_price / p) - 1.0);
}

} // namespace lphedge

#endif // LPHEDGE_IL_HPP
