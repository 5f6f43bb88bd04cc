#ifndef LPHEDGE_CPMM_HPP
#define LPHEDGE_CPMM_HPP

#include <cmath>
#include <string>

#include "errors.hpp"

namespace lphedge {

/**
 * Reserves of a two-token constant product pool.
 *
 * x is the reserve of token X, y the reserve of token Y, and gamma the
 * fraction of every incoming amount that is credited to the curve (the fee is
 * 1 - gamma). The invariant k is recomputed from the reserves after each swap,
 * so with gamma < 1 it grows trade by trade.
 *
 * Values are immutable; swaps return a new state.
 */
class PoolState {
public:
    PoolState(double x, double y, double gamma) : x_(x), y_(y), gamma_(gamma), k_(x * y) {
        detail::require_positive(x, "reserve x");
        detail::require_positive(y, "reserve y");
        if (!(gamma > 0.0 && gamma <= 1.0))
            throw DomainError("fee factor gamma must lie in (0, 1], got " + std::to_string(gamma));
    }

    double x() const noexcept { return x_; }
    double y() const noexcept { return y_; }
    double gamma() const noexcept { return gamma_; }
    double k() const noexcept { return k_; }

private:
    double x_;
    double y_;
    double gamma_;
    double k_;
};

struct SwapResult {
    double amount_out;
    PoolState pool;
};

inline PoolState new_pool(double x, double y, double gamma = 1.0) { return PoolState(x, y, gamma); }

/// Sell `dy` of token Y into the pool: (x - dx)(y + gamma dy) = k.
inline SwapResult swap_y_for_x(const PoolState& pool, double dy) {
    if (!(dy > 0.0)) throw DomainError("swap input dy must be > 0");
    const double x_new = pool.k() / (pool.y() + pool.gamma() * dy);
    return {pool.x() - x_new, PoolState(x_new, pool.y() + dy, pool.gamma())};
}

/// Sell `dx` of token X into the pool. Mirror image of swap_y_for_x with the
/// fee taken on the incoming X leg.
inline SwapResult swap_x_for_y(const PoolState& pool, double dx) {
    if (!(dx > 0.0)) throw DomainError("swap input dx must be > 0");
    const double y_new = pool.k() / (pool.x() + pool.gamma() * dx);
    return {pool.y() - y_new, PoolState(pool.x() + dx, y_new, pool.gamma())};
}

/// Price of X in units of Y quoted by the pool (y / x).
inline double implied_price(const PoolState& pool) noexcept { return pool.y() / pool.x(); }

/// Value in Y of a fee-free pool with invariant k when X trades at `price`: 2 sqrt(k p).
inline double pool_value(double k, double price) {
    detail::require_positive(k, "invariant k");
    detail::require_positive(price, "price");
    return 2.0 * std::sqrt(k * price);
}

/// One-step growth factor of the pool value, sqrt(p_now / p_prev).
inline double relative_return(double p_prev, double p_now) {
    detail::require_positive(p_prev, "previous price");
    detail::require_positive(p_now, "current price");
    return std::sqrt(p_now / p_prev);
}

} // namespace lphedge

#endif // LPHEDGE_CPMM_HPP
