#ifndef LPHEDGE_REPLICATION_HPP
#define LPHEDGE_REPLICATION_HPP

#include <cmath>
#include <concepts>
#include <optional>
#include <string>
#include <vector>

#include "chain.hpp"
#include "errors.hpp"
#include "oracle.hpp"

namespace lphedge {

/**
 * A twice-differentiable terminal payoff f(P).
 *
 * Any such payoff is reproduced by f(m) bonds, f'(m) futures struck at m,
 * f''(K) dK puts for K < m and f''(K) dK calls for K > m.
 */
template <class P>
concept SmoothPayoff = requires(const P& f, double x) {
    { f.value(x) } -> std::convertible_to<double>;
    { f.slope(x) } -> std::convertible_to<double>;
    { f.curvature(x) } -> std::convertible_to<double>;
};

/// Value of a fee-free constant product pool, 2 sqrt(k P).
struct PoolPayoff {
    double k;

    double value(double p) const { return 2.0 * std::sqrt(k * p); }
    double slope(double p) const { return std::sqrt(k / p); }
    double curvature(double p) const { return -0.5 * std::sqrt(k / (p * p * p)); }
};

/// Number of bonds (each paying 1 at expiry): 2 sqrt(k m).
inline double bond_notional(double k, double m) {
    detail::require_positive(k, "invariant k");
    detail::require_positive(m, "anchor price");
    return PoolPayoff{k}.value(m);
}

/// Futures position struck at the anchor: sqrt(k / m).
inline double futures_notional(double k, double m) {
    detail::require_positive(k, "invariant k");
    detail::require_positive(m, "anchor price");
    return PoolPayoff{k}.slope(m);
}

/// Option weight per unit strike, -sqrt(k / K^3) / 2. Always negative.
inline double option_density(double k, double strike) {
    detail::require_positive(k, "invariant k");
    detail::require_positive(strike, "strike");
    return PoolPayoff{k}.curvature(strike);
}

/// Strike discretisation: `n` cells on each side of the anchor, spanning
/// [k_min, m] for puts and [m, k_max] for calls.
struct StrikeGrid {
    double k_min;
    double k_max;
    std::size_t n;
    Spacing spacing = Spacing::geometric;

    /// Default grid [m/50, 50 m], geometric.
    static StrikeGrid around(double m, std::size_t n) { return {m / 50.0, m * 50.0, n, Spacing::geometric}; }

    void validate() const {
        detail::require_positive(k_min, "k_min");
        detail::require_positive(k_max, "k_max");
        if (!(k_min < k_max)) throw DomainError("strike grid requires k_min < k_max");
        if (n < 1) throw DomainError("strike grid requires at least one strike per side");
    }
};

struct OptionLeg {
    double strike;
    double weight;  // f''(K) dK, signed

    friend bool operator==(const OptionLeg&, const OptionLeg&) = default;
};

struct ReplicationPortfolio {
    double bond_notional;
    double futures_notional;
    double anchor;
    std::vector<OptionLeg> put_legs;   // strikes ascending in (k_min, anchor)
    std::vector<OptionLeg> call_legs;  // strikes ascending in (anchor, k_max)
};

namespace detail {

inline std::vector<double> cell_edges(double lo, double hi, std::size_t n, Spacing spacing) {
    std::vector<double> e(n + 1);
    const double ratio = std::log(hi / lo);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n);
        e[i] = spacing == Spacing::uniform ? lo + t * (hi - lo) : lo * std::exp(t * ratio);
    }
    e.front() = lo;
    e.back() = hi;
    return e;
}

template <SmoothPayoff F>
std::vector<OptionLeg> midpoint_legs(const F& f, double lo, double hi, std::size_t n, Spacing spacing) {
    const auto e = cell_edges(lo, hi, n, spacing);
    std::vector<OptionLeg> legs;
    legs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double strike = 0.5 * (e[i] + e[i + 1]);
        legs.push_back({strike, f.curvature(strike) * (e[i + 1] - e[i])});
    }
    return legs;
}

} // namespace detail

/// Static portfolio replicating `f` around anchor `m`; option weights use the
/// midpoint rule on each strike cell.
template <SmoothPayoff F>
ReplicationPortfolio replicate(const F& f, double m, const StrikeGrid& grid) {
    grid.validate();
    detail::require_positive(m, "anchor price");
    if (!(grid.k_min < m && m < grid.k_max))
        throw DomainError("anchor must lie strictly inside (k_min, k_max)");
    return {f.value(m), f.slope(m), m, detail::midpoint_legs(f, grid.k_min, m, grid.n, grid.spacing),
            detail::midpoint_legs(f, m, grid.k_max, grid.n, grid.spacing)};
}

/// Replicating portfolio for the pool value 2 sqrt(k P) anchored at m.
inline ReplicationPortfolio build_portfolio(double k, double m, const StrikeGrid& grid) {
    detail::require_positive(k, "invariant k");
    return replicate(PoolPayoff{k}, m, grid);
}

/// Terminal payoff: bonds + futures (P - m) + short/long puts and calls.
inline double portfolio_payoff(const ReplicationPortfolio& port, double p) {
    detail::require_positive(p, "terminal price");
    double v = port.bond_notional + port.futures_notional * (p - port.anchor);
    for (const auto& leg : port.put_legs)
        if (leg.strike > p) v += leg.weight * (leg.strike - p);
    for (const auto& leg : port.call_legs)
        if (leg.strike < p) v += leg.weight * (p - leg.strike);
    return v;
}

/// Option legs with the futures expanded into +f'(m) calls and -f'(m) puts at
/// the anchor, for venues that list no futures. Puts first, then calls.
struct SidedLeg {
    OptionKind kind;
    OptionLeg leg;
};

inline std::vector<SidedLeg> option_legs(const ReplicationPortfolio& port, bool expand_anchor) {
    std::vector<SidedLeg> out;
    for (const auto& l : port.put_legs) out.push_back({OptionKind::put, l});
    if (expand_anchor) {
        out.push_back({OptionKind::put, {port.anchor, -port.futures_notional}});
        out.push_back({OptionKind::call, {port.anchor, port.futures_notional}});
    }
    for (const auto& l : port.call_legs) out.push_back({OptionKind::call, l});
    return out;
}

namespace detail {

inline const OptionQuote& find_quote(const OptionChain& chain, OptionKind kind, double strike,
                                     const std::optional<Date>& expiry) {
    const OptionQuote* found = nullptr;
    for (const auto& q : chain.quotes) {
        if (q.kind != kind || (expiry && q.expiry != *expiry)) continue;
        if (std::abs(q.strike - strike) > 1e-9 * strike) continue;
        if (found) throw DataError("ambiguous " + std::string(to_string(kind)) + " quote at strike " +
                                   format_number(strike) + ": several expiries, select one");
        found = &q;
    }
    if (!found) throw DataError("missing " + std::string(to_string(kind)) + " quote at strike " + format_number(strike));
    return *found;
}

} // namespace detail

/**
 * Present value of the replicating portfolio from traded prices:
 * bonds at `bond_price`, the futures leg as C(m) - P(m), and each option leg
 * at its mid premium. The chain must quote the anchor call and put and every
 * leg strike (matched within 1e-9 relative).
 */
inline double portfolio_present_value(const ReplicationPortfolio& port, double bond_price, const OptionChain& chain,
                                      const std::optional<Date>& expiry = std::nullopt) {
    if (!(bond_price > 0.0 && bond_price <= 1.0)) throw DomainError("bond price must lie in (0, 1]");
    auto premium = [&](OptionKind kind, double strike) {
        return mid_price(in_quote_currency(detail::find_quote(chain, kind, strike, expiry), chain.spot));
    };
    double pv = port.bond_notional * bond_price +
                port.futures_notional * (premium(OptionKind::call, port.anchor) - premium(OptionKind::put, port.anchor));
    for (const auto& leg : port.put_legs) pv += leg.weight * premium(OptionKind::put, leg.strike);
    for (const auto& leg : port.call_legs) pv += leg.weight * premium(OptionKind::call, leg.strike);
    return pv;
}

struct ErrorPoint {
    double price;
    double target;
    double replicated;
    double rel_error;  // |replicated - target| / |target|
    bool in_band;      // inside [k_min, k_max]
};

/// Replicated vs target payoff at each point of `eval`.
template <SmoothPayoff F>
std::vector<ErrorPoint> replication_curve(const F& f, const ReplicationPortfolio& port, const StrikeGrid& grid,
                                          const GridSpec& eval) {
    std::vector<ErrorPoint> out;
    for (double p : grid_points(eval)) {
        const double target = f.value(p);
        const double rep = portfolio_payoff(port, p);
        out.push_back({p, target, rep, std::abs(rep - target) / std::abs(target), p >= grid.k_min && p <= grid.k_max});
    }
    return out;
}

struct ReplicationReport {
    double max_rel_error = 0.0;
    double argmax = 0.0;
    std::size_t n_evaluated = 0;
    std::size_t n_out_of_band = 0;  // excluded from max_rel_error
};

inline ReplicationReport summarize(const std::vector<ErrorPoint>& curve) {
    ReplicationReport r;
    for (const auto& pt : curve) {
        if (!pt.in_band) {
            ++r.n_out_of_band;
            continue;
        }
        ++r.n_evaluated;
        if (pt.rel_error > r.max_rel_error || r.n_evaluated == 1) {
            r.max_rel_error = pt.rel_error;
            r.argmax = pt.price;
        }
    }
    return r;
}

/// Worst relative replication error over `n_eval` geometric points of
/// [band_lo, band_hi]. Points outside the strike grid are counted in
/// n_out_of_band and left out of the maximum.
template <SmoothPayoff F>
ReplicationReport replication_error(const F& f, double m, const StrikeGrid& grid, double band_lo, double band_hi,
                                    std::size_t n_eval) {
    if (n_eval < 2) throw DomainError("replication error needs at least two evaluation points");
    const GridSpec eval{band_lo, band_hi, n_eval, Spacing::geometric};
    return summarize(replication_curve(f, replicate(f, m, grid), grid, eval));
}

inline ReplicationReport replication_error(double k, double m, const StrikeGrid& grid, double band_lo, double band_hi,
                                           std::size_t n_eval) {
    detail::require_positive(k, "invariant k");
    return replication_error(PoolPayoff{k}, m, grid, band_lo, band_hi, n_eval);
}

/// Coverage floor of the put side. Dropping the (short) puts below k_min
/// makes the portfolio exceed 2 sqrt(k P) for P < k_min; the gap grows to the
/// integral of |f''(K)| K over (0, k_min) = sqrt(k k_min) as P -> 0.
inline double put_tail_gap(double k, double k_min) {
    detail::require_positive(k, "invariant k");
    detail::require_positive(k_min, "k_min");
    return std::sqrt(k * k_min);
}

} // namespace lphedge

#endif // LPHEDGE_REPLICATION_HPP
