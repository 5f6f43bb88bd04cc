#ifndef LPHEDGE_STRANGLE_HPP
#define LPHEDGE_STRANGLE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "chain.hpp"
#include "errors.hpp"
#include "il.hpp"
#include "oracle.hpp"

namespace lphedge {

/**
 * Long strangle: q_c calls struck at k_c and q_p puts struck at k_p, bought
 * at premiums d_c and d_p (quote currency per unit of the underlying).
 */
struct HedgePlan {
    double k_c;
    double k_p;
    double q_c;
    double q_p;
    double d_c;
    double d_p;

    /// Total premium outlay D.
    double cost() const noexcept { return q_c * d_c + q_p * d_p; }

    friend bool operator==(const HedgePlan&, const HedgePlan&) = default;
};

/**
 * What is being hedged: a pool position, the total pool return r_p earned
 * over the hedge horizon (a fraction of capital, not annualised), and the
 * price band [p_lo, p_hi] on which the combined payoff must stay >= 0.
 */
struct HedgeContext {
    PositionParams position;
    double pool_return;
    double p_lo;
    double p_hi;

    double capital() const noexcept { return position.capital; }
    double entry_price() const noexcept { return position.entry_price; }

    void validate() const {
        detail::require_positive(p_lo, "interval lower bound");
        detail::require_positive(p_hi, "interval upper bound");
        if (!(pool_return >= 0.0)) throw DomainError("pool return must be >= 0");
        if (!(p_lo <= entry_price() && entry_price() <= p_hi))
            throw DomainError("coverage interval must contain the entry price");
    }
};

/// Net strangle payoff q_c (P - k_c)+ + q_p (k_p - P)+ - D.
inline double strangle_payoff(const HedgePlan& plan, double p) {
    return plan.q_c * std::max(p - plan.k_c, 0.0) + plan.q_p * std::max(plan.k_p - p, 0.0) - plan.cost();
}

/// Pool return plus strangle plus impermanent loss at expiry. The premium D
/// is charged once.
inline double combined_payoff(const HedgeContext& ctx, const HedgePlan& plan, double p) {
    return ctx.pool_return * ctx.capital() + strangle_payoff(plan, p) + il(ctx.position, p);
}

/// Fewest puts for which the payoff is non-increasing on [p_lo, k_p]:
/// the slope of il at p_lo, (c/2)(1/sqrt(p_lo p0) - 1/p0).
inline double min_put_qty(const HedgeContext& ctx) {
    ctx.validate();
    const double c = ctx.capital(), p0 = ctx.entry_price();
    return 0.5 * c * (1.0 / std::sqrt(ctx.p_lo * p0) - 1.0 / p0);
}

/// Fewest calls for which the payoff is non-decreasing on [k_c, p_hi]:
/// -(c/2)(1/sqrt(p_hi p0) - 1/p0).
inline double min_call_qty(const HedgeContext& ctx) {
    ctx.validate();
    const double c = ctx.capital(), p0 = ctx.entry_price();
    return -0.5 * c * (1.0 / std::sqrt(ctx.p_hi * p0) - 1.0 / p0);
}

/// One sufficient condition, lhs <= rhs.
struct InequalityCheck {
    bool pass = false;
    double lhs = 0.0;
    double rhs = 0.0;

    double slack() const noexcept { return rhs - lhs; }

    static InequalityCheck of(double lhs, double rhs) { return {lhs <= rhs, lhs, rhs}; }

    friend bool operator==(const InequalityCheck&, const InequalityCheck&) = default;
};

/// Budget condition D - min(il(k_c), il(k_p)) <= r_p c from its ingredients.
inline InequalityCheck budget_check(double cost, double il_call_strike, double il_put_strike, double pool_income) {
    return InequalityCheck::of(cost - std::min(il_call_strike, il_put_strike), pool_income);
}

inline InequalityCheck budget_ok(const HedgeContext& ctx, const HedgePlan& plan) {
    return budget_check(plan.cost(), il(ctx.position, plan.k_c), il(ctx.position, plan.k_p),
                        ctx.pool_return * ctx.capital());
}

/// Throws DomainError unless p_lo <= k_p <= p0 <= k_c <= p_hi and all
/// quantities and premiums are non-negative.
inline void check_admissible(const HedgeContext& ctx, const HedgePlan& plan) {
    ctx.validate();
    if (!(ctx.p_lo <= plan.k_p && plan.k_p <= ctx.entry_price() && ctx.entry_price() <= plan.k_c &&
          plan.k_c <= ctx.p_hi))
        throw DomainError("strikes must satisfy p_lo <= k_p <= p0 <= k_c <= p_hi");
    if (!(plan.q_c >= 0.0 && plan.q_p >= 0.0)) throw DomainError("option quantities must be >= 0");
    if (!(plan.d_c >= 0.0 && plan.d_p >= 0.0)) throw DomainError("option premiums must be >= 0");
}

struct OracleResult {
    double min_value;
    double argmin;
    std::size_t n_grid;

    friend bool operator==(const OracleResult&, const OracleResult&) = default;
};

/**
 * Outcome of checking a plan. The three inequalities are sufficient, not
 * necessary: a failed inequality means "uncertified", not that the hedge
 * loses money. The grid oracle only runs when all three pass.
 */
struct CertificationReport {
    InequalityCheck ineq_put;
    InequalityCheck ineq_budget;
    InequalityCheck ineq_call;
    std::optional<OracleResult> oracle;
    double eps = 0.0;

    bool inequalities_pass() const noexcept { return ineq_put.pass && ineq_budget.pass && ineq_call.pass; }
    bool certified() const noexcept { return inequalities_pass() && oracle && oracle->min_value >= -eps; }

    friend bool operator==(const CertificationReport&, const CertificationReport&) = default;
};

struct VerifyOptions {
    std::size_t n_grid = 10'000;
    double eps_rel = 1e-9;  // certification tolerance as a fraction of capital
    Spacing spacing = Spacing::geometric;
};

inline GridSpec coverage_grid(const HedgeContext& ctx, std::size_t n, Spacing spacing) {
    return {ctx.p_lo, ctx.p_hi, ctx.p_lo == ctx.p_hi ? std::size_t{1} : n, spacing};
}

inline CertificationReport verify_plan(const HedgeContext& ctx, const HedgePlan& plan, const VerifyOptions& opt = {}) {
    check_admissible(ctx, plan);
    CertificationReport r;
    r.ineq_put = InequalityCheck::of(min_put_qty(ctx), plan.q_p);
    r.ineq_budget = budget_ok(ctx, plan);
    r.ineq_call = InequalityCheck::of(min_call_qty(ctx), plan.q_c);
    r.eps = opt.eps_rel * ctx.capital();
    if (r.inequalities_pass()) {
        const std::array<double, 3> kinks{plan.k_p, ctx.entry_price(), plan.k_c};
        const auto m = grid_min([&](double p) { return combined_payoff(ctx, plan, p); },
                                coverage_grid(ctx, opt.n_grid, opt.spacing), kinks);
        r.oracle = OracleResult{m.value, m.argmin, m.n_points};
    }
    return r;
}

struct OptimizeOptions {
    std::optional<Date> expiry;  // required when the chain lists several
};

/**
 * Cheapest admissible strangle in `chain`.
 *
 * Quantities are fixed at min_put_qty / min_call_qty, which depend only on the
 * context, so the search is exhaustive over (put, call) strike pairs with
 * p_lo <= k_p <= p0 <= k_c <= p_hi. Premiums are mid prices; quotes with no
 * usable premium are skipped. Among pairs meeting the budget the lowest cost
 * wins, then the narrower strangle, then the lower call strike.
 */
inline HedgePlan optimize_plan(const HedgeContext& ctx, const OptionChain& chain, const OptimizeOptions& opt = {}) {
    ctx.validate();
    Date expiry{};
    if (opt.expiry) {
        expiry = *opt.expiry;
    } else {
        const auto all = expiries(chain);
        if (all.size() != 1) throw DomainError("chain lists " + std::to_string(all.size()) + " expiries; select one");
        expiry = all.front();
    }

    struct Priced {
        double strike;
        double premium;
    };
    auto priced = [&](OptionKind kind, double lo, double hi) {
        std::vector<Priced> out;
        for (const auto& q : filter(chain, expiry, kind, lo, hi)) {
            const auto qq = in_quote_currency(q, chain.spot);
            if ((qq.bid && qq.ask) || qq.mark) out.push_back({qq.strike, mid_price(qq)});
        }
        return out;
    };
    const auto puts = priced(OptionKind::put, ctx.p_lo, ctx.entry_price());
    const auto calls = priced(OptionKind::call, ctx.entry_price(), ctx.p_hi);

    const double q_p = min_put_qty(ctx);
    const double q_c = min_call_qty(ctx);
    std::optional<HedgePlan> best;
    double best_violation = std::numeric_limits<double>::infinity();
    for (const auto& put : puts) {
        for (const auto& call : calls) {
            const HedgePlan plan{call.strike, put.strike, q_c, q_p, call.premium, put.premium};
            const auto budget = budget_ok(ctx, plan);
            if (!budget.pass) {
                best_violation = std::min(best_violation, -budget.slack());
                continue;
            }
            if (!best) {
                best = plan;
                continue;
            }
            const double d = plan.cost(), bd = best->cost();
            const double w = plan.k_c - plan.k_p, bw = best->k_c - best->k_p;
            if (d < bd || (d == bd && (w < bw || (w == bw && plan.k_c < best->k_c)))) best = plan;
        }
    }
    if (!best) {
        if (puts.empty() || calls.empty())
            throw InfeasibleError("no admissible put/call pair in the chain for the coverage interval",
                                  best_violation);
        throw InfeasibleError("no strike pair fits the budget; smallest violation " +
                                  detail::format_number(best_violation),
                              best_violation);
    }
    return *best;
}

struct PayoffRow {
    double price;
    double il;
    double strangle;
    double combined;
};

/// Impermanent loss, net strangle payoff and combined payoff on a price grid.
inline std::vector<PayoffRow> payoff_curve(const HedgeContext& ctx, const HedgePlan& plan, const GridSpec& spec) {
    const std::array<double, 2> kinks{plan.k_p, plan.k_c};
    std::vector<PayoffRow> rows;
    for (double p : grid_points(spec, kinks))
        rows.push_back({p, il(ctx.position, p), strangle_payoff(plan, p), combined_payoff(ctx, plan, p)});
    return rows;
}

} // namespace lphedge

#endif // LPHEDGE_STRANGLE_HPP
