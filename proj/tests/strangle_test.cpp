#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hedge_fixtures.hpp"
#include "lphedge/strangle.hpp"

using namespace lphedge;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

HedgeContext eth_ctx(double p_lo = 1000, double p_hi = 2600, double rp = 0.025) {
    return {PositionParams{170'000, 1700}, rp, p_lo, p_hi};
}

// Put/call minima of the reference context, from high-precision evaluation of
// the slope of il at the interval ends.
constexpr double kMinPut1000 = 15.19202405202649;
constexpr double kMinCall2600 = 9.569622996868003;

HedgePlan minimal_plan(const HedgeContext& ctx, double k_p, double k_c, double d_p, double d_c) {
    return {k_c, k_p, min_call_qty(ctx), min_put_qty(ctx), d_c, d_p};
}

} // namespace

TEST(StranglePayoff, Shape) {
    const HedgePlan plan{2000, 1500, 10, 4, 30, 20};
    const double D = plan.cost();
    EXPECT_DOUBLE_EQ(D, 380);
    for (double p : {1500.0, 1700.0, 2000.0}) EXPECT_DOUBLE_EQ(strangle_payoff(plan, p), -D);
    EXPECT_DOUBLE_EQ(strangle_payoff({2000, 1500, 10, 0, 0, 0}, 2500), 5000);
    const double h = 1;
    EXPECT_NEAR((strangle_payoff(plan, 1200 + h) - strangle_payoff(plan, 1200)) / h, -4, 1e-9);
    EXPECT_NEAR((strangle_payoff(plan, 1800 + h) - strangle_payoff(plan, 1800)) / h, 0, 1e-9);
    EXPECT_NEAR((strangle_payoff(plan, 2300 + h) - strangle_payoff(plan, 2300)) / h, 10, 1e-9);
}

TEST(CombinedPayoff, Examples) {
    const auto ctx = eth_ctx();
    EXPECT_DOUBLE_EQ(combined_payoff(ctx, {1700, 1700, 0, 0, 0, 0}, 1700), 0.025 * 170'000);
    // r_p c = D exactly, legs worthless at p0
    EXPECT_NEAR(combined_payoff(ctx, {1900, 1500, 10, 10, 200, 225}, 1700), 0.0, 1e-9);
    const HedgePlan none{1700, 1700, 0, 0, 0, 0};
    for (double p : {800.0, 1200.0, 2600.0, 4000.0})
        EXPECT_DOUBLE_EQ(combined_payoff(ctx, none, p), 4250 + il(ctx.position, p));
    EXPECT_LT(combined_payoff(ctx, none, 800), 0);
}

TEST(MinPutQty, Examples) {
    EXPECT_EQ(min_put_qty(eth_ctx(1700, 2600)), 0.0);
    EXPECT_LT(rel(min_put_qty(eth_ctx()), kMinPut1000), 1e-13);
    EXPECT_GT(min_put_qty(eth_ctx(900)), min_put_qty(eth_ctx(1000)));
    // equals the slope of il at p_lo
    EXPECT_LT(rel(min_put_qty(eth_ctx()), il_derivative(PositionParams{170'000, 1700}, 1000)), 1e-13);
}

TEST(MinPutQty, BinarySearchOracle) {
    // Smallest q_p keeping the payoff >= 0 on [p_lo, k_p] with the budget
    // tight is the steepest secant of il ending at k_p; with k_p just above
    // p_lo it approaches the closed-form bound from below.
    const auto ctx = eth_ctx();
    const double k_p = 1000 * (1 + 1e-4);
    const double D = ctx.pool_return * ctx.capital() + il(ctx.position, k_p);
    auto ok = [&](double q) {
        const HedgePlan plan{1700, k_p, 0, q, 0, D / q};
        return grid_min([&](double p) { return combined_payoff(ctx, plan, p); },
                        {1000, k_p, 10'000, Spacing::uniform})
                   .value >= -1e-9 * ctx.capital();
    };
    double lo = 1e-6, hi = 100;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
    }
    EXPECT_LE(hi, kMinPut1000 * (1 + 1e-9));
    EXPECT_LT(rel(hi, kMinPut1000), 1e-3);
}

TEST(MinCallQty, Examples) {
    EXPECT_EQ(min_call_qty(eth_ctx(1000, 1700)), 0.0);
    EXPECT_LT(rel(min_call_qty(eth_ctx()), kMinCall2600), 1e-13);
    EXPECT_LT(min_call_qty(eth_ctx(1000, 1e12)), 170'000 / (2.0 * 1700));
    EXPECT_GT(min_call_qty(eth_ctx(1000, 1e12)), 0.999 * 170'000 / (2.0 * 1700));
    EXPECT_LT(rel(-min_call_qty(eth_ctx()), il_derivative(PositionParams{170'000, 1700}, 2600)), 1e-13);
}

TEST(Budget, ArithmeticFixture) {
    const auto pass = budget_check(3000, -500, -1000, 4250);
    EXPECT_TRUE(pass.pass);
    EXPECT_EQ(pass.lhs, 4000);
    EXPECT_EQ(pass.slack(), 250);
    EXPECT_FALSE(budget_check(3000, -500, -1000, 3900).pass);
    const auto edge = budget_check(3000, -500, -1000, 4000);
    EXPECT_TRUE(edge.pass);
    EXPECT_EQ(edge.slack(), 0);
}

TEST(Budget, AtEntryStrikes) {
    const auto ctx = eth_ctx();
    const auto r = budget_ok(ctx, {1700, 1700, 0, 0, 0, 0});
    EXPECT_TRUE(r.pass);
    EXPECT_DOUBLE_EQ(r.slack(), 4250);
}

TEST(VerifyPlan, MinimalPlanCertified) {
    const auto ctx = eth_ctx();
    const auto plan = minimal_plan(ctx, 1500, 1900, 120, 150);
    const auto r = verify_plan(ctx, plan);
    EXPECT_TRUE(r.ineq_put.pass);
    EXPECT_TRUE(r.ineq_budget.pass);
    EXPECT_TRUE(r.ineq_call.pass);
    ASSERT_TRUE(r.oracle.has_value());
    EXPECT_GE(r.oracle->min_value, -1e-9 * ctx.capital());
    EXPECT_GE(r.oracle->n_grid, 10'000u);
    EXPECT_TRUE(r.certified());
}

TEST(VerifyPlan, HalfPutsUncertified) {
    const auto ctx = eth_ctx();
    auto plan = minimal_plan(ctx, 1000, 1900, 20, 150);
    plan.q_p *= 0.5;
    const auto r = verify_plan(ctx, plan);
    EXPECT_FALSE(r.ineq_put.pass);
    EXPECT_FALSE(r.oracle.has_value());
    EXPECT_FALSE(r.certified());
}

TEST(VerifyPlan, DegenerateInterval) {
    const HedgeContext ctx{PositionParams{170'000, 1700}, 0.01, 1700, 1700};
    const auto r = verify_plan(ctx, {1700, 1700, 0, 0, 0, 0});
    EXPECT_TRUE(r.certified());
    EXPECT_EQ(r.oracle->n_grid, 1u);
}

TEST(VerifyPlan, RejectsInadmissibleStrikes) {
    const auto ctx = eth_ctx();
    EXPECT_THROW(verify_plan(ctx, {1900, 1800, 10, 20, 1, 1}), DomainError);  // k_p above p0
    EXPECT_THROW(verify_plan(ctx, {2700, 1500, 10, 20, 1, 1}), DomainError);  // k_c beyond p_hi
    EXPECT_THROW(verify_plan(ctx, {1900, 900, 10, 20, 1, 1}), DomainError);   // k_p below p_lo
    EXPECT_THROW(verify_plan(ctx, {1900, 1500, -1, 20, 1, 1}), DomainError);
    EXPECT_THROW(verify_plan(eth_ctx(1800, 2600), {1900, 1800, 10, 20, 1, 1}), DomainError);
}

TEST(VerifyPlan, MinimaAreZeroSlopeThresholds) {
    const auto ctx = eth_ctx();
    const auto plan = minimal_plan(ctx, 1400, 2100, 100, 100);
    auto f = [&](double p) { return combined_payoff(ctx, plan, p); };
    auto slope = [&](double p) {
        const double h = 1e-6 * p;
        return (f(p + h) - f(p - h)) / (2 * h);
    };
    EXPECT_NEAR(slope(1000 * (1 + 1e-5)), 0.0, 1e-3);
    for (double p = 1010; p < 1400; p += 10) EXPECT_LT(slope(p), -1e-3) << p;
    EXPECT_NEAR(slope(2600 * (1 - 1e-5)), 0.0, 1e-3);
    for (double p = 2110; p < 2595; p += 10) EXPECT_GT(slope(p), 1e-3) << p;
}

TEST(VerifyPlan, MonotoneInQuantitiesAndCost) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 200; ++i) {
        const auto [ctx, plan] = test::random_certified_case(rng);
        ASSERT_TRUE(verify_plan(ctx, plan, {2000}).certified());
        auto more = plan;
        more.q_p *= 1.3;
        more.q_c *= 1.1;
        more.d_p *= plan.q_p / more.q_p;  // D held fixed
        more.d_c = plan.q_c > 0 ? more.d_c * plan.q_c / more.q_c : 0.0;
        while (more.cost() > plan.cost()) more.d_p = std::nextafter(more.d_p, 0.0);
        ASSERT_TRUE(verify_plan(ctx, more, {2000}).inequalities_pass());
        auto cheaper = plan;
        cheaper.d_p *= 0.5;
        cheaper.d_c *= 0.5;
        ASSERT_TRUE(verify_plan(ctx, cheaper, {2000}).certified());
    }
}

TEST(VerifyPlan, RandomSoundness) {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 200; ++i) {
        const auto [ctx, plan] = test::random_certified_case(rng);
        const auto r = verify_plan(ctx, plan);
        ASSERT_TRUE(r.inequalities_pass()) << i;
        ASSERT_GE(r.oracle->min_value, -1e-9 * ctx.capital()) << i;
        // boundary cases of the argument: the payoff at both strikes is >= 0
        ASSERT_GE(combined_payoff(ctx, plan, plan.k_p), -1e-9 * ctx.capital());
        ASSERT_GE(combined_payoff(ctx, plan, plan.k_c), -1e-9 * ctx.capital());
    }
}

TEST(OptimizePlan, SinglePair) {
    const auto ctx = eth_ctx();
    OptionChain chain{"ETH", 1700, "2024-06-26T08:00:00Z", {}};
    const Date exp = *parse_date("2024-07-26");
    chain.quotes.push_back({OptionKind::put, 1500, exp, 10.0, 12.0, 11.0, PremiumCcy::quote});
    chain.quotes.push_back({OptionKind::call, 1900, exp, std::nullopt, std::nullopt, 14.0, PremiumCcy::quote});
    const auto plan = optimize_plan(ctx, chain);
    EXPECT_EQ(plan.k_p, 1500);
    EXPECT_EQ(plan.k_c, 1900);
    EXPECT_EQ(plan.d_p, 11);
    EXPECT_EQ(plan.d_c, 14);
    EXPECT_DOUBLE_EQ(plan.q_p, min_put_qty(ctx));
    EXPECT_TRUE(verify_plan(ctx, plan).certified());
}

TEST(OptimizePlan, PicksCheaperChain) {
    const auto ctx = eth_ctx();
    const Date exp = *parse_date("2024-07-26");
    OptionChain cheap{"ETH", 1700, "t", {}};
    cheap.quotes.push_back({OptionKind::put, 1500, exp, std::nullopt, std::nullopt, 11.0, PremiumCcy::quote});
    cheap.quotes.push_back({OptionKind::call, 1900, exp, std::nullopt, std::nullopt, 14.0, PremiumCcy::quote});
    auto dear = cheap;
    dear.quotes[1].mark = 28.0;
    const auto a = optimize_plan(ctx, cheap);
    const auto b = optimize_plan(ctx, dear);
    EXPECT_DOUBLE_EQ(b.cost() - a.cost(), a.q_c * a.d_c);
}

TEST(OptimizePlan, TieBreaks) {
    const auto ctx = eth_ctx();
    const Date exp = *parse_date("2024-07-26");
    OptionChain chain{"ETH", 1700, "t", {}};
    // both calls cost the same: the narrower strangle (lower call) wins
    chain.quotes.push_back({OptionKind::put, 1500, exp, std::nullopt, std::nullopt, 10.0, PremiumCcy::quote});
    chain.quotes.push_back({OptionKind::call, 2000, exp, std::nullopt, std::nullopt, 10.0, PremiumCcy::quote});
    chain.quotes.push_back({OptionKind::call, 1900, exp, std::nullopt, std::nullopt, 10.0, PremiumCcy::quote});
    EXPECT_EQ(optimize_plan(ctx, chain).k_c, 1900);
}

TEST(OptimizePlan, InfeasibleReportsViolation) {
    const auto ctx = eth_ctx();
    const Date exp = *parse_date("2024-07-26");
    OptionChain chain{"ETH", 1700, "t", {}};
    chain.quotes.push_back({OptionKind::put, 1500, exp, std::nullopt, std::nullopt, 1000.0, PremiumCcy::quote});
    chain.quotes.push_back({OptionKind::call, 1900, exp, std::nullopt, std::nullopt, 1000.0, PremiumCcy::quote});
    try {
        optimize_plan(ctx, chain);
        FAIL() << "expected InfeasibleError";
    } catch (const InfeasibleError& e) {
        const HedgePlan plan{1900, 1500, min_call_qty(ctx), min_put_qty(ctx), 1000, 1000};
        EXPECT_DOUBLE_EQ(e.best_violation(), -budget_ok(ctx, plan).slack());
        EXPECT_GT(e.best_violation(), 0);
    }
    OptionChain empty{"ETH", 1700, "t", {}};
    empty.quotes.push_back({OptionKind::put, 1500, exp, std::nullopt, std::nullopt, 1.0, PremiumCcy::quote});
    EXPECT_THROW(optimize_plan(ctx, empty), InfeasibleError);
}

TEST(OptimizePlan, RequiresExpiryWhenAmbiguous) {
    const auto ctx = eth_ctx();
    auto chain = test::synthetic_chain(1700, 1000, 2600, 5, 0.6, 1.0, "2024-07-26");
    auto later = test::synthetic_chain(1700, 1000, 2600, 5, 0.6, 1.0, "2024-08-30");
    chain.quotes.insert(chain.quotes.end(), later.quotes.begin(), later.quotes.end());
    EXPECT_THROW(optimize_plan(ctx, chain), DomainError);
    const auto plan = optimize_plan(ctx, chain, {parse_date("2024-08-30")});
    EXPECT_TRUE(verify_plan(ctx, plan).certified());
}

TEST(PayoffCurve, ColumnsConsistent) {
    const auto ctx = eth_ctx();
    const auto plan = minimal_plan(ctx, 1500, 1900, 120, 150);
    const auto rows = payoff_curve(ctx, plan, coverage_grid(ctx, 100, Spacing::geometric));
    EXPECT_EQ(rows.size(), 102u);  // plus both strikes
    for (const auto& r : rows)
        EXPECT_NEAR(r.combined, 4250 + r.strangle + r.il, 1e-9);
}
