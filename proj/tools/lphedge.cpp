// lphedge: pool replication, impermanent loss curves and strangle hedges.
//
// Exit status: 0 success / certified, 1 I/O or data error, 2 usage error,
// 3 uncertified plan or infeasible search.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lphedge/lphedge.hpp"

namespace {

using namespace lphedge;

enum Exit { ok = 0, io_error = 1, usage_error = 2, not_certified = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) { return detail::format_number(v); }

Spacing parse_spacing(const std::string& s) {
    if (s == "geometric") return Spacing::geometric;
    if (s == "uniform") return Spacing::uniform;
    throw UsageError("spacing must be 'geometric' or 'uniform'");
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out.flush()) throw IoError("write to '" + path + "' failed");
}

struct Globals {
    std::string config_path;
    std::string out;
    bool json = false;
    RunConfig cfg;
};

void load_config(Globals& g) {
    std::string path = g.config_path;
    if (path.empty())
        if (const char* env = std::getenv("CPMM_HEDGE_CONFIG")) path = env;
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    try {
        g.cfg = parse_config(in);
    } catch (const ParseError& e) {
        throw UsageError("config " + path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// replicate

struct ReplicateArgs {
    double k = 0, m = 0;
    std::size_t grid_n = 0, eval_n = 0;
    double k_min = 0, k_max = 0, eval_lo = 0, eval_hi = 0;
    std::string spacing;
    std::string legs_out, error_out;
    bool expand_anchor = false;
    CLI::App* cmd = nullptr;
};

int run_replicate(const Globals& g, ReplicateArgs& a) {
    auto given = [&](const char* name) { return a.cmd->count(name) > 0; };
    const std::size_t n = given("--grid-n") ? a.grid_n : g.cfg.grid_n;
    const std::size_t n_eval = given("--eval-n") ? a.eval_n : g.cfg.eval_n;
    const Spacing spacing = parse_spacing(given("--spacing") ? a.spacing : g.cfg.spacing);
    if (!(a.k > 0) || !(a.m > 0)) throw UsageError("--k and --m must be > 0");
    const StrikeGrid grid{given("--k-min") ? a.k_min : a.m * g.cfg.k_min_factor,
                          given("--k-max") ? a.k_max : a.m * g.cfg.k_max_factor, n, spacing};
    const double lo = given("--eval-lo") ? a.eval_lo : a.m / 10.0;
    const double hi = given("--eval-hi") ? a.eval_hi : a.m * 10.0;
    if (!(lo > 0 && lo < hi)) throw UsageError("evaluation band requires 0 < eval-lo < eval-hi");
    if (n_eval < 2) throw UsageError("--eval-n must be >= 2");

    ReplicationPortfolio port;
    try {
        port = build_portfolio(a.k, a.m, grid);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    const PoolPayoff payoff{a.k};
    const auto curve = replication_curve(payoff, port, grid, GridSpec{lo, hi, n_eval, Spacing::geometric});
    const auto rep = summarize(curve);
    const double tail = put_tail_gap(a.k, grid.k_min);

    std::string legs_path = a.legs_out, error_path = a.error_out;
    if (!g.out.empty()) {
        if (legs_path.empty()) legs_path = g.out + ".legs.csv";
        if (error_path.empty()) error_path = g.out + ".error.csv";
    }
    if (!legs_path.empty()) {
        std::string csv = "side,strike,weight\n";
        for (const auto& l : option_legs(port, a.expand_anchor))
            csv += std::string(to_string(l.kind)) + ',' + num(l.leg.strike) + ',' + num(l.leg.weight) + '\n';
        write_file(legs_path, csv);
    }
    if (!error_path.empty()) {
        std::string csv = "price,target,replicated,rel_error\n";
        for (const auto& pt : curve)
            csv += num(pt.price) + ',' + num(pt.target) + ',' + num(pt.replicated) + ',' + num(pt.rel_error) + '\n';
        write_file(error_path, csv);
    }
    if (rep.n_out_of_band > 0)
        std::cerr << "warning: " << rep.n_out_of_band
                  << " evaluation points lie outside the strike grid and were excluded\n";

    if (g.json) {
        nlohmann::ordered_json j{{"bond_notional", port.bond_notional},
                                 {"futures_notional", port.futures_notional},
                                 {"anchor", port.anchor},
                                 {"put_legs", port.put_legs.size()},
                                 {"call_legs", port.call_legs.size()},
                                 {"k_min", grid.k_min},
                                 {"k_max", grid.k_max},
                                 {"put_tail_gap", tail},
                                 {"max_rel_error", rep.max_rel_error},
                                 {"argmax", rep.argmax},
                                 {"n_evaluated", rep.n_evaluated},
                                 {"n_out_of_band", rep.n_out_of_band}};
        std::cout << j.dump(2) << '\n';
    } else {
        std::printf("bond_notional       %s\n", num(port.bond_notional).c_str());
        std::printf("futures_notional    %s\n", num(port.futures_notional).c_str());
        std::printf("strike_grid         [%s, %s] %zu per side\n", num(grid.k_min).c_str(), num(grid.k_max).c_str(),
                    grid.n);
        std::printf("put_tail_gap        %s\n", num(tail).c_str());
        std::printf("max_rel_error       %s at %s (%zu points, %zu out of band)\n", num(rep.max_rel_error).c_str(),
                    num(rep.argmax).c_str(), rep.n_evaluated, rep.n_out_of_band);
    }
    return ok;
}

// ---------------------------------------------------------------------------
// il

struct IlArgs {
    double c = 0, p0 = 0;
    std::string band, spacing;
    std::size_t n = 0;
    CLI::App* cmd = nullptr;
};

std::pair<double, double> parse_band(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw UsageError("--band expects lo:hi");
    const auto lo = detail::parse_number(std::string_view(s).substr(0, colon));
    const auto hi = detail::parse_number(std::string_view(s).substr(colon + 1));
    if (!lo || !hi) throw UsageError("--band expects numeric lo:hi");
    if (!(*lo > 0) || !(*lo < *hi)) throw UsageError("--band requires 0 < lo < hi");
    return {*lo, *hi};
}

int run_il(const Globals& g, IlArgs& a) {
    const auto [lo, hi] = parse_band(a.band);
    const std::size_t n = a.cmd->count("--n") ? a.n : g.cfg.il_n;
    if (n < 2) throw UsageError("--n must be >= 2");
    if (!(a.c > 0) || !(a.p0 > 0)) throw UsageError("--c and --p0 must be > 0");
    const Spacing spacing = parse_spacing(a.cmd->count("--spacing") ? a.spacing : g.cfg.spacing);
    const PositionParams pos{a.c, a.p0};
    const double floor = 1e-12 * a.p0;

    // Exactly n rows; the interior point nearest p0 is moved onto p0 so the
    // zero-loss row appears verbatim.
    auto pts = grid_points(GridSpec{std::max(lo, floor), hi, n, spacing});
    if (pts.size() > 2 && a.p0 > pts.front() && a.p0 < pts.back()) {
        auto nearest = pts.begin() + 1;
        for (auto it = pts.begin() + 1; it != pts.end() - 1; ++it)
            if (std::abs(*it - a.p0) < std::abs(*nearest - a.p0)) nearest = it;
        *nearest = a.p0;
    }
    std::string csv = "price,il,v_pool,v_hold\n";
    for (double p : pts)
        csv += num(p) + ',' + num(il(pos, p)) + ',' + num(v_pool(pos, p)) + ',' + num(v_hold(pos, p)) + '\n';
    if (g.out.empty())
        std::cout << csv;
    else
        write_file(g.out, csv);
    return ok;
}

// ---------------------------------------------------------------------------
// hedge verify / optimize, certify

struct ContextArgs {
    double c = 0, p0 = 0, rp = 0, pi = 0, ps = 0;
};
struct PlanArgs {
    double kc = 0, kp = 0, qc = 0, qp = 0, dc = 0, dp = 0;
};

void add_context_flags(CLI::App* cmd, ContextArgs& ctx, bool p0_required) {
    cmd->add_option("--c", ctx.c, "Capital deposited in the pool (quote currency)")->required();
    auto* p0 = cmd->add_option("--p0", ctx.p0, "Entry price (quote per base)");
    if (p0_required) p0->required();
    cmd->add_option("--rp", ctx.rp, "Total pool return over the hedge horizon (fraction)")->required();
    cmd->add_option("--pi", ctx.pi, "Lower end of the coverage interval")->required();
    cmd->add_option("--ps", ctx.ps, "Upper end of the coverage interval")->required();
}

void add_plan_flags(CLI::App* cmd, PlanArgs& plan) {
    cmd->add_option("--kc", plan.kc, "Call strike")->required();
    cmd->add_option("--kp", plan.kp, "Put strike")->required();
    cmd->add_option("--qc", plan.qc, "Call quantity")->required();
    cmd->add_option("--qp", plan.qp, "Put quantity")->required();
    cmd->add_option("--dc", plan.dc, "Call premium per unit (quote currency)")->required();
    cmd->add_option("--dp", plan.dp, "Put premium per unit (quote currency)")->required();
}

HedgeContext make_context(const ContextArgs& a) {
    try {
        HedgeContext ctx{PositionParams{a.c, a.p0}, a.rp, a.pi, a.ps};
        ctx.validate();
        return ctx;
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

void print_report(const HedgeReport& r, bool json) {
    if (json) {
        std::cout << to_json(r).dump(2) << '\n';
        return;
    }
    const auto& c = r.cert;
    auto line = [](const char* name, const char* lhs_name, const char* rhs_name, const InequalityCheck& chk) {
        std::printf("%-16s %-4s  %s %s <= %s %s  (slack %s)\n", name, chk.pass ? "PASS" : "FAIL", lhs_name,
                    num(chk.lhs).c_str(), rhs_name, num(chk.rhs).c_str(), num(chk.slack()).c_str());
    };
    std::printf("%-16s %s\n", "status", c.certified() ? "certified" : "uncertified");
    std::printf("%-16s k_p %s  q_p %s  d_p %s\n", "put leg", num(r.plan.k_p).c_str(), num(r.plan.q_p).c_str(),
                num(r.plan.d_p).c_str());
    std::printf("%-16s k_c %s  q_c %s  d_c %s\n", "call leg", num(r.plan.k_c).c_str(), num(r.plan.q_c).c_str(),
                num(r.plan.d_c).c_str());
    std::printf("%-16s %s\n", "cost D", num(r.plan.cost()).c_str());
    line("put quantity", "min", "q_p", c.ineq_put);
    line("budget", "D-minIL", "r_p*c", c.ineq_budget);
    line("call quantity", "min", "q_c", c.ineq_call);
    if (c.oracle)
        std::printf("%-16s min %s at %s over %zu points (eps %s)\n", "oracle", num(c.oracle->min_value).c_str(),
                    num(c.oracle->argmin).c_str(), c.oracle->n_grid, num(c.eps).c_str());
    else
        std::printf("%-16s not run (inequalities not all satisfied)\n", "oracle");
}

void write_curve(const Globals& g, const HedgeContext& ctx, const HedgePlan& plan) {
    if (g.out.empty()) return;
    std::string csv = "price,il,strangle,combined\n";
    for (const auto& row : payoff_curve(ctx, plan, coverage_grid(ctx, g.cfg.il_n, parse_spacing(g.cfg.spacing))))
        csv += num(row.price) + ',' + num(row.il) + ',' + num(row.strangle) + ',' + num(row.combined) + '\n';
    write_file(g.out, csv);
}

VerifyOptions verify_options(const Globals& g) { return {g.cfg.oracle_n, g.cfg.cert_eps_rel, Spacing::geometric}; }

int run_verify(const Globals& g, const ContextArgs& ca, const PlanArgs& pa) {
    const auto ctx = make_context(ca);
    const HedgePlan plan{pa.kc, pa.kp, pa.qc, pa.qp, pa.dc, pa.dp};
    CertificationReport cert;
    try {
        cert = verify_plan(ctx, plan, verify_options(g));
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    print_report({plan, cert}, g.json);
    write_curve(g, ctx, plan);
    return cert.certified() ? ok : not_certified;
}

struct OptimizeArgs {
    std::string chain_path, format, expiry;
};

OptionChain read_chain(const std::string& path, const std::string& format_flag) {
    std::string format = format_flag;
    if (format.empty()) format = path.size() >= 5 && path.substr(path.size() - 5) == ".json" ? "json" : "csv";
    if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read chain file '" + path + "'");
    std::vector<std::string> warnings;
    try {
        auto chain = parse_chain(in, format == "csv" ? ChainFormat::csv : ChainFormat::json, &warnings);
        for (const auto& w : warnings) std::cerr << "warning: " << path << ": " << w << '\n';
        return chain;
    } catch (const DataError& e) {
        throw IoError(path + ": " + e.what());
    }
}

int run_optimize(const Globals& g, CLI::App* cmd, ContextArgs ca, const OptimizeArgs& oa) {
    const auto chain = read_chain(oa.chain_path, oa.format);
    if (cmd->count("--p0") == 0) ca.p0 = chain.spot;
    const auto ctx = make_context(ca);
    OptimizeOptions opt;
    if (!oa.expiry.empty()) {
        opt.expiry = parse_date(oa.expiry);
        if (!opt.expiry) throw UsageError("--expiry expects YYYY-MM-DD");
    }
    HedgePlan plan;
    try {
        plan = optimize_plan(ctx, chain, opt);
    } catch (const InfeasibleError& e) {
        if (g.json)
            std::cout << nlohmann::ordered_json{{"status", "infeasible"},
                                                {"message", e.what()},
                                                {"best_violation", e.best_violation()}}
                             .dump(2)
                      << '\n';
        else
            std::printf("%-16s infeasible\n%-16s %s\n", "status", "reason", e.what());
        return not_certified;
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    const auto cert = verify_plan(ctx, plan, verify_options(g));
    print_report({plan, cert}, g.json);
    write_curve(g, ctx, plan);
    return cert.certified() ? ok : not_certified;
}

struct CertifyArgs {
    double lo = 0, hi = 0, eps_rel = 0;
    std::size_t n = 0;
    CLI::App* cmd = nullptr;
};

int run_certify(const Globals& g, const ContextArgs& ca, const PlanArgs& pa, const CertifyArgs& a) {
    const auto ctx = make_context(ca);
    const HedgePlan plan{pa.kc, pa.kp, pa.qc, pa.qp, pa.dc, pa.dp};
    const double lo = a.cmd->count("--lo") ? a.lo : ctx.p_lo;
    const double hi = a.cmd->count("--hi") ? a.hi : ctx.p_hi;
    const std::size_t n = a.cmd->count("--n") ? a.n : g.cfg.oracle_n;
    const double eps = (a.cmd->count("--eps-rel") ? a.eps_rel : g.cfg.cert_eps_rel) * ctx.capital();
    const GridSpec spec{lo, hi, lo == hi ? std::size_t{1} : n, Spacing::geometric};
    const std::array<double, 3> kinks{plan.k_p, ctx.entry_price(), plan.k_c};
    Certificate cert;
    try {
        cert = certify_nonnegative([&](double p) { return combined_payoff(ctx, plan, p); }, spec, eps, kinks);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    if (g.json) {
        std::cout << nlohmann::ordered_json{{"status", cert.pass ? "pass" : "fail"},
                                            {"min", cert.min_value},
                                            {"argmin", cert.witness},
                                            {"n_grid", cert.n_points},
                                            {"eps", cert.eps}}
                         .dump(2)
                  << '\n';
    } else {
        std::printf("%-16s %s\n", "status", cert.pass ? "pass" : "fail");
        std::printf("%-16s %s at %s over %zu points on [%s, %s] (eps %s)\n", "min combined",
                    num(cert.min_value).c_str(), num(cert.witness).c_str(), cert.n_points, num(lo).c_str(),
                    num(hi).c_str(), num(cert.eps).c_str());
    }
    write_curve(g, ctx, plan);
    return cert.pass ? ok : not_certified;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constant product pool replication, impermanent loss and strangle hedging"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "Flat key = value config file (env CPMM_HEDGE_CONFIG)");
    app.add_option("--out", g.out, "Output path (CSV curve; prefix for replicate)");
    app.add_flag("--json", g.json, "Print results as JSON");

    ReplicateArgs rep;
    rep.cmd = app.add_subcommand("replicate", "Static bond/futures/options portfolio replicating 2 sqrt(k P)");
    rep.cmd->fallthrough();
    rep.cmd->add_option("--k", rep.k, "Pool invariant k = x y")->required();
    rep.cmd->add_option("--m", rep.m, "Anchor price")->required();
    rep.cmd->add_option("--grid-n", rep.grid_n, "Strikes per side");
    rep.cmd->add_option("--k-min", rep.k_min, "Lowest strike (default m/50)");
    rep.cmd->add_option("--k-max", rep.k_max, "Highest strike (default 50 m)");
    rep.cmd->add_option("--spacing", rep.spacing, "geometric | uniform");
    rep.cmd->add_option("--eval-lo", rep.eval_lo, "Error band lower end (default m/10)");
    rep.cmd->add_option("--eval-hi", rep.eval_hi, "Error band upper end (default 10 m)");
    rep.cmd->add_option("--eval-n", rep.eval_n, "Error curve points");
    rep.cmd->add_option("--legs-out", rep.legs_out, "Legs CSV path (side,strike,weight)");
    rep.cmd->add_option("--error-out", rep.error_out, "Error curve CSV path");
    rep.cmd->add_flag("--expand-anchor", rep.expand_anchor, "List the futures as anchor call/put legs");

    IlArgs ila;
    ila.cmd = app.add_subcommand("il", "Impermanent loss curve: price,il,v_pool,v_hold");
    ila.cmd->fallthrough();
    ila.cmd->add_option("--c", ila.c, "Capital")->required();
    ila.cmd->add_option("--p0", ila.p0, "Entry price")->required();
    ila.cmd->add_option("--band", ila.band, "Price band lo:hi")->required();
    ila.cmd->add_option("--n", ila.n, "Number of rows");
    ila.cmd->add_option("--spacing", ila.spacing, "geometric | uniform");

    auto* hedge = app.add_subcommand("hedge", "Long strangle hedge of impermanent loss");
    hedge->fallthrough();
    hedge->require_subcommand(1);

    ContextArgs vctx;
    PlanArgs vplan;
    auto* verify = hedge->add_subcommand("verify", "Check a plan against the sufficient inequalities and the oracle");
    verify->fallthrough();
    add_context_flags(verify, vctx, true);
    add_plan_flags(verify, vplan);

    ContextArgs octx;
    OptimizeArgs oargs;
    auto* optimize = hedge->add_subcommand("optimize", "Cheapest certified strangle from an options chain");
    optimize->fallthrough();
    add_context_flags(optimize, octx, false);
    optimize->add_option("--chain", oargs.chain_path, "Chain file (CSV or JSON)")->required();
    optimize->add_option("--format", oargs.format, "csv | json (default: by extension)");
    optimize->add_option("--expiry", oargs.expiry, "Expiry date YYYY-MM-DD");

    ContextArgs cctx;
    PlanArgs cplan;
    CertifyArgs cargs;
    cargs.cmd = app.add_subcommand("certify", "Grid check that the combined payoff is non-negative");
    cargs.cmd->fallthrough();
    add_context_flags(cargs.cmd, cctx, true);
    add_plan_flags(cargs.cmd, cplan);
    cargs.cmd->add_option("--lo", cargs.lo, "Lower price (default --pi)");
    cargs.cmd->add_option("--hi", cargs.hi, "Upper price (default --ps)");
    cargs.cmd->add_option("--n", cargs.n, "Grid points");
    cargs.cmd->add_option("--eps-rel", cargs.eps_rel, "Tolerance as a fraction of capital");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage_error;
    }

    try {
        load_config(g);
        if (rep.cmd->parsed()) return run_replicate(g, rep);
        if (ila.cmd->parsed()) return run_il(g, ila);
        if (verify->parsed()) return run_verify(g, vctx, vplan);
        if (optimize->parsed()) return run_optimize(g, optimize, octx, oargs);
        if (cargs.cmd->parsed()) return run_certify(g, cctx, cplan, cargs);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return usage_error;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return io_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return io_error;
    }
    return usage_error;
}
