#ifndef LPHEDGE_REPORT_JSON_HPP
#define LPHEDGE_REPORT_JSON_HPP

#include <string>

#include <json.hpp>

#include "errors.hpp"
#include "strangle.hpp"

namespace lphedge {

/// A plan together with its certification, as printed by `hedge` commands.
struct HedgeReport {
    HedgePlan plan;
    CertificationReport cert;

    friend bool operator==(const HedgeReport&, const HedgeReport&) = default;
};

inline nlohmann::ordered_json to_json(const InequalityCheck& c) {
    return {{"pass", c.pass}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"slack", c.slack()}};
}

inline nlohmann::ordered_json to_json(const HedgePlan& p) {
    return {{"k_c", p.k_c}, {"k_p", p.k_p}, {"q_c", p.q_c}, {"q_p", p.q_p},
            {"d_c", p.d_c}, {"d_p", p.d_p}, {"cost", p.cost()}};
}

inline nlohmann::ordered_json to_json(const HedgeReport& r) {
    nlohmann::ordered_json j;
    j["status"] = r.cert.certified() ? "certified" : "uncertified";
    j["plan"] = to_json(r.plan);
    j["ineq_put"] = to_json(r.cert.ineq_put);
    j["ineq_budget"] = to_json(r.cert.ineq_budget);
    j["ineq_call"] = to_json(r.cert.ineq_call);
    if (r.cert.oracle)
        j["oracle"] = {{"min", r.cert.oracle->min_value},
                       {"argmin", r.cert.oracle->argmin},
                       {"n_grid", r.cert.oracle->n_grid}};
    else
        j["oracle"] = nullptr;
    j["eps"] = r.cert.eps;
    return j;
}

/// Inverse of to_json. Derived fields (status, cost, slack) are ignored.
inline HedgeReport hedge_report_from_json(const nlohmann::json& j) {
    try {
        auto check = [](const nlohmann::json& c) {
            return InequalityCheck{c.at("pass").get<bool>(), c.at("lhs").get<double>(), c.at("rhs").get<double>()};
        };
        const auto& p = j.at("plan");
        HedgeReport r{{p.at("k_c").get<double>(), p.at("k_p").get<double>(), p.at("q_c").get<double>(),
                       p.at("q_p").get<double>(), p.at("d_c").get<double>(), p.at("d_p").get<double>()},
                      {}};
        r.cert.ineq_put = check(j.at("ineq_put"));
        r.cert.ineq_budget = check(j.at("ineq_budget"));
        r.cert.ineq_call = check(j.at("ineq_call"));
        if (const auto& o = j.at("oracle"); !o.is_null())
            r.cert.oracle = OracleResult{o.at("min").get<double>(), o.at("argmin").get<double>(),
                                         o.at("n_grid").get<std::size_t>()};
        r.cert.eps = j.at("eps").get<double>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("malformed hedge report: ") + e.what());
    }
}

inline HedgeReport hedge_report_from_json(const std::string& text) {
    try {
        return hedge_report_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(0, e.what());
    }
}

} // namespace lphedge

#endif // LPHEDGE_REPORT_JSON_HPP
