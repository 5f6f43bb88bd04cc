#ifndef LPHEDGE_CHAIN_JSON_HPP
#define LPHEDGE_CHAIN_JSON_HPP

#include <istream>
#include <iterator>
#include <string>

#include <json.hpp>

#include "chain.hpp"

namespace lphedge {

enum class ChainFormat { csv, json };

namespace detail {

// Numbers may arrive as JSON numbers or as decimal strings.
inline std::optional<double> json_number(const nlohmann::json& j, const char* key, bool required) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        if (required) throw ParseError(0, std::string("missing field '") + key + "'");
        return std::nullopt;
    }
    if (it->is_number()) return it->get<double>();
    if (it->is_string()) {
        const auto s = it->get<std::string>();
        if (s.empty() && !required) return std::nullopt;
        if (auto v = parse_number(s)) return v;
    }
    throw ParseError(0, std::string("field '") + key + "' is not a number");
}

inline std::string json_string(const nlohmann::json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string()) throw ParseError(0, std::string("missing string field '") + key + "'");
    return it->get<std::string>();
}

} // namespace detail

/// Reads `{underlying, snapshot_time, spot, quotes: [{kind, strike, expiry,
/// bid?, ask?, mark?, premium_ccy}]}`.
inline OptionChain parse_chain_json(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(std::string(std::istreambuf_iterator<char>(in), {}));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(0, e.what());
    }
    if (!doc.is_object()) throw ParseError(0, "chain document must be a JSON object");

    OptionChain chain;
    chain.underlying = detail::json_string(doc, "underlying");
    chain.snapshot_time = detail::json_string(doc, "snapshot_time");
    chain.spot = *detail::json_number(doc, "spot", true);
    if (!(chain.spot > 0.0)) throw DataError("spot must be > 0");
    const auto quotes = doc.find("quotes");
    if (quotes == doc.end() || !quotes->is_array()) throw ParseError(0, "missing array field 'quotes'");

    std::size_t i = 0;
    for (const auto& jq : *quotes) {
        const std::string where = "quote " + std::to_string(i++) + ": ";
        if (!jq.is_object()) throw ParseError(0, where + "not an object");
        OptionQuote q;
        const auto kind = detail::json_string(jq, "kind");
        if (kind == "call")
            q.kind = OptionKind::call;
        else if (kind == "put")
            q.kind = OptionKind::put;
        else
            throw ParseError(0, where + "kind must be 'call' or 'put'");
        q.strike = *detail::json_number(jq, "strike", true);
        const auto d = parse_date(detail::json_string(jq, "expiry"));
        if (!d) throw ParseError(0, where + "invalid expiry");
        q.expiry = *d;
        q.bid = detail::json_number(jq, "bid", false);
        q.ask = detail::json_number(jq, "ask", false);
        q.mark = detail::json_number(jq, "mark", false);
        const auto ccy = jq.contains("premium_ccy") ? detail::json_string(jq, "premium_ccy") : std::string("quote");
        if (ccy == "quote")
            q.premium_ccy = PremiumCcy::quote;
        else if (ccy == "base")
            q.premium_ccy = PremiumCcy::base;
        else
            throw ParseError(0, where + "premium_ccy must be 'quote' or 'base'");
        validate_quote(q, where);
        chain.quotes.push_back(in_quote_currency(q, chain.spot));
    }
    validate_chain(chain);
    return chain;
}

inline nlohmann::ordered_json chain_to_json(const OptionChain& chain) {
    nlohmann::ordered_json doc;
    doc["underlying"] = chain.underlying;
    doc["snapshot_time"] = chain.snapshot_time;
    doc["spot"] = chain.spot;
    auto& arr = doc["quotes"] = nlohmann::ordered_json::array();
    for (const auto& q : chain.quotes) {
        nlohmann::ordered_json jq;
        jq["kind"] = to_string(q.kind);
        jq["strike"] = q.strike;
        jq["expiry"] = format_date(q.expiry);
        if (q.bid) jq["bid"] = *q.bid;
        if (q.ask) jq["ask"] = *q.ask;
        if (q.mark) jq["mark"] = *q.mark;
        jq["premium_ccy"] = to_string(q.premium_ccy);
        arr.push_back(std::move(jq));
    }
    return doc;
}

inline std::string serialize_chain_json(const OptionChain& chain) { return chain_to_json(chain).dump(2) + "\n"; }

inline OptionChain parse_chain(std::istream& in, ChainFormat format, std::vector<std::string>* warnings = nullptr) {
    return format == ChainFormat::csv ? parse_chain_csv(in, warnings) : parse_chain_json(in);
}

inline std::string serialize_chain(const OptionChain& chain, ChainFormat format) {
    return format == ChainFormat::csv ? serialize_chain_csv(chain) : serialize_chain_json(chain);
}

} // namespace lphedge

#endif // LPHEDGE_CHAIN_JSON_HPP
