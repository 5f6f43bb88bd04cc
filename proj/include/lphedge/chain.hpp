#ifndef LPHEDGE_CHAIN_HPP
#define LPHEDGE_CHAIN_HPP

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "errors.hpp"

namespace lphedge {

enum class OptionKind { call, put };
enum class PremiumCcy { quote, base };

/// Expiries are matched by calendar date (UTC); intraday cut times are dropped.
using Date = std::chrono::year_month_day;

/// One listed European option. Premiums are per unit of the underlying, in
/// `premium_ccy`; any of bid/ask/mark may be missing.
struct OptionQuote {
    OptionKind kind = OptionKind::call;
    double strike = 0.0;
    Date expiry{};
    std::optional<double> bid;
    std::optional<double> ask;
    std::optional<double> mark;
    PremiumCcy premium_ccy = PremiumCcy::quote;

    friend bool operator==(const OptionQuote&, const OptionQuote&) = default;
};

struct OptionChain {
    std::string underlying;
    double spot = 0.0;
    std::string snapshot_time;
    std::vector<OptionQuote> quotes;

    friend bool operator==(const OptionChain&, const OptionChain&) = default;
};

inline std::string_view to_string(OptionKind k) { return k == OptionKind::call ? "call" : "put"; }
inline std::string_view to_string(PremiumCcy c) { return c == PremiumCcy::quote ? "quote" : "base"; }

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::optional<double> parse_number(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

/// Shortest-form decimal with 15 significant digits.
inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

} // namespace detail

/// Parses "YYYY-MM-DD", ignoring any time-of-day suffix ("2024-03-29T08:00:00Z").
inline std::optional<Date> parse_date(std::string_view s) {
    s = detail::trim(s);
    if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    if (s.size() > 10 && s[10] != 'T' && s[10] != ' ') return std::nullopt;
    int y = 0;
    unsigned m = 0, d = 0;
    auto num = [&](std::size_t off, std::size_t len, auto& out) {
        const auto [ptr, ec] = std::from_chars(s.data() + off, s.data() + off + len, out);
        return ec == std::errc{} && ptr == s.data() + off + len;
    };
    if (!num(0, 4, y) || !num(5, 2, m) || !num(8, 2, d)) return std::nullopt;
    const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) return std::nullopt;
    return date;
}

inline std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                  static_cast<unsigned>(d.day()));
    return buf;
}

/// Restates base-currency premiums in quote currency at `spot`. Quotes
/// already in quote currency are returned unchanged.
inline OptionQuote in_quote_currency(OptionQuote q, double spot) {
    if (q.premium_ccy == PremiumCcy::quote) return q;
    for (auto* p : {&q.bid, &q.ask, &q.mark})
        if (*p) **p *= spot;
    q.premium_ccy = PremiumCcy::quote;
    return q;
}

/// Checks the per-quote invariants; `where` prefixes the error message.
inline void validate_quote(const OptionQuote& q, const std::string& where = {}) {
    if (!(q.strike > 0.0) || !std::isfinite(q.strike)) throw DataError(where + "strike must be > 0");
    if (!q.expiry.ok()) throw DataError(where + "invalid expiry date");
    for (const auto* p : {&q.bid, &q.ask, &q.mark})
        if (*p && !(**p >= 0.0)) throw DataError(where + "premiums must be >= 0");
    if (q.bid && q.ask && *q.bid > *q.ask) throw DataError(where + "bid exceeds ask");
}

inline void validate_chain(const OptionChain& chain) {
    if (!(chain.spot > 0.0) || !std::isfinite(chain.spot)) throw DataError("spot must be > 0");
    std::set<std::tuple<int, double, int>> seen;
    for (const auto& q : chain.quotes) {
        validate_quote(q);
        const auto key = std::tuple{static_cast<int>(q.kind), q.strike,
                                    std::chrono::sys_days{q.expiry}.time_since_epoch().count()};
        if (!seen.insert(key).second)
            throw DataError("duplicate quote: " + std::string(to_string(q.kind)) + " strike " +
                            detail::format_number(q.strike) + " expiry " + format_date(q.expiry));
    }
}

/// Premium used for trading decisions: (bid + ask) / 2 when both sides are
/// quoted, otherwise the mark.
inline double mid_price(const OptionQuote& q) {
    if (q.bid && q.ask) return 0.5 * (*q.bid + *q.ask);
    if (q.mark) return *q.mark;
    throw DataError("no usable premium for " + std::string(to_string(q.kind)) + " strike " +
                    detail::format_number(q.strike));
}

/// Quotes of one kind and expiry with lo <= strike <= hi, ascending by strike.
inline std::vector<OptionQuote> filter(const OptionChain& chain, const Date& expiry, OptionKind kind, double lo,
                                       double hi) {
    if (lo > hi) throw DomainError("strike band lo must not exceed hi");
    std::vector<OptionQuote> out;
    for (const auto& q : chain.quotes)
        if (q.kind == kind && q.expiry == expiry && q.strike >= lo && q.strike <= hi) out.push_back(q);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.strike < b.strike; });
    return out;
}

/// Distinct expiries present in the chain, ascending.
inline std::vector<Date> expiries(const OptionChain& chain) {
    std::set<Date> s;
    for (const auto& q : chain.quotes) s.insert(q.expiry);
    return {s.begin(), s.end()};
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline constexpr std::string_view chain_csv_header =
    "underlying,snapshot_time,spot,kind,strike,expiry,bid,ask,mark,premium_ccy";

/**
 * Reads the headered CSV export. Columns are located by name; unknown extra
 * columns are skipped and reported through `warnings` (when non-null). Every
 * row repeats underlying, snapshot_time and spot, which must agree.
 * Base-currency premiums are converted to quote currency at the spot.
 */
inline OptionChain parse_chain_csv(std::istream& in, std::vector<std::string>* warnings = nullptr) {
    static constexpr std::string_view required[] = {"underlying", "snapshot_time", "spot", "kind",
                                                    "strike",     "expiry",        "bid",  "ask",
                                                    "mark",       "premium_ccy"};
    enum Col { underlying, snapshot_time, spot, kind, strike, expiry, bid, ask, mark, premium_ccy, n_cols };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!detail::trim(line).empty()) break;
    }
    if (detail::trim(line).empty()) throw ParseError(0, "empty input: missing CSV header");

    const auto header = detail::split_csv(line);
    std::size_t index[n_cols];
    for (int c = 0; c < n_cols; ++c) {
        const auto it = std::find(header.begin(), header.end(), required[c]);
        if (it == header.end()) throw ParseError(line_no, "missing required column '" + std::string(required[c]) + "'");
        index[c] = static_cast<std::size_t>(it - header.begin());
    }
    if (warnings)
        for (auto h : header)
            if (std::find(std::begin(required), std::end(required), h) == std::end(required))
                warnings->push_back("ignoring unknown column '" + std::string(h) + "'");

    OptionChain chain;
    bool have_row = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_csv(line);
        if (fields.size() != header.size())
            throw ParseError(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                                          std::to_string(fields.size()));
        auto field = [&](Col c) { return fields[index[c]]; };
        auto number = [&](Col c) {
            const auto v = detail::parse_number(field(c));
            if (!v) throw ParseError(line_no, "invalid number '" + std::string(field(c)) + "' in " +
                                                  std::string(required[c]));
            return *v;
        };
        auto premium = [&](Col c) -> std::optional<double> {
            if (field(c).empty()) return std::nullopt;
            return number(c);
        };

        const double row_spot = number(spot);
        if (!have_row) {
            chain.underlying = std::string(field(underlying));
            chain.snapshot_time = std::string(field(snapshot_time));
            chain.spot = row_spot;
            if (!(chain.spot > 0.0)) throw DataError("line " + std::to_string(line_no) + ": spot must be > 0");
            have_row = true;
        } else if (field(underlying) != chain.underlying || field(snapshot_time) != chain.snapshot_time ||
                   row_spot != chain.spot) {
            throw DataError("line " + std::to_string(line_no) + ": underlying/snapshot_time/spot differ from first row");
        }

        OptionQuote q;
        if (field(kind) == "call")
            q.kind = OptionKind::call;
        else if (field(kind) == "put")
            q.kind = OptionKind::put;
        else
            throw ParseError(line_no, "kind must be 'call' or 'put'");
        q.strike = number(strike);
        const auto d = parse_date(field(expiry));
        if (!d) throw ParseError(line_no, "invalid expiry '" + std::string(field(expiry)) + "'");
        q.expiry = *d;
        q.bid = premium(bid);
        q.ask = premium(ask);
        q.mark = premium(mark);
        if (field(premium_ccy) == "quote")
            q.premium_ccy = PremiumCcy::quote;
        else if (field(premium_ccy) == "base")
            q.premium_ccy = PremiumCcy::base;
        else
            throw ParseError(line_no, "premium_ccy must be 'quote' or 'base'");
        validate_quote(q, "line " + std::to_string(line_no) + ": ");
        chain.quotes.push_back(in_quote_currency(q, chain.spot));
    }
    if (!have_row) throw ParseError(line_no, "no quote rows");
    validate_chain(chain);
    return chain;
}

inline OptionChain parse_chain_csv(std::string_view text, std::vector<std::string>* warnings = nullptr) {
    std::istringstream in{std::string(text)};
    return parse_chain_csv(in, warnings);
}

inline std::string serialize_chain_csv(const OptionChain& chain) {
    std::string out(chain_csv_header);
    out += '\n';
    auto opt = [](const std::optional<double>& v) { return v ? detail::format_number(*v) : std::string{}; };
    for (const auto& q : chain.quotes) {
        out += chain.underlying + ',' + chain.snapshot_time + ',' + detail::format_number(chain.spot) + ',' +
               std::string(to_string(q.kind)) + ',' + detail::format_number(q.strike) + ',' + format_date(q.expiry) +
               ',' + opt(q.bid) + ',' + opt(q.ask) + ',' + opt(q.mark) + ',' + std::string(to_string(q.premium_ccy)) +
               '\n';
    }
    return out;
}

} // namespace lphedge

#endif // LPHEDGE_CHAIN_HPP
