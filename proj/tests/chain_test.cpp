#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "lphedge/chain.hpp"
#include "lphedge/chain_json.hpp"

using namespace lphedge;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string header = std::string(chain_csv_header) + "\n";

OptionQuote quote(OptionKind kind, double strike, const char* expiry, std::optional<double> mark = 1.0) {
    OptionQuote q;
    q.kind = kind;
    q.strike = strike;
    q.expiry = *parse_date(expiry);
    q.mark = mark;
    return q;
}

} // namespace

TEST(ParseDate, AcceptsDatesAndTruncatesTimes) {
    EXPECT_EQ(format_date(*parse_date("2024-07-26")), "2024-07-26");
    EXPECT_EQ(*parse_date("2024-07-26T08:00:00Z"), *parse_date("2024-07-26"));
    EXPECT_FALSE(parse_date("2024-02-30"));
    EXPECT_FALSE(parse_date("26/07/2024"));
    EXPECT_FALSE(parse_date("2024-07-26x"));
}

TEST(ParseCsv, OneRowRoundTripsByteIdentically) {
    const std::string text = header + "ETH,2024-06-26T08:00:00Z,1700,call,1900,2024-07-26,30.5,32,31.25,quote\n";
    const auto chain = parse_chain_csv(text);
    ASSERT_EQ(chain.quotes.size(), 1u);
    EXPECT_EQ(chain.underlying, "ETH");
    EXPECT_EQ(chain.spot, 1700);
    EXPECT_EQ(chain.quotes[0].kind, OptionKind::call);
    EXPECT_EQ(*chain.quotes[0].bid, 30.5);
    EXPECT_EQ(serialize_chain_csv(chain), text);
}

TEST(ParseCsv, ConvertsBasePremiums) {
    const auto chain =
        parse_chain_csv(header + "ETH,2024-06-26T08:00:00Z,1700,put,1500,2024-07-26,,,0.05,base\n");
    const auto& q = chain.quotes.at(0);
    EXPECT_EQ(q.premium_ccy, PremiumCcy::quote);
    EXPECT_EQ(*q.mark, 85.0);
    EXPECT_FALSE(q.bid);
    EXPECT_EQ(in_quote_currency(q, 1700), q);
}

TEST(ParseCsv, Errors) {
    const std::string row = "ETH,2024-06-26T08:00:00Z,1700,call,1900,2024-07-26,";
    EXPECT_THROW(parse_chain_csv(header + row + "33,32,,quote\n"), DataError);  // bid > ask
    EXPECT_THROW(parse_chain_csv(header + row + "30,32,,quote\n" + row + "30,32,,quote\n"), DataError);
    EXPECT_THROW(parse_chain_csv(header + "ETH,t,0,call,1900,2024-07-26,30,32,,quote\n"), DataError);
    EXPECT_THROW(parse_chain_csv(header + "ETH,t,1700,call,-5,2024-07-26,30,32,,quote\n"), DataError);
    EXPECT_THROW(parse_chain_csv("underlying,spot\nETH,1700\n"), ParseError);
    EXPECT_THROW(parse_chain_csv(""), ParseError);
    EXPECT_THROW(parse_chain_csv(header), ParseError);
    try {
        parse_chain_csv(header + row + "30,32,,quote\n" + "ETH,2024-06-26T08:00:00Z,1700,call,abc,2024-07-26,,,1,quote\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    try {
        parse_chain_csv(header + "ETH,t,1700,straddle,1900,2024-07-26,,,1,quote\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(parse_chain_csv(header + row + "30,32\n"), ParseError);
    EXPECT_THROW(parse_chain_csv(header + row + "30,32,,eur\n"), ParseError);
}

TEST(ParseCsv, ExtraColumnsWarnMissingRowsAgree) {
    std::vector<std::string> warnings;
    const auto chain = parse_chain_csv(
        "venue,underlying,snapshot_time,spot,kind,strike,expiry,bid,ask,mark,premium_ccy,iv\n"
        "deribit,ETH,t0,1700,put,1500,2024-07-26,1,2,,quote,0.6\n",
        &warnings);
    EXPECT_EQ(chain.quotes.size(), 1u);
    EXPECT_EQ(warnings.size(), 2u);
    EXPECT_THROW(parse_chain_csv(header + "ETH,t0,1700,put,1500,2024-07-26,1,2,,quote\n"
                                          "ETH,t0,1701,put,1600,2024-07-26,1,2,,quote\n"),
                 DataError);
}

TEST(MidPrice, Rules) {
    OptionQuote q = quote(OptionKind::call, 1900, "2024-07-26", std::nullopt);
    q.bid = 80;
    q.ask = 90;
    EXPECT_EQ(mid_price(q), 85);
    q.mark = 70;
    EXPECT_EQ(mid_price(q), 85);
    EXPECT_EQ(mid_price(quote(OptionKind::call, 1900, "2024-07-26", 85.0)), 85);
    OptionQuote one_sided = quote(OptionKind::call, 1900, "2024-07-26", std::nullopt);
    one_sided.bid = 80;
    EXPECT_THROW(mid_price(one_sided), DataError);
}

TEST(Filter, SelectsAndSorts) {
    OptionChain empty{"ETH", 1700, "t", {}};
    const Date d1 = *parse_date("2024-07-26"), d2 = *parse_date("2024-08-30");
    EXPECT_TRUE(filter(empty, d1, OptionKind::put, 0, 1e9).empty());

    OptionChain chain{"ETH",
                      1700,
                      "t",
                      {quote(OptionKind::put, 1600, "2024-07-26"), quote(OptionKind::call, 1800, "2024-07-26"),
                       quote(OptionKind::put, 1200, "2024-07-26"), quote(OptionKind::put, 1400, "2024-08-30"),
                       quote(OptionKind::put, 1400, "2024-07-26"), quote(OptionKind::call, 1600, "2024-07-26")}};
    validate_chain(chain);
    const auto puts = filter(chain, d1, OptionKind::put, 1000, 1700);
    ASSERT_EQ(puts.size(), 3u);
    EXPECT_EQ(puts[0].strike, 1200);
    EXPECT_EQ(puts[1].strike, 1400);
    EXPECT_EQ(puts[2].strike, 1600);
    EXPECT_EQ(filter(chain, d2, OptionKind::put, 1000, 1700).size(), 1u);
    EXPECT_TRUE(filter(chain, d1, OptionKind::put, 2000, 3000).empty());
    EXPECT_EQ(expiries(chain).size(), 2u);
}

TEST(Fixture, CsvRoundTrip) {
    const auto text = read_file(LPHEDGE_DATA_DIR "/synthetic_eth_chain.csv");
    const auto chain = parse_chain_csv(text);
    ASSERT_EQ(chain.quotes.size(), 50u);
    const auto once = serialize_chain_csv(chain);
    const auto again = parse_chain_csv(once);
    ASSERT_EQ(again.quotes.size(), chain.quotes.size());
    for (std::size_t i = 0; i < chain.quotes.size(); ++i) {
        const auto &a = chain.quotes[i], &b = again.quotes[i];
        EXPECT_EQ(a.kind, b.kind);
        EXPECT_EQ(a.strike, b.strike);
        EXPECT_EQ(a.expiry, b.expiry);
        for (auto [x, y] : {std::pair{a.bid, b.bid}, std::pair{a.ask, b.ask}, std::pair{a.mark, b.mark}}) {
            ASSERT_EQ(x.has_value(), y.has_value());
            if (x) {
                EXPECT_EQ(detail::format_number(*x), detail::format_number(*y));
            }
        }
    }
    EXPECT_EQ(serialize_chain_csv(again), once);
}

TEST(Fixture, JsonMatchesCsv) {
    std::ifstream in(LPHEDGE_DATA_DIR "/synthetic_eth_chain.json");
    const auto from_json = parse_chain_json(in);
    const auto from_csv = parse_chain_csv(read_file(LPHEDGE_DATA_DIR "/synthetic_eth_chain.csv"));
    EXPECT_EQ(from_json, from_csv);
    std::istringstream back(serialize_chain_json(from_json));
    EXPECT_EQ(parse_chain_json(back), from_json);
}

TEST(ParseJson, Errors) {
    auto parse = [](const std::string& s) {
        std::istringstream in(s);
        return parse_chain_json(in);
    };
    EXPECT_THROW(parse("{"), ParseError);
    EXPECT_THROW(parse("[]"), ParseError);
    EXPECT_THROW(parse(R"({"underlying":"ETH","snapshot_time":"t","spot":1700})"), ParseError);
    EXPECT_THROW(parse(R"({"underlying":"ETH","snapshot_time":"t","spot":-1,"quotes":[]})"), DataError);
    const auto ok = parse(R"({"underlying":"ETH","snapshot_time":"t","spot":"1700","quotes":[
        {"kind":"put","strike":"1500","expiry":"2024-07-26","mark":"0.05","premium_ccy":"base"}]})");
    EXPECT_EQ(*ok.quotes.at(0).mark, 85.0);
}
