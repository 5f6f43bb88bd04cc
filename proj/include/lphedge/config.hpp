#ifndef LPHEDGE_CONFIG_HPP
#define LPHEDGE_CONFIG_HPP

#include <algorithm>
#include <array>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "chain.hpp"
#include "errors.hpp"

namespace lphedge {

/**
 * Tunables shared by the CLI commands. Loaded from a flat `key = value` file
 * (`#` starts a comment); command-line flags take precedence.
 */
struct RunConfig {
    std::size_t grid_n = 2000;       // strikes per side for `replicate`
    double k_min_factor = 1.0 / 50;  // k_min = factor * m
    double k_max_factor = 50.0;      // k_max = factor * m
    std::string spacing = "geometric";
    std::size_t eval_n = 1000;       // replication error curve points
    std::size_t il_n = 1000;         // IL curve points
    std::size_t oracle_n = 10'000;   // certification grid points
    double cert_eps_rel = 1e-9;      // certification tolerance / capital

    static constexpr std::array<std::string_view, 8> keys{"grid_n", "k_min_factor", "k_max_factor", "spacing",
                                                          "eval_n", "il_n",         "oracle_n",     "cert_eps_rel"};
};

inline RunConfig parse_config(std::istream& in, RunConfig cfg = {}) {
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        if (std::find(RunConfig::keys.begin(), RunConfig::keys.end(), key) == RunConfig::keys.end())
            throw ParseError(line_no, "unknown config key '" + std::string(key) + "'");

        auto number = [&] {
            const auto v = detail::parse_number(value);
            if (!v) throw ParseError(line_no, "invalid number for '" + std::string(key) + "'");
            return *v;
        };
        auto count = [&] {
            const double v = number();
            if (!(v >= 1.0) || v != static_cast<double>(static_cast<std::size_t>(v)))
                throw ParseError(line_no, "'" + std::string(key) + "' must be a positive integer");
            return static_cast<std::size_t>(v);
        };
        if (key == "grid_n") cfg.grid_n = count();
        else if (key == "eval_n") cfg.eval_n = count();
        else if (key == "il_n") cfg.il_n = count();
        else if (key == "oracle_n") cfg.oracle_n = count();
        else if (key == "k_min_factor") cfg.k_min_factor = number();
        else if (key == "k_max_factor") cfg.k_max_factor = number();
        else if (key == "cert_eps_rel") cfg.cert_eps_rel = number();
        else if (key == "spacing") {
            if (value != "geometric" && value != "uniform")
                throw ParseError(line_no, "spacing must be 'geometric' or 'uniform'");
            cfg.spacing = std::string(value);
        }
    }
    return cfg;
}

} // namespace lphedge

#endif // LPHEDGE_CONFIG_HPP
