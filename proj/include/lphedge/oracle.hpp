#ifndef LPHEDGE_ORACLE_HPP
#define LPHEDGE_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <exception>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace lphedge {

enum class Spacing { uniform, geometric };

/// Sampling grid over the closed price interval [lo, hi].
struct GridSpec {
    double lo;
    double hi;
    std::size_t n = 10'000;
    Spacing spacing = Spacing::geometric;

    void validate() const {
        detail::require_positive(lo, "grid lo");
        detail::require_positive(hi, "grid hi");
        if (lo > hi) throw DomainError("grid lo must not exceed hi");
        if (n == 0) throw DomainError("grid needs at least one point");
        if (n == 1 && lo != hi) throw DomainError("a one-point grid requires lo == hi");
    }
};

/// Ascending sample points: the regular grid, both endpoints, and every
/// breakpoint that falls inside [lo, hi]. Duplicates are removed.
inline std::vector<double> grid_points(const GridSpec& spec, std::span<const double> breakpoints = {}) {
    spec.validate();
    std::vector<double> pts;
    pts.reserve(spec.n + breakpoints.size());
    if (spec.n == 1) {
        pts.push_back(spec.lo);
    } else {
        const double last = static_cast<double>(spec.n - 1);
        const double log_ratio = std::log(spec.hi / spec.lo);
        for (std::size_t i = 0; i < spec.n; ++i) {
            const double t = static_cast<double>(i) / last;
            pts.push_back(spec.spacing == Spacing::uniform ? spec.lo + t * (spec.hi - spec.lo)
                                                           : spec.lo * std::exp(t * log_ratio));
        }
        pts.front() = spec.lo;
        pts.back() = spec.hi;
    }
    for (double b : breakpoints)
        if (b >= spec.lo && b <= spec.hi) pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

struct GridMin {
    double value;
    double argmin;
    std::size_t n_points;
};

template <class F>
concept PriceFunction = std::invocable<const F&, double> &&
                        std::convertible_to<std::invoke_result_t<const F&, double>, double>;

/// Exact minimum of `f` over grid_points(spec, breakpoints). Ties go to the
/// lowest price. Exceptions thrown by `f` are rethrown as EvaluationError
/// carrying the offending price.
template <PriceFunction F>
GridMin grid_min(const F& f, const GridSpec& spec, std::span<const double> breakpoints = {}) {
    const auto pts = grid_points(spec, breakpoints);
    GridMin best{0.0, pts.front(), pts.size()};
    bool first = true;
    for (double p : pts) {
        double v;
        try {
            v = static_cast<double>(f(p));
        } catch (const EvaluationError&) {
            throw;
        } catch (const std::exception& e) {
            throw EvaluationError(p, e.what());
        }
        if (first || v < best.value) {
            best.value = v;
            best.argmin = p;
            first = false;
        }
    }
    return best;
}

struct Certificate {
    bool pass;
    double min_value;
    double witness;  // argmin; the violating price when !pass
    std::size_t n_points;
    double eps;
};

/// Pass iff f >= -eps at every sampled point.
template <PriceFunction F>
Certificate certify_nonnegative(const F& f, const GridSpec& spec, double eps,
                                std::span<const double> breakpoints = {}) {
    if (!(eps >= 0.0)) throw DomainError("certification tolerance must be >= 0");
    const GridMin m = grid_min(f, spec, breakpoints);
    return {m.value >= -eps, m.value, m.argmin, m.n_points, eps};
}

} // namespace lphedge

#endif // LPHEDGE_ORACLE_HPP
