#include "jpk/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <tuple>

#include "jpk/moment_engine.hpp"

namespace jpk {

namespace {

struct KernelEntry {
    KernelWindow window;
};

class KernelCache {
public:
    KernelWindow window(const JainParams& p, std::size_t k, const SeriesQuadConfig& cfg)
    {
        const Key key{p.n, p.beta, k, std::min(cfg.tail_tol, cfg.quad_rel_tol)};
        {
            std::shared_lock lock(mu_);
            if (auto it = entries_.find(key); it != entries_.end()) return it->second.window;
        }
        const KernelWindow w = kernel_window(p, k, cfg);
        std::unique_lock lock(mu_);
        entries_.try_emplace(key, KernelEntry{w});
        return w;
    }

    std::size_t size() const
    {
        std::shared_lock lock(mu_);
        return entries_.size();
    }

    void clear()
    {
        std::unique_lock lock(mu_);
        entries_.clear();
    }

private:
    using Key = std::tuple<double, double, std::size_t, double>;
    mutable std::shared_mutex mu_;
    std::map<Key, KernelEntry> entries_;
};

KernelCache& kernel_cache()
{
    static KernelCache cache;
    return cache;
}

// <L_{k-1}, t^r>/<L_{k-1}, 1> for k = 1..K, shared across evaluation points.
class RatioCache {
public:
    double ratio(const JainParams& p, std::size_t k, unsigned r)
    {
        const Key key{p.n, p.beta, r};
        {
            std::shared_lock lock(mu_);
            if (auto it = table_.find(key); it != table_.end() && k < it->second.size()) return it->second[k];
        }
        std::unique_lock lock(mu_);
        std::vector<double>& v = table_[key];
        if (v.empty()) v.push_back(0.0);
        const std::size_t target = std::max(k + 1, 2 * v.size());
        for (std::size_t j = v.size(); j < target; ++j) v.push_back(basis_moment_ratio(p, j, r));
        return v[k];
    }

    void clear()
    {
        std::unique_lock lock(mu_);
        table_.clear();
    }

private:
    using Key = std::tuple<double, double, unsigned>;
    std::shared_mutex mu_;
    std::map<Key, std::vector<double>> table_;
};

RatioCache& ratio_cache()
{
    static RatioCache cache;
    return cache;
}

// L_{n,k}(x) for k = 0..K, where K follows the basis mass criterion and is doubled for
// functions of polynomial growth.
std::vector<double> basis_weights(const JainParams& p, double x, const SeriesQuadConfig& cfg, bool unbounded)
{
    const std::size_t found = basis_partial_sum(p, x, cfg).k_used;
    const std::size_t last = unbounded ? std::min(cfg.k_max, std::max<std::size_t>(2 * found, 1)) : found;
    std::vector<double> w(last + 1);
    for (std::size_t k = 0; k <= last; ++k) w[k] = jain_basis(p, k, x);
    return w;
}

double horner(const std::vector<double>& c, double t)
{
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
    return v;
}

long binom(unsigned n, unsigned k)
{
    long r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * static_cast<long>(n - k + i) / static_cast<long>(i);
    return r;
}

// Ascending coefficients of (t - x)^r.
std::vector<double> shifted_power(unsigned r, double x)
{
    std::vector<double> c(r + 1);
    for (unsigned j = 0; j <= r; ++j) c[j] = static_cast<double>(binom(r, j)) * std::pow(-x, static_cast<int>(r - j));
    return c;
}

double phillips_polynomial(const JainParams& p, const std::vector<double>& coeffs, double x,
                           const SeriesQuadConfig& cfg)
{
    const std::vector<double> w = basis_weights(p, x, cfg, coeffs.size() > 1);
    CompensatedSum sum;
    sum.add(w[0] * coeffs[0]);
    for (std::size_t k = 1; k < w.size(); ++k) {
        if (w[k] == 0.0) continue;
        double mean = 0.0;
        for (std::size_t j = coeffs.size(); j-- > 0;)
            if (coeffs[j] != 0.0) mean += coeffs[j] * ratio_cache().ratio(p, k, static_cast<unsigned>(j));
        sum.add(w[k] * mean);
    }
    return sum.value();
}

std::vector<double> numeric_k_coefficients(const ExactPoly& poly, const JainParams& p)
{
    std::vector<double> c(static_cast<std::size_t>(std::max(poly.degree_in_main(), 0)) + 1);
    for (std::size_t s = 0; s < c.size(); ++s)
        c[s] = poly.coefficient_of_main(static_cast<int>(s)).eval(0.0, p.beta, p.n);
    return c;
}

TestFunction bounded(std::string label, RealFunction f, double sup)
{
    TestFunction t;
    t.label = std::move(label);
    t.eval = std::move(f);
    t.is_bounded = true;
    t.sup_norm_hint = sup;
    return t;
}

std::vector<double> multiples_of_pi(double a, double b)
{
    std::vector<double> out;
    const double pi = std::numbers::pi;
    for (double m = std::ceil(a / pi); m * pi <= b; m += 1.0) out.push_back(m * pi);
    return out;
}

} // namespace

TestFunction polynomial_function(std::string label, std::vector<double> ascending)
{
    if (ascending.empty()) ascending.push_back(0.0);
    TestFunction t;
    t.label = std::move(label);
    t.poly_coeffs = ascending;
    t.eval = [c = std::move(ascending)](double s) { return horner(c, s); };
    t.is_bounded = t.poly_coeffs.size() == 1;
    if (t.is_bounded) t.sup_norm_hint = std::abs(t.poly_coeffs[0]);
    return t;
}

const std::vector<std::string>& builtin_function_names()
{
    static const std::vector<std::string> names{"const", "linear", "square", "cube", "exp-neg", "sin", "abs-sin"};
    return names;
}

SmoothTestFunction builtin_function(std::string_view name)
{
    if (name == "const") return {polynomial_function("const", {1.0}), polynomial_function("const'", {0.0}),
                                 polynomial_function("const''", {0.0})};
    if (name == "linear") return {polynomial_function("linear", {0.0, 1.0}), polynomial_function("linear'", {1.0}),
                                  polynomial_function("linear''", {0.0})};
    if (name == "square")
        return {polynomial_function("square", {0.0, 0.0, 1.0}), polynomial_function("square'", {0.0, 2.0}),
                polynomial_function("square''", {2.0})};
    if (name == "cube")
        return {polynomial_function("cube", {0.0, 0.0, 0.0, 1.0}), polynomial_function("cube'", {0.0, 0.0, 3.0}),
                polynomial_function("cube''", {0.0, 6.0})};
    if (name == "exp-neg")
        return {bounded("exp-neg", [](double t) { return std::exp(-t); }, 1.0),
                bounded("exp-neg'", [](double t) { return -std::exp(-t); }, 1.0),
                bounded("exp-neg''", [](double t) { return std::exp(-t); }, 1.0)};
    if (name == "sin")
        return {bounded("sin", [](double t) { return std::sin(t); }, 1.0),
                bounded("sin'", [](double t) { return std::cos(t); }, 1.0),
                bounded("sin''", [](double t) { return -std::sin(t); }, 1.0)};
    if (name == "abs-sin") {
        SmoothTestFunction s{bounded("abs-sin", [](double t) { return std::abs(std::sin(t)); }, 1.0),
                             bounded("abs-sin'",
                                     [](double t) {
                                         const double c = std::cos(t);
                                         return std::sin(t) >= 0.0 ? c : -c;
                                     },
                                     1.0),
                             bounded("abs-sin''", [](double t) { return -std::abs(std::sin(t)); }, 1.0)};
        s.f.breakpoints = multiples_of_pi;
        s.fp.breakpoints = multiples_of_pi;
        s.fpp.breakpoints = multiples_of_pi;
        return s;
    }
    throw DomainError("builtin_function: unknown function '" + std::string(name) + "'");
}

double apply_jain(const JainParams& p, const TestFunction& f, double x, const SeriesQuadConfig& cfg)
{
    const std::vector<double> w = basis_weights(p, x, cfg, !f.is_bounded);
    CompensatedSum sum;
    for (std::size_t k = 0; k < w.size(); ++k)
        if (w[k] != 0.0) sum.add(w[k] * f(static_cast<double>(k) / p.n));
    return sum.value();
}

double apply_phillips(const JainParams& p, const TestFunction& f, double x, const SeriesQuadConfig& cfg)
{
    if (!(x >= 0.0)) throw DomainError("apply_phillips: x must be >= 0");
    if (f.is_polynomial()) return phillips_polynomial(p, f.poly_coeffs, x, cfg);

    const std::vector<double> w = basis_weights(p, x, cfg, !f.is_bounded);
    // For bounded f, weights this far below tail_tol cannot move the sum.
    const double negligible = f.is_bounded ? 1e-6 * cfg.tail_tol / std::max(1.0, f.sup_norm_hint.value_or(1.0)) : 0.0;
    CompensatedSum sum;
    sum.add(w[0] * f(0.0));
    for (std::size_t k = 1; k < w.size(); ++k) {
        if (w[k] <= negligible) continue;
        const KernelWindow window = kernel_cache().window(p, k, cfg);
        const std::vector<double> breaks =
            f.breakpoints ? f.breakpoints(window.lo, window.hi) : std::vector<double>{};
        sum.add(w[k] * kernel_mean(p, k, f.eval, cfg, window, breaks));
    }
    return sum.value();
}

double t_moment_series(const JainParams& p, unsigned r, double x, const SeriesQuadConfig& cfg)
{
    const std::vector<double> c = numeric_k_coefficients(p_poly_recur(r), p);
    const std::vector<double> w = basis_weights(p, x, cfg, r > 0);
    CompensatedSum sum;
    if (r == 0) sum.add(w[0]);
    for (std::size_t k = 1; k < w.size(); ++k)
        if (w[k] != 0.0) sum.add(w[k] * horner(c, static_cast<double>(k)));
    return sum.value();
}

double central_moment_series(const JainParams& p, unsigned r, double x, const SeriesQuadConfig& cfg)
{
    return phillips_polynomial(p, shifted_power(r, x), x, cfg);
}

double central_moment_series_via_t(const JainParams& p, unsigned r, double x, const SeriesQuadConfig& cfg)
{
    const std::vector<double> c = shifted_power(r, x);
    CompensatedSum sum;
    for (unsigned j = 0; j <= r; ++j) sum.add(c[j] * t_moment_series(p, j, x, cfg));
    return sum.value();
}

std::size_t kernel_cache_size()
{
    return kernel_cache().size();
}

void clear_kernel_cache()
{
    kernel_cache().clear();
    ratio_cache().clear();
}

} // namespace jpk
