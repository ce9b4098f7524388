#include "jpk/basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/log1p.hpp>

namespace jpk {

namespace {

// lgamma(k+1) - [k log k - k + log(2 pi k)/2], asymptotic series; k >= 16 keeps the
// truncation error below 1e-17.
double stirling_remainder(double k)
{
    const double r = 1.0 / k, r2 = r * r;
    return r * (1.0 / 12 - r2 * (1.0 / 360 - r2 * (1.0 / 1260 - r2 * (1.0 / 1680 - r2 / 1188))));
}

double log_rising(double a, unsigned m)
{
    double s = 0.0;
    for (unsigned i = 0; i < m; ++i) s += std::log(a + i);
    return s;
}

// log 1F1(2-k; 1-r-k; (k-1) beta), k >= 2. Every term is nonnegative because both
// Pochhammer symbols change sign together for j <= k-2 < r+k-1.
double log_kummer_factor(const JainParams& p, std::size_t k, unsigned r)
{
    const int a = 2 - static_cast<int>(k);
    const double b = 1.0 - static_cast<double>(r) - static_cast<double>(k);
    const double z = static_cast<double>(k - 1) * p.beta;
    return log_hyp1f1_terminating(a, b, z);
}

} // namespace

JainParams::JainParams(double n_, double beta_) : n(n_), beta(beta_)
{
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("JainParams: n must be a positive finite real");
    if (!(beta >= 0.0 && beta < 1.0)) throw DomainError("JainParams: beta must lie in [0, 1)");
}

double log_jain_basis(const JainParams& p, std::size_t k, double x)
{
    if (!(x >= 0.0)) throw DomainError("jain_basis: x must be >= 0");
    if (x == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    const double nx = p.n * x;
    if (k == 0) return -nx;
    const double kd = static_cast<double>(k);
    const double shifted = nx + kd * p.beta;
    if (k < 16) return std::log(nx) + (kd - 1.0) * std::log(shifted) - shifted - std::lgamma(kd + 1.0);
    // Large k: the terms above are O(k) each and cancel down to O(log k), losing ~k*eps.
    // With u = (nx - k(1-beta))/k and Stirling for k!:
    //   log L = log(nx/shifted) + k*log1pmx(u) - log(2 pi k)/2 - stirling_remainder(k).
    const double u = (nx - kd * (1.0 - p.beta)) / kd;
    return std::log(nx / shifted) + kd * boost::math::log1pmx(u) - 0.5 * std::log(2.0 * M_PI * kd) -
           stirling_remainder(kd);
}

double jain_basis(const JainParams& p, std::size_t k, double x)
{
    return std::exp(log_jain_basis(p, k, x));
}

PartialSum basis_partial_sum(const JainParams& p, double x, const SeriesQuadConfig& cfg)
{
    CompensatedSum sum;
    for (std::size_t k = 0; k <= cfg.k_max; ++k) {
        const double term = jain_basis(p, k, x);
        sum.add(term);
        if (term < cfg.tail_tol && sum.value() > 1.0 - cfg.tail_tol) return {sum.value(), k};
    }
    throw TruncationError("basis_partial_sum: k_max = " + std::to_string(cfg.k_max) +
                          " reached before the tail criterion (n = " + std::to_string(p.n) +
                          ", beta = " + std::to_string(p.beta) + ", x = " + std::to_string(x) + ")");
}

double log_basis_moment_integral(const JainParams& p, std::size_t k, unsigned r)
{
    if (k < 1) throw DomainError("basis_moment_integral: k must be >= 1");
    const double log_n = std::log(p.n);
    if (k == 1) return std::lgamma(r + 1.0) - (r + 1.0) * log_n;
    const double kd = static_cast<double>(k);
    return log_rising(kd, r) - (r + 1.0) * log_n - (kd - 1.0) * p.beta + log_kummer_factor(p, k, r);
}

double basis_moment_integral(const JainParams& p, std::size_t k, unsigned r)
{
    return std::exp(log_basis_moment_integral(p, k, r));
}

double basis_moment_ratio(const JainParams& p, std::size_t k, unsigned r)
{
    if (k < 1) throw DomainError("basis_moment_ratio: k must be >= 1");
    const double log_n = std::log(p.n);
    if (k == 1) return std::exp(std::lgamma(r + 1.0) - r * log_n);
    const double kd = static_cast<double>(k);
    double log_ratio = log_rising(kd, r) - r * log_n;
    if (p.beta > 0.0) log_ratio += log_kummer_factor(p, k, r) - log_kummer_factor(p, k, 0);
    return std::exp(log_ratio);
}

KernelWindow kernel_window(const JainParams& p, std::size_t k, const SeriesQuadConfig& cfg)
{
    if (k < 1) throw DomainError("kernel_window: k must be >= 1");
    const double depth = std::log(1.0 / std::min(cfg.tail_tol, cfg.quad_rel_tol)) + 8.0;
    const std::size_t m = k - 1;
    if (m == 0) return {0.0, 0.0, depth / p.n};

    // Stationary point of log[t (nt + c)^{m-1} e^{-nt}], c = m beta:
    // n^2 t^2 - n (m - c) t - c = 0.
    const double md = static_cast<double>(m);
    const double c = md * p.beta;
    const double mode = ((md - c) + std::sqrt((md - c) * (md - c) + 4.0 * c)) / (2.0 * p.n);
    const double peak = log_jain_basis(p, m, mode);
    const double sigma = std::max(std::sqrt(md), 1.0) / p.n;

    double up = sigma;
    while (log_jain_basis(p, m, mode + up) > peak - depth) up *= 2.0;
    double down = sigma;
    while (mode - down > 0.0 && log_jain_basis(p, m, mode - down) > peak - depth) down *= 2.0;
    return {std::max(0.0, mode - down), mode, mode + up};
}

namespace {

double windowed_integral(const JainParams& p, std::size_t k, const RealFunction& g, const SeriesQuadConfig& cfg,
                         const KernelWindow& window, double log_scale, const std::vector<double>& breaks)
{
    const std::size_t m = k - 1;
    const auto integrand = [&](double t) {
        if (t < 0.0) return 0.0;
        const double w = std::exp(log_jain_basis(p, m, t) - log_scale);
        return w == 0.0 ? 0.0 : w * g(t);
    };
    std::vector<double> cuts{window.lo, window.mode, window.hi};
    for (double b : breaks)
        if (b > window.lo && b < window.hi) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // A sliver between a breakpoint and a window edge can carry almost no weight; its error
    // only has to be small next to the whole kernel mass.
    const double mass = std::exp(log_basis_moment_integral(p, k, 0) - log_scale);
    const double floor = std::numeric_limits<double>::epsilon() * mass;
    CompensatedSum total;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total.add(integrate_interval(integrand, cuts[i], cuts[i + 1], cfg, floor).value);
    return total.value();
}

} // namespace

double kernel_integral(const JainParams& p, std::size_t k, const RealFunction& g, const SeriesQuadConfig& cfg,
                       const KernelWindow& window)
{
    return windowed_integral(p, k, g, cfg, window, 0.0, {});
}

double kernel_mean(const JainParams& p, std::size_t k, const RealFunction& g, const SeriesQuadConfig& cfg,
                   const KernelWindow& window, const std::vector<double>& breaks)
{
    if (k < 1) throw DomainError("kernel_mean: k must be >= 1");
    return windowed_integral(p, k, g, cfg, window, log_basis_moment_integral(p, k, 0), breaks);
}

double kernel_integral(const JainParams& p, std::size_t k, const RealFunction& g, const SeriesQuadConfig& cfg)
{
    return kernel_integral(p, k, g, cfg, kernel_window(p, k, cfg));
}

} // namespace jpk
