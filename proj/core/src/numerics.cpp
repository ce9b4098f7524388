#include "jpk/numerics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace jpk {

void SeriesQuadConfig::validate() const
{
    if (k_max < 1) throw DomainError("SeriesQuadConfig: k_max must be >= 1");
    if (!(tail_tol > 0.0)) throw DomainError("SeriesQuadConfig: tail_tol must be > 0");
    if (!(quad_rel_tol > 0.0)) throw DomainError("SeriesQuadConfig: quad_rel_tol must be > 0");
    if (quad_max_subdiv < 1) throw DomainError("SeriesQuadConfig: quad_max_subdiv must be >= 1");
}

double pochhammer(double a, unsigned m)
{
    double p = 1.0;
    for (unsigned i = 0; i < m; ++i) p *= a + static_cast<double>(i);
    return p;
}

double log_factorial(unsigned k)
{
    return std::lgamma(static_cast<double>(k) + 1.0);
}

double hyp1f1_terminating(int a, double b, double z)
{
    if (z == 0.0) return 1.0;
    if (a > 0) throw DomainError("hyp1f1_terminating: upper parameter must be a nonpositive integer");

    double sum = 1.0;
    double term = 1.0;
    for (int j = 0; j < -a; ++j) {
        const double bj = b + j;
        if (bj == 0.0)
            throw DomainError("hyp1f1_terminating: (b)_j vanishes inside the terminating range");
        term *= (a + j) / bj * z / (j + 1);
        sum += term;
    }
    return sum;
}

double log_hyp1f1_terminating(int a, double b, double z)
{
    if (z == 0.0) return 0.0;
    if (a > 0) throw DomainError("log_hyp1f1_terminating: upper parameter must be a nonpositive integer");
    if (z < 0.0) throw DomainError("log_hyp1f1_terminating: requires z >= 0");

    // log of each term; terms are (a)_j z^j / ((b)_j j!)
    const int count = -a;
    double log_term = 0.0;
    double log_max = 0.0;
    // two passes keep the accumulation free of overflow without storing the terms
    for (int j = 0; j < count; ++j) {
        const double bj = b + j;
        if (bj == 0.0)
            throw DomainError("log_hyp1f1_terminating: (b)_j vanishes inside the terminating range");
        const double ratio = (a + j) / bj;
        if (ratio < 0.0) throw DomainError("log_hyp1f1_terminating: term of negative sign");
        if (ratio == 0.0) break;
        log_term += std::log(ratio) + std::log(z) - std::log(static_cast<double>(j + 1));
        log_max = std::max(log_max, log_term);
    }
    double acc = std::exp(-log_max);
    log_term = 0.0;
    for (int j = 0; j < count; ++j) {
        const double ratio = (a + j) / (b + j);
        if (ratio == 0.0) break;
        log_term += std::log(ratio) + std::log(z) - std::log(static_cast<double>(j + 1));
        acc += std::exp(log_term - log_max);
    }
    return log_max + std::log(acc);
}

QuadResult integrate_interval(const RealFunction& f, double lo, double hi, const SeriesQuadConfig& cfg,
                              double abs_floor)
{
    if (!(hi > lo)) return {};
    using boost::math::quadrature::gauss_kronrod;
    double error = 0.0;
    double l1 = 0.0;
    const double value =
        gauss_kronrod<double, 15>::integrate(f, lo, hi, cfg.quad_max_subdiv, cfg.quad_rel_tol / 4.0, &error, &l1);
    if (!std::isfinite(value))
        throw QuadratureError("integrate_interval: non-finite integral on [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]");
    // Boost's per-panel stopping rule can leave the summed estimate slightly above its target,
    // hence the tighter request above. A slack of a few ulps of the L1 norm keeps roundoff-limited panels from being flagged.
    const double allowed =
        cfg.quad_rel_tol * l1 + 64.0 * std::numeric_limits<double>::epsilon() * l1 + std::max(abs_floor, 0.0);
    if (error > allowed)
        throw QuadratureError("integrate_interval: tolerance not reached on [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "], error estimate " + format_real(error) + " vs allowed " + format_real(allowed));
    return {value, error};
}

QuadResult integrate_from(const RealFunction& f, double start, const SeriesQuadConfig& cfg, double scale)
{
    if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;
    constexpr int max_panels = 80;

    CompensatedSum sum;
    double error = 0.0;
    double left = start;
    double width = scale;
    int quiet_panels = 0;
    for (int panel = 0; panel < max_panels; ++panel) {
        const double right = left + width;
        const QuadResult piece = integrate_interval(f, left, right, cfg);
        sum.add(piece.value);
        error += piece.error;

        const double total = std::abs(sum.value());
        const bool small = std::abs(piece.value) <= cfg.tail_tol * total;
        quiet_panels = small ? quiet_panels + 1 : 0;
        if (quiet_panels >= 2 && right >= start + 8.0 * scale) {
            error += std::abs(piece.value);
            return {sum.value(), error};
        }
        left = right;
        if (panel > 0) width *= 2.0;
    }
    throw QuadratureError("integrate_from: integrand tail did not decay within the panel budget");
}

double integrate_halfline(const RealFunction& f, const SeriesQuadConfig& cfg, double scale)
{
    return integrate_from(f, 0.0, cfg, scale).value;
}

double tricomi_u_oracle(double a, double b, double z, const SeriesQuadConfig& cfg)
{
    if (!(a > 0.0)) throw DomainError("tricomi_u_oracle: requires a > 0");
    if (!(z > 0.0)) throw DomainError("tricomi_u_oracle: requires z > 0");

    const double c = b - a - 1.0;
    const auto log_integrand = [&](double t) {
        return -z * t + (a - 1.0) * std::log(t) + c * std::log1p(t);
    };
    // Bulk location: stationary point of the log-integrand (or t = 1 when it has none).
    const double peak = std::max(1.0, (a - 1.0 + std::max(c, 0.0)) / z);
    const double log_ref = log_integrand(peak);

    // [0, 1]: for a < 1 substitute t = u^{1/a}, which absorbs the t^{a-1} singularity
    // (dt t^{a-1} = du / a); for a >= 1 the integrand is already bounded there.
    const auto head = [&](double u) {
        if (a >= 1.0) return u <= 0.0 ? (a == 1.0 ? std::exp(-log_ref) : 0.0) : std::exp(log_integrand(u) - log_ref);
        if (u <= 0.0) return std::exp(-log_ref) / a;
        const double t = std::pow(u, 1.0 / a);
        return std::exp(-z * t + c * std::log1p(t) - log_ref) / a;
    };
    const auto tail = [&](double t) { return std::exp(log_integrand(t) - log_ref); };

    const double head_value = integrate_interval(head, 0.0, 1.0, cfg).value;
    const double tail_value = integrate_from(tail, 1.0, cfg, peak).value;
    return (head_value + tail_value) * std::exp(log_ref - std::lgamma(a));
}

std::string format_real(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void CompensatedSum::add(double v) noexcept
{
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
        comp_ += (sum_ - t) + v;
    else
        comp_ += (v - t) + sum_;
    sum_ = t;
}

} // namespace jpk
