#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jpk/basis.hpp"

namespace jpk {

/// A real function on [0, oo) with the metadata the operators need.
struct TestFunction {
    std::string label;
    RealFunction eval;
    bool is_bounded = false;
    std::optional<double> sup_norm_hint;
    /// Ascending monomial coefficients when the function is a polynomial; empty otherwise.
    std::vector<double> poly_coeffs;
    /// Points in [a, b] where the function is not smooth (quadrature panels are split there).
    std::function<std::vector<double>(double, double)> breakpoints;

    bool is_polynomial() const noexcept { return !poly_coeffs.empty(); }
    double operator()(double t) const { return eval(t); }
};

/// f with its first two derivatives, for the asymptotic experiments.
struct SmoothTestFunction {
    TestFunction f;
    TestFunction fp;
    TestFunction fpp;
};

TestFunction polynomial_function(std::string label, std::vector<double> ascending);

/// Built-in corpus: const, linear, square, cube, exp-neg, sin, abs-sin.
/// Throws DomainError for an unknown name. abs-sin gets one-sided derivatives at its kinks.
SmoothTestFunction builtin_function(std::string_view name);
const std::vector<std::string>& builtin_function_names();

/// B_n^beta(f, x) = sum_k L_{n,k}(x) f(k/n).
double apply_jain(const JainParams& p, const TestFunction& f, double x, const SeriesQuadConfig& cfg);

/// P_n^beta(f, x) = sum_{k>=1} <L_{n,k-1}, f>/<L_{n,k-1}, 1> L_{n,k}(x) + e^{-nx} f(0).
/// Polynomials use the closed inner products; anything else uses quadrature over the kernel window.
double apply_phillips(const JainParams& p, const TestFunction& f, double x, const SeriesQuadConfig& cfg);

/// sum_{k>=1} P_r(k-1) L_{n,k}(x) + delta_{r0} e^{-nx} with the recurrence-generated P_r.
double t_moment_series(const JainParams& p, unsigned r, double x, const SeriesQuadConfig& cfg);

/// P_n^beta((t - x)^r, x) from the closed inner products.
double central_moment_series(const JainParams& p, unsigned r, double x, const SeriesQuadConfig& cfg);

/// sum_j C(r,j) (-x)^{r-j} t_moment_series(j).
double central_moment_series_via_t(const JainParams& p, unsigned r, double x, const SeriesQuadConfig& cfg);

/// Number of cached kernel windows; exposed for tests and benchmarks.
std::size_t kernel_cache_size();
void clear_kernel_cache();

} // namespace jpk
