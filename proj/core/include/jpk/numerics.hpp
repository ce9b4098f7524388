#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "jpk/errors.hpp"

namespace jpk {

/// Truncation and quadrature controls shared by every numeric evaluation.
struct SeriesQuadConfig {
    std::size_t k_max = 20000;      ///< hard cap on the basis index of any series
    double tail_tol = 1e-12;        ///< absolute tail-mass tolerance for series
    double quad_rel_tol = 1e-10;    ///< relative tolerance of adaptive quadrature
    unsigned quad_max_subdiv = 15;  ///< maximum bisection depth per quadrature panel

    /// Throws DomainError when a field violates its invariant.
    void validate() const;
};

using RealFunction = std::function<double(double)>;

/// Rising factorial a(a+1)...(a+m-1); 1 for m = 0.
double pochhammer(double a, unsigned m);

/// log(k!) through lgamma.
double log_factorial(unsigned k);

/// Kummer 1F1(a; b; z) for a nonpositive integer a (a polynomial of degree |a| in z),
/// or for any a when z = 0.
///
/// The sum stops at j = |a|, so the lower parameter only has to avoid the
/// integers {0, -1, ..., a+1}. In the basis inner products a = 2-k and b = 1-r-k,
/// and the last needed denominator is b + k - 3 = -r - 2 < 0, never zero.
double hyp1f1_terminating(int a, double b, double z);

/// log of hyp1f1_terminating for the case where every term is nonnegative,
/// accumulated in log space so that z up to ~1e4 does not overflow.
/// Throws DomainError when a term is negative.
double log_hyp1f1_terminating(int a, double b, double z);

/// Tricomi U(a, b, z) from its integral representation
/// (1/Gamma(a)) \int_0^\infty e^{-zt} t^{a-1} (1+t)^{b-a-1} dt.
/// Intended only as an independent oracle for the hypergeometric closed forms.
double tricomi_u_oracle(double a, double b, double z, const SeriesQuadConfig& cfg);

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive Gauss-Kronrod (7/15) on a finite interval. Throws QuadratureError when the
/// error estimate stays above quad_rel_tol times the L1 norm plus abs_floor.
QuadResult integrate_interval(const RealFunction& f, double lo, double hi,
                              const SeriesQuadConfig& cfg, double abs_floor = 0.0);

/// \int_start^\infty f. Panels [start, start+s], [start+s, start+2s], [start+2s, start+4s], ...
/// are added until two consecutive panels each contribute less than tail_tol relative to the
/// running total (after at least reaching start + 8s). The final panel magnitude is folded
/// into the error estimate as the tail bound. `scale` should be of the order of the
/// location of the integrand's bulk.
QuadResult integrate_from(const RealFunction& f, double start, const SeriesQuadConfig& cfg,
                          double scale = 1.0);

/// \int_0^\infty f(t) dt; see integrate_from.
double integrate_halfline(const RealFunction& f, const SeriesQuadConfig& cfg, double scale = 1.0);

/// %.17g-style text with '.' as decimal separator regardless of locale.
/// Non-finite values print as nan, inf, -inf.
std::string format_real(double v);

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double v) noexcept;
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace jpk
