#pragma once

#include <cstddef>
#include <vector>

#include "jpk/numerics.hpp"

namespace jpk {

/// The pair (n, beta) of an operator. n is any positive real; 0 <= beta < 1.
struct JainParams {
    double n;
    double beta;

    JainParams(double n_, double beta_);
};

/// L_{n,k}^{(beta)}(x) = nx (nx + k beta)^{k-1} e^{-(nx + k beta)} / k!, evaluated in log space.
/// L_{n,0}(x) = e^{-nx}; at x = 0 the continuous limits L_{n,0}(0) = 1, L_{n,k}(0) = 0 are used.
double jain_basis(const JainParams& p, std::size_t k, double x);

/// log L_{n,k}(x); -infinity where the basis vanishes.
double log_jain_basis(const JainParams& p, std::size_t k, double x);

struct PartialSum {
    double sum = 0.0;
    std::size_t k_used = 0;  ///< index of the last term included
};

/// Sums L_{n,k}(x) for k = 0, 1, ... until a term drops below tail_tol while the cumulative
/// mass exceeds 1 - tail_tol. The Jain weights are unimodal in k, so the mass test keeps the
/// loop from stopping on the rising side of the peak.
/// Throws TruncationError when k_max is reached first.
PartialSum basis_partial_sum(const JainParams& p, double x, const SeriesQuadConfig& cfg);

/// <L_{n,k-1}, t^r> = (k)_r / n^{r+1} e^{-(k-1)beta} 1F1(2-k; 1-r-k; (k-1)beta), k >= 1.
double basis_moment_integral(const JainParams& p, std::size_t k, unsigned r);
double log_basis_moment_integral(const JainParams& p, std::size_t k, unsigned r);

/// <L_{n,k-1}, t^r> / <L_{n,k-1}, 1> computed from the same closed form.
double basis_moment_ratio(const JainParams& p, std::size_t k, unsigned r);

/// Effective support of t -> L_{n,k-1}(t): outside [lo, hi] the kernel is below
/// e^{-depth} times its peak value.
struct KernelWindow {
    double lo = 0.0;
    double mode = 0.0;
    double hi = 0.0;
};

KernelWindow kernel_window(const JainParams& p, std::size_t k, const SeriesQuadConfig& cfg);

/// \int_0^\infty L_{n,k-1}(t) g(t) dt by adaptive quadrature over the kernel window.
double kernel_integral(const JainParams& p, std::size_t k, const RealFunction& g,
                       const SeriesQuadConfig& cfg);
double kernel_integral(const JainParams& p, std::size_t k, const RealFunction& g,
                       const SeriesQuadConfig& cfg, const KernelWindow& window);

/// <L_{n,k-1}, g> / <L_{n,k-1}, 1>. The normalization is folded into the log-space kernel, so
/// the result stays finite when both inner products under- or overflow. `breaks` lists points
/// where g is not smooth; panels are split there.
double kernel_mean(const JainParams& p, std::size_t k, const RealFunction& g, const SeriesQuadConfig& cfg,
                   const KernelWindow& window, const std::vector<double>& breaks = {});

} // namespace jpk
