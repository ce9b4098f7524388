#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jpk/moment_engine.hpp"
#include "jpk/operators.hpp"

namespace jpk {

/// Error sequence of one convergence experiment.
struct ConvergenceReport {
    std::string label;
    std::vector<double> n_values;  ///< strictly increasing
    std::vector<double> errors;
    std::optional<double> observed_rate;   ///< least-squares log-log slope, needs >= 3 points
    std::optional<double> limit_estimate;
    /// Additional named columns, each as long as n_values.
    std::vector<std::pair<std::string, std::vector<double>>> extra;

    /// Throws DomainError when the invariants do not hold.
    void validate() const;
    /// Header "n,error,rate[,extra...]"; rate is the local slope between consecutive rows.
    std::string to_csv() const;
    std::string to_json() const;
};

/// Least-squares slope of log(error) against log(n); nullopt with fewer than 3 usable points.
std::optional<double> loglog_slope(const std::vector<double>& n_values, const std::vector<double>& errors);

/// Residuals at step h and h/2 and their ratio (about 1/4 for a second-order scheme).
struct HalvingProbe {
    double residual_h = 0.0;
    double residual_half = 0.0;
    double ratio = 0.0;
};
HalvingProbe halving_probe(const std::function<double(double)>& residual, double h);

// -- basis identity nx(D+n)L = k[-beta(D+n) + (nx+beta)/x]L --

/// |LHS - RHS| with D by central differences of step h.
double check_basis_diff_identity(const JainParams& p, std::size_t k, double x, double h);
/// Same with the analytic derivative of L; roundoff-level when the identity holds.
double basis_diff_identity_analytic(const JainParams& p, std::size_t k, double x);

// -- moment identity
// [-beta x(D+n) + nx + beta][n^2 T_{r+2} - n(r+beta+1)T_{r+1} + beta(r+2)T_r]
//     = n x^2 (D+n)[n(1-beta)T_{r+1} + beta(r+2)T_r] --

enum class TForm {
    operator_moments,  ///< T_{n,0} = 1 (the e^{-nx} f(0) term included)
    series_only,       ///< T_{n,0} = 1 - e^{-nx} (the bare k-series)
};

/// LHS - RHS as an exact ExpPoly; r <= 3.
ExpPoly t_diff_identity_symbolic(unsigned r, TForm form = TForm::operator_moments);
/// |LHS - RHS| with D by central differences on the ExpPoly values.
double check_T_diff_identity(const JainParams& p, unsigned r, double x, double h,
                             TForm form = TForm::operator_moments);

// -- beta-derivative of P_r: beta dP_r/dbeta = [r + beta + (1-beta)k] P_r - n P_{r+1} --

/// LHS - RHS with the exact beta-derivative.
ExactPoly p_beta_derivative_residual(unsigned r);
/// beta dP_r/dbeta - beta P_r/(1-beta) + beta (k-1)(r+1) P_{r-1}/n, r >= 1.
ExactPoly p_beta_derivative_residual_alternative(unsigned r);
/// |LHS - RHS| at (k, beta, n) with the beta-derivative by central differences of step h.
double check_P_beta_derivative(unsigned r, double k, double beta, double n, double h);

// -- beta-derivative of L: dL_{n,k}/dbeta = -k L_{n,k}(x) + (k-1) L_{n,k-1}(x + beta/n) --

/// |dL/dbeta - RHS| with dL/dbeta by central differences of step h in beta.
double check_L_beta_derivative(const JainParams& p, std::size_t k, double x, double h);
/// Same with the analytic beta-derivative.
double L_beta_derivative_analytic(const JainParams& p, std::size_t k, double x);
/// |dL/dbeta - [-kL + (k-1) nx/(nx+beta) L_{n,k-1}(x + beta/n)]| by central differences.
double check_L_beta_derivative_alternative(const JainParams& p, std::size_t k, double x, double h);

// -- convergence experiments --

enum class VoronovskajaLimit { stated, derived };

/// lim n[P_n^beta(f,x) - f(x)] for the chosen coefficient pair.
double voronovskaja_limit(double beta, const SmoothTestFunction& f, double x, VoronovskajaLimit which);

/// errors |n(P_n f - f)(x) - limit|; limit_estimate is n(P_n f - f)(x) at the largest n.
/// Extra columns: scaled (n(P_n f - f)) and limit.
ConvergenceReport voronovskaja_experiment(double beta, const SmoothTestFunction& f, double x,
                                          const std::vector<double>& n_values, const SeriesQuadConfig& cfg,
                                          VoronovskajaLimit which = VoronovskajaLimit::stated);

/// Sup over grid_size equispaced points of [a, b] of |P_n f - f|, per n.
ConvergenceReport korovkin_convergence_table(double beta, const TestFunction& f, double a, double b,
                                             const std::vector<double>& n_values, std::size_t grid_size,
                                             const SeriesQuadConfig& cfg);

/// Grid lower bound of sup_{0<h<=delta} sup_{x in [0,cap]} |Delta_h^m f(x)|, m in {1, 2}.
double modulus_of_continuity(const TestFunction& f, double delta, int m, double domain_cap, std::size_t grid_size,
                             std::size_t h_steps = 64);

/// mu_{n,2}(x) + (beta(2-beta)(1-e^{-nx})/(n(1-beta)))^2.
double theorem3_delta(const JainParams& p, double x);

struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    double delta_n = 0.0;
    double omega1 = 0.0;
    double omega2 = 0.0;
    double c_min = 0.0;  ///< smallest C with lhs <= C omega2 + omega1 (infinity when impossible)
};

/// |P_n f - f|(x) against C omega_2(f, sqrt(delta_n)) + omega(f, beta(2-beta)(1-e^{-nx})/(n(1-beta))).
/// Requires beta > 0. domain_cap defaults to max(10, 4x).
BoundCheck theorem3_bound_check(const JainParams& p, const TestFunction& f, double x, double C,
                                const SeriesQuadConfig& cfg, std::optional<double> domain_cap = std::nullopt,
                                std::size_t grid_size = 2000);

} // namespace jpk
