#include "jpk/identity_lab.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace jpk {

namespace {

using E = ExactPoly;

ExpPoly t_of(unsigned j, TForm form)
{
    return form == TForm::operator_moments ? t_moment_general(j) : t_moment_series_form(j);
}

double relative(double diff, double scale)
{
    return scale > 0.0 ? std::abs(diff) / scale : std::abs(diff);
}

// d/dx log L_{n,k}(x), x > 0
double log_basis_slope(const JainParams& p, std::size_t k, double x)
{
    if (k == 0) return -p.n;
    const double kd = static_cast<double>(k);
    return 1.0 / x + (kd - 1.0) * p.n / (p.n * x + kd * p.beta) - p.n;
}

template <class F>
auto parallel_map(std::size_t count, F&& fn)
{
    using R = decltype(fn(std::size_t{}));
    std::vector<std::future<R>> jobs;
    jobs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) jobs.push_back(std::async(std::launch::async, fn, i));
    std::vector<R> out;
    out.reserve(count);
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

} // namespace

void ConvergenceReport::validate() const
{
    if (n_values.size() != errors.size()) throw DomainError("ConvergenceReport: n_values and errors differ in length");
    for (std::size_t i = 1; i < n_values.size(); ++i)
        if (!(n_values[i] > n_values[i - 1])) throw DomainError("ConvergenceReport: n_values must increase strictly");
    for (double e : errors)
        if (!std::isfinite(e)) throw DomainError("ConvergenceReport: non-finite error");
    for (const auto& [name, col] : extra)
        if (col.size() != n_values.size()) throw DomainError("ConvergenceReport: column '" + name + "' has wrong length");
}

std::string ConvergenceReport::to_csv() const
{
    std::ostringstream out;
    out << "n,error,rate";
    for (const auto& [name, col] : extra) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        out << format_real(n_values[i]) << ',' << format_real(errors[i]) << ',';
        if (i > 0 && errors[i] > 0.0 && errors[i - 1] > 0.0)
            out << format_real(std::log(errors[i] / errors[i - 1]) / std::log(n_values[i] / n_values[i - 1]));
        for (const auto& [name, col] : extra) out << ',' << format_real(col[i]);
        out << '\n';
    }
    return out.str();
}

std::string ConvergenceReport::to_json() const
{
    nlohmann::ordered_json j;
    j["label"] = label;
    j["n"] = n_values;
    j["error"] = errors;
    j["observed_rate"] = observed_rate ? nlohmann::ordered_json(*observed_rate) : nlohmann::ordered_json(nullptr);
    j["limit_estimate"] = limit_estimate ? nlohmann::ordered_json(*limit_estimate) : nlohmann::ordered_json(nullptr);
    nlohmann::ordered_json cols = nlohmann::ordered_json::object();
    for (const auto& [name, col] : extra) cols[name] = col;
    j["columns"] = cols;
    return j.dump();
}

std::optional<double> loglog_slope(const std::vector<double>& n_values, const std::vector<double>& errors)
{
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < std::min(n_values.size(), errors.size()); ++i) {
        if (n_values[i] > 0.0 && errors[i] > 0.0 && std::isfinite(errors[i])) {
            lx.push_back(std::log(n_values[i]));
            ly.push_back(std::log(errors[i]));
        }
    }
    if (lx.size() < 3) return std::nullopt;
    const double m = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double den = m * sxx - sx * sx;
    if (den == 0.0) return std::nullopt;
    return (m * sxy - sx * sy) / den;
}

HalvingProbe halving_probe(const std::function<double(double)>& residual, double h)
{
    HalvingProbe p;
    p.residual_h = residual(h);
    p.residual_half = residual(h / 2.0);
    p.ratio = p.residual_h != 0.0 ? p.residual_half / p.residual_h : 0.0;
    return p;
}

double check_basis_diff_identity(const JainParams& p, std::size_t k, double x, double h)
{
    const double L = jain_basis(p, k, x);
    const double dL = (jain_basis(p, k, x + h) - jain_basis(p, k, x - h)) / (2.0 * h);
    const double lhs = p.n * x * (dL + p.n * L);
    const double rhs = static_cast<double>(k) * (-p.beta * (dL + p.n * L) + (p.n * x + p.beta) / x * L);
    return std::abs(lhs - rhs);
}

double basis_diff_identity_analytic(const JainParams& p, std::size_t k, double x)
{
    const double L = jain_basis(p, k, x);
    const double dL = L * log_basis_slope(p, k, x);
    const double kd = static_cast<double>(k);
    const double lhs = p.n * x * (dL + p.n * L);
    const double a = kd * p.beta * (dL + p.n * L);
    const double b = kd * (p.n * x + p.beta) / x * L;
    return relative(lhs - (b - a), std::abs(lhs) + std::abs(a) + std::abs(b));
}

ExpPoly t_diff_identity_symbolic(unsigned r, TForm form)
{
    const ExpPoly t0 = t_of(r, form), t1 = t_of(r + 1, form), t2 = t_of(r + 2, form);
    const E n = n_power(1);
    const E x = E::main_var();
    const E beta = E::beta();
    const E r1 = E(static_cast<long>(r) + 1);
    const E r2 = E(static_cast<long>(r) + 2);

    const ExpPoly g = (n * n) * t2 - (n * (r1 + beta)) * t1 + (beta * r2) * t0;
    const ExpPoly h = (n * E::one_minus_beta()) * t1 + (beta * r2) * t0;
    const ExpPoly lhs = (-(beta * x)) * g.d_plus_n() + (n * x + beta) * g;
    const ExpPoly rhs = (n * x * x) * h.d_plus_n();
    return lhs - rhs;
}

double check_T_diff_identity(const JainParams& p, unsigned r, double x, double h, TForm form)
{
    const ExpPoly t0 = t_of(r, form), t1 = t_of(r + 1, form), t2 = t_of(r + 2, form);
    const double n = p.n, b = p.beta;
    const auto g = [&](double s) {
        return n * n * t2.eval(s, b, n) - n * (r + b + 1.0) * t1.eval(s, b, n) + b * (r + 2.0) * t0.eval(s, b, n);
    };
    const auto hf = [&](double s) { return n * (1.0 - b) * t1.eval(s, b, n) + b * (r + 2.0) * t0.eval(s, b, n); };
    const double dg = (g(x + h) - g(x - h)) / (2.0 * h);
    const double dh = (hf(x + h) - hf(x - h)) / (2.0 * h);
    const double lhs = -b * x * (dg + n * g(x)) + (n * x + b) * g(x);
    const double rhs = n * x * x * (dh + n * hf(x));
    return std::abs(lhs - rhs);
}

ExactPoly p_beta_derivative_residual(unsigned r)
{
    const E k = E::main_var();
    const E pr = p_poly_recur(r);
    const E coeff = E(static_cast<long>(r)) + E::beta() + E::one_minus_beta() * k;
    return E::beta() * pr.derivative_beta() - (coeff * pr - n_power(1) * p_poly_recur(r + 1));
}

ExactPoly p_beta_derivative_residual_alternative(unsigned r)
{
    if (r < 1) throw RangeError("p_beta_derivative_residual_alternative: needs r >= 1");
    const E k = E::main_var();
    const E pr = p_poly_recur(r);
    return E::beta() * pr.derivative_beta() - E::beta() * pr.over_one_minus_beta() +
           E::beta() * (k - E(1)) * E(static_cast<long>(r) + 1) * E::ninv() * p_poly_recur(r - 1);
}

double check_P_beta_derivative(unsigned r, double k, double beta, double n, double h)
{
    const E pr = p_poly_recur(r);
    const E next = p_poly_recur(r + 1);
    const double d = (pr.eval(k, beta + h, n) - pr.eval(k, beta - h, n)) / (2.0 * h);
    const double rhs = (r + beta + (1.0 - beta) * k) * pr.eval(k, beta, n) - n * next.eval(k, beta, n);
    return std::abs(beta * d - rhs);
}

double check_L_beta_derivative(const JainParams& p, std::size_t k, double x, double h)
{
    const JainParams up(p.n, p.beta + h), down(p.n, p.beta - h);
    const double d = (jain_basis(up, k, x) - jain_basis(down, k, x)) / (2.0 * h);
    const double kd = static_cast<double>(k);
    const double shifted = k >= 1 ? jain_basis(p, k - 1, x + p.beta / p.n) : 0.0;
    const double rhs = -kd * jain_basis(p, k, x) + (kd - 1.0) * shifted;
    return std::abs(d - rhs);
}

double L_beta_derivative_analytic(const JainParams& p, std::size_t k, double x)
{
    const double kd = static_cast<double>(k);
    const double L = jain_basis(p, k, x);
    const double d = k == 0 ? 0.0 : L * (kd * (kd - 1.0) / (p.n * x + kd * p.beta) - kd);
    const double shifted = k >= 1 ? (kd - 1.0) * jain_basis(p, k - 1, x + p.beta / p.n) : 0.0;
    const double rhs = -kd * L + shifted;
    return relative(d - rhs, std::abs(d) + kd * L + std::abs(shifted));
}

double check_L_beta_derivative_alternative(const JainParams& p, std::size_t k, double x, double h)
{
    const JainParams up(p.n, p.beta + h), down(p.n, p.beta - h);
    const double d = (jain_basis(up, k, x) - jain_basis(down, k, x)) / (2.0 * h);
    const double kd = static_cast<double>(k);
    const double nx = p.n * x;
    const double shifted = k >= 1 ? jain_basis(p, k - 1, x + p.beta / p.n) : 0.0;
    const double rhs = -kd * jain_basis(p, k, x) + (kd - 1.0) * nx / (nx + p.beta) * shifted;
    return std::abs(d - rhs);
}

double voronovskaja_limit(double beta, const SmoothTestFunction& f, double x, VoronovskajaLimit which)
{
    const VoronovskajaCoefficients c =
        which == VoronovskajaLimit::stated ? voronovskaja_stated() : voronovskaja_derived();
    return c.first.eval(x, beta, 1.0) * f.fp(x) + c.second.eval(x, beta, 1.0) * f.fpp(x);
}

ConvergenceReport voronovskaja_experiment(double beta, const SmoothTestFunction& f, double x,
                                          const std::vector<double>& n_values, const SeriesQuadConfig& cfg,
                                          VoronovskajaLimit which)
{
    const double limit = voronovskaja_limit(beta, f, x, which);
    const double fx = f.f(x);
    const std::vector<double> scaled = parallel_map(n_values.size(), [&](std::size_t i) {
        const JainParams p(n_values[i], beta);
        return n_values[i] * (apply_phillips(p, f.f, x, cfg) - fx);
    });

    ConvergenceReport rep;
    rep.label = "voronovskaja:" + f.f.label;
    rep.n_values = n_values;
    for (double s : scaled) rep.errors.push_back(std::abs(s - limit));
    rep.observed_rate = loglog_slope(rep.n_values, rep.errors);
    if (!scaled.empty()) rep.limit_estimate = scaled.back();
    rep.extra.emplace_back("scaled", scaled);
    rep.extra.emplace_back("limit", std::vector<double>(n_values.size(), limit));
    rep.validate();
    return rep;
}

ConvergenceReport korovkin_convergence_table(double beta, const TestFunction& f, double a, double b,
                                             const std::vector<double>& n_values, std::size_t grid_size,
                                             const SeriesQuadConfig& cfg)
{
    if (!(a >= 0.0 && b > a)) throw DomainError("korovkin_convergence_table: need 0 <= a < b");
    if (grid_size < 2) throw DomainError("korovkin_convergence_table: grid_size must be >= 2");
    const std::vector<double> errors = parallel_map(n_values.size(), [&](std::size_t i) {
        const JainParams p(n_values[i], beta);
        double worst = 0.0;
        for (std::size_t g = 0; g < grid_size; ++g) {
            const double x = a + (b - a) * static_cast<double>(g) / static_cast<double>(grid_size - 1);
            worst = std::max(worst, std::abs(apply_phillips(p, f, x, cfg) - f(x)));
        }
        return worst;
    });

    ConvergenceReport rep;
    rep.label = "korovkin:" + f.label;
    rep.n_values = n_values;
    rep.errors = errors;
    rep.observed_rate = loglog_slope(rep.n_values, rep.errors);
    rep.validate();
    return rep;
}

double modulus_of_continuity(const TestFunction& f, double delta, int m, double domain_cap, std::size_t grid_size,
                             std::size_t h_steps)
{
    if (!(delta > 0.0)) throw DomainError("modulus_of_continuity: delta must be > 0");
    if (m != 1 && m != 2) throw DomainError("modulus_of_continuity: order must be 1 or 2");
    if (grid_size < 2 || h_steps < 1) throw DomainError("modulus_of_continuity: grid too small");
    double best = 0.0;
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double x = domain_cap * static_cast<double>(i) / static_cast<double>(grid_size - 1);
        const double f0 = f(x);
        for (std::size_t j = 1; j <= h_steps; ++j) {
            const double h = delta * static_cast<double>(j) / static_cast<double>(h_steps);
            const double d = m == 1 ? f(x + h) - f0 : f(x + 2.0 * h) - 2.0 * f(x + h) + f0;
            best = std::max(best, std::abs(d));
        }
    }
    return best;
}

double theorem3_delta(const JainParams& p, double x)
{
    static const ExpPoly mu2 = central_moment_derived(2);
    const double shift = p.beta * (2.0 - p.beta) * (-std::expm1(-p.n * x)) / (p.n * (1.0 - p.beta));
    return mu2.eval(x, p.beta, p.n) + shift * shift;
}

BoundCheck theorem3_bound_check(const JainParams& p, const TestFunction& f, double x, double C,
                                const SeriesQuadConfig& cfg, std::optional<double> domain_cap,
                                std::size_t grid_size)
{
    if (!(p.beta > 0.0)) throw DomainError("theorem3_bound_check: requires beta > 0");
    const double cap = domain_cap.value_or(std::max(10.0, 4.0 * x));
    const double shift = p.beta * (2.0 - p.beta) * (-std::expm1(-p.n * x)) / (p.n * (1.0 - p.beta));

    BoundCheck out;
    out.lhs = std::abs(apply_phillips(p, f, x, cfg) - f(x));
    out.delta_n = theorem3_delta(p, x);
    out.omega2 = out.delta_n > 0.0 ? modulus_of_continuity(f, std::sqrt(out.delta_n), 2, cap, grid_size) : 0.0;
    out.omega1 = shift > 0.0 ? modulus_of_continuity(f, shift, 1, cap, grid_size) : 0.0;
    out.rhs = C * out.omega2 + out.omega1;
    // The left side carries the series/quadrature error, bounded by a few tail tolerances.
    const double slack = 10.0 * cfg.tail_tol;
    out.holds = out.lhs <= out.rhs + slack;
    if (out.lhs <= out.omega1 + slack)
        out.c_min = 0.0;
    else if (out.omega2 > 0.0)
        out.c_min = (out.lhs - out.omega1) / out.omega2;
    else
        out.c_min = std::numeric_limits<double>::infinity();
    return out;
}

} // namespace jpk
