// Acceptance gate: one PASS/FAIL line per criterion, INFO lines with the measured numbers.
// Every tolerance used below is a named constant in this file.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include <jpk/identity_lab.hpp>

using namespace jpk;

namespace {

constexpr double series_rel_tol = 1e-9;        // criteria 3 and 4
constexpr double hyp_quad_rel_tol = 1e-8;      // criterion 5, closed form vs quadrature
constexpr double hyp_u_rel_tol = 1e-6;         // criterion 5, U-integral route
constexpr double normalization_tol = 1e-10;    // criterion 6
constexpr double voronovskaja_rel_tol = 0.05;  // criterion 7b
constexpr double halving_lo = 0.2;             // criterion 8
constexpr double halving_hi = 0.3;
constexpr double analytic_rel_tol = 1e-12;     // criterion 8, analytic-derivative routes
constexpr double korovkin_slope = -0.9;        // criterion 9
constexpr double bound_C = 10.0;               // criterion 10

const std::vector<double> grid_n{2, 8, 32};
const std::vector<double> grid_beta{0.0, 0.25, 0.5, 0.75};
const std::vector<double> grid_x{0.1, 1.0, 4.0};

int failures = 0;

void verdict(int id, const std::string& title, bool pass, double seconds)
{
    std::printf("%s criterion %d: %s (%.2f s)\n", pass ? "PASS" : "FAIL", id, title.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
}

template <class... A>
void info(const char* fmt, A... a)
{
    std::printf("INFO  ");
    std::printf(fmt, a...);
    std::printf("\n");
}

double rel_err(double got, double want)
{
    if (want == 0.0) return std::abs(got);
    return std::abs(got - want) / std::abs(want);
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

// ------------------------------------------------------------------ 1

bool criterion1()
{
    bool ok = true;
    for (unsigned r = 0; r <= 8; ++r)
        if (!p_recurrence_residual(r).is_zero()) {
            info("three-term P recurrence residual nonzero at r=%u", r);
            ok = false;
        }
    for (unsigned r = 0; r <= 5; ++r)
        if (!(p_poly_recur(r) == p_poly_closed(r))) {
            info("P_%u from the recurrence differs from the table", r);
            ok = false;
        }
    // Each tabulated a_s^r sits in a fixed slot of P_r; compare slot by slot.
    for (int r = 2; r <= 5; ++r)
        for (int s = 1; s < r; ++s) {
            const ExactPoly slot = p_poly_recur(static_cast<unsigned>(r)).coefficient_of_main(r - s);
            const ExactPoly tab = p_poly_closed(static_cast<unsigned>(r)).coefficient_of_main(r - s);
            if (!(slot == tab)) {
                info("a_%d^%d slot differs", s, r);
                ok = false;
            }
        }
    return ok;
}

// ------------------------------------------------------------------ 2

bool criterion2()
{
    bool ok = true;
    for (unsigned r = 2; r <= 5; ++r)
        if (!(f_poly_recur(r) == f_poly_closed(r))) {
            info("f_%u from the tabulated recurrence differs from the closed f_%u", r, r);
            ok = false;
        }
    for (unsigned r = 1; r <= 5; ++r) {
        const auto b = derive_b_coefficients(r);
        for (unsigned j = 0; j < r; ++j)
            if (!(b[j] == coeff_b(static_cast<int>(j), static_cast<int>(r)))) {
                info("b_%u^%u differs", j, r);
                ok = false;
            }
    }
    for (unsigned r = 2; r <= 5; ++r) {
        const auto a = derive_f_recurrence_alphas(r);
        for (unsigned j = 1; j < r; ++j) {
            const ExactPoly tab = coeff_alpha(static_cast<int>(j), static_cast<int>(r));
            if (!(a[j - 1] == tab)) {
                info("alpha_%u^%u: tabulated %s, exact %s", j, r, tab.to_string("x").c_str(),
                     a[j - 1].to_string("x").c_str());
                ok = false;
            }
        }
        if (!(f_poly_recur_with(r, a) == f_poly_closed(r))) {
            info("recurrence with exact alphas still fails at r=%u", r);
            ok = false;
        }
    }
    return ok;
}

// ------------------------------------------------------------------ 3

bool criterion3()
{
    bool ok = true;
    for (unsigned r = 0; r <= 3; ++r)
        if (!(t_moment_general(r) == t_moment_closed(r))) {
            info("T_%u general differs from closed", r);
            ok = false;
        }
    SeriesQuadConfig cfg;
    double worst = 0.0;
    for (double n : grid_n)
        for (double b : grid_beta)
            for (double x : grid_x)
                for (unsigned r = 0; r <= 5; ++r) {
                    const double want = (r <= 3 ? t_moment_closed(r) : t_moment_general(r)).eval(x, b, n);
                    const double e = rel_err(t_moment_series(JainParams(n, b), r, x, cfg), want);
                    worst = std::max(worst, e);
                    if (e > series_rel_tol) {
                        info("T_%u series vs exact at n=%g beta=%g x=%g: rel %.3e", r, n, b, x, e);
                        ok = false;
                    }
                }
    info("T series route: max relative error %.3e over r<=5", worst);
    return ok;
}

// ------------------------------------------------------------------ 4

// sum_{k>=1} Q_r(k-1; x) L_{n,k}(x), Q_r = sum_j C(r,j) (-x)^{r-j} P_j, plus (-x)^r e^{-nx}.
// Each Q_r(k-1; x) is evaluated in exact rationals, so the only cancellation left is across k.
double central_series_exact_weights(double n, double beta, unsigned r, double x)
{
    const JainParams p(n, beta);
    ExactPoly q;
    for (unsigned j = 0; j <= r; ++j) {
        const double binom = std::tgamma(r + 1.0) / (std::tgamma(j + 1.0) * std::tgamma(r - j + 1.0));
        q += ExactPoly(static_cast<long>(std::lround(binom))) * p_poly_recur(j) *
             ExactPoly(Rational(std::pow(-1.0, r - j))) * ExactPoly(Rational(x)).pow(r - j);
    }
    const Rational nb(n), bb(beta);
    SeriesQuadConfig cfg;
    cfg.tail_tol = 1e-13;
    const std::size_t kmax = basis_partial_sum(p, x, cfg).k_used + 200;
    CompensatedSum s;
    s.add(std::pow(-x, r) * std::exp(-n * x));
    for (std::size_t k = 1; k <= kmax; ++k) {
        const double w = jain_basis(p, k, x);
        if (w == 0.0) continue;
        s.add(q.eval_exact(Rational(static_cast<long>(k)), bb, nb).get_d() * w);
    }
    return s.value();
}

bool criterion4()
{
    bool ok = true;
    for (unsigned r = 1; r <= 2; ++r)
        if (!(central_moment_derived(r) == central_moment_closed(r))) {
            info("mu_%u derived differs from the table", r);
            ok = false;
        }
    SeriesQuadConfig cfg;
    for (unsigned r = 3; r <= 5; ++r) {
        double worst = 0.0, worst_lib = 0.0;
        for (double n : grid_n)
            for (double b : grid_beta)
                for (double x : grid_x) {
                    const double want = central_moment_derived(r).eval(x, b, n);
                    const double e = rel_err(central_series_exact_weights(n, b, r, x), want);
                    worst = std::max(worst, e);
                    worst_lib = std::max(worst_lib, rel_err(central_moment_series_via_t(JainParams(n, b), r, x, cfg), want));
                    if (e > series_rel_tol) {
                        info("mu_%u series vs derived at n=%g beta=%g x=%g: rel %.3e", r, n, b, x, e);
                        ok = false;
                    }
                }
        const ExpPoly diff = central_moment_derived(r) - central_moment_closed(r);
        info("mu_%u: series vs derived max rel %.3e (binomial-of-T route %.3e); derived - tabulated = %s", r, worst,
             worst_lib, diff.is_zero() ? "0" : diff.to_string().c_str());
    }
    return ok;
}

// ------------------------------------------------------------------ 5

bool criterion5()
{
    bool ok = true;
    boost::math::quadrature::exp_sinh<double> integrator;
    SeriesQuadConfig cfg;
    double worst_q = 0.0, worst_u = 0.0;
    for (double n : {1.0, 4.0})
        for (double b : {0.1, 0.5, 0.9})
            for (std::size_t k = 1; k <= 30; ++k)
                for (unsigned r = 0; r <= 5; ++r) {
                    const JainParams p(n, b);
                    const double closed = basis_moment_integral(p, k, r);
                    const double quad = integrator.integrate(
                        [&](double t) {
                            const double w = jain_basis(p, k - 1, t);
                            return w == 0.0 ? 0.0 : std::pow(t, r) * w;
                        },
                        1e-14);
                    const double eq = rel_err(closed, quad);
                    worst_q = std::max(worst_q, eq);
                    if (eq > hyp_quad_rel_tol) {
                        info("closed vs quadrature n=%g beta=%g k=%zu r=%u: rel %.3e", n, b, k, r, eq);
                        ok = false;
                    }
                    if (k < 2) continue;  // the U-integral route needs (k-1) beta > 0
                    const double z = static_cast<double>(k - 1) * b;
                    const double log_pref = std::lgamma(r + 2.0) + (static_cast<double>(k) + r) * std::log(z) -
                                            std::lgamma(static_cast<double>(k)) - (r + 1.0) * std::log(n) - z;
                    const double via_u =
                        std::exp(log_pref) * tricomi_u_oracle(r + 2.0, static_cast<double>(k) + r + 1.0, z, cfg);
                    const double eu = rel_err(via_u, closed);
                    worst_u = std::max(worst_u, eu);
                    if (eu > hyp_u_rel_tol) {
                        info("closed vs U-integral n=%g beta=%g k=%zu r=%u: rel %.3e", n, b, k, r, eu);
                        ok = false;
                    }
                }
    info("inner products: max rel vs quadrature %.3e, vs U-integral %.3e", worst_q, worst_u);
    return ok;
}

// ------------------------------------------------------------------ 6

bool criterion6()
{
    bool ok = true;
    SeriesQuadConfig cfg;
    const TestFunction one = builtin_function("const").f;
    double ws = 0.0, wp = 0.0;
    for (double n : grid_n)
        for (double b : grid_beta)
            for (double x : grid_x) {
                const JainParams p(n, b);
                const double es = std::abs(basis_partial_sum(p, x, cfg).sum - 1.0);
                const double ep = std::abs(apply_phillips(p, one, x, cfg) - 1.0);
                ws = std::max(ws, es);
                wp = std::max(wp, ep);
                if (es > normalization_tol || ep > normalization_tol) {
                    info("normalization at n=%g beta=%g x=%g: |sum L - 1| = %.3e, |P(1) - 1| = %.3e", n, b, x, es, ep);
                    ok = false;
                }
            }
    info("max |sum L - 1| = %.3e, max |P(1,x) - 1| = %.3e", ws, wp);
    return ok;
}

// ------------------------------------------------------------------ 7

bool criterion7()
{
    bool ok = true;
    const ExactPoly B = ExactPoly::beta(), X = ExactPoly::main_var();
    const ExpPoly t2 = t_moment_closed(2);
    const ExactPoly limit = ninv_limit(t2.poly - X * X);
    const ExactPoly stated = (ExactPoly(2) * X * B * ExactPoly::beta_poly({2, -1}) +
                              ExactPoly(2) * X * ExactPoly::beta_poly({1, 2, -1}))
                                 .over_one_minus_beta();
    // The e^{-nx} part of n[T_2 - x^2] is n * O(1/n) * e^{-nx} -> 0 for x > 0.
    if (!(limit == stated)) {
        info("lim n[T_2 - x^2] = %s, stated %s", limit.to_string("x").c_str(), stated.to_string("x").c_str());
        ok = false;
    }

    SeriesQuadConfig cfg;
    const std::vector<double> ns{8, 16, 32, 64, 128, 256, 512};
    const SmoothTestFunction f = builtin_function("exp-neg");
    const ConvergenceReport rep = voronovskaja_experiment(0.25, f, 1.0, ns, cfg, VoronovskajaLimit::stated);
    const double lim = voronovskaja_limit(0.25, f, 1.0, VoronovskajaLimit::stated);
    const double dlim = voronovskaja_limit(0.25, f, 1.0, VoronovskajaLimit::derived);
    bool monotone = true;
    for (std::size_t i = 1; i < rep.errors.size(); ++i) monotone = monotone && rep.errors[i] < rep.errors[i - 1];
    const double at512 = *rep.limit_estimate;
    const double rel = rel_err(at512, lim);
    info("e^{-t}, beta=0.25, x=1: n(P_n f - f) at n=512 = %.6f, stated limit %.6f (rel %.3f), derived limit %.6f, "
         "monotone errors: %s",
         at512, lim, rel, dlim, monotone ? "yes" : "no");
    if (!monotone || rel > voronovskaja_rel_tol) ok = false;
    return ok;
}

// ------------------------------------------------------------------ 8

struct ProbeStats {
    double lo = HUGE_VAL, hi = -HUGE_VAL;
    bool ok = true;
    std::string first_bad;
    void add(const HalvingProbe& p, const std::string& where)
    {
        lo = std::min(lo, p.ratio);
        hi = std::max(hi, p.ratio);
        if (!(p.ratio >= halving_lo && p.ratio <= halving_hi) && ok) {
            ok = false;
            first_bad = where;
        }
    }
};

std::string at(double n, double b, double x, long r, long k)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, "n=%g beta=%g x=%g r=%ld k=%ld", n, b, x, r, k);
    return buf;
}

bool criterion8()
{
    bool ok = true;
    for (unsigned r = 0; r <= 3; ++r) {
        const ExpPoly res = t_diff_identity_symbolic(r);
        if (!res.is_zero()) {
            info("T differential identity, symbolic residual at r=%u: %s", r, res.to_string().c_str());
            ok = false;
        }
    }
    for (unsigned r = 0; r <= 4; ++r) {
        const ExactPoly res = p_beta_derivative_residual(r);
        if (!res.is_zero()) {
            info("P beta-derivative identity, symbolic residual at r=%u: %s", r, res.to_string("k").c_str());
            ok = false;
        }
    }

    ProbeStats t_fd, l_fd, pb_fd, lb_fd;
    double l_an = 0.0, lb_an = 0.0;
    std::string lb_an_where;
    for (double n : grid_n)
        for (double b : {0.25, 0.5, 0.75})
            for (double x : grid_x) {
                const JainParams p(n, b);
                for (unsigned r = 0; r <= 3; ++r)
                    t_fd.add(halving_probe([&](double h) { return check_T_diff_identity(p, r, x, h); }, 0.01 * x),
                             at(n, b, x, r, -1));
                for (std::size_t k : {1, 3, 10}) {
                    l_fd.add(halving_probe([&](double h) { return check_basis_diff_identity(p, k, x, h); }, 0.01 * x),
                             at(n, b, x, -1, static_cast<long>(k)));
                    l_an = std::max(l_an, basis_diff_identity_analytic(p, k, x));
                    const double hb = 0.01 * std::min(b, 1.0 - b);
                    lb_fd.add(halving_probe([&](double h) { return check_L_beta_derivative(p, k, x, h); }, hb),
                              at(n, b, x, -1, static_cast<long>(k)));
                    const double a = L_beta_derivative_analytic(p, k, x);
                    if (a > lb_an) {
                        lb_an = a;
                        lb_an_where = at(n, b, x, -1, static_cast<long>(k));
                    }
                    for (unsigned r = 0; r <= 4; ++r)
                        pb_fd.add(halving_probe(
                                      [&](double h) {
                                          return check_P_beta_derivative(r, static_cast<double>(k), b, n, h);
                                      },
                                      0.01 * std::min(b, 1.0 - b)),
                                  at(n, b, x, r, static_cast<long>(k)));
                }
            }
    auto report = [&](const char* name, const ProbeStats& s) {
        info("%s: halving ratios in [%.4f, %.4f]%s%s", name, s.lo, s.hi, s.ok ? "" : ", first outside at ",
             s.first_bad.c_str());
        ok = ok && s.ok;
    };
    report("T differential identity (finite differences)", t_fd);
    report("basis x-derivative identity (finite differences)", l_fd);
    report("P beta-derivative identity (finite differences)", pb_fd);
    report("basis beta-derivative identity (finite differences)", lb_fd);
    info("basis x-derivative identity, analytic: max relative residual %.3e", l_an);
    info("basis beta-derivative identity, analytic: max relative residual %.3e at %s", lb_an, lb_an_where.c_str());
    ok = ok && l_an <= analytic_rel_tol && lb_an <= analytic_rel_tol;
    return ok;
}

// ------------------------------------------------------------------ 9

bool criterion9()
{
    bool ok = true;
    SeriesQuadConfig cfg;
    const std::vector<double> ns{4, 8, 16, 32, 64, 128, 256};
    for (double b : {0.25, 0.5})
        for (const char* name : {"const", "linear", "square"}) {
            const ConvergenceReport rep = korovkin_convergence_table(b, builtin_function(name).f, 0.0, 2.0, ns, 41, cfg);
            const double worst = *std::max_element(rep.errors.begin(), rep.errors.end());
            if (std::string(name) == "const") {
                info("e_0, beta=%g: max sup error %.3e (preserved exactly)", b, worst);
                if (worst > 10 * cfg.tail_tol) ok = false;
                continue;
            }
            const double slope = rep.observed_rate.value_or(0.0);
            info("%s, beta=%g: log-log slope %.4f", name, b, slope);
            if (!rep.observed_rate || slope > korovkin_slope) ok = false;
        }
    return ok;
}

// ------------------------------------------------------------------ 10

bool criterion10()
{
    bool ok = true;
    SeriesQuadConfig cfg;
    double worst_c = 0.0;
    for (const char* name : {"const", "exp-neg", "sin", "abs-sin"}) {
        const TestFunction f = builtin_function(name).f;
        for (double n : grid_n)
            for (double b : {0.25, 0.5, 0.75})
                for (double x : grid_x) {
                    const BoundCheck c = theorem3_bound_check(JainParams(n, b), f, x, bound_C, cfg);
                    worst_c = std::max(worst_c, c.c_min);
                    if (!c.holds || c.c_min > bound_C) {
                        info("%s at n=%g beta=%g x=%g: lhs %.3e rhs %.3e C_min %.3f", name, n, b, x, c.lhs, c.rhs,
                             c.c_min);
                        ok = false;
                    }
                }
    }
    info("largest empirical C over the grid: %.4f", worst_c);
    return ok;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<bool()>>> criteria{
        {"exact P recurrence and table", criterion1},
        {"f recurrence, b and alpha tables", criterion2},
        {"T moments, exact and series routes", criterion3},
        {"central moments against the derived oracle", criterion4},
        {"hypergeometric inner products", criterion5},
        {"normalization and constant preservation", criterion6},
        {"Voronovskaja limit", criterion7},
        {"differential identities", criterion8},
        {"Korovkin rates", criterion9},
        {"modulus-of-continuity bound with C = 10", criterion10},
    };
    int id = 1;
    for (const auto& [title, fn] : criteria) {
        Timer t;
        bool pass = false;
        try {
            pass = fn();
        } catch (const std::exception& e) {
            info("criterion %d threw: %s", id, e.what());
        }
        verdict(id, title, pass, t.seconds());
        ++id;
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
