#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <jpk/identity_lab.hpp>

namespace jpk::cli {

namespace {

double parse_real(std::string_view s)
{
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw DomainError("not a real number: '" + std::string(s) + "'");
    return v;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& s)
{
    std::vector<double> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_real(trim(item)));
    if (out.empty()) throw DomainError("empty list");
    return out;
}

std::pair<double, double> parse_interval(const std::string& s)
{
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw DomainError("interval must look like a:b");
    return {parse_real(s.substr(0, colon)), parse_real(s.substr(colon + 1))};
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
    std::string op;
    std::string fn = "const";
    double n = 1.0;
    double beta = 0.0;
    std::vector<std::string> x;
    std::optional<double> tol;
};

int cmd_eval(const EvalArgs& a, SeriesQuadConfig cfg, std::ostream& out)
{
    const JainParams p(a.n, a.beta);
    if (a.tol) cfg.tail_tol = *a.tol;
    cfg.validate();
    const SmoothTestFunction f = builtin_function(a.fn);
    std::vector<double> xs;
    for (const auto& spec : a.x) {
        const auto pts = parse_points(spec);
        xs.insert(xs.end(), pts.begin(), pts.end());
    }
    for (double x : xs)
        if (!(x >= 0.0)) throw DomainError("x must be >= 0");

    std::ostringstream rows;
    rows << "x,value\n";
    for (double x : xs) {
        const double v = a.op == "jain" ? apply_jain(p, f.f, x, cfg) : apply_phillips(p, f.f, x, cfg);
        rows << format_real(x) << ',' << format_real(v) << '\n';
    }
    out << rows.str();
    return ok;
}

// ---------------------------------------------------------------- moments

struct MomentArgs {
    std::string kind;
    unsigned r_max = 3;
    double n = 1.0;
    double beta = 0.0;
    double x = 1.0;
    double k = 1.0;
    std::string format = "csv";
    std::string mu_source = "closed";
};

struct MomentTable {
    unsigned r_min = 0;
    unsigned r_limit = 0;  // largest supported r
    std::string limiting_table;
};

MomentTable moment_table(const std::string& kind)
{
    if (kind == "B") return {0, 5, "B-moment table (r <= 5)"};
    if (kind == "T") return {0, 5, "B-moment table used to expand T (r <= 5)"};
    if (kind == "f") return {0, 5, "b coefficient table (r <= 5)"};
    if (kind == "mu") return {1, 5, "central-moment table (1 <= r <= 5)"};
    return {0, 64, "P recurrence (r <= 64)"};
}

std::string symbolic_moment(const MomentArgs& a, unsigned r)
{
    if (a.kind == "B") return b_moment_closed(r).to_string("x");
    if (a.kind == "T") return (r <= 3 ? t_moment_closed(r) : t_moment_general(r)).to_string();
    if (a.kind == "f") return f_poly_closed(r).to_string("x");
    if (a.kind == "P") return p_poly_recur(r).to_string("k");
    return (a.mu_source == "derived" ? central_moment_derived(r) : central_moment_closed(r)).to_string();
}

double numeric_moment(const MomentArgs& a, unsigned r)
{
    if (a.kind == "B") return b_moment_closed(r).eval(a.x, a.beta, a.n);
    if (a.kind == "T") return t_moment_general(r).eval(a.x, a.beta, a.n);
    if (a.kind == "f") return f_poly_closed(r).eval(a.x, a.beta, a.n);
    if (a.kind == "P") return p_poly_recur(r).eval(a.k, a.beta, a.n);
    return (a.mu_source == "derived" ? central_moment_derived(r) : central_moment_closed(r)).eval(a.x, a.beta, a.n);
}

int cmd_moments(const MomentArgs& a, std::ostream& out, std::ostream& err)
{
    const MomentTable table = moment_table(a.kind);
    if (a.r_max > table.r_limit) {
        err << "jpk moments: r-max " << a.r_max << " exceeds the " << table.limiting_table << '\n';
        return bad_arguments;
    }
    if (a.r_max < table.r_min) {
        // mu_0 = 1 trivially; the tabulated central moments start at r = 1.
        out << "mu_0 = 1\n";
        err << "jpk moments: note: the central-moment table starts at r = 1; mu_0 = 1 is trivial\n";
        return bad_arguments;
    }
    (void)JainParams(a.n, a.beta);

    std::ostringstream body;
    if (a.format == "symbolic") {
        for (unsigned r = table.r_min; r <= a.r_max; ++r) body << a.kind << '_' << r << " = " << symbolic_moment(a, r) << '\n';
    } else if (a.format == "csv") {
        body << "r,value\n";
        for (unsigned r = table.r_min; r <= a.r_max; ++r) body << r << ',' << format_real(numeric_moment(a, r)) << '\n';
    } else {
        nlohmann::ordered_json j;
        j["kind"] = a.kind;
        j["n"] = a.n;
        j["beta"] = a.beta;
        if (a.kind == "P")
            j["k"] = a.k;
        else
            j["x"] = a.x;
        std::vector<unsigned> rs;
        std::vector<double> vs;
        for (unsigned r = table.r_min; r <= a.r_max; ++r) {
            rs.push_back(r);
            vs.push_back(numeric_moment(a, r));
        }
        j["r"] = rs;
        j["value"] = vs;
        body << j.dump() << '\n';
    }
    out << body.str();
    return ok;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    std::string suite = "all";
    std::string grid = "small";
};

struct CheckLine {
    std::string name;
    bool pass = true;
    double max_residual = 0.0;
    std::string where;  // offending point, if any
    std::string note;
};

struct Grid {
    std::vector<double> n, beta, x;
};

Grid verify_grid(const std::string& which)
{
    if (which == "full") return {{2, 8, 32}, {0.25, 0.5, 0.75}, {0.1, 1, 4}};
    return {{2}, {0.25, 0.5}, {1}};
}

std::string point(double n, double beta, double x, long r, long k)
{
    std::string s = "n=" + format_real(n) + " beta=" + format_real(beta) + " x=" + format_real(x);
    if (r >= 0) s += " r=" + std::to_string(r);
    if (k >= 0) s += " k=" + std::to_string(k);
    return s;
}

void record(CheckLine& c, double residual, bool ok_here, const std::string& where)
{
    c.max_residual = std::max(c.max_residual, residual);
    if (!ok_here && c.pass) {
        c.pass = false;
        c.where = where;
    }
}

std::vector<CheckLine> recurrence_suite()
{
    std::vector<CheckLine> lines;
    {
        CheckLine c{"P three-term recurrence, r=0..8", true, 0.0, {}, {}};
        for (unsigned r = 0; r <= 8; ++r) record(c, 0.0, p_recurrence_residual(r).is_zero(), "r=" + std::to_string(r));
        lines.push_back(c);
    }
    {
        CheckLine c{"P recurrence vs P table, r=0..5", true, 0.0, {}, {}};
        for (unsigned r = 0; r <= 5; ++r) record(c, 0.0, p_poly_recur(r) == p_poly_closed(r), "r=" + std::to_string(r));
        lines.push_back(c);
    }
    {
        CheckLine c{"T from P and B moments vs T table, r=0..3", true, 0.0, {}, {}};
        for (unsigned r = 0; r <= 3; ++r)
            record(c, 0.0, t_moment_general(r) == t_moment_closed(r), "r=" + std::to_string(r));
        lines.push_back(c);
    }
    {
        CheckLine c{"f from T vs f table, r=0..5", true, 0.0, {}, {}};
        for (unsigned r = 0; r <= 5; ++r) record(c, 0.0, f_poly_from_t(r) == f_poly_closed(r), "r=" + std::to_string(r));
        lines.push_back(c);
    }
    {
        CheckLine c{"b coefficient table, r=1..5", true, 0.0, {}, {}};
        for (unsigned r = 1; r <= 5; ++r) {
            const auto b = derive_b_coefficients(r);
            for (unsigned j = 0; j < r; ++j)
                record(c, 0.0, b[j] == coeff_b(static_cast<int>(j), static_cast<int>(r)),
                       "b_" + std::to_string(j) + "^" + std::to_string(r));
        }
        lines.push_back(c);
    }
    {
        CheckLine c{"f recurrence with alpha table, r=2..5", true, 0.0, {}, {}};
        for (unsigned r = 2; r <= 5; ++r) {
            const bool same = f_poly_recur(r) == f_poly_closed(r);
            record(c, 0.0, same, "r=" + std::to_string(r));
            if (!same) {
                const auto alphas = derive_f_recurrence_alphas(r);
                for (unsigned j = 1; j < r; ++j) {
                    const ExactPoly tab = coeff_alpha(static_cast<int>(j), static_cast<int>(r));
                    if (!(alphas[j - 1] == tab))
                        c.note += " alpha_" + std::to_string(j) + "^" + std::to_string(r) + ": table " +
                                  tab.to_string("x") + ", exact " + alphas[j - 1].to_string("x") + ";";
                }
            }
        }
        lines.push_back(c);
    }
    return lines;
}

constexpr double analytic_tol = 1e-12;

bool second_order(const HalvingProbe& p)
{
    return p.ratio >= 0.2 && p.ratio <= 0.3;
}

std::vector<CheckLine> differential_suite(const Grid& g)
{
    std::vector<CheckLine> lines;
    {
        CheckLine c{"T differential identity (symbolic), r=0..3", true, 0.0, {}, {}};
        for (unsigned r = 0; r <= 3; ++r) {
            const ExpPoly res = t_diff_identity_symbolic(r);
            if (!res.is_zero()) c.note += " r=" + std::to_string(r) + " residual " + res.to_string() + ";";
            record(c, 0.0, res.is_zero(), "r=" + std::to_string(r));
        }
        lines.push_back(c);
    }
    CheckLine t_fd{"T differential identity (finite differences), h-halving ratio", true, 0.0, {}, {}};
    CheckLine l_an{"basis x-derivative identity (analytic)", true, 0.0, {}, {}};
    CheckLine l_fd{"basis x-derivative identity (finite differences), h-halving ratio", true, 0.0, {}, {}};
    CheckLine b_an{"basis beta-derivative identity (analytic)", true, 0.0, {}, {}};
    CheckLine b_fd{"basis beta-derivative identity (finite differences), h-halving ratio", true, 0.0, {}, {}};
    double t_lo = 1e300, t_hi = -1e300, l_lo = 1e300, l_hi = -1e300, b_lo = 1e300, b_hi = -1e300;
    for (double n : g.n)
        for (double beta : g.beta)
            for (double x : g.x) {
                const JainParams p(n, beta);
                for (unsigned r = 0; r <= 3; ++r) {
                    const auto probe = halving_probe([&](double h) { return check_T_diff_identity(p, r, x, h); }, 0.01 * x);
                    t_lo = std::min(t_lo, probe.ratio);
                    t_hi = std::max(t_hi, probe.ratio);
                    record(t_fd, probe.residual_h, second_order(probe), point(n, beta, x, r, -1));
                }
                for (std::size_t k : {1, 3, 10}) {
                    const double ra = basis_diff_identity_analytic(p, k, x);
                    record(l_an, ra, ra <= analytic_tol, point(n, beta, x, -1, static_cast<long>(k)));
                    const auto probe =
                        halving_probe([&](double h) { return check_basis_diff_identity(p, k, x, h); }, 0.01 * x);
                    l_lo = std::min(l_lo, probe.ratio);
                    l_hi = std::max(l_hi, probe.ratio);
                    record(l_fd, probe.residual_h, second_order(probe), point(n, beta, x, -1, static_cast<long>(k)));

                    const double rb = L_beta_derivative_analytic(p, k, x);
                    record(b_an, rb, rb <= analytic_tol, point(n, beta, x, -1, static_cast<long>(k)));
                    const double hb = 0.01 * std::min(beta, 1.0 - beta);
                    const auto pb = halving_probe([&](double h) { return check_L_beta_derivative(p, k, x, h); }, hb);
                    b_lo = std::min(b_lo, pb.ratio);
                    b_hi = std::max(b_hi, pb.ratio);
                    record(b_fd, pb.residual_h, second_order(pb), point(n, beta, x, -1, static_cast<long>(k)));
                }
            }
    t_fd.note = " ratios in [" + format_real(t_lo) + ", " + format_real(t_hi) + "]";
    l_fd.note = " ratios in [" + format_real(l_lo) + ", " + format_real(l_hi) + "]";
    b_fd.note = " ratios in [" + format_real(b_lo) + ", " + format_real(b_hi) + "]";
    lines.push_back(t_fd);
    lines.push_back(l_an);
    lines.push_back(l_fd);
    {
        CheckLine c{"P beta-derivative identity (symbolic), r=0..4", true, 0.0, {}, {}};
        for (unsigned r = 0; r <= 4; ++r) {
            const bool zero = p_beta_derivative_residual(r).is_zero();
            record(c, 0.0, zero, "r=" + std::to_string(r));
        }
        lines.push_back(c);
    }
    lines.push_back(b_an);
    lines.push_back(b_fd);
    return lines;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out)
{
    std::vector<CheckLine> lines;
    if (a.suite == "recurrences" || a.suite == "all") {
        auto r = recurrence_suite();
        lines.insert(lines.end(), r.begin(), r.end());
    }
    if (a.suite == "differential" || a.suite == "all") {
        auto d = differential_suite(verify_grid(a.grid));
        lines.insert(lines.end(), d.begin(), d.end());
    }
    bool all = true;
    std::ostringstream report;
    for (const auto& c : lines) {
        all = all && c.pass;
        report << (c.pass ? "PASS " : "FAIL ") << c.name << " max_residual=" << format_real(c.max_residual);
        if (!c.pass) report << " first failure at " << c.where;
        if (!c.note.empty()) report << " |" << c.note;
        report << '\n';
    }
    out << report.str();
    return all ? ok : verification_failed;
}

// ---------------------------------------------------------------- converge

struct ConvergeArgs {
    std::string experiment;
    std::string fn = "exp-neg";
    double beta = 0.25;
    double x = 1.0;
    std::string interval = "0:2";
    std::string n_list;
    std::string out_path;
    std::string format = "csv";
    std::string limit = "stated";
    std::size_t grid_size = 41;
    double C = 10.0;
};

std::vector<double> default_n_list(const std::string& experiment)
{
    if (experiment == "korovkin") return {4, 8, 16, 32, 64, 128, 256};
    if (experiment == "bound") return {2, 4, 8, 16, 32, 64};
    return {8, 16, 32, 64, 128, 256, 512};
}

int cmd_converge(const ConvergeArgs& a, const SeriesQuadConfig& cfg, std::ostream& out)
{
    const std::vector<double> ns = a.n_list.empty() ? default_n_list(a.experiment) : parse_list(a.n_list);
    for (double n : ns) (void)JainParams(n, a.beta);
    const SmoothTestFunction f = builtin_function(a.fn);

    ConvergenceReport rep;
    if (a.experiment == "voronovskaja") {
        rep = voronovskaja_experiment(a.beta, f, a.x, ns, cfg,
                                      a.limit == "derived" ? VoronovskajaLimit::derived : VoronovskajaLimit::stated);
    } else if (a.experiment == "korovkin") {
        const auto [lo, hi] = parse_interval(a.interval);
        rep = korovkin_convergence_table(a.beta, f.f, lo, hi, ns, a.grid_size, cfg);
    } else {
        rep.label = "bound:" + f.f.label;
        rep.n_values = ns;
        std::vector<double> rhs, w1, w2, delta, cmin, holds;
        for (double n : ns) {
            const BoundCheck b = theorem3_bound_check(JainParams(n, a.beta), f.f, a.x, a.C, cfg);
            rep.errors.push_back(b.lhs);
            rhs.push_back(b.rhs);
            w1.push_back(b.omega1);
            w2.push_back(b.omega2);
            delta.push_back(b.delta_n);
            cmin.push_back(b.c_min);
            holds.push_back(b.holds ? 1.0 : 0.0);
        }
        rep.observed_rate = loglog_slope(rep.n_values, rep.errors);
        rep.extra = {{"lhs", rep.errors}, {"rhs", rhs},     {"omega1", w1}, {"omega2", w2},
                     {"delta_n", delta},  {"C_min", cmin}, {"holds", holds}};
        rep.validate();
    }

    const std::string text = a.format == "json" ? rep.to_json() + "\n" : rep.to_csv();
    if (a.out_path.empty()) {
        out << text;
    } else {
        std::ofstream file(a.out_path);
        if (!file) throw DomainError("cannot open output file " + a.out_path);
        file << text;
    }
    return ok;
}

} // namespace

std::vector<double> parse_points(const std::string& spec)
{
    const auto first = spec.find(':');
    if (first == std::string::npos) return {parse_real(trim(spec))};
    const auto second = spec.find(':', first + 1);
    if (second == std::string::npos) throw DomainError("range must look like a:b:steps");
    const double a = parse_real(trim(spec.substr(0, first)));
    const double b = parse_real(trim(spec.substr(first + 1, second - first - 1)));
    const double steps = parse_real(trim(spec.substr(second + 1)));
    if (!(steps >= 1.0) || steps != std::floor(steps)) throw DomainError("range steps must be a positive integer");
    const auto m = static_cast<std::size_t>(steps);
    if (m == 1) return {a};
    std::vector<double> pts(m);
    for (std::size_t i = 0; i < m; ++i) pts[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(m - 1);
    return pts;
}

SeriesQuadConfig load_config(const std::string& path, SeriesQuadConfig base)
{
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read config file " + path);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DomainError("config line without '=': " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const double v = parse_real(value);
        if (key == "k_max")
            base.k_max = static_cast<std::size_t>(v);
        else if (key == "tail_tol")
            base.tail_tol = v;
        else if (key == "quad_rel_tol")
            base.quad_rel_tol = v;
        else if (key == "quad_max_subdiv")
            base.quad_max_subdiv = static_cast<unsigned>(v);
        else
            throw DomainError("unknown config key '" + key + "'");
    }
    base.validate();
    return base;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Jain / Phillips-type operator toolkit", "jpk"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "key=value file with k_max, tail_tol, quad_rel_tol, quad_max_subdiv");

    const std::vector<std::string> fns = builtin_function_names();

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "Evaluate B_n^beta or P_n^beta on a built-in function");
    eval->add_option("--op", ea.op, "Operator")->required()->check(CLI::IsMember({"jain", "phillips"}));
    eval->add_option("--fn", ea.fn, "Built-in function")->check(CLI::IsMember(fns));
    eval->add_option("--n", ea.n, "Operator index n > 0");
    eval->add_option("--beta", ea.beta, "Parameter 0 <= beta < 1");
    eval->add_option("--x", ea.x, "Point, repeatable, or range a:b:steps")->required()->allow_extra_args(false);
    eval->add_option("--tol", ea.tol, "Series tail tolerance");

    MomentArgs ma;
    auto* moments = app.add_subcommand("moments", "Moment tables, numeric or symbolic");
    moments->add_option("--kind", ma.kind, "Object")->required()->check(CLI::IsMember({"B", "T", "mu", "P", "f"}));
    moments->add_option("--r-max", ma.r_max, "Largest order");
    moments->add_option("--n", ma.n, "n for numeric output");
    moments->add_option("--beta", ma.beta, "beta for numeric output");
    moments->add_option("--x", ma.x, "x for numeric output");
    moments->add_option("--k", ma.k, "Basis index for numeric P output");
    moments->add_option("--format", ma.format, "Output format")->check(CLI::IsMember({"csv", "json", "symbolic"}));
    moments->add_option("--mu-source", ma.mu_source, "Central moments from the closed table or derived from T")
        ->check(CLI::IsMember({"closed", "derived"}));

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Check recurrences and differential identities");
    verify->add_option("--suite", va.suite, "Suite")->check(CLI::IsMember({"recurrences", "differential", "all"}));
    verify->add_option("--grid", va.grid, "Parameter grid")->check(CLI::IsMember({"small", "full"}));

    ConvergeArgs ca;
    auto* converge = app.add_subcommand("converge", "Convergence experiments");
    converge->add_option("--experiment", ca.experiment, "Experiment")
        ->required()
        ->check(CLI::IsMember({"voronovskaja", "korovkin", "bound"}));
    converge->add_option("--fn", ca.fn, "Built-in function")->check(CLI::IsMember(fns));
    converge->add_option("--beta", ca.beta, "Parameter 0 <= beta < 1");
    converge->add_option("--x", ca.x, "Point (voronovskaja, bound)");
    converge->add_option("--interval", ca.interval, "Interval a:b (korovkin)");
    converge->add_option("--n-list", ca.n_list, "Comma-separated increasing n values");
    converge->add_option("--out", ca.out_path, "Write the report here instead of stdout");
    converge->add_option("--format", ca.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    converge->add_option("--limit", ca.limit, "Voronovskaja limit: as stated or derived from the moments")
        ->check(CLI::IsMember({"stated", "derived"}));
    converge->add_option("--grid-size", ca.grid_size, "Grid points on the interval (korovkin)");
    converge->add_option("--C", ca.C, "Constant in the bound experiment");

    std::vector<const char*> argv{"jpk"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : bad_arguments;
    }

    try {
        SeriesQuadConfig cfg;
        if (config_path.empty())
            if (const char* env = std::getenv("JPK_CONFIG"); env && *env) config_path = env;
        if (!config_path.empty()) cfg = load_config(config_path);

        if (*eval) return cmd_eval(ea, cfg, out);
        if (*moments) return cmd_moments(ma, out, err);
        if (*verify) return cmd_verify(va, out);
        if (*converge) return cmd_converge(ca, cfg, out);
    } catch (const DomainError& e) {
        err << "jpk: " << e.what() << '\n';
        return bad_arguments;
    } catch (const RangeError& e) {
        err << "jpk: " << e.what() << '\n';
        return bad_arguments;
    } catch (const TruncationError& e) {
        err << "jpk: evaluation failed: " << e.what() << '\n';
        return evaluation_error;
    } catch (const QuadratureError& e) {
        err << "jpk: evaluation failed: " << e.what() << '\n';
        return evaluation_error;
    }
    return bad_arguments;
}

} // namespace jpk::cli
