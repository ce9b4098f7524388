#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <jpk/basis.hpp>
#include <jpk/errors.hpp>
#include <jpk/moment_engine.hpp>

using namespace jpk;

namespace {

const ExactPoly B = ExactPoly::beta();
const ExactPoly K = ExactPoly::main_var();
const ExactPoly X = ExactPoly::main_var();
const ExactPoly NI = ExactPoly::ninv();
const ExactPoly OMB = ExactPoly::one_minus_beta();

std::string read_golden(const std::string& name)
{
    std::ifstream in(std::string(JPK_GOLDEN_DIR) + "/" + name);
    REQUIRE_MESSAGE(in.good(), "missing golden file " << name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <class F>
std::string render(const char* sym, unsigned lo, unsigned hi, F&& f)
{
    std::ostringstream out;
    for (unsigned r = lo; r <= hi; ++r) out << sym << '_' << r << " = " << f(r) << '\n';
    return out.str();
}

// sum_k w_k g(k) by brute force over the basis, no truncation logic shared with the library.
template <class G>
double brute_series(const JainParams& p, double x, G&& g, std::size_t kmax = 4000)
{
    double s = 0.0;
    for (std::size_t k = 0; k <= kmax; ++k) s += jain_basis(p, k, x) * g(k);
    return s;
}

} // namespace

TEST_CASE("tabulated a coefficients as printed")
{
    CHECK(coeff_a(1, 2) == ExactPoly::beta_poly({1, 4, -2}));
    CHECK(coeff_a(4, 5) == ExactPoly::beta_poly({24, 36, 30, 20, 15, -30, 5}));
    CHECK_THROWS_AS(coeff_a(5, 5), RangeError);
    CHECK_THROWS_AS(coeff_a(1, 6), RangeError);
}

TEST_CASE("P polynomials")
{
    CHECK(p_poly_closed(0) == ExactPoly(1));
    const ExactPoly p2 = NI.pow(2) * (OMB.pow(2) * K.pow(2) + ExactPoly::beta_poly({1, 4, -2}) * K +
                                      B.pow(2) * ExactPoly::beta_poly({3, -1}) * ExactPoly(1).over_one_minus_beta());
    CHECK(p_poly_closed(2) == p2);
    CHECK(p_poly_closed(1).eval(7.0, 0.0, 2.0) == doctest::Approx(3.5));
    CHECK_THROWS_AS(p_poly_closed(6), RangeError);

    for (unsigned r = 0; r <= 5; ++r) CHECK(p_poly_recur(r) == p_poly_closed(r));
    for (unsigned r = 0; r <= 8; ++r) CHECK(p_recurrence_residual(r).is_zero());

    const ExactPoly p6 = p_poly_recur(6);
    CHECK(p6.degree_in_main() == 6);
    CHECK(p6.coefficient_of_main(6) == OMB.pow(6) * NI.pow(6));
}

TEST_CASE("P at beta = 0 equals the exact gamma moment ratio")
{
    // At beta = 0 the kernel is a gamma density, and <L_{k-1}, t^r>/<L_{k-1}, 1> = (k)_r / n^r.
    for (unsigned r = 0; r <= 8; ++r)
        for (double k : {1.0, 2.0, 9.0})
            CHECK(p_poly_recur(r).eval(k, 0.0, 3.0) == doctest::Approx(pochhammer(k, r) / std::pow(3.0, r)));
}

TEST_CASE("B moments")
{
    CHECK(b_moment_closed(0) == ExactPoly(1));
    CHECK(b_moment_closed(1) == X.over_one_minus_beta());
    CHECK(b_moment_closed(2).eval(1.0, 0.0, 10.0) == doctest::Approx(1.1));
    CHECK_THROWS_AS(b_moment_closed(6), RangeError);

    for (double b : {0.0, 0.3, 0.6})
        for (double x : {0.2, 1.5})
            for (unsigned r = 0; r <= 5; ++r) {
                const JainParams p(4.0, b);
                const double oracle = brute_series(p, x, [&](std::size_t k) { return std::pow(k / 4.0, r); });
                CHECK(b_moment_closed(r).eval(x, b, 4.0) == doctest::Approx(oracle).epsilon(1e-11));
            }
}

TEST_CASE("T moments")
{
    CHECK(t_moment_closed(0) == ExpPoly{ExactPoly(1), ExactPoly()});
    CHECK(t_moment_closed(1).eval(2.2, 0.0, 5.0) == doctest::Approx(2.2));
    CHECK(t_moment_closed(2).eval(1.3, 0.0, 5.0) == doctest::Approx(1.3 * 1.3 + 2 * 1.3 / 5.0));
    for (unsigned r = 0; r <= 3; ++r) CHECK(t_moment_general(r) == t_moment_closed(r));

    const ExactPoly shift = B * ExactPoly::beta_poly({2, -1}) * NI * ExactPoly(1).over_one_minus_beta();
    CHECK(t_moment_general(1).poly == X + shift);

    // r = 4 against a brute-force sum of P_4(k-1) L_{n,k}.
    const JainParams p(4.0, 0.5);
    const ExactPoly p4 = p_poly_recur(4);
    const double series =
        brute_series(p, 1.0, [&](std::size_t k) { return k == 0 ? 0.0 : p4.eval(static_cast<double>(k), 0.5, 4.0); });
    CHECK(t_moment_general(4).eval(1.0, 0.5, 4.0) == doctest::Approx(series).epsilon(1e-9));
    CHECK_THROWS_AS(t_moment_general(6), RangeError);
    CHECK(t_moment_series_form(0).exp_coeff == ExactPoly(-1));
}

TEST_CASE("f polynomials and the b table")
{
    CHECK(f_poly_closed(0) == ExactPoly(1));
    for (unsigned r = 2; r <= 5; ++r)
        CHECK(coeff_b(1, static_cast<int>(r)) == ExactPoly(static_cast<long>(r) - 1) + ExactPoly::beta_poly({0, 2, -1}));
    for (unsigned r = 0; r <= 5; ++r) {
        CHECK(f_poly_from_t(r) == f_poly_closed(r));
        // f_{n,r} = T_{n,r} + [(beta/n)^r (r+1-beta)/(1-beta) - delta_{r0}] e^{-nx}
        const ExpPoly t = t_moment_general(r);
        CHECK(t.poly == f_poly_closed(r));
        const ExactPoly c = (B * NI).pow(r) * (ExactPoly(static_cast<long>(r) + 1) - B) *
                            ExactPoly(1).over_one_minus_beta();
        CHECK(t.exp_coeff == ExactPoly(r == 0 ? 1 : 0) - c);
    }
    for (unsigned r = 1; r <= 5; ++r) {
        const auto bs = derive_b_coefficients(r);
        for (unsigned j = 0; j < r; ++j) CHECK(bs[j] == coeff_b(static_cast<int>(j), static_cast<int>(r)));
    }
}

TEST_CASE("f recurrence")
{
    CHECK(f_poly_recur(2) == f_poly_closed(2));
    for (unsigned r = 2; r <= 5; ++r) {
        const auto alphas = derive_f_recurrence_alphas(r);
        REQUIRE(alphas.size() == r - 1);
        CHECK(f_poly_recur_with(r, alphas) == f_poly_closed(r));
        // alpha_1^r as printed is right for every r.
        CHECK(alphas[0] == coeff_alpha(1, static_cast<int>(r)));
        CHECK(alphas[0] == ExactPoly(static_cast<long>(r) - 1) * ExactPoly::beta_poly({static_cast<long>(r) - 2, 4, -1}));
        if (r >= 3) {
            const long rr = static_cast<long>(r);
            CHECK(alphas[1] == ExactPoly((rr - 1) * (rr - 2)) * ExactPoly::beta_poly({2, 2 * rr - 5, 1}));
        }
    }
    CHECK(derive_f_recurrence_alphas(4)[2] == coeff_alpha(3, 4));
}

TEST_CASE("central moments")
{
    CHECK(central_moment_derived(0) == ExpPoly{ExactPoly(1), ExactPoly()});
    CHECK(central_moment_closed(1).eval(1.7, 0.0, 3.0) == doctest::Approx(0.0));
    CHECK(central_moment_closed(2).eval(1.7, 0.0, 3.0) == doctest::Approx(2 * 1.7 / 3.0));
    CHECK(central_moment_derived(1) == central_moment_closed(1));
    CHECK(central_moment_derived(2) == central_moment_closed(2));

    const ExactPoly f1 = central_f_poly(1);
    CHECK(f1 == B * ExactPoly::beta_poly({2, -1}) * NI * ExactPoly(1).over_one_minus_beta());
    CHECK(central_moment_derived(1) == ExpPoly{f1, -f1});

    // The printed third moment misses part of the x / n^2 term.
    const ExpPoly d3 = central_moment_derived(3) - central_moment_closed(3);
    CHECK(d3.exp_coeff.is_zero());
    CHECK(d3.poly == ExactPoly(-9) * X * B.pow(3) * NI.pow(2) * ExactPoly(1).over_one_minus_beta(2));
    CHECK_THROWS_AS(central_moment_closed(0), RangeError);
    CHECK_THROWS_AS(central_moment_closed(6), RangeError);
}

TEST_CASE("Voronovskaja coefficients")
{
    const auto st = voronovskaja_stated();
    CHECK(st.first == B * ExactPoly::beta_poly({2, -1}) * ExactPoly(1).over_one_minus_beta());
    CHECK(st.second == ExactPoly::beta_poly({1, 2, -1}) * X * ExactPoly(1).over_one_minus_beta());
    const auto dv = voronovskaja_derived();
    CHECK(dv.first == st.first);
    CHECK(dv.second == X.over_one_minus_beta());

    CHECK(ninv_limit(NI * X + NI.pow(2)) == X);
    CHECK_THROWS_AS(ninv_limit(X), DomainError);
}

TEST_CASE("golden symbolic text")
{
    CHECK(render("P", 0, 5, [](unsigned r) { return p_poly_closed(r).to_string("k"); }) == read_golden("P.txt"));
    CHECK(render("P", 0, 8, [](unsigned r) { return p_poly_recur(r).to_string("k"); }) ==
          read_golden("P_recurrence.txt"));
    CHECK(render("f", 0, 5, [](unsigned r) { return f_poly_closed(r).to_string("x"); }) == read_golden("f.txt"));
    CHECK(render("T", 0, 3, [](unsigned r) { return t_moment_closed(r).to_string(); }) == read_golden("T.txt"));
    CHECK(render("mu", 1, 5, [](unsigned r) { return central_moment_closed(r).to_string(); }) ==
          read_golden("mu_closed.txt"));
    CHECK(render("mu", 1, 5, [](unsigned r) { return central_moment_derived(r).to_string(); }) ==
          read_golden("mu_derived.txt"));
}
