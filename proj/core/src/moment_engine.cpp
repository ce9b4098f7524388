#include "jpk/moment_engine.hpp"

#include <mutex>
#include <string>

#include "jpk/errors.hpp"

namespace jpk {

namespace {

using E = ExactPoly;

E bp(std::initializer_list<long> c)
{
    return E::beta_poly(c);
}

E k_var()
{
    return E::main_var();
}

E x_var()
{
    return E::main_var();
}

E xpow(int p)
{
    return E::monomial(1, {p, 0, 0});
}

E ninv_pow(int p)
{
    return E::monomial(1, {0, 0, p});
}

E beta_pow(int p)
{
    return E::monomial(1, {0, p, 0});
}

E inv_omb(int m)
{
    return E(1).over_one_minus_beta(m);
}

long binom(unsigned n, unsigned k)
{
    long r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * static_cast<long>(n - k + i) / static_cast<long>(i);
    return r;
}

[[noreturn]] void out_of_table(const char* what, unsigned r, unsigned limit)
{
    throw RangeError(std::string(what) + ": r = " + std::to_string(r) + " is beyond the implemented table (r <= " +
                     std::to_string(limit) + ")");
}

// beta^r (r+1-beta)/(1-beta), the constant term shared by P_r and f_{n,r} (without 1/n^r).
E boundary_constant(unsigned r)
{
    return beta_pow(static_cast<int>(r)) * bp({static_cast<long>(r) + 1, -1}) * inv_omb(1);
}

} // namespace

ExactPoly n_power(int p)
{
    return ninv_pow(-p);
}

ExactPoly coeff_a(int s, int r)
{
    switch (r * 10 + s) {
    case 21: return bp({1, 4, -2});
    case 31: return bp({1, 1, -3, 1});
    case 32: return bp({2, 4, 6, -12, 3});
    case 41: return bp({3, -2, -7, 8, -2});
    case 42: return bp({11, 16, 6, -24, 6});
    case 43: return bp({3, 5, 5, 5, -10, 2});
    case 51: return E::one_minus_beta().pow(3) * bp({2, 2, -1});
    case 52: return E::one_minus_beta() * bp({7, 8, 0, -8, 2});
    case 53: return bp({10, 6, -3, -8, -12, 12, -2});
    case 54: return bp({24, 36, 30, 20, 15, -30, 5});
    default: break;
    }
    throw RangeError("coeff_a: no entry a_" + std::to_string(s) + "^" + std::to_string(r));
}

ExactPoly coeff_b(int j, int r)
{
    if (r < 1 || r > 5 || j < 0 || j >= r)
        throw RangeError("coeff_b: no entry b_" + std::to_string(j) + "^" + std::to_string(r));
    const long rl = r;
    switch (j) {
    case 0: return E(1);
    case 1: return bp({rl - 1, 2, -1});
    case 2: return bp({(rl - 1) * (rl - 2), 4 * (rl - 2), 7 - 2 * rl, -4, 1});
    default: break;
    }
    switch (r * 10 + j) {
    case 43: return bp({6, 12, 6, -8, -6, 6, -1});
    case 53: return bp({24, 36, 6, -20, -3, 6, -1});
    case 54: return bp({24, 48, 48, -8, -31, 8, 14, -8, 1});
    default: break;
    }
    throw RangeError("coeff_b: no entry b_" + std::to_string(j) + "^" + std::to_string(r));
}

ExactPoly coeff_alpha(int j, int r)
{
    if (r < 2 || r > 5 || j < 1 || j >= r)
        throw RangeError("coeff_alpha: no entry alpha_" + std::to_string(j) + "^" + std::to_string(r));
    const long rl = r;
    switch (j) {
    case 1: return E((rl - 1)) * bp({rl - 2, 4, -1});
    case 2: return E((rl - 2) * (rl - 3)) * bp({2, 2 * rl - 5, 1});
    default: break;
    }
    switch (r * 10 + j) {
    case 43: return E(6) * bp({1, 6, -1});
    case 53: return E(12) * bp({3, 10, -2});
    case 54: return E(48) * bp({1, 1, 1});
    default: break;
    }
    throw RangeError("coeff_alpha: no entry alpha_" + std::to_string(j) + "^" + std::to_string(r));
}

ExactPoly coeff_lambda(int j)
{
    if (j == 3) return bp({12, 12, -6, -4, 9, -6, 1});
    if (j == 4) return bp({23, 38, 27, -12, -25, 8, 14, -8, 1});
    throw RangeError("coeff_lambda: only lambda_3^5 and lambda_4^5 exist");
}

ExactPoly p_poly_closed(unsigned r)
{
    const E k = k_var();
    const E omb = E::one_minus_beta();
    const auto kp = [&](int p) { return E::monomial(1, {p, 0, 0}); };
    E body;
    switch (r) {
    case 0: return E(1);
    case 1: body = omb * k + bp({0, 2, -1}) * inv_omb(1); break;
    case 2: body = omb.pow(2) * kp(2) + coeff_a(1, 2) * k + beta_pow(2) * bp({3, -1}) * inv_omb(1); break;
    case 3:
        body = omb.pow(3) * kp(3) + E(3) * coeff_a(1, 3) * kp(2) + coeff_a(2, 3) * k * inv_omb(1) +
               beta_pow(3) * bp({4, -1}) * inv_omb(1);
        break;
    case 4:
        body = omb.pow(4) * kp(4) + E(2) * coeff_a(1, 4) * kp(3) + coeff_a(2, 4) * kp(2) +
               E(2) * coeff_a(3, 4) * k * inv_omb(1) + beta_pow(4) * bp({5, -1}) * inv_omb(1);
        break;
    case 5:
        body = omb.pow(5) * kp(5) + E(5) * coeff_a(1, 5) * kp(4) + E(5) * coeff_a(2, 5) * kp(3) +
               E(5) * coeff_a(3, 5) * kp(2) * inv_omb(1) + coeff_a(4, 5) * k * inv_omb(1) +
               beta_pow(5) * bp({6, -1}) * inv_omb(1);
        break;
    default: out_of_table("p_poly_closed", r, 5);
    }
    return body * ninv_pow(static_cast<int>(r));
}

ExactPoly p_poly_recur(unsigned r)
{
    static std::mutex mu;
    static std::vector<E> cache;
    std::lock_guard lock(mu);
    if (cache.empty()) {
        cache.push_back(E(1));
        cache.push_back(p_poly_closed(1));
    }
    const E km1 = k_var() - E(1);
    while (cache.size() <= r) {
        // P_{s+2} = ninv [(1-beta)(k-1) + s + 2] P_{s+1} + ninv^2 beta (s+2)(k-1) P_s
        const std::size_t s = cache.size() - 2;
        const long s2 = static_cast<long>(s) + 2;
        const E next = E::ninv() * (E::one_minus_beta() * km1 + E(s2)) * cache[s + 1] +
                       ninv_pow(2) * E::beta() * E(s2) * km1 * cache[s];
        cache.push_back(next);
    }
    return cache[r];
}

ExactPoly p_recurrence_residual(unsigned r)
{
    const E km1 = k_var() - E(1);
    const long r2 = static_cast<long>(r) + 2;
    return n_power(2) * p_poly_recur(r + 2) - n_power(1) * (E::one_minus_beta() * km1 + E(r2)) * p_poly_recur(r + 1) -
           E::beta() * E(r2) * km1 * p_poly_recur(r);
}

ExactPoly b_moment_closed(unsigned r)
{
    const E x = x_var();
    switch (r) {
    case 0: return E(1);
    case 1: return x * inv_omb(1);
    case 2: return xpow(2) * inv_omb(2) + x * E::ninv() * inv_omb(3);
    case 3:
        return xpow(3) * inv_omb(3) + E(3) * xpow(2) * E::ninv() * inv_omb(4) +
               bp({1, 2}) * x * ninv_pow(2) * inv_omb(5);
    case 4:
        return xpow(4) * inv_omb(4) + E(6) * xpow(3) * E::ninv() * inv_omb(5) +
               bp({7, 8}) * xpow(2) * ninv_pow(2) * inv_omb(6) + bp({1, 8, 6}) * x * ninv_pow(3) * inv_omb(7);
    case 5:
        return xpow(5) * inv_omb(5) + E(10) * xpow(4) * E::ninv() * inv_omb(6) +
               E(5) * bp({5, 4}) * xpow(3) * ninv_pow(2) * inv_omb(7) +
               E(15) * bp({1, 4, 2}) * xpow(2) * ninv_pow(3) * inv_omb(8) +
               bp({1, 22, 58, 24}) * x * ninv_pow(4) * inv_omb(9);
    default: out_of_table("b_moment_closed", r, 5);
    }
}

ExpPoly t_moment_closed(unsigned r)
{
    const E x = x_var();
    const auto boundary = [](unsigned s) { return boundary_constant(s) * ninv_pow(static_cast<int>(s)); };
    switch (r) {
    case 0: return {E(1), E()};
    case 1: {
        const E c = boundary(1);
        return {x + c, -c};
    }
    case 2: {
        const E c = boundary(2);
        return {xpow(2) + E(2) * bp({1, 2, -1}) * x * E::ninv() * inv_omb(1) + c, -c};
    }
    case 3: {
        const E c = boundary(3);
        return {xpow(3) + E(3) * bp({2, 2, -1}) * xpow(2) * E::ninv() * inv_omb(1) +
                    E(3) * bp({2, 4, 1, -4, 1}) * x * ninv_pow(2) * inv_omb(2) + c,
                -c};
    }
    default: out_of_table("t_moment_closed", r, 3);
    }
}

ExpPoly t_moment_series_form(unsigned r)
{
    if (r > 5) out_of_table("t_moment_general (B moment table)", r, 5);
    const E p = p_poly_recur(r);
    ExpPoly t;
    // sum_{k>=1} k^s L_{n,k} = n^s B(t^s) for s >= 1; for s = 0 the k = 0 term e^{-nx} is missing.
    for (int s = 1; s <= p.degree_in_main(); ++s)
        t.poly += p.coefficient_of_main(s) * n_power(s) * b_moment_closed(static_cast<unsigned>(s));
    const E c0 = p.coefficient_of_main(0);
    t.poly += c0;
    t.exp_coeff -= c0;
    return t;
}

ExpPoly t_moment_general(unsigned r)
{
    ExpPoly t = t_moment_series_form(r);
    if (r == 0) t.exp_coeff += E(1);
    return t;
}

ExactPoly f_poly_closed(unsigned r)
{
    if (r > 5) out_of_table("f_poly_closed", r, 5);
    E f = boundary_constant(r) * ninv_pow(static_cast<int>(r));
    for (unsigned j = 0; j < r; ++j)
        f += E(binom(r, j)) * coeff_b(static_cast<int>(j), static_cast<int>(r)) * xpow(static_cast<int>(r - j)) *
             ninv_pow(static_cast<int>(j)) * inv_omb(static_cast<int>(j));
    return f;
}

ExactPoly f_poly_from_t(unsigned r)
{
    const ExpPoly t = t_moment_general(r);
    E shift = boundary_constant(r) * ninv_pow(static_cast<int>(r));
    if (r == 0) shift -= E(1);
    if (!(t.exp_coeff + shift).is_zero())
        throw DomainError("f_poly_from_t: exponential part does not cancel for r = " + std::to_string(r));
    return t.poly;
}

ExactPoly f_poly_recur_with(unsigned r, const std::vector<ExactPoly>& alphas)
{
    if (r < 2) throw RangeError("f_poly_recur: the recurrence starts at r = 2");
    if (alphas.size() < r - 1) throw RangeError("f_poly_recur: need r - 1 alpha coefficients");
    std::vector<E> f;
    for (unsigned s = 0; s < r; ++s) f.push_back(f_poly_closed(s));
    const E lead = x_var() + bp({2 * (static_cast<long>(r) - 1), 2, -1}) * E::ninv() * inv_omb(1);
    E result = lead * f[r - 1];
    for (unsigned j = 1; j < r; ++j) {
        const E scale = E(j % 2 ? -1 : 1) * beta_pow(static_cast<int>(j) - 1) * alphas[j - 1] *
                        ninv_pow(static_cast<int>(j) + 1) * inv_omb(static_cast<int>(j) + 1);
        result += scale * f[r - j - 1];
    }
    return result;
}

ExactPoly f_poly_recur(unsigned r)
{
    if (r < 2 || r > 5) out_of_table("f_poly_recur (alpha table)", r, 5);
    std::vector<E> alphas;
    for (unsigned j = 1; j < r; ++j) alphas.push_back(coeff_alpha(static_cast<int>(j), static_cast<int>(r)));
    return f_poly_recur_with(r, alphas);
}

std::vector<ExactPoly> derive_f_recurrence_alphas(unsigned r)
{
    if (r < 2) throw RangeError("derive_f_recurrence_alphas: the recurrence starts at r = 2");
    std::vector<E> f;
    for (unsigned s = 0; s <= r; ++s) f.push_back(f_poly_from_t(s));
    const E lead = x_var() + bp({2 * (static_cast<long>(r) - 1), 2, -1}) * E::ninv() * inv_omb(1);
    E rem = f[r] - lead * f[r - 1];
    std::vector<E> alphas;
    for (unsigned j = 1; j < r; ++j) {
        // f_{r-j-1} is monic of degree r-j-1, so its x^{r-j-1} coefficient fixes alpha_j.
        const int deg = static_cast<int>(r - j - 1);
        const E c = rem.coefficient_of_main(deg);
        const E sign = E(j % 2 ? -1 : 1);
        const E alpha = (sign * c * n_power(static_cast<int>(j) + 1) * E::one_minus_beta().pow(j + 1))
                            .divided_by_beta_power(static_cast<int>(j) - 1);
        if (alpha.min_ninv_exponent() != 0 || alpha.max_ninv_exponent() != 0)
            throw DomainError("derive_f_recurrence_alphas: alpha depends on n");
        alphas.push_back(alpha);
        rem -= sign * beta_pow(static_cast<int>(j) - 1) * alpha * ninv_pow(static_cast<int>(j) + 1) *
               inv_omb(static_cast<int>(j) + 1) * f[r - j - 1];
    }
    if (!rem.is_zero()) throw DomainError("derive_f_recurrence_alphas: no recurrence of the tabulated shape");
    return alphas;
}

std::vector<ExactPoly> derive_b_coefficients(unsigned r)
{
    const E f = f_poly_from_t(r);
    std::vector<E> b;
    for (unsigned j = 0; j < r; ++j) {
        const E c = f.coefficient_of_main(static_cast<int>(r - j));
        b.push_back(c * n_power(static_cast<int>(j)) * E::one_minus_beta().pow(j) *
                    E(Rational(1, binom(r, j))));
    }
    return b;
}

ExactPoly central_f_poly(unsigned r)
{
    E F;
    for (unsigned s = 0; s < r; ++s) {
        const int d = static_cast<int>(r - s);
        F += E(s % 2 ? -1 : 1) * E(binom(r, s)) * beta_pow(d) * ninv_pow(d) *
             bp({static_cast<long>(r) + 1 - static_cast<long>(s), -1}) * inv_omb(1) * xpow(static_cast<int>(s));
    }
    return F;
}

ExpPoly central_moment_closed(unsigned r)
{
    const E x = x_var();
    const E n1 = E::ninv();
    E poly;
    switch (r) {
    case 1: break;
    case 2: poly = E(2) * bp({1, 2, -1}) * x * n1 * inv_omb(1); break;
    case 3:
        poly = E(3) * bp({0, -2, 1}) * xpow(2) * n1 * inv_omb(1) +
               E(3) * bp({2, 4, 1, -1, 1}) * x * ninv_pow(2) * inv_omb(2);
        break;
    case 4:
        poly = E(4) * bp({0, 2, -1}) * xpow(3) * n1 * inv_omb(1) +
               E(2) * bp({10, 8, -13, 6, 3}) * xpow(2) * ninv_pow(2) * inv_omb(2) +
               E(4) * bp({6, 12, 6, -8, -6, 6, -1}) * x * ninv_pow(3) * inv_omb(3);
        break;
    case 5:
        poly = E(5) * bp({0, -2, 1}) * xpow(4) * n1 * inv_omb(1) +
               E(10) * bp({0, 0, 3, -4, 1}) * xpow(3) * ninv_pow(2) * inv_omb(2) +
               E(10) * coeff_lambda(3) * xpow(2) * ninv_pow(3) * inv_omb(3) +
               E(5) * coeff_lambda(4) * x * ninv_pow(4) * inv_omb(4);
        break;
    default:
        if (r == 0) throw RangeError("central_moment_closed: the table starts at r = 1");
        out_of_table("central_moment_closed", r, 5);
    }
    const E F = central_f_poly(r);
    return {poly + F, -F};
}

ExpPoly central_moment_derived(unsigned r)
{
    ExpPoly mu;
    for (unsigned j = 0; j <= r; ++j) {
        const E c = E(((r - j) % 2 ? -1 : 1) * binom(r, j)) * xpow(static_cast<int>(r - j));
        mu = mu + c * t_moment_general(j);
    }
    return mu;
}

ExactPoly ninv_limit(const ExactPoly& p, int d)
{
    if (p.is_zero()) return p;
    if (p.min_ninv_exponent() < d)
        throw DomainError("ninv_limit: n^" + std::to_string(d) + " p diverges as n -> infinity");
    return p.coefficient_of_ninv(d);
}

VoronovskajaCoefficients voronovskaja_stated()
{
    return {bp({0, 2, -1}) * inv_omb(1), bp({1, 2, -1}) * x_var() * inv_omb(1)};
}

VoronovskajaCoefficients voronovskaja_derived()
{
    // For x > 0 the e^{-nx} parts vanish faster than any power of 1/n.
    const E first = ninv_limit(central_moment_derived(1).poly);
    const E second = ninv_limit(central_moment_derived(2).poly) * E(Rational(1, 2));
    return {first, second};
}

} // namespace jpk
