#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace jpk {

using Rational = mpq_class;

/// Exponents of one monomial main^m * beta^b * ninv^e.
///
/// The ninv exponent is signed: a negative exponent is a positive power of n, which the
/// differential identities need when they apply (D + n).
struct Exponents {
    int main = 0;
    int beta = 0;
    int ninv = 0;

    auto operator<=>(const Exponents&) const = default;
    bool operator==(const Exponents&) const = default;
};

/// Polynomial over the rationals in the symbols main (k or x), beta and n^{-1}, divided by a
/// shared power (1 - beta)^denom_pow.
///
/// Values are always in canonical form: no zero coefficients are stored and denom_pow is
/// minimal, i.e. the numerator is not divisible by (1 - beta) when denom_pow > 0. Canonical
/// forms are unique, so equality is structural.
class ExactPoly {
public:
    using Terms = std::map<Exponents, Rational>;

    ExactPoly() = default;
    ExactPoly(const Rational& c);  // NOLINT(google-explicit-constructor)
    ExactPoly(long c);             // NOLINT(google-explicit-constructor)

    static ExactPoly monomial(const Rational& c, Exponents e, int denom_pow = 0);
    static ExactPoly main_var() { return monomial(1, {1, 0, 0}); }
    static ExactPoly beta() { return monomial(1, {0, 1, 0}); }
    static ExactPoly ninv() { return monomial(1, {0, 0, 1}); }
    static ExactPoly one_minus_beta() { return ExactPoly(1) - beta(); }
    /// Polynomial in beta from ascending integer coefficients.
    static ExactPoly beta_poly(std::initializer_list<long> ascending);

    const Terms& terms() const noexcept { return terms_; }
    int denom_pow() const noexcept { return denom_pow_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    friend ExactPoly operator+(const ExactPoly& a, const ExactPoly& b);
    friend ExactPoly operator-(const ExactPoly& a, const ExactPoly& b);
    friend ExactPoly operator*(const ExactPoly& a, const ExactPoly& b);
    friend ExactPoly operator-(const ExactPoly& a);
    ExactPoly& operator+=(const ExactPoly& b) { return *this = *this + b; }
    ExactPoly& operator-=(const ExactPoly& b) { return *this = *this - b; }
    ExactPoly& operator*=(const ExactPoly& b) { return *this = *this * b; }

    bool operator==(const ExactPoly& other) const = default;

    ExactPoly pow(unsigned e) const;
    /// this / (1 - beta)^times
    ExactPoly over_one_minus_beta(int times = 1) const;
    /// this * ninv^d; d may be negative.
    ExactPoly times_ninv_power(int d) const;
    /// this / beta^d; throws DomainError when some monomial has fewer than d factors of beta.
    ExactPoly divided_by_beta_power(int d) const;

    /// Coefficient of main^s (main exponent removed), keeping the shared denominator.
    ExactPoly coefficient_of_main(int s) const;
    /// Coefficient of ninv^d (ninv exponent removed), keeping the shared denominator.
    ExactPoly coefficient_of_ninv(int d) const;
    int degree_in_main() const;
    int min_ninv_exponent() const;
    int max_ninv_exponent() const;

    ExactPoly derivative_main() const;
    ExactPoly derivative_beta() const;

    /// Floating-point value; throws DomainError at beta = 1 with a nonzero denominator power.
    double eval(double main, double beta, double n) const;
    /// Exact value at a rational point.
    Rational eval_exact(const Rational& main, const Rational& beta, const Rational& n) const;

    /// Canonical text: sorted monomials (descending in main, beta, ninv), explicit rationals,
    /// and a trailing "/ (1-beta)^m" when m > 0.
    std::string to_string(std::string_view main_name = "x") const;

private:
    ExactPoly(Terms terms, int denom_pow);
    void canonicalize();

    Terms terms_;
    int denom_pow_ = 0;
};

/// p(x) + c(x) e^{-n x}. Evaluation binds main to x.
///
/// The exponential coefficient may depend on x: central moments carry F_{n,r}(x)(1 - e^{-nx}).
struct ExpPoly {
    ExactPoly poly;
    ExactPoly exp_coeff;

    bool operator==(const ExpPoly&) const = default;

    friend ExpPoly operator+(const ExpPoly& a, const ExpPoly& b);
    friend ExpPoly operator-(const ExpPoly& a, const ExpPoly& b);
    friend ExpPoly operator*(const ExactPoly& s, const ExpPoly& e);
    friend ExpPoly operator-(const ExpPoly& a) { return {-a.poly, -a.exp_coeff}; }

    /// d/dx, using d/dx e^{-nx} = -n e^{-nx}.
    ExpPoly derivative_x() const;
    /// (D + n) applied to this.
    ExpPoly d_plus_n() const;
    bool is_zero() const { return poly.is_zero() && exp_coeff.is_zero(); }

    double eval(double x, double beta, double n) const;
    std::string to_string() const;
};

} // namespace jpk
