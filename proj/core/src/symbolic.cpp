#include "jpk/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "jpk/errors.hpp"

namespace jpk {

namespace {

using Terms = ExactPoly::Terms;

void accumulate(Terms& into, const Exponents& e, const Rational& c)
{
    auto [it, inserted] = into.try_emplace(e, c);
    if (!inserted) it->second += c;
}

// numerator * (1 - beta)^times
Terms times_one_minus_beta(Terms terms, int times)
{
    for (int i = 0; i < times; ++i) {
        Terms next;
        for (const auto& [e, c] : terms) {
            accumulate(next, e, c);
            accumulate(next, {e.main, e.beta + 1, e.ninv}, -c);
        }
        terms = std::move(next);
    }
    return terms;
}

Rational ipow(const Rational& base, int e)
{
    Rational result = 1;
    Rational b = base;
    unsigned u = static_cast<unsigned>(e < 0 ? -e : e);
    while (u) {
        if (u & 1u) result *= b;
        b *= b;
        u >>= 1u;
    }
    if (e < 0) result = 1 / result;
    return result;
}

std::string rational_text(const Rational& q)
{
    return q.get_str();
}

} // namespace

ExactPoly::ExactPoly(const Rational& c)
{
    if (c != 0) {
        Rational r = c;
        r.canonicalize();
        terms_.emplace(Exponents{}, std::move(r));
    }
}

ExactPoly::ExactPoly(long c) : ExactPoly(Rational(c)) {}

ExactPoly::ExactPoly(Terms terms, int denom_pow) : terms_(std::move(terms)), denom_pow_(denom_pow)
{
    canonicalize();
}

ExactPoly ExactPoly::monomial(const Rational& c, Exponents e, int denom_pow)
{
    Terms t;
    t.emplace(e, c);
    return ExactPoly(std::move(t), denom_pow);
}

ExactPoly ExactPoly::beta_poly(std::initializer_list<long> ascending)
{
    Terms t;
    int power = 0;
    for (long c : ascending) {
        if (c != 0) t.emplace(Exponents{0, power, 0}, Rational(c));
        ++power;
    }
    return ExactPoly(std::move(t), 0);
}

void ExactPoly::canonicalize()
{
    // mpq_class(num, den) does not reduce; equality is structural, so every coefficient must be.
    for (auto& kv : terms_) kv.second.canonicalize();
    std::erase_if(terms_, [](const auto& kv) { return kv.second == 0; });
    if (terms_.empty()) {
        denom_pow_ = 0;
        return;
    }
    if (denom_pow_ < 0) {
        terms_ = times_one_minus_beta(std::move(terms_), -denom_pow_);
        denom_pow_ = 0;
        std::erase_if(terms_, [](const auto& kv) { return kv.second == 0; });
        return;
    }
    while (denom_pow_ > 0) {
        // Group by (main, ninv); the numerator is divisible by (1 - beta) iff every group
        // vanishes at beta = 1.
        std::map<std::pair<int, int>, std::map<int, Rational>> groups;
        for (const auto& [e, c] : terms_) groups[{e.main, e.ninv}][e.beta] = c;

        bool divisible = true;
        for (const auto& [key, by_beta] : groups) {
            Rational s = 0;
            for (const auto& [b, c] : by_beta) s += c;
            if (s != 0) {
                divisible = false;
                break;
            }
        }
        if (!divisible) return;

        // N(beta) = (1 - beta) q(beta) gives q_j = c_0 + ... + c_j.
        Terms quotient;
        for (const auto& [key, by_beta] : groups) {
            const int top = by_beta.rbegin()->first;
            Rational prefix = 0;
            for (int j = 0; j < top; ++j) {
                if (auto it = by_beta.find(j); it != by_beta.end()) prefix += it->second;
                if (prefix != 0) quotient.emplace(Exponents{key.first, j, key.second}, prefix);
            }
        }
        terms_ = std::move(quotient);
        --denom_pow_;
        if (terms_.empty()) {
            denom_pow_ = 0;
            return;
        }
    }
}

ExactPoly operator+(const ExactPoly& a, const ExactPoly& b)
{
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const int m = std::max(a.denom_pow_, b.denom_pow_);
    Terms sum = times_one_minus_beta(a.terms_, m - a.denom_pow_);
    for (const auto& [e, c] : times_one_minus_beta(b.terms_, m - b.denom_pow_)) accumulate(sum, e, c);
    return ExactPoly(std::move(sum), m);
}

ExactPoly operator-(const ExactPoly& a)
{
    Terms t = a.terms_;
    for (auto& [e, c] : t) c = -c;
    return ExactPoly(std::move(t), a.denom_pow_);
}

ExactPoly operator-(const ExactPoly& a, const ExactPoly& b)
{
    return a + (-b);
}

ExactPoly operator*(const ExactPoly& a, const ExactPoly& b)
{
    if (a.is_zero() || b.is_zero()) return {};
    Terms prod;
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_)
            accumulate(prod, {ea.main + eb.main, ea.beta + eb.beta, ea.ninv + eb.ninv}, ca * cb);
    return ExactPoly(std::move(prod), a.denom_pow_ + b.denom_pow_);
}

ExactPoly ExactPoly::pow(unsigned e) const
{
    ExactPoly result(1);
    for (unsigned i = 0; i < e; ++i) result = result * *this;
    return result;
}

ExactPoly ExactPoly::over_one_minus_beta(int times) const
{
    return ExactPoly(terms_, denom_pow_ + times);
}

ExactPoly ExactPoly::times_ninv_power(int d) const
{
    Terms t;
    for (const auto& [e, c] : terms_) t.emplace(Exponents{e.main, e.beta, e.ninv + d}, c);
    return ExactPoly(std::move(t), denom_pow_);
}

ExactPoly ExactPoly::divided_by_beta_power(int d) const
{
    Terms t;
    for (const auto& [e, c] : terms_) {
        if (e.beta < d) throw DomainError("ExactPoly::divided_by_beta_power: not divisible");
        t.emplace(Exponents{e.main, e.beta - d, e.ninv}, c);
    }
    return ExactPoly(std::move(t), denom_pow_);
}

ExactPoly ExactPoly::coefficient_of_main(int s) const
{
    Terms t;
    for (const auto& [e, c] : terms_)
        if (e.main == s) t.emplace(Exponents{0, e.beta, e.ninv}, c);
    return ExactPoly(std::move(t), denom_pow_);
}

ExactPoly ExactPoly::coefficient_of_ninv(int d) const
{
    Terms t;
    for (const auto& [e, c] : terms_)
        if (e.ninv == d) t.emplace(Exponents{e.main, e.beta, 0}, c);
    return ExactPoly(std::move(t), denom_pow_);
}

int ExactPoly::degree_in_main() const
{
    int d = is_zero() ? -1 : 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e.main);
    return d;
}

int ExactPoly::min_ninv_exponent() const
{
    int d = std::numeric_limits<int>::max();
    for (const auto& [e, c] : terms_) d = std::min(d, e.ninv);
    return is_zero() ? 0 : d;
}

int ExactPoly::max_ninv_exponent() const
{
    int d = std::numeric_limits<int>::min();
    for (const auto& [e, c] : terms_) d = std::max(d, e.ninv);
    return is_zero() ? 0 : d;
}

ExactPoly ExactPoly::derivative_main() const
{
    Terms t;
    for (const auto& [e, c] : terms_)
        if (e.main > 0) accumulate(t, {e.main - 1, e.beta, e.ninv}, c * e.main);
    return ExactPoly(std::move(t), denom_pow_);
}

ExactPoly ExactPoly::derivative_beta() const
{
    // d/dbeta [N / (1-beta)^m] = [N' (1-beta) + m N] / (1-beta)^{m+1}
    Terms dn;
    for (const auto& [e, c] : terms_)
        if (e.beta > 0) accumulate(dn, {e.main, e.beta - 1, e.ninv}, c * e.beta);
    Terms num = times_one_minus_beta(std::move(dn), 1);
    for (const auto& [e, c] : terms_) accumulate(num, e, c * denom_pow_);
    return ExactPoly(std::move(num), denom_pow_ + 1);
}

double ExactPoly::eval(double main, double beta, double n) const
{
    if (denom_pow_ > 0 && beta == 1.0) throw DomainError("ExactPoly::eval: pole at beta = 1");
    double acc = 0.0;
    for (const auto& [e, c] : terms_)
        acc += c.get_d() * std::pow(main, e.main) * std::pow(beta, e.beta) * std::pow(n, -e.ninv);
    return denom_pow_ == 0 ? acc : acc / std::pow(1.0 - beta, denom_pow_);
}

Rational ExactPoly::eval_exact(const Rational& main, const Rational& beta, const Rational& n) const
{
    if (denom_pow_ > 0 && beta == 1) throw DomainError("ExactPoly::eval_exact: pole at beta = 1");
    Rational acc = 0;
    for (const auto& [e, c] : terms_) acc += c * ipow(main, e.main) * ipow(beta, e.beta) * ipow(n, -e.ninv);
    if (denom_pow_ > 0) acc /= ipow(Rational(1) - beta, denom_pow_);
    acc.canonicalize();
    return acc;
}

std::string ExactPoly::to_string(std::string_view main_name) const
{
    if (is_zero()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        Rational mag = abs(c);
        if (first)
            out += (c < 0) ? "-" : "";
        else
            out += (c < 0) ? " - " : " + ";
        first = false;

        std::vector<std::string> factors;
        const auto factor = [&](std::string_view name, int p) {
            if (p == 0) return;
            std::string f(name);
            if (p != 1) f += "^" + std::to_string(p);
            factors.push_back(std::move(f));
        };
        factor(main_name, e.main);
        factor("beta", e.beta);
        factor("ninv", e.ninv);

        if (factors.empty() || mag != 1) factors.insert(factors.begin(), rational_text(mag));
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) out += "*";
            out += factors[i];
        }
    }
    if (denom_pow_ == 0) return out;
    return "(" + out + ")/(1-beta)^" + std::to_string(denom_pow_);
}

ExpPoly operator+(const ExpPoly& a, const ExpPoly& b)
{
    return {a.poly + b.poly, a.exp_coeff + b.exp_coeff};
}

ExpPoly operator-(const ExpPoly& a, const ExpPoly& b)
{
    return {a.poly - b.poly, a.exp_coeff - b.exp_coeff};
}

ExpPoly operator*(const ExactPoly& s, const ExpPoly& e)
{
    return {s * e.poly, s * e.exp_coeff};
}

ExpPoly ExpPoly::derivative_x() const
{
    return {poly.derivative_main(), exp_coeff.derivative_main() - exp_coeff.times_ninv_power(-1)};
}

ExpPoly ExpPoly::d_plus_n() const
{
    return {poly.derivative_main() + poly.times_ninv_power(-1), exp_coeff.derivative_main()};
}

double ExpPoly::eval(double x, double beta, double n) const
{
    double v = poly.eval(x, beta, n);
    if (!exp_coeff.is_zero()) v += exp_coeff.eval(x, beta, n) * std::exp(-n * x);
    return v;
}

std::string ExpPoly::to_string() const
{
    if (exp_coeff.is_zero()) return poly.to_string("x");
    return poly.to_string("x") + " + [" + exp_coeff.to_string("x") + "]*exp(-n*x)";
}

} // namespace jpk
