#pragma once

#include <vector>

#include "jpk/symbolic.hpp"

namespace jpk {

// Symbol bindings: the P polynomials use main = k (the basis index in L_{n,k}); everything
// else uses main = x. n enters only through ninv, with negative ninv exponents for powers of n.

/// Coefficient a_s^r of the closed P_r table (r = 2..5, 1 <= s <= r-1).
ExactPoly coeff_a(int s, int r);
/// Coefficient b_j^r of the closed f_{n,r} table (0 <= j < r <= 5).
ExactPoly coeff_b(int j, int r);
/// Coefficient alpha_j^r of the f recurrence as tabulated (2 <= r <= 5, 1 <= j <= r-1).
ExactPoly coeff_alpha(int j, int r);
/// lambda_3^5 and lambda_4^5 of the closed fifth central moment.
ExactPoly coeff_lambda(int j);

/// n^p as an ExactPoly (ninv^{-p}).
ExactPoly n_power(int p);

/// Closed P_r(k-1; beta), r <= 5. RangeError beyond.
ExactPoly p_poly_closed(unsigned r);
/// P_r from P_0 = 1 and the closed P_1 by the three-term recurrence; any r. Cached.
ExactPoly p_poly_recur(unsigned r);
/// n^2 P_{r+2} - n[(1-beta)(k-1) + r + 2] P_{r+1} - beta (r+2)(k-1) P_r on recurrence-generated P's.
ExactPoly p_recurrence_residual(unsigned r);

/// B_n^beta(t^r, x), r <= 5.
ExactPoly b_moment_closed(unsigned r);

/// Closed T_{n,r}(x), r <= 3.
ExpPoly t_moment_closed(unsigned r);
/// T_{n,r} = sum_{k>=1} P_r(k-1) L_{n,k}(x) + delta_{r0} e^{-nx}, by expanding P_r in powers of k and
/// substituting the B moments. Limited to r <= 5 by the B table.
ExpPoly t_moment_general(unsigned r);
/// sum_{k>=1} P_r(k-1) L_{n,k}(x) without the f(0) e^{-nx} term; differs from T only at r = 0.
ExpPoly t_moment_series_form(unsigned r);

/// Closed f_{n,r}(x), r <= 5.
ExactPoly f_poly_closed(unsigned r);
/// f_{n,r} = T_{n,r} + [(beta/n)^r (r+1-beta)/(1-beta) - delta_{r0}] e^{-nx}. Throws DomainError
/// when the exponential part does not cancel.
ExactPoly f_poly_from_t(unsigned r);
/// f_{n,r} from f_{n,0..r-1} by the tabulated recurrence, 2 <= r <= 5.
ExactPoly f_poly_recur(unsigned r);
/// Same recurrence with caller-supplied alphas (alphas[j-1] = alpha_j^r).
ExactPoly f_poly_recur_with(unsigned r, const std::vector<ExactPoly>& alphas);
/// alpha_1^r .. alpha_{r-1}^r that make the recurrence exact for the f's built from T.
std::vector<ExactPoly> derive_f_recurrence_alphas(unsigned r);
/// b_0^r .. b_{r-1}^r read off f_poly_from_t(r).
std::vector<ExactPoly> derive_b_coefficients(unsigned r);

/// F_{n,r}(x) = sum_{s<r} (-1)^s C(r,s) (beta/n)^{r-s} (r+1-s-beta)/(1-beta) x^s.
ExactPoly central_f_poly(unsigned r);
/// Closed central moments, 1 <= r <= 5, as tabulated.
ExpPoly central_moment_closed(unsigned r);
/// mu_{n,r} = sum_j C(r,j) (-x)^{r-j} T_{n,j}, r <= 5.
ExpPoly central_moment_derived(unsigned r);

/// lim_{n->oo} n^d p for an ExactPoly whose ninv exponents are all >= d; the coefficient of ninv^d.
/// Throws DomainError when p has a lower power of ninv.
ExactPoly ninv_limit(const ExactPoly& p, int d = 1);

/// f'(x) and f''(x) coefficients of lim n[P_n^beta(f,x) - f(x)], as polynomials in x.
struct VoronovskajaCoefficients {
    ExactPoly first;
    ExactPoly second;
};

/// As stated with the asymptotic theorem: beta(2-beta)/(1-beta) and (1+2beta-beta^2)x/(1-beta).
VoronovskajaCoefficients voronovskaja_stated();
/// lim n mu_{n,1} and lim n mu_{n,2} / 2 from the derived central moments (x > 0).
VoronovskajaCoefficients voronovskaja_derived();

} // namespace jpk
