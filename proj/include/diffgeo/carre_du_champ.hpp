#pragma once

#include "diffgeo/diffusion_operator.hpp"

namespace diffgeo {

/// Pointwise estimate of g(grad f, grad h) from the operator's product rule,
///
///   Gamma(f, h) = 1/2 (f L h + h L f - L(f h)),
///
/// evaluated in the algebraically equal difference form
///   Gamma(f, h)_i = 1/2 s_i sum_j P_ij (f_j - f_i)(h_j - h_i),
/// which is exactly symmetric and exactly zero when either argument is constant.
/// No clamping: Gamma(f, f) is non-negative by construction here but callers should not
/// assume so for other operators.
Vector gamma(const LaplacianOperator& op, const Vector& f, const Vector& h);

/// H(f)(grad h1, grad h2) = 1/2 (Gamma(h1, Gamma(h2, f)) + Gamma(h2, Gamma(h1, f)) - Gamma(f, Gamma(h1, h2))).
Vector hessian_form(const LaplacianOperator& op, const Vector& f, const Vector& h1, const Vector& h2);

}  // namespace diffgeo
