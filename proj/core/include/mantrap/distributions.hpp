#pragma once

namespace mantrap {

/// Regularized lower incomplete gamma P(a, x).
[[nodiscard]] double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed without cancellation.
[[nodiscard]] double gamma_q(double a, double x);
/// Regularized incomplete beta I_x(a, b).
[[nodiscard]] double beta_inc(double a, double b, double x);

/// Upper tail of the chi-square distribution, Q(df/2, x/2).
[[nodiscard]] double chi_square_sf(double x, double df);
/// Upper tail of the standard normal.
[[nodiscard]] double normal_sf(double z);
/// Two-sided tail P(|T| > |t|) of Student's t with `df` degrees of freedom.
[[nodiscard]] double student_t_two_sided(double t, double df);
/// Upper tail of Fisher's F(d1, d2).
[[nodiscard]] double f_sf(double f, double d1, double d2);

}  // namespace mantrap
