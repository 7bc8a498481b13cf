#pragma once

// The four adversarial base functions used to build hard finite-sum
// instances: the chain quadratic Q, Nesterov's strongly convex and convex
// chains, and the Carmon-style nonconvex chain with its separable
// nonconvex perturbation. All evaluators are pure and exact.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace hardsum {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kCGamma = 360.0;

struct ChainQuadParams {
  double xi = 1.0;   // boundary weight, in [0, 1]
  int m = 1;         // dimension
  double zeta = 1.0; // terminal weight, in [0, 1]

  void validate() const {
    if (m < 1) throw std::invalid_argument("ChainQuadParams: m must be >= 1");
    if (xi < 0.0 || xi > 1.0)
      throw std::invalid_argument("ChainQuadParams: xi must be in [0, 1]");
    if (zeta < 0.0 || zeta > 1.0)
      throw std::invalid_argument("ChainQuadParams: zeta must be in [0, 1]");
  }
};

struct NesterovScParams {
  double alpha = 0.25; // strong-convexity ratio, in (0, 1]
  int m = 1;

  void validate() const {
    if (m < 1) throw std::invalid_argument("NesterovScParams: m must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw std::invalid_argument("NesterovScParams: alpha must be in (0, 1]");
  }
  // contraction ratio; q = 0 exactly when alpha = 1
  double q() const {
    const double s = std::sqrt(alpha);
    return (1.0 - s) / (1.0 + s);
  }
  // terminal weight of the underlying chain quadratic
  double zeta() const {
    const double s = std::sqrt(alpha);
    return 2.0 * s / (s + 1.0);
  }
};

struct NesterovCParams {
  int m = 1; // ambient dimension is 2m - 1

  void validate() const {
    if (m < 1) throw std::invalid_argument("NesterovCParams: m must be >= 1");
  }
  int dim() const { return 2 * m - 1; }
};

struct CarmonParams {
  double alpha = 1.0; // in (0, 1]
  int m = 1;          // ambient dimension is m + 1

  void validate() const {
    if (m < 1) throw std::invalid_argument("CarmonParams: m must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw std::invalid_argument("CarmonParams: alpha must be in (0, 1]");
  }
  int dim() const { return m + 1; }
};

struct Eval {
  double value = 0.0;
  Vector grad;
};

// Chain quadratic Q(x; xi, m, zeta)
//   = xi/2 (x_1 - 1)^2 + 1/2 sum_{t<m} (x_{t+1} - x_t)^2 + zeta/2 x_m^2
Eval q_eval(const Vector& x, const ChainQuadParams& p);
Matrix q_hessian(const ChainQuadParams& p);

// f_Nsc(x; alpha, m) = (1-alpha)/4 Q(x; 1, m, 2 sqrt(a)/(sqrt(a)+1)) + a/2 |x|^2
Eval nsc_eval(const Vector& x, const NesterovScParams& p);
Matrix nsc_hessian(const NesterovScParams& p);
Vector nsc_minimizer(const NesterovScParams& p);
double nsc_min_value(const NesterovScParams& p);

struct NscConstants {
  double gap_at_zero = 0.0; // f(0) - min f, from the exact linear solve
  double gap_lower = 0.0;   // alpha/2 q^{2m+2}, the tail-zero gap floor
  double class_lo = 0.0;    // smoothness interval (alpha, 1)
  double class_hi = 1.0;
};
NscConstants nsc_constants(const NesterovScParams& p);

// f_Nc(x; m) = 1/4 Q(x; 1, 2m-1, 1) on R^{2m-1}
Eval nc_eval(const Vector& x, const NesterovCParams& p);
Matrix nc_hessian(const NesterovCParams& p);
Vector nc_minimizer(const NesterovCParams& p);
double nc_min_value(const NesterovCParams& p);

// One-dimensional pieces of the nonconvex perturbation
//   gamma(s) = 120 int_1^s t^2 (t-1) / (1 + t^2) dt
double gamma_fun(double s);
double gamma_prime(double s);  // 120 s^2 (s - 1) / (1 + s^2)
double gamma_second(double s); // 120 (s^4 + 3 s^2 - 2 s) / (1 + s^2)^2

// Gamma(x) = sum_{i<=m} gamma(x_i) on R^{m+1}; coordinate m+1 is untouched
Eval gamma_eval(const Vector& x, const CarmonParams& p);

// f_C(x; alpha, m) = Q(x; sqrt(alpha), m+1, 0) + alpha Gamma(x)
Eval fc_eval(const Vector& x, const CarmonParams& p);
Matrix fc_hessian(const Vector& x, const CarmonParams& p);

// Solves T z = rhs for a symmetric tridiagonal T (Thomas algorithm).
Vector solve_tridiagonal(const Vector& diag, const Vector& off, const Vector& rhs);

} // namespace hardsum
