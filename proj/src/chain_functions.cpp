#include "hardsum/chain_functions.hpp"

namespace hardsum {

namespace {

void check_dim(const Vector& x, int expected, const char* who) {
  if (x.size() != expected)
    throw std::invalid_argument(std::string(who) + ": point has dimension " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(expected));
}

} // namespace

Eval q_eval(const Vector& x, const ChainQuadParams& p) {
  p.validate();
  check_dim(x, p.m, "q_eval");
  const int m = p.m;
  Eval out;
  out.grad = Vector::Zero(m);
  double v = 0.5 * p.xi * (x[0] - 1.0) * (x[0] - 1.0);
  out.grad[0] = p.xi * (x[0] - 1.0);
  for (int t = 0; t + 1 < m; ++t) {
    const double d = x[t + 1] - x[t];
    v += 0.5 * d * d;
    out.grad[t] -= d;
    out.grad[t + 1] += d;
  }
  v += 0.5 * p.zeta * x[m - 1] * x[m - 1];
  out.grad[m - 1] += p.zeta * x[m - 1];
  out.value = v;
  return out;
}

Matrix q_hessian(const ChainQuadParams& p) {
  p.validate();
  const int m = p.m;
  Matrix h = Matrix::Zero(m, m);
  h(0, 0) += p.xi;
  for (int t = 0; t + 1 < m; ++t) {
    h(t, t) += 1.0;
    h(t + 1, t + 1) += 1.0;
    h(t, t + 1) -= 1.0;
    h(t + 1, t) -= 1.0;
  }
  h(m - 1, m - 1) += p.zeta;
  return h;
}

Eval nsc_eval(const Vector& x, const NesterovScParams& p) {
  p.validate();
  check_dim(x, p.m, "nsc_eval");
  const ChainQuadParams qp{1.0, p.m, p.zeta()};
  Eval out = q_eval(x, qp);
  const double c = (1.0 - p.alpha) / 4.0;
  out.value = c * out.value + 0.5 * p.alpha * x.squaredNorm();
  out.grad = c * out.grad + p.alpha * x;
  return out;
}

Matrix nsc_hessian(const NesterovScParams& p) {
  p.validate();
  const ChainQuadParams qp{1.0, p.m, p.zeta()};
  Matrix h = ((1.0 - p.alpha) / 4.0) * q_hessian(qp);
  h.diagonal().array() += p.alpha;
  return h;
}

Vector nsc_minimizer(const NesterovScParams& p) {
  p.validate();
  const int m = p.m;
  const double c = (1.0 - p.alpha) / 4.0;
  // Stationarity: (c H_Q + alpha I) x = c xi e_1 with xi = 1.
  Vector diag(m), off(std::max(m - 1, 0));
  if (m == 1) {
    diag[0] = c * (1.0 + p.zeta()) + p.alpha;
  } else {
    diag[0] = c * 2.0 + p.alpha;
    for (int t = 1; t + 1 < m; ++t) diag[t] = c * 2.0 + p.alpha;
    diag[m - 1] = c * (1.0 + p.zeta()) + p.alpha;
    for (int t = 0; t + 1 < m; ++t) off[t] = -c;
  }
  Vector rhs = Vector::Zero(m);
  rhs[0] = c;
  return solve_tridiagonal(diag, off, rhs);
}

double nsc_min_value(const NesterovScParams& p) {
  return nsc_eval(nsc_minimizer(p), p).value;
}

NscConstants nsc_constants(const NesterovScParams& p) {
  p.validate();
  NscConstants c;
  c.class_lo = p.alpha;
  c.class_hi = 1.0;
  const double q = p.q();
  c.gap_lower = 0.5 * p.alpha * std::pow(q, 2.0 * p.m + 2.0);
  const Vector zero = Vector::Zero(p.m);
  c.gap_at_zero = nsc_eval(zero, p).value - nsc_min_value(p);
  return c;
}

Eval nc_eval(const Vector& x, const NesterovCParams& p) {
  p.validate();
  check_dim(x, p.dim(), "nc_eval");
  const ChainQuadParams qp{1.0, p.dim(), 1.0};
  Eval out = q_eval(x, qp);
  out.value *= 0.25;
  out.grad *= 0.25;
  return out;
}

Matrix nc_hessian(const NesterovCParams& p) {
  p.validate();
  const ChainQuadParams qp{1.0, p.dim(), 1.0};
  return 0.25 * q_hessian(qp);
}

Vector nc_minimizer(const NesterovCParams& p) {
  p.validate();
  const int d = p.dim();
  Vector diag(d), off(std::max(d - 1, 0));
  if (d == 1) {
    diag[0] = 2.0;
  } else {
    diag[0] = 2.0;
    for (int t = 1; t + 1 < d; ++t) diag[t] = 2.0;
    diag[d - 1] = 2.0;
    for (int t = 0; t + 1 < d; ++t) off[t] = -1.0;
  }
  Vector rhs = Vector::Zero(d);
  rhs[0] = 1.0;
  return solve_tridiagonal(diag, off, rhs);
}

double nc_min_value(const NesterovCParams& p) {
  return nc_eval(nc_minimizer(p), p).value;
}

double gamma_prime(double s) { return 120.0 * s * s * (s - 1.0) / (1.0 + s * s); }

double gamma_second(double s) {
  const double u = 1.0 + s * s;
  return 120.0 * (s * s * s * s + 3.0 * s * s - 2.0 * s) / (u * u);
}

double gamma_fun(double s) {
  // Antiderivative of t^2 (t-1)/(1+t^2): t^2/2 - t - log(1+t^2)/2 + atan(t).
  auto anti = [](double t) {
    return 0.5 * t * t - t - 0.5 * std::log1p(t * t) + std::atan(t);
  };
  static const double at_one = anti(1.0);
  return 120.0 * (anti(s) - at_one);
}

Eval gamma_eval(const Vector& x, const CarmonParams& p) {
  p.validate();
  check_dim(x, p.dim(), "gamma_eval");
  Eval out;
  out.grad = Vector::Zero(p.dim());
  for (int i = 0; i < p.m; ++i) {
    out.value += gamma_fun(x[i]);
    out.grad[i] = gamma_prime(x[i]);
  }
  return out;
}

Eval fc_eval(const Vector& x, const CarmonParams& p) {
  p.validate();
  check_dim(x, p.dim(), "fc_eval");
  const ChainQuadParams qp{std::sqrt(p.alpha), p.dim(), 0.0};
  Eval out = q_eval(x, qp);
  const Eval g = gamma_eval(x, p);
  out.value += p.alpha * g.value;
  out.grad += p.alpha * g.grad;
  return out;
}

Matrix fc_hessian(const Vector& x, const CarmonParams& p) {
  p.validate();
  check_dim(x, p.dim(), "fc_hessian");
  const ChainQuadParams qp{std::sqrt(p.alpha), p.dim(), 0.0};
  Matrix h = q_hessian(qp);
  for (int i = 0; i < p.m; ++i) h(i, i) += p.alpha * gamma_second(x[i]);
  return h;
}

Vector solve_tridiagonal(const Vector& diag, const Vector& off, const Vector& rhs) {
  const int n = static_cast<int>(diag.size());
  if (off.size() != std::max<Eigen::Index>(n - 1, 0) || rhs.size() != n)
    throw std::invalid_argument("solve_tridiagonal: inconsistent sizes");
  Vector c(std::max(n - 1, 0)), d(n), x(n);
  double piv = diag[0];
  if (piv == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
  if (n > 1) c[0] = off[0] / piv;
  d[0] = rhs[0] / piv;
  for (int i = 1; i < n; ++i) {
    piv = diag[i] - off[i - 1] * c[i - 1];
    if (piv == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
    if (i + 1 < n) c[i] = off[i] / piv;
    d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / piv;
  }
  x[n - 1] = d[n - 1];
  for (int i = n - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

} // namespace hardsum
