#include "hardsum/verify.hpp"

#include "hardsum/oracle.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <random>
#include <sstream>

namespace hardsum {
namespace {

constexpr double kEigTol = 1e-8;
constexpr double kFdRelTol = 1e-6;
constexpr double kQuadTol = 1e-9;

using ScalarFun = std::function<double(const Vector&)>;

Vector fd_gradient(const ScalarFun& f, const Vector& x) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-5 * std::max(1.0, std::abs(x[i]));
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

bool grad_matches_fd(const ScalarFun& f, const Vector& grad, const Vector& x,
                     std::string& witness) {
  const Vector fd = fd_gradient(f, x);
  const double err = (fd - grad).norm();
  const double scale = std::max(1.0, grad.norm());
  if (err > kFdRelTol * scale) {
    std::ostringstream os;
    os << "finite-difference gradient mismatch: |fd - grad| = " << err
       << " at |grad| = " << grad.norm();
    witness = os.str();
    return false;
  }
  return true;
}

// Adaptive Simpson quadrature, used to cross-check the closed-form
// antiderivative of the nonconvex perturbation.
double simpson(const std::function<double(double)>& f, double a, double b,
               double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth, int force) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  // a few forced levels guard against estimates that agree by coincidence
  if (depth <= 0 ||
      (force <= 0 && std::abs(left + right - whole) <= 15.0 * tol))
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1,
                          force - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1,
                          force - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = simpson(f, a, b, fa, fm, fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40, 4);
}

struct EigRange {
  double lo = 0.0, hi = 0.0;
};

EigRange hessian_range(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

std::string param_tag(double alpha, int m) {
  std::ostringstream os;
  os << "alpha=" << alpha << " m=" << m;
  return os.str();
}

std::string param_tag(double alpha, int m, int n) {
  std::ostringstream os;
  os << param_tag(alpha, m) << " n=" << n;
  return os.str();
}

// ---- individual property cases ------------------------------------------

PropertyResult case_p35_1(const SuiteGrid& grid) {
  PropertyResult r{"P3.5-1", true, "", kEigTol, 0.0};
  const double xis[] = {0.0, 0.1, 0.5, 1.0};
  const double zetas[] = {0.0, 0.5, 1.0};
  for (double xi : xis)
    for (double zeta : zetas)
      for (int m : grid.ms) {
        const EigRange e = hessian_range(q_hessian({xi, m, zeta}));
        if (e.lo < -kEigTol || e.hi > 4.0 + kEigTol) {
          std::ostringstream os;
          os << "Q Hessian eigenvalues [" << e.lo << ", " << e.hi
             << "] outside [0, 4] at xi=" << xi << " zeta=" << zeta
             << " m=" << m;
          r.passed = false;
          r.witness = os.str();
          return r;
        }
      }
  r.witness = "chain quadratic Hessian spectrum within [0, 4] on the grid";
  return r;
}

PropertyResult case_p35_2(const SuiteGrid& grid) {
  PropertyResult r{"P3.5-2", true, "", 0.0, 0.0};
  std::mt19937_64 rng(grid.seed ^ 0x352);
  std::normal_distribution<double> gauss;
  const double xis[] = {0.1, 1.0};
  for (double xi : xis)
    for (int m : grid.ms) {
      ChainQuadParams p{xi, m, 0.5};
      const int t_max = std::min(m - 1, 8);
      for (int t = 0; t <= t_max; ++t)
        for (int trial = 0; trial < 25; ++trial) {
          Vector x = Vector::Zero(m);
          for (int j = 0; j < t; ++j) x[j] = gauss(rng);
          const Vector g = q_eval(x, p).grad;
          for (int j = t + 1; j < m; ++j)
            if (g[j] != 0.0) {
              std::ostringstream os;
              os << "Q gradient leaks past coordinate " << t + 1
                 << ": g[" << j + 1 << "] = " << g[j] << " at xi=" << xi
                 << " m=" << m << " span " << t;
              r.passed = false;
              r.witness = os.str();
              return r;
            }
        }
    }
  r.witness = "Q gradients at span-t points have exactly zero tails";
  return r;
}

PropertyResult case_p36_1(const SuiteGrid& grid) {
  PropertyResult r{"P3.6-1", true, "", kEigTol, 0.0};
  std::mt19937_64 rng(grid.seed ^ 0x361);
  std::normal_distribution<double> gauss;
  for (double alpha : grid.alphas)
    for (int m : grid.ms) {
      NesterovScParams p{alpha, m};
      const EigRange e = hessian_range(nsc_hessian(p));
      if (e.lo < alpha - kEigTol || e.hi > 1.0 + kEigTol) {
        std::ostringstream os;
        os << "spectrum [" << e.lo << ", " << e.hi << "] outside [alpha, 1] at "
           << param_tag(alpha, m);
        r.passed = false;
        r.witness = os.str();
        return r;
      }
      Vector x(m);
      for (int j = 0; j < m; ++j) x[j] = gauss(rng);
      const ScalarFun f = [&](const Vector& y) { return nsc_eval(y, p).value; };
      std::string w;
      if (!grad_matches_fd(f, nsc_eval(x, p).grad, x, w)) {
        r.passed = false;
        r.witness = w + " at " + param_tag(alpha, m);
        return r;
      }
    }
  r.witness = "strongly convex chain spectrum within [alpha, 1], gradients "
              "match finite differences";
  return r;
}

PropertyResult case_p36_2(const SuiteGrid& grid) {
  PropertyResult r{"P3.6-2", true, "", 1e-12, 0.0};
  for (double alpha : grid.alphas)
    for (int m : grid.ms) {
      NesterovScParams p{alpha, m};
      const NscConstants c = nsc_constants(p);
      const double q = p.q();
      const double bound = q * q * (1.0 - q * q);
      if (c.gap_at_zero > bound + 1e-12) {
        std::ostringstream os;
        os << "gap at origin " << c.gap_at_zero << " exceeds q^2 (1 - q^2) = "
           << bound << " at " << param_tag(alpha, m);
        r.passed = false;
        r.witness = os.str();
        return r;
      }
    }
  r.witness = "origin suboptimality bounded by q^2 (1 - q^2), exact optimum "
              "from the tridiagonal solve";
  return r;
}

PropertyResult case_p36_3(const SuiteGrid& grid) {
  PropertyResult r{"P3.6-3", true, "", 1e-12, 0.0};
  std::mt19937_64 rng(grid.seed ^ 0x363);
  std::normal_distribution<double> gauss;
  for (double alpha : grid.alphas)
    for (int m : grid.ms) {
      NesterovScParams p{alpha, m};
      const double fmin = nsc_min_value(p);
      const double q = p.q();
      const double floor = 0.5 * alpha * std::pow(q, 2 * m + 2);
      // origin, truncated minimizer, and random points in the slice x_m = 0
      std::vector<Vector> pts;
      pts.push_back(Vector::Zero(m));
      Vector trunc = nsc_minimizer(p);
      trunc[m - 1] = 0.0;
      pts.push_back(trunc);
      for (int trial = 0; trial < 100; ++trial) {
        Vector x(m);
        for (int j = 0; j < m; ++j) x[j] = gauss(rng);
        x[m - 1] = 0.0;
        pts.push_back(x);
      }
      for (const Vector& x : pts) {
        const double gap = nsc_eval(x, p).value - fmin;
        if (gap < floor - 1e-12) {
          std::ostringstream os;
          os << "gap " << gap << " below floor alpha/2 q^{2m+2} = " << floor
             << " at " << param_tag(alpha, m);
          r.passed = false;
          r.witness = os.str();
          return r;
        }
      }
    }
  r.witness = "tail-zero gap floor alpha/2 q^{2m+2} holds on the slice x_m = 0";
  return r;
}

PropertyResult case_p38_1(const SuiteGrid& grid) {
  PropertyResult r{"P3.8-1", true, "", kEigTol, 0.0};
  std::mt19937_64 rng(grid.seed ^ 0x381);
  std::normal_distribution<double> gauss;
  for (int m : grid.ms) {
    NesterovCParams p{m};
    const EigRange e = hessian_range(nc_hessian(p));
    if (e.lo < -kEigTol || e.hi > 1.0 + kEigTol) {
      std::ostringstream os;
      os << "spectrum [" << e.lo << ", " << e.hi << "] outside [0, 1] at m="
         << m;
      r.passed = false;
      r.witness = os.str();
      return r;
    }
    Vector x(p.dim());
    for (int j = 0; j < p.dim(); ++j) x[j] = gauss(rng);
    const ScalarFun f = [&](const Vector& y) { return nc_eval(y, p).value; };
    std::string w;
    if (!grad_matches_fd(f, nc_eval(x, p).grad, x, w)) {
      r.passed = false;
      r.witness = w + " at m=" + std::to_string(m);
      return r;
    }
  }
  r.witness = "convex chain spectrum within [0, 1], gradients match finite "
              "differences";
  return r;
}

PropertyResult case_p38_2(const SuiteGrid& grid) {
  PropertyResult r{"P3.8-2", true, "", 1e-12, 0.0};
  for (int m : grid.ms) {
    NesterovCParams p{m};
    const double d2 = nc_minimizer(p).squaredNorm();
    if (d2 > 2.0 * m / 3.0 + 1e-12) {
      std::ostringstream os;
      os << "dist^2(0, X*) = " << d2 << " exceeds 2m/3 = " << 2.0 * m / 3.0
         << " at m=" << m;
      r.passed = false;
      r.witness = os.str();
      return r;
    }
  }
  r.witness = "squared distance from origin to the optimum bounded by 2m/3";
  return r;
}

PropertyResult case_p38_3(const SuiteGrid& grid) {
  PropertyResult r{"P3.8-3", true, "", 1e-12, 0.0};
  std::mt19937_64 rng(grid.seed ^ 0x383);
  std::normal_distribution<double> gauss;
  for (int m : grid.ms) {
    NesterovCParams p{m};
    const double fmin = nc_min_value(p);
    const double floor = 1.0 / (16.0 * m);
    std::vector<Vector> pts;
    pts.push_back(Vector::Zero(p.dim()));
    for (int trial = 0; trial < 100; ++trial) {
      Vector x = Vector::Zero(p.dim());
      for (int j = 0; j < m - 1; ++j) x[j] = gauss(rng);
      pts.push_back(x);
    }
    for (const Vector& x : pts) {
      const double gap = nc_eval(x, p).value - fmin;
      if (gap < floor - 1e-12) {
        std::ostringstream os;
        os << "gap " << gap << " below 1/(16m) = " << floor << " at m=" << m;
        r.passed = false;
        r.witness = os.str();
        return r;
      }
    }
  }
  r.witness = "gap floor 1/(16m) holds when coordinates m..2m-1 vanish";
  return r;
}

PropertyResult case_p310_1(const SuiteGrid& grid) {
  PropertyResult r{"P3.10-1", true, "", kEigTol, 0.0};
  // quadrature cross-check of the closed-form antiderivative
  const auto integrand = [](double t) {
    return 120.0 * t * t * (t - 1.0) / (1.0 + t * t);
  };
  for (double s : {-3.0, -1.0, 0.0, 0.5, 1.5, 4.0}) {
    const double quad = integrate(integrand, 1.0, s, 1e-13);
    if (std::abs(quad - gamma_fun(s)) >
        kQuadTol * std::max(1.0, std::abs(quad))) {
      std::ostringstream os;
      os << "antiderivative/quadrature mismatch at s=" << s << ": "
         << gamma_fun(s) << " vs " << quad;
      r.passed = false;
      r.witness = os.str();
      return r;
    }
  }
  // second-derivative range on a dense grid plus the stationary points of
  // gamma'' (roots of t^3 - 3 t^2 - 3 t + 1)
  std::vector<double> ts = {-1.0, 2.0 - std::sqrt(3.0), 2.0 + std::sqrt(3.0)};
  for (int k = 0; k <= 20000; ++k) ts.push_back(-10.0 + k * 1e-3);
  for (double t : ts)
    if (std::abs(gamma_second(t)) > kCGamma) {
      std::ostringstream os;
      os << "|gamma''(" << t << ")| = " << std::abs(gamma_second(t))
         << " exceeds " << kCGamma;
      r.passed = false;
      r.witness = os.str();
      return r;
    }
  std::mt19937_64 rng(grid.seed ^ 0x3101);
  std::normal_distribution<double> gauss;
  for (double alpha : grid.alphas)
    for (int m : grid.ms) {
      CarmonParams p{alpha, m};
      Vector x(p.dim());
      for (int j = 0; j < p.dim(); ++j) x[j] = gauss(rng);
      const EigRange e = hessian_range(fc_hessian(x, p));
      if (e.lo < -alpha * kCGamma - kEigTol ||
          e.hi > 4.0 + alpha * kCGamma + kEigTol) {
        std::ostringstream os;
        os << "spectrum [" << e.lo << ", " << e.hi
           << "] outside [-alpha c, 4 + alpha c] at " << param_tag(alpha, m);
        r.passed = false;
        r.witness = os.str();
        return r;
      }
      const ScalarFun f = [&](const Vector& y) { return fc_eval(y, p).value; };
      std::string w;
      if (!grad_matches_fd(f, fc_eval(x, p).grad, x, w)) {
        r.passed = false;
        r.witness = w + " at " + param_tag(alpha, m);
        return r;
      }
    }
  r.witness = "perturbation curvature within [-360, 360], nonconvex chain "
              "spectrum within the stated interval, quadrature agrees";
  return r;
}

PropertyResult case_p310_2(const SuiteGrid& grid) {
  PropertyResult r{"P3.10-2", true, "", 1e-12, 0.0};
  std::mt19937_64 rng(grid.seed ^ 0x3102);
  std::normal_distribution<double> gauss;
  // gamma >= 0 everywhere (minimum at s = 1 with value 0), so f_C >= 0 and
  // the value at the origin bounds the optimality gap from above.
  for (int k = 0; k <= 4000; ++k) {
    const double s = -10.0 + k * 5e-3;
    if (gamma_fun(s) < -1e-12) {
      std::ostringstream os;
      os << "gamma(" << s << ") = " << gamma_fun(s) << " is negative";
      r.passed = false;
      r.witness = os.str();
      return r;
    }
  }
  for (double alpha : grid.alphas)
    for (int m : grid.ms) {
      CarmonParams p{alpha, m};
      const double at_zero = fc_eval(Vector::Zero(p.dim()), p).value;
      const double bound = 0.5 * std::sqrt(alpha) + 10.0 * alpha * m;
      if (at_zero > bound + 1e-12) {
        std::ostringstream os;
        os << "value at origin " << at_zero
           << " exceeds sqrt(alpha)/2 + 10 alpha m = " << bound << " at "
           << param_tag(alpha, m);
        r.passed = false;
        r.witness = os.str();
        return r;
      }
      for (int trial = 0; trial < 50; ++trial) {
        Vector x(p.dim());
        for (int j = 0; j < p.dim(); ++j) x[j] = 1.0 + 0.5 * gauss(rng);
        if (fc_eval(x, p).value < -1e-12) {
          r.passed = false;
          r.witness = "negative value found; the nonnegativity argument for "
                      "the gap bound fails at " + param_tag(alpha, m);
          return r;
        }
      }
    }
  r.witness = "origin gap bounded by sqrt(alpha)/2 + 10 alpha m via f >= 0";
  return r;
}

PropertyResult case_p310_3(const SuiteGrid& grid) {
  PropertyResult r{"P3.10-3", true, "", 1e-12, 0.0};
  std::mt19937_64 rng(grid.seed ^ 0x3103);
  std::normal_distribution<double> gauss;
  for (double alpha : grid.alphas)
    for (int m : grid.ms) {
      if (m < 2) continue;
      CarmonParams p{alpha, m};
      const double floor = std::pow(alpha, 0.75) / 4.0;
      for (int trial = 0; trial < 100; ++trial) {
        Vector x(p.dim());
        for (int j = 0; j < p.dim(); ++j) x[j] = gauss(rng);
        x[m - 1] = 0.0;
        x[m] = 0.0;
        if (trial == 0) x.setZero();
        const double gn = fc_eval(x, p).grad.norm();
        if (gn < floor - 1e-12) {
          std::ostringstream os;
          os << "gradient norm " << gn << " below alpha^{3/4}/4 = " << floor
             << " at " << param_tag(alpha, m);
          r.passed = false;
          r.witness = os.str();
          return r;
        }
      }
    }
  r.witness = "gradient norm floor alpha^{3/4}/4 holds when the last two "
              "coordinates vanish";
  return r;
}

ChainFunctionSpec base_spec(ChainFunctionSpec::Base base, double alpha, int m) {
  ChainFunctionSpec s;
  s.base = base;
  s.alpha = alpha;
  s.m = m;
  return s;
}

PropertyResult case_la1(const SuiteGrid& grid) {
  PropertyResult r{"L-A.1", true, "", kEigTol, 0.0};
  std::mt19937_64 rng(grid.seed ^ 0xA1);
  std::normal_distribution<double> gauss;
  const ChainFunctionSpec::Base bases[] = {ChainFunctionSpec::Base::NesterovSc,
                                           ChainFunctionSpec::Base::NesterovC,
                                           ChainFunctionSpec::Base::Carmon};
  for (auto base : bases)
    for (double alpha : grid.alphas) {
      if (base == ChainFunctionSpec::Base::NesterovC && alpha != grid.alphas[0])
        continue; // base ignores alpha
      for (int m : grid.ms)
        for (int n : grid.ns) {
          const ChainFunctionSpec spec = base_spec(base, alpha, m);
          const FiniteSumInstance inst =
              embed_sum(spec, make_block_family(spec.dim(), n));
          const double zeta = spec.class_hi();
          const double xi = spec.class_lo();
          // mean-square smoothness sampling (the finite-sum smoothness class)
          for (int pair = 0; pair < 20; ++pair) {
            Vector x(inst.dim()), y(inst.dim());
            for (int j = 0; j < inst.dim(); ++j) {
              x[j] = gauss(rng);
              y[j] = gauss(rng);
            }
            double ms = 0.0;
            for (int i = 0; i < n; ++i)
              ms += (inst.component(i, x).grad - inst.component(i, y).grad)
                        .squaredNorm();
            ms /= n;
            const double rhs = zeta * zeta * (x - y).squaredNorm();
            if (ms > rhs * (1.0 + 1e-9)) {
              std::ostringstream os;
              os << "mean-square smoothness " << ms << " exceeds zeta^2 d^2 = "
                 << rhs << " at " << param_tag(alpha, m, n);
              r.passed = false;
              r.witness = os.str();
              return r;
            }
          }
          // composite curvature: the averaged Hessian is block diagonal with
          // base Hessian / sqrt(n) blocks
          Vector yy(spec.dim());
          for (int j = 0; j < spec.dim(); ++j) yy[j] = gauss(rng);
          Matrix h;
          switch (base) {
            case ChainFunctionSpec::Base::NesterovSc:
              h = nsc_hessian({alpha, m});
              break;
            case ChainFunctionSpec::Base::NesterovC:
              h = nc_hessian({m});
              break;
            case ChainFunctionSpec::Base::Carmon:
              h = fc_hessian(yy, {alpha, m});
              break;
          }
          const EigRange e = hessian_range(h);
          const double lo = e.lo / std::sqrt(double(n));
          if (lo < xi / std::sqrt(double(n)) - kEigTol ||
              e.hi / std::sqrt(double(n)) > zeta + kEigTol) {
            std::ostringstream os;
            os << "composite curvature " << lo << " below xi/sqrt(n) = "
               << xi / std::sqrt(double(n)) << " at " << param_tag(alpha, m, n);
            r.passed = false;
            r.witness = os.str();
            return r;
          }
        }
    }
  r.witness = "embedded sums pass the mean-square smoothness sampling check "
              "and the xi/sqrt(n) composite curvature check";
  return r;
}

PropertyResult case_la2(const SuiteGrid& grid) {
  PropertyResult r{"L-A.2", true, "", 1e-9, 0.0};
  std::mt19937_64 rng(grid.seed ^ 0xA2);
  std::normal_distribution<double> gauss;
  const std::pair<double, double> scales[] = {{2.0, 0.5}, {0.5, 3.0}, {7.0, 7.0}};
  for (double alpha : grid.alphas)
    for (int m : {2, 5, 20})
      for (int n : grid.ns) {
        const ChainFunctionSpec spec =
            base_spec(ChainFunctionSpec::Base::NesterovSc, alpha, m);
        const FiniteSumInstance plain =
            embed_sum(spec, make_block_family(spec.dim(), n));
        for (auto [lambda, beta] : scales) {
          const FiniteSumInstance scaled = rescale(plain, {lambda, beta});
          Vector x(plain.dim());
          for (int j = 0; j < plain.dim(); ++j) x[j] = gauss(rng);
          for (int i = 0; i < n; ++i) {
            const Eval a = scaled.component(i, x);
            const Eval b = plain.component(i, x / beta);
            const double verr = std::abs(a.value - lambda * b.value);
            const double gerr = (a.grad - (lambda / beta) * b.grad).norm();
            if (verr > 1e-9 * std::max(1.0, std::abs(a.value)) ||
                gerr > 1e-9 * std::max(1.0, a.grad.norm())) {
              std::ostringstream os;
              os << "scaled component differs from lambda g(x/beta) at "
                 << param_tag(alpha, m, n) << " lambda=" << lambda
                 << " beta=" << beta;
              r.passed = false;
              r.witness = os.str();
              return r;
            }
          }
          const double curv = lambda / (beta * beta);
          if (std::abs(scaled.meta.avg_smooth_L - curv * plain.meta.avg_smooth_L) >
                  1e-12 * curv ||
              std::abs(scaled.meta.delta_bound - lambda * plain.meta.delta_bound) >
                  1e-12 * lambda ||
              (plain.meta.dist_bound &&
               std::abs(*scaled.meta.dist_bound - beta * *plain.meta.dist_bound) >
                   1e-12 * beta)) {
            r.passed = false;
            r.witness = "metadata does not follow the scaling rules at " +
                        param_tag(alpha, m, n);
            return r;
          }
        }
      }
  r.witness = "value, gradient, smoothness, gap and distance all transform "
              "by the (lambda, beta) rules";
  return r;
}

// Shared body of the two inner-product instance cases.
PropertyResult omega_case(const SuiteGrid& grid, OmegaVariant variant,
                          const std::string& id) {
  PropertyResult r{id, true, "", 1e-9, 0.0};
  std::mt19937_64 rng(grid.seed ^ (variant == OmegaVariant::SC ? 0xA3 : 0xA4));
  std::normal_distribution<double> gauss;
  const double L = 2.0;
  for (int n : grid.ns) {
    const FiniteSumInstance inst =
        variant == OmegaVariant::SC
            ? make_omega_n_instance(n, L, 1.0, variant, 0.1)
            : make_omega_n_instance(n, L, 1.0, variant, 0.1);
    const double lambda = inst.scale.lambda;
    // pairwise smoothness: every component Hessian is (lambda/beta^2) I = L I
    for (int pair = 0; pair < 20; ++pair) {
      Vector x(n), y(n);
      for (int j = 0; j < n; ++j) {
        x[j] = gauss(rng);
        y[j] = gauss(rng);
      }
      double ms = 0.0;
      for (int i = 0; i < n; ++i)
        ms += (inst.component(i, x).grad - inst.component(i, y).grad)
                  .squaredNorm();
      ms /= n;
      const double rhs = L * L * (x - y).squaredNorm();
      if (ms > rhs * (1.0 + 1e-9)) {
        r.passed = false;
        r.witness = "mean-square smoothness exceeds L^2 d^2 at n=" +
                    std::to_string(n);
        return r;
      }
    }
    // support floor: restricted to s coordinates the best gap is
    // lambda (n - s) / (2 n), checked against the exact restricted optimum
    const double inf_val = *inst.meta.inf_value;
    for (int s = 0; s < n; ++s) {
      Vector best = Vector::Zero(n);
      for (int j = 0; j < s; ++j) best[j] = inst.scale.beta / std::sqrt(double(n));
      const double gap = inst.full_value(best) - inf_val;
      const double floor = lambda * (n - s) / (2.0 * n);
      if (gap < floor - 1e-9 * std::max(1.0, std::abs(lambda))) {
        std::ostringstream os;
        os << "support-" << s << " optimum gap " << gap << " below "
           << floor << " at n=" << n;
        r.passed = false;
        r.witness = os.str();
        return r;
      }
      for (int trial = 0; trial < 20; ++trial) {
        Vector x = Vector::Zero(n);
        for (int j = 0; j < s; ++j) x[j] = gauss(rng);
        if (inst.full_value(x) - inf_val < floor - 1e-9) {
          r.passed = false;
          r.witness = "random support-restricted point beats the certified "
                      "floor at n=" + std::to_string(n);
          return r;
        }
      }
    }
  }
  r.witness = "inner-product components are L-smooth in mean square and the "
              "support-restricted gap floor (n-s)/(2n) holds";
  return r;
}

PropertyResult case_la3(const SuiteGrid& grid) {
  return omega_case(grid, OmegaVariant::SC, "L-A.3");
}

PropertyResult case_la4(const SuiteGrid& grid) {
  return omega_case(grid, OmegaVariant::CVX, "L-A.4");
}

} // namespace

std::vector<std::string> expected_case_ids() {
  return {"P3.5-1", "P3.5-2", "P3.6-1", "P3.6-2", "P3.6-3",
          "P3.8-1", "P3.8-2", "P3.8-3", "P3.10-1", "P3.10-2",
          "P3.10-3", "L-A.1", "L-A.2", "L-A.3", "L-A.4"};
}

bool SuiteReport::all_passed() const {
  for (const auto& r : results)
    if (!r.passed) return false;
  return !results.empty();
}

std::string SuiteReport::text() const {
  std::ostringstream os;
  for (const auto& r : results)
    os << (r.passed ? "PASS" : "FAIL") << "  " << r.id << "  ("
       << r.elapsed_sec << " s)  " << r.witness << "\n";
  os << (all_passed() ? "suite: all cases passed" : "suite: FAILURES present")
     << "\n";
  return os.str();
}

std::string SuiteReport::json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : results)
    j.push_back({{"id", r.id},
                 {"status", r.passed ? "pass" : "fail"},
                 {"witness", r.witness},
                 {"tolerance", r.tolerance},
                 {"elapsed_sec", r.elapsed_sec}});
  return j.dump(2);
}

SuiteReport run_suite(const SuiteGrid& grid, int jobs) {
  using CaseFun = PropertyResult (*)(const SuiteGrid&);
  const CaseFun cases[] = {case_p35_1, case_p35_2, case_p36_1, case_p36_2,
                           case_p36_3, case_p38_1, case_p38_2, case_p38_3,
                           case_p310_1, case_p310_2, case_p310_3, case_la1,
                           case_la2, case_la3, case_la4};
  SuiteReport report;
  auto timed = [&grid](CaseFun fn) {
    const auto t0 = std::chrono::steady_clock::now();
    PropertyResult r = fn(grid);
    r.elapsed_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return r;
  };
  if (jobs == 1) {
    for (CaseFun fn : cases) report.results.push_back(timed(fn));
  } else {
    std::vector<std::future<PropertyResult>> futures;
    for (CaseFun fn : cases)
      futures.push_back(std::async(std::launch::async, timed, fn));
    for (auto& f : futures) report.results.push_back(f.get());
  }
  return report;
}

ZeroChainReport zero_chain_check(ChainFunctionSpec::Base base, double alpha,
                                 int m, int t_max, std::uint64_t seed,
                                 int trials_per_step) {
  if (m < t_max + 1)
    throw std::invalid_argument("zero_chain_check: need m >= t_max + 1");
  ZeroChainReport report;
  const ChainFunctionSpec spec = base_spec(base, alpha, m);
  const int dim = spec.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int t = 0; t <= t_max; ++t)
    for (int trial = 0; trial < trials_per_step; ++trial) {
      Vector x = Vector::Zero(dim);
      for (int j = 0; j < t; ++j) x[j] = gauss(rng);
      const Vector g = spec.eval(x).grad;
      ++report.trials;
      for (int j = t + 1; j < dim; ++j)
        if (g[j] != 0.0) {
          std::ostringstream os;
          os << "gradient leaks past coordinate " << t + 1 << ": g["
             << j + 1 << "] = " << g[j] << " at span " << t;
          report.witness = os.str();
          return report;
        }
    }
  report.passed = true;
  report.witness = "all gradient tails exactly zero";
  return report;
}

} // namespace hardsum
