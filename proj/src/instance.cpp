#include "hardsum/instance.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace hardsum {

using nlohmann::json;

const char* family_name(Family f) {
  switch (f) {
    case Family::SC: return "SC";
    case Family::CVX: return "CVX";
    case Family::AVG_NC: return "AVG-NC";
    case Family::IND_NC: return "IND-NC";
    case Family::OMEGA_N: return "OMEGA-N";
    case Family::OMEGA_N_CVX: return "OMEGA-N-CVX";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  for (Family f : {Family::SC, Family::CVX, Family::AVG_NC, Family::IND_NC,
                   Family::OMEGA_N, Family::OMEGA_N_CVX})
    if (name == family_name(f)) return f;
  throw std::invalid_argument("unknown family: " + name);
}

Matrix EmbeddingFamily::dense_matrix(int i) const {
  Matrix u = Matrix::Zero(block_dim, ambient_dim());
  for (int r = 0; r < block_dim; ++r) u(r, i * block_dim + r) = 1.0;
  return u;
}

EmbeddingFamily make_block_family(int block_dim, int n) {
  if (block_dim < 1 || n < 1)
    throw std::invalid_argument("make_block_family: sizes must be positive");
  return EmbeddingFamily{block_dim, n};
}

int chain_block_dim(Family f, int T) {
  switch (f) {
    case Family::SC: return T;
    case Family::CVX: return 2 * T - 1;
    case Family::AVG_NC:
    case Family::IND_NC: return T + 1;
    case Family::OMEGA_N:
    case Family::OMEGA_N_CVX: return 1;
  }
  return 1;
}

int ChainFunctionSpec::dim() const {
  switch (base) {
    case Base::NesterovSc: return m;
    case Base::NesterovC: return 2 * m - 1;
    case Base::Carmon: return m + 1;
  }
  return m;
}

double ChainFunctionSpec::class_lo() const {
  switch (base) {
    case Base::NesterovSc: return alpha;
    case Base::NesterovC: return 0.0;
    case Base::Carmon: return -alpha * kCGamma;
  }
  return 0.0;
}

double ChainFunctionSpec::class_hi() const {
  switch (base) {
    case Base::NesterovSc: return 1.0;
    case Base::NesterovC: return 1.0;
    case Base::Carmon: return 4.0 + alpha * kCGamma;
  }
  return 1.0;
}

Eval ChainFunctionSpec::eval(const Vector& y) const {
  switch (base) {
    case Base::NesterovSc: return nsc_eval(y, NesterovScParams{alpha, m});
    case Base::NesterovC: return nc_eval(y, NesterovCParams{m});
    case Base::Carmon: return fc_eval(y, CarmonParams{alpha, m});
  }
  throw std::logic_error("unreachable");
}

namespace {

void check_component(const FiniteSumInstance& inst, int i, const Vector& x) {
  if (i < 0 || i >= inst.n)
    throw std::invalid_argument("component index out of range");
  if (x.size() != inst.dim())
    throw std::invalid_argument("component query: point has dimension " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(inst.dim()));
}

int cold_threshold_chain(int n) { return n / 2 + 1; }    // strictly more than n/2
int cold_threshold_omega(int n) { return n - n / 2; }    // support at most n/2

} // namespace

Eval FiniteSumInstance::component_unscaled(int i, const Vector& z) const {
  const int d = dim();
  Eval out;
  const double rootn = std::sqrt(static_cast<double>(n));
  switch (family) {
    case Family::SC: {
      Eval e = nsc_eval(embedding.project(z, i), NesterovScParams{chain_alpha, chain_T});
      out.value = rootn * e.value;
      out.grad = Vector::Zero(d);
      out.grad.segment(static_cast<Eigen::Index>(i) * embedding.block_dim,
                       embedding.block_dim) = rootn * e.grad;
      return out;
    }
    case Family::CVX: {
      Eval e = nc_eval(embedding.project(z, i), NesterovCParams{chain_T});
      out.value = rootn * e.value;
      out.grad = Vector::Zero(d);
      out.grad.segment(static_cast<Eigen::Index>(i) * embedding.block_dim,
                       embedding.block_dim) = rootn * e.grad;
      return out;
    }
    case Family::AVG_NC: {
      Eval e = fc_eval(embedding.project(z, i), CarmonParams{chain_alpha, chain_T});
      out.value = rootn * e.value;
      out.grad = Vector::Zero(d);
      out.grad.segment(static_cast<Eigen::Index>(i) * embedding.block_dim,
                       embedding.block_dim) = rootn * e.grad;
      return out;
    }
    case Family::IND_NC: {
      const CarmonParams cp{chain_alpha, chain_T};
      const ChainQuadParams qp{std::sqrt(chain_alpha), chain_T + 1, 0.0};
      Eval q = q_eval(embedding.project(z, i), qp);
      out.value = q.value;
      out.grad = Vector::Zero(d);
      out.grad.segment(static_cast<Eigen::Index>(i) * embedding.block_dim,
                       embedding.block_dim) = q.grad;
      const double w = chain_alpha / n;
      for (int j = 0; j < n; ++j) {
        Eval g = gamma_eval(embedding.project(z, j), cp);
        out.value += w * g.value;
        out.grad.segment(static_cast<Eigen::Index>(j) * embedding.block_dim,
                         embedding.block_dim) += w * g.grad;
      }
      return out;
    }
    case Family::OMEGA_N:
    case Family::OMEGA_N_CVX: {
      out.value = -rootn * z[i] + 0.5 * z.squaredNorm();
      out.grad = z;
      out.grad[i] -= rootn;
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

Eval FiniteSumInstance::component(int i, const Vector& x) const {
  check_component(*this, i, x);
  Eval e = component_unscaled(i, x / scale.beta);
  e.value *= scale.lambda;
  e.grad *= scale.lambda / scale.beta;
  return e;
}

double FiniteSumInstance::full_value(const Vector& x) const {
  if (x.size() != dim())
    throw std::invalid_argument("full_value: dimension mismatch");
  const Vector z = x / scale.beta;
  const double rootn = std::sqrt(static_cast<double>(n));
  double v = 0.0;
  switch (family) {
    case Family::SC:
      for (int i = 0; i < n; ++i)
        v += nsc_eval(embedding.project(z, i), NesterovScParams{chain_alpha, chain_T}).value;
      return scale.lambda * v / rootn;
    case Family::CVX:
      for (int i = 0; i < n; ++i)
        v += nc_eval(embedding.project(z, i), NesterovCParams{chain_T}).value;
      return scale.lambda * v / rootn;
    case Family::AVG_NC:
      for (int i = 0; i < n; ++i)
        v += fc_eval(embedding.project(z, i), CarmonParams{chain_alpha, chain_T}).value;
      return scale.lambda * v / rootn;
    case Family::IND_NC:
      // identity: (1/n) sum_i fbar_i = (1/n) sum_i f_C(U^(i) x)
      for (int i = 0; i < n; ++i)
        v += fc_eval(embedding.project(z, i), CarmonParams{chain_alpha, chain_T}).value;
      return scale.lambda * v / n;
    case Family::OMEGA_N:
    case Family::OMEGA_N_CVX:
      return scale.lambda * (0.5 * z.squaredNorm() - z.sum() / rootn);
  }
  throw std::logic_error("unreachable");
}

Vector FiniteSumInstance::full_gradient(const Vector& x) const {
  if (x.size() != dim())
    throw std::invalid_argument("full_gradient: dimension mismatch");
  const Vector z = x / scale.beta;
  const double rootn = std::sqrt(static_cast<double>(n));
  const double s = scale.lambda / scale.beta;
  Vector g = Vector::Zero(dim());
  const int a = embedding.block_dim;
  switch (family) {
    case Family::SC:
      for (int i = 0; i < n; ++i)
        g.segment(static_cast<Eigen::Index>(i) * a, a) =
            (s / rootn) *
            nsc_eval(embedding.project(z, i), NesterovScParams{chain_alpha, chain_T}).grad;
      return g;
    case Family::CVX:
      for (int i = 0; i < n; ++i)
        g.segment(static_cast<Eigen::Index>(i) * a, a) =
            (s / rootn) * nc_eval(embedding.project(z, i), NesterovCParams{chain_T}).grad;
      return g;
    case Family::AVG_NC:
      for (int i = 0; i < n; ++i)
        g.segment(static_cast<Eigen::Index>(i) * a, a) =
            (s / rootn) *
            fc_eval(embedding.project(z, i), CarmonParams{chain_alpha, chain_T}).grad;
      return g;
    case Family::IND_NC:
      for (int i = 0; i < n; ++i)
        g.segment(static_cast<Eigen::Index>(i) * a, a) =
            (s / n) *
            fc_eval(embedding.project(z, i), CarmonParams{chain_alpha, chain_T}).grad;
      return g;
    case Family::OMEGA_N:
    case Family::OMEGA_N_CVX:
      g = s * (z.array() - 1.0 / rootn).matrix();
      return g;
  }
  throw std::logic_error("unreachable");
}

double FiniteSumInstance::residual(const Vector& x) const {
  if (meta.residual == ResidualKind::GradNorm) return full_gradient(x).norm();
  if (!meta.inf_value)
    throw std::logic_error("gap residual requested but no stored optimum");
  return full_value(x) - *meta.inf_value;
}

int FiniteSumInstance::block_activation(int i, const Vector& x, double tol) const {
  const int a = embedding.block_dim;
  const auto y = embedding.project(x, i);
  for (int j = a - 1; j >= 0; --j)
    if (std::abs(y[j]) > tol) return j + 1;
  return 0;
}

int FiniteSumInstance::certificate_block_threshold() const {
  switch (family) {
    case Family::OMEGA_N:
    case Family::OMEGA_N_CVX: return cold_threshold_omega(n);
    default: return cold_threshold_chain(n);
  }
}

double FiniteSumInstance::certified_floor(int cold_blocks) const {
  if (cold_blocks < certificate_block_threshold()) return 0.0;
  const double rootn = std::sqrt(static_cast<double>(n));
  const double lam = scale.lambda;
  const double grad_scale = scale.lambda / scale.beta;
  switch (family) {
    case Family::SC: {
      const double q = NesterovScParams{chain_alpha, chain_T}.q();
      const double per = 0.5 * chain_alpha * std::pow(q, 2.0 * chain_T + 2.0);
      return lam * cold_blocks * per / rootn;
    }
    case Family::CVX:
      return lam * cold_blocks / (16.0 * chain_T * rootn);
    case Family::AVG_NC:
      return grad_scale * std::sqrt(static_cast<double>(cold_blocks) / n) *
             std::pow(chain_alpha, 0.75) / 4.0;
    case Family::IND_NC:
      return grad_scale * std::sqrt(static_cast<double>(cold_blocks)) *
             std::pow(chain_alpha, 0.75) / (4.0 * n);
    case Family::OMEGA_N:
    case Family::OMEGA_N_CVX:
      return lam * cold_blocks / (2.0 * n);
  }
  return 0.0;
}

FiniteSumInstance embed_sum(const ChainFunctionSpec& base, const EmbeddingFamily& family) {
  if (base.dim() != family.block_dim)
    throw std::invalid_argument("embed_sum: base dimension != embedding block_dim");
  FiniteSumInstance inst;
  inst.n = family.n;
  inst.embedding = family;
  inst.chain_alpha = base.alpha;
  inst.chain_T = base.m;
  const double rootn = std::sqrt(static_cast<double>(family.n));
  InstanceMetadata& md = inst.meta;
  md.avg_smooth_L = base.class_hi();
  md.f_lo = base.class_lo() / rootn;
  md.f_hi = base.class_hi();
  md.progress_threshold = base.m;
  md.lower_bound_ifo = (static_cast<std::int64_t>(family.n) * base.m + 1) / 2;
  switch (base.base) {
    case ChainFunctionSpec::Base::NesterovSc: {
      inst.family = Family::SC;
      const NesterovScParams p{base.alpha, base.m};
      const double minv = nsc_min_value(p);
      md.inf_value = rootn * minv;
      md.delta_bound = rootn * (nsc_eval(Vector::Zero(base.m), p).value - minv);
      md.dist_bound = rootn * nsc_minimizer(p).norm();
      md.residual = ResidualKind::Gap;
      break;
    }
    case ChainFunctionSpec::Base::NesterovC: {
      inst.family = Family::CVX;
      inst.chain_alpha = 1.0;
      const NesterovCParams p{base.m};
      const double minv = nc_min_value(p);
      md.inf_value = rootn * minv;
      md.delta_bound = rootn * (nc_eval(Vector::Zero(p.dim()), p).value - minv);
      md.dist_bound = rootn * nc_minimizer(p).norm();
      md.residual = ResidualKind::Gap;
      break;
    }
    case ChainFunctionSpec::Base::Carmon: {
      inst.family = Family::AVG_NC;
      md.delta_bound =
          rootn * (0.5 * std::sqrt(base.alpha) + 10.0 * base.alpha * base.m);
      md.residual = ResidualKind::GradNorm;
      break;
    }
  }
  md.target_epsilon = inst.certified_floor(inst.certificate_block_threshold());
  return inst;
}

FiniteSumInstance rescale(const FiniteSumInstance& inst, const ScaleParams& s) {
  s.validate();
  FiniteSumInstance out = inst;
  out.scale.lambda = inst.scale.lambda * s.lambda;
  out.scale.beta = inst.scale.beta * s.beta;
  const double curv = s.lambda / (s.beta * s.beta);
  InstanceMetadata& md = out.meta;
  md.avg_smooth_L *= curv;
  md.f_lo *= curv;
  md.f_hi *= curv;
  if (md.comp_interval)
    md.comp_interval = {md.comp_interval->first * curv, md.comp_interval->second * curv};
  md.delta_bound *= s.lambda;
  if (md.dist_bound) md.dist_bound = *md.dist_bound * s.beta;
  if (md.inf_value) md.inf_value = *md.inf_value * s.lambda;
  md.target_epsilon = out.certified_floor(out.certificate_block_threshold());
  return out;
}

FiniteSumInstance make_chain_instance(Family f, int n, int T, double alpha,
                                      const ScaleParams& s) {
  s.validate();
  if (n < 1 || T < 1) throw std::invalid_argument("make_chain_instance: n, T >= 1");
  switch (f) {
    case Family::SC:
      return rescale(embed_sum({ChainFunctionSpec::Base::NesterovSc, alpha, T},
                               make_block_family(T, n)),
                     s);
    case Family::CVX:
      return rescale(embed_sum({ChainFunctionSpec::Base::NesterovC, 1.0, T},
                               make_block_family(2 * T - 1, n)),
                     s);
    case Family::AVG_NC:
      return rescale(embed_sum({ChainFunctionSpec::Base::Carmon, alpha, T},
                               make_block_family(T + 1, n)),
                     s);
    case Family::IND_NC: {
      FiniteSumInstance inst;
      inst.family = Family::IND_NC;
      inst.n = n;
      inst.chain_alpha = alpha;
      inst.chain_T = T;
      inst.embedding = make_block_family(T + 1, n);
      inst.scale = s;
      const double curv = s.lambda / (s.beta * s.beta);
      InstanceMetadata& md = inst.meta;
      md.comp_interval = {curv * (-alpha * kCGamma / n), curv * (4.0 + alpha * kCGamma / n)};
      md.avg_smooth_L = curv * (4.0 + alpha * kCGamma / n);
      md.f_lo = curv * (-alpha * kCGamma / n);
      md.f_hi = curv * (4.0 + alpha * kCGamma) / n;
      md.delta_bound = s.lambda * (0.5 * std::sqrt(alpha) + 10.0 * alpha * T);
      md.progress_threshold = T;
      md.residual = ResidualKind::GradNorm;
      md.lower_bound_ifo = (static_cast<std::int64_t>(n) * T + 1) / 2;
      md.target_epsilon = inst.certified_floor(inst.certificate_block_threshold());
      return inst;
    }
    case Family::OMEGA_N:
    case Family::OMEGA_N_CVX: {
      FiniteSumInstance inst;
      inst.family = f;
      inst.n = n;
      inst.chain_alpha = 1.0;
      inst.chain_T = 1;
      inst.embedding = make_block_family(1, n);
      inst.scale = s;
      const double curv = s.lambda / (s.beta * s.beta);
      InstanceMetadata& md = inst.meta;
      md.avg_smooth_L = curv;
      md.f_lo = curv;
      md.f_hi = curv;
      md.delta_bound = 0.5 * s.lambda;
      md.dist_bound = s.beta;
      md.inf_value = -0.5 * s.lambda;
      md.progress_threshold = 1;
      md.residual = ResidualKind::Gap;
      md.lower_bound_ifo = (n + 1) / 2;
      md.target_epsilon = inst.certified_floor(inst.certificate_block_threshold());
      return inst;
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

[[noreturn]] void reject(const std::string& what) {
  throw std::invalid_argument("factory precondition violated: " + what);
}

void require_positive(std::initializer_list<std::pair<const char*, double>> vals) {
  for (const auto& [name, v] : vals)
    if (!(v > 0.0)) reject(std::string(name) + " must be positive");
}

// Largest T >= 1 with pred(T) true, given pred is monotone nonincreasing in T.
// Returns 0 if pred(1) already fails.
template <typename Pred>
int largest_true_T(Pred pred, int cap = 1'000'000) {
  if (!pred(1)) return 0;
  int lo = 1, hi = 2;
  while (hi <= cap && pred(hi)) {
    lo = hi;
    hi *= 2;
  }
  hi = std::min(hi, cap + 1);
  // invariant: pred(lo) true, pred(hi) false (or hi > cap)
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (pred(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

} // namespace

FiniteSumInstance make_sc_instance(int n, double L, double sigma, double Delta,
                                   double epsilon) {
  if (n < 1) reject("n >= 1");
  require_positive({{"L", L}, {"sigma", sigma}, {"Delta", Delta}, {"epsilon", epsilon}});
  const double rootn = std::sqrt(static_cast<double>(n));
  const double eps_cap = 8.0 * Delta * std::pow(n, 1.75) * std::pow(sigma, 1.5) /
                         std::pow(L, 1.5);
  if (epsilon > eps_cap)
    reject("epsilon <= 8 Delta n^{7/4} sigma^{3/2} L^{-3/2} (got epsilon=" +
           std::to_string(epsilon) + ", cap=" + std::to_string(eps_cap) + ")");
  if (rootn * sigma / L > 0.25)
    return make_omega_n_instance(n, L, Delta, OmegaVariant::SC, epsilon);

  const double alpha = rootn * sigma / L;
  const double q = NesterovScParams{alpha, 1}.q();
  const int cold = n / 2 + 1;
  auto floor_at = [&](int T) {
    const NesterovScParams p{alpha, T};
    const double gap0 = nsc_eval(Vector::Zero(T), p).value - nsc_min_value(p);
    const double lambda = Delta / (rootn * gap0);
    return lambda * cold * 0.5 * alpha * std::pow(q, 2.0 * T + 2.0) / rootn;
  };
  const int T = largest_true_T([&](int t) { return floor_at(t) >= epsilon; });
  if (T < 1) reject("no admissible chain length for these (n, L, sigma, Delta, epsilon)");

  const NesterovScParams p{alpha, T};
  const double gap0 = nsc_eval(Vector::Zero(T), p).value - nsc_min_value(p);
  const double lambda = Delta / (rootn * gap0);
  const double beta = std::sqrt(lambda / L);
  FiniteSumInstance inst =
      make_chain_instance(Family::SC, n, T, alpha, ScaleParams{lambda, beta});
  inst.meta.target_epsilon = epsilon;
  return inst;
}

FiniteSumInstance make_cvx_instance(int n, double L, double B, double epsilon) {
  if (n < 1) reject("n >= 1");
  require_positive({{"L", L}, {"B", B}, {"epsilon", epsilon}});
  if (epsilon > L * B * B / 4.0) reject("epsilon <= L B^2 / 4");
  const double rootn = std::sqrt(static_cast<double>(n));
  if (epsilon > L * B * B / (16.0 * rootn))
    return make_omega_n_instance(n, L, B, OmegaVariant::CVX, epsilon);

  const int cold = n / 2 + 1;
  auto scale_at = [&](int T) {
    const double r = nc_minimizer(NesterovCParams{T}).norm();
    const double beta = B / (rootn * r);
    return ScaleParams{beta * beta * L, beta};
  };
  auto floor_at = [&](int T) {
    return scale_at(T).lambda * cold / (16.0 * T * rootn);
  };
  const int T = largest_true_T([&](int t) { return floor_at(t) >= epsilon; });
  if (T < 1) reject("no admissible chain length for these (n, L, B, epsilon)");

  FiniteSumInstance inst = make_chain_instance(Family::CVX, n, T, 1.0, scale_at(T));
  inst.meta.target_epsilon = epsilon;
  return inst;
}

FiniteSumInstance make_avg_nc_instance(int n, double L, double sigma, double Delta,
                                       double epsilon) {
  if (n < 1) reject("n >= 1");
  require_positive({{"L", L}, {"sigma", sigma}, {"Delta", Delta}, {"epsilon", epsilon}});
  const double rootn = std::sqrt(static_cast<double>(n));
  const double cap = std::min(Delta * sigma, L * Delta / rootn) / 1e5;
  if (epsilon * epsilon > cap)
    reject("epsilon^2 <= (Delta sigma ^ L Delta n^{-1/2}) / 10^5");

  const double alpha = std::min(5.0 * sigma * rootn / (kCGamma * L), 1.0 / kCGamma);
  const int cold = n / 2 + 1;
  // grad-norm floor = sqrt(lambda L / 5) sqrt(cold / n) alpha^{3/4} / 4 = epsilon
  const double a34 = std::pow(alpha, 0.75);
  const double lamL5 = std::pow(4.0 * epsilon / (a34 * std::sqrt(double(cold) / n)), 2.0);
  const double lambda = 5.0 * lamL5 / L;
  const double beta = std::sqrt(5.0 * lambda / L);
  const double head = lambda * rootn * 0.5 * std::sqrt(alpha);
  if (head >= Delta) reject("initial-gap budget exhausted before any chain links fit");
  const int T = static_cast<int>(
      std::floor((Delta - head) / (lambda * rootn * 10.0 * alpha)));
  if (T < 1) reject("no admissible chain length for these (n, L, sigma, Delta, epsilon)");

  FiniteSumInstance inst =
      make_chain_instance(Family::AVG_NC, n, T, alpha, ScaleParams{lambda, beta});
  inst.meta.target_epsilon = epsilon;
  // the construction stays inside the requested initial-gap budget
  inst.meta.delta_bound = std::min(inst.meta.delta_bound, Delta);
  return inst;
}

FiniteSumInstance make_ind_nc_instance(int n, double L, double sigma, double Delta,
                                       double epsilon) {
  if (n < 1) reject("n >= 1");
  require_positive({{"L", L}, {"sigma", sigma}, {"Delta", Delta}, {"epsilon", epsilon}});
  const double cap = std::min(Delta * L / n, Delta * sigma) / 1e3;
  if (epsilon * epsilon > cap)
    reject("epsilon^2 <= (Delta L n^{-1} ^ Delta sigma) / 10^3");

  // extra n/c_gamma cap keeps the per-component upper smoothness at L
  const double alpha =
      std::min({1.0, n / kCGamma, 5.0 * n * sigma / (kCGamma * L)});
  const int cold = n / 2 + 1;
  // grad-norm floor = sqrt(lambda L / 5) sqrt(cold) alpha^{3/4} / (4 n) = epsilon
  const double a34 = std::pow(alpha, 0.75);
  const double lamL5 = std::pow(4.0 * n * epsilon / (a34 * std::sqrt(double(cold))), 2.0);
  const double lambda = 5.0 * lamL5 / L;
  const double beta = std::sqrt(5.0 * lambda / L);
  const double head = lambda * 0.5 * std::sqrt(alpha);
  if (head >= Delta) reject("initial-gap budget exhausted before any chain links fit");
  const int T =
      static_cast<int>(std::floor((Delta - head) / (lambda * 10.0 * alpha)));
  if (T < 1) reject("no admissible chain length for these (n, L, sigma, Delta, epsilon)");

  FiniteSumInstance inst =
      make_chain_instance(Family::IND_NC, n, T, alpha, ScaleParams{lambda, beta});
  inst.meta.target_epsilon = epsilon;
  inst.meta.delta_bound = std::min(inst.meta.delta_bound, Delta);
  return inst;
}

FiniteSumInstance make_omega_n_instance(int n, double L, double Delta_or_B,
                                        OmegaVariant variant, double epsilon) {
  if (n < 1) reject("n >= 1");
  require_positive({{"L", L}, {"Delta_or_B", Delta_or_B}});
  ScaleParams s;
  Family f;
  if (variant == OmegaVariant::SC) {
    f = Family::OMEGA_N;
    s = ScaleParams{2.0 * Delta_or_B, std::sqrt(2.0 * Delta_or_B / L)};
    if (epsilon > 0.0 && epsilon >= Delta_or_B / 4.0)
      reject("epsilon < Delta / 4 (Omega(n) regime)");
  } else {
    f = Family::OMEGA_N_CVX;
    s = ScaleParams{L * Delta_or_B * Delta_or_B, Delta_or_B};
    if (epsilon > 0.0 && epsilon >= s.lambda / 4.0)
      reject("epsilon < L B^2 / 4 (Omega(n) regime)");
  }
  FiniteSumInstance inst = make_chain_instance(f, n, 1, 1.0, s);
  if (epsilon > 0.0) inst.meta.target_epsilon = epsilon;
  return inst;
}

double analytic_lower_bound(Family f, double n, double L, double sigma_or_B,
                            double Delta, double epsilon) {
  const double rootn = std::sqrt(n);
  switch (f) {
    case Family::SC: {
      const double T = std::sqrt(L / (rootn * sigma_or_B)) *
                       sc_log_factor(n, L, sigma_or_B, Delta, epsilon);
      return 0.5 * n * T;
    }
    case Family::CVX: {
      const double B = sigma_or_B;
      const double T = B * std::sqrt(L) / (4.0 * std::pow(n, 0.25) * std::sqrt(epsilon));
      return 0.5 * n * T;
    }
    case Family::AVG_NC: {
      const double alpha = std::min(5.0 * sigma_or_B * rootn / (kCGamma * L), 1.0 / kCGamma);
      return L * rootn * Delta * std::sqrt(alpha) / (110.0 * epsilon * epsilon);
    }
    case Family::IND_NC: {
      const double alpha = std::min(1.0, 5.0 * n * sigma_or_B / (kCGamma * L));
      return Delta * L * std::sqrt(alpha) / (3520.0 * epsilon * epsilon);
    }
    case Family::OMEGA_N:
    case Family::OMEGA_N_CVX:
      return 0.5 * n;
  }
  return 0.0;
}

double sc_log_factor(double n, double L, double sigma, double Delta, double epsilon) {
  return std::log(8.0 * std::pow(n, 1.75) * Delta * std::pow(sigma, 1.5) /
                  (std::pow(L, 1.5) * epsilon));
}

namespace {

json meta_to_json(const InstanceMetadata& md) {
  json j;
  j["avg_smooth_L"] = md.avg_smooth_L;
  j["f_lo"] = md.f_lo;
  j["f_hi"] = md.f_hi;
  if (md.comp_interval)
    j["comp_interval"] = {md.comp_interval->first, md.comp_interval->second};
  j["delta_bound"] = md.delta_bound;
  if (md.dist_bound) j["dist_bound"] = *md.dist_bound;
  j["progress_threshold"] = md.progress_threshold;
  j["target_epsilon"] = md.target_epsilon;
  j["residual"] = md.residual == ResidualKind::Gap ? "gap" : "grad_norm";
  if (md.inf_value) j["inf_value"] = *md.inf_value;
  j["lower_bound_ifo"] = md.lower_bound_ifo;
  return j;
}

InstanceMetadata meta_from_json(const json& j) {
  InstanceMetadata md;
  md.avg_smooth_L = j.at("avg_smooth_L").get<double>();
  md.f_lo = j.at("f_lo").get<double>();
  md.f_hi = j.at("f_hi").get<double>();
  if (j.contains("comp_interval"))
    md.comp_interval = {j["comp_interval"][0].get<double>(),
                        j["comp_interval"][1].get<double>()};
  md.delta_bound = j.at("delta_bound").get<double>();
  if (j.contains("dist_bound")) md.dist_bound = j["dist_bound"].get<double>();
  md.progress_threshold = j.at("progress_threshold").get<int>();
  md.target_epsilon = j.at("target_epsilon").get<double>();
  md.residual =
      j.at("residual").get<std::string>() == "gap" ? ResidualKind::Gap : ResidualKind::GradNorm;
  if (j.contains("inf_value")) md.inf_value = j["inf_value"].get<double>();
  md.lower_bound_ifo = j.at("lower_bound_ifo").get<std::int64_t>();
  return md;
}

} // namespace

std::string FiniteSumInstance::to_json_string() const {
  json j;
  j["schema_version"] = 1;
  j["family"] = family_name(family);
  j["n"] = n;
  j["chain_alpha"] = chain_alpha;
  j["chain_T"] = chain_T;
  j["block_dim"] = embedding.block_dim;
  j["lambda"] = scale.lambda;
  j["beta"] = scale.beta;
  j["seed"] = seed;
  j["metadata"] = meta_to_json(meta);
  return j.dump(2);
}

FiniteSumInstance FiniteSumInstance::from_json_string(const std::string& text) {
  const json j = json::parse(text);
  if (j.at("schema_version").get<int>() != 1)
    throw std::invalid_argument("unsupported instance schema version");
  FiniteSumInstance inst;
  inst.family = family_from_name(j.at("family").get<std::string>());
  inst.n = j.at("n").get<int>();
  inst.chain_alpha = j.at("chain_alpha").get<double>();
  inst.chain_T = j.at("chain_T").get<int>();
  inst.embedding = make_block_family(j.at("block_dim").get<int>(), inst.n);
  inst.scale = ScaleParams{j.at("lambda").get<double>(), j.at("beta").get<double>()};
  inst.seed = j.at("seed").get<std::uint64_t>();
  inst.meta = meta_from_json(j.at("metadata"));
  if (inst.embedding.block_dim != chain_block_dim(inst.family, inst.chain_T))
    throw std::invalid_argument("instance JSON: block_dim inconsistent with family/T");
  return inst;
}

} // namespace hardsum
