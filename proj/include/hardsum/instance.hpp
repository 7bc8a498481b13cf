#pragma once

// Finite-sum adversarial instances: orthogonal block embeddings of the base
// chain functions, sqrt(n) component scaling, (lambda, beta) rescaling, the
// inner-product Omega(n) instances, and factories turning problem-class
// parameters into concrete instances.

#include "hardsum/chain_functions.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace hardsum {

enum class Family { SC, CVX, AVG_NC, IND_NC, OMEGA_N, OMEGA_N_CVX };

const char* family_name(Family f);
Family family_from_name(const std::string& name);

enum class ResidualKind { Gap, GradNorm };

// Block-coordinate realization of the orthogonal class O(a, b, n):
// component i owns coordinates [i*a, (i+1)*a). Rows are exactly orthonormal
// and row spaces exactly orthogonal.
struct EmbeddingFamily {
  int block_dim = 1;
  int n = 1;

  int ambient_dim() const { return block_dim * n; }
  // U^(i) x, i.e. the block of x owned by component i (0-based)
  Eigen::Ref<const Vector> project(const Vector& x, int i) const {
    return x.segment(static_cast<Eigen::Index>(i) * block_dim, block_dim);
  }
  Matrix dense_matrix(int i) const; // explicit a x b selector, for tests
};

EmbeddingFamily make_block_family(int block_dim, int n);

struct ScaleParams {
  double lambda = 1.0; // value scale
  double beta = 1.0;   // argument scale

  void validate() const {
    if (!(lambda > 0.0) || !(beta > 0.0))
      throw std::invalid_argument("ScaleParams: lambda and beta must be positive");
  }
};

// Base function of one embedded block.
struct ChainFunctionSpec {
  enum class Base { NesterovSc, NesterovC, Carmon };
  Base base = Base::NesterovSc;
  double alpha = 1.0; // unused for NesterovC
  int m = 1;

  int dim() const;
  double class_lo() const; // smoothness interval of the base function
  double class_hi() const;
  Eval eval(const Vector& y) const;
};

struct InstanceMetadata {
  double avg_smooth_L = 0.0;
  double f_lo = 0.0, f_hi = 0.0; // smoothness interval of F
  std::optional<std::pair<double, double>> comp_interval; // per-component, if certified
  double delta_bound = 0.0;                 // F(0) - inf F <= delta_bound
  std::optional<double> dist_bound;         // dist(0, X*) <= dist_bound
  int progress_threshold = 0;               // T; blocks with activation < T are "cold"
  double target_epsilon = 0.0;
  ResidualKind residual = ResidualKind::Gap;
  std::optional<double> inf_value;          // exact inf F, for gap families
  std::int64_t lower_bound_ifo = 0;         // certified IFO lower bound
};

class FiniteSumInstance {
 public:
  Family family = Family::SC;
  int n = 1;
  double chain_alpha = 1.0; // alpha of the base function (1 for CVX/OMEGA)
  int chain_T = 1;          // progress threshold; block length derives from it
  EmbeddingFamily embedding;
  ScaleParams scale;
  InstanceMetadata meta;
  std::uint64_t seed = 0;

  int dim() const { return embedding.ambient_dim(); }

  // IFO answer for component i (0-based) at x; pure, thread-safe.
  Eval component(int i, const Vector& x) const;

  double full_value(const Vector& x) const;
  Vector full_gradient(const Vector& x) const;

  // Exact residual in the family metric: gap against the stored optimum,
  // or the full gradient norm.
  double residual(const Vector& x) const;

  // Largest 1-based activated coordinate index of block i of x.
  int block_activation(int i, const Vector& x, double tol = 0.0) const;

  // Certified residual floor given that `cold` blocks have activation < T.
  // Exact per-block aggregation; zero when the predicate fails.
  double certified_floor(int cold_blocks) const;
  // Minimum number of cold blocks at which a certificate exists.
  int certificate_block_threshold() const;

  std::string to_json_string() const;
  static FiniteSumInstance from_json_string(const std::string& text);

 private:
  Eval component_unscaled(int i, const Vector& z) const;
};

int chain_block_dim(Family f, int T);

// Embeds a base function into an n-term finite sum per the sqrt(n) rule:
// f_i(x) = sqrt(n) g(U^(i) x). Metadata follows the exact embedding rules.
FiniteSumInstance embed_sum(const ChainFunctionSpec& base, const EmbeddingFamily& family);

// g_i(x) = lambda g_i(x / beta): smoothness scales by lambda/beta^2, gap
// bounds by lambda, distances by beta.
FiniteSumInstance rescale(const FiniteSumInstance& inst, const ScaleParams& s);

// Direct construction with explicit (n, T, alpha, scale); computes exact
// metadata and sets target_epsilon to the certified floor. Used by tests
// and anywhere the problem-class parameters are not the entry point.
FiniteSumInstance make_chain_instance(Family f, int n, int T, double alpha,
                                      const ScaleParams& s = {});

// Problem-class factories. Each rejects parameters outside its admissible
// range, and emits a construction whose certified floor provably
// dominates epsilon with exact constants.
FiniteSumInstance make_sc_instance(int n, double L, double sigma, double Delta,
                                   double epsilon);
FiniteSumInstance make_cvx_instance(int n, double L, double B, double epsilon);
FiniteSumInstance make_avg_nc_instance(int n, double L, double sigma, double Delta,
                                       double epsilon);
FiniteSumInstance make_ind_nc_instance(int n, double L, double sigma, double Delta,
                                       double epsilon);

enum class OmegaVariant { SC, CVX };
FiniteSumInstance make_omega_n_instance(int n, double L, double Delta_or_B,
                                        OmegaVariant variant,
                                        double epsilon = 0.0);

// Real-valued lower-bound curves straight from the closed-form rate
// (un-rounded T). These drive the rate-shape fits; the per-instance
// certified bounds above are the sound integer versions.
double analytic_lower_bound(Family f, double n, double L, double sigma_or_B,
                            double Delta, double epsilon);
// The logarithmic factor of the strongly convex bound, for fit compensation.
double sc_log_factor(double n, double L, double sigma, double Delta, double epsilon);

} // namespace hardsum
