#include "modtag/svm_oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace modtag {

ExplicitFeatureMap::ExplicitFeatureMap(std::size_t dimension, const KernelParams& kernel)
    : dim_(dimension), kernel_(kernel) {
  kernel_.validate();
  if (kernel_.kind == KernelKind::kLinear) {
    out_dim_ = dim_;
  } else if (kernel_.degree == 1) {
    out_dim_ = 1 + dim_;
  } else if (kernel_.degree == 2) {
    out_dim_ = 1 + 2 * dim_ + dim_ * (dim_ - (dim_ > 0 ? 1 : 0)) / 2;
  } else {
    throw Error("explicit feature map supports polynomial degree <= 2 only");
  }
  if (kernel_.kind == KernelKind::kPolynomial &&
      (kernel_.offset < 0 || kernel_.scale < 0))
    throw Error("explicit feature map needs non-negative scale and offset");
}

std::vector<double> ExplicitFeatureMap::map(const SparseVector& x) const {
  std::vector<double> z(out_dim_, 0.0);
  for (std::uint32_t k : x.indices) {
    if (k >= dim_) throw Error("feature index beyond explicit map dimension");
  }
  if (kernel_.kind == KernelKind::kLinear) {
    for (std::uint32_t k : x.indices) z[k] = 1.0;
    return z;
  }
  const double s = kernel_.scale;
  const double c0 = kernel_.offset;
  if (kernel_.degree == 1) {
    // s<x,y> + c0 = <[sqrt(c0), sqrt(s) x], [sqrt(c0), sqrt(s) y]>.
    z[0] = std::sqrt(c0);
    for (std::uint32_t k : x.indices) z[1 + k] = std::sqrt(s);
    return z;
  }
  // Degree 2: (s<x,y> + c0)^2 = c0^2 + 2 c0 s <x,y> + s^2 <x,y>^2.
  z[0] = c0;
  const double lin = std::sqrt(2.0 * c0 * s);
  for (std::uint32_t k : x.indices) {
    z[1 + k] = lin;
    z[1 + dim_ + k] = s;  // x_k^2 = x_k for indicators
  }
  const double cross = std::sqrt(2.0) * s;
  const std::size_t base = 1 + 2 * dim_;
  for (std::size_t a = 0; a < x.indices.size(); ++a) {
    for (std::size_t b = a + 1; b < x.indices.size(); ++b) {
      std::size_t k = x.indices[a];
      std::size_t l = x.indices[b];
      // Row-major index of (k, l), k < l, in the strict upper triangle.
      std::size_t idx = k * dim_ - k * (k + 1) / 2 + (l - k - 1);
      z[base + idx] = cross;
    }
  }
  return z;
}

double PrimalSolution::decision(const ExplicitFeatureMap& map, const SparseVector& x) const {
  std::vector<double> z = map.map(x);
  double s = bias;
  for (std::size_t i = 0; i < z.size(); ++i) s += weights[i] * z[i];
  return s;
}

std::size_t input_dimension(std::span<const LabeledVector> examples) {
  std::size_t d = 0;
  for (const LabeledVector& e : examples) {
    if (!e.x.indices.empty()) d = std::max<std::size_t>(d, e.x.indices.back() + 1);
  }
  return d;
}

double primal_objective(std::span<const double> weights, double bias,
                        const ExplicitFeatureMap& map,
                        std::span<const LabeledVector> examples,
                        std::span<const double> costs, double C) {
  double reg = 0.0;
  for (double w : weights) reg += w * w;
  double loss = 0.0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    std::vector<double> z = map.map(examples[i].x);
    double f = bias;
    for (std::size_t k = 0; k < z.size(); ++k) f += weights[k] * z[k];
    double c = costs.empty() ? 1.0 : costs[i];
    loss += c * std::max(0.0, 1.0 - examples[i].label * f);
  }
  return 0.5 * reg + C * loss;
}

double dual_objective(std::span<const double> alpha,
                      std::span<const LabeledVector> examples,
                      const KernelParams& kernel) {
  double lin = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    lin += alpha[i];
    if (alpha[i] == 0.0) continue;
    for (std::size_t j = 0; j < examples.size(); ++j) {
      if (alpha[j] == 0.0) continue;
      quad += alpha[i] * alpha[j] * examples[i].label * examples[j].label *
              kernel_eval(examples[i].x, examples[j].x, kernel);
    }
  }
  return lin - 0.5 * quad;
}

std::vector<double> explicit_weights(const BinaryModel& model,
                                     const ExplicitFeatureMap& map) {
  std::vector<double> w(map.output_dimension(), 0.0);
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
    std::vector<double> z = map.map(model.support_vectors[i]);
    double coef = model.alpha[i] * model.labels[i];
    for (std::size_t k = 0; k < z.size(); ++k) w[k] += coef * z[k];
  }
  return w;
}

namespace {

// Primal-dual path following for
//   min 1/2 a'Qa - 1'a  s.t. y'a = 0, 0 <= a <= u.
Eigen::VectorXd interior_point(const Eigen::MatrixXd& Q, const Eigen::VectorXd& y,
                               const Eigen::VectorXd& u) {
  const Eigen::Index n = Q.rows();
  Eigen::VectorXd a = u / 2.0;
  Eigen::VectorXd z = Eigen::VectorXd::Ones(n);  // multiplier of a >= 0
  Eigen::VectorXd s = Eigen::VectorXd::Ones(n);  // multiplier of a <= u
  double nu = 0.0;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);

  for (int iter = 0; iter < 200; ++iter) {
    Eigen::VectorXd slack = u - a;
    Eigen::VectorXd rd = Q * a - ones + nu * y - z + s;
    double rp = y.dot(a);
    double gap = a.dot(z) + slack.dot(s);
    double mean_gap = gap / (2.0 * static_cast<double>(n));
    if (mean_gap < 1e-14 && rd.lpNorm<Eigen::Infinity>() < 1e-11 &&
        std::abs(rp) < 1e-11)
      break;

    const double mu = 0.1 * mean_gap;
    Eigen::VectorXd d = z.cwiseQuotient(a) + s.cwiseQuotient(slack);
    Eigen::MatrixXd M = Q;
    M.diagonal() += d;
    Eigen::VectorXd r = -rd + (mu * ones).cwiseQuotient(a) - z -
                        (mu * ones).cwiseQuotient(slack) + s;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
    Eigen::VectorXd m_r = ldlt.solve(r);
    Eigen::VectorXd m_y = ldlt.solve(y);
    double dnu = (y.dot(m_r) + rp) / y.dot(m_y);
    Eigen::VectorXd da = m_r - dnu * m_y;
    Eigen::VectorXd dz = ((mu * ones) - a.cwiseProduct(z) - z.cwiseProduct(da)).cwiseQuotient(a);
    Eigen::VectorXd ds =
        ((mu * ones) - slack.cwiseProduct(s) + s.cwiseProduct(da)).cwiseQuotient(slack);

    double step = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (da[i] < 0) step = std::min(step, -a[i] / da[i]);
      if (da[i] > 0) step = std::min(step, slack[i] / da[i]);
      if (dz[i] < 0) step = std::min(step, -z[i] / dz[i]);
      if (ds[i] < 0) step = std::min(step, -s[i] / ds[i]);
    }
    step = std::min(1.0, 0.995 * step);
    a += step * da;
    z += step * dz;
    s += step * ds;
    nu += step * dnu;
  }
  return a;
}

}  // namespace

PrimalSolution primal_oracle_train(std::span<const LabeledVector> examples,
                                   const TrainParams& params,
                                   std::span<const double> costs) {
  params.validate();
  const std::size_t n = examples.size();
  if (n == 0) throw Error("cannot train on zero examples");
  if (n > kOracleMaxExamples) throw Error("primal oracle limited to 200 examples");
  const std::size_t dim = input_dimension(examples);
  if (dim > kOracleMaxDimension) throw Error("primal oracle limited to 200 features");
  if (!costs.empty() && costs.size() != n) throw Error("cost vector length mismatch");
  bool pos = false, neg = false;
  for (const LabeledVector& e : examples) {
    if (e.label != 1 && e.label != -1) throw Error("binary labels must be -1 or +1");
    pos |= e.label > 0;
    neg |= e.label < 0;
  }
  if (!pos || !neg) throw Error("binary training needs both labels present");

  ExplicitFeatureMap map(dim, params.kernel);
  const auto D = static_cast<Eigen::Index>(map.output_dimension());
  Eigen::MatrixXd Z(static_cast<Eigen::Index>(n), D);
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  Eigen::VectorXd u(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> z = map.map(examples[i].x);
    for (Eigen::Index k = 0; k < D; ++k) Z(static_cast<Eigen::Index>(i), k) = z[static_cast<std::size_t>(k)];
    y[static_cast<Eigen::Index>(i)] = examples[i].label;
    double c = costs.empty() ? 1.0 : costs[i];
    if (!(c > 0.0) || !std::isfinite(c)) throw Error("instance costs must be positive and finite");
    u[static_cast<Eigen::Index>(i)] = c * params.C;
  }
  Eigen::MatrixXd YZ = y.asDiagonal() * Z;
  Eigen::MatrixXd Q = YZ * YZ.transpose();
  Eigen::VectorXd a = interior_point(Q, y, u);

  Eigen::VectorXd w = YZ.transpose() * a;
  Eigen::VectorXd f = Z * w;

  // The loss is convex piecewise linear in b; its minimum sits at a hinge.
  auto loss_at = [&](double b) {
    double l = 0.0;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i)
      l += u[i] * std::max(0.0, 1.0 - y[i] * (f[i] + b));
    return l;
  };
  double best_b = 0.0;
  double best_loss = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
    double b = y[i] - f[i];
    double l = loss_at(b);
    if (l < best_loss) {
      best_loss = l;
      best_b = b;
    }
  }

  PrimalSolution sol;
  sol.dimension = dim;
  sol.weights.assign(w.data(), w.data() + w.size());
  sol.bias = best_b;
  sol.objective = 0.5 * w.squaredNorm() + best_loss;
  return sol;
}

}  // namespace modtag
