// Verification route for the kernel SVM that never touches the kernel
// trick: examples are expanded through the explicit feature map of the
// degree <= 2 polynomial kernel and the soft-margin problem is solved with
// an interior-point method on the explicit Gram matrix, followed by an exact
// line search for the bias in the primal. Only meant for tiny problems.

#ifndef MODTAG_SVM_ORACLE_HPP_
#define MODTAG_SVM_ORACLE_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "modtag/svm.hpp"

namespace modtag {

// Phi(x) with <Phi(x), Phi(y)> = K(x, y) for indicator vectors over
// `dimension` features:
//   linear:     x
//   quadratic:  [offset, sqrt(2*offset*scale) x_k, scale x_k^2,
//                sqrt(2)*scale x_k x_l (k < l)]
class ExplicitFeatureMap {
 public:
  // Throws Error for polynomial degree > 2.
  ExplicitFeatureMap(std::size_t dimension, const KernelParams& kernel);

  std::size_t output_dimension() const { return out_dim_; }
  std::vector<double> map(const SparseVector& x) const;

 private:
  std::size_t dim_;
  std::size_t out_dim_;
  KernelParams kernel_;
};

struct PrimalSolution {
  std::vector<double> weights;  // over the explicit map
  double bias = 0.0;
  double objective = 0.0;  // 1/2 |w|^2 + C sum c_i hinge_i
  std::size_t dimension = 0;  // input feature dimension

  double decision(const ExplicitFeatureMap& map, const SparseVector& x) const;
};

inline constexpr std::size_t kOracleMaxDimension = 200;
inline constexpr std::size_t kOracleMaxExamples = 200;

// Throws Error beyond 200 input features or 200 examples, or on the same
// degenerate inputs as solve_dual.
PrimalSolution primal_oracle_train(std::span<const LabeledVector> examples,
                                   const TrainParams& params,
                                   std::span<const double> costs = {});

// 1/2 |w|^2 + C * sum_i c_i * max(0, 1 - y_i (w.Phi(x_i) + b)).
double primal_objective(std::span<const double> weights, double bias,
                        const ExplicitFeatureMap& map,
                        std::span<const LabeledVector> examples,
                        std::span<const double> costs, double C);

// sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij, by direct summation.
double dual_objective(std::span<const double> alpha,
                      std::span<const LabeledVector> examples,
                      const KernelParams& kernel);

// w = sum_i alpha_i y_i Phi(sv_i) for a trained model.
std::vector<double> explicit_weights(const BinaryModel& model,
                                     const ExplicitFeatureMap& map);

// Largest feature index + 1 over the examples.
std::size_t input_dimension(std::span<const LabeledVector> examples);

}  // namespace modtag

#endif  // MODTAG_SVM_ORACLE_HPP_
