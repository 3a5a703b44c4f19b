// Kernel SVM trained in the dual by sequential minimal optimization, with a
// per-example cost factor c_i scaling the box: 0 <= alpha_i <= c_i * C.
// Binary models are composed one-vs-all over the six modality tags.

#ifndef MODTAG_SVM_HPP_
#define MODTAG_SVM_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "modtag/features.hpp"
#include "modtag/modality.hpp"

namespace modtag {

enum class KernelKind : std::uint8_t { kLinear, kPolynomial };

// Polynomial: K(x, y) = (scale * <x, y> + offset) ^ degree.
struct KernelParams {
  KernelKind kind = KernelKind::kPolynomial;
  int degree = 2;
  double scale = 1.0;
  double offset = 1.0;

  void validate() const;
  double apply(double inner_product) const;
  friend bool operator==(const KernelParams&, const KernelParams&) = default;
};

double kernel_eval(const SparseVector& x, const SparseVector& y,
                   const KernelParams& params);

struct TrainParams {
  double C = 1.0;
  KernelParams kernel;
  double kkt_tolerance = 1e-3;
  long max_iterations = 20'000'000;
  // Upper bound on the kernel-row cache.
  std::size_t cache_megabytes = 256;
  // Worker threads for the one-vs-all subproblems.
  int jobs = 1;

  void validate() const;
};

struct LabeledVector {
  SparseVector x;
  int label;  // -1 or +1
};

// Full dual solution over the training examples.
struct DualSolution {
  std::vector<double> alpha;
  double bias = 0.0;
  double dual_objective = 0.0;  // sum(alpha) - 1/2 alpha' Q alpha
  long iterations = 0;
  bool converged = false;
};

// Throws Error on an empty set, a single label, labels other than +-1, or
// non-positive/non-finite costs. `costs` may be empty (all 1.0).
DualSolution solve_dual(std::span<const LabeledVector> examples,
                        std::span<const double> costs, const TrainParams& params);

struct BinaryModel {
  std::vector<SparseVector> support_vectors;
  std::vector<double> alpha;       // > 0
  std::vector<std::int8_t> labels;  // +-1
  double bias = 0.0;
  KernelParams kernel;
  // Class absent from the training data: scores -infinity.
  bool degenerate = false;

  // sum_i alpha_i y_i K(sv_i, x) + b.
  double decision(const SparseVector& x) const;
  friend bool operator==(const BinaryModel&, const BinaryModel&) = default;
};

BinaryModel compact_model(std::span<const LabeledVector> examples,
                          const DualSolution& solution, const KernelParams& kernel);

BinaryModel train_binary(std::span<const LabeledVector> examples,
                         const TrainParams& params,
                         std::span<const double> costs = {});

struct TaggedVector {
  SparseVector x;
  ModalityTag tag;
};

struct SvmModel {
  // Always all six tags in canonical order; one binary model each.
  std::vector<ModalityTag> classes;
  std::vector<BinaryModel> models;
  FeatureVocabulary vocabulary;
  FeatureConfig config;
  LemmaTable lemmas;
  double C = 1.0;

  friend bool operator==(const SvmModel&, const SvmModel&) = default;
};

// One binary problem per tag (positive = that tag); costs propagate to every
// subproblem. Throws Error with fewer than two distinct tags.
SvmModel train_multiclass(std::span<const TaggedVector> examples,
                          const TrainParams& params,
                          std::span<const double> costs = {});

std::map<ModalityTag, double> decision_scores(const SvmModel& model,
                                              const SparseVector& x);
// Argmax; exact ties go to the earlier tag in canonical order.
ModalityTag predict_class(const SvmModel& model, const SparseVector& x);

// Scores through per-class inverted indexes over the support vectors.
// Produces bitwise the same values as BinaryModel::decision (same terms,
// same summation order) at a fraction of the cost for sparse inputs.
class SvmScorer {
 public:
  explicit SvmScorer(const SvmModel& model);

  std::array<double, kNumTags> scores(const SparseVector& x) const;
  ModalityTag predict(const SparseVector& x) const;

 private:
  struct ClassIndex {
    std::vector<std::vector<std::uint32_t>> postings;  // feature -> sv ids
    std::vector<double> coef;                          // alpha_i * y_i
    double bias = 0.0;
    bool degenerate = false;
  };
  const SvmModel* model_;
  std::vector<ClassIndex> classes_;
};

inline constexpr int kModelFormatVersion = 1;
inline constexpr std::string_view kModelMagic = "MODTAG-SVM-MODEL";

void write_model(const SvmModel& model, std::ostream& out);
SvmModel read_model(std::istream& in);
void save_model(const SvmModel& model, const std::filesystem::path& path);
SvmModel load_model(const std::filesystem::path& path);

}  // namespace modtag

#endif  // MODTAG_SVM_HPP_
