#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "modtag/svm.hpp"
#include "modtag/svm_oracle.hpp"
#include "svm_checks.hpp"
#include "test_util.hpp"

namespace modtag {
namespace {

SparseVector sv(std::initializer_list<std::uint32_t> idx) { return SparseVector::from_unsorted(idx); }

// Config and vocabulary so the model is complete enough to serialize.
void make_complete(SvmModel& m, std::size_t dimension) {
  m.config = parse_feature_config("wordStem,POS,whichModal", 2);
  std::vector<std::vector<std::string>> names(1);
  for (std::size_t i = 0; i < dimension; ++i) names[0].push_back("f" + std::to_string(i));
  m.vocabulary = fit_vocabulary(names);
}

double inner(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

TEST(Kernel, Values) {
  KernelParams k;
  EXPECT_DOUBLE_EQ(kernel_eval(sv({}), sv({1, 2}), k), 1.0);
  EXPECT_DOUBLE_EQ(kernel_eval(sv({1, 2}), sv({1, 2, 3}), k), 9.0);
  KernelParams lin{KernelKind::kLinear, 1, 1.0, 0.0};
  EXPECT_DOUBLE_EQ(kernel_eval(sv({1, 2}), sv({1, 2, 3}), lin), 2.0);
  EXPECT_THROW((KernelParams{KernelKind::kPolynomial, 0, 1.0, 1.0}.validate()), Error);
  EXPECT_THROW((KernelParams{KernelKind::kPolynomial, 2, HUGE_VAL, 1.0}.validate()), Error);
}

TEST(KernelProperty, ExplicitMapSymmetryAndFloor) {
  std::mt19937_64 rng(5);
  KernelParams k{KernelKind::kPolynomial, 2, 0.5, 2.0};
  ExplicitFeatureMap phi(12, k);
  for (int trial = 0; trial < 200; ++trial) {
    SparseVector x = testing::random_sparse(rng, 12, 6);
    SparseVector y = testing::random_sparse(rng, 12, 6);
    const double kxy = kernel_eval(x, y, k);
    EXPECT_NEAR(inner(phi.map(x), phi.map(y)), kxy, 1e-9);
    EXPECT_EQ(kxy, kernel_eval(y, x, k));
    EXPECT_GE(kernel_eval(x, x, k), std::pow(k.offset, k.degree));
  }
  EXPECT_THROW(ExplicitFeatureMap(4, KernelParams{KernelKind::kPolynomial, 3, 1.0, 1.0}), Error);
}

TEST(TrainBinary, SeparableToy) {
  std::vector<LabeledVector> ex = {{sv({0}), 1}, {sv({0, 2}), 1}, {sv({1}), -1}, {sv({1, 3}), -1}};
  BinaryModel m = train_binary(ex, TrainParams{});
  for (const LabeledVector& e : ex) EXPECT_GT(e.label * m.decision(e.x), 0.0);
  for (double a : m.alpha) EXPECT_GT(a, 0.0);
}

TEST(TrainBinary, Errors) {
  std::vector<LabeledVector> same = {{sv({0}), 1}, {sv({1}), 1}};
  EXPECT_THROW(train_binary(same, TrainParams{}), Error);
  EXPECT_THROW(train_binary({}, TrainParams{}), Error);
  std::vector<LabeledVector> bad = {{sv({0}), 1}, {sv({1}), 0}};
  EXPECT_THROW(train_binary(bad, TrainParams{}), Error);
  std::vector<LabeledVector> ok = {{sv({0}), 1}, {sv({1}), -1}};
  std::vector<double> neg = {1.0, -1.0};
  EXPECT_THROW(train_binary(ok, TrainParams{}, neg), Error);
  std::vector<double> nan = {1.0, std::numeric_limits<double>::quiet_NaN()};
  EXPECT_THROW(train_binary(ok, TrainParams{}, nan), Error);
  std::vector<double> short_costs = {1.0};
  EXPECT_THROW(train_binary(ok, TrainParams{}, short_costs), Error);
  TrainParams p;
  p.C = 0.0;
  EXPECT_THROW(train_binary(ok, p), Error);
}

TEST(SolveDualProperty, KktBoxAndEquality) {
  std::mt19937_64 rng(17);
  const double cost_values[] = {0.5, 1.0, 20.0, 30.0};
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = testing::uniform(rng, 2, 50);
    auto ex = testing::random_problem(rng, n, 25, 6);
    std::vector<double> costs(n);
    for (double& c : costs) c = cost_values[testing::uniform(rng, 0, 3)];
    TrainParams p;
    p.C = trial % 2 ? 1.0 : 0.1;
    DualSolution sol = solve_dual(ex, costs, p);
    ASSERT_TRUE(sol.converged);
    testing::KktReport r = testing::check_kkt(ex, costs, sol, p);
    EXPECT_LE(r.max_violation, 1e-2) << "trial " << trial;
    EXPECT_LE(r.box_violation, 0.0);
    EXPECT_LE(r.equality_residual, 1e-9 * p.C * 30.0 * n);
  }
}

TEST(SolveDualProperty, AgreesWithPrimalOracle) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    auto ex = testing::random_problem(rng, 40, 15, 5);
    TrainParams p;
    p.kkt_tolerance = 1e-6;
    DualSolution sol = solve_dual(ex, {}, p);
    PrimalSolution primal = primal_oracle_train(ex, p);
    // Strong duality: optimal dual value equals optimal primal value.
    EXPECT_NEAR(sol.dual_objective, primal.objective, 1e-3 * std::abs(primal.objective)) << trial;

    BinaryModel m = compact_model(ex, sol, p.kernel);
    ExplicitFeatureMap phi(primal.dimension, p.kernel);
    std::vector<double> w = explicit_weights(m, phi);
    const double ours = primal_objective(w, m.bias, phi, ex, {}, p.C);
    EXPECT_NEAR(ours, primal.objective, 1e-3 * std::abs(primal.objective)) << trial;
    for (const LabeledVector& e : ex) {
      const double a = m.decision(e.x);
      const double b = primal.decision(phi, e.x);
      if (std::abs(b) > 0.05) EXPECT_EQ(a > 0, b > 0) << trial;
      // Weights over the explicit map reproduce the kernel expansion.
      EXPECT_NEAR(inner(w, phi.map(e.x)) + m.bias, a, 1e-6);
    }
  }
}

// Positives {a}, negatives {b}, and one {b, c} example labeled +1 whose
// cost factor decides whether the solver pays to fit it.
TEST(Costs, OutlierFollowsItsCost) {
  std::vector<LabeledVector> ex;
  for (int i = 0; i < 5; ++i) ex.push_back({sv({0}), 1});
  for (int i = 0; i < 5; ++i) ex.push_back({sv({1}), -1});
  ex.push_back({sv({1, 2}), 1});
  auto outlier_score = [&](double c) {
    std::vector<double> costs(ex.size(), 1.0);
    costs.back() = c;
    TrainParams p;
    p.kkt_tolerance = 1e-6;
    return train_binary(ex, p, costs).decision(ex.back().x);
  };
  EXPECT_LT(outlier_score(0.01), 0.0);
  EXPECT_GT(outlier_score(100.0), 0.0);
}

std::vector<TaggedVector> three_class_toy() {
  std::vector<TaggedVector> ex;
  for (std::uint32_t i = 0; i < 4; ++i) {
    ex.push_back({sv({0, 10 + i}), ModalityTag::kWant});
    ex.push_back({sv({1, 10 + i}), ModalityTag::kEffort});
    ex.push_back({sv({2, 10 + i}), ModalityTag::kO});
  }
  return ex;
}

TEST(Multiclass, ToyDataAndCanonicalOrder) {
  auto ex = three_class_toy();
  SvmModel m = train_multiclass(ex, TrainParams{});
  ASSERT_EQ(m.classes.size(), kNumTags);
  for (std::size_t i = 0; i < kNumTags; ++i) EXPECT_EQ(m.classes[i], kAllTags[i]);
  for (const TaggedVector& e : ex) EXPECT_EQ(predict_class(m, e.x), e.tag);
  EXPECT_EQ(predict_class(m, sv({0, 99})), ModalityTag::kWant);

  // Classes absent from the data never win.
  EXPECT_TRUE(m.models[0].degenerate);
  EXPECT_EQ(decision_scores(m, sv({0}))[ModalityTag::kAbility], -std::numeric_limits<double>::infinity());

  std::vector<TaggedVector> one = {{sv({0}), ModalityTag::kWant}, {sv({1}), ModalityTag::kWant}};
  EXPECT_THROW(train_multiclass(one, TrainParams{}), Error);
}

TEST(Multiclass, UnitCostsEqualNoCosts) {
  auto ex = three_class_toy();
  std::vector<double> ones(ex.size(), 1.0);
  EXPECT_EQ(train_multiclass(ex, TrainParams{}), train_multiclass(ex, TrainParams{}, ones));
}

TEST(Multiclass, ParallelEqualsSequential) {
  auto ex = three_class_toy();
  TrainParams par;
  par.jobs = 4;
  EXPECT_EQ(train_multiclass(ex, TrainParams{}), train_multiclass(ex, par));
}

TEST(Multiclass, TiesGoToEarlierTag) {
  SvmModel m;
  m.classes.assign(kAllTags.begin(), kAllTags.end());
  for (std::size_t i = 0; i < kNumTags; ++i) m.models.push_back(BinaryModel{{}, {}, {}, 0.5, {}, false});
  EXPECT_EQ(predict_class(m, sv({3})), ModalityTag::kAbility);
  EXPECT_EQ(SvmScorer(m).predict(sv({3})), ModalityTag::kAbility);
  m.models[0].degenerate = true;
  EXPECT_EQ(predict_class(m, sv({3})), ModalityTag::kEffort);
}

TEST(Scorer, MatchesDecisionBitwise) {
  std::mt19937_64 rng(31);
  std::vector<TaggedVector> ex;
  for (int i = 0; i < 120; ++i) ex.push_back({testing::random_sparse(rng, 40, 8), testing::random_tag(rng)});
  SvmModel m = train_multiclass(ex, TrainParams{});
  SvmScorer scorer(m);
  for (int i = 0; i < 200; ++i) {
    SparseVector x = testing::random_sparse(rng, 45, 8);
    auto fast = scorer.scores(x);
    auto slow = decision_scores(m, x);
    for (std::size_t c = 0; c < kNumTags; ++c) EXPECT_EQ(fast[c], slow[kAllTags[c]]);
    EXPECT_EQ(scorer.predict(x), predict_class(m, x));
  }
}

TEST(BinaryModel, SupportVectorOrderDoesNotMatter) {
  std::mt19937_64 rng(37);
  auto ex = testing::random_problem(rng, 30, 20, 5);
  BinaryModel m = train_binary(ex, TrainParams{});
  BinaryModel r = m;
  std::reverse(r.support_vectors.begin(), r.support_vectors.end());
  std::reverse(r.alpha.begin(), r.alpha.end());
  std::reverse(r.labels.begin(), r.labels.end());
  for (const LabeledVector& e : ex) EXPECT_NEAR(m.decision(e.x), r.decision(e.x), 1e-12);
}

TEST(ModelFile, RoundTripIsExact) {
  std::mt19937_64 rng(41);
  std::vector<TaggedVector> ex;
  for (int i = 0; i < 100; ++i) ex.push_back({testing::random_sparse(rng, 30, 6), testing::random_tag(rng)});
  SvmModel m = train_multiclass(ex, TrainParams{});
  make_complete(m, 30);
  std::stringstream buf;
  write_model(m, buf);
  SvmModel back = read_model(buf);
  EXPECT_EQ(back, m);
  for (const TaggedVector& e : ex) {
    auto a = decision_scores(m, e.x);
    auto b = decision_scores(back, e.x);
    for (ModalityTag t : kAllTags) EXPECT_NEAR(a[t], b[t], 1e-12);
  }

  testing::TempDir dir;
  save_model(m, dir / "m.model");
  EXPECT_EQ(load_model(dir / "m.model"), m);
}

TEST(ModelFile, RejectsBadInput) {
  auto read = [](const std::string& text) {
    std::istringstream in(text);
    return read_model(in);
  };
  EXPECT_THROW(read("NOT-A-MODEL\n"), Error);
  EXPECT_THROW(read(""), Error);

  auto ex = three_class_toy();
  SvmModel m = train_multiclass(ex, TrainParams{});
  make_complete(m, 14);
  std::ostringstream out;
  write_model(m, out);
  std::string text = out.str();
  EXPECT_EQ(read(text), m);
  std::string future = text;
  future.replace(future.find("version 1"), 9, "version 999");
  EXPECT_THROW(read(future), Error);
  EXPECT_THROW(read(text.substr(0, text.size() / 2)), Error);
}

TEST(Training, Deterministic) {
  std::mt19937_64 rng(43);
  std::vector<TaggedVector> ex;
  for (int i = 0; i < 80; ++i) ex.push_back({testing::random_sparse(rng, 30, 6), testing::random_tag(rng)});
  std::ostringstream a, b;
  SvmModel first = train_multiclass(ex, TrainParams{});
  SvmModel second = train_multiclass(ex, TrainParams{});
  make_complete(first, 30);
  make_complete(second, 30);
  write_model(first, a);
  write_model(second, b);
  EXPECT_EQ(a.str(), b.str());
}

}  // namespace
}  // namespace modtag
