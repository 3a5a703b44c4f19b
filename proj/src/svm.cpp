#include "modtag/svm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <list>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "modtag/io.hpp"

namespace modtag {

void KernelParams::validate() const {
  if (degree < 1) throw Error("kernel degree must be >= 1");
  if (!std::isfinite(scale) || !std::isfinite(offset))
    throw Error("kernel scale and offset must be finite");
}

double KernelParams::apply(double ip) const {
  if (kind == KernelKind::kLinear) return ip;
  double base = scale * ip + offset;
  double out = 1.0;
  for (int d = 0; d < degree; ++d) out *= base;
  return out;
}

double kernel_eval(const SparseVector& x, const SparseVector& y,
                   const KernelParams& params) {
  return params.apply(dot(x, y));
}

void TrainParams::validate() const {
  if (!(C > 0.0) || !std::isfinite(C)) throw Error("C must be a positive finite number");
  if (!(kkt_tolerance > 0.0)) throw Error("kkt_tolerance must be > 0");
  if (max_iterations < 1) throw Error("max_iterations must be >= 1");
  kernel.validate();
}

namespace {

// Inverted index from feature to the examples containing it; rows of
// inner products are accumulated over postings.
struct Postings {
  std::vector<std::vector<std::uint32_t>> by_feature;
  std::vector<const SparseVector*> xs;

  explicit Postings(std::vector<const SparseVector*> vectors) : xs(std::move(vectors)) {
    std::uint32_t max_index = 0;
    bool any = false;
    for (const SparseVector* x : xs) {
      if (!x->indices.empty()) {
        max_index = std::max(max_index, x->indices.back());
        any = true;
      }
    }
    by_feature.resize(any ? max_index + 1 : 0);
    for (std::uint32_t i = 0; i < xs.size(); ++i) {
      for (std::uint32_t f : xs[i]->indices) by_feature[f].push_back(i);
    }
  }
};

// Kernel rows K(x_i, .) with a size-bounded LRU cache. Not thread safe.
class KernelMatrix {
 public:
  KernelMatrix(std::shared_ptr<const Postings> postings, KernelParams kernel,
               std::size_t cache_bytes)
      : postings_(std::move(postings)), kernel_(kernel) {
    const std::size_t n = postings_->xs.size();
    std::size_t row_bytes = std::max<std::size_t>(1, n * sizeof(double));
    capacity_ = std::max<std::size_t>(2, cache_bytes / row_bytes);
    counts_.assign(n, 0);
    diag_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      diag_[i] = kernel_.apply(static_cast<double>(postings_->xs[i]->nnz()));
  }

  std::size_t size() const { return diag_.size(); }
  double diag(std::size_t i) const { return diag_[i]; }

  // The pointer stays valid until two further distinct rows are requested.
  const double* row(std::size_t i) {
    if (auto it = rows_.find(i); it != rows_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second.first);
      return it->second.second.data();
    }
    if (rows_.size() >= capacity_) {
      std::size_t victim = lru_.back();
      lru_.pop_back();
      rows_.erase(victim);
    }
    lru_.push_front(i);
    auto& entry = rows_[i];
    entry.first = lru_.begin();
    entry.second = compute_row(i);
    return entry.second.data();
  }

 private:
  std::vector<double> compute_row(std::size_t i) {
    const std::size_t n = size();
    std::fill(counts_.begin(), counts_.end(), 0u);
    for (std::uint32_t f : postings_->xs[i]->indices) {
      for (std::uint32_t t : postings_->by_feature[f]) ++counts_[t];
    }
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t)
      out[t] = kernel_.apply(static_cast<double>(counts_[t]));
    return out;
  }

  std::shared_ptr<const Postings> postings_;
  KernelParams kernel_;
  std::size_t capacity_;
  std::vector<std::uint32_t> counts_;
  std::vector<double> diag_;
  std::list<std::size_t> lru_;
  std::unordered_map<std::size_t, std::pair<std::list<std::size_t>::iterator,
                                            std::vector<double>>> rows_;
};

constexpr double kTau = 1e-12;

// Dual: min 1/2 a'Qa - e'a  s.t. y'a = 0, 0 <= a_i <= upper_i, with
// Q_ij = y_i y_j K_ij. Working pair = maximal violating pair.
DualSolution smo(KernelMatrix& kernel, std::span<const int> y,
                 std::span<const double> upper, const TrainParams& params) {
  const std::size_t n = y.size();
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);
  const double eps = 0.5 * params.kkt_tolerance;

  auto in_up = [&](std::size_t t) {
    return y[t] > 0 ? alpha[t] < upper[t] : alpha[t] > 0.0;
  };
  auto in_low = [&](std::size_t t) {
    return y[t] > 0 ? alpha[t] > 0.0 : alpha[t] < upper[t];
  };

  DualSolution sol;
  long iter = 0;
  while (iter < params.max_iterations) {
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    std::size_t i = n, j = n;
    for (std::size_t t = 0; t < n; ++t) {
      double v = -y[t] * grad[t];
      if (in_up(t) && v > gmax) {
        gmax = v;
        i = t;
      }
      if (in_low(t) && v < gmin) {
        gmin = v;
        j = t;
      }
    }
    if (i == n || j == n || gmax - gmin < eps) {
      sol.converged = true;
      break;
    }
    ++iter;

    const double* ki = kernel.row(i);
    const double* kj = kernel.row(j);
    const double ci = upper[i];
    const double cj = upper[j];
    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    const double qij = y[i] * y[j] * ki[j];

    if (y[i] != y[j]) {
      double quad = kernel.diag(i) + kernel.diag(j) + 2.0 * qij;
      if (quad <= 0) quad = kTau;
      double delta = (-grad[i] - grad[j]) / quad;
      double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > ci - cj) {
        if (alpha[i] > ci) {
          alpha[i] = ci;
          alpha[j] = ci - diff;
        }
      } else if (alpha[j] > cj) {
        alpha[j] = cj;
        alpha[i] = cj + diff;
      }
    } else {
      double quad = kernel.diag(i) + kernel.diag(j) - 2.0 * qij;
      if (quad <= 0) quad = kTau;
      double delta = (grad[i] - grad[j]) / quad;
      double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > ci) {
        if (alpha[i] > ci) {
          alpha[i] = ci;
          alpha[j] = sum - ci;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > cj) {
        if (alpha[j] > cj) {
          alpha[j] = cj;
          alpha[i] = sum - cj;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }

    const double di = alpha[i] - old_ai;
    const double dj = alpha[j] - old_aj;
    // ki may have been evicted by the second row() call only if the cache
    // held fewer than two rows, which the constructor rules out.
    for (std::size_t t = 0; t < n; ++t)
      grad[t] += y[t] * (y[i] * ki[t] * di + y[j] * kj[t] * dj);
  }
  sol.iterations = iter;

  // Bias: mean over free vectors, else the midpoint of the feasible range.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    double yg = y[t] * grad[t];
    if (alpha[t] >= upper[t]) {
      if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
  sol.bias = -rho;

  double obj = 0.0;
  for (std::size_t t = 0; t < n; ++t) obj += alpha[t] * (1.0 - grad[t]);
  sol.dual_objective = 0.5 * obj;
  sol.alpha = std::move(alpha);
  return sol;
}

std::vector<double> box_bounds(std::span<const double> costs, std::size_t n, double C) {
  std::vector<double> upper(n, C);
  if (costs.empty()) return upper;
  if (costs.size() != n) throw Error("cost vector length does not match examples");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(costs[i] > 0.0) || !std::isfinite(costs[i]))
      throw Error("instance costs must be positive and finite");
    upper[i] = costs[i] * C;
  }
  return upper;
}

}  // namespace

DualSolution solve_dual(std::span<const LabeledVector> examples,
                        std::span<const double> costs, const TrainParams& params) {
  params.validate();
  if (examples.empty()) throw Error("cannot train on zero examples");
  bool pos = false, neg = false;
  std::vector<int> y(examples.size());
  std::vector<const SparseVector*> xs(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    int label = examples[i].label;
    if (label != 1 && label != -1) throw Error("binary labels must be -1 or +1");
    pos |= label > 0;
    neg |= label < 0;
    y[i] = label;
    xs[i] = &examples[i].x;
  }
  if (!pos || !neg) throw Error("binary training needs both labels present");
  std::vector<double> upper = box_bounds(costs, examples.size(), params.C);
  KernelMatrix kernel(std::make_shared<Postings>(std::move(xs)), params.kernel,
                      params.cache_megabytes << 20);
  return smo(kernel, y, upper, params);
}

double BinaryModel::decision(const SparseVector& x) const {
  if (degenerate) return -std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (std::size_t i = 0; i < support_vectors.size(); ++i)
    s += alpha[i] * labels[i] * kernel_eval(support_vectors[i], x, kernel);
  return s + bias;
}

BinaryModel compact_model(std::span<const LabeledVector> examples,
                          const DualSolution& solution, const KernelParams& kernel) {
  BinaryModel model;
  model.kernel = kernel;
  model.bias = solution.bias;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (solution.alpha[i] > 0.0) {
      model.support_vectors.push_back(examples[i].x);
      model.alpha.push_back(solution.alpha[i]);
      model.labels.push_back(static_cast<std::int8_t>(examples[i].label));
    }
  }
  return model;
}

BinaryModel train_binary(std::span<const LabeledVector> examples,
                         const TrainParams& params, std::span<const double> costs) {
  DualSolution sol = solve_dual(examples, costs, params);
  return compact_model(examples, sol, params.kernel);
}

SvmModel train_multiclass(std::span<const TaggedVector> examples,
                          const TrainParams& params, std::span<const double> costs) {
  params.validate();
  std::array<std::size_t, kNumTags> counts{};
  for (const TaggedVector& e : examples) ++counts[tag_index(e.tag)];
  std::size_t distinct = 0;
  for (std::size_t c : counts) distinct += c > 0 ? 1 : 0;
  if (distinct < 2) throw Error("multiclass training needs at least two classes");

  const std::size_t n = examples.size();
  std::vector<double> upper = box_bounds(costs, n, params.C);
  std::vector<const SparseVector*> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = &examples[i].x;
  auto postings = std::make_shared<const Postings>(std::move(xs));

  SvmModel model;
  model.C = params.C;
  model.classes.assign(kAllTags.begin(), kAllTags.end());
  model.models.resize(kNumTags);

  std::vector<ModalityTag> to_train;
  for (ModalityTag t : kAllTags) {
    if (counts[tag_index(t)] == 0) {
      model.models[tag_index(t)].degenerate = true;
      model.models[tag_index(t)].kernel = params.kernel;
    } else {
      to_train.push_back(t);
    }
  }

  auto train_one = [&](ModalityTag tag, KernelMatrix& kernel) {
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = examples[i].tag == tag ? 1 : -1;
    DualSolution sol = smo(kernel, y, upper, params);
    BinaryModel& m = model.models[tag_index(tag)];
    m.kernel = params.kernel;
    m.bias = sol.bias;
    for (std::size_t i = 0; i < n; ++i) {
      if (sol.alpha[i] > 0.0) {
        m.support_vectors.push_back(examples[i].x);
        m.alpha.push_back(sol.alpha[i]);
        m.labels.push_back(static_cast<std::int8_t>(y[i]));
      }
    }
  };

  const std::size_t cache_bytes = params.cache_megabytes << 20;
  const int jobs = std::max(1, std::min<int>(params.jobs, static_cast<int>(to_train.size())));
  if (jobs == 1) {
    // One cache shared by all subproblems: the kernel does not depend on
    // the labels.
    KernelMatrix kernel(postings, params.kernel, cache_bytes);
    for (ModalityTag t : to_train) train_one(t, kernel);
  } else {
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        KernelMatrix kernel(postings, params.kernel, cache_bytes / static_cast<std::size_t>(jobs));
        for (std::size_t k = static_cast<std::size_t>(w); k < to_train.size();
             k += static_cast<std::size_t>(jobs))
          train_one(to_train[k], kernel);
      });
    }
    for (std::thread& t : workers) t.join();
  }
  return model;
}

std::map<ModalityTag, double> decision_scores(const SvmModel& model,
                                              const SparseVector& x) {
  std::map<ModalityTag, double> out;
  for (std::size_t k = 0; k < model.classes.size(); ++k)
    out[model.classes[k]] = model.models[k].decision(x);
  return out;
}

ModalityTag predict_class(const SvmModel& model, const SparseVector& x) {
  ModalityTag best = model.classes.front();
  double best_score = -std::numeric_limits<double>::infinity();
  bool first = true;
  for (std::size_t k = 0; k < model.classes.size(); ++k) {
    double s = model.models[k].decision(x);
    if (first || s > best_score) {
      best = model.classes[k];
      best_score = s;
      first = false;
    }
  }
  return best;
}

SvmScorer::SvmScorer(const SvmModel& model) : model_(&model) {
  classes_.resize(model.classes.size());
  for (std::size_t k = 0; k < model.classes.size(); ++k) {
    const BinaryModel& m = model.models[k];
    ClassIndex& c = classes_[k];
    c.degenerate = m.degenerate;
    c.bias = m.bias;
    for (std::size_t i = 0; i < m.support_vectors.size(); ++i) {
      c.coef.push_back(m.alpha[i] * m.labels[i]);
      for (std::uint32_t f : m.support_vectors[i].indices) {
        if (f >= c.postings.size()) c.postings.resize(f + 1);
        c.postings[f].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }
}

std::array<double, kNumTags> SvmScorer::scores(const SparseVector& x) const {
  std::array<double, kNumTags> out{};
  std::vector<std::uint32_t> counts;
  for (std::size_t k = 0; k < classes_.size(); ++k) {
    const ClassIndex& c = classes_[k];
    const BinaryModel& m = model_->models[k];
    if (c.degenerate) {
      out[k] = -std::numeric_limits<double>::infinity();
      continue;
    }
    counts.assign(c.coef.size(), 0u);
    for (std::uint32_t f : x.indices) {
      if (f < c.postings.size()) {
        for (std::uint32_t i : c.postings[f]) ++counts[i];
      }
    }
    double s = 0.0;
    for (std::size_t i = 0; i < c.coef.size(); ++i)
      s += c.coef[i] * m.kernel.apply(static_cast<double>(counts[i]));
    out[k] = s + c.bias;
  }
  return out;
}

ModalityTag SvmScorer::predict(const SparseVector& x) const {
  std::array<double, kNumTags> s = scores(x);
  std::size_t best = 0;
  for (std::size_t k = 1; k < classes_.size(); ++k) {
    if (s[k] > s[best]) best = k;
  }
  return model_->classes[best];
}

// ---------------------------------------------------------------------------
// Model file.
//
//   MODTAG-SVM-MODEL
//   version 1
//   features <template,...>
//   context_width <w>
//   dynamic_tags <0|1>
//   kernel <linear|polynomial> <degree> <scale> <offset>
//   C <value>
//   vocabulary <n>            followed by n feature strings, one per line
//   lemmas <n>                followed by n "word<TAB>prefix<TAB>lemma" lines
//   classes <k>
//   class <Tag> degenerate
//   class <Tag> bias <b> support <m>
//                             followed by m "<+1|-1> <alpha> <idx> <idx> ..."
//   end
//
// Reals are written as C99 hexadecimal floats so reading back is exact.

namespace {

std::string hex(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::hex);
  return std::string(buf, p);
}

class ModelReader {
 public:
  explicit ModelReader(std::istream& in) : in_(in) {}

  std::string line() {
    std::string s;
    if (!std::getline(in_, s)) throw Error("truncated model file (line " + std::to_string(line_no_ + 1) + ")");
    ++line_no_;
    return s;
  }

  // Reads "<key> <rest>" and returns the rest.
  std::string keyed(std::string_view key) {
    std::string s = line();
    if (s.size() <= key.size() || s.compare(0, key.size(), key) != 0 || s[key.size()] != ' ')
      fail("expected '" + std::string(key) + "'");
    return s.substr(key.size() + 1);
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error("malformed model file at line " + std::to_string(line_no_) + ": " + what);
  }

  double real(std::string_view s) const {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::hex);
    if (ec != std::errc() || p != s.data() + s.size()) fail("bad number '" + std::string(s) + "'");
    return v;
  }

  long integer(std::string_view s) const {
    long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) fail("bad integer '" + std::string(s) + "'");
    return v;
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

void write_model(const SvmModel& model, std::ostream& out) {
  const KernelParams& k = model.models.empty() ? KernelParams{} : model.models.front().kernel;
  out << kModelMagic << '\n';
  out << "version " << kModelFormatVersion << '\n';
  out << "features " << model.config.templates_string() << '\n';
  out << "context_width " << model.config.context_width << '\n';
  out << "dynamic_tags " << (model.config.use_dynamic_tags ? 1 : 0) << '\n';
  out << "kernel " << (k.kind == KernelKind::kLinear ? "linear" : "polynomial") << ' '
      << k.degree << ' ' << hex(k.scale) << ' ' << hex(k.offset) << '\n';
  out << "C " << hex(model.C) << '\n';
  out << "vocabulary " << model.vocabulary.size() << '\n';
  for (const std::string& s : model.vocabulary.strings()) out << s << '\n';
  out << "lemmas " << model.lemmas.entries().size() << '\n';
  for (const auto& e : model.lemmas.entries())
    out << e.word << '\t' << e.pos_prefix << '\t' << e.lemma << '\n';
  out << "classes " << model.classes.size() << '\n';
  for (std::size_t c = 0; c < model.classes.size(); ++c) {
    const BinaryModel& m = model.models[c];
    out << "class " << to_string(model.classes[c]);
    if (m.degenerate) {
      out << " degenerate\n";
      continue;
    }
    out << " bias " << hex(m.bias) << " support " << m.support_vectors.size() << '\n';
    for (std::size_t i = 0; i < m.support_vectors.size(); ++i) {
      out << (m.labels[i] > 0 ? "+1" : "-1") << ' ' << hex(m.alpha[i]);
      for (std::uint32_t idx : m.support_vectors[i].indices) out << ' ' << idx;
      out << '\n';
    }
  }
  out << "end\n";
}

SvmModel read_model(std::istream& in) {
  ModelReader r(in);
  std::string magic;
  try {
    magic = r.line();
  } catch (const Error&) {
    throw Error("not a model file (bad magic)");
  }
  if (magic != kModelMagic) throw Error("not a model file (bad magic)");
  long version = r.integer(r.keyed("version"));
  if (version != kModelFormatVersion)
    throw Error("unsupported model format version " + std::to_string(version) +
                " (this build reads version " + std::to_string(kModelFormatVersion) + ")");

  SvmModel model;
  std::string templates = r.keyed("features");
  int width = static_cast<int>(r.integer(r.keyed("context_width")));
  long dynamic = r.integer(r.keyed("dynamic_tags"));
  if (dynamic != 0 && dynamic != 1) r.fail("dynamic_tags must be 0 or 1");
  try {
    model.config = parse_feature_config(templates, width, dynamic == 1);
  } catch (const Error& e) {
    r.fail(e.what());
  }

  KernelParams kernel;
  {
    const std::string line = r.keyed("kernel");
    auto parts = split(line, ' ');
    if (parts.size() != 4) r.fail("kernel line needs 4 fields");
    if (parts[0] == "linear") {
      kernel.kind = KernelKind::kLinear;
    } else if (parts[0] == "polynomial") {
      kernel.kind = KernelKind::kPolynomial;
    } else {
      r.fail("unknown kernel '" + std::string(parts[0]) + "'");
    }
    kernel.degree = static_cast<int>(r.integer(parts[1]));
    kernel.scale = r.real(parts[2]);
    kernel.offset = r.real(parts[3]);
    try {
      kernel.validate();
    } catch (const Error& e) {
      r.fail(e.what());
    }
  }
  model.C = r.real(r.keyed("C"));

  long vocab_size = r.integer(r.keyed("vocabulary"));
  if (vocab_size < 0) r.fail("negative vocabulary size");
  std::vector<std::string> strings;
  strings.reserve(static_cast<std::size_t>(vocab_size));
  for (long i = 0; i < vocab_size; ++i) strings.push_back(r.line());
  try {
    model.vocabulary = FeatureVocabulary::from_strings(std::move(strings));
  } catch (const Error& e) {
    r.fail(e.what());
  }

  long lemma_count = r.integer(r.keyed("lemmas"));
  if (lemma_count < 0) r.fail("negative lemma count");
  std::vector<LemmaTable::Entry> lemmas;
  for (long i = 0; i < lemma_count; ++i) {
    std::string s = r.line();
    auto cols = split(s, '\t');
    if (cols.size() != 3) r.fail("lemma entry needs 3 columns");
    lemmas.push_back({std::string(cols[0]), std::string(cols[1]), std::string(cols[2])});
  }
  model.lemmas = LemmaTable(std::move(lemmas));

  long class_count = r.integer(r.keyed("classes"));
  if (class_count != static_cast<long>(kNumTags)) r.fail("expected 6 classes");
  for (long c = 0; c < class_count; ++c) {
    const std::string line = r.keyed("class");
    auto parts = split(line, ' ');
    auto tag = parts.empty() ? std::nullopt : parse_tag(parts[0]);
    if (!tag || *tag != kAllTags[static_cast<std::size_t>(c)])
      r.fail("classes out of canonical order");
    BinaryModel m;
    m.kernel = kernel;
    if (parts.size() == 2 && parts[1] == "degenerate") {
      m.degenerate = true;
    } else {
      if (parts.size() != 5 || parts[1] != "bias" || parts[3] != "support")
        r.fail("bad class header");
      m.bias = r.real(parts[2]);
      long sv_count = r.integer(parts[4]);
      if (sv_count < 0) r.fail("negative support count");
      for (long i = 0; i < sv_count; ++i) {
        std::string s = r.line();
        auto fields = split(s, ' ');
        if (fields.size() < 2) r.fail("bad support vector line");
        if (fields[0] == "+1") {
          m.labels.push_back(1);
        } else if (fields[0] == "-1") {
          m.labels.push_back(-1);
        } else {
          r.fail("bad support vector label");
        }
        m.alpha.push_back(r.real(fields[1]));
        SparseVector x;
        for (std::size_t f = 2; f < fields.size(); ++f) {
          long idx = r.integer(fields[f]);
          if (idx < 0 || idx >= vocab_size) r.fail("feature index out of range");
          if (!x.indices.empty() && static_cast<std::uint32_t>(idx) <= x.indices.back())
            r.fail("feature indices not strictly increasing");
          x.indices.push_back(static_cast<std::uint32_t>(idx));
        }
        m.support_vectors.push_back(std::move(x));
      }
    }
    model.classes.push_back(*tag);
    model.models.push_back(std::move(m));
  }
  if (r.line() != "end") r.fail("expected 'end'");
  return model;
}

void save_model(const SvmModel& model, const std::filesystem::path& path) {
  std::ostringstream ss;
  write_model(model, ss);
  write_file_atomic(path, ss.str());
}

SvmModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model " + path.string());
  return read_model(in);
}

}  // namespace modtag
