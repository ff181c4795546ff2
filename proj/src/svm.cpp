#include "svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "errors.hpp"

namespace pdclass {

namespace {

constexpr double kAlphaEps = 1e-12;

bool non_bound(double alpha, double box) {
  return alpha > kAlphaEps && alpha < box - kAlphaEps;
}

}  // namespace

const char* kernel_name(KernelKind kind) {
  return kind == KernelKind::Rbf ? "rbf" : "linear";
}

KernelKind parse_kernel(const std::string& name) {
  if (name == "rbf") return KernelKind::Rbf;
  if (name == "linear") return KernelKind::Linear;
  throw ValidationError("unknown kernel '" + name + "'");
}

double kernel_value(std::span<const double> a, std::span<const double> b,
                    KernelKind kind, double gamma) {
  if (kind == KernelKind::Linear) {
    double dot = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) dot += a[j] * b[j];
    return dot;
  }
  double dist_sq = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    dist_sq += d * d;
  }
  return std::exp(-gamma * dist_sq);
}

Matrix kernel_matrix(const Matrix& x, KernelKind kind, double gamma) {
  const std::size_t n = x.rows();
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = kernel_value(x.row(i), x.row(j), kind, gamma);
      k.at(i, j) = v;
      k.at(j, i) = v;
    }
  }
  return k;
}

std::vector<double> fuzzy_weights(const Matrix& x, const std::vector<int>& y) {
  if (y.size() != x.rows()) {
    throw ValidationError("label count does not match row count");
  }
  const std::size_t d = x.cols();
  std::array<std::vector<double>, kNumClasses> centroid;
  std::array<std::size_t, kNumClasses> counts{};
  for (auto& c : centroid) c.assign(d, 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    counts[y[i]]++;
    auto row = x.row(i);
    for (std::size_t j = 0; j < d; ++j) centroid[y[i]][j] += row[j];
  }
  for (int k = 0; k < kNumClasses; ++k) {
    if (counts[k] == 0) continue;
    for (double& v : centroid[k]) v /= static_cast<double>(counts[k]);
  }

  std::vector<double> dist(x.rows());
  std::array<double, kNumClasses> radius{};
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto row = x.row(i);
    double sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double delta = row[j] - centroid[y[i]][j];
      sq += delta * delta;
    }
    dist[i] = std::sqrt(sq);
    radius[y[i]] = std::max(radius[y[i]], dist[i]);
  }

  std::vector<double> weights(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    weights[i] = 1.0 - dist[i] / (radius[y[i]] + 1e-6);
  }
  return weights;
}

SmoResult solve_smo(const Matrix& kmat, const std::vector<int>& y,
                    const std::vector<double>& box, double tolerance,
                    std::size_t max_steps, Rng& rng) {
  const std::size_t n = y.size();
  if (kmat.rows() != n || kmat.cols() != n || box.size() != n) {
    throw ValidationError("smo input sizes do not match");
  }

  std::vector<double> alpha(n, 0.0);
  double bias = 0.0;
  std::vector<double> err(n);  // decision(i) - y[i]
  for (std::size_t i = 0; i < n; ++i) err[i] = -y[i];
  std::size_t steps = 0;

  auto kkt_violations = [&] {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = err[i] * y[i];
      if ((r < -tolerance && alpha[i] < box[i] - kAlphaEps) ||
          (r > tolerance && alpha[i] > kAlphaEps)) {
        count++;
      }
    }
    return count;
  };

  auto take_step = [&](std::size_t i1, std::size_t i2) -> bool {
    if (i1 == i2) return false;
    const double a1 = alpha[i1];
    const double a2 = alpha[i2];
    const int y1 = y[i1];
    const int y2 = y[i2];
    const double e1 = err[i1];
    const double e2 = err[i2];
    const double s = y1 * y2;

    double lo, hi;
    if (y1 != y2) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(box[i2], box[i1] + a2 - a1);
    } else {
      lo = std::max(0.0, a1 + a2 - box[i1]);
      hi = std::min(box[i2], a1 + a2);
    }
    if (hi - lo < kAlphaEps) return false;

    const double k11 = kmat.at(i1, i1);
    const double k12 = kmat.at(i1, i2);
    const double k22 = kmat.at(i2, i2);
    const double eta = k11 + k22 - 2.0 * k12;

    double a2_new;
    if (eta > kAlphaEps) {
      a2_new = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
    } else {
      // Flat direction: evaluate the dual objective at both clip bounds.
      const double f1 = y1 * (e1 + y1 - bias) - a1 * k11 - s * a2 * k12;
      const double f2 = y2 * (e2 + y2 - bias) - s * a1 * k12 - a2 * k22;
      const double l1 = a1 + s * (a2 - lo);
      const double h1 = a1 + s * (a2 - hi);
      const double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 +
                            0.5 * lo * lo * k22 + s * lo * l1 * k12;
      const double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 +
                            0.5 * hi * hi * k22 + s * hi * h1 * k12;
      if (obj_lo < obj_hi - kAlphaEps) {
        a2_new = lo;
      } else if (obj_lo > obj_hi + kAlphaEps) {
        a2_new = hi;
      } else {
        return false;
      }
    }
    if (std::abs(a2_new - a2) < 1e-8 * (a2_new + a2 + 1e-8)) return false;

    double a1_new = a1 + s * (a2 - a2_new);
    if (a1_new < 0.0) {
      a2_new += s * a1_new;
      a1_new = 0.0;
    } else if (a1_new > box[i1]) {
      a2_new += s * (a1_new - box[i1]);
      a1_new = box[i1];
    }

    const double d1 = y1 * (a1_new - a1);
    const double d2 = y2 * (a2_new - a2);
    const double b1 = bias - e1 - d1 * k11 - d2 * k12;
    const double b2 = bias - e2 - d1 * k12 - d2 * k22;
    double bias_new;
    if (non_bound(a1_new, box[i1])) {
      bias_new = b1;
    } else if (non_bound(a2_new, box[i2])) {
      bias_new = b2;
    } else {
      bias_new = 0.5 * (b1 + b2);
    }

    const double bias_delta = bias_new - bias;
    for (std::size_t i = 0; i < n; ++i) {
      err[i] += d1 * kmat.at(i1, i) + d2 * kmat.at(i2, i) + bias_delta;
    }
    alpha[i1] = a1_new;
    alpha[i2] = a2_new;
    bias = bias_new;

    if (++steps > max_steps) {
      char msg[160];
      std::snprintf(msg, sizeof(msg),
                    "smo exceeded %zu alpha updates; %zu of %zu samples still "
                    "violate kkt conditions beyond tolerance %g",
                    max_steps, kkt_violations(), n, tolerance);
      throw NumericError(msg);
    }
    return true;
  };

  auto examine = [&](std::size_t i2) -> bool {
    const double a2 = alpha[i2];
    const double r2 = err[i2] * y[i2];
    const bool violates = (r2 < -tolerance && a2 < box[i2] - kAlphaEps) ||
                          (r2 > tolerance && a2 > kAlphaEps);
    if (!violates) return false;

    // Second-choice heuristic: largest |e1 - e2| among non-bound samples.
    std::size_t best = n;
    double best_gap = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!non_bound(alpha[i], box[i])) continue;
      const double gap = std::abs(err[i] - err[i2]);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best < n && take_step(best, i2)) return true;

    std::size_t start = rng.below(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = (start + k) % n;
      if (non_bound(alpha[i], box[i]) && take_step(i, i2)) return true;
    }
    start = rng.below(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = (start + k) % n;
      if (take_step(i, i2)) return true;
    }
    return false;
  };

  std::size_t num_changed = 0;
  bool examine_all = true;
  while (num_changed > 0 || examine_all) {
    num_changed = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (examine_all || non_bound(alpha[i], box[i])) {
        num_changed += examine(i) ? 1 : 0;
      }
    }
    if (examine_all) {
      examine_all = false;
    } else if (num_changed == 0) {
      examine_all = true;
    }
  }

  return {std::move(alpha), bias, steps};
}

std::pair<double, double> fit_platt_sigmoid(std::span<const double> decision,
                                            std::span<const int> y) {
  const std::size_t n = decision.size();
  double prior1 = 0.0;
  for (int v : y) prior1 += v > 0 ? 1.0 : 0.0;
  const double prior0 = static_cast<double>(n) - prior1;

  const double hi_target = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo_target = 1.0 / (prior0 + 2.0);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = y[i] > 0 ? hi_target : lo_target;
  }

  double a = 0.0;
  double b = std::log((prior0 + 1.0) / (prior1 + 1.0));

  auto objective = [&](double pa, double pb) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double fapb = decision[i] * pa + pb;
      if (fapb >= 0.0) {
        total += t[i] * fapb + std::log1p(std::exp(-fapb));
      } else {
        total += (t[i] - 1.0) * fapb + std::log1p(std::exp(fapb));
      }
    }
    return total;
  };

  double fval = objective(a, b);
  constexpr int kMaxIter = 100;
  constexpr double kMinStep = 1e-10;
  constexpr double kSigma = 1e-12;

  for (int iter = 0; iter < kMaxIter; ++iter) {
    double h11 = kSigma, h22 = kSigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double fapb = decision[i] * a + b;
      double p, q;
      if (fapb >= 0.0) {
        const double e = std::exp(-fapb);
        p = e / (1.0 + e);
        q = 1.0 / (1.0 + e);
      } else {
        const double e = std::exp(fapb);
        p = 1.0 / (1.0 + e);
        q = e / (1.0 + e);
      }
      const double d2 = p * q;
      h11 += decision[i] * decision[i] * d2;
      h22 += d2;
      h21 += decision[i] * d2;
      const double d1 = t[i] - p;
      g1 += decision[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < 1e-5 && std::abs(g2) < 1e-5) break;

    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;

    double stepsize = 1.0;
    while (stepsize >= kMinStep) {
      const double na = a + stepsize * da;
      const double nb = b + stepsize * db;
      const double newf = objective(na, nb);
      if (newf < fval + 1e-4 * stepsize * gd) {
        a = na;
        b = nb;
        fval = newf;
        break;
      }
      stepsize *= 0.5;
    }
    if (stepsize < kMinStep) break;
  }
  return {a, b};
}

double platt_probability(double decision, double a, double b) {
  const double fapb = decision * a + b;
  if (fapb >= 0.0) {
    const double e = std::exp(-fapb);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(fapb));
}

void SupportVectorMachine::fit(const Matrix& x, const std::vector<int>& y,
                               std::uint64_t seed) {
  if (x.rows() == 0) throw ValidationError("training data is empty");
  if (y.size() != x.rows()) {
    throw ValidationError("label count does not match row count");
  }
  if (std::set<int>(y.begin(), y.end()).size() < 2) {
    throw ValidationError("training data contains a single class");
  }
  scaler_.fit(x);
  const Matrix z = scaler_.transform(x);
  std::vector<double> weights;
  if (config_.fuzzy) {
    weights = fuzzy_weights(z, y);
  } else {
    weights.assign(x.rows(), 1.0);
  }
  fit_internal(z, y, seed, weights);
}

void SupportVectorMachine::fit_weighted(const Matrix& x,
                                        const std::vector<int>& y,
                                        std::uint64_t seed,
                                        const std::vector<double>& weights) {
  if (x.rows() == 0) throw ValidationError("training data is empty");
  if (y.size() != x.rows() || weights.size() != x.rows()) {
    throw ValidationError("label or weight count does not match row count");
  }
  for (double w : weights) {
    if (!(w > 0.0) || w > 1.0) {
      throw ValidationError("sample weights must lie in (0, 1]");
    }
  }
  if (std::set<int>(y.begin(), y.end()).size() < 2) {
    throw ValidationError("training data contains a single class");
  }
  scaler_.fit(x);
  fit_internal(scaler_.transform(x), y, seed, weights);
}

void SupportVectorMachine::fit_internal(const Matrix& z,
                                        const std::vector<int>& y,
                                        std::uint64_t seed,
                                        const std::vector<double>& weights) {
  if (config_.c <= 0.0) throw ValidationError("svm c must be positive");
  if (config_.gamma < 0.0) throw ValidationError("svm gamma must be >= 0");
  if (config_.tolerance <= 0.0) {
    throw ValidationError("svm tolerance must be positive");
  }

  if (config_.gamma > 0.0) {
    gamma_ = config_.gamma;
  } else {
    double mean = 0.0;
    for (double v : z.data()) mean += v;
    mean /= static_cast<double>(z.data().size());
    double var = 0.0;
    for (double v : z.data()) var += (v - mean) * (v - mean);
    var /= static_cast<double>(z.data().size());
    gamma_ = var > 1e-12 ? 1.0 / (static_cast<double>(z.cols()) * var)
                         : 1.0 / static_cast<double>(z.cols());
  }

  const std::size_t n = z.rows();
  const Matrix kmat = kernel_matrix(z, config_.kernel, gamma_);
  std::vector<double> box(n);
  for (std::size_t i = 0; i < n; ++i) box[i] = config_.c * weights[i];

  for (int k = 0; k < kNumClasses; ++k) {
    binaries_[k] = SvmBinary{};
    bool has_positive = false;
    std::vector<int> by(n);
    for (std::size_t i = 0; i < n; ++i) {
      by[i] = y[i] == k ? 1 : -1;
      has_positive |= by[i] == 1;
    }
    if (!has_positive) continue;

    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    SmoResult solution;
    try {
      solution = solve_smo(kmat, by, box, config_.tolerance,
                           config_.max_steps, rng);
    } catch (const NumericError& e) {
      throw NumericError(std::string("one-vs-rest binary for class '") +
                         label_name(static_cast<PdLabel>(k)) + "': " +
                         e.what());
    }

    std::vector<std::size_t> sv_idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (solution.alpha[i] > 1e-10) sv_idx.push_back(i);
    }
    SvmBinary& binary = binaries_[k];
    binary.present = true;
    binary.support_vectors = z.take_rows(sv_idx);
    binary.coef.resize(sv_idx.size());
    for (std::size_t j = 0; j < sv_idx.size(); ++j) {
      binary.coef[j] = solution.alpha[sv_idx[j]] * by[sv_idx[j]];
    }
    binary.bias = solution.bias;

    std::vector<double> decision(n, solution.bias);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < sv_idx.size(); ++j) {
        decision[i] += binary.coef[j] * kmat.at(i, sv_idx[j]);
      }
    }
    auto [pa, pb] = fit_platt_sigmoid(decision, by);
    binary.platt_a = pa;
    binary.platt_b = pb;
  }
  fitted_ = true;
}

Matrix SupportVectorMachine::decision_values(const Matrix& x) const {
  if (!fitted_) throw ValidationError("model is not fitted");
  const Matrix z = scaler_.transform(x);
  Matrix out(x.rows(), kNumClasses);
  for (int k = 0; k < kNumClasses; ++k) {
    const SvmBinary& binary = binaries_[k];
    if (!binary.present) continue;
    for (std::size_t r = 0; r < z.rows(); ++r) {
      double f = binary.bias;
      for (std::size_t j = 0; j < binary.support_vectors.rows(); ++j) {
        f += binary.coef[j] * kernel_value(binary.support_vectors.row(j),
                                           z.row(r), config_.kernel, gamma_);
      }
      out.at(r, k) = f;
    }
  }
  return out;
}

Matrix SupportVectorMachine::predict_proba(const Matrix& x) const {
  const Matrix decision = decision_values(x);
  Matrix proba(x.rows(), kNumClasses);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double total = 0.0;
    for (int k = 0; k < kNumClasses; ++k) {
      const SvmBinary& binary = binaries_[k];
      const double p = binary.present
                           ? platt_probability(decision.at(r, k),
                                               binary.platt_a, binary.platt_b)
                           : 0.0;
      proba.at(r, k) = p;
      total += p;
    }
    for (int k = 0; k < kNumClasses; ++k) proba.at(r, k) /= total;
  }
  return proba;
}

void SupportVectorMachine::set_state(Standardizer scaler, double gamma,
                                     std::array<SvmBinary, kNumClasses>
                                         binaries) {
  scaler_ = std::move(scaler);
  gamma_ = gamma;
  binaries_ = std::move(binaries);
  fitted_ = true;
}

}  // namespace pdclass
