#include "oinfo/gaussian_info.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <set>

#include "oinfo/combinatorics.hpp"
#include "oinfo/error.hpp"
#include "oinfo/rng.hpp"

namespace oinfo::gaussian {

namespace {

std::atomic<std::uint64_t> g_clamps{0};

// (1/2) ln(2 pi e)
const double kHalfLog2PiE = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);

double clamp_non_negative(double value, const char* what) {
  if (value >= 0.0) return value;
  if (value >= -kNonNegativeSlack) {
    g_clamps.fetch_add(1, std::memory_order_relaxed);
    return 0.0;
  }
  throw Error(ErrorCode::SingularSubmatrix,
              std::string(what) + " = " + std::to_string(value) + " is negative beyond numerical slack");
}

void require_size(const Subset& subset, std::size_t min_k, const char* what) {
  if (subset.size() < min_k)
    throw Error(ErrorCode::SubsetTooSmall, std::string(what) + " needs at least " + std::to_string(min_k) +
                                               " nodes, got " + std::to_string(subset.size()));
}

Eigen::MatrixXd block(const Eigen::MatrixXd& m, std::span<const std::size_t> positions) {
  const auto r = static_cast<Eigen::Index>(positions.size());
  Eigen::MatrixXd out(r, r);
  for (Eigen::Index a = 0; a < r; ++a)
    for (Eigen::Index b = 0; b < r; ++b)
      out(a, b) = m(static_cast<Eigen::Index>(positions[static_cast<std::size_t>(a)]),
                    static_cast<Eigen::Index>(positions[static_cast<std::size_t>(b)]));
  return out;
}

Eigen::MatrixXd drop_one(const Eigen::MatrixXd& m, Eigen::Index drop) {
  const Eigen::Index k = m.rows();
  Eigen::MatrixXd out(k - 1, k - 1);
  for (Eigen::Index a = 0, ra = 0; a < k; ++a) {
    if (a == drop) continue;
    for (Eigen::Index b = 0, rb = 0; b < k; ++b) {
      if (b == drop) continue;
      out(ra, rb++) = m(a, b);
    }
    ++ra;
  }
  return out;
}

// log det of the subset block and of each single-node deletion.
struct DeletionLogDets {
  double full = 0.0;
  std::vector<double> minus;
};

DeletionLogDets deletion_log_dets(const CorrelationMatrix& cov, const Subset& subset) {
  const Eigen::MatrixXd sub = cov.submatrix(subset);
  DeletionLogDets out;
  out.full = log_det_spd(sub);
  out.minus.reserve(subset.size());
  for (Eigen::Index i = 0; i < sub.rows(); ++i) out.minus.push_back(log_det_spd(drop_one(sub, i)));
  return out;
}

double entropy_from_log_det(std::size_t k, double log_det) {
  return static_cast<double>(k) * kHalfLog2PiE + 0.5 * log_det;
}

double dtc_from(const DeletionLogDets& ld, std::size_t k) {
  double sum_minus = 0.0;
  for (double m : ld.minus) sum_minus += entropy_from_log_det(k - 1, m);
  const double joint = entropy_from_log_det(k, ld.full);
  return clamp_non_negative((1.0 - static_cast<double>(k)) * joint + sum_minus, "dual total correlation");
}

double tc_from_log_det(double log_det) { return clamp_non_negative(-0.5 * log_det, "total correlation"); }

double entropy_of(const CorrelationMatrix& cov, std::initializer_list<std::size_t> nodes) {
  return joint_entropy(cov, Subset(nodes));
}

}  // namespace

std::uint64_t clamp_count() noexcept { return g_clamps.load(std::memory_order_relaxed); }

double entropy(double variance) {
  if (!(variance > 0.0))
    throw Error(ErrorCode::NonPositiveVariance, "variance must be positive, got " + std::to_string(variance));
  return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * variance);
}

double joint_entropy(const CorrelationMatrix& cov, const Subset& subset) {
  return entropy_from_log_det(subset.size(), log_det_spd(cov.submatrix(subset)));
}

double mutual_information(double rho) {
  if (!(std::abs(rho) < 1.0))
    throw Error(ErrorCode::PerfectCorrelation, "|rho| must be < 1, got " + std::to_string(rho));
  return -0.5 * std::log1p(-rho * rho);
}

double total_correlation(const CorrelationMatrix& cov, const Subset& subset) {
  if (subset.size() == 1) {
    subset.check_bounds(cov.dim());
    return 0.0;
  }
  return tc_from_log_det(log_det_spd(cov.submatrix(subset)));
}

double dual_total_correlation(const CorrelationMatrix& cov, const Subset& subset) {
  require_size(subset, 2, "dual total correlation");
  return dtc_from(deletion_log_dets(cov, subset), subset.size());
}

double o_information(const CorrelationMatrix& cov, const Subset& subset) {
  require_size(subset, 3, "O-information");
  const auto ld = deletion_log_dets(cov, subset);
  return tc_from_log_det(ld.full) - dtc_from(ld, subset.size());
}

double o_information_via_tc(const CorrelationMatrix& cov, const Subset& subset) {
  require_size(subset, 3, "O-information");
  const std::size_t k = subset.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += total_correlation(cov, subset.without_position(i));
  return (2.0 - static_cast<double>(k)) * total_correlation(cov, subset) + sum;
}

double s_information(const CorrelationMatrix& cov, const Subset& subset) {
  require_size(subset, 2, "S-information");
  const auto ld = deletion_log_dets(cov, subset);
  return tc_from_log_det(ld.full) + dtc_from(ld, subset.size());
}

double description_complexity(const CorrelationMatrix& cov, const Subset& subset) {
  require_size(subset, 2, "description complexity");
  const auto ld = deletion_log_dets(cov, subset);
  const double k = static_cast<double>(subset.size());
  const double tc = tc_from_log_det(ld.full);
  double mean_minus = 0.0;
  for (double m : ld.minus) mean_minus += tc_from_log_det(m);
  mean_minus /= k;
  return tc - tc / k - mean_minus;
}

double normalized_o_information(const CorrelationMatrix& cov, const Subset& subset) {
  return o_information(cov, subset) / static_cast<double>(subset.size());
}

double co_information_3(const CorrelationMatrix& cov, std::array<std::size_t, 3> nodes) {
  const auto [a, b, c] = nodes;
  const Subset all({a, b, c});  // rejects repeats
  all.check_bounds(cov.dim());
  const double mi_ab = entropy_of(cov, {a}) + entropy_of(cov, {b}) - entropy_of(cov, {a, b});
  const double cmi_ab_given_c =
      entropy_of(cov, {a, c}) + entropy_of(cov, {b, c}) - entropy_of(cov, {c}) - joint_entropy(cov, all);
  return mi_ab - cmi_ab_given_c;
}

double co_information_3(const CorrelationMatrix& cov, const Subset& subset) {
  if (subset.size() != 3)
    throw Error(ErrorCode::WrongArity, "co-information needs exactly 3 nodes, got " + std::to_string(subset.size()));
  return co_information_3(cov, std::array<std::size_t, 3>{subset[0], subset[1], subset[2]});
}

MeasureReport measure_report(const CorrelationMatrix& cov, const Subset& subset) {
  require_size(subset, 3, "measure report");
  const auto ld = deletion_log_dets(cov, subset);
  const std::size_t k = subset.size();
  const double kd = static_cast<double>(k);

  MeasureReport r{.subset = subset};
  r.joint_entropy = entropy_from_log_det(k, ld.full);
  r.total_correlation = tc_from_log_det(ld.full);
  r.dual_total_correlation = dtc_from(ld, k);
  r.o_information = r.total_correlation - r.dual_total_correlation;
  r.s_information = r.total_correlation + r.dual_total_correlation;
  double mean_minus = 0.0;
  for (double m : ld.minus) mean_minus += tc_from_log_det(m);
  mean_minus /= kd;
  r.description_complexity = r.total_correlation - r.total_correlation / kd - mean_minus;
  r.normalized_o = r.o_information / kd;
  return r;
}

namespace {

double mean_tc_exhaustive(const Eigen::MatrixXd& sub, std::size_t scale) {
  if (scale == 1) return 0.0;
  double sum = 0.0;
  std::uint64_t count = 0;
  for_each_combination(static_cast<std::size_t>(sub.rows()), scale, [&](std::span<const std::size_t> pos) {
    sum += tc_from_log_det(log_det_spd(block(sub, pos)));
    ++count;
  });
  return sum / static_cast<double>(count);
}

double mean_tc_sampled(const Eigen::MatrixXd& sub, std::size_t scale, std::size_t samples, Rng& rng) {
  const auto k = static_cast<std::size_t>(sub.rows());
  if (binomial_saturating(k, scale) <= samples) return mean_tc_exhaustive(sub, scale);
  if (scale == 1) return 0.0;
  std::set<std::vector<std::size_t>> seen;
  double sum = 0.0;
  while (seen.size() < samples) {
    auto pos = rng.sample_without_replacement(k, scale);
    std::sort(pos.begin(), pos.end());
    if (!seen.insert(pos).second) continue;
    sum += tc_from_log_det(log_det_spd(block(sub, pos)));
  }
  return sum / static_cast<double>(samples);
}

}  // namespace

TseResult tse_complexity(const CorrelationMatrix& cov, const Subset& subset, const TseOptions& options) {
  const std::size_t k = subset.size();
  if (options.mode == TseMode::Exact && k > options.exact_limit)
    throw Error(ErrorCode::ExactLimitExceeded, "exact TSE enumeration limited to " +
                                                   std::to_string(options.exact_limit) + " nodes, got " +
                                                   std::to_string(k) + "; use sampled mode");
  if (options.mode == TseMode::Sampled && options.samples_per_scale < 1)
    throw Error(ErrorCode::InvalidConfig, "sampled TSE needs samples_per_scale >= 1");

  const Eigen::MatrixXd sub = cov.submatrix(subset);
  const double tc = k == 1 ? 0.0 : tc_from_log_det(log_det_spd(sub));
  Rng rng(options.seed);

  TseResult result;
  result.mode = options.mode;
  result.samples_per_scale = options.mode == TseMode::Sampled ? options.samples_per_scale : 0;
  result.per_scale_deficit.reserve(k);
  for (std::size_t scale = 1; scale <= k; ++scale) {
    const double mean_tc = options.mode == TseMode::Exact
                               ? mean_tc_exhaustive(sub, scale)
                               : mean_tc_sampled(sub, scale, options.samples_per_scale, rng);
    const double deficit = static_cast<double>(scale) / static_cast<double>(k) * tc - mean_tc;
    result.per_scale_deficit.push_back(deficit);
    result.value += deficit;
  }
  return result;
}

double tse_bipartition_form(const CorrelationMatrix& cov, const Subset& subset, std::size_t exact_limit) {
  const std::size_t k = subset.size();
  if (k > exact_limit)
    throw Error(ErrorCode::ExactLimitExceeded,
                "bipartition enumeration limited to " + std::to_string(exact_limit) + " nodes, got " +
                    std::to_string(k));
  if (k == 1) {
    subset.check_bounds(cov.dim());
    return 0.0;
  }
  const Eigen::MatrixXd sub = cov.submatrix(subset);
  const double joint = entropy_from_log_det(k, log_det_spd(sub));
  std::vector<std::size_t> rest;
  rest.reserve(k);

  double total = 0.0;
  for (std::size_t scale = 1; scale <= k / 2; ++scale) {
    double sum = 0.0;
    std::uint64_t count = 0;
    for_each_combination(k, scale, [&](std::span<const std::size_t> pos) {
      rest.clear();
      for (std::size_t i = 0, next = 0; i < k; ++i) {
        if (next < pos.size() && pos[next] == i) {
          ++next;
          continue;
        }
        rest.push_back(i);
      }
      const double h_part = entropy_from_log_det(scale, log_det_spd(block(sub, pos)));
      const double h_rest = entropy_from_log_det(k - scale, log_det_spd(block(sub, rest)));
      sum += h_part + h_rest - joint;
      ++count;
    });
    const double weight = 2 * scale == k ? 0.5 : 1.0;
    total += weight * sum / static_cast<double>(count);
  }
  return total;
}

}  // namespace oinfo::gaussian
