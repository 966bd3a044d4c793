#include "oinfo/subset_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "oinfo/error.hpp"

namespace oinfo::search {

namespace {

// Stream tags keep the seed families of different procedures apart.
constexpr std::uint64_t kSampleStream = 0x53414d50;      // "SAMP"
constexpr std::uint64_t kStratifiedStream = 0x53545241;  // "STRA"

void check_sizes(const CorrelationMatrix& cov, std::size_t k) {
  if (k < 3) throw Error(ErrorCode::SubsetTooSmall, "subset size must be at least 3, got " + std::to_string(k));
  if (k > cov.dim())
    throw Error(ErrorCode::SubsetTooLarge, "subset size " + std::to_string(k) + " exceeds matrix dimension " +
                                               std::to_string(cov.dim()));
}

}  // namespace

Subset random_subset(std::size_t n, std::size_t k, Rng& rng) { return Subset(rng.sample_without_replacement(n, k)); }

std::vector<SampleRecord> sample_random_subsets(const CorrelationMatrix& cov, std::size_t k, std::size_t n_samples,
                                                std::uint64_t master_seed, const Execution& exec) {
  check_sizes(cov, k);
  if (n_samples < 1) throw Error(ErrorCode::InvalidConfig, "need at least one sample");
  std::vector<std::optional<SampleRecord>> slots(n_samples);
  parallel_for(n_samples, exec, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(master_seed, kSampleStream ^ (std::uint64_t{k} << 32), i);
    Rng rng(seed);
    slots[i] = SampleRecord{i, seed, gaussian::measure_report(cov, random_subset(cov.dim(), k, rng))};
  });
  std::vector<SampleRecord> out;
  out.reserve(n_samples);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

BigInt extrapolate_count(std::uint64_t n, std::uint64_t k, const BigInt& numerator, const BigInt& denominator) {
  if (denominator <= 0) throw Error(ErrorCode::InvalidConfig, "denominator must be positive");
  const BigInt scaled = binomial(n, k) * numerator;
  return (2 * scaled + denominator) / (2 * denominator);
}

NegativeFraction fraction_negative(std::span<const SampleRecord> records, std::size_t n_nodes) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no records to summarize");
  const std::size_t k = records.front().subset().size();
  NegativeFraction out;
  for (const auto& r : records) {
    if (r.subset().size() != k) throw Error(ErrorCode::ShapeMismatch, "records mix subset sizes");
    if (r.measures.o_information < 0.0) ++out.negatives;
  }
  out.total = records.size();
  out.fraction = static_cast<double>(out.negatives) / static_cast<double>(out.total);
  out.standard_error = std::sqrt(out.fraction * (1.0 - out.fraction) / static_cast<double>(out.total));
  out.population = binomial(n_nodes, k);
  out.extrapolated_count = extrapolate_count(n_nodes, k, out.negatives, out.total);
  return out;
}

std::string_view to_string(Measure m) noexcept {
  switch (m) {
    case Measure::OInformation: return "o_information";
    case Measure::TotalCorrelation: return "total_correlation";
    case Measure::DualTotalCorrelation: return "dual_total_correlation";
    case Measure::SInformation: return "s_information";
    case Measure::DescriptionComplexity: return "description_complexity";
    case Measure::NormalizedO: return "normalized_o";
    case Measure::JointEntropy: return "joint_entropy";
  }
  return "unknown";
}

Measure parse_measure(std::string_view name) {
  for (Measure m : {Measure::OInformation, Measure::TotalCorrelation, Measure::DualTotalCorrelation,
                    Measure::SInformation, Measure::DescriptionComplexity, Measure::NormalizedO,
                    Measure::JointEntropy})
    if (name == to_string(m)) return m;
  if (name == "o" || name == "oi") return Measure::OInformation;
  if (name == "tc") return Measure::TotalCorrelation;
  if (name == "dtc") return Measure::DualTotalCorrelation;
  if (name == "s") return Measure::SInformation;
  if (name == "c") return Measure::DescriptionComplexity;
  throw Error(ErrorCode::InvalidConfig, "unknown measure '" + std::string(name) + "'");
}

double measure_value(const MeasureReport& r, Measure m) noexcept {
  switch (m) {
    case Measure::OInformation: return r.o_information;
    case Measure::TotalCorrelation: return r.total_correlation;
    case Measure::DualTotalCorrelation: return r.dual_total_correlation;
    case Measure::SInformation: return r.s_information;
    case Measure::DescriptionComplexity: return r.description_complexity;
    case Measure::NormalizedO: return r.normalized_o;
    case Measure::JointEntropy: return r.joint_entropy;
  }
  return 0.0;
}

double evaluate(const CorrelationMatrix& cov, const Subset& subset, Measure m) {
  switch (m) {
    case Measure::OInformation: return gaussian::o_information(cov, subset);
    case Measure::TotalCorrelation: return gaussian::total_correlation(cov, subset);
    case Measure::DualTotalCorrelation: return gaussian::dual_total_correlation(cov, subset);
    case Measure::SInformation: return gaussian::s_information(cov, subset);
    case Measure::DescriptionComplexity: return gaussian::description_complexity(cov, subset);
    case Measure::NormalizedO: return gaussian::normalized_o_information(cov, subset);
    case Measure::JointEntropy: return gaussian::joint_entropy(cov, subset);
  }
  return 0.0;
}

void AnnealConfig::validate() const {
  if (subset_size < 3) throw Error(ErrorCode::SubsetTooSmall, "annealing needs subset size >= 3");
  if (steps < 1) throw Error(ErrorCode::InvalidConfig, "steps must be >= 1");
  if (!(t0 >= 0.0) || !std::isfinite(t0)) throw Error(ErrorCode::InvalidConfig, "t0 must be finite and >= 0");
  if (!(t_exp > 0.0 && t_exp < 1.0)) throw Error(ErrorCode::InvalidConfig, "t_exp must lie in (0, 1)");
  for (double p : flip_probs)
    if (!(p > 0.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidConfig, "flip probabilities must be positive");
}

std::array<double, 3> AnnealConfig::normalized_flip_probs() const {
  const double total = flip_probs[0] + flip_probs[1] + flip_probs[2];
  return {flip_probs[0] / total, flip_probs[1] / total, flip_probs[2] / total};
}

double AnnealConfig::temperature(std::size_t step) const { return t0 * std::pow(t_exp, static_cast<double>(step)); }

AnnealRun anneal(const CorrelationMatrix& cov, const AnnealConfig& config) {
  config.validate();
  const std::size_t n = cov.dim();
  const std::size_t k = config.subset_size;
  check_sizes(cov, k);

  const double sign = config.objective.direction == Direction::Minimize ? 1.0 : -1.0;
  constexpr double kRejected = std::numeric_limits<double>::infinity();
  std::size_t singular = 0;
  auto cost_of = [&](const Subset& s) {
    try {
      return sign * evaluate(cov, s, config.objective.measure);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularSubmatrix) throw;
      ++singular;
      return kRejected;
    }
  };

  Rng rng(config.seed);
  const auto probs = config.normalized_flip_probs();

  std::vector<std::size_t> current(rng.sample_without_replacement(n, k));
  std::sort(current.begin(), current.end());
  double current_cost = cost_of(Subset(current));

  AnnealRun run;
  run.config = config;
  run.best_subset = Subset(current);
  double best_cost = current_cost;
  if (config.record_trajectory) run.trajectory.reserve(config.steps);

  std::vector<std::size_t> outside;
  outside.reserve(n);
  for (std::size_t step = 0; step < config.steps; ++step) {
    const double temperature = config.temperature(step);
    if (n > k) {
      std::size_t flips = 0;
      do {
        flips = 1 + rng.discrete(probs);
      } while (flips > k || flips > n - k);

      outside.clear();
      for (std::size_t node = 0, pos = 0; node < n; ++node) {
        if (pos < k && current[pos] == node)
          ++pos;
        else
          outside.push_back(node);
      }
      std::vector<std::size_t> proposal = current;
      const auto leaving = rng.sample_without_replacement(k, flips);
      const auto entering = rng.sample_without_replacement(outside.size(), flips);
      for (std::size_t f = 0; f < flips; ++f) proposal[leaving[f]] = outside[entering[f]];
      std::sort(proposal.begin(), proposal.end());

      const double proposed_cost = cost_of(Subset(proposal));
      bool accept = false;
      if (proposed_cost == kRejected) {
        accept = false;
      } else if (proposed_cost <= current_cost) {
        accept = true;
      } else if (temperature > 0.0) {
        accept = rng.uniform() < std::exp(-(proposed_cost - current_cost) / temperature);
      }
      if (accept) {
        current = std::move(proposal);
        current_cost = proposed_cost;
        ++run.accepted_moves;
        if (current_cost < best_cost) {
          best_cost = current_cost;
          run.best_subset = Subset(current);
          run.best_step = step + 1;
        }
      }
    }
    if (config.record_trajectory) run.trajectory.push_back({step + 1, sign * current_cost, temperature});
  }
  if (best_cost == kRejected)
    throw Error(ErrorCode::SingularSubmatrix, "every visited subset had a singular submatrix");
  run.best_value = sign * best_cost;
  run.singular_proposals = singular;
  return run;
}

std::vector<SweepLevel> anneal_sweep(const CorrelationMatrix& cov, std::span<const std::size_t> subset_sizes,
                                     std::size_t runs_per_k, const AnnealConfig& config_template,
                                     const Execution& exec) {
  if (runs_per_k < 1) throw Error(ErrorCode::InvalidConfig, "runs_per_k must be >= 1");
  for (std::size_t k : subset_sizes) check_sizes(cov, k);

  const std::size_t levels = subset_sizes.size();
  std::vector<std::optional<AnnealRun>> slots(levels * runs_per_k);
  parallel_for(slots.size(), exec, [&](std::size_t task) {
    const std::size_t level = task / runs_per_k;
    const std::size_t run_index = task % runs_per_k;
    AnnealConfig cfg = config_template;
    cfg.subset_size = subset_sizes[level];
    cfg.seed = derive_seed(config_template.seed, cfg.subset_size, run_index);
    slots[task] = anneal(cov, cfg);
  });

  const bool minimize = config_template.objective.direction == Direction::Minimize;
  std::vector<SweepLevel> out;
  out.reserve(levels);
  for (std::size_t level = 0; level < levels; ++level) {
    SweepLevel sl;
    sl.subset_size = subset_sizes[level];
    std::set<Subset> unique;
    double sum = 0.0;
    for (std::size_t r = 0; r < runs_per_k; ++r) {
      AnnealRun run = std::move(*slots[level * runs_per_k + r]);
      sum += run.best_value;
      if (r == 0 || (minimize ? run.best_value < sl.best_overall : run.best_value > sl.best_overall))
        sl.best_overall = run.best_value;
      unique.insert(run.best_subset);
      sl.runs.push_back(std::move(run));
    }
    sl.mean_best = sum / static_cast<double>(runs_per_k);
    sl.unique_best_subsets = unique.size();
    out.push_back(std::move(sl));
  }
  return out;
}

std::vector<SampleRecord> sample_stratified_by_systems(const CorrelationMatrix& cov, const data::NodeLabels& labels,
                                                       std::size_t k, std::size_t n_samples,
                                                       std::size_t systems_count, std::uint64_t master_seed,
                                                       const Execution& exec) {
  check_sizes(cov, k);
  if (labels.system_of.size() != cov.dim())
    throw Error(ErrorCode::LabelMismatch, "labels cover " + std::to_string(labels.system_of.size()) +
                                              " nodes, matrix has " + std::to_string(cov.dim()));
  if (systems_count < 1 || systems_count > labels.system_count())
    throw Error(ErrorCode::InvalidConfig, "systems count must lie in [1, " +
                                              std::to_string(labels.system_count()) + "]");
  if (k < systems_count)
    throw Error(ErrorCode::InvalidConfig, "subset size must be at least the number of systems");
  if (n_samples < 1) throw Error(ErrorCode::InvalidConfig, "need at least one sample");

  const auto members = labels.members();
  std::vector<std::size_t> sizes;
  for (const auto& m : members) sizes.push_back(m.size());
  std::vector<std::size_t> ascending = sizes;
  std::sort(ascending.begin(), ascending.end());
  std::size_t smallest_capacity = 0;
  for (std::size_t i = 0; i < systems_count; ++i) smallest_capacity += ascending[i];
  if (smallest_capacity < k)
    throw Error(ErrorCode::InfeasibleStratum, "the " + std::to_string(systems_count) +
                                                  " smallest systems hold only " + std::to_string(smallest_capacity) +
                                                  " nodes, fewer than k = " + std::to_string(k));

  std::vector<std::optional<SampleRecord>> slots(n_samples);
  const std::uint64_t stream = kStratifiedStream ^ (std::uint64_t{k} << 32) ^ (std::uint64_t{systems_count} << 48);
  parallel_for(n_samples, exec, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(master_seed, stream, i);
    Rng rng(seed);
    const auto chosen = rng.sample_without_replacement(labels.system_count(), systems_count);
    std::vector<std::size_t> parts;
    while (true) {
      auto cuts = rng.sample_without_replacement(k - 1, systems_count - 1);
      std::sort(cuts.begin(), cuts.end());
      parts.clear();
      std::size_t prev = 0;
      for (std::size_t c : cuts) {
        parts.push_back(c + 1 - prev);
        prev = c + 1;
      }
      parts.push_back(k - prev);
      bool fits = true;
      for (std::size_t j = 0; j < systems_count; ++j) fits = fits && parts[j] <= sizes[chosen[j]];
      if (fits) break;
    }
    std::vector<std::size_t> nodes;
    nodes.reserve(k);
    for (std::size_t j = 0; j < systems_count; ++j) {
      const auto& pool = members[chosen[j]];
      for (std::size_t pos : rng.sample_without_replacement(pool.size(), parts[j])) nodes.push_back(pool[pos]);
    }
    slots[i] = SampleRecord{i, seed, gaussian::measure_report(cov, Subset(std::move(nodes)))};
  });
  std::vector<SampleRecord> out;
  out.reserve(n_samples);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace oinfo::search
