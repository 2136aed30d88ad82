// Licensed under the Apache License 2.0 (see LICENSE file).

#include "definetti/urn.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "json.hpp"

#include "definetti/error.hpp"
#include "definetti/parallel.hpp"
#include "definetti/special_functions.hpp"
#include "definetti/wasserstein.hpp"

namespace definetti {

// Replications are cut into fixed chunks; chunk c draws from its own
// mt19937_64 seeded with SplitMix64 outputs derived from (seed, c), so the
// histogram does not depend on the number of workers.
const char* const kGeneratorId = "mt19937_64/splitmix64-chunk-4096";

namespace {

constexpr std::int64_t kChunk = 4096;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
  std::uint64_t state = seed ^ (chunk * 0xD1B54A32D192ED03ULL);
  std::seed_seq seq{splitmix64(state), splitmix64(state), splitmix64(state), splitmix64(state)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

// Runs body(engine, begin, end) for each chunk and returns the per-chunk
// results in chunk order.
template <class Result, class Body>
std::vector<Result> by_chunks(std::int64_t replications, std::uint64_t seed, Body body) {
  const auto chunks = static_cast<std::size_t>((replications + kChunk - 1) / kChunk);
  std::vector<Result> out(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    std::mt19937_64 rng = chunk_engine(seed, c);
    const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
    const std::int64_t end = std::min(replications, begin + kChunk);
    out[c] = body(rng, end - begin);
  });
  return out;
}

std::vector<std::int64_t> merge(const std::vector<std::vector<std::int64_t>>& parts, std::size_t size) {
  std::vector<std::int64_t> total(size, 0);
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < size; ++i) total[i] += p[i];
  }
  return total;
}

// Sampler for theta ~ mu.
class MixingSampler {
 public:
  explicit MixingSampler(const MixingMeasure& mu) : mu_(mu) {
    double acc = 0.0;
    for (const Atom& a : mu.atoms()) {
      acc += a.mass;
      cumulative_.push_back(acc);
    }
    if (const ContinuousPart* c = mu.continuous()) {
      if (const auto* s = std::get_if<SmoothDensity>(c); s && !s->envelope) {
        throw InvalidArgument("simulate_exchangeable: smooth density has no rejection envelope");
      }
    }
  }

  double operator()(std::mt19937_64& rng) const {
    if (!cumulative_.empty()) {
      const double u = uniform01(rng);
      for (std::size_t i = 0; i < cumulative_.size(); ++i) {
        if (u < cumulative_[i]) return mu_.atoms()[i].location;
      }
      // Rounding in the cumulative sums: an atomic measure keeps the last atom.
      if (mu_.continuous() == nullptr) return mu_.atoms().back().location;
    }
    return std::visit([&](const auto& part) { return draw(part, rng); }, *mu_.continuous());
  }

 private:
  static double draw_beta(double alpha, double beta, std::mt19937_64& rng) {
    const double x = std::gamma_distribution<double>(alpha, 1.0)(rng);
    const double y = std::gamma_distribution<double>(beta, 1.0)(rng);
    if (x + y == 0.0) return alpha >= beta ? 1.0 : 0.0;
    return x / (x + y);
  }

  double draw(const BetaDensity& b, std::mt19937_64& rng) const { return draw_beta(b.alpha, b.beta, rng); }

  double draw(const PowerSpikeDensity& s, std::mt19937_64& rng) const {
    double u = 0.0;
    while (u == 0.0) u = uniform01(rng);
    const double theta = 0.5 + 0.25 * std::pow(u, 1.0 / s.gamma);
    // 1/2 + tiny rounds back to 1/2; keep the draw inside the open support.
    return theta > 0.5 ? theta : std::nextafter(0.5, 1.0);
  }

  double draw(const SmoothDensity& s, std::mt19937_64& rng) const {
    const RejectionEnvelope& env = *s.envelope;
    const double log_norm = log_beta_fn(env.proposal_alpha, env.proposal_beta);
    for (int attempt = 0; attempt < 1000000; ++attempt) {
      const double y = draw_beta(env.proposal_alpha, env.proposal_beta, rng);
      if (y <= s.support_lo() || y >= s.support_hi()) continue;
      const double q = std::exp((env.proposal_alpha - 1.0) * std::log(y) +
                                (env.proposal_beta - 1.0) * std::log1p(-y) - log_norm);
      if (uniform01(rng) * env.bound * q <= s.p(y)) return y;
    }
    throw IterationLimit("simulate_exchangeable: rejection sampler accepted nothing in 10^6 proposals");
  }

  const MixingMeasure& mu_;
  std::vector<double> cumulative_;
};

std::string urn_source(const UrnConfig& cfg) {
  nlohmann::json j{{"kind", "urn"}, {"A", cfg.A}, {"B", cfg.B}, {"m", cfg.m}, {"n", cfg.n}};
  return j.dump();
}

}  // namespace

void UrnConfig::validate() const {
  if (A < 1 || B < 1 || m < 1 || n < 1) throw InvalidArgument("UrnConfig: A, B, m and n must all be >= 1");
  if (replications < 1) throw InvalidArgument("UrnConfig: replications must be >= 1");
  constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
  if (n > kMax / m || n * m > kMax - A || n * m + A > kMax - B) {
    std::ostringstream os;
    os << "UrnConfig: ball count n*m + A + B overflows 64-bit integers (A=" << A << ", B=" << B << ", m=" << m
       << ", n=" << n << ")";
    throw OverflowError(os.str());
  }
  if (n > std::numeric_limits<int>::max() - 1) throw OverflowError("UrnConfig: n too large for a histogram");
}

std::vector<double> EmpiricalLaw::proportions() const {
  std::vector<double> p(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    p[k] = static_cast<double>(counts[k]) / static_cast<double>(replications);
  }
  return p;
}

EmpiricalLaw simulate_urn(const UrnConfig& cfg) {
  cfg.validate();
  const auto size = static_cast<std::size_t>(cfg.n) + 1;
  auto parts = by_chunks<std::vector<std::int64_t>>(cfg.replications, cfg.seed,
                                                    [&](std::mt19937_64& rng, std::int64_t reps) {
    std::vector<std::int64_t> hist(size, 0);
    for (std::int64_t r = 0; r < reps; ++r) {
      std::int64_t white = cfg.A;
      std::int64_t black = cfg.B;
      std::int64_t ones = 0;
      for (std::int64_t j = 0; j < cfg.n; ++j) {
        const double p = static_cast<double>(white) / static_cast<double>(white + black);
        if (uniform01(rng) < p) {
          white += cfg.m;
          ++ones;
        } else {
          black += cfg.m;
        }
      }
      ++hist[static_cast<std::size_t>(ones)];
    }
    return hist;
  });
  EmpiricalLaw out;
  out.n = static_cast<int>(cfg.n);
  out.counts = merge(parts, size);
  out.replications = cfg.replications;
  out.seed = cfg.seed;
  out.generator = kGeneratorId;
  out.source = urn_source(cfg);
  return out;
}

std::vector<std::int64_t> simulate_urn_patterns(const UrnConfig& cfg) {
  cfg.validate();
  if (cfg.n > 20) throw InvalidArgument("simulate_urn_patterns: n must be <= 20");
  const std::size_t size = std::size_t{1} << cfg.n;
  auto parts = by_chunks<std::vector<std::int64_t>>(cfg.replications, cfg.seed,
                                                    [&](std::mt19937_64& rng, std::int64_t reps) {
    std::vector<std::int64_t> hist(size, 0);
    for (std::int64_t r = 0; r < reps; ++r) {
      std::int64_t white = cfg.A;
      std::int64_t black = cfg.B;
      std::size_t pattern = 0;
      for (std::int64_t j = 0; j < cfg.n; ++j) {
        const double p = static_cast<double>(white) / static_cast<double>(white + black);
        if (uniform01(rng) < p) {
          white += cfg.m;
          pattern |= std::size_t{1} << j;
        } else {
          black += cfg.m;
        }
      }
      ++hist[pattern];
    }
    return hist;
  });
  return merge(parts, size);
}

std::vector<double> sample_mixing(const MixingMeasure& mu, std::int64_t count, std::uint64_t seed) {
  if (count < 1) throw InvalidArgument("sample_mixing: count must be >= 1");
  const MixingSampler sampler(mu);
  auto parts = by_chunks<std::vector<double>>(count, seed, [&](std::mt19937_64& rng, std::int64_t reps) {
    std::vector<double> out(static_cast<std::size_t>(reps));
    for (double& x : out) x = sampler(rng);
    return out;
  });
  std::vector<double> all;
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

EmpiricalLaw simulate_exchangeable(const MixingMeasure& mu, int n, std::int64_t replications,
                                   std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("simulate_exchangeable: n must be >= 1");
  if (replications < 1) throw InvalidArgument("simulate_exchangeable: replications must be >= 1");
  const MixingSampler sampler(mu);
  const auto size = static_cast<std::size_t>(n) + 1;
  auto parts = by_chunks<std::vector<std::int64_t>>(replications, seed,
                                                    [&](std::mt19937_64& rng, std::int64_t reps) {
    std::vector<std::int64_t> hist(size, 0);
    for (std::int64_t r = 0; r < reps; ++r) {
      const double theta = sampler(rng);
      ++hist[static_cast<std::size_t>(std::binomial_distribution<int>(n, theta)(rng))];
    }
    return hist;
  });
  EmpiricalLaw out;
  out.n = n;
  out.counts = merge(parts, size);
  out.replications = replications;
  out.seed = seed;
  out.generator = kGeneratorId;
  out.source = nlohmann::json{{"kind", "exchangeable"}, {"measure", nlohmann::json::parse(mu.to_json())},
                              {"n", n}}
                   .dump();
  return out;
}

double empirical_dw(const EmpiricalLaw& emp, const MixingMeasure& mu) {
  if (emp.replications < 1 || emp.counts.size() != static_cast<std::size_t>(emp.n) + 1) {
    throw InvalidArgument("empirical_dw: malformed empirical law");
  }
  return cell_distances(emp.proportions(), MeasureCdf(mu)).wasserstein;
}

double empirical_dw_standard_error(const EmpiricalLaw& emp, const MixingMeasure& mu, int resamples,
                                   std::uint64_t seed) {
  if (resamples < 2) throw InvalidArgument("empirical_dw_standard_error: need at least 2 resamples");
  const std::vector<double> p = emp.proportions();
  std::vector<double> values(static_cast<std::size_t>(resamples));
  parallel_for(values.size(), [&](std::size_t r) {
    std::mt19937_64 rng = chunk_engine(seed, r);
    // Multinomial draw as a chain of conditional binomials.
    std::vector<double> q(p.size(), 0.0);
    std::int64_t left = emp.replications;
    double mass = 1.0;
    for (std::size_t k = 0; k < p.size() && left > 0; ++k) {
      std::int64_t c = left;
      if (k + 1 < p.size()) {
        const double prob = mass > 0.0 ? std::clamp(p[k] / mass, 0.0, 1.0) : 1.0;
        c = std::binomial_distribution<std::int64_t>(left, prob)(rng);
      }
      q[k] = static_cast<double>(c) / static_cast<double>(emp.replications);
      left -= c;
      mass -= p[k];
    }
    values[r] = cell_distances(q, MeasureCdf(mu)).wasserstein;
  });
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= resamples;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (resamples - 1));
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InvalidArgument("total_variation: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::fabs(p[i] - q[i]);
  return 0.5 * s;
}

}  // namespace definetti
