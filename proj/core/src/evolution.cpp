#include "beesim/evolution.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "beesim/thread_pool.hpp"

namespace beesim {

double fitness(std::span<const Trajectory> runs) {
  if (runs.empty()) throw std::invalid_argument("fitness: no runs");
  double acc = 0.0;
  for (const Trajectory& t : runs) {
    double sx = 0.0, sy = 0.0;
    long n = 0;
    for (const auto& s : t.samples) {
      if (s.phase != Phase::kLooping) continue;
      sx += s.x;
      sy += s.y;
      ++n;
    }
    if (n == 0)
      throw std::invalid_argument("fitness: trajectory has no looping phase");
    const double mx = sx / n, my = sy / n;
    double vx = 0.0, vy = 0.0;
    for (const auto& s : t.samples) {
      if (s.phase != Phase::kLooping) continue;
      vx += (s.x - mx) * (s.x - mx);
      vy += (s.y - my) * (s.y - my);
    }
    vx /= n;
    vy /= n;
    acc += std::hypot(mx, my) + std::hypot(std::sqrt(vx), std::sqrt(vy));
  }
  return -acc / static_cast<double>(runs.size());
}

Eigen::VectorXd selection_weights(std::span<const double> fitnesses,
                                  double clamp) {
  const int n = static_cast<int>(fitnesses.size());
  if (n == 0) throw std::invalid_argument("selection_weights: empty input");
  // log-space softmax of -8*log|f|; exact under rescaling and overflow-safe
  Eigen::VectorXd logp(n);
  for (int i = 0; i < n; ++i) {
    const double f = std::max(std::abs(fitnesses[i]), clamp);
    logp[i] = -8.0 * std::log(f);
  }
  const double m = logp.maxCoeff();
  Eigen::VectorXd p = (logp.array() - m).exp();
  p /= p.sum();
  return p;
}

Eigen::VectorXd recombine_mean(const Eigen::VectorXd& weights,
                               std::span<const Eigen::VectorXd> genomes) {
  if (static_cast<size_t>(weights.size()) != genomes.size())
    throw std::invalid_argument("recombine_mean: size mismatch");
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(genomes[0].size());
  for (size_t i = 0; i < genomes.size(); ++i)
    mean += weights[static_cast<int>(i)] * genomes[i];
  return mean;
}

Eigen::MatrixXd update_covariance(const Eigen::VectorXd& weights,
                                  std::span<const Eigen::VectorXd> genomes,
                                  const Eigen::VectorXd& mean, double jitter) {
  if (static_cast<size_t>(weights.size()) != genomes.size())
    throw std::invalid_argument("update_covariance: size mismatch");
  const long d = mean.size();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (size_t i = 0; i < genomes.size(); ++i) {
    const Eigen::VectorXd diff = genomes[i] - mean;
    cov.noalias() += weights[static_cast<int>(i)] * diff * diff.transpose();
  }
  cov.diagonal().array() += jitter;
  return cov;
}

std::vector<Eigen::VectorXd> sample_population(const Eigen::VectorXd& mean,
                                               const Eigen::MatrixXd& cov,
                                               double sigma, int n,
                                               RngStream& rng) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<size_t>(n));
  if (sigma == 0.0) {
    for (int i = 0; i < n; ++i) out.push_back(mean);
    return out;
  }
  Eigen::MatrixXd scaled = sigma * cov;
  Eigen::LLT<Eigen::MatrixXd> llt(scaled);
  if (llt.info() != Eigen::Success) {
    scaled.diagonal().array() += sigma * kCovJitter;
    llt.compute(scaled);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("sample_population: covariance not PD");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  Eigen::VectorXd z(mean.size());
  for (int i = 0; i < n; ++i) {
    for (long j = 0; j < z.size(); ++j) z[j] = rng.gaussian();
    out.push_back(mean + l * z);
  }
  return out;
}

EsResult evolve(const EsConfig& config, const FitnessEvaluator& evaluator,
                const Genome& initial, std::uint64_t master_seed,
                int n_workers) {
  const int lambda = config.population;
  const int dim = Genome::kSize;
  EsState state;
  {
    const auto flat = initial.flatten();
    state.mean = Eigen::Map<const Eigen::VectorXd>(flat.data(), dim);
  }
  state.cov = Eigen::MatrixXd::Identity(dim, dim);
  state.sigma = config.sigma;

  EsResult result;
  result.history.reserve(static_cast<size_t>(config.generations));

  for (int gen = 0; gen < config.generations; ++gen) {
    // fresh outbound seeds each generation, shared across individuals
    std::vector<std::uint64_t> seeds(
        static_cast<size_t>(config.runs_per_eval));
    for (int r = 0; r < config.runs_per_eval; ++r)
      seeds[static_cast<size_t>(r)] = derive_seed(
          master_seed, {kOutboundStream, static_cast<std::uint64_t>(gen),
                        static_cast<std::uint64_t>(r)});

    RngStream gen_rng(derive_seed(
        master_seed, {kEvolutionStream, static_cast<std::uint64_t>(gen)}));
    const std::vector<Eigen::VectorXd> population =
        sample_population(state.mean, state.cov, state.sigma, lambda, gen_rng);

    std::vector<double> fitnesses(static_cast<size_t>(lambda), 0.0);
    std::vector<Genome> genomes(static_cast<size_t>(lambda));
    for (int i = 0; i < lambda; ++i) {
      std::array<double, Genome::kSize> flat{};
      Eigen::Map<Eigen::VectorXd>(flat.data(), dim) = population[i];
      genomes[static_cast<size_t>(i)] = Genome::unflatten(flat);
    }
    parallel_for(lambda, n_workers, [&](int i) {
      fitnesses[static_cast<size_t>(i)] =
          evaluator(genomes[static_cast<size_t>(i)], seeds);
    });
    if (!std::all_of(fitnesses.begin(), fitnesses.end(),
                     [](double f) { return std::isfinite(f); }))
      throw std::runtime_error("evolve: evaluator returned non-finite fitness");

    const Eigen::VectorXd p = selection_weights(fitnesses);
    state.mean = recombine_mean(p, population);
    state.cov = update_covariance(p, population, state.mean);
    state.generation = gen + 1;

    GenerationRecord rec;
    rec.generation = gen;
    rec.best_fitness = *std::max_element(fitnesses.begin(), fitnesses.end());
    rec.mean_fitness = 0.0;
    for (double f : fitnesses) rec.mean_fitness += f;
    rec.mean_fitness /= lambda;
    std::array<double, Genome::kSize> flat{};
    Eigen::Map<Eigen::VectorXd>(flat.data(), dim) = state.mean;
    rec.mean_genome = Genome::unflatten(flat);
    result.history.push_back(std::move(rec));
  }
  result.final_mean = result.history.back().mean_genome;
  result.final_state = state;
  return result;
}

void write_history_csv(std::ostream& out,
                       std::span<const GenerationRecord> history) {
  out << "generation,best_fitness,mean_fitness\n";
  char buf[128];
  for (const auto& rec : history) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", rec.generation,
                  rec.best_fitness, rec.mean_fitness);
    out << buf;
  }
}

}  // namespace beesim
