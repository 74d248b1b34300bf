#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "beesim/config.hpp"
#include "beesim/genome.hpp"
#include "beesim/rng.hpp"
#include "beesim/trajectory.hpp"

namespace beesim {

// Evolution strategy over the 26 CPU1-adjacent weights: soft selection with
// p_i proportional to f_i^-8, weighted recombination of the mean, and a
// covariance built from the weighted outer products of the selected
// deviations (plus a small diagonal jitter for rank repair).

struct EsState {
  Eigen::VectorXd mean;  // 26
  Eigen::MatrixXd cov;   // 26 x 26, symmetric positive definite
  double sigma = 0.3;
  int generation = 0;
};

struct GenerationRecord {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  Genome mean_genome;
};

struct EsResult {
  std::vector<GenerationRecord> history;
  Genome final_mean;
  EsState final_state;
};

inline constexpr double kFitnessClamp = 1e-6;  // |f| floor before f^-8
inline constexpr double kCovJitter = 1e-8;     // rank-repair diagonal

// Fitness of one individual from its (typically 3) journeys: minus the mean
// over runs of (distance of the time-averaged looping position) plus (norm of
// the per-component looping position spread). Always <= 0; 0 only for an
// agent parked at the origin. Throws std::invalid_argument when a trajectory
// has no looping samples.
double fitness(std::span<const Trajectory> runs);

// p_i = |f_i|^-8 / sum_j |f_j|^-8, computed in log space; invariant under
// positive rescaling of the fitness vector.
Eigen::VectorXd selection_weights(std::span<const double> fitnesses,
                                  double clamp = kFitnessClamp);

Eigen::VectorXd recombine_mean(const Eigen::VectorXd& weights,
                               std::span<const Eigen::VectorXd> genomes);

Eigen::MatrixXd update_covariance(const Eigen::VectorXd& weights,
                                  std::span<const Eigen::VectorXd> genomes,
                                  const Eigen::VectorXd& mean,
                                  double jitter = kCovJitter);

// Draws n samples from N(mean, sigma * cov). On a factorization failure the
// covariance gets one jitter-and-retry; a second failure throws.
std::vector<Eigen::VectorXd> sample_population(const Eigen::VectorXd& mean,
                                               const Eigen::MatrixXd& cov,
                                               double sigma, int n,
                                               RngStream& rng);

// Evaluates one genome; journey seeds are shared across the generation's
// individuals. Returns the fitness.
using FitnessEvaluator = std::function<double(
    const Genome& genome, std::span<const std::uint64_t> journey_seeds)>;

// Full loop: population sampling, parallel evaluation (n_workers), soft
// selection, recombination, covariance update. Deterministic in
// (config, initial, master_seed), independent of n_workers.
EsResult evolve(const EsConfig& config, const FitnessEvaluator& evaluator,
                const Genome& initial, std::uint64_t master_seed,
                int n_workers = 1);

void write_history_csv(std::ostream& out,
                       std::span<const GenerationRecord> history);

}  // namespace beesim
