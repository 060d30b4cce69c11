#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "semkit/deptree.hpp"
#include "semkit/sampler.hpp"

namespace semkit {

// Frequency-capped vocabulary of (upos_i, upos_j) buckets; everything else
// maps to a shared out-of-vocabulary bucket at index pairs.size().
class UposPairVocab {
 public:
  static UposPairVocab build(
      const std::vector<std::pair<std::string, std::string>>& observed,
      std::size_t cap);

  std::size_t bucket(const std::string& a, const std::string& b) const;
  std::size_t buckets() const { return pairs_.size() + 1; }
  const std::vector<std::pair<std::string, std::string>>& pairs() const {
    return pairs_;
  }

  nlohmann::json to_json() const;
  static UposPairVocab from_json(const nlohmann::json& j);

 private:
  std::vector<std::pair<std::string, std::string>> pairs_;
  std::map<std::pair<std::string, std::string>, std::size_t> index_;
};

// Layout: signed token offset, tree distance, direction bit, the two word
// lengths, then the upos-pair one-hot. The gold relation never appears.
constexpr std::size_t kBaseFeatureCount = 5;

Eigen::VectorXd featurize(const PairExample& ex, const DepTree& t,
                          const UposPairVocab& vocab);

struct LinearModel {
  std::vector<std::string> classes;
  Eigen::MatrixXd weights;  // classes x features
  Eigen::VectorXd bias;

  nlohmann::json to_json() const;
  static LinearModel from_json(const nlohmann::json& j);
};

struct TrainConfig {
  double lr = 0.1;
  std::size_t epochs = 50;
  std::size_t batch = 32;
  std::uint64_t seed = 0;
  double l2 = 1e-4;  // applied to weights, not biases
};

struct TrainOutput {
  LinearModel model;
  std::vector<double> epoch_loss;  // objective before training, then per epoch
};

// Mini-batch gradient descent on mean cross-entropy + (l2/2)||W||^2, zero
// initialized; the seed only drives batch shuffling.
TrainOutput train(const Eigen::MatrixXd& features,
                  const std::vector<std::string>& labels,
                  const TrainConfig& cfg);

struct Prediction {
  std::string label;
  Eigen::VectorXd probs;
};

// Row-wise softmax, shift-stabilized; every output row sums to one.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& scores);

Prediction predict(const LinearModel& m, const Eigen::VectorXd& fv);

double objective(const LinearModel& m, const Eigen::MatrixXd& features,
                 const std::vector<std::size_t>& class_ids, double l2);
void gradients(const LinearModel& m, const Eigen::MatrixXd& features,
               const std::vector<std::size_t>& class_ids, double l2,
               Eigen::MatrixXd* grad_weights, Eigen::VectorXd* grad_bias);

// Central-difference check over every parameter; returns the worst
// |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
double grad_check(const LinearModel& m, const Eigen::MatrixXd& features,
                  const std::vector<std::string>& labels, double epsilon,
                  double l2 = 1e-4);

}  // namespace semkit
