#include "semkit/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "semkit/errors.hpp"
#include "semkit/rng.hpp"

namespace semkit {

UposPairVocab UposPairVocab::build(
    const std::vector<std::pair<std::string, std::string>>& observed,
    std::size_t cap) {
  std::map<std::pair<std::string, std::string>, std::size_t> counts;
  for (const auto& pair : observed) ++counts[pair];
  std::vector<std::pair<std::pair<std::string, std::string>, std::size_t>>
      ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  UposPairVocab vocab;
  for (const auto& [pair, count] : ranked) {
    if (vocab.pairs_.size() >= cap) break;
    vocab.index_[pair] = vocab.pairs_.size();
    vocab.pairs_.push_back(pair);
  }
  return vocab;
}

std::size_t UposPairVocab::bucket(const std::string& a,
                                  const std::string& b) const {
  auto it = index_.find({a, b});
  return it == index_.end() ? pairs_.size() : it->second;
}

nlohmann::json UposPairVocab::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [a, b] : pairs_) j.push_back({a, b});
  return j;
}

UposPairVocab UposPairVocab::from_json(const nlohmann::json& j) {
  UposPairVocab vocab;
  for (const auto& entry : j) {
    std::pair<std::string, std::string> pair{entry.at(0).get<std::string>(),
                                             entry.at(1).get<std::string>()};
    vocab.index_[pair] = vocab.pairs_.size();
    vocab.pairs_.push_back(pair);
  }
  return vocab;
}

namespace {

std::size_t token_at(const DepTree& t, const CharSpan& span) {
  for (const Token& tok : t.tokens())
    if (tok.span == span) return tok.index;
  throw ValidationError("example span does not match any token of its tree");
}

}  // namespace

Eigen::VectorXd featurize(const PairExample& ex, const DepTree& t,
                          const UposPairVocab& vocab) {
  std::size_t i = token_at(t, ex.span_i);
  std::size_t j = token_at(t, ex.span_j);
  if (i == j) throw ValidationError("example pairs a token with itself");
  Eigen::VectorXd fv =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(kBaseFeatureCount +
                                                      vocab.buckets()));
  fv(0) = static_cast<double>(j) - static_cast<double>(i);
  fv(1) = static_cast<double>(tree_distance(t, i, j));
  fv(2) = t.token(i).head == j ? 1.0 : 0.0;
  fv(3) = static_cast<double>(ex.span_i.length());
  fv(4) = static_cast<double>(ex.span_j.length());
  std::size_t bucket = vocab.bucket(t.token(i).upos, t.token(j).upos);
  fv(static_cast<Eigen::Index>(kBaseFeatureCount + bucket)) = 1.0;
  return fv;
}

nlohmann::json LinearModel::to_json() const {
  nlohmann::json j;
  j["classes"] = classes;
  j["features"] = weights.cols();
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(weights.size()));
  for (Eigen::Index r = 0; r < weights.rows(); ++r)
    for (Eigen::Index c = 0; c < weights.cols(); ++c) w.push_back(weights(r, c));
  j["weights"] = w;
  std::vector<double> b(bias.data(), bias.data() + bias.size());
  j["bias"] = b;
  return j;
}

LinearModel LinearModel::from_json(const nlohmann::json& j) {
  LinearModel m;
  m.classes = j.at("classes").get<std::vector<std::string>>();
  Eigen::Index features = j.at("features").get<Eigen::Index>();
  Eigen::Index rows = static_cast<Eigen::Index>(m.classes.size());
  auto w = j.at("weights").get<std::vector<double>>();
  auto b = j.at("bias").get<std::vector<double>>();
  if (w.size() != static_cast<std::size_t>(rows * features) ||
      b.size() != static_cast<std::size_t>(rows))
    throw ValidationError("model dimensions inconsistent with class list");
  m.weights.resize(rows, features);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < features; ++c)
      m.weights(r, c) = w[static_cast<std::size_t>(r * features + c)];
  m.bias = Eigen::Map<Eigen::VectorXd>(b.data(), rows);
  return m;
}

// Row-wise softmax, shift-stabilized.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& scores) {
  Eigen::MatrixXd shifted =
      scores.colwise() - scores.rowwise().maxCoeff();
  Eigen::MatrixXd expd = shifted.array().exp();
  return expd.array().colwise() / expd.rowwise().sum().array();
}

namespace {

std::vector<std::size_t> to_class_ids(const std::vector<std::string>& labels,
                                      const std::vector<std::string>& classes) {
  std::vector<std::size_t> ids;
  ids.reserve(labels.size());
  for (const std::string& label : labels) {
    auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end())
      throw ValidationError("label '" + label + "' missing from class list");
    ids.push_back(static_cast<std::size_t>(it - classes.begin()));
  }
  return ids;
}

}  // namespace

double objective(const LinearModel& m, const Eigen::MatrixXd& features,
                 const std::vector<std::size_t>& class_ids, double l2) {
  if (features.rows() == 0) throw ValidationError("empty batch");
  Eigen::MatrixXd scores =
      (features * m.weights.transpose()).rowwise() + m.bias.transpose();
  Eigen::MatrixXd shifted = scores.colwise() - scores.rowwise().maxCoeff();
  Eigen::VectorXd logsum = shifted.array().exp().rowwise().sum().log();
  double loss = 0.0;
  for (Eigen::Index r = 0; r < features.rows(); ++r)
    loss += logsum(r) - shifted(r, static_cast<Eigen::Index>(
                                       class_ids[static_cast<std::size_t>(r)]));
  loss /= static_cast<double>(features.rows());
  return loss + 0.5 * l2 * m.weights.squaredNorm();
}

void gradients(const LinearModel& m, const Eigen::MatrixXd& features,
               const std::vector<std::size_t>& class_ids, double l2,
               Eigen::MatrixXd* grad_weights, Eigen::VectorXd* grad_bias) {
  Eigen::MatrixXd scores =
      (features * m.weights.transpose()).rowwise() + m.bias.transpose();
  Eigen::MatrixXd probs = softmax_rows(scores);
  for (Eigen::Index r = 0; r < features.rows(); ++r)
    probs(r, static_cast<Eigen::Index>(class_ids[static_cast<std::size_t>(r)])) -=
        1.0;
  double scale = 1.0 / static_cast<double>(features.rows());
  *grad_weights = scale * probs.transpose() * features + l2 * m.weights;
  *grad_bias = scale * probs.colwise().sum().transpose();
}

TrainOutput train(const Eigen::MatrixXd& features,
                  const std::vector<std::string>& labels,
                  const TrainConfig& cfg) {
  if (static_cast<std::size_t>(features.rows()) != labels.size())
    throw ValidationError("feature rows and labels differ in length");
  if (labels.empty()) throw ValidationError("no training examples");
  if (cfg.lr <= 0.0) throw ValidationError("learning rate must be positive");
  if (cfg.batch == 0) throw ValidationError("batch size must be positive");
  std::set<std::string> distinct(labels.begin(), labels.end());
  if (distinct.size() < 2)
    throw ValidationError("training needs at least two classes");

  TrainOutput out;
  out.model.classes.assign(distinct.begin(), distinct.end());
  out.model.weights = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(out.model.classes.size()), features.cols());
  out.model.bias =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out.model.classes.size()));
  std::vector<std::size_t> class_ids = to_class_ids(labels, out.model.classes);

  out.epoch_loss.push_back(objective(out.model, features, class_ids, cfg.l2));
  std::vector<std::size_t> order(labels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(cfg.seed);

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t lo = 0; lo < order.size(); lo += cfg.batch) {
      std::size_t hi = std::min(lo + cfg.batch, order.size());
      Eigen::MatrixXd batch(static_cast<Eigen::Index>(hi - lo),
                            features.cols());
      std::vector<std::size_t> batch_ids(hi - lo);
      for (std::size_t k = lo; k < hi; ++k) {
        batch.row(static_cast<Eigen::Index>(k - lo)) =
            features.row(static_cast<Eigen::Index>(order[k]));
        batch_ids[k - lo] = class_ids[order[k]];
      }
      Eigen::MatrixXd gw;
      Eigen::VectorXd gb;
      gradients(out.model, batch, batch_ids, cfg.l2, &gw, &gb);
      out.model.weights -= cfg.lr * gw;
      out.model.bias -= cfg.lr * gb;
    }
    double loss = objective(out.model, features, class_ids, cfg.l2);
    if (!std::isfinite(loss))
      throw ValidationError("training diverged at epoch " +
                            std::to_string(epoch));
    out.epoch_loss.push_back(loss);
  }
  return out;
}

Prediction predict(const LinearModel& m, const Eigen::VectorXd& fv) {
  if (fv.size() != m.weights.cols())
    throw ValidationError("feature vector dimension mismatch");
  Eigen::VectorXd scores = m.weights * fv + m.bias;
  Eigen::VectorXd shifted =
      scores.array() - scores.maxCoeff();
  Eigen::VectorXd probs = shifted.array().exp();
  probs /= probs.sum();
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < probs.size(); ++c)
    if (probs(c) > probs(best)) best = c;
  return {m.classes[static_cast<std::size_t>(best)], std::move(probs)};
}

double grad_check(const LinearModel& m, const Eigen::MatrixXd& features,
                  const std::vector<std::string>& labels, double epsilon,
                  double l2) {
  if (epsilon <= 0.0) throw ValidationError("epsilon must be positive");
  std::vector<std::size_t> class_ids = to_class_ids(labels, m.classes);
  Eigen::MatrixXd gw;
  Eigen::VectorXd gb;
  gradients(m, features, class_ids, l2, &gw, &gb);

  LinearModel probe = m;
  double worst = 0.0;
  auto update = [&](double analytic, double plus, double minus) {
    double numeric = (plus - minus) / (2.0 * epsilon);
    double denom =
        std::max({std::abs(analytic), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(analytic - numeric) / denom);
  };
  for (Eigen::Index r = 0; r < m.weights.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.weights.cols(); ++c) {
      probe.weights(r, c) = m.weights(r, c) + epsilon;
      double plus = objective(probe, features, class_ids, l2);
      probe.weights(r, c) = m.weights(r, c) - epsilon;
      double minus = objective(probe, features, class_ids, l2);
      probe.weights(r, c) = m.weights(r, c);
      update(gw(r, c), plus, minus);
    }
  }
  for (Eigen::Index r = 0; r < m.bias.size(); ++r) {
    probe.bias(r) = m.bias(r) + epsilon;
    double plus = objective(probe, features, class_ids, l2);
    probe.bias(r) = m.bias(r) - epsilon;
    double minus = objective(probe, features, class_ids, l2);
    probe.bias(r) = m.bias(r);
    update(gb(r), plus, minus);
  }
  return worst;
}

}  // namespace semkit
