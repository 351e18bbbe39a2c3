#include "qwalk/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace qwalk {

void TrainingLog::write_csv(std::ostream& os) const {
  os << "epoch,train_metric,validation_metric,train_loss,validation_loss,wall_seconds\n";
  os << std::setprecision(10);
  for (const EpochRecord& e : epochs) {
    os << e.epoch << ',' << e.train_metric << ',' << e.validation_metric << ',' << e.train_loss << ','
       << e.validation_loss << ',' << e.wall_seconds << '\n';
  }
}

std::span<const std::uint8_t> loss_mask(const Sample& s, const Matrix& prediction) {
  if (static_cast<std::size_t>(prediction.rows()) == s.graph->num_nodes() && prediction.rows() > 1) {
    return s.graph->node_mask;
  }
  return {};
}

namespace {

// Groups sample indices by graph, keeping first-appearance order.
std::vector<std::vector<std::size_t>> group_by_graph(std::span<const Sample> samples,
                                                     std::span<const std::size_t> idx) {
  std::vector<std::vector<std::size_t>> groups;
  std::map<const PreparedGraph*, std::size_t> slot;
  for (std::size_t i : idx) {
    const PreparedGraph* g = samples[i].graph.get();
    auto [it, fresh] = slot.emplace(g, groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(i);
  }
  return groups;
}

std::vector<Matrix> gather_features(std::span<const Sample> samples, std::span<const std::size_t> idx) {
  std::vector<Matrix> xs;
  xs.reserve(idx.size());
  for (std::size_t i : idx) xs.push_back(samples[i].features);
  return xs;
}

std::vector<std::vector<double>> snapshot(const ParameterSet& params) {
  std::vector<std::vector<double>> out;
  for (const Parameter& p : params) out.push_back(p.value);
  return out;
}

void restore(ParameterSet& params, const std::vector<std::vector<double>>& values) {
  for (std::size_t k = 0; k < params.size(); ++k) params[k].value = values[k];
}

std::string describe(double lr, std::size_t epoch) {
  std::ostringstream os;
  os << "non-finite loss at epoch " << epoch << " (learning rate " << lr << ")";
  return os.str();
}

}  // namespace

Evaluation evaluate(const ModelGraphNet& model, std::span<const Sample> samples, LossKind loss) {
  MetricAccumulator acc(loss);
  std::vector<std::size_t> all(samples.size());
  std::iota(all.begin(), all.end(), 0);
  for (const auto& group : group_by_graph(samples, all)) {
    const std::vector<Matrix> xs = gather_features(samples, group);
    const std::vector<Matrix> ys = model.forward(*samples[group.front()].graph, xs);
    for (std::size_t j = 0; j < group.size(); ++j) {
      const Sample& s = samples[group[j]];
      acc.add(ys[j], s.targets, loss_mask(s, ys[j]));
    }
  }
  return {acc.loss(), acc.metric(), acc.samples()};
}

TrainingLog train(ModelGraphNet& model, std::span<const Sample> train_set, std::span<const Sample> validation_set,
                  const TrainConfig& config) {
  if (train_set.empty()) throw std::invalid_argument("training set is empty");
  if (config.epochs > max_epochs) {
    throw std::invalid_argument("epochs must be at most " + std::to_string(max_epochs));
  }
  if (config.batch_size == 0) throw std::invalid_argument("batch size must be positive");

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  const bool has_validation = !validation_set.empty();

  TrainingLog log;
  auto record = [&](std::size_t epoch) {
    EpochRecord r;
    r.epoch = epoch;
    const Evaluation tr = evaluate(model, train_set, config.loss);
    r.train_loss = tr.loss;
    r.train_metric = tr.metric;
    if (has_validation) {
      const Evaluation va = evaluate(model, validation_set, config.loss);
      r.validation_loss = va.loss;
      r.validation_metric = va.metric;
    } else {
      r.validation_loss = std::numeric_limits<double>::quiet_NaN();
      r.validation_metric = std::numeric_limits<double>::quiet_NaN();
    }
    r.wall_seconds = elapsed();
    if (!std::isfinite(r.train_loss) || (has_validation && !std::isfinite(r.validation_loss))) {
      throw TrainingError(describe(config.optimizer.learning_rate, epoch));
    }
    log.epochs.push_back(r);
    // lower is better
    const double metric = has_validation ? r.validation_metric : r.train_metric;
    return metric_higher_is_better(config.loss) ? -metric : metric;
  };

  double best = record(0);
  auto best_values = snapshot(model.parameters());
  std::size_t since_best = 0;

  Optimizer opt(config.optimizer, model.parameters());
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      const std::span<const std::size_t> batch(order.data() + start, stop - start);
      const double scale = 1.0 / static_cast<double>(batch.size());
      model.zero_grad();
      double batch_loss = 0.0;
      for (const auto& group : group_by_graph(train_set, batch)) {
        const std::vector<Matrix> xs = gather_features(train_set, group);
        Tape tape;
        const std::vector<Matrix> ys = model.forward(*train_set[group.front()].graph, xs, &tape);
        std::vector<Matrix> grads;
        grads.reserve(group.size());
        for (std::size_t j = 0; j < group.size(); ++j) {
          const Sample& s = train_set[group[j]];
          SampleLoss l = sample_loss(config.loss, ys[j], s.targets, loss_mask(s, ys[j]));
          batch_loss += l.loss;
          grads.push_back(l.grad * scale);
        }
        model.backward(tape, grads);
      }
      if (!std::isfinite(batch_loss)) throw TrainingError(describe(config.optimizer.learning_rate, epoch));
      opt.step(model.parameters());
    }

    const double score = record(epoch);
    if (score < best) {
      best = score;
      best_values = snapshot(model.parameters());
      log.best_epoch = log.epochs.size() - 1;
      since_best = 0;
    } else if (config.patience > 0 && ++since_best >= config.patience) {
      log.stopped_early = epoch < config.epochs;
      break;
    }
  }
  restore(model.parameters(), best_values);
  return log;
}

}  // namespace qwalk
