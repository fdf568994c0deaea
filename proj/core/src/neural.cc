// Copyright 2026 The WOI Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "woi/neural.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace woi {
namespace {

using RowVector = Eigen::RowVectorXd;

constexpr double kInitScale = 0.08;

void fill_uniform(double* data, Eigen::Index n, Rng& rng) {
  for (Eigen::Index i = 0; i < n; ++i) data[i] = rng.uniform(-kInitScale, kInitScale);
}

std::span<double> span_of(Matrix& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

std::span<double> span_of(Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

LstmParams LstmParams::zeros(int input_dim, int hidden_dim) {
  if (input_dim < 1 || hidden_dim < 1) {
    throw ShapeError("LSTM dimensions must be positive");
  }
  LstmParams p;
  p.w = Matrix::Zero(4 * hidden_dim, input_dim);
  p.u = Matrix::Zero(4 * hidden_dim, hidden_dim);
  p.b = Vector::Zero(4 * hidden_dim);
  return p;
}

LstmParams LstmParams::init(int input_dim, int hidden_dim, Rng& rng) {
  LstmParams p = zeros(input_dim, hidden_dim);
  fill_uniform(p.w.data(), p.w.size(), rng);
  fill_uniform(p.u.data(), p.u.size(), rng);
  p.b.segment(hidden_dim, hidden_dim).setOnes();
  return p;
}

void LstmParams::validate() const {
  const Eigen::Index h = u.cols();
  if (h < 1 || u.rows() != 4 * h || w.rows() != 4 * h || b.size() != 4 * h ||
      w.cols() < 1) {
    throw ShapeError("inconsistent LSTM parameter shapes");
  }
  if (!w.allFinite() || !u.allFinite() || !b.allFinite()) {
    throw ValidationError("non-finite LSTM parameters");
  }
}

ParamList LstmParams::params() { return {span_of(w), span_of(u), span_of(b)}; }

LstmOutput lstm_forward(const LstmParams& p, const Matrix& x, LstmTrace* trace) {
  const Eigen::Index H = p.hidden_dim();
  const Eigen::Index T = x.rows();
  if (T < 1) throw ShapeError("lstm_forward: empty sequence");
  if (x.cols() != p.input_dim()) {
    throw ShapeError("lstm_forward: input dim " + std::to_string(x.cols()) +
                     " != expected " + std::to_string(p.input_dim()));
  }
  if (!x.allFinite()) throw ValidationError("lstm_forward: non-finite input");

  Matrix pre = x * p.w.transpose();
  pre.rowwise() += p.b.transpose();

  LstmOutput out;
  out.h.resize(T, H);
  Matrix gates_all;
  Matrix c_all;
  if (trace) {
    gates_all.resize(T, 4 * H);
    c_all.resize(T, H);
  }
  RowVector h = RowVector::Zero(H);
  RowVector c = RowVector::Zero(H);
  RowVector z(4 * H);
  for (Eigen::Index t = 0; t < T; ++t) {
    z.noalias() = pre.row(t);
    if (t > 0) z.noalias() += h * p.u.transpose();
    for (Eigen::Index k = 0; k < 3 * H; ++k) z(k) = sigmoid(z(k));
    for (Eigen::Index k = 3 * H; k < 4 * H; ++k) z(k) = std::tanh(z(k));
    c = z.segment(H, H).cwiseProduct(c) + z.segment(0, H).cwiseProduct(z.segment(3 * H, H));
    h = z.segment(2 * H, H).cwiseProduct(c.array().tanh().matrix());
    out.h.row(t) = h;
    if (trace) {
      gates_all.row(t) = z;
      c_all.row(t) = c;
    }
  }
  out.h_final = h.transpose();
  out.c_final = c.transpose();
  if (trace) {
    trace->x = x;
    trace->gates = std::move(gates_all);
    trace->c = std::move(c_all);
    trace->h = out.h;
  }
  return out;
}

Matrix lstm_backward(const LstmParams& p, const LstmTrace& trace, const Matrix& dh,
                     LstmParams& grads) {
  const Eigen::Index H = p.hidden_dim();
  const Eigen::Index T = trace.x.rows();
  if (dh.rows() != T || dh.cols() != H) throw ShapeError("lstm_backward: dh shape");

  Matrix dz(T, 4 * H);
  RowVector dh_next = RowVector::Zero(H);
  RowVector dc_next = RowVector::Zero(H);
  for (Eigen::Index t = T - 1; t >= 0; --t) {
    const auto gates = trace.gates.row(t);
    const auto i = gates.segment(0, H);
    const auto f = gates.segment(H, H);
    const auto o = gates.segment(2 * H, H);
    const auto g = gates.segment(3 * H, H);
    const RowVector tanh_c = trace.c.row(t).array().tanh().matrix();

    const RowVector dh_t = dh.row(t) + dh_next;
    const RowVector dc = dc_next + dh_t.cwiseProduct(o).cwiseProduct(
                                       (1.0 - tanh_c.array().square()).matrix());
    const RowVector c_prev = t > 0 ? RowVector(trace.c.row(t - 1)) : RowVector::Zero(H);

    auto dzt = dz.row(t);
    dzt.segment(0, H) = (dc.array() * g.array() * i.array() * (1.0 - i.array())).matrix();
    dzt.segment(H, H) = (dc.array() * c_prev.array() * f.array() * (1.0 - f.array())).matrix();
    dzt.segment(2 * H, H) =
        (dh_t.array() * tanh_c.array() * o.array() * (1.0 - o.array())).matrix();
    dzt.segment(3 * H, H) = (dc.array() * i.array() * (1.0 - g.array().square())).matrix();

    dc_next = dc.cwiseProduct(f);
    dh_next.noalias() = dzt * p.u;
  }

  grads.w.noalias() += dz.transpose() * trace.x;
  grads.b += dz.colwise().sum().transpose();
  if (T > 1) {
    grads.u.noalias() += dz.bottomRows(T - 1).transpose() * trace.h.topRows(T - 1);
  }
  return dz * p.w;
}

SoftmaxHead SoftmaxHead::zeros(int hidden_dim, int num_classes) {
  if (hidden_dim < 1 || num_classes < 2) {
    throw ShapeError("softmax head needs H >= 1 and C >= 2");
  }
  return {Matrix::Zero(num_classes, hidden_dim), Vector::Zero(num_classes)};
}

SoftmaxHead SoftmaxHead::init(int hidden_dim, int num_classes, Rng& rng) {
  SoftmaxHead head = zeros(hidden_dim, num_classes);
  fill_uniform(head.w.data(), head.w.size(), rng);
  return head;
}

ParamList SoftmaxHead::params() { return {span_of(w), span_of(b)}; }

Vector softmax(const Vector& logits) {
  const double m = logits.maxCoeff();
  Vector e = (logits.array() - m).exp().matrix();
  return e / e.sum();
}

SequenceClassifier SequenceClassifier::zeros(int input_dim, int hidden_dim,
                                             int num_classes) {
  return {LstmParams::zeros(input_dim, hidden_dim),
          SoftmaxHead::zeros(hidden_dim, num_classes)};
}

SequenceClassifier SequenceClassifier::init(int input_dim, int hidden_dim, int num_classes,
                                            Rng& rng) {
  SequenceClassifier m;
  m.lstm = LstmParams::init(input_dim, hidden_dim, rng);
  m.head = SoftmaxHead::init(hidden_dim, num_classes, rng);
  return m;
}

ParamList SequenceClassifier::params() {
  ParamList out = lstm.params();
  for (auto s : head.params()) out.push_back(s);
  return out;
}

Vector classify_forward(const SequenceClassifier& model, const Matrix& x, double dropout_p,
                        Mode mode, Rng* rng, ClassifyCache* cache) {
  if (model.head.w.cols() != model.lstm.hidden_dim()) {
    throw ShapeError("classifier head does not match LSTM hidden size");
  }
  if (!(dropout_p >= 0.0 && dropout_p < 1.0)) {
    throw ConfigError("dropout_p must lie in [0, 1)");
  }
  const LstmOutput lo = lstm_forward(model.lstm, x, cache ? &cache->trace : nullptr);
  const Eigen::Index H = model.lstm.hidden_dim();
  Vector mask = Vector::Ones(H);
  if (mode == Mode::kTrain && dropout_p > 0.0) {
    if (!rng) throw ValidationError("classify_forward: train-mode dropout needs an rng");
    const double keep_scale = 1.0 / (1.0 - dropout_p);
    for (Eigen::Index k = 0; k < H; ++k) mask(k) = rng->uniform() < dropout_p ? 0.0 : keep_scale;
  }
  Vector hidden = lo.h_final.cwiseProduct(mask);
  Vector probs = softmax(model.head.w * hidden + model.head.b);
  if (cache) {
    cache->mask = std::move(mask);
    cache->hidden = std::move(hidden);
    cache->probs = probs;
  }
  return probs;
}

double classify_backward(const SequenceClassifier& model, const ClassifyCache& cache,
                         int label, SequenceClassifier& grads) {
  const int C = model.num_classes();
  if (label < 0 || label >= C) {
    throw ValidationError("label " + std::to_string(label) + " outside 0.." +
                          std::to_string(C - 1));
  }
  Vector dlogits = cache.probs;
  dlogits(label) -= 1.0;
  grads.head.w.noalias() += dlogits * cache.hidden.transpose();
  grads.head.b += dlogits;
  const Vector dhidden = model.head.w.transpose() * dlogits;

  const Eigen::Index T = cache.trace.x.rows();
  Matrix dh = Matrix::Zero(T, model.lstm.hidden_dim());
  dh.row(T - 1) = dhidden.cwiseProduct(cache.mask).transpose();
  lstm_backward(model.lstm, cache.trace, dh, grads.lstm);
  return -std::log(std::max(cache.probs(label), std::numeric_limits<double>::min()));
}

Vector predict(const SequenceClassifier& model, const Matrix& x) {
  return classify_forward(model, x, 0.0, Mode::kEval, nullptr);
}

void TrainConfig::validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("lr must be > 0");
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (!(dropout_p >= 0.0 && dropout_p < 1.0)) throw ConfigError("dropout_p must lie in [0, 1)");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
}

Adam::Adam(double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

void Adam::step(const ParamList& params, const ParamList& grads) {
  if (params.size() != grads.size()) throw ShapeError("Adam: params/grads mismatch");
  if (m_.empty()) {
    for (const auto& p : params) {
      m_.emplace_back(p.size(), 0.0);
      v_.emplace_back(p.size(), 0.0);
    }
  }
  if (m_.size() != params.size()) throw ShapeError("Adam: parameter list changed");
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& m = m_[k];
    auto& v = v_[k];
    if (params[k].size() != m.size() || grads[k].size() != m.size()) {
      throw ShapeError("Adam: parameter block size changed");
    }
    for (std::size_t j = 0; j < m.size(); ++j) {
      const double g = grads[k][j];
      m[j] = beta1_ * m[j] + (1.0 - beta1_) * g;
      v[j] = beta2_ * v[j] + (1.0 - beta2_) * g * g;
      params[k][j] -= lr_ * (m[j] / c1) / (std::sqrt(v[j] / c2) + eps_);
    }
  }
}

void zero(const ParamList& params) {
  for (const auto& s : params) std::fill(s.begin(), s.end(), 0.0);
}

bool params_equal(const ParamList& a, const ParamList& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!std::equal(a[k].begin(), a[k].end(), b[k].begin(), b[k].end())) return false;
  }
  return true;
}

FitResult fit(SequenceClassifier& model, std::span<const LabeledSequence> data,
              const TrainConfig& config) {
  config.validate();
  if (data.empty()) throw ValidationError("fit: empty training set");
  for (const auto& ex : data) {
    if (ex.label < 0 || ex.label >= model.num_classes()) {
      throw ValidationError("fit: label " + std::to_string(ex.label) + " out of range");
    }
  }
  FitResult result;
  if (config.epochs == 0) return result;

  Rng order_rng(derive_seed(config.seed, "fit/order"));
  Rng dropout_rng(derive_seed(config.seed, "fit/dropout"));
  Adam adam(config.lr);
  SequenceClassifier grads = SequenceClassifier::zeros(
      model.input_dim(), model.lstm.hidden_dim(), model.num_classes());
  const ParamList params = model.params();
  const ParamList grad_list = grads.params();
  ClassifyCache cache;
  const std::size_t batch = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto order = order_rng.permutation(data.size());
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      zero(grad_list);
      for (std::size_t j = start; j < end; ++j) {
        const LabeledSequence& ex = data[order[j]];
        classify_forward(model, ex.x, config.dropout_p, Mode::kTrain, &dropout_rng, &cache);
        total += classify_backward(model, cache, ex.label, grads);
      }
      if (end - start > 1) {
        const double scale = 1.0 / static_cast<double>(end - start);
        for (const auto& s : grad_list) {
          for (double& g : s) g *= scale;
        }
      }
      adam.step(params, grad_list);
    }
    result.epoch_loss.push_back(total / static_cast<double>(data.size()));
  }
  return result;
}

double accuracy(const SequenceClassifier& model, std::span<const LabeledSequence> data) {
  if (data.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& ex : data) {
    Eigen::Index arg = 0;
    predict(model, ex.x).maxCoeff(&arg);
    if (arg == ex.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

GradCheckResult grad_check(const std::function<double()>& loss, const ParamList& params,
                           const ParamList& analytic, double epsilon) {
  if (params.size() != analytic.size()) throw ShapeError("grad_check: list mismatch");
  GradCheckResult r;
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (params[k].size() != analytic[k].size()) throw ShapeError("grad_check: block mismatch");
    for (std::size_t j = 0; j < params[k].size(); ++j) {
      double& theta = params[k][j];
      const double saved = theta;
      theta = saved + epsilon;
      const double lp = loss();
      theta = saved - epsilon;
      const double lm = loss();
      theta = saved;
      const double numeric = (lp - lm) / (2.0 * epsilon);
      const double a = analytic[k][j];
      const double abs_err = std::abs(a - numeric);
      const double rel_err = abs_err / std::max(std::abs(a) + std::abs(numeric), 1e-6);
      r.max_abs_error = std::max(r.max_abs_error, abs_err);
      r.max_rel_error = std::max(r.max_rel_error, rel_err);
      ++r.num_checked;
    }
  }
  return r;
}

GradCheckResult grad_check(SequenceClassifier& model, const Matrix& x, int label,
                           double epsilon) {
  SequenceClassifier grads = SequenceClassifier::zeros(
      model.input_dim(), model.lstm.hidden_dim(), model.num_classes());
  ClassifyCache cache;
  classify_forward(model, x, 0.0, Mode::kEval, nullptr, &cache);
  classify_backward(model, cache, label, grads);
  const auto loss = [&] { return -std::log(predict(model, x)(label)); };
  return grad_check(loss, model.params(), grads.params(), epsilon);
}

}  // namespace woi
