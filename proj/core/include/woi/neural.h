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

// Small CPU neural core: one LSTM layer, a dense softmax head, inverted
// dropout, cross-entropy, Adam and a finite-difference gradient checker.
//
// Parameters of every model are exposed as a list of contiguous spans, in a
// fixed order, so optimizers, checkpoints and the gradient checker stay
// generic. A gradient object is simply a model of the same shape.

#ifndef WOI_NEURAL_H_
#define WOI_NEURAL_H_

#include <functional>
#include <span>
#include <vector>

#include "woi/common.h"

namespace woi {

using ParamList = std::vector<std::span<double>>;

// Gate blocks are stacked row-wise in the order i, f, o, g.
struct LstmParams {
  Matrix w;  // 4H x D
  Matrix u;  // 4H x H
  Vector b;  // 4H

  int input_dim() const { return static_cast<int>(w.cols()); }
  int hidden_dim() const { return static_cast<int>(u.cols()); }

  static LstmParams zeros(int input_dim, int hidden_dim);
  // uniform(-0.08, 0.08) weights, zero biases except forget gate = +1.
  static LstmParams init(int input_dim, int hidden_dim, Rng& rng);

  // Throws ShapeError / ValidationError.
  void validate() const;
  ParamList params();
};

// Activations kept for backpropagation through time.
struct LstmTrace {
  Matrix x;      // T x D
  Matrix gates;  // T x 4H, post-nonlinearity
  Matrix c;      // T x H
  Matrix h;      // T x H
};

struct LstmOutput {
  Matrix h;  // T x H
  Vector h_final;
  Vector c_final;
};

// Zero initial state. Throws ShapeError on a dimension mismatch or T = 0 and
// ValidationError on non-finite input.
LstmOutput lstm_forward(const LstmParams& p, const Matrix& x, LstmTrace* trace = nullptr);

// Accumulates parameter gradients into `grads` given dL/dh (T x H) and returns
// dL/dx (T x D).
Matrix lstm_backward(const LstmParams& p, const LstmTrace& trace, const Matrix& dh,
                     LstmParams& grads);

struct SoftmaxHead {
  Matrix w;  // C x H
  Vector b;  // C

  int num_classes() const { return static_cast<int>(w.rows()); }
  static SoftmaxHead zeros(int hidden_dim, int num_classes);
  static SoftmaxHead init(int hidden_dim, int num_classes, Rng& rng);
  ParamList params();
};

// Numerically stable softmax.
Vector softmax(const Vector& logits);

enum class Mode { kTrain, kEval };

// LSTM over the sequence, final hidden state, dropout, softmax head.
struct SequenceClassifier {
  LstmParams lstm;
  SoftmaxHead head;

  int input_dim() const { return lstm.input_dim(); }
  int num_classes() const { return head.num_classes(); }

  static SequenceClassifier zeros(int input_dim, int hidden_dim, int num_classes);
  static SequenceClassifier init(int input_dim, int hidden_dim, int num_classes, Rng& rng);
  ParamList params();
};

struct ClassifyCache {
  LstmTrace trace;
  Vector mask;  // dropout scale per hidden unit (0 or 1/(1-p)); ones in eval
  Vector hidden;  // final hidden state after dropout
  Vector probs;
};

// Eval mode ignores dropout and `rng` may be null. Train mode draws one
// Bernoulli mask per hidden unit from `rng`.
Vector classify_forward(const SequenceClassifier& model, const Matrix& x, double dropout_p,
                        Mode mode, Rng* rng, ClassifyCache* cache = nullptr);

// Cross-entropy loss -log p[label]; accumulates gradients into `grads`.
double classify_backward(const SequenceClassifier& model, const ClassifyCache& cache,
                         int label, SequenceClassifier& grads);

// Eval-mode probabilities.
Vector predict(const SequenceClassifier& model, const Matrix& x);

struct TrainConfig {
  double lr = 0.001;
  int epochs = 10;
  double dropout_p = 0.5;
  std::uint64_t seed = 0;
  int batch_size = 1;

  // Throws ConfigError.
  void validate() const;
};

class Adam {
 public:
  explicit Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  // params and grads must list spans of identical sizes on every call.
  void step(const ParamList& params, const ParamList& grads);
  long steps() const { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

struct LabeledSequence {
  Matrix x;
  int label = 0;
};

struct FitResult {
  std::vector<double> epoch_loss;  // mean training loss per epoch
};

// Online (or mini-batch) Adam training with a seeded shuffle per epoch.
// Throws ValidationError on an empty set or labels outside 0..C-1.
FitResult fit(SequenceClassifier& model, std::span<const LabeledSequence> data,
              const TrainConfig& config);

double accuracy(const SequenceClassifier& model, std::span<const LabeledSequence> data);

void zero(const ParamList& params);
// Deep comparison of two parameter lists.
bool params_equal(const ParamList& a, const ParamList& b);

struct GradCheckResult {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  std::size_t num_checked = 0;
};

// Relative error is |a - n| / max(|a| + |n|, 1e-6). `loss` must read the
// current values of `params`, which are perturbed and restored in place.
GradCheckResult grad_check(const std::function<double()>& loss, const ParamList& params,
                           const ParamList& analytic, double epsilon = 1e-5);

// Checks classify_backward on one sample with dropout disabled.
GradCheckResult grad_check(SequenceClassifier& model, const Matrix& x, int label,
                           double epsilon = 1e-5);

}  // namespace woi

#endif  // WOI_NEURAL_H_
