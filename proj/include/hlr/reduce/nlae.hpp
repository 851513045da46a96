// include/hlr/reduce/nlae.hpp

// Copyright 2026  The hlr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hlr/matrix.hpp"

namespace hlr {

/// Two-layer ReLU encoder and two-layer decoder with a linear output:
///
///   code  = relu(W2^T relu(W1^T x + b1) + b2)
///   recon = D1^T relu(D2^T code + c2) + c1
///
/// W1 is in x hidden, W2 hidden x out, D2 out x hidden, D1 hidden x in.
struct NlaeParams {
  Matrix w1;
  Vector b1;
  Matrix w2;
  Vector b2;
  Matrix dec_w2;
  Vector dec_b2;
  Matrix dec_w1;
  Vector dec_b1;

  std::size_t in_dims() const noexcept { return w1.rows(); }
  std::size_t hidden() const noexcept { return w1.cols(); }
  std::size_t out_dims() const noexcept { return w2.cols(); }

  /// Visits the eight tensors in declaration order.
  void for_each(const std::function<void(std::span<double>)>& fn);
  void for_each(const std::function<void(std::span<const double>)>& fn) const;
};

struct NlaeOptions {
  std::uint64_t seed = 0;
  std::size_t max_epochs = 100;
  std::size_t patience = 3;
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  double weight_decay = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
};

struct NlaeFit {
  NlaeParams params;  ///< weights from the epoch with the lowest validation loss
  std::vector<double> train_loss;
  std::vector<double> validation_loss;
  std::size_t best_epoch = 0;  ///< 1-based
  std::size_t epochs_run = 0;
};

namespace nlae {

/// round((in + out) / 2); 448 for 768 -> 128.
std::size_t hidden_width(std::size_t in_dims, std::size_t out_dims) noexcept;

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for every weight and bias.
NlaeParams init(std::size_t in_dims, std::size_t out_dims, std::uint64_t seed);

/// Stops once the monitored loss has risen on `patience` consecutive
/// epochs and remembers the epoch with the lowest loss.
class EarlyStopping {
 public:
  explicit EarlyStopping(std::size_t patience) : patience_(patience) {}

  /// Record the loss of the epoch just finished; true means stop now.
  bool observe(double loss);
  /// True when the last observed loss is the best so far.
  bool improved() const noexcept { return improved_; }
  std::size_t best_epoch() const noexcept { return best_epoch_; }
  double best_loss() const noexcept { return best_; }

 private:
  std::size_t patience_;
  std::size_t epoch_ = 0;
  std::size_t rises_ = 0;
  std::size_t best_epoch_ = 0;
  double best_ = 0.0;
  double last_ = 0.0;
  bool improved_ = false;
};

/// 90/10 train/validation split, AdamW on mean squared reconstruction error.
/// Throws ConfigError for fewer than 10 rows or out_dims outside [1, in].
NlaeFit fit(const Matrix& x, std::size_t k, const NlaeOptions& opts = {});

Matrix encode(const NlaeParams& p, const Matrix& x);
Matrix reconstruct(const NlaeParams& p, const Matrix& x);

/// Mean squared reconstruction error over all cells of `x` and its gradient
/// with respect to every parameter (written into `grad`, which is resized).
double loss_and_gradient(const NlaeParams& p, const Matrix& x, NlaeParams& grad);
double loss(const NlaeParams& p, const Matrix& x);

}  // namespace nlae
}  // namespace hlr
