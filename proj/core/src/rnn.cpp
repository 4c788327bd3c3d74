// Copyright 2026 The slms Authors. All Rights Reserved.
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

#include "slms/rnn.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "slms/binary_io.hpp"
#include "slms/error.hpp"

namespace slms {
namespace {

// Scalar-generic so the gradient check can run in long double.
template <typename T>
struct Types {
  using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
  using ConstRowMap = Eigen::Map<const RowMat>;
  using RowMap = Eigen::Map<RowMat>;
  using ConstVecMap = Eigen::Map<const Vec>;
  using VecMap = Eigen::Map<Vec>;
};

struct Layout {
  std::size_t V, E, H, L;
  std::size_t emb = 0;
  std::vector<std::size_t> w_ih, w_hh, bias;
  std::size_t out_w = 0, out_b = 0, total = 0;

  explicit Layout(const RnnShape& s) : V(s.units), E(s.embed), H(s.hidden), L(s.layers) {
    std::size_t off = 0;
    emb = off;
    off += (V + 2) * E;
    for (std::size_t l = 0; l < L; ++l) {
      w_ih.push_back(off);
      off += 4 * H * in_dim(l);
      w_hh.push_back(off);
      off += 4 * H * H;
      bias.push_back(off);
      off += 4 * H;
    }
    out_w = off;
    off += (V + 1) * H;
    out_b = off;
    off += V + 1;
    total = off;
  }

  std::size_t in_dim(std::size_t l) const { return l == 0 ? E : H; }
};

// Time-major token grid for one segment; target -1 marks padding.
struct Segment {
  std::vector<std::vector<Token>> inputs;
  std::vector<std::vector<int>> targets;
};

template <typename T>
struct LayerState {
  typename Types<T>::Mat h, c;
};

template <typename T>
struct LayerStep {
  typename Types<T>::Mat x, mask, h_prev, c_prev, i, f, g, o, tc;
};

template <typename T>
struct Step {
  std::vector<LayerStep<T>> layers;
  typename Types<T>::Mat top_mask, top;  // top = dropped-out top hidden state fed to the output layer
  typename Types<T>::Mat logp;
};

template <typename T>
typename Types<T>::Mat sigmoid(const typename Types<T>::Mat& z) {
  return (T(1) / (T(1) + (-z.array()).exp())).matrix();
}

template <typename T>
typename Types<T>::Mat dropout_mask(std::size_t rows, std::size_t cols, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution keep(1.0 - p);
  typename Types<T>::Mat m(rows, cols);
  const T scale = T(1) / T(1.0 - p);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = keep(rng) ? scale : T(0);
  }
  return m;
}

// Runs one segment from \p state (updated in place). Returns the summed
// cross-entropy over valid targets. With \p grad, accumulates the gradient of
// (sum / norm) with truncation at the segment start. \p rows, when given,
// receives the per-step log-distributions (batch must be 1 wide).
template <typename T>
T run_segment(const T* params, const Layout& lay, const Segment& seg,
              std::vector<LayerState<T>>& state, double dropout, std::mt19937_64* rng, T* grad,
              T norm, std::vector<std::vector<double>>* rows) {
  using Mat = typename Types<T>::Mat;
  using ConstRowMap = typename Types<T>::ConstRowMap;
  using RowMap = typename Types<T>::RowMap;
  using ConstVecMap = typename Types<T>::ConstVecMap;
  using VecMap = typename Types<T>::VecMap;
  const std::size_t S = seg.inputs.size();
  const std::size_t B = S ? seg.inputs[0].size() : 0;
  const auto H = static_cast<Eigen::Index>(lay.H);
  const bool train_dropout = rng != nullptr && dropout > 0.0;

  ConstRowMap emb(params + lay.emb, static_cast<Eigen::Index>(lay.V + 2), static_cast<Eigen::Index>(lay.E));
  ConstRowMap w_out(params + lay.out_w, static_cast<Eigen::Index>(lay.V + 1), H);
  ConstVecMap b_out(params + lay.out_b, static_cast<Eigen::Index>(lay.V + 1));

  std::vector<Step<T>> steps(S);
  T loss = 0;
  for (std::size_t t = 0; t < S; ++t) {
    Step<T>& st = steps[t];
    Mat x(static_cast<Eigen::Index>(lay.E), static_cast<Eigen::Index>(B));
    for (std::size_t b = 0; b < B; ++b) {
      x.col(static_cast<Eigen::Index>(b)) = emb.row(seg.inputs[t][b]).transpose();
    }
    st.layers.resize(lay.L);
    for (std::size_t l = 0; l < lay.L; ++l) {
      LayerStep<T>& ls = st.layers[l];
      const auto in = static_cast<Eigen::Index>(lay.in_dim(l));
      ConstRowMap w_ih(params + lay.w_ih[l], 4 * H, in);
      ConstRowMap w_hh(params + lay.w_hh[l], 4 * H, H);
      ConstVecMap bias(params + lay.bias[l], 4 * H);
      if (train_dropout) {
        ls.mask = dropout_mask<T>(static_cast<std::size_t>(x.rows()), B, dropout, *rng);
        x = x.cwiseProduct(ls.mask);
      }
      ls.x = x;
      ls.h_prev = state[l].h;
      ls.c_prev = state[l].c;
      Mat z = w_ih * ls.x + w_hh * ls.h_prev;
      z.colwise() += bias;
      ls.i = sigmoid<T>(z.topRows(H));
      ls.f = sigmoid<T>(z.middleRows(H, H));
      ls.g = z.middleRows(2 * H, H).array().tanh().matrix();
      ls.o = sigmoid<T>(z.bottomRows(H));
      state[l].c = ls.f.cwiseProduct(ls.c_prev) + ls.i.cwiseProduct(ls.g);
      ls.tc = state[l].c.array().tanh().matrix();
      state[l].h = ls.o.cwiseProduct(ls.tc);
      x = state[l].h;
    }
    if (train_dropout) {
      st.top_mask = dropout_mask<T>(lay.H, B, dropout, *rng);
      x = x.cwiseProduct(st.top_mask);
    }
    st.top = x;
    Mat logits = w_out * st.top;
    logits.colwise() += b_out;
    st.logp.resize(logits.rows(), logits.cols());
    for (Eigen::Index b = 0; b < logits.cols(); ++b) {
      const T mx = logits.col(b).maxCoeff();
      const T lse = mx + std::log((logits.col(b).array() - mx).exp().sum());
      st.logp.col(b) = logits.col(b).array() - lse;
    }
    for (std::size_t b = 0; b < B; ++b) {
      const int y = seg.targets[t][b];
      if (y >= 0) loss -= st.logp(y, static_cast<Eigen::Index>(b));
    }
    if (rows) {
      const auto col = st.logp.col(0).template cast<double>().eval();
      rows->emplace_back(col.data(), col.data() + col.size());
    }
  }
  if (!grad) return loss;

  RowMap g_emb(grad + lay.emb, static_cast<Eigen::Index>(lay.V + 2), static_cast<Eigen::Index>(lay.E));
  RowMap g_out(grad + lay.out_w, static_cast<Eigen::Index>(lay.V + 1), H);
  VecMap gb_out(grad + lay.out_b, static_cast<Eigen::Index>(lay.V + 1));
  std::vector<Mat> dh_next(lay.L, Mat::Zero(H, static_cast<Eigen::Index>(B)));
  std::vector<Mat> dc_next(lay.L, Mat::Zero(H, static_cast<Eigen::Index>(B)));
  for (std::size_t t = S; t-- > 0;) {
    Step<T>& st = steps[t];
    Mat dlogits = st.logp.array().exp().matrix();
    for (std::size_t b = 0; b < B; ++b) {
      const int y = seg.targets[t][b];
      const auto col = static_cast<Eigen::Index>(b);
      if (y < 0) {
        dlogits.col(col).setZero();
      } else {
        dlogits(y, col) -= T(1);
      }
    }
    dlogits /= norm;
    g_out.noalias() += dlogits * st.top.transpose();
    gb_out += dlogits.rowwise().sum();
    Mat dh = w_out.transpose() * dlogits;
    if (st.top_mask.size()) dh = dh.cwiseProduct(st.top_mask);

    for (std::size_t l = lay.L; l-- > 0;) {
      LayerStep<T>& ls = st.layers[l];
      const auto in = static_cast<Eigen::Index>(lay.in_dim(l));
      ConstRowMap w_ih(params + lay.w_ih[l], 4 * H, in);
      ConstRowMap w_hh(params + lay.w_hh[l], 4 * H, H);
      RowMap gw_ih(grad + lay.w_ih[l], 4 * H, in);
      RowMap gw_hh(grad + lay.w_hh[l], 4 * H, H);
      VecMap gbias(grad + lay.bias[l], 4 * H);

      const Mat dh_total = dh + dh_next[l];
      const Mat dc = dc_next[l] + dh_total.cwiseProduct(ls.o).cwiseProduct(
                                      (T(1) - ls.tc.array().square()).matrix());
      Mat dz(4 * H, static_cast<Eigen::Index>(B));
      dz.topRows(H) = dc.cwiseProduct(ls.g).cwiseProduct(ls.i.cwiseProduct((T(1) - ls.i.array()).matrix()));
      dz.middleRows(H, H) =
          dc.cwiseProduct(ls.c_prev).cwiseProduct(ls.f.cwiseProduct((T(1) - ls.f.array()).matrix()));
      dz.middleRows(2 * H, H) = dc.cwiseProduct(ls.i).cwiseProduct((T(1) - ls.g.array().square()).matrix());
      dz.bottomRows(H) =
          dh_total.cwiseProduct(ls.tc).cwiseProduct(ls.o.cwiseProduct((T(1) - ls.o.array()).matrix()));

      gw_ih.noalias() += dz * ls.x.transpose();
      gw_hh.noalias() += dz * ls.h_prev.transpose();
      gbias += dz.rowwise().sum();

      dh_next[l] = w_hh.transpose() * dz;
      dc_next[l] = dc.cwiseProduct(ls.f);
      dh = w_ih.transpose() * dz;
      if (ls.mask.size()) dh = dh.cwiseProduct(ls.mask);
    }
    for (std::size_t b = 0; b < B; ++b) {
      g_emb.row(seg.inputs[t][b]) += dh.col(static_cast<Eigen::Index>(b)).transpose();
    }
  }
  return loss;
}

template <typename T>
std::vector<LayerState<T>> zero_state(const Layout& lay, std::size_t batch) {
  using Mat = typename Types<T>::Mat;
  const auto H = static_cast<Eigen::Index>(lay.H);
  const auto B = static_cast<Eigen::Index>(batch);
  return std::vector<LayerState<T>>(lay.L, LayerState<T>{Mat::Zero(H, B), Mat::Zero(H, B)});
}

// BOS d1..dT  ->  d1..dT EOS
Segment full_segment(const Vocabulary& vocab, std::span<const TokenSequence> batch,
                     std::size_t begin, std::size_t end, std::size_t* valid) {
  std::size_t max_len = 0;
  for (const auto& ts : batch) max_len = std::max(max_len, ts.tokens.size() + 1);
  end = std::min(end, max_len);
  Segment seg;
  seg.inputs.assign(end - begin, std::vector<Token>(batch.size(), vocab.bos()));
  seg.targets.assign(end - begin, std::vector<int>(batch.size(), -1));
  std::size_t count = 0;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const auto& tok = batch[b].tokens;
    for (std::size_t pos = begin; pos < end && pos <= tok.size(); ++pos) {
      seg.inputs[pos - begin][b] = pos == 0 ? vocab.bos() : tok[pos - 1];
      seg.targets[pos - begin][b] =
          pos < tok.size() ? static_cast<int>(tok[pos]) : static_cast<int>(vocab.eos_index());
      ++count;
    }
  }
  if (valid) *valid = count;
  return seg;
}

void check_tokens(const Vocabulary& vocab, std::span<const Token> tokens) {
  for (Token t : tokens) {
    if (t >= vocab.units) fail(ErrorKind::TokenOutOfRange, "token " + std::to_string(t));
  }
}

void round_to_float(std::vector<double>& params) {
  for (double& p : params) p = static_cast<double>(static_cast<float>(p));
}

}  // namespace

std::size_t RnnShape::parameter_count() const { return Layout(*this).total; }

RnnModel::RnnModel(RnnShape shape, TokenPolicy policy, std::vector<double> params)
    : shape_(shape), vocab_{shape.units}, policy_(policy), params_(std::move(params)) {
  if (shape_.units == 0 || shape_.embed == 0 || shape_.hidden == 0 || shape_.layers == 0) {
    fail(ErrorKind::InvariantViolation, "rnn shape has a zero dimension");
  }
  if (params_.size() != shape_.parameter_count()) {
    fail(ErrorKind::DimensionMismatch, "rnn parameter count " + std::to_string(params_.size()) +
                                           ", shape needs " + std::to_string(shape_.parameter_count()));
  }
  for (double p : params_) {
    if (!std::isfinite(p)) fail(ErrorKind::InvariantViolation, "non-finite rnn weight");
  }
}

RnnModel RnnModel::initialize(RnnShape shape, TokenPolicy policy, std::uint64_t seed) {
  const Layout lay(shape);
  std::vector<double> params(lay.total);
  std::mt19937_64 rng(seed);
  const double k = 1.0 / std::sqrt(static_cast<double>(shape.hidden));
  std::uniform_real_distribution<double> weight(-k, k);
  std::uniform_real_distribution<double> embedding(-0.1, 0.1);
  for (std::size_t i = 0; i < lay.total; ++i) {
    params[i] = i < lay.emb + (lay.V + 2) * lay.E ? embedding(rng) : weight(rng);
  }
  round_to_float(params);
  return RnnModel(shape, policy, std::move(params));
}

std::vector<std::vector<double>> RnnModel::log_distributions(std::span<const Token> tokens) const {
  check_tokens(vocab_, tokens);
  const Layout lay(shape_);
  Segment seg;
  seg.inputs.push_back({vocab_.bos()});
  for (Token t : tokens) seg.inputs.push_back({t});
  seg.targets.assign(seg.inputs.size(), std::vector<int>{-1});
  auto state = zero_state<double>(lay, 1);
  std::vector<std::vector<double>> rows;
  rows.reserve(seg.inputs.size());
  run_segment<double>(params_.data(), lay, seg, state, 0.0, nullptr, nullptr, 1.0, &rows);
  return rows;
}

std::vector<double> RnnModel::token_logprobs(std::span<const Token> tokens, bool with_eos) const {
  const auto rows = log_distributions(tokens);
  std::vector<double> out;
  out.reserve(tokens.size() + 1);
  for (std::size_t i = 0; i < tokens.size(); ++i) out.push_back(rows[i][tokens[i]]);
  if (with_eos) out.push_back(rows[tokens.size()][vocab_.eos_index()]);
  return out;
}

std::vector<std::pair<std::string, std::string>> RnnModel::describe() const {
  return {
      {"backend", "rnn"},
      {"V", std::to_string(shape_.units)},
      {"E", std::to_string(shape_.embed)},
      {"H", std::to_string(shape_.hidden)},
      {"layers", std::to_string(shape_.layers)},
      {"policy", std::string(to_string(policy_))},
      {"parameters", std::to_string(params_.size())},
  };
}

namespace {

// Mean cross-entropy of the whole batch, full BPTT, no dropout.
template <typename T>
T batch_loss(const RnnShape& shape, const std::vector<T>& params, std::span<const TokenSequence> batch,
             std::vector<T>* grad) {
  const Vocabulary vocab{shape.units};
  if (batch.empty()) fail(ErrorKind::EmptyInput, "empty batch");
  for (const auto& ts : batch) {
    if (ts.tokens.empty()) fail(ErrorKind::EmptyInput, "empty sequence in batch");
    check_tokens(vocab, ts.tokens);
  }
  const Layout lay(shape);
  std::size_t valid = 0;
  const Segment seg = full_segment(vocab, batch, 0, std::numeric_limits<std::size_t>::max(), &valid);
  auto state = zero_state<T>(lay, batch.size());
  if (grad) grad->assign(lay.total, T(0));
  const T sum = run_segment<T>(params.data(), lay, seg, state, 0.0, nullptr,
                               grad ? grad->data() : nullptr, static_cast<T>(valid), nullptr);
  return sum / static_cast<T>(valid);
}

}  // namespace

double RnnModel::loss(std::span<const TokenSequence> batch, std::vector<double>* grad) const {
  return batch_loss<double>(shape_, params_, batch, grad);
}

RnnTrainResult train_rnn(std::span<const TokenSequence> corpus, std::size_t vocab_size,
                         TokenPolicy policy, const TrainConfig& cfg) {
  cfg.validate();
  if (corpus.empty()) fail(ErrorKind::EmptyCorpus, "no training sequences");
  const Vocabulary vocab{vocab_size};
  for (const auto& ts : corpus) {
    if (ts.tokens.empty()) fail(ErrorKind::EmptyCorpus, "empty sequence '" + ts.utt_id + "'");
    if (ts.policy() != policy) {
      fail(ErrorKind::PolicyMismatch, "sequence '" + ts.utt_id + "' does not follow the model policy");
    }
    check_tokens(vocab, ts.tokens);
  }
  const RnnShape shape{vocab_size, static_cast<std::size_t>(cfg.embed),
                       static_cast<std::size_t>(cfg.hidden), static_cast<std::size_t>(cfg.layers)};
  RnnModel init = RnnModel::initialize(shape, policy, cfg.seed);
  std::vector<double> params = init.parameters();
  const Layout lay(shape);

  std::vector<double> grad(lay.total), m(lay.total, 0.0), v(lay.total, 0.0);
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  std::uint64_t adam_step = 0;

  std::mt19937_64 rng(cfg.seed + 1);
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  const auto batch_size = static_cast<std::size_t>(cfg.batch_size);
  const auto bptt = static_cast<std::size_t>(cfg.bptt_len);

  std::vector<double> trace;
  std::vector<TokenSequence> batch;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    std::size_t epoch_count = 0;
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      batch.clear();
      for (std::size_t j = start; j < std::min(order.size(), start + batch_size); ++j) {
        batch.push_back(corpus[order[j]]);
      }
      std::size_t max_len = 0;
      for (const auto& ts : batch) max_len = std::max(max_len, ts.tokens.size() + 1);
      auto state = zero_state<double>(lay, batch.size());
      for (std::size_t seg_begin = 0; seg_begin < max_len; seg_begin += bptt) {
        std::size_t valid = 0;
        const Segment seg = full_segment(vocab, batch, seg_begin, seg_begin + bptt, &valid);
        if (valid == 0) break;
        std::fill(grad.begin(), grad.end(), 0.0);
        const double sum = run_segment<double>(params.data(), lay, seg, state, cfg.dropout, &rng, grad.data(),
                                       static_cast<double>(valid), nullptr);
        if (!std::isfinite(sum)) {
          fail(ErrorKind::DivergedLoss, "non-finite loss in epoch " + std::to_string(epoch));
        }
        epoch_loss += sum;
        epoch_count += valid;

        double norm2 = 0.0;
        for (double g : grad) norm2 += g * g;
        const double norm = std::sqrt(norm2);
        if (!std::isfinite(norm)) fail(ErrorKind::DivergedLoss, "non-finite gradient");
        const double scale = norm > cfg.grad_clip ? cfg.grad_clip / norm : 1.0;

        ++adam_step;
        const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(adam_step));
        const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(adam_step));
        for (std::size_t i = 0; i < lay.total; ++i) {
          const double g = grad[i] * scale;
          m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g;
          v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g * g;
          params[i] -= cfg.lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + kEps);
        }
      }
    }
    const double mean = epoch_loss / static_cast<double>(epoch_count);
    if (!std::isfinite(mean)) fail(ErrorKind::DivergedLoss, "epoch " + std::to_string(epoch));
    trace.push_back(mean);
  }
  round_to_float(params);
  return RnnTrainResult{RnnModel(shape, policy, std::move(params)), std::move(trace)};
}

GradCheckResult gradcheck_rnn(const RnnModel& model, std::span<const TokenSequence> batch,
                              double epsilon) {
  if (!(epsilon >= 1e-6 && epsilon <= 1e-3)) {
    fail(ErrorKind::InvalidArgument, "epsilon must lie in [1e-6, 1e-3]");
  }
  using Wide = long double;
  std::vector<Wide> params(model.parameters().begin(), model.parameters().end());
  std::vector<Wide> analytic;
  batch_loss<Wide>(model.shape(), params, batch, &analytic);
  GradCheckResult result;
  result.analytic.resize(params.size());
  result.numeric.resize(params.size());
  const Wide eps = epsilon;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Wide saved = params[i];
    params[i] = saved + eps;
    const Wide up = batch_loss<Wide>(model.shape(), params, batch, nullptr);
    params[i] = saved - eps;
    const Wide down = batch_loss<Wide>(model.shape(), params, batch, nullptr);
    params[i] = saved;
    const Wide a = analytic[i];
    const Wide n = (up - down) / (2 * eps);
    const Wide rel = std::abs(a - n) / std::max<Wide>(1e-8L, std::abs(a) + std::abs(n));
    result.analytic[i] = static_cast<double>(a);
    result.numeric[i] = static_cast<double>(n);
    result.max_relative_error = std::max(result.max_relative_error, static_cast<double>(rel));
  }
  return result;
}

std::vector<std::uint8_t> encode_rnn(const RnnModel& model) {
  const auto& s = model.shape();
  ByteWriter out;
  out.magic("SLMR");
  out.u32(kRnnFileVersion);
  out.u32(static_cast<std::uint32_t>(s.units));
  out.u32(static_cast<std::uint32_t>(s.embed));
  out.u32(static_cast<std::uint32_t>(s.hidden));
  out.u32(static_cast<std::uint32_t>(s.layers));
  out.u8(model.policy() == TokenPolicy::Dedup ? 0 : 1);
  for (double p : model.parameters()) out.f32(static_cast<float>(p));
  return out.bytes();
}

RnnModel decode_rnn(std::span<const std::uint8_t> bytes, const std::string& what) {
  ByteReader in(bytes, what);
  in.expect_magic("SLMR");
  const auto version = in.u32();
  if (version != kRnnFileVersion) {
    fail(ErrorKind::UnsupportedFormat, what + ": rnn version " + std::to_string(version));
  }
  RnnShape shape;
  shape.units = in.u32();
  shape.embed = in.u32();
  shape.hidden = in.u32();
  shape.layers = in.u32();
  if (shape.units == 0 || shape.embed == 0 || shape.hidden == 0 || shape.layers == 0) {
    fail(ErrorKind::InvariantViolation, what + ": zero dimension in rnn header");
  }
  const auto policy_byte = in.u8();
  if (policy_byte > 1) fail(ErrorKind::InvariantViolation, what + ": bad policy byte");
  const auto floats = in.f32s(shape.parameter_count());
  if (in.remaining() != 0) fail(ErrorKind::DimensionMismatch, what + ": trailing bytes");
  std::vector<double> params(floats.begin(), floats.end());
  return RnnModel(shape, policy_byte == 0 ? TokenPolicy::Dedup : TokenPolicy::KeepRepeats,
                  std::move(params));
}

void save_rnn(const RnnModel& model, const std::filesystem::path& path) {
  write_file_bytes(path, encode_rnn(model));
}

RnnModel load_rnn(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return decode_rnn(bytes, path.string());
}

}  // namespace slms
