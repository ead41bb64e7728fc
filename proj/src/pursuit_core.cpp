#include "hbw/pursuit_core.hpp"

#include "hbw/error.hpp"

#include <algorithm>

namespace hbw {

void ColumnSet::push_back(const Vector& v) {
  if (rows_ == 0) rows_ = static_cast<std::size_t>(v.size());
  if (static_cast<std::size_t>(v.size()) != rows_)
    throw Error(ErrorCode::LengthMismatch, "column length differs from the set's row count");
  if (static_cast<Eigen::Index>(count_) == data_.cols()) {
    const Eigen::Index capacity = std::max<Eigen::Index>(4, 2 * data_.cols());
    data_.conservativeResize(static_cast<Eigen::Index>(rows_), capacity);
  }
  data_.col(static_cast<Eigen::Index>(count_)) = v;
  ++count_;
}

void ColumnSet::erase(std::size_t i) {
  if (i >= count_) throw Error(ErrorCode::IndexOutOfRange, "column position out of range");
  const auto tail = static_cast<Eigen::Index>(count_ - 1 - i);
  if (tail > 0)
    data_.middleCols(static_cast<Eigen::Index>(i), tail) =
        data_.middleCols(static_cast<Eigen::Index>(i + 1), tail).eval();
  --count_;
}

BlockState BlockState::make(std::size_t index, Vector signal, std::size_t atomCount,
                            bool withAccumulator) {
  BlockState s;
  s.index = index;
  const auto rows = static_cast<std::size_t>(signal.size());
  s.residual = signal;
  s.signal = std::move(signal);
  s.orthonormal = ColumnSet(rows);
  s.biorthogonal = ColumnSet(rows);
  if (withAccumulator) s.accumulator = Vector::Zero(static_cast<Eigen::Index>(atomCount));
  return s;
}

Orthogonalized orthogonalize(const BlockState& state, const Vector& d, int passes) {
  if (d.size() != state.signal.size())
    throw Error(ErrorCode::LengthMismatch, "atom length differs from the block length");
  Vector w = d;
  if (!state.orthonormal.empty()) {
    const auto Q = state.orthonormal.cols();
    w.noalias() -= Q * (Q.transpose() * d);
    for (int p = 0; p < passes; ++p) w.noalias() -= Q * (Q.transpose() * w);
  }
  const double norm = w.norm();
  if (!(norm >= kSpanTolerance * d.norm()) || norm == 0.0)
    throw Error(ErrorCode::DegenerateAtom, "atom lies numerically in the selected span");
  return {w / norm, norm};
}

Orthogonalized extend_orthonormal(BlockState& state, const Vector& d, int passes) {
  Orthogonalized o = orthogonalize(state, d, passes);
  extend_orthonormal(state, o);
  return o;
}

void extend_orthonormal(BlockState& state, const Orthogonalized& o) {
  state.orthonormal.push_back(o.unit);
  state.rawNorms.push_back(o.norm);
}

void extend_biorthogonal(BlockState& state, const Vector& d) {
  const std::size_t k = state.biorthogonal.size();
  if (state.orthonormal.size() != k + 1)
    throw Error(ErrorCode::InvalidArgument, "biorthogonal upgrade needs a fresh orthonormal vector");
  const Vector bNew = state.orthonormal.col(k) / state.rawNorms[k];
  if (k > 0) {
    auto B = state.biorthogonal.cols();
    const Eigen::RowVectorXd proj = d.transpose() * B;
    B.noalias() -= bNew * proj;
  }
  state.biorthogonal.push_back(bNew);
}

void update_residual(BlockState& state) {
  if (state.orthonormal.empty()) return;
  const auto wt = state.orthonormal.col(state.orthonormal.size() - 1);
  state.residual.noalias() -= wt * wt.dot(state.signal);
}

void commit_atom(BlockState& state, AtomIndex atom, const Vector& d, const Orthogonalized& o) {
  extend_orthonormal(state, o);
  extend_biorthogonal(state, d);
  state.gamma.push_back(atom);
  update_residual(state);
}

AtomicDecomposition coefficients(const BlockState& state) {
  AtomicDecomposition out;
  out.block = state.index;
  out.entries.reserve(state.k());
  if (state.k() == 0) return out;
  const Vector c = state.biorthogonal.cols().transpose() * state.signal;
  for (std::size_t n = 0; n < state.k(); ++n)
    out.entries.push_back({state.gamma[n], c(static_cast<Eigen::Index>(n))});
  return out;
}

Vector synthesize(const AtomicDecomposition& decomposition, const TrigDictionary& dict) {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(dict.block_size()));
  for (const auto& e : decomposition.entries) out += e.coefficient * dict.atom(e.atom);
  return out;
}

namespace {

void reset_residual(BlockState& state) {
  state.residual = state.signal;
  for (std::size_t i = 0; i < state.orthonormal.size(); ++i) {
    const auto wt = state.orthonormal.col(i);
    state.residual.noalias() -= wt * wt.dot(state.signal);
  }
}

}  // namespace

void rebuild_orthonormal(BlockState& state, const TrigDictionary& dict, int passes) {
  state.orthonormal.clear();
  state.rawNorms.clear();
  for (AtomIndex a : state.gamma) extend_orthonormal(state, dict.atom(a), passes);
  reset_residual(state);
}

void rebuild_bases(BlockState& state, const TrigDictionary& dict, int passes) {
  state.orthonormal.clear();
  state.rawNorms.clear();
  state.biorthogonal.clear();
  for (AtomIndex a : state.gamma) {
    const Vector d = dict.atom(a);
    extend_orthonormal(state, d, passes);
    extend_biorthogonal(state, d);
  }
  reset_residual(state);
}

void recompute_accumulator(BlockState& state, const TrigDictionary& dict) {
  state.accumulator = Vector::Zero(static_cast<Eigen::Index>(dict.size()));
  Vector p(static_cast<Eigen::Index>(dict.size()));
  for (std::size_t i = 0; i < state.orthonormal.size(); ++i) {
    const Vector wt = state.orthonormal.col(i);
    dict.inner_products(std::span<const double>(wt.data(), dict.block_size()),
                        std::span<double>(p.data(), dict.size()));
    state.accumulator += p.cwiseAbs2();
  }
}

void remove_biorthogonal(ColumnSet& biorthogonal, std::size_t j) {
  if (j >= biorthogonal.size())
    throw Error(ErrorCode::IndexOutOfRange, "biorthogonal position out of range");
  const Vector bj = biorthogonal.col(j);
  const double nj = bj.squaredNorm();
  auto B = biorthogonal.cols();
  const Eigen::RowVectorXd g = (bj.transpose() * B) / nj;
  B.noalias() -= bj * g;
  biorthogonal.erase(j);
}

Partition split_blocks(std::span<const double> signal, std::size_t blockSize,
                       std::size_t* padLength) {
  if (blockSize == 0) throw Error(ErrorCode::InvalidArgument, "block size must be positive");
  const std::size_t Q = (signal.size() + blockSize - 1) / blockSize;
  Partition blocks;
  blocks.reserve(Q);
  for (std::size_t q = 0; q < Q; ++q) {
    Vector b = Vector::Zero(static_cast<Eigen::Index>(blockSize));
    const std::size_t begin = q * blockSize;
    const std::size_t end = std::min(signal.size(), begin + blockSize);
    for (std::size_t i = begin; i < end; ++i) b(static_cast<Eigen::Index>(i - begin)) = signal[i];
    blocks.push_back(std::move(b));
  }
  if (padLength) *padLength = Q * blockSize - signal.size();
  return blocks;
}

Vector join_blocks(const Partition& blocks, std::size_t length) {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(length));
  std::size_t pos = 0;
  for (const auto& b : blocks) {
    for (Eigen::Index i = 0; i < b.size() && pos < length; ++i) out(static_cast<Eigen::Index>(pos++)) = b(i);
  }
  return out;
}

double squared_norm(const Partition& blocks) {
  double e = 0.0;
  for (const auto& b : blocks) e += b.squaredNorm();
  return e;
}

}  // namespace hbw
