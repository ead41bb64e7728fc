#include "hbw/backward.hpp"

#include "hbw/error.hpp"

#include <cmath>

namespace hbw {

BackwardState::BackwardState(std::vector<BackwardBlock> blocks) : blocks_(std::move(blocks)) {
  for (std::size_t q = 0; q < blocks_.size(); ++q) refresh(q);
}

BackwardState BackwardState::from_blocks(const std::vector<BlockState>& states) {
  std::vector<BackwardBlock> blocks;
  blocks.reserve(states.size());
  for (const auto& s : states) {
    BackwardBlock b;
    b.index = s.index;
    b.gamma = s.gamma;
    b.biorthogonal = s.biorthogonal;
    for (const auto& e : coefficients(s).entries) b.coefficients.push_back(e.coefficient);
    blocks.push_back(std::move(b));
  }
  return BackwardState(std::move(blocks));
}

BackwardState BackwardState::from_decompositions(
    const std::vector<AtomicDecomposition>& decompositions, const TrigDictionary& dict,
    int passes) {
  std::vector<BackwardBlock> blocks;
  blocks.reserve(decompositions.size());
  for (const auto& d : decompositions) {
    BlockState s = BlockState::make(d.block, Vector::Zero(static_cast<Eigen::Index>(dict.block_size())),
                                    dict.size(), false);
    for (const auto& e : d.entries) s.gamma.push_back(e.atom);
    rebuild_bases(s, dict, passes);
    BackwardBlock b;
    b.index = d.block;
    b.gamma = std::move(s.gamma);
    b.biorthogonal = std::move(s.biorthogonal);
    for (const auto& e : d.entries) b.coefficients.push_back(e.coefficient);
    blocks.push_back(std::move(b));
  }
  return BackwardState(std::move(blocks));
}

std::size_t BackwardState::total_atoms() const {
  std::size_t total = 0;
  for (const auto& b : blocks_) total += b.k();
  return total;
}

std::vector<AtomicDecomposition> BackwardState::decompositions() const {
  std::vector<AtomicDecomposition> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) {
    AtomicDecomposition d;
    d.block = b.index;
    for (std::size_t n = 0; n < b.k(); ++n) d.entries.push_back({b.gamma[n], b.coefficients[n]});
    out.push_back(std::move(d));
  }
  return out;
}

void BackwardState::refresh(std::size_t q) {
  BackwardBlock& b = blocks_.at(q);
  if (b.k() == 0) {
    b.candidate = 0;
    b.score = std::numeric_limits<double>::infinity();
    return;
  }
  b.candidate = select_removal(b);
  b.score = std::abs(b.coefficients[b.candidate]) / b.biorthogonal.col(b.candidate).norm();
}

std::size_t select_removal(const BackwardBlock& block) {
  if (block.k() == 0) throw Error(ErrorCode::EmptyBlock, "cannot remove an atom from an empty block");
  std::size_t best = 0;
  double bestScore = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < block.k(); ++j) {
    const double score = std::abs(block.coefficients[j]) / block.biorthogonal.col(j).norm();
    if (score < bestScore) {
      bestScore = score;
      best = j;
    }
  }
  return best;
}

std::size_t select_removal(const BackwardState& state, std::size_t q) {
  return select_removal(state.blocks().at(q));
}

std::size_t select_donor_block(const BackwardState& state) {
  const auto& blocks = state.blocks();
  std::size_t best = blocks.size();
  double bestScore = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < blocks.size(); ++q) {
    if (blocks[q].k() == 0) continue;
    if (best == blocks.size() || blocks[q].score < bestScore) {
      bestScore = blocks[q].score;
      best = q;
    }
  }
  if (best == blocks.size()) throw Error(ErrorCode::EmptyBlock, "every block is empty");
  return best;
}

double removal_cost(const BackwardBlock& block, std::size_t j) {
  if (j >= block.k()) throw Error(ErrorCode::IndexOutOfRange, "removal position out of range");
  const double c = block.coefficients[j];
  // ||b_j|| = 1 / ||d_j - P d_j|| with P the projector onto the other atoms
  return c * c / block.biorthogonal.col(j).squaredNorm();
}

void backward_remove(ColumnSet& biorthogonal, std::vector<double>& coefficients, std::size_t j) {
  if (j >= coefficients.size() || coefficients.size() != biorthogonal.size())
    throw Error(ErrorCode::IndexOutOfRange, "removal position out of range");
  const Vector bj = biorthogonal.col(j);
  const double nj = bj.squaredNorm();
  const Eigen::RowVectorXd g = (bj.transpose() * biorthogonal.cols()) / nj;
  const double cj = coefficients[j];
  for (std::size_t n = 0; n < coefficients.size(); ++n)
    if (n != j) coefficients[n] -= cj * g(static_cast<Eigen::Index>(n));
  coefficients.erase(coefficients.begin() + static_cast<std::ptrdiff_t>(j));
  remove_biorthogonal(biorthogonal, j);
}

void backward_remove(BackwardState& state, std::size_t q, std::size_t j) {
  BackwardBlock& b = state.blocks().at(q);
  if (j >= b.k()) throw Error(ErrorCode::IndexOutOfRange, "removal position out of range");
  backward_remove(b.biorthogonal, b.coefficients, j);
  b.gamma.erase(b.gamma.begin() + static_cast<std::ptrdiff_t>(j));
  state.refresh(q);
}

std::vector<RemovalRecord> hbw_boomp_downgrade(BackwardState& state, std::size_t targetAtoms) {
  std::size_t total = state.total_atoms();
  if (targetAtoms > total)
    throw Error(ErrorCode::BudgetInfeasible, "downgrade target exceeds the current atom count");
  std::vector<RemovalRecord> records;
  records.reserve(total - targetAtoms);
  while (total > targetAtoms) {
    const std::size_t q = select_donor_block(state);
    const BackwardBlock& b = state.blocks()[q];
    const std::size_t j = b.candidate;
    records.push_back({q, j, b.gamma[j], removal_cost(b, j)});
    backward_remove(state, q, j);
    --total;
  }
  return records;
}

std::vector<RemovalRecord> hbw_boomp_downgrade_to_snr(BackwardState& state, double signalEnergy,
                                                      double& errorEnergy, double targetDb) {
  if (!(signalEnergy > 0.0)) throw Error(ErrorCode::InvalidArgument, "signal has zero energy");
  const double maxError = signalEnergy / std::pow(10.0, targetDb / 10.0);
  std::vector<RemovalRecord> records;
  while (state.total_atoms() > 0) {
    const std::size_t q = select_donor_block(state);
    const BackwardBlock& b = state.blocks()[q];
    const std::size_t j = b.candidate;
    const double cost = removal_cost(b, j);
    if (errorEnergy + cost > maxError) break;
    records.push_back({q, j, b.gamma[j], cost});
    errorEnergy += cost;
    backward_remove(state, q, j);
  }
  return records;
}

}  // namespace hbw
