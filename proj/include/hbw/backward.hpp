#pragma once

#include "hbw/pursuit_core.hpp"

#include <cstddef>
#include <limits>
#include <vector>

namespace hbw {

/// Backward view of one block: only what removal needs (gamma, b_n, c_n).
struct BackwardBlock {
  std::size_t index = 0;
  std::vector<AtomIndex> gamma;
  ColumnSet biorthogonal;
  std::vector<double> coefficients;
  /// Cached removal candidate (0-based position) and its score |c_j|/||b_j||.
  std::size_t candidate = 0;
  double score = std::numeric_limits<double>::infinity();

  std::size_t k() const { return gamma.size(); }
};

class BackwardState {
public:
  BackwardState() = default;
  explicit BackwardState(std::vector<BackwardBlock> blocks);

  /// Takes gamma and b_n from forward states; c_n = <b_n, f>.
  static BackwardState from_blocks(const std::vector<BlockState>& states);

  /// Rebuilds b_n from the atoms of each decomposition; coefficients are
  /// taken as given.
  static BackwardState from_decompositions(const std::vector<AtomicDecomposition>& decompositions,
                                           const TrigDictionary& dict, int passes = 1);

  std::vector<BackwardBlock>& blocks() { return blocks_; }
  const std::vector<BackwardBlock>& blocks() const { return blocks_; }
  std::size_t total_atoms() const;

  std::vector<AtomicDecomposition> decompositions() const;

  /// Recomputes the cached candidate and score of block q.
  void refresh(std::size_t q);

private:
  std::vector<BackwardBlock> blocks_;
};

/// Position j (0-based) minimizing |c_j| / ||b_j||, lowest j on ties.
std::size_t select_removal(const BackwardBlock& block);
std::size_t select_removal(const BackwardState& state, std::size_t q);

/// Block holding the smallest cached score, lowest q on ties.
std::size_t select_donor_block(const BackwardState& state);

/// Squared norm added to the approximation error by removing position j:
/// |c_j|^2 / ||b_j||^2.
double removal_cost(const BackwardBlock& block, std::size_t j);

/// Removes position j of block q, updating b_n and c_n, and refreshes the
/// block's candidate.
void backward_remove(BackwardState& state, std::size_t q, std::size_t j);

/// Same update applied to a plain coefficient list and biorthogonal set.
void backward_remove(ColumnSet& biorthogonal, std::vector<double>& coefficients, std::size_t j);

struct RemovalRecord {
  std::size_t block = 0;
  std::size_t position = 0;
  AtomIndex atom;
  double errorIncrease = 0.0;
};

/// Stepwise optimal removal across blocks until the total reaches targetAtoms.
std::vector<RemovalRecord> hbw_boomp_downgrade(BackwardState& state, std::size_t targetAtoms);

/// Removes atoms while the resulting SNR stays at or above targetDb.
/// signalEnergy is ||f||^2 and errorEnergy the current ||f - f^a||^2; on
/// return errorEnergy holds the downgraded error.
std::vector<RemovalRecord> hbw_boomp_downgrade_to_snr(BackwardState& state, double signalEnergy,
                                                      double& errorEnergy, double targetDb);

}  // namespace hbw
