#pragma once

#include "hbw/forward.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace hbw {

/// One accepted donor -> receiver move.
struct SwapRecord {
  std::size_t donor = 0;
  std::size_t removedPosition = 0;
  AtomIndex removedAtom;
  std::size_t receiver = 0;
  AtomIndex addedAtom;
  double deltaDonor = 0.0;     // squared error introduced by the removal
  double deltaReceiver = 0.0;  // squared error removed by the addition
};

struct SwapOptions {
  Criterion criterion = Criterion::Oomp;
  /// 0 selects the default guard of 10 * K swaps.
  std::size_t maxSwaps = 0;
  int reorthogonalizationPasses = 1;
  /// A swap is accepted when deltaReceiver > deltaDonor * (1 + acceptMargin).
  double acceptMargin = 1e-10;
};

struct SwapResult {
  std::vector<SwapRecord> swaps;
  bool guardHit = false;
};

/// Removes position j from a block: the biorthogonal set is downgraded in
/// place, the orthonormal set is recomputed from the remaining atoms, and
/// the residual and accumulator (if kept) are refreshed.
void orthonormal_downdate(BlockState& state, std::size_t j, const TrigDictionary& dict,
                          int passes = 1);

/// Moves atoms between blocks while doing so strictly lowers the total error.
class SwapRefiner {
public:
  SwapRefiner(const TrigDictionary& dict, std::vector<BlockState> states, SwapOptions options);

  /// Attempts one swap. Returns the record if it was accepted; otherwise the
  /// donor block is restored and nullopt is returned.
  std::optional<SwapRecord> step();

  SwapResult run();

  const std::vector<BlockState>& blocks() const { return states_; }
  std::vector<BlockState> release() { return std::move(states_); }
  std::size_t total_atoms() const;
  double residual_energy() const;
  std::vector<AtomicDecomposition> decompositions() const;

private:
  void refresh_donor_score(std::size_t q);
  std::optional<std::size_t> best_receiver() const;

  const TrigDictionary* dict_;
  SwapOptions options_;
  ForwardOptions forward_;
  std::vector<BlockState> states_;
  std::vector<double> donorScore_;
  std::vector<std::size_t> donorPosition_;
};

SwapResult hbw_sbr(std::vector<BlockState>& states, const TrigDictionary& dict,
                   const SwapOptions& options);

}  // namespace hbw
