#pragma once

#include "hbw/io.hpp"
#include "hbw/metrics.hpp"
#include "hbw/swap_refine.hpp"

#include <cstdint>
#include <optional>
#include <span>

namespace hbw {

/// Whole-signal driver settings used by the CLI and the C API.
struct ApproximateConfig {
  DictionarySpec dictionary;
  Strategy strategy = Strategy::Hbw;  // Independent or Hbw
  Criterion criterion = Criterion::Oomp;
  Ranking ranking = Ranking::Optimized;
  /// Exactly one of budget / targetSnr must be set. With a target SNR the
  /// HBW budget is the atom count block-independent pursuit needs to reach
  /// that SNR in every block.
  std::optional<std::size_t> budget;
  std::optional<double> targetSnr;
  /// Blocks per segment; 0 processes the whole signal as one segment.
  std::size_t segmentBlocks = 0;
  std::uint64_t seed = 0;
  /// Shuffle blocks before segmenting (only meaningful with segmentBlocks > 0).
  bool randomize = true;
  std::size_t jobs = 1;
};

DecompositionFile approximate(std::span<const double> signal, std::uint32_t sampleRate,
                              const ApproximateConfig& config);

/// HBW-BOOMP downgrade of a stored decomposition to `budget` atoms.
DecompositionFile downgrade(const DecompositionFile& file, std::size_t budget);

/// HBW-BOOMP downgrade that keeps removing atoms while SNR >= targetDb.
DecompositionFile downgrade_to_snr(const DecompositionFile& file, std::span<const double> signal,
                                   double targetDb);

struct RefineOutcome {
  DecompositionFile file;
  SwapResult swaps;
};

/// HBW-SbR refinement of a stored decomposition against its signal.
RefineOutcome refine(const DecompositionFile& file, std::span<const double> signal,
                     Criterion criterion, std::size_t maxSwaps = 0, std::size_t jobs = 1);

QualityReport report(const DecompositionFile& file, std::span<const double> signal);

/// Per-block states (gamma, orthonormal and biorthogonal sets, residual)
/// rebuilt from a stored decomposition and its signal.
std::vector<BlockState> rebuild_states(const DecompositionFile& file, std::span<const double> signal,
                                       const TrigDictionary& dict, bool withAccumulator,
                                       std::size_t jobs = 1);

}  // namespace hbw
