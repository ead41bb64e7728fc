#pragma once

#include "hbw/forward.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace hbw {

/// Block permutation and grouping used to process long signals.
///
/// permutation[p] is the original index of the block placed at position p
/// of the scrambled signal. Segments group consecutive positions,
/// segmentSize at a time; the last segment may be shorter when blockCount
/// is not a multiple of segmentSize.
struct SegmentPlan {
  std::size_t sampleCount = 0;
  std::size_t blockSize = 0;
  std::size_t blockCount = 0;
  std::size_t padLength = 0;
  std::size_t segmentSize = 0;
  std::size_t segmentCount = 0;
  std::uint64_t seed = 0;
  bool randomized = false;
  std::vector<std::uint32_t> permutation;

  void validate() const;
  std::vector<std::uint32_t> inverse() const;
  /// [begin, end) positions of segment s.
  std::pair<std::size_t, std::size_t> segment_range(std::size_t s) const;

  friend bool operator==(const SegmentPlan&, const SegmentPlan&) = default;
};

/// segmentSize == 0 means a single segment holding every block.
/// With randomize the permutation is a Fisher-Yates shuffle driven by
/// std::mt19937_64 seeded with `seed` (see README for the exact procedure).
SegmentPlan make_plan(std::size_t sampleCount, std::size_t blockSize, std::size_t segmentSize,
                      std::uint64_t seed, bool randomize = true);

/// Fisher-Yates shuffle of {0..n-1}; identical output on every platform.
std::vector<std::uint32_t> seeded_permutation(std::size_t n, std::uint64_t seed);

/// scrambled[p] = blocks[permutation[p]].
Partition apply_permutation(const SegmentPlan& plan, const Partition& blocks);
/// Inverse of apply_permutation.
Partition invert_permutation(const SegmentPlan& plan, const Partition& scrambled);

/// Budget per segment proportional to its block count (largest remainder,
/// earlier segments first); equal segments get equal shares.
std::vector<std::size_t> split_budget(const SegmentPlan& plan, std::size_t totalBudget);

struct SegmentedResult {
  Vector approximation;  // original sample order, trimmed to sampleCount
  std::vector<AtomicDecomposition> decompositions;  // original block order
  std::vector<BlockState> states;                   // original block order
  std::vector<std::size_t> segmentBudgets;
  std::size_t totalAtoms = 0;
};

/// Approximates every segment independently with the HBW forward pursuit
/// and reassembles the result in original block order. Segments may run in
/// parallel (options.jobs); the output does not depend on the job count.
SegmentedResult run_segmented(std::span<const double> signal, const SegmentPlan& plan,
                              const TrigDictionary& dict,
                              std::span<const std::size_t> segmentBudgets,
                              const ForwardOptions& options);

/// Uniform-budget convenience overload.
SegmentedResult run_segmented(std::span<const double> signal, const SegmentPlan& plan,
                              const TrigDictionary& dict, std::size_t perSegmentBudget,
                              const ForwardOptions& options);

}  // namespace hbw
