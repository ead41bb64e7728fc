#include "hbw/segmentation.hpp"

#include "hbw/error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

namespace hbw {

namespace {

// Unbiased draw from [0, bound] by rejection; depends only on the engine's
// output sequence, which the standard fixes for mt19937_64.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t range = bound + 1;
  if (range == 0) return rng();
  const std::uint64_t threshold = (0 - range) % range;
  std::uint64_t x = rng();
  while (x < threshold) x = rng();
  return x % range;
}

}  // namespace

void SegmentPlan::validate() const {
  if (blockSize == 0) throw Error(ErrorCode::InvalidArgument, "block size must be positive");
  if (blockCount != (sampleCount + blockSize - 1) / blockSize ||
      padLength != blockCount * blockSize - sampleCount)
    throw Error(ErrorCode::InvalidArgument, "plan sizes are inconsistent");
  if (permutation.size() != blockCount)
    throw Error(ErrorCode::InvalidArgument, "permutation length differs from the block count");
  std::vector<char> seen(blockCount, 0);
  for (auto p : permutation) {
    if (p >= blockCount || seen[p]) throw Error(ErrorCode::InvalidArgument, "permutation is not a bijection");
    seen[p] = 1;
  }
  if (blockCount > 0) {
    if (segmentSize == 0 || segmentCount != (blockCount + segmentSize - 1) / segmentSize)
      throw Error(ErrorCode::InvalidArgument, "segment sizes are inconsistent");
  } else if (segmentCount != 0) {
    throw Error(ErrorCode::InvalidArgument, "segment sizes are inconsistent");
  }
}

std::vector<std::uint32_t> SegmentPlan::inverse() const {
  std::vector<std::uint32_t> inv(permutation.size());
  for (std::size_t p = 0; p < permutation.size(); ++p) inv[permutation[p]] = static_cast<std::uint32_t>(p);
  return inv;
}

std::pair<std::size_t, std::size_t> SegmentPlan::segment_range(std::size_t s) const {
  if (s >= segmentCount) throw Error(ErrorCode::IndexOutOfRange, "segment index out of range");
  const std::size_t begin = s * segmentSize;
  return {begin, std::min(blockCount, begin + segmentSize)};
}

std::vector<std::uint32_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(bounded(rng, i - 1));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

SegmentPlan make_plan(std::size_t sampleCount, std::size_t blockSize, std::size_t segmentSize,
                      std::uint64_t seed, bool randomize) {
  if (blockSize == 0) throw Error(ErrorCode::InvalidArgument, "block size must be positive");
  SegmentPlan plan;
  plan.sampleCount = sampleCount;
  plan.blockSize = blockSize;
  plan.blockCount = (sampleCount + blockSize - 1) / blockSize;
  if (plan.blockCount > std::numeric_limits<std::uint32_t>::max())
    throw Error(ErrorCode::InvalidArgument, "too many blocks");
  plan.padLength = plan.blockCount * blockSize - sampleCount;
  plan.segmentSize = segmentSize == 0 || segmentSize > plan.blockCount ? plan.blockCount : segmentSize;
  plan.segmentCount = plan.blockCount == 0 ? 0 : (plan.blockCount + plan.segmentSize - 1) / plan.segmentSize;
  plan.seed = seed;
  plan.randomized = randomize;
  if (randomize) {
    plan.permutation = seeded_permutation(plan.blockCount, seed);
  } else {
    plan.permutation.resize(plan.blockCount);
    std::iota(plan.permutation.begin(), plan.permutation.end(), 0u);
  }
  return plan;
}

Partition apply_permutation(const SegmentPlan& plan, const Partition& blocks) {
  if (blocks.size() != plan.permutation.size())
    throw Error(ErrorCode::LengthMismatch, "block count differs from the plan");
  Partition out;
  out.reserve(blocks.size());
  for (auto original : plan.permutation) out.push_back(blocks[original]);
  return out;
}

Partition invert_permutation(const SegmentPlan& plan, const Partition& scrambled) {
  if (scrambled.size() != plan.permutation.size())
    throw Error(ErrorCode::LengthMismatch, "block count differs from the plan");
  Partition out(scrambled.size());
  for (std::size_t p = 0; p < scrambled.size(); ++p) out[plan.permutation[p]] = scrambled[p];
  return out;
}

std::vector<std::size_t> split_budget(const SegmentPlan& plan, std::size_t totalBudget) {
  std::vector<std::size_t> budgets(plan.segmentCount, 0);
  if (plan.segmentCount == 0) return budgets;
  std::vector<std::size_t> remainders(plan.segmentCount);
  std::size_t assigned = 0;
  for (std::size_t s = 0; s < plan.segmentCount; ++s) {
    const auto [b, e] = plan.segment_range(s);
    const std::size_t scaled = totalBudget * (e - b);
    budgets[s] = scaled / plan.blockCount;
    remainders[s] = scaled % plan.blockCount;
    assigned += budgets[s];
  }
  std::vector<std::size_t> order(plan.segmentCount);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t i = 0; assigned < totalBudget; ++i, ++assigned) ++budgets[order[i]];
  return budgets;
}

SegmentedResult run_segmented(std::span<const double> signal, const SegmentPlan& plan,
                              const TrigDictionary& dict,
                              std::span<const std::size_t> segmentBudgets,
                              const ForwardOptions& options) {
  plan.validate();
  if (plan.sampleCount != signal.size() || plan.blockSize != dict.block_size())
    throw Error(ErrorCode::InvalidArgument, "plan does not match the signal or dictionary");
  if (segmentBudgets.size() != plan.segmentCount)
    throw Error(ErrorCode::InvalidArgument, "one budget per segment is required");

  const Partition scrambled = apply_permutation(plan, split_blocks(signal, plan.blockSize));
  std::vector<std::vector<BlockState>> segmentStates(plan.segmentCount);

  ForwardOptions inner = options;
  inner.jobs = plan.segmentCount > 1 ? 1 : options.jobs;
  detail::parallel_for(plan.segmentCount, options.jobs, [&](std::size_t s) {
    const auto [begin, end] = plan.segment_range(s);
    const Partition segment(scrambled.begin() + static_cast<std::ptrdiff_t>(begin),
                            scrambled.begin() + static_cast<std::ptrdiff_t>(end));
    HbwPursuit pursuit(dict, segment, inner);
    pursuit.run(segmentBudgets[s]);
    segmentStates[s] = pursuit.release();
  });

  SegmentedResult result;
  result.segmentBudgets.assign(segmentBudgets.begin(), segmentBudgets.end());
  result.states.resize(plan.blockCount);
  for (std::size_t s = 0; s < plan.segmentCount; ++s) {
    const std::size_t begin = plan.segment_range(s).first;
    for (std::size_t i = 0; i < segmentStates[s].size(); ++i) {
      BlockState& st = segmentStates[s][i];
      const std::size_t original = plan.permutation[begin + i];
      st.index = original;
      result.states[original] = std::move(st);
    }
  }
  Partition parts;
  parts.reserve(plan.blockCount);
  for (const auto& st : result.states) {
    result.totalAtoms += st.k();
    result.decompositions.push_back(coefficients(st));
    parts.push_back(st.signal - st.residual);
  }
  result.approximation = join_blocks(parts, plan.sampleCount);
  return result;
}

SegmentedResult run_segmented(std::span<const double> signal, const SegmentPlan& plan,
                              const TrigDictionary& dict, std::size_t perSegmentBudget,
                              const ForwardOptions& options) {
  const std::vector<std::size_t> budgets(plan.segmentCount, perSegmentBudget);
  return run_segmented(signal, plan, dict, budgets, options);
}

}  // namespace hbw
