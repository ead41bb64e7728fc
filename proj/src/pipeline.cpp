#include "hbw/pipeline.hpp"

#include "hbw/backward.hpp"
#include "hbw/error.hpp"
#include "parallel.hpp"

#include <limits>
#include <sstream>

namespace hbw {

namespace {

std::string describe(const ApproximateConfig& c) {
  std::ostringstream os;
  os << "approximate dict=" << c.dictionary.label() << " block=" << c.dictionary.blockSize
     << " strategy=" << to_string(c.strategy)
     << " criterion=" << (c.criterion == Criterion::Omp ? "omp" : "oomp")
     << " ranking=" << (c.ranking == Ranking::Optimized ? "optimized" : "legacy");
  if (c.budget) os << " budget=" << *c.budget;
  if (c.targetSnr) os << " target-snr=" << *c.targetSnr;
  if (c.segmentBlocks) os << " segment-blocks=" << c.segmentBlocks << " seed=" << c.seed;
  return os.str();
}

ForwardOptions forward_options(const ApproximateConfig& c) {
  ForwardOptions o;
  o.criterion = c.criterion;
  o.ranking = c.ranking;
  o.jobs = c.jobs == 0 ? 1 : c.jobs;
  return o;
}

}  // namespace

DecompositionFile approximate(std::span<const double> signal, std::uint32_t sampleRate,
                              const ApproximateConfig& config) {
  config.dictionary.validate();
  if (config.budget.has_value() == config.targetSnr.has_value())
    throw Error(ErrorCode::InvalidArgument, "give exactly one of a budget or a target SNR");
  if (config.strategy != Strategy::Independent && config.strategy != Strategy::Hbw)
    throw Error(ErrorCode::InvalidArgument, "approximate supports the independent and hbw strategies");

  const TrigDictionary dict(config.dictionary);
  const std::size_t Nb = config.dictionary.blockSize;
  const ForwardOptions options = forward_options(config);

  DecompositionFile file;
  file.sampleCount = signal.size();
  file.sampleRate = sampleRate;
  file.dictionary = config.dictionary;
  file.strategy = config.strategy;
  file.criterion = config.criterion;
  file.ranking = config.ranking;
  file.provenance = describe(config);

  const bool segmented = config.strategy == Strategy::Hbw && config.segmentBlocks > 0;
  file.plan = make_plan(signal.size(), Nb, segmented ? config.segmentBlocks : 0, config.seed,
                        segmented && config.randomize);
  const SegmentPlan& plan = file.plan;
  if (config.budget && *config.budget > plan.blockCount * Nb)
    throw Error(ErrorCode::BudgetInfeasible, "budget exceeds the number of samples");

  const Partition blocks = split_blocks(signal, Nb);

  if (config.strategy == Strategy::Independent) {
    StopRule stop = config.budget ? StopRule(AtomTable{spread_budget(*config.budget, blocks.size())})
                                  : StopRule(TargetSnr{*config.targetSnr});
    ForwardResult r = block_independent_approximate(blocks, dict, stop, options);
    file.blocks = std::move(r.decompositions);
    return file;
  }

  std::vector<std::size_t> budgets;
  if (config.budget) {
    budgets = split_budget(plan, *config.budget);
  } else {
    const ForwardResult baseline =
        block_independent_approximate(blocks, dict, TargetSnr{*config.targetSnr}, options);
    budgets.assign(plan.segmentCount, 0);
    for (std::size_t s = 0; s < plan.segmentCount; ++s) {
      const auto [b, e] = plan.segment_range(s);
      for (std::size_t p = b; p < e; ++p) budgets[s] += baseline.states[plan.permutation[p]].k();
    }
  }
  SegmentedResult r = run_segmented(signal, plan, dict, budgets, options);
  file.blocks = std::move(r.decompositions);
  return file;
}

DecompositionFile downgrade(const DecompositionFile& file, std::size_t budget) {
  const TrigDictionary dict(file.dictionary);
  BackwardState state = BackwardState::from_decompositions(file.blocks, dict);
  hbw_boomp_downgrade(state, budget);
  DecompositionFile out = file;
  out.blocks = state.decompositions();
  if (budget != file.total_atoms()) {
    out.strategy = Strategy::HbwBoomp;
    out.provenance += "; downgrade budget=" + std::to_string(budget);
  }
  return out;
}

DecompositionFile downgrade_to_snr(const DecompositionFile& file, std::span<const double> signal,
                                   double targetDb) {
  if (signal.size() != file.sampleCount)
    throw Error(ErrorCode::LengthMismatch, "signal length differs from the decomposition");
  const TrigDictionary dict(file.dictionary);
  BackwardState state = BackwardState::from_decompositions(file.blocks, dict);
  const Vector fa = reconstruct(file, dict);
  double energy = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i < signal.size(); ++i) {
    energy += signal[i] * signal[i];
    const double e = signal[i] - fa(static_cast<Eigen::Index>(i));
    error += e * e;
  }
  const auto removals = hbw_boomp_downgrade_to_snr(state, energy, error, targetDb);
  DecompositionFile out = file;
  out.blocks = state.decompositions();
  if (!removals.empty()) {
    out.strategy = Strategy::HbwBoomp;
    std::ostringstream os;
    os << "; downgrade target-snr=" << targetDb;
    out.provenance += os.str();
  }
  return out;
}

std::vector<BlockState> rebuild_states(const DecompositionFile& file, std::span<const double> signal,
                                       const TrigDictionary& dict, bool withAccumulator,
                                       std::size_t jobs) {
  if (signal.size() != file.sampleCount)
    throw Error(ErrorCode::LengthMismatch, "signal length differs from the decomposition");
  const Partition blocks = split_blocks(signal, file.dictionary.blockSize);
  std::vector<BlockState> states(blocks.size());
  detail::parallel_for(blocks.size(), jobs, [&](std::size_t q) {
    BlockState s = BlockState::make(q, blocks[q], dict.size(), false);
    for (const auto& e : file.blocks[q].entries) s.gamma.push_back(e.atom);
    try {
      rebuild_bases(s, dict);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DegenerateAtom)
        throw Error(ErrorCode::Format, "stored atoms of a block are linearly dependent");
      throw;
    }
    if (withAccumulator) recompute_accumulator(s, dict);
    states[q] = std::move(s);
  });
  return states;
}

RefineOutcome refine(const DecompositionFile& file, std::span<const double> signal,
                     Criterion criterion, std::size_t maxSwaps, std::size_t jobs) {
  const TrigDictionary dict(file.dictionary);
  std::vector<BlockState> states =
      rebuild_states(file, signal, dict, criterion == Criterion::Oomp, jobs == 0 ? 1 : jobs);
  SwapOptions options;
  options.criterion = criterion;
  options.maxSwaps = maxSwaps;
  RefineOutcome out;
  out.swaps = hbw_sbr(states, dict, options);
  out.file = file;
  out.file.blocks.clear();
  for (const auto& s : states) out.file.blocks.push_back(coefficients(s));
  out.file.strategy = Strategy::HbwSbr;
  out.file.criterion = criterion;
  out.file.provenance += std::string("; refine criterion=") + (criterion == Criterion::Omp ? "omp" : "oomp") +
                         " swaps=" + std::to_string(out.swaps.swaps.size());
  return out;
}

QualityReport report(const DecompositionFile& file, std::span<const double> signal) {
  if (signal.size() != file.sampleCount)
    throw Error(ErrorCode::LengthMismatch, "signal length differs from the decomposition");
  const TrigDictionary dict(file.dictionary);
  const Vector fa = reconstruct(file, dict);
  QualityReport r;
  r.samples = signal.size();
  r.coefficients = file.total_atoms();
  r.sr = sparsity_ratio(r.samples, r.coefficients);
  r.snr = snr_db(signal, std::span<const double>(fa.data(), static_cast<std::size_t>(fa.size())));
  const std::size_t Nb = file.dictionary.blockSize;
  for (std::size_t q = 0; q < file.blocks.size(); ++q) {
    const std::size_t begin = q * Nb;
    const std::size_t len = std::min(Nb, signal.size() - begin);
    double energy = 0.0;
    for (std::size_t i = 0; i < len; ++i) energy += signal[begin + i] * signal[begin + i];
    r.blockSnr.push_back(energy == 0.0 ? std::numeric_limits<double>::infinity()
                                       : snr_db(signal.subspan(begin, len),
                                                std::span<const double>(fa.data() + begin, len)));
  }
  return r;
}

}  // namespace hbw
