#include "hbw/forward.hpp"

#include "hbw/error.hpp"
#include "parallel.hpp"

#include <cmath>
#include <limits>

namespace hbw {

namespace {

struct Selection {
  AtomIndex atom;
  double innerProduct = 0.0;
};

std::vector<char> selected_mask(const BlockState& state, std::size_t M) {
  std::vector<char> mask(M, 0);
  for (AtomIndex a : state.gamma) mask[a.zero_based()] = 1;
  return mask;
}

Selection select_impl(const BlockState& state, const TrigDictionary& dict, Criterion criterion) {
  if (criterion == Criterion::Oomp && !state.has_accumulator())
    throw Error(ErrorCode::InvalidArgument, "OOMP selection needs the block accumulator");
  const std::size_t M = dict.size();
  const Vector p = dict.inner_products(
      std::span<const double>(state.residual.data(), static_cast<std::size_t>(state.residual.size())));
  const std::vector<char> mask = selected_mask(state, M);
  const double floor = kSelectTolerance * state.signal.norm();

  double bestScore = -1.0;
  double bestMagnitude = 0.0;
  std::size_t best = M;
  for (std::size_t n = 0; n < M; ++n) {
    if (mask[n]) continue;
    const double magnitude = std::abs(p(static_cast<Eigen::Index>(n)));
    double score = magnitude;
    if (criterion == Criterion::Oomp) {
      const double den = 1.0 - state.accumulator(static_cast<Eigen::Index>(n));
      if (den <= kDenominatorTolerance) continue;
      score = magnitude / std::sqrt(den);
    }
    if (score > bestScore) {
      bestScore = score;
      bestMagnitude = magnitude;
      best = n;
    }
  }
  if (best == M || bestMagnitude <= floor)
    throw Error(ErrorCode::BlockExhausted, "no candidate atom correlates with the residual");
  return {AtomIndex::from_zero_based(best), p(static_cast<Eigen::Index>(best))};
}

}  // namespace

AtomIndex select_atom_omp(const BlockState& state, const TrigDictionary& dict) {
  return select_impl(state, dict, Criterion::Omp).atom;
}

AtomIndex select_atom_oomp(const BlockState& state, const TrigDictionary& dict) {
  return select_impl(state, dict, Criterion::Oomp).atom;
}

AtomIndex select_atom(const BlockState& state, const TrigDictionary& dict, Criterion criterion) {
  return select_impl(state, dict, criterion).atom;
}

void update_accumulator(BlockState& state, const Vector& wt, const TrigDictionary& dict) {
  if (!state.has_accumulator()) state.accumulator = Vector::Zero(static_cast<Eigen::Index>(dict.size()));
  const Vector p = dict.inner_products(std::span<const double>(wt.data(), static_cast<std::size_t>(wt.size())));
  state.accumulator += p.cwiseAbs2();
}

double rank_block(BlockState& state, Ranking ranking, int passes) {
  if (!state.pending) throw Error(ErrorCode::InvalidArgument, "block has no pending atom to rank");
  PendingUpgrade& pending = *state.pending;
  pending.ortho = orthogonalize(state, pending.atomVector, passes);
  const double magnitude = std::abs(pending.innerProduct);
  state.chi = ranking == Ranking::Optimized ? magnitude / pending.ortho.norm : magnitude;
  return state.chi;
}

void prepare_pending(BlockState& state, const TrigDictionary& dict, const ForwardOptions& options) {
  state.pending.reset();
  state.chi = 0.0;
  state.exhausted = false;
  if (state.k() >= dict.block_size()) {
    state.exhausted = true;
    return;
  }
  try {
    const Selection sel = select_impl(state, dict, options.criterion);
    state.pending = PendingUpgrade{sel.atom, dict.atom(sel.atom), {}, sel.innerProduct};
    rank_block(state, options.ranking, options.reorthogonalizationPasses);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BlockExhausted && e.code() != ErrorCode::DegenerateAtom) throw;
    state.pending.reset();
    state.chi = 0.0;
    state.exhausted = true;
  }
}

void commit_pending(BlockState& state, const TrigDictionary& dict, const ForwardOptions& options) {
  if (!state.pending) throw Error(ErrorCode::BlockExhausted, "block has no pending atom to commit");
  const PendingUpgrade pending = std::move(*state.pending);
  state.pending.reset();
  commit_atom(state, pending.atom, pending.atomVector, pending.ortho);
  if (options.criterion == Criterion::Oomp) update_accumulator(state, pending.ortho.unit, dict);
  prepare_pending(state, dict, options);
}

HbwPursuit::HbwPursuit(const TrigDictionary& dict, const Partition& blocks, ForwardOptions options)
    : dict_(&dict), options_(options) {
  states_.reserve(blocks.size());
  for (std::size_t q = 0; q < blocks.size(); ++q) {
    if (static_cast<std::size_t>(blocks[q].size()) != dict.block_size())
      throw Error(ErrorCode::LengthMismatch, "block length differs from the dictionary block size");
    states_.push_back(BlockState::make(q, blocks[q], dict.size(), options.criterion == Criterion::Oomp));
  }
  detail::parallel_for(states_.size(), options_.jobs,
                       [&](std::size_t q) { prepare_pending(states_[q], *dict_, options_); });
}

HbwPursuit::HbwPursuit(const TrigDictionary& dict, std::vector<BlockState> states,
                       ForwardOptions options)
    : dict_(&dict), options_(options), states_(std::move(states)) {
  detail::parallel_for(states_.size(), options_.jobs, [&](std::size_t q) {
    BlockState& s = states_[q];
    if (options_.criterion == Criterion::Oomp && !s.has_accumulator()) recompute_accumulator(s, *dict_);
    prepare_pending(s, *dict_, options_);
  });
  for (const auto& s : states_) totalAtoms_ += s.k();
}

std::optional<std::size_t> HbwPursuit::best_block() const {
  std::optional<std::size_t> best;
  double bestChi = -1.0;
  for (std::size_t q = 0; q < states_.size(); ++q) {
    const BlockState& s = states_[q];
    if (s.exhausted || !s.pending) continue;
    if (s.chi > bestChi) {
      bestChi = s.chi;
      best = q;
    }
  }
  return best;
}

std::size_t HbwPursuit::step() {
  const auto q = best_block();
  if (!q) throw Error(ErrorCode::BudgetInfeasible, "every block is exhausted before the budget is met");
  commit_pending(states_[*q], *dict_, options_);
  ++totalAtoms_;
  return *q;
}

void HbwPursuit::run(std::size_t budget) {
  if (budget > states_.size() * dict_->block_size())
    throw Error(ErrorCode::BudgetInfeasible, "budget exceeds the number of samples");
  while (totalAtoms_ < budget) step();
}

std::vector<AtomicDecomposition> HbwPursuit::decompositions() const {
  std::vector<AtomicDecomposition> out;
  out.reserve(states_.size());
  for (const auto& s : states_) out.push_back(coefficients(s));
  return out;
}

Vector HbwPursuit::approximation() const {
  Partition parts;
  parts.reserve(states_.size());
  for (const auto& s : states_) parts.push_back(s.signal - s.residual);
  return join_blocks(parts, states_.size() * dict_->block_size());
}

double HbwPursuit::residual_energy() const {
  double e = 0.0;
  for (const auto& s : states_) e += s.residual.squaredNorm();
  return e;
}

ForwardResult hbw_approximate(const Partition& blocks, const TrigDictionary& dict, std::size_t K,
                              const ForwardOptions& options) {
  HbwPursuit pursuit(dict, blocks, options);
  pursuit.run(K);
  ForwardResult result;
  result.decompositions = pursuit.decompositions();
  result.approximation = pursuit.approximation();
  result.totalAtoms = pursuit.total_atoms();
  result.states = pursuit.release();
  return result;
}

namespace {

bool stop_reached(const BlockState& s, const StopRule& stop) {
  if (const auto* t = std::get_if<TargetSnr>(&stop)) {
    const double energy = s.signal.squaredNorm();
    if (energy == 0.0) return true;
    const double error = s.residual.squaredNorm();
    if (error == 0.0) return true;
    return 10.0 * std::log10(energy / error) >= t->decibels;
  }
  if (const auto* a = std::get_if<PerBlockAtoms>(&stop)) return s.k() >= a->atoms;
  const auto& table = std::get<AtomTable>(stop).atoms;
  return s.k() >= table[s.index];
}

}  // namespace

ForwardResult block_independent_approximate(const Partition& blocks, const TrigDictionary& dict,
                                            const StopRule& stop, const ForwardOptions& options) {
  if (const auto* table = std::get_if<AtomTable>(&stop); table && table->atoms.size() != blocks.size())
    throw Error(ErrorCode::InvalidArgument, "atom table size differs from the block count");
  ForwardResult result;
  result.states.resize(blocks.size());
  for (std::size_t q = 0; q < blocks.size(); ++q) {
    if (static_cast<std::size_t>(blocks[q].size()) != dict.block_size())
      throw Error(ErrorCode::LengthMismatch, "block length differs from the dictionary block size");
  }
  detail::parallel_for(blocks.size(), options.jobs, [&](std::size_t q) {
    BlockState s = BlockState::make(q, blocks[q], dict.size(), options.criterion == Criterion::Oomp);
    prepare_pending(s, dict, options);
    while (!stop_reached(s, stop) && !s.exhausted) commit_pending(s, dict, options);
    result.states[q] = std::move(s);
  });
  Partition parts;
  parts.reserve(blocks.size());
  for (const auto& s : result.states) {
    result.totalAtoms += s.k();
    result.decompositions.push_back(coefficients(s));
    parts.push_back(s.signal - s.residual);
  }
  result.approximation = join_blocks(parts, blocks.size() * dict.block_size());
  return result;
}

std::vector<std::size_t> spread_budget(std::size_t K, std::size_t Q) {
  std::vector<std::size_t> out(Q, 0);
  if (Q == 0) return out;
  for (std::size_t q = 0; q < Q; ++q) out[q] = K / Q + (q < K % Q ? 1 : 0);
  return out;
}

}  // namespace hbw
