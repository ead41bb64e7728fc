#include "hbw/swap_refine.hpp"

#include "hbw/error.hpp"

#include <cmath>
#include <limits>

namespace hbw {

void orthonormal_downdate(BlockState& state, std::size_t j, const TrigDictionary& dict, int passes) {
  if (j >= state.k()) throw Error(ErrorCode::IndexOutOfRange, "downdate position out of range");
  remove_biorthogonal(state.biorthogonal, j);
  state.gamma.erase(state.gamma.begin() + static_cast<std::ptrdiff_t>(j));
  // TODO: replace the O(k^2 N) rebuild with a Givens-rotation downdate of the
  // orthonormal set once blocks with k close to N_b become common.
  rebuild_orthonormal(state, dict, passes);
  if (state.has_accumulator()) recompute_accumulator(state, dict);
  state.pending.reset();
  state.chi = 0.0;
  state.exhausted = false;
}

SwapRefiner::SwapRefiner(const TrigDictionary& dict, std::vector<BlockState> states,
                         SwapOptions options)
    : dict_(&dict), options_(options), states_(std::move(states)) {
  forward_.criterion = options_.criterion;
  forward_.ranking = Ranking::Optimized;
  forward_.reorthogonalizationPasses = options_.reorthogonalizationPasses;
  donorScore_.assign(states_.size(), std::numeric_limits<double>::infinity());
  donorPosition_.assign(states_.size(), 0);
  for (std::size_t q = 0; q < states_.size(); ++q) {
    BlockState& s = states_[q];
    if (s.biorthogonal.size() != s.k() || s.orthonormal.size() != s.k())
      rebuild_bases(s, dict, options_.reorthogonalizationPasses);
    if (options_.criterion == Criterion::Oomp && !s.has_accumulator()) recompute_accumulator(s, dict);
    prepare_pending(s, dict, forward_);
    refresh_donor_score(q);
  }
}

void SwapRefiner::refresh_donor_score(std::size_t q) {
  const BlockState& s = states_[q];
  donorScore_[q] = std::numeric_limits<double>::infinity();
  donorPosition_[q] = 0;
  if (s.k() == 0) return;
  const Vector c = s.biorthogonal.cols().transpose() * s.signal;
  for (std::size_t j = 0; j < s.k(); ++j) {
    const double score =
        std::abs(c(static_cast<Eigen::Index>(j))) / s.biorthogonal.col(j).norm();
    if (score < donorScore_[q]) {
      donorScore_[q] = score;
      donorPosition_[q] = j;
    }
  }
}

std::optional<std::size_t> SwapRefiner::best_receiver() const {
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

std::optional<SwapRecord> SwapRefiner::step() {
  std::size_t donor = states_.size();
  for (std::size_t q = 0; q < states_.size(); ++q) {
    if (states_[q].k() == 0) continue;
    if (donor == states_.size() || donorScore_[q] < donorScore_[donor]) donor = q;
  }
  if (donor == states_.size()) return std::nullopt;

  BlockState& d = states_[donor];
  const std::size_t j = donorPosition_[donor];
  const double score = donorScore_[donor];
  const double deltaDonor = score * score;
  const AtomIndex removed = d.gamma[j];

  orthonormal_downdate(d, j, *dict_, options_.reorthogonalizationPasses);
  prepare_pending(d, *dict_, forward_);

  const auto receiver = best_receiver();
  const double deltaReceiver = receiver ? states_[*receiver].chi * states_[*receiver].chi : 0.0;
  if (receiver && deltaReceiver > deltaDonor * (1.0 + options_.acceptMargin)) {
    BlockState& r = states_[*receiver];
    const AtomIndex added = r.pending->atom;
    commit_pending(r, *dict_, forward_);
    refresh_donor_score(donor);
    refresh_donor_score(*receiver);
    return SwapRecord{donor, j, removed, *receiver, added, deltaDonor, deltaReceiver};
  }

  // Rejected: put the removed atom back at the end of the donor block.
  const Vector atomVector = dict_->atom(removed);
  const Orthogonalized o = orthogonalize(d, atomVector, options_.reorthogonalizationPasses);
  commit_atom(d, removed, atomVector, o);
  if (d.has_accumulator()) update_accumulator(d, o.unit, *dict_);
  prepare_pending(d, *dict_, forward_);
  refresh_donor_score(donor);
  return std::nullopt;
}

SwapResult SwapRefiner::run() {
  SwapResult result;
  const std::size_t guard = options_.maxSwaps ? options_.maxSwaps : 10 * total_atoms();
  while (result.swaps.size() < guard) {
    auto record = step();
    if (!record) return result;
    result.swaps.push_back(*record);
  }
  result.guardHit = guard > 0;
  return result;
}

std::size_t SwapRefiner::total_atoms() const {
  std::size_t total = 0;
  for (const auto& s : states_) total += s.k();
  return total;
}

double SwapRefiner::residual_energy() const {
  double e = 0.0;
  for (const auto& s : states_) e += s.residual.squaredNorm();
  return e;
}

std::vector<AtomicDecomposition> SwapRefiner::decompositions() const {
  std::vector<AtomicDecomposition> out;
  out.reserve(states_.size());
  for (const auto& s : states_) out.push_back(coefficients(s));
  return out;
}

SwapResult hbw_sbr(std::vector<BlockState>& states, const TrigDictionary& dict,
                   const SwapOptions& options) {
  SwapRefiner refiner(dict, std::move(states), options);
  SwapResult result = refiner.run();
  states = refiner.release();
  return result;
}

}  // namespace hbw
