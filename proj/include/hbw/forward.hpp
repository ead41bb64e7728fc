#pragma once

#include "hbw/pursuit_core.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace hbw {

/// Block ranking rule. Optimized picks the block whose upgrade reduces the
/// total residual most; Legacy ranks by the raw residual correlation.
enum class Ranking : std::uint8_t { Optimized = 0, Legacy = 1 };

struct ForwardOptions {
  Criterion criterion = Criterion::Oomp;
  Ranking ranking = Ranking::Optimized;
  int reorthogonalizationPasses = 1;
  std::size_t jobs = 1;
};

/// Relative residual correlation below which a block counts as exhausted.
inline constexpr double kSelectTolerance = 1e-12;
/// Guard on 1 - s_n in the OOMP denominator.
inline constexpr double kDenominatorTolerance = 1e-10;

/// argmax_n |<atom_n, r>| over atoms not yet selected; lowest index on ties.
/// Throws BlockExhausted when every candidate correlation is negligible.
AtomIndex select_atom_omp(const BlockState& state, const TrigDictionary& dict);

/// argmax_n |<atom_n, r>| / sqrt(1 - s_n); requires an up to date accumulator.
AtomIndex select_atom_oomp(const BlockState& state, const TrigDictionary& dict);

AtomIndex select_atom(const BlockState& state, const TrigDictionary& dict, Criterion criterion);

/// s_n += |<atom_n, wt>|^2 for every atom.
void update_accumulator(BlockState& state, const Vector& wt, const TrigDictionary& dict);

/// Orthogonalizes the pending atom and stores its ranking score in state.chi.
double rank_block(BlockState& state, Ranking ranking, int passes = 1);

/// Selects and ranks the next candidate of a block. A block with nothing
/// left to add is flagged exhausted and gets chi = 0.
void prepare_pending(BlockState& state, const TrigDictionary& dict, const ForwardOptions& options);

/// Commits the pending atom, refreshes the accumulator (OOMP) and prepares
/// the next candidate.
void commit_pending(BlockState& state, const TrigDictionary& dict, const ForwardOptions& options);

/// Hierarchized block-wise forward pursuit driven one commit at a time.
class HbwPursuit {
public:
  HbwPursuit(const TrigDictionary& dict, const Partition& blocks, ForwardOptions options);
  HbwPursuit(const TrigDictionary& dict, std::vector<BlockState> states, ForwardOptions options);

  /// Block with the largest chi among non-exhausted blocks (lowest index on ties).
  std::optional<std::size_t> best_block() const;

  /// Commits one atom to best_block(); throws BudgetInfeasible if none is left.
  std::size_t step();

  /// Steps until the total atom count reaches budget.
  void run(std::size_t budget);

  std::size_t total_atoms() const { return totalAtoms_; }
  const std::vector<BlockState>& blocks() const { return states_; }
  std::vector<BlockState> release() { return std::move(states_); }

  std::vector<AtomicDecomposition> decompositions() const;
  /// Concatenation of f{q} - r{q}.
  Vector approximation() const;
  double residual_energy() const;

private:
  const TrigDictionary* dict_;
  ForwardOptions options_;
  std::vector<BlockState> states_;
  std::size_t totalAtoms_ = 0;
};

struct ForwardResult {
  std::vector<AtomicDecomposition> decompositions;
  Vector approximation;
  std::vector<BlockState> states;
  std::size_t totalAtoms = 0;
};

/// Runs the HBW forward pursuit with a global budget of K atoms.
ForwardResult hbw_approximate(const Partition& blocks, const TrigDictionary& dict, std::size_t K,
                              const ForwardOptions& options);

struct TargetSnr {
  double decibels = 0.0;
};
struct PerBlockAtoms {
  std::size_t atoms = 0;
};
/// Individual atom count for each block.
struct AtomTable {
  std::vector<std::size_t> atoms;
};
using StopRule = std::variant<TargetSnr, PerBlockAtoms, AtomTable>;

/// Approximates each block in isolation until the stop rule holds (or the
/// block is exhausted). totalAtoms is the budget to hand to the HBW run.
ForwardResult block_independent_approximate(const Partition& blocks, const TrigDictionary& dict,
                                            const StopRule& stop, const ForwardOptions& options);

/// Even split of K over Q blocks; the first K mod Q blocks get one extra.
std::vector<std::size_t> spread_budget(std::size_t K, std::size_t Q);

}  // namespace hbw
