#pragma once

#include "hbw/dictionary.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hbw {

using Partition = std::vector<Vector>;

enum class Criterion : std::uint8_t { Omp = 0, Oomp = 1 };

/// Growable set of equal-length column vectors stored contiguously.
class ColumnSet {
public:
  ColumnSet() = default;
  explicit ColumnSet(std::size_t rows) : rows_(rows) {}

  std::size_t rows() const { return rows_; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  auto cols() { return data_.leftCols(static_cast<Eigen::Index>(count_)); }
  auto cols() const { return data_.leftCols(static_cast<Eigen::Index>(count_)); }
  auto col(std::size_t i) { return data_.col(static_cast<Eigen::Index>(i)); }
  auto col(std::size_t i) const { return data_.col(static_cast<Eigen::Index>(i)); }

  void push_back(const Vector& v);
  void erase(std::size_t i);
  void clear() { count_ = 0; }

private:
  std::size_t rows_ = 0;
  std::size_t count_ = 0;
  Eigen::MatrixXd data_;
};

/// Candidate atom w_{k+1} = d - P d, kept as its norm and unit direction.
struct Orthogonalized {
  Vector unit;
  double norm = 0.0;
};

/// Next atom a block would receive, with everything needed to commit it.
struct PendingUpgrade {
  AtomIndex atom;
  Vector atomVector;
  Orthogonalized ortho;
  double innerProduct = 0.0;  // <d, r>
};

/// Per-block pursuit state.
///
/// Invariants: gamma, orthonormal and biorthogonal have the same size k;
/// residual = signal - orthonormal * orthonormal^T * signal; accumulator
/// (when maintained) holds s_n = sum_i <atom_n, w~_i>^2.
struct BlockState {
  std::size_t index = 0;
  Vector signal;
  Vector residual;
  std::vector<AtomIndex> gamma;
  ColumnSet orthonormal;
  std::vector<double> rawNorms;
  ColumnSet biorthogonal;
  Vector accumulator;
  double chi = 0.0;
  std::optional<PendingUpgrade> pending;
  bool exhausted = false;

  static BlockState make(std::size_t index, Vector signal, std::size_t atomCount,
                         bool withAccumulator);

  std::size_t k() const { return gamma.size(); }
  bool has_accumulator() const { return accumulator.size() > 0; }
};

struct DecompositionEntry {
  AtomIndex atom;
  double coefficient = 0.0;

  friend bool operator==(const DecompositionEntry&, const DecompositionEntry&) = default;
};

/// Atoms and coefficients approximating one block.
struct AtomicDecomposition {
  std::size_t block = 0;
  std::vector<DecompositionEntry> entries;

  friend bool operator==(const AtomicDecomposition&, const AtomicDecomposition&) = default;
};

/// Relative threshold below which ||w|| marks an atom as lying in the span.
inline constexpr double kSpanTolerance = 1e-10;

/// Gram-Schmidt step against the block's orthonormal set followed by
/// `passes` re-orthogonalization sweeps. Throws DegenerateAtom when
/// ||w|| < kSpanTolerance * ||d||.
Orthogonalized orthogonalize(const BlockState& state, const Vector& d, int passes = 1);

/// Appends w~_{k+1} (and ||w_{k+1}||) computed by orthogonalize().
Orthogonalized extend_orthonormal(BlockState& state, const Vector& d, int passes = 1);
void extend_orthonormal(BlockState& state, const Orthogonalized& o);

/// Biorthogonal upgrade for the atom whose w~ was appended last:
/// b_{k+1} = w_{k+1}/||w_{k+1}||^2, b_n -= b_{k+1} <d, b_n>.
void extend_biorthogonal(BlockState& state, const Vector& d);

/// r -= w~_k <w~_k, f> for the most recent orthonormal vector.
void update_residual(BlockState& state);

/// Adds one atom: orthonormal, biorthogonal, gamma and residual.
void commit_atom(BlockState& state, AtomIndex atom, const Vector& d, const Orthogonalized& o);

/// Coefficients c_n = <b_n, f>.
AtomicDecomposition coefficients(const BlockState& state);

/// Sum of c_n atom(gamma_n).
Vector synthesize(const AtomicDecomposition& decomposition, const TrigDictionary& dict);

/// Rebuilds orthonormal vectors and norms from gamma (in order) and
/// recomputes the residual. Biorthogonal vectors are left untouched.
void rebuild_orthonormal(BlockState& state, const TrigDictionary& dict, int passes = 1);

/// Rebuilds orthonormal and biorthogonal sets from gamma from scratch.
void rebuild_bases(BlockState& state, const TrigDictionary& dict, int passes = 1);

/// Recomputes s_n = sum_i <atom_n, w~_i>^2 from the current orthonormal set.
void recompute_accumulator(BlockState& state, const TrigDictionary& dict);

/// Downdate of the biorthogonal set when column j is removed:
/// b_n -= b_j <b_j, b_n> / ||b_j||^2 for n != j.
void remove_biorthogonal(ColumnSet& biorthogonal, std::size_t j);

/// Splits a signal into blocks of blockSize samples; the trailing partial
/// block is zero padded. padLength receives the number of padded samples.
Partition split_blocks(std::span<const double> signal, std::size_t blockSize,
                       std::size_t* padLength = nullptr);

/// Concatenates blocks and trims the result to `length` samples.
Vector join_blocks(const Partition& blocks, std::size_t length);

double squared_norm(const Partition& blocks);

}  // namespace hbw
