#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hbw {

using Vector = Eigen::VectorXd;

enum class DictionaryKind : std::uint8_t { Cosine = 0, Sine = 1, CosineSine = 2 };

enum class TrigCase { Cos, Sin };

/// Declarative description of a trigonometric dictionary.
///
/// For Cosine and Sine, atomCount is the number of atoms M. For CosineSine
/// the first atomCount/2 atoms are cosine atoms and the remaining ones are
/// sine atoms, each half built with M = atomCount/2.
struct DictionarySpec {
  DictionaryKind kind = DictionaryKind::CosineSine;
  std::size_t blockSize = 1024;
  std::size_t atomCount = 4096;

  /// Throws Error(InvalidArgument) if the description is unusable.
  void validate() const;

  double redundancy() const {
    return static_cast<double>(atomCount) / static_cast<double>(blockSize);
  }

  /// Size of one trigonometric family: atomCount, or atomCount/2 for CosineSine.
  std::size_t family_size() const {
    return kind == DictionaryKind::CosineSine ? atomCount / 2 : atomCount;
  }

  /// Short table label: "Bc", "Ds2", "Dcs4", ... ("B" marks an orthonormal basis).
  std::string label() const;

  static DictionarySpec with_redundancy(DictionaryKind kind, std::size_t blockSize,
                                        std::size_t redundancy);

  friend bool operator==(const DictionarySpec&, const DictionarySpec&) = default;
};

/// 1-based index of an atom inside a dictionary.
class AtomIndex {
public:
  constexpr AtomIndex() = default;
  constexpr explicit AtomIndex(std::uint32_t oneBased) : value_(oneBased) {}

  static constexpr AtomIndex from_zero_based(std::size_t i) {
    return AtomIndex(static_cast<std::uint32_t>(i + 1));
  }

  constexpr std::uint32_t value() const { return value_; }
  constexpr std::size_t zero_based() const { return static_cast<std::size_t>(value_) - 1; }

  friend constexpr auto operator<=>(AtomIndex, AtomIndex) = default;

private:
  std::uint32_t value_ = 0;
};

/// Closed-form normalization weights, one per atom, in dictionary order.
///
/// Where the denominator 1 - cos(2*pi*n/M) of the closed form vanishes the
/// weight is the numerically computed norm of the raw sequence.
std::vector<double> normalization_weights(const DictionarySpec& spec);

/// Materializes one unit-norm atom. Meant for tests and small instances.
Vector atom(const DictionarySpec& spec, AtomIndex n);

/// Inner products of r with all M atoms of the single-family dictionary of
/// the given case (M = spec.atomCount), via one zero-padded length-2M FFT.
Vector ip_trig_fft(std::span<const double> r, const DictionarySpec& spec, TrigCase trigCase);

/// Inner products with the cosine and sine halves of a CosineSine
/// dictionary, both read from a single length-M FFT.
std::pair<Vector, Vector> ip_mixed_fft(std::span<const double> r, const DictionarySpec& spec);

/// Precomputed weights and twiddles for the FFT inner-product kernel.
///
/// Never stores the dictionary. Immutable after construction and safe to
/// share across threads.
class TrigDictionary {
public:
  explicit TrigDictionary(const DictionarySpec& spec);

  const DictionarySpec& spec() const { return spec_; }
  std::size_t size() const { return spec_.atomCount; }
  std::size_t block_size() const { return spec_.blockSize; }

  /// <atom_n, r> for every n, in dictionary order.
  Vector inner_products(std::span<const double> r) const;
  void inner_products(std::span<const double> r, std::span<double> out) const;

  Vector atom(AtomIndex n) const;
  void atom(AtomIndex n, std::span<double> out) const;

  const std::vector<double>& weights() const { return weights_; }

private:
  // Spectrum of r folded and zero padded to transformLength_, bins [0, M].
  void spectrum(std::span<const double> r, std::vector<double>& re,
                std::vector<double>& im) const;

  DictionarySpec spec_;
  std::size_t familySize_;
  std::size_t transformLength_;
  std::vector<double> weights_;
  std::vector<double> phaseCos_;
  std::vector<double> phaseSin_;
};

}  // namespace hbw
