#include "hbw/dictionary.hpp"

#include "hbw/error.hpp"
#include "fft.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

namespace hbw {

namespace {

constexpr double kPi = std::numbers::pi;

// Below this the closed-form denominator is treated as zero.
constexpr double kDegenerateDenominator = 1e-12;

// Raw (unnormalized) sample i (1-based) of family atom n (1-based).
// The angle numerator is reduced modulo 4M in integers before the
// trigonometric call so that large blocks keep full precision.
double raw_sample(TrigCase c, std::size_t familySize, std::size_t n, std::size_t i) {
  const std::size_t period = 4 * familySize;
  const std::size_t freq = c == TrigCase::Cos ? n - 1 : n;
  const std::size_t m = ((2 * i - 1) % period) * (freq % period) % period;
  const double angle = kPi * static_cast<double>(m) / static_cast<double>(2 * familySize);
  return c == TrigCase::Cos ? std::cos(angle) : std::sin(angle);
}

double numeric_norm(TrigCase c, std::size_t familySize, std::size_t blockSize, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 1; i <= blockSize; ++i) {
    const double v = raw_sample(c, familySize, n, i);
    sum += v * v;
  }
  return std::sqrt(sum);
}

double family_weight(TrigCase c, std::size_t familySize, std::size_t blockSize, std::size_t n) {
  const std::size_t a = c == TrigCase::Cos ? n - 1 : n;
  const double M = static_cast<double>(familySize);
  const double sinPhi = std::sin(kPi * static_cast<double>(a % (2 * familySize)) / M);
  // 1 - cos(2 phi) written as 2 sin^2(phi) to avoid cancellation.
  const double denominator = 2.0 * sinPhi * sinPhi;
  if (std::abs(denominator) < kDegenerateDenominator)
    return numeric_norm(c, familySize, blockSize, n);
  const std::size_t reduced = (2 * blockSize % (2 * familySize)) * (a % (2 * familySize)) %
                              (2 * familySize);
  const double sin2NPhi = std::sin(kPi * static_cast<double>(reduced) / M);
  const double correction = sinPhi * sin2NPhi / (2.0 * denominator);
  const double half = static_cast<double>(blockSize) / 2.0;
  return std::sqrt(c == TrigCase::Cos ? half + correction : half - correction);
}

void append_family_weights(TrigCase c, std::size_t familySize, std::size_t blockSize,
                           std::vector<double>& out) {
  for (std::size_t n = 1; n <= familySize; ++n)
    out.push_back(family_weight(c, familySize, blockSize, n));
}

DictionarySpec single_family(const DictionarySpec& spec, TrigCase c) {
  if (spec.kind == DictionaryKind::CosineSine)
    throw Error(ErrorCode::InvalidArgument,
                "single-family inner products need a Cosine or Sine dictionary");
  DictionarySpec s = spec;
  s.kind = c == TrigCase::Cos ? DictionaryKind::Cosine : DictionaryKind::Sine;
  return s;
}

}  // namespace

void DictionarySpec::validate() const {
  if (blockSize == 0 || atomCount == 0)
    throw Error(ErrorCode::InvalidArgument, "dictionary sizes must be positive");
  if (atomCount > std::numeric_limits<std::uint32_t>::max() / 8)
    throw Error(ErrorCode::InvalidArgument, "dictionary too large");
  switch (kind) {
    case DictionaryKind::Cosine:
    case DictionaryKind::Sine:
      if (atomCount < blockSize)
        throw Error(ErrorCode::InvalidArgument,
                    "cosine/sine dictionaries need atomCount >= blockSize");
      break;
    case DictionaryKind::CosineSine:
      if (atomCount % 2 != 0)
        throw Error(ErrorCode::InvalidArgument, "cosine-sine dictionaries need an even atomCount");
      break;
    default:
      throw Error(ErrorCode::InvalidArgument, "unknown dictionary kind");
  }
}

std::string DictionarySpec::label() const {
  std::ostringstream os;
  const char* family = kind == DictionaryKind::Cosine ? "c"
                       : kind == DictionaryKind::Sine ? "s"
                                                      : "cs";
  if (atomCount % blockSize == 0) {
    const std::size_t r = atomCount / blockSize;
    if (r == 1)
      os << 'B' << family;
    else
      os << 'D' << family << r;
  } else {
    os << 'D' << family << "(M=" << atomCount << ")";
  }
  return os.str();
}

DictionarySpec DictionarySpec::with_redundancy(DictionaryKind kind, std::size_t blockSize,
                                               std::size_t redundancy) {
  DictionarySpec spec{kind, blockSize, blockSize * redundancy};
  spec.validate();
  return spec;
}

std::vector<double> normalization_weights(const DictionarySpec& spec) {
  spec.validate();
  std::vector<double> w;
  w.reserve(spec.atomCount);
  const std::size_t F = spec.family_size();
  switch (spec.kind) {
    case DictionaryKind::Cosine:
      append_family_weights(TrigCase::Cos, F, spec.blockSize, w);
      break;
    case DictionaryKind::Sine:
      append_family_weights(TrigCase::Sin, F, spec.blockSize, w);
      break;
    case DictionaryKind::CosineSine:
      append_family_weights(TrigCase::Cos, F, spec.blockSize, w);
      append_family_weights(TrigCase::Sin, F, spec.blockSize, w);
      break;
  }
  return w;
}

Vector atom(const DictionarySpec& spec, AtomIndex n) { return TrigDictionary(spec).atom(n); }

Vector ip_trig_fft(std::span<const double> r, const DictionarySpec& spec, TrigCase trigCase) {
  const TrigDictionary dict(single_family(spec, trigCase));
  return dict.inner_products(r);
}

std::pair<Vector, Vector> ip_mixed_fft(std::span<const double> r, const DictionarySpec& spec) {
  if (spec.kind != DictionaryKind::CosineSine)
    throw Error(ErrorCode::InvalidArgument, "mixed inner products need a CosineSine dictionary");
  const TrigDictionary dict(spec);
  const Vector all = dict.inner_products(r);
  const auto half = static_cast<Eigen::Index>(spec.family_size());
  return {all.head(half), all.tail(half)};
}

TrigDictionary::TrigDictionary(const DictionarySpec& spec)
    : spec_(spec),
      familySize_(spec.family_size()),
      transformLength_(2 * spec.family_size()),
      weights_(normalization_weights(spec)) {
  phaseCos_.resize(familySize_ + 1);
  phaseSin_.resize(familySize_ + 1);
  for (std::size_t k = 0; k <= familySize_; ++k) {
    const double theta = kPi * static_cast<double>(k) / static_cast<double>(transformLength_);
    phaseCos_[k] = std::cos(theta);
    phaseSin_[k] = std::sin(theta);
  }
}

void TrigDictionary::spectrum(std::span<const double> r, std::vector<double>& re,
                              std::vector<double>& im) const {
  if (r.size() != spec_.blockSize)
    throw Error(ErrorCode::LengthMismatch, "residual length differs from the block size");
  std::vector<double> padded(transformLength_, 0.0);
  // Atoms are periodic in the sample index with period transformLength_,
  // so blocks longer than the transform fold onto it.
  for (std::size_t j = 0; j < r.size(); ++j) padded[j % transformLength_] += r[j];
  std::vector<std::complex<double>> bins(transformLength_ / 2 + 1);
  detail::RealFft(transformLength_).forward(padded, bins);
  re.resize(bins.size());
  im.resize(bins.size());
  for (std::size_t k = 0; k < bins.size(); ++k) {
    re[k] = bins[k].real();
    im[k] = bins[k].imag();
  }
}

Vector TrigDictionary::inner_products(std::span<const double> r) const {
  Vector out(static_cast<Eigen::Index>(spec_.atomCount));
  inner_products(r, std::span<double>(out.data(), spec_.atomCount));
  return out;
}

void TrigDictionary::inner_products(std::span<const double> r, std::span<double> out) const {
  if (out.size() != spec_.atomCount)
    throw Error(ErrorCode::LengthMismatch, "output length differs from the atom count");
  std::vector<double> re, im;
  spectrum(r, re, im);
  const std::size_t F = familySize_;
  // Re(e^{-i theta_k} X_k) and -Im(e^{-i theta_k} X_k).
  auto cosine = [&](std::size_t k) { return phaseCos_[k] * re[k] + phaseSin_[k] * im[k]; };
  auto sine = [&](std::size_t k) { return phaseSin_[k] * re[k] - phaseCos_[k] * im[k]; };
  switch (spec_.kind) {
    case DictionaryKind::Cosine:
      for (std::size_t n = 0; n < F; ++n) out[n] = cosine(n) / weights_[n];
      break;
    case DictionaryKind::Sine:
      for (std::size_t n = 0; n < F; ++n) out[n] = sine(n + 1) / weights_[n];
      break;
    case DictionaryKind::CosineSine:
      for (std::size_t n = 0; n < F; ++n) {
        out[n] = cosine(n) / weights_[n];
        out[F + n] = sine(n + 1) / weights_[F + n];
      }
      break;
  }
}

Vector TrigDictionary::atom(AtomIndex n) const {
  Vector out(static_cast<Eigen::Index>(spec_.blockSize));
  atom(n, std::span<double>(out.data(), spec_.blockSize));
  return out;
}

void TrigDictionary::atom(AtomIndex n, std::span<double> out) const {
  if (n.value() < 1 || n.value() > spec_.atomCount)
    throw Error(ErrorCode::IndexOutOfRange, "atom index out of range");
  if (out.size() != spec_.blockSize)
    throw Error(ErrorCode::LengthMismatch, "atom buffer length differs from the block size");
  const std::size_t idx = n.zero_based();
  TrigCase c = TrigCase::Cos;
  std::size_t familyIndex = idx + 1;
  if (spec_.kind == DictionaryKind::Sine) {
    c = TrigCase::Sin;
  } else if (spec_.kind == DictionaryKind::CosineSine && idx >= familySize_) {
    c = TrigCase::Sin;
    familyIndex = idx - familySize_ + 1;
  }
  const double w = weights_[idx];
  for (std::size_t i = 0; i < spec_.blockSize; ++i)
    out[i] = raw_sample(c, familySize_, familyIndex, i + 1) / w;
}

}  // namespace hbw
