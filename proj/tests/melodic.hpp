#pragma once

// Synthetic test music: a sequence of notes, each a few damped partials,
// with occasional silence and optional white noise. Deterministic for a
// given seed.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace melodic {

inline std::vector<double> make(std::size_t samples, std::uint64_t seed = 2024,
                                double sampleRate = 44100.0, double noiseLevel = 1e-4) {
  std::vector<double> out(samples, 0.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // pentatonic-ish scale around A3..A5
  const double scale[] = {220.0, 246.94, 277.18, 329.63, 369.99, 440.0,
                          493.88, 554.37, 659.25, 739.99, 880.0};
  std::size_t t = 0;
  while (t < samples) {
    const std::size_t length = static_cast<std::size_t>(sampleRate * (0.12 + 0.35 * u(rng)));
    const bool rest = u(rng) < 0.08;
    if (!rest) {
      const double f0 = scale[static_cast<std::size_t>(u(rng) * 11) % 11];
      const double amp = 0.25 + 0.35 * u(rng);
      const double decay = 2.0 + 6.0 * u(rng);
      const int partials = 2 + static_cast<int>(u(rng) * 3);
      double phase[5];
      for (double& p : phase) p = 2.0 * std::numbers::pi * u(rng);
      for (std::size_t i = 0; i < length && t + i < samples; ++i) {
        const double time = static_cast<double>(i) / sampleRate;
        const double env = std::exp(-decay * time) * std::min(1.0, time * 200.0);
        double v = 0.0;
        for (int h = 0; h < partials; ++h)
          v += std::sin(2.0 * std::numbers::pi * f0 * (h + 1) * time + phase[h]) / (1.0 + h * h);
        out[t + i] += amp * env * v;
      }
    }
    t += length;
  }
  if (noiseLevel > 0.0) {
    std::normal_distribution<double> noise(0.0, noiseLevel);
    for (double& x : out) x += noise(rng);
  }
  return out;
}

}  // namespace melodic
