#include "sketchhs/random.hpp"

#include <array>

namespace sketchhs {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t state = mix64(master);
  std::uint64_t position = 0x632be59bd9b4e019ULL;
  for (std::uint64_t key : keys) {
    state = mix64(state ^ mix64(key + position));
    position += 0x9e3779b97f4a7c16ULL;
  }
  return state;
}

Rng::Rng(std::uint64_t seed) {
  // Expand the 64-bit seed so nearby seeds do not share a prefix of state.
  std::array<std::uint32_t, 8> words{};
  std::uint64_t s = seed;
  for (std::size_t i = 0; i < words.size(); i += 2) {
    s = mix64(s);
    words[i] = static_cast<std::uint32_t>(s);
    words[i + 1] = static_cast<std::uint32_t>(s >> 32);
  }
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

double Rng::normal() { return normal_(engine_); }

double Rng::uniform() { return std::generate_canonical<double, 53>(engine_); }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t Rng::below(std::uint64_t bound) {
  std::uniform_int_distribution<std::uint64_t> dist(0, bound - 1);
  return dist(engine_);
}

double Rng::gamma(double shape) {
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(engine_);
}

double Rng::inv_gamma(double shape, double scale) { return scale / gamma(shape); }

}  // namespace sketchhs
