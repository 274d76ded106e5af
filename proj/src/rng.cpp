#include "torusrw/rng.hpp"

#include <cmath>

namespace torusrw {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

WalkRng::WalkRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  std::uint64_t x = seed;
  for (auto& w : s_) w = splitmix64(x);
  for (std::uint64_t k = 0; k < stream; ++k) jump();
}

void WalkRng::jump() {
  static constexpr std::uint64_t kJump[] = {0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL, 0xa9582618e03fc9aaULL,
                                            0x39abdc4529b1661cULL};
  std::array<std::uint64_t, 4> acc{};
  for (std::uint64_t word : kJump) {
    for (int b = 0; b < 64; ++b) {
      if (word & (std::uint64_t{1} << b)) {
        for (int i = 0; i < 4; ++i) acc[i] ^= s_[i];
      }
      operator()();
    }
  }
  s_ = acc;
}

double WalkRng::exponential() {
  // 1 - uniform() lies in (0, 1], so the logarithm is finite.
  return -std::log(1.0 - uniform());
}

}  // namespace torusrw
