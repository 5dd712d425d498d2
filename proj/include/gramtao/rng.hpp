#pragma once

#include <cstdint>

namespace gramtao {

// splitmix64. Deterministic across platforms, which matters more here than
// statistical strength; modulo bias on bounded draws is irrelevant for test
// diversification.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }

  int64_t range(int64_t lo, int64_t hi) {  // inclusive
    return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  static uint64_t mix(uint64_t seed, uint64_t stream) {
    Rng r(seed ^ (stream * 0xd1b54a32d192ed03ull + 0x2545f4914f6cdd1dull));
    return r.next();
  }

 private:
  uint64_t state_;
};

}  // namespace gramtao
