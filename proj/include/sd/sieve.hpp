#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "sd/error.hpp"

namespace sd {

/// Largest x_max a SieveTable accepts. Entries are 32-bit, so 2^32 - 1 is the
/// hard ceiling; 10^8 needs about 400 MB.
inline constexpr std::uint64_t kMaxSieveLimit = 0xFFFFFFFFull;

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Canonical factorisation of n: primes strictly increasing, exponents >= 1.
struct Factorization {
  std::uint64_t n = 1;
  std::vector<PrimePower> factors;

  unsigned omega() const { return static_cast<unsigned>(factors.size()); }

  unsigned big_omega() const {
    unsigned total = 0;
    for (const auto& f : factors) total += f.exponent;
    return total;
  }
};

/*!
  Smallest-prime-factor table for 2 <= n <= x_max.

  Immutable after construction; every member is a pure read, so one table can be
  shared across threads.
*/
class SieveTable {
 public:
  std::uint64_t x_max() const noexcept { return x_max_; }

  /// spf(n) for 2 <= n <= x_max. spf(0) and spf(1) are 0.
  std::uint32_t spf(std::uint64_t n) const {
    if (n > x_max_) throw invalid_argument("spf: n exceeds sieve range");
    return spf_[n];
  }

  bool is_prime(std::uint64_t n) const { return n >= 2 && spf(n) == n; }

  const std::vector<std::uint32_t>& raw() const noexcept { return spf_; }

  /// Calls fn(prime, exponent) for each prime power of n in increasing order.
  /// No range check; callers validate n.
  template <typename Fn>
  void for_each_prime_power(std::uint64_t n, Fn&& fn) const {
    while (n > 1) {
      const std::uint32_t p = spf_[n];
      unsigned k = 0;
      do {
        n /= p;
        ++k;
      } while (n % p == 0);
      fn(static_cast<std::uint64_t>(p), k);
    }
  }

  Factorization factor(std::uint64_t n) const {
    check_range(n, "factor");
    Factorization fz;
    fz.n = n;
    for_each_prime_power(n, [&](std::uint64_t p, unsigned k) {
      fz.factors.push_back({p, k});
    });
    return fz;
  }

  unsigned omega(std::uint64_t n) const {
    check_range(n, "omega");
    unsigned count = 0;
    for_each_prime_power(n, [&](std::uint64_t, unsigned) { ++count; });
    return count;
  }

  unsigned big_omega(std::uint64_t n) const {
    check_range(n, "big_omega");
    unsigned count = 0;
    for_each_prime_power(n, [&](std::uint64_t, unsigned k) { count += k; });
    return count;
  }

  void check_range(std::uint64_t n, const char* op) const {
    if (n < 1 || n > x_max_) {
      throw invalid_argument(std::string(op) + ": n=" + std::to_string(n) +
                             " outside [1, " + std::to_string(x_max_) + "]");
    }
  }

  friend SieveTable build_sieve(std::uint64_t x_max);
  friend SieveTable load_sieve(const std::string& path);

 private:
  SieveTable(std::uint64_t x_max, std::vector<std::uint32_t> spf)
      : x_max_(x_max), spf_(std::move(spf)) {}

  std::uint64_t x_max_;
  std::vector<std::uint32_t> spf_;
};

/// Linear sieve: every composite is written exactly once, by its smallest
/// prime factor.
inline SieveTable build_sieve(std::uint64_t x_max) {
  if (x_max < 2) throw invalid_argument("build_sieve: x_max must be >= 2");
  if (x_max > kMaxSieveLimit) {
    throw invalid_argument("build_sieve: x_max exceeds 2^32 - 1");
  }
  std::vector<std::uint32_t> spf(x_max + 1, 0);
  std::vector<std::uint32_t> primes;
  primes.reserve(static_cast<std::size_t>(
      1.3 * static_cast<double>(x_max) / std::log(static_cast<double>(x_max))) + 16);
  for (std::uint64_t i = 2; i <= x_max; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    const std::uint32_t limit = spf[i];
    for (const std::uint32_t p : primes) {
      if (p > limit) break;
      const std::uint64_t m = i * p;
      if (m > x_max) break;
      spf[m] = p;
    }
  }
  return SieveTable(x_max, std::move(spf));
}

inline Factorization factor(std::uint64_t n, const SieveTable& sieve) {
  return sieve.factor(n);
}

inline unsigned omega(std::uint64_t n, const SieveTable& sieve) {
  return sieve.omega(n);
}

inline unsigned big_omega(std::uint64_t n, const SieveTable& sieve) {
  return sieve.big_omega(n);
}

/// Segmented sieve of Eratosthenes over odd numbers; independent of any
/// SieveTable so Euler-product cutoffs can exceed the exact-sum range.
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  if (limit < 2) throw invalid_argument("primes_up_to: P must be >= 2");
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(
      1.3 * static_cast<double>(limit) / std::log(static_cast<double>(limit))) + 16);
  out.push_back(2);
  if (limit < 3) return out;

  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
  std::vector<char> small(root + 1, 1);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 3; i <= root; i += 2) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += 2 * i) small[j] = 0;
  }

  // Segment index j stands for the odd number low + 2j.
  constexpr std::uint64_t kSegment = 1u << 18;
  std::vector<char> seg(kSegment);
  std::vector<std::uint64_t> next(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) next[i] = base[i] * base[i];

  for (std::uint64_t low = 3; low <= limit; low += 2 * kSegment) {
    const std::uint64_t high = std::min(limit, low + 2 * kSegment - 1);
    std::fill(seg.begin(), seg.end(), 1);
    for (std::size_t i = 0; i < base.size(); ++i) {
      const std::uint64_t p = base[i];
      std::uint64_t m = next[i];
      if (m > high) continue;
      for (; m <= high; m += 2 * p) seg[(m - low) / 2] = 0;
      next[i] = m;
    }
    for (std::uint64_t n = low; n <= high; n += 2) {
      if (seg[(n - low) / 2]) out.push_back(n);
    }
  }
  return out;
}

/// Streams from the table when it covers P, otherwise falls back to the
/// segmented sieve.
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t limit,
                                               const SieveTable& sieve) {
  if (limit < 2) throw invalid_argument("primes_up_to: P must be >= 2");
  if (limit > sieve.x_max()) return primes_up_to(limit);
  std::vector<std::uint64_t> out;
  const auto& spf = sieve.raw();
  for (std::uint64_t n = 2; n <= limit; ++n) {
    if (spf[n] == n) out.push_back(n);
  }
  return out;
}

// Cache file: "SDSIEVE1", x_max (u64 LE), spf[0..x_max] (u32 LE).

inline constexpr char kSieveMagic[8] = {'S', 'D', 'S', 'I', 'E', 'V', 'E', '1'};

inline void save_sieve(const SieveTable& sieve, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("save_sieve: cannot open " + path);
  os.write(kSieveMagic, sizeof kSieveMagic);
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(sieve.x_max() >> (8 * i));
  os.write(reinterpret_cast<const char*>(buf), 8);

  std::vector<unsigned char> bytes;
  bytes.reserve(4 * sieve.raw().size());
  for (const std::uint32_t v : sieve.raw()) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) throw std::runtime_error("save_sieve: write failed for " + path);
}

inline SieveTable load_sieve(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_sieve: cannot open " + path);
  is.seekg(0, std::ios::end);
  const auto size = static_cast<std::uint64_t>(is.tellg());
  is.seekg(0);

  char magic[8];
  unsigned char head[8];
  if (size < 16 || !is.read(magic, 8) ||
      std::memcmp(magic, kSieveMagic, 8) != 0) {
    throw std::runtime_error("load_sieve: bad magic in " + path);
  }
  is.read(reinterpret_cast<char*>(head), 8);
  std::uint64_t x_max = 0;
  for (int i = 0; i < 8; ++i) x_max |= static_cast<std::uint64_t>(head[i]) << (8 * i);
  if (x_max < 2 || x_max > kMaxSieveLimit || size != 16 + 4 * (x_max + 1)) {
    throw std::runtime_error("load_sieve: length mismatch in " + path);
  }

  std::vector<unsigned char> bytes(4 * (x_max + 1));
  if (!is.read(reinterpret_cast<char*>(bytes.data()),
               static_cast<std::streamsize>(bytes.size()))) {
    throw std::runtime_error("load_sieve: truncated " + path);
  }
  std::vector<std::uint32_t> spf(x_max + 1);
  for (std::uint64_t n = 0; n <= x_max; ++n) {
    const unsigned char* b = &bytes[4 * n];
    spf[n] = static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
             static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
    if (n >= 2 && (spf[n] < 2 || spf[n] > n || n % spf[n] != 0)) {
      throw std::runtime_error("load_sieve: corrupt entry at n=" + std::to_string(n) + " in " +
                               path);
    }
  }
  return SieveTable(x_max, std::move(spf));
}

}  // namespace sd
