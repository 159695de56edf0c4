// Shared plumbing: error types, deterministic RNG, worker-count resolution.
#pragma once

#include <cstdint>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

namespace hpforge {

// Canonical index of a finite-field element (see fields.hpp).
using felem = std::uint32_t;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Field construction / arithmetic.
struct NonPrimeCharacteristic : Error { using Error::Error; };
struct NoIrreducibleFound : Error { using Error::Error; };
struct FieldMismatch : Error { using Error::Error; };
struct DivisionByZero : Error { using Error::Error; };
struct NotAnExtensionOverRequestedBase : Error { using Error::Error; };
struct FieldTooLarge : Error { using Error::Error; };

// Projective-space layer.
struct DimensionOutOfRange : Error { using Error::Error; };
struct SpaceMismatch : Error { using Error::Error; };
struct ArgumentOutOfRange : Error { using Error::Error; };

// Constructions.
struct PointInHyperplane : Error { using Error::Error; };
struct PointOnElement : Error { using Error::Error; };
struct DegenerateTriple : Error { using Error::Error; };
struct SearchBudgetExhausted : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };

// Codes / resolving sets.
struct NotSpanning : Error { using Error::Error; };
struct InvalidPicks : Error { using Error::Error; };

// Deterministic RNG.  mt19937_64's raw output sequence is pinned by the
// standard (unlike the distribution adaptors), so draws are reproducible
// across platforms.  Bounded draws use rejection to stay unbiased.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw ArgumentOutOfRange("Rng::below(0)");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        for (;;) {
            const std::uint64_t x = gen_();
            if (x < limit) return x % n;
        }
    }

  private:
    std::mt19937_64 gen_;
};

// Per-trial seed derivation (splitmix64 finalizer over master ^ index).
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Worker-count resolution: explicit value > HPFORGE_WORKERS env > hardware.
inline int resolve_workers(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("HPFORGE_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

}  // namespace hpforge
