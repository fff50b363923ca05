#pragma once

#include <cassert>
#include <cstdint>
#include <random>
#include <vector>

#include "qmp/bits.hpp"

namespace qmp {

// Source of random/enumerated bits. Protocol code draws through this interface
// so tests can replace the PRNG with exhaustive enumeration.
struct BitSource {
    virtual ~BitSource() = default;
    virtual uint64_t u64() = 0;
    virtual int bit() { return static_cast<int>(u64() & 1); }

    // Uniform in [0, n). Rejection sampling; independent of platform.
    uint32_t below(uint32_t n) {
        assert(n > 0);
        const uint64_t bound = (~0ull / n) * n;
        uint64_t r;
        do {
            r = u64();
        } while (r >= bound);
        return static_cast<uint32_t>(r % n);
    }

    BitString bits(int len) {
        BitString v(len);
        for (int i = 0; i < len; ++i) v.set(i, bit());
        return v;
    }

    // k distinct values from [0, n), ascending.
    std::vector<int> sample(int n, int k);
};

// Deterministic PRNG stream. mt19937_64 output is fully specified by the
// standard, so transcripts reproduce bit-for-bit across platforms.
class Rng : public BitSource {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}
    uint64_t u64() override { return eng_(); }

  private:
    std::mt19937_64 eng_;
};

// Enumerated bit source: bit i of `word`, in draw order. Callers must know the
// draw count fits `capacity`.
class EnumBits : public BitSource {
  public:
    EnumBits(uint64_t word, int capacity) : word_(word), capacity_(capacity) {}
    uint64_t u64() override {
        uint64_t v = 0;
        for (int i = 0; i < 64; ++i) v |= static_cast<uint64_t>(bit()) << i;
        return v;
    }
    int bit() override {
        assert(used_ < capacity_);
        return static_cast<int>((word_ >> used_++) & 1);
    }
    int used() const { return used_; }

  private:
    uint64_t word_;
    int capacity_;
    int used_ = 0;
};

// Counts draws without providing entropy; sizes EnumBits enumerations.
class CountingBits : public BitSource {
  public:
    uint64_t u64() override {
        count_ += 64;
        return 0;
    }
    int bit() override {
        ++count_;
        return 0;
    }
    long count() const { return count_; }

  private:
    long count_ = 0;
};

// Decorrelated per-trial seed (splitmix64 finalizer).
uint64_t derive_seed(uint64_t master, uint64_t index);

}  // namespace qmp
