#pragma once

#include <cstdint>

namespace sparesim {

// Finalizing mixer from SplitMix64 (Steele, Lea & Flood); bijective on
// 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

class SplitMix64 {
  public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}
    constexpr std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

  private:
    std::uint64_t state_;
};

// xoshiro256++ (Blackman & Vigna). Fixed, platform-independent output
// sequence; cheap to construct per simulation run.
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t key) {
        SplitMix64 sm(key);
        for (auto& w : s_) w = sm.next();
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on the open interval (0,1): 53 mantissa bits, half-ulp
    // offset so neither endpoint can occur.
    double next_open01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

// Substream derivation: each (seed, run, role) triple maps to its own
// generator through two bijective mixing stages,
//   key = mix64(mix64(seed + GAMMA * run + C) + GAMMA * role + C),
// so distinct runs get distinct keys for any fixed seed and results do not
// depend on which worker executes which run.
constexpr std::uint64_t stream_component(std::uint64_t base, std::uint64_t index) {
    return mix64(base + 0x9e3779b97f4a7c15ULL * index + 0x632be59bd9b4e019ULL);
}

constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t run, std::uint64_t role) {
    return stream_component(stream_component(seed, run), role);
}

inline Xoshiro256pp substream(std::uint64_t seed, std::uint64_t run, std::uint64_t role) {
    return Xoshiro256pp(stream_key(seed, run, role));
}

}  // namespace sparesim
