#ifndef ARC_RNG_HPP
#define ARC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <vector>

namespace arc {

// Counter-based pseudo-random stream. Each value is a stateless hash of
// (key, counter), so a stream keyed by (seed, stream_id) yields the same
// sequence no matter which thread consumes it or in what order streams are
// created. SplitMix64 finalizer.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream_id = 0)
        : key_(mix(seed ^ mix(stream_id ^ 0x51a9c1e3f64d2b07ULL))) {}

    static Rng keyed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                     std::uint64_t c = 0) {
        Rng r(seed, a);
        r.key_ = mix(r.key_ ^ mix(b ^ 0x2545f4914f6cdd1dULL));
        r.key_ = mix(r.key_ ^ mix(c ^ 0x9e6c63d0876a9a35ULL));
        return r;
    }

    std::uint64_t next_u64() {
        counter_ += 0x9e3779b97f4a7c15ULL;
        return mix(key_ ^ counter_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller; consumes two words per call.
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        // u1 = 0 would give log(0); nudge into (0, 1].
        u1 = 1.0 - u1;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

    // Rademacher sign.
    double sign() { return (next_u64() & 1) ? 1.0 : -1.0; }

    std::vector<double> signs(std::size_t n) {
        std::vector<double> out(n);
        for (auto& s : out) s = sign();
        return out;
    }

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace arc

#endif
