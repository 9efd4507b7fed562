#pragma once

// SplitMix64 with stream splitting. Trial i of a seeded computation draws from
// stream(root_seed, i), so results do not depend on how trials are scheduled
// across threads.

#include <cmath>
#include <cstdint>
#include <vector>

namespace derivlab {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1), safe as a log argument.
    double next_open() {
        double u;
        do { u = next_double(); } while (u == 0.0);
        return u;
    }

    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    int next_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    double next_sign() { return (next_u64() & 1) ? 1.0 : -1.0; }

    /// Box-Muller; not std::normal_distribution, whose stream is
    /// implementation-defined and would break cross-platform determinism.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u = next_open();
        const double v = next_double();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double a = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Independent child stream: same (root, index) gives the same stream
/// regardless of thread count or evaluation order.
inline SplitMix64 split_stream(std::uint64_t root, std::uint64_t index) {
    SplitMix64 mixer(root ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
    return SplitMix64(mixer.next_u64());
}

} // namespace derivlab
