#pragma once

#include <cstdint>

namespace polling {

// Counter-based splittable generator (splitmix64). Each stream is keyed by
// (seed, queue, purpose) so runs are reproducible and disciplines can be
// compared with common random numbers.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in (0, 1]; never 0, so -log(u) is finite.
    double uniform() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

inline SplitMix64 substream(std::uint64_t seed, std::uint64_t queue, std::uint64_t purpose) {
    // One mixing round separates the key space before the stream starts.
    SplitMix64 mixer(seed ^ (0xA076'1D64'78BD'642Full * (queue + 1)) ^
                     (0xE703'7ED1'A0B4'28DBull * (purpose + 1)));
    return SplitMix64(mixer.next());
}

}  // namespace polling
