#pragma once

#include <cstdint>
#include <stdexcept>

namespace corrclust {

// Deterministic random stream built on the splitmix64 mixer.  std::mt19937
// plus std::uniform_int_distribution is avoided deliberately: the standard
// leaves distribution output unspecified across implementations, and the
// solver promises bit-identical runs for a given seed on any platform.
//
// Streams form a tree: child(i) derives an independent stream from the
// current state without consuming from the parent, so call sites can hand
// out generators in a fixed layout regardless of how much randomness each
// consumer draws.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform draw from [0, n); unbiased via rejection from the top.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("RngStream::below(0)");
        std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            std::uint64_t x = next();
            if (x >= threshold) return (x - threshold) % n;
        }
    }

    // Uniform double in [0, 1) with 53 bits of precision.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Independent derived stream; does not advance this stream.
    RngStream child(std::uint64_t index) const {
        std::uint64_t z = state_ + 0x9e3779b97f4a7c15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return RngStream(z ^ (z >> 31));
    }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

}  // namespace corrclust
