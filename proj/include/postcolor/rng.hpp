#pragma once

#include <cstdint>
#include <random>

namespace postcolor {

/// Stateless hash of up to three 64-bit words (splitmix64 finalization),
/// used to derive independent substream seeds from (master seed, index).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

/// Deterministic random stream.  Normal variates come from an explicit
/// polar Box-Muller transform so the draw sequence is pinned by this code,
/// not by the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Substream for replication `index` of experiment `purpose` under
    /// `master`.  Distinct (index, purpose) pairs give independent streams.
    static Rng substream(std::uint64_t master, std::uint64_t index, std::uint64_t purpose = 0) {
        return Rng(mix_seed(master, index, purpose));
    }

    std::uint64_t next_u64() { return eng_(); }

    double uniform() {  // (0, 1)
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal();

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace postcolor
