#pragma once

#include <cstdint>

namespace mbm {

/// Counter-based normal stream: each variate is a pure function of
/// (master_seed, stream, index), so parallel replicates draw from
/// independent streams with no sequential state.
class CounterRng {
public:
    CounterRng(std::uint64_t master_seed, std::uint64_t stream);

    // Uniform in (0,1), open at both ends.
    double uniform(std::uint64_t index) const;

    // Standard normal via Box-Muller on the uniforms at 2*index, 2*index+1.
    double normal(std::uint64_t index) const;

private:
    std::uint64_t key_;
};

// SplitMix64 finalizer; also usable as a stand-alone 64-bit mixer.
std::uint64_t mix64(std::uint64_t z);

}  // namespace mbm
