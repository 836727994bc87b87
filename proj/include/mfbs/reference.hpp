#pragma once

#include "mfbs/model.hpp"
#include "mfbs/moments.hpp"

// Plain serial implementations of the parallel kernels. They follow the same
// per-subject seed derivation and the same fixed reduction order, so their
// output is byte-identical to the parallel versions; tests compare the two
// and the benchmark target measures the gap.

namespace mfbs::reference {

Panel simulate_panel(const ModelParams& params, const EffectsDistribution& dist,
                     std::size_t subjects, std::size_t n, std::uint64_t seed,
                     const FgnSampler& sampler);

Panel simulate_panel(const ModelParams& params, const EffectsDistribution& dist,
                     std::size_t subjects, std::size_t n, std::uint64_t seed,
                     NoiseBackend backend = NoiseBackend::automatic);

MomentSummary summarize(const Panel& panel, std::size_t n);

}  // namespace mfbs::reference
