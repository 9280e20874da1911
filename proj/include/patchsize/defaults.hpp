#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

// Every tunable default of the library and the CLI lives here.
//
//   name                        value     used by
//   kEigenTolerance             1e-10     eigen solvers; relative to max(1, Gershgorin bound)
//   kPositivityThreshold        1e-8      "xi > 0" decisions
//   kDenseThreshold             256       components up to this size use the dense solver
//   kKrylovDim                  160       Lanczos basis size before an explicit restart
//   kMaxLanczosSteps            20000     Lanczos steps over all restarts
//   kPowerTolerance             1e-9      Weyl bound power iteration, relative gap
//   kMaxPowerSteps              200000    Weyl bound power iteration
//   kSamples                    1000      Monte Carlo replicates per grid point
//   kSeed                       20240611  master seed
//   kTailLevel                  0.01      right-tail percentile level
//   kMaxExperimentVertices      20000     desk-scale cap on n
//   kMonotoneCheckEvery         25        every k-th sample gets an edge-insertion check
//   kSurvivalMass               1e-6      logistic survival mass threshold
//   kNearCriticalMargin         0.05      classify_survival refuses |rho-xi| <= margin*max(1,xi)
namespace patchsize::defaults {

inline constexpr double kEigenTolerance = 1e-10;
inline constexpr double kPositivityThreshold = 1e-8;
inline constexpr std::size_t kDenseThreshold = 256;
inline constexpr std::size_t kKrylovDim = 160;
inline constexpr std::size_t kMaxLanczosSteps = 20000;
inline constexpr double kPowerTolerance = 1e-9;
inline constexpr std::size_t kMaxPowerSteps = 200000;

inline constexpr std::size_t kSamples = 1000;
inline constexpr std::uint64_t kSeed = 20240611;
inline constexpr double kTailLevel = 0.01;
inline constexpr std::size_t kMaxExperimentVertices = 20000;
inline constexpr std::size_t kMonotoneCheckEvery = 25;

inline constexpr std::array<double, 4> kRatioPGrid = {0.1, 0.2, 0.4, 0.8};
inline constexpr std::array<double, 3> kThresholdFactors = {0.5, 1.5, 2.0};

inline constexpr double kSurvivalMass = 1e-6;
inline constexpr double kNearCriticalMargin = 0.05;

}  // namespace patchsize::defaults
