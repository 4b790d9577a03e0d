#ifndef DPCSP_FROZEN_CONSTANTS_H_
#define DPCSP_FROZEN_CONSTANTS_H_

// Generated by: build/tools/scan_constants > include/dpcsp/frozen_constants.h
// Scan: d in [1, 50], eps in {0.1, 0.5, 1}; minimum of
// AtThresholdProb(d, eps) * sqrt(d + 1/eps^2) = 0.46306561785314404 at d = 20, eps = 0.1.

namespace dpcsp {

inline constexpr int kFrozenConstantsVersion = 1;
inline constexpr double kAtThresholdConstant = 0.4630;

}  // namespace dpcsp

#endif  // DPCSP_FROZEN_CONSTANTS_H_
