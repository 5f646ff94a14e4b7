#pragma once

namespace madelung {

/// Airy function of the first kind for |x| <= 30 (absolute error below
/// 1e-10). Throws InvalidArgument outside that range.
double airy_ai(double x);

/// First (least negative) zero of Ai.
inline constexpr double kAiryFirstZero = -2.338107410459767038489;

}  // namespace madelung
