#pragma once

#include "madelung/grid.hpp"

namespace madelung {

/// hbar and m. Natural units by default.
struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;

  void validate() const;
};

/// A complex field Psi on a grid together with the constants it evolves under.
///
/// normalizable is false for states whose continuum counterpart has infinite
/// norm (the Airy packet); those are normalized over the computational
/// window only and flagged so the harness restricts their checks.
struct WaveFunction {
  ComplexField psi;
  PhysicalConstants constants;
  bool normalizable = true;

  const Grid& grid() const { return psi.grid(); }
};

/// Default relative density floor below which phase and log-derivatives
/// are considered undefined.
inline constexpr double kDefaultDensityFloor = 1e-12;

/// rho = |Psi|^2, S = hbar * arg(Psi) unwrapped along x, and the signed
/// amplitude R with R^2 = rho that changes sign across isolated nodes so
/// that it stays smooth where sqrt(rho) would have a kink.
struct PolarDecomposition {
  RealField rho;
  RealField S;
  RealField amplitude;
  Mask valid_mask;
  /// index of the density maximum; S is anchored there
  std::size_t anchor = 0;
};

double norm(const WaveFunction& wf);
/// Rescales Psi to unit norm. Throws if the norm vanishes.
void normalize(WaveFunction& wf);

PolarDecomposition polar_decompose(const WaveFunction& wf, double density_floor_rel = kDefaultDensityFloor);

/// Density moments over the full grid (first and second central).
double mean_position(const RealField& rho);
double position_std(const RealField& rho);

// Factories. All of them validate their preconditions and throw
// InvalidArgument on violation.

/// Psi ~ exp(-(x-x0)^2 / (4 sigma0^2)) exp(i k0 x), normalized; the density
/// has standard deviation sigma0. Rejects packets whose analytic tail mass
/// outside the domain exceeds 1e-12.
WaveFunction gaussian_packet(const Grid& grid, const PhysicalConstants& c, double x0, double sigma0, double k0);

/// exp(i k (x - x_min)) / sqrt(L) with k = mode_index * 2 pi / L.
WaveFunction plane_wave(const Grid& grid, const PhysicalConstants& c, int mode_index);

/// Ground state of U = m omega^2 x^2 / 2.
WaveFunction harmonic_ground_state(const Grid& grid, const PhysicalConstants& c, double omega);

struct AiryWindow {
  /// Taper start and end as fractions of the domain length measured from
  /// x_min; the taper is C-infinity and identically zero before start.
  double taper_start = 0.025;
  double taper_end = 0.225;
};

/// Free accelerating Airy packet Ai[B/hbar^{2/3} (x - B^3 t^2 / 4m^2)] with its
/// exact phase, tapered on the oscillatory side, normalized over the grid and
/// flagged non-normalizable.
WaveFunction airy_packet(const Grid& grid, const PhysicalConstants& c, double scale_B, double t,
                         const AiryWindow& window = {});

/// Lower/upper edge of the central half of the domain used for Airy diagnostics.
std::pair<double, double> central_window(const Grid& grid);

/// Gravitational bouncer ground state Ai(x/l + a1), l = (hbar^2 / 2 m^2 g)^{1/3},
/// for a hard wall at x = 0. The grid carries the odd (image) extension
/// sign(x) Ai(|x|/l + a1), i.e. the mirror problem with U = m g |x|, which is
/// identical to the walled state on x >= 0 and smooth enough for spectral
/// differentiation. Normalized over the whole grid.
WaveFunction bouncer_eigenstate(const Grid& grid, const PhysicalConstants& c, double g);

/// Bouncer length scale l.
double bouncer_length(const PhysicalConstants& c, double g);
/// Bouncer ground-state energy -a1 (m g^2 hbar^2 / 2)^{1/3}.
double bouncer_energy(const PhysicalConstants& c, double g);

}  // namespace madelung
