#ifndef AIRYLAB_SPECTRAL_HPP
#define AIRYLAB_SPECTRAL_HPP

#include "error.hpp"
#include "fft.hpp"
#include "field.hpp"
#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace airylab {

inline constexpr double aliasing_tolerance = 1e-8;   // spectral mass fraction outside band
inline constexpr double truncation_tolerance = 1e-6; // mass fraction near boundary
inline constexpr double boundary_zone = 0.45;        // |x| > boundary_zone * L is "near boundary"

// ---------------------------------------------------------------------------
// Fourier transform, unitary convention
//   F(xi) = (2 pi)^{-1/2} int e^{-i x xi} u(x) dx, sampled at xi_k,
// so that dx * sum |u|^2 == dxi * sum |F|^2.
// ---------------------------------------------------------------------------

inline SpectralField forward_fourier(const Field& f)
{
	f.grid.validate();
	require_finite(f.samples, "forward_fourier");
	SpectralField out(f.grid, f.samples, f.warnings);
	detail::dft_inplace(out.coefficients, FFTW_FORWARD);
	const double scale = f.grid.dx() / std::sqrt(2.0 * std::numbers::pi);
	for (std::size_t j = 0; j < out.size(); ++j)
		out[j] *= (j % 2 == 0) ? scale : -scale;
	return out;
}

inline Field inverse_fourier(const SpectralField& F)
{
	F.grid.validate();
	require_finite(F.coefficients, "inverse_fourier");
	Field out(F.grid, F.coefficients, F.warnings);
	const double scale = F.grid.dxi() / std::sqrt(2.0 * std::numbers::pi);
	for (std::size_t j = 0; j < out.size(); ++j)
		out[j] *= (j % 2 == 0) ? scale : -scale;
	detail::dft_inplace(out.samples, FFTW_BACKWARD);
	return out;
}

/// Fraction of spectral mass with |xi| beyond the usable band.
inline double out_of_band_fraction(const SpectralField& F)
{
	const double B = F.grid.band_limit();
	double outside = 0.0, total = 0.0;
	for (std::size_t j = 0; j < F.size(); ++j) {
		const double m = std::norm(F[j]);
		total += m;
		if (std::abs(F.grid.xi(j)) > B)
			outside += m;
	}
	return total > 0.0 ? outside / total : 0.0;
}

/// Fraction of mass in the boundary zone |x| > 0.45 L.
inline double boundary_fraction(const Field& f)
{
	const double edge = boundary_zone * f.grid.domain_length;
	double outside = 0.0, total = 0.0;
	for (std::size_t j = 0; j < f.size(); ++j) {
		const double m = std::norm(f[j]);
		total += m;
		if (std::abs(f.grid.x(j)) > edge)
			outside += m;
	}
	return total > 0.0 ? outside / total : 0.0;
}

inline unsigned band_warning(const SpectralField& F)
{
	return out_of_band_fraction(F) > aliasing_tolerance ? warn_aliasing : warn_none;
}

inline unsigned boundary_warning(const Field& f)
{
	return boundary_fraction(f) > truncation_tolerance ? warn_truncation : warn_none;
}

// ---------------------------------------------------------------------------
// Fourier multipliers
// ---------------------------------------------------------------------------

enum class Dispersion { airy, schrodinger };

/// Phase of the free evolution multiplier e^{i t omega(xi)}:
/// omega = xi^3 for e^{-t d_x^3}, xi^2 for e^{-i t d_x^2}.
inline double dispersion_phase(Dispersion d, double xi, double t)
{
	return d == Dispersion::airy ? t * xi * xi * xi : t * xi * xi;
}

/// |xi|^alpha with the value 0 at xi = 0 for alpha > 0 and 1 for alpha = 0.
inline double abs_power(double xi, double alpha)
{
	if (alpha == 0.0)
		return 1.0;
	if (xi == 0.0)
		return 0.0;
	return std::pow(std::abs(xi), alpha);
}

template <class M>
SpectralField apply_multiplier(SpectralField F, M&& m)
{
	for (std::size_t j = 0; j < F.size(); ++j)
		F[j] *= m(F.grid.xi(j));
	return F;
}

inline Field evolve(const Field& f, double t, Dispersion d)
{
	if (!std::isfinite(t))
		throw InvalidInput("evolve: non-finite time");
	auto F = forward_fourier(f);
	F.warnings |= band_warning(F);
	F = apply_multiplier(std::move(F), [&](double xi) {
		return std::polar(1.0, dispersion_phase(d, xi, t));
	});
	auto out = inverse_fourier(F);
	out.warnings |= boundary_warning(out);
	return out;
}

/// e^{-t d_x^3} f, multiplier e^{i t xi^3}.
inline Field airy_propagate(const Field& f, double t)
{
	return evolve(f, t, Dispersion::airy);
}

/// e^{-i t d_x^2} f, multiplier e^{i t xi^2}.
inline Field schrodinger_propagate(const Field& f, double t)
{
	return evolve(f, t, Dispersion::schrodinger);
}

inline void check_fractional_order(const SpectralField& F, double alpha)
{
	if (!std::isfinite(alpha))
		throw InvalidParameter("fractional_derivative: non-finite order");
	if (alpha < 0.0) {
		const double total = sum_sq(F.coefficients);
		if (total > 0.0 && std::norm(F[0]) > 1e-12 * total)
			throw SingularMultiplier("fractional_derivative: negative order with mass at xi = 0");
	}
}

/// D^alpha f, multiplier |xi|^alpha.
inline Field fractional_derivative(const Field& f, double alpha)
{
	auto F = forward_fourier(f);
	check_fractional_order(F, alpha);
	F = apply_multiplier(std::move(F), [&](double xi) { return cplx(abs_power(xi, alpha)); });
	return inverse_fourier(F);
}

/// Calls fn(i, t_i, slice) with slice = D^alpha e^{i t_i omega} applied to F,
/// for every time node of the grid. The slice buffer is reused.
template <class Fn>
void for_each_slice(const SpectralField& F, Dispersion d, double alpha, Fn&& fn)
{
	const auto& g = F.grid;
	check_fractional_order(F, alpha);
	const std::size_t n = g.n_points;
	const double scale = g.dxi() / std::sqrt(2.0 * std::numbers::pi);
	std::vector<cplx> base(n);
	std::vector<double> omega(n);
	for (std::size_t j = 0; j < n; ++j) {
		const double xi = g.xi(j);
		base[j] = F[j] * abs_power(xi, alpha) * ((j % 2 == 0) ? scale : -scale);
		omega[j] = d == Dispersion::airy ? xi * xi * xi : xi * xi;
	}
	std::vector<cplx> slice(n);
	for (std::size_t i = 0; i < g.t_count; ++i) {
		const double t = g.t(i);
		for (std::size_t j = 0; j < n; ++j)
			slice[j] = base[j] * std::polar(1.0, t * omega[j]);
		detail::dft_inplace(slice, FFTW_BACKWARD);
		fn(i, t, std::span<const cplx>(slice));
	}
}

// ---------------------------------------------------------------------------
// Symmetry group
// ---------------------------------------------------------------------------

/// (h, xi, x0, t0, theta): scaling, frequency, translation, time shift, phase.
struct SymmetryParams {
	double h = 1.0;
	double xi = 0.0;
	double x0 = 0.0;
	double t0 = 0.0;
	double theta = 0.0;

	void validate() const
	{
		if (!(h > 0.0) || !std::isfinite(h))
			throw InvalidParameter("SymmetryParams: h must be positive");
		if (!std::isfinite(xi) || !std::isfinite(x0) || !std::isfinite(t0) || !std::isfinite(theta))
			throw InvalidParameter("SymmetryParams: non-finite parameter");
	}
};

namespace detail {

/// Evaluates the trigonometric interpolant of f at the points y_j, returning
/// scale * f(y_j) for |y_j| < L/2 and 0 outside the box.
template <class Points>
Field interpolate_at(const Field& f, Points&& y_of, double scale)
{
	const auto& g = f.grid;
	const auto F = forward_fourier(f);
	const std::size_t n = g.n_points;
	const double total = sum_sq(F.coefficients);
	Field out(g);
	out.warnings = f.warnings;
	if (total == 0.0)
		return out;
	// Contiguous range of signed wavenumbers carrying the mass.
	long kmin = static_cast<long>(n), kmax = -static_cast<long>(n);
	for (std::size_t j = 0; j < n; ++j) {
		if (std::norm(F[j]) > 1e-34 * total) {
			kmin = std::min(kmin, g.wavenumber(j));
			kmax = std::max(kmax, g.wavenumber(j));
		}
	}
	std::vector<cplx> coef(static_cast<std::size_t>(kmax - kmin + 1));
	const double c = g.dxi() / std::sqrt(2.0 * std::numbers::pi);
	for (long k = kmin; k <= kmax; ++k)
		coef[static_cast<std::size_t>(k - kmin)] = F[g.slot(k)] * c;
	const double half = 0.5 * g.domain_length;
	const double dxi = g.dxi();
	for (std::size_t j = 0; j < n; ++j) {
		const double y = y_of(j);
		if (!(std::abs(y) < half))
			continue;
		// F holds samples of the transform of the box function centered at 0,
		// so the interpolant is sum_k c_k e^{i xi_k y}.
		const cplx step = std::polar(1.0, dxi * y);
		cplx acc{}, w{};
		for (long k = kmin; k <= kmax; ++k) {
			const auto idx = static_cast<std::size_t>(k - kmin);
			if (idx % 256 == 0)
				w = std::polar(1.0, static_cast<double>(k) * dxi * y);
			acc += coef[idx] * w;
			w *= step;
		}
		out[j] = scale * acc;
	}
	return out;
}

} // namespace detail

/// M_xi f(x) = e^{i x xi} f(x).
inline Field modulate(Field f, double xi)
{
	for (std::size_t j = 0; j < f.size(); ++j)
		f[j] *= std::polar(1.0, xi * f.grid.x(j));
	f.warnings |= band_warning(forward_fourier(f));
	return f;
}

/// tau_x0 f(x) = f(x - x0), applied as the multiplier e^{-i x0 xi}.
inline Field translate(const Field& f, double x0)
{
	auto F = apply_multiplier(forward_fourier(f), [&](double xi) { return std::polar(1.0, -x0 * xi); });
	auto out = inverse_fourier(F);
	out.warnings |= boundary_warning(out);
	return out;
}

/// S_h f(x) = h^{-1/2} f(x / h), by band-limited interpolation.
inline Field rescale(const Field& f, double h)
{
	if (!(h > 0.0) || !std::isfinite(h))
		throw InvalidParameter("rescale: h must be positive");
	auto out = detail::interpolate_at(f, [&](std::size_t j) { return f.grid.x(j) / h; }, 1.0 / std::sqrt(h));
	out.warnings |= band_warning(forward_fourier(out)) | boundary_warning(out);
	return out;
}

/// e^{t0 d_x^3} f, i.e. Airy evolution by -t0.
inline Field time_shift(const Field& f, double t0)
{
	return airy_propagate(f, -t0);
}

inline Field rotate_phase(Field f, double theta)
{
	const cplx p = std::polar(1.0, theta);
	for (auto& z : f.samples)
		z *= p;
	return f;
}

/// e^{i theta} e^{t0 d_x^3} g_{0,x0,h}[e^{i(.) h xi} phi], i.e.
///   e^{i theta} e^{t0 d^3} [ h^{-1/2} e^{i (x - x0) xi} phi((x - x0) / h) ].
inline Field apply_symmetry(const Field& phi, const SymmetryParams& g)
{
	g.validate();
	require_finite(phi.samples, "apply_symmetry");
	const auto& grid = phi.grid;
	Field s = (g.h == 1.0 && g.x0 == 0.0)
	              ? phi
	              : detail::interpolate_at(
	                    phi, [&](std::size_t j) { return (grid.x(j) - g.x0) / g.h; },
	                    1.0 / std::sqrt(g.h));
	if (g.xi != 0.0)
		for (std::size_t j = 0; j < s.size(); ++j)
			s[j] *= std::polar(1.0, (grid.x(j) - g.x0) * g.xi);
	auto F = forward_fourier(s);
	F.warnings |= band_warning(F);
	if (g.t0 != 0.0 || g.theta != 0.0) {
		F = apply_multiplier(std::move(F), [&](double xi) {
			return std::polar(1.0, g.theta - g.t0 * xi * xi * xi);
		});
	}
	auto out = inverse_fourier(F);
	out.warnings |= boundary_warning(out);
	return out;
}

} // namespace airylab

#endif
