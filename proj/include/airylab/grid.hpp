#ifndef AIRYLAB_GRID_HPP
#define AIRYLAB_GRID_HPP

#include "error.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

namespace airylab {

/// Discretization of space, frequency and time.
///
/// Space is the periodic box [-L/2, L/2) sampled at n_points nodes
/// x_j = -L/2 + j*dx. Frequencies are xi_k = k * 2*pi/L for
/// k in [-n/2, n/2), stored in FFT order. The time window [-T, T] is
/// sampled at t_count uniform nodes including both endpoints.
struct GridSpec {
	std::size_t n_points = 1024;
	double domain_length = 64.0;
	std::size_t t_count = 129;
	double t_span = 4.0;
	double band_fraction = 0.5;

	void validate() const
	{
		if (n_points < 2 || n_points % 2 != 0)
			throw InvalidParameter("GridSpec: n_points must be even and >= 2");
		if (!(domain_length > 0.0) || !std::isfinite(domain_length))
			throw InvalidParameter("GridSpec: domain_length must be positive");
		if (t_count < 2)
			throw InvalidParameter("GridSpec: t_count must be >= 2");
		if (!(t_span > 0.0) || !std::isfinite(t_span))
			throw InvalidParameter("GridSpec: t_span must be positive");
		if (!(band_fraction > 0.0 && band_fraction <= 1.0))
			throw InvalidParameter("GridSpec: band_fraction must lie in (0,1]");
	}

	double dx() const { return domain_length / static_cast<double>(n_points); }
	double dxi() const { return 2.0 * std::numbers::pi / domain_length; }
	double x(std::size_t j) const { return -0.5 * domain_length + static_cast<double>(j) * dx(); }

	/// Signed integer wavenumber of FFT slot j.
	long wavenumber(std::size_t j) const
	{
		const auto n = static_cast<long>(n_points);
		const auto jj = static_cast<long>(j);
		return jj < n / 2 ? jj : jj - n;
	}
	double xi(std::size_t j) const { return static_cast<double>(wavenumber(j)) * dxi(); }

	/// FFT slot holding signed wavenumber k (k in [-n/2, n/2)).
	std::size_t slot(long k) const
	{
		const auto n = static_cast<long>(n_points);
		return static_cast<std::size_t>(k >= 0 ? k : k + n);
	}

	/// Half-width of the usable frequency band.
	double band_limit() const
	{
		return band_fraction * std::numbers::pi * static_cast<double>(n_points) / domain_length;
	}

	double dt() const { return 2.0 * t_span / static_cast<double>(t_count - 1); }
	double t(std::size_t i) const { return -t_span + static_cast<double>(i) * dt(); }

	/// Trapezoid weight of time node i.
	double t_weight(std::size_t i) const
	{
		return (i == 0 || i + 1 == t_count) ? 0.5 * dt() : dt();
	}

	bool operator==(const GridSpec&) const = default;

	std::string describe() const
	{
		return "n=" + std::to_string(n_points) + " L=" + std::to_string(domain_length) +
		       " t_count=" + std::to_string(t_count) + " T=" + std::to_string(t_span) +
		       " band=" + std::to_string(band_fraction);
	}
};

} // namespace airylab

#endif
