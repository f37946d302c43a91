#ifndef AIRYLAB_NORMS_HPP
#define AIRYLAB_NORMS_HPP

#include "error.hpp"
#include "field.hpp"
#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace airylab {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// (alpha, q, r) for ||D^alpha e^{-t d^3} u||_{L^q_t L^r_x}.
struct StrichartzExponents {
	double alpha = 1.0 / 6.0;
	double q = 6.0;
	double r = 6.0;
};

inline constexpr StrichartzExponents symmetric_exponents{1.0 / 6.0, 6.0, 6.0};

/// -alpha + 3/q + 1/r == 1/2 and -1/2 <= alpha <= 1/q.
inline bool check_admissible(const StrichartzExponents& e)
{
	if (!(e.q >= 1.0) || !(e.r >= 1.0) || std::isnan(e.alpha))
		return false;
	const double inv_q = std::isinf(e.q) ? 0.0 : 1.0 / e.q;
	const double inv_r = std::isinf(e.r) ? 0.0 : 1.0 / e.r;
	const double lhs = -e.alpha + 3.0 * inv_q + inv_r;
	return std::abs(lhs - 0.5) <= 1e-12 && e.alpha >= -0.5 && e.alpha <= inv_q + 1e-15;
}

/// sqrt(dx * sum |u|^2).
inline double l2_norm(const Field& f)
{
	require_finite(f.samples, "l2_norm");
	return std::sqrt(sum_sq(f.samples) * f.grid.dx());
}

/// Samples of a function of (t, x), one Field per time node of the grid.
struct SpaceTimeField {
	GridSpec grid;
	std::vector<Field> slices;

	explicit SpaceTimeField(const GridSpec& g) : grid(g) {}

	void push(Field f)
	{
		require_same_grid(grid, f.grid, "SpaceTimeField");
		if (slices.size() >= grid.t_count)
			throw InvalidInput("SpaceTimeField: more slices than time nodes");
		slices.push_back(std::move(f));
	}
};

namespace detail {

inline void check_exponents(double q, double r)
{
	if (!(q >= 1.0) || !(r >= 1.0))
		throw InvalidExponent("space-time norm: exponents must be >= 1");
}

/// ||u||_{L^r_x} of one slice (Riemann sum; max for r = inf).
inline double slice_norm(std::span<const cplx> u, double dx, double r)
{
	if (std::isinf(r)) {
		double m = 0.0;
		for (const auto& z : u)
			m = std::max(m, std::abs(z));
		return m;
	}
	double s = 0.0;
	if (r == 2.0) {
		for (const auto& z : u)
			s += std::norm(z);
		return std::sqrt(s * dx);
	}
	if (r == 6.0) {
		for (const auto& z : u) {
			const double a = std::norm(z);
			s += a * a * a;
		}
		return std::cbrt(std::sqrt(s * dx));
	}
	for (const auto& z : u)
		s += std::pow(std::abs(z), r);
	return std::pow(s * dx, 1.0 / r);
}

/// Accumulates the outer L^q_t quadrature (trapezoid; max for q = inf).
class TimeReduction {
public:
	explicit TimeReduction(double q) : q_(q) {}

	void add(double weight, double inner)
	{
		if (std::isinf(q_))
			acc_ = std::max(acc_, inner);
		else
			acc_ += weight * std::pow(inner, q_);
	}

	double result() const { return std::isinf(q_) ? acc_ : std::pow(acc_, 1.0 / q_); }

private:
	double q_;
	double acc_ = 0.0;
};

} // namespace detail

/// L^q_t L^r_x norm: Riemann sum in x, trapezoid in t, max for infinite exponents.
inline double spacetime_norm(const SpaceTimeField& U, double q, double r)
{
	detail::check_exponents(q, r);
	if (U.slices.size() != U.grid.t_count)
		throw InvalidInput("spacetime_norm: slice count does not match t_count");
	detail::TimeReduction red(q);
	for (std::size_t i = 0; i < U.slices.size(); ++i) {
		require_finite(U.slices[i].samples, "spacetime_norm");
		red.add(U.grid.t_weight(i), detail::slice_norm(U.slices[i].samples, U.grid.dx(), r));
	}
	return red.result();
}

/// Builds the sampled space-time function D^alpha e^{i t omega} f.
inline SpaceTimeField evolve_spacetime(const Field& f, double alpha, Dispersion d = Dispersion::airy)
{
	const auto F = forward_fourier(f);
	SpaceTimeField U(f.grid);
	for_each_slice(F, d, alpha, [&](std::size_t, double, std::span<const cplx> s) {
		U.push(Field(f.grid, std::vector<cplx>(s.begin(), s.end())));
	});
	return U;
}

/// ||D^alpha e^{i t omega} f||_{L^q_t L^r_x} evaluated slice by slice without
/// storing the space-time field.
inline double dispersive_norm(const Field& f, double alpha, double q, double r,
                              Dispersion d = Dispersion::airy)
{
	detail::check_exponents(q, r);
	const auto F = forward_fourier(f);
	detail::TimeReduction red(q);
	const double dx = f.grid.dx();
	for_each_slice(F, d, alpha, [&](std::size_t i, double, std::span<const cplx> s) {
		red.add(f.grid.t_weight(i), detail::slice_norm(s, dx, r));
	});
	return red.result();
}

/// ||D^alpha e^{-t d^3} f||_{L^q_t L^r_x} for admissible exponents.
inline double strichartz_functional(const Field& f, const StrichartzExponents& e = symmetric_exponents)
{
	if (!check_admissible(e))
		throw InvalidExponent("strichartz_functional: exponents are not admissible");
	return dispersive_norm(f, e.alpha, e.q, e.r, Dispersion::airy);
}

/// ||e^{-i t d^2} f||_{L^6_{t,x}}.
inline double schrodinger_l6(const Field& f)
{
	return dispersive_norm(f, 0.0, 6.0, 6.0, Dispersion::schrodinger);
}

} // namespace airylab

#endif
