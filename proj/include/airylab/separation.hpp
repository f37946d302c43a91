#ifndef AIRYLAB_SEPARATION_HPP
#define AIRYLAB_SEPARATION_HPP

#include "error.hpp"
#include "field.hpp"
#include "fft.hpp"
#include "spectral.hpp"

#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace airylab {

enum class SeparationBranch { scale_freq, space_time };

inline const char* to_string(SeparationBranch b)
{
	return b == SeparationBranch::scale_freq ? "scale_freq" : "space_time";
}

struct SeparationScore {
	SeparationBranch branch = SeparationBranch::space_time;
	double value = 0.0;
};

inline constexpr double default_separation_tol = 1e-9;

/// Orthogonality expression for two parameter tuples (a = j, b = k):
///   scale_freq:  h_a/h_b + h_b/h_a + h_a |xi_a - xi_b|
///   space_time:  |t_b - t_a|/h^3 + 3|(t_b - t_a) xi|/h^2 + |x_a - x_b + 3(t_a - t_b) xi^2|/h
/// The second form applies when (h, xi) agree to within tol and is evaluated
/// at the parameters of a.
inline SeparationScore separation_score(const SymmetryParams& a, const SymmetryParams& b,
                                        double tol = default_separation_tol)
{
	if (!(a.h > 0.0) || !(b.h > 0.0) || !std::isfinite(a.h) || !std::isfinite(b.h))
		throw InvalidParameter("separation_score: h must be positive");
	if (!(tol > 0.0))
		throw InvalidParameter("separation_score: tol must be positive");
	const double freq = a.h * std::abs(a.xi - b.xi);
	if (std::abs(a.h - b.h) / a.h > tol || freq > tol)
		return {SeparationBranch::scale_freq, a.h / b.h + b.h / a.h + freq};
	const double h = a.h, xi = a.xi, dt = b.t0 - a.t0;
	const double v = std::abs(dt) / (h * h * h) + 3.0 * std::abs(dt * xi) / (h * h)
	                 + std::abs(a.x0 - b.x0 - 3.0 * dt * xi * xi) / h;
	return {SeparationBranch::space_time, v};
}

/// A profile phi placed by the symmetry Gamma.
struct PlacedProfile {
	SymmetryParams params;
	Field profile;

	Field realize() const { return apply_symmetry(profile, params); }
};

struct Overlap {
	cplx value;
	unsigned warnings = warn_none;
};

/// <apply_symmetry(phi_A, Gamma_A), apply_symmetry(phi_B, Gamma_B)> on the grid.
inline Overlap profile_inner_product(const PlacedProfile& A, const PlacedProfile& B)
{
	require_same_grid(A.profile.grid, B.profile.grid, "profile_inner_product");
	const auto fa = A.realize();
	const auto fb = B.realize();
	return {inner_product(fa, fb), fa.warnings | fb.warnings};
}

struct AdditivityDefect {
	double defect = 0.0;     // | ||sum U_j||^6 - sum ||U_j||^6 |
	double sum_of_parts = 0.0; // sum ||U_j||^6
	double of_sum = 0.0;       // ||sum U_j||^6
	unsigned warnings = warn_none;

	double relative() const { return sum_of_parts > 0.0 ? defect / sum_of_parts : 0.0; }
};

/// Sixth power additivity defect of U_j = D^{1/6} e^{-t d^3} apply_symmetry(phi_j, Gamma_j)
/// in L^6_{t,x} over the time window of the grid.
inline AdditivityDefect l6_additivity_defect(const std::vector<PlacedProfile>& profiles)
{
	if (profiles.size() < 2)
		throw InvalidInput("l6_additivity_defect: at least two profiles required");
	const auto& g = profiles.front().profile.grid;
	for (const auto& p : profiles)
		require_same_grid(g, p.profile.grid, "l6_additivity_defect");
	const std::size_t n = g.n_points;
	const double scale = g.dxi() / std::sqrt(2.0 * std::numbers::pi);

	AdditivityDefect out;
	std::vector<std::vector<cplx>> base;
	base.reserve(profiles.size());
	for (const auto& p : profiles) {
		const auto f = p.realize();
		out.warnings |= f.warnings;
		const auto F = forward_fourier(f);
		out.warnings |= band_warning(F);
		std::vector<cplx> b(n);
		for (std::size_t j = 0; j < n; ++j)
			b[j] = F[j] * abs_power(g.xi(j), 1.0 / 6.0) * ((j % 2 == 0) ? scale : -scale);
		base.push_back(std::move(b));
	}
	std::vector<double> cube(n);
	for (std::size_t j = 0; j < n; ++j) {
		const double xi = g.xi(j);
		cube[j] = xi * xi * xi;
	}
	auto sixth = [](std::span<const cplx> v) {
		double s = 0.0;
		for (const auto& z : v) {
			const double a = std::norm(z);
			s += a * a * a;
		}
		return s;
	};
	std::vector<cplx> slice(n), total(n);
	const double dx = g.dx();
	for (std::size_t i = 0; i < g.t_count; ++i) {
		const double t = g.t(i), w = g.t_weight(i) * dx;
		std::fill(total.begin(), total.end(), cplx{});
		for (const auto& b : base) {
			for (std::size_t j = 0; j < n; ++j)
				slice[j] = b[j] * std::polar(1.0, t * cube[j]);
			detail::dft_inplace(slice, FFTW_BACKWARD);
			out.sum_of_parts += w * sixth(slice);
			for (std::size_t j = 0; j < n; ++j)
				total[j] += slice[j];
		}
		out.of_sum += w * sixth(total);
	}
	out.defect = std::abs(out.of_sum - out.sum_of_parts);
	return out;
}

} // namespace airylab

#endif
