#ifndef AIRYLAB_TEST_SUPPORT_HPP
#define AIRYLAB_TEST_SUPPORT_HPP

#include "airylab/airylab.hpp"

#include <cmath>
#include <random>

namespace testing_support {

using namespace airylab;

inline GridSpec grid(std::size_t n, double L, std::size_t t_count = 129, double T = 1.0)
{
	GridSpec g;
	g.n_points = n;
	g.domain_length = L;
	g.t_count = t_count;
	g.t_span = T;
	return g;
}

/// Random field with Gaussian-weighted random coefficients on |xi| < kmax,
/// localized by a Gaussian envelope of the given width, unit L2 norm.
inline Field random_field(const GridSpec& g, std::mt19937_64& rng, double kmax = 4.0, double envelope = 0.0)
{
	std::normal_distribution<double> nd;
	SpectralField F(g);
	for (std::size_t j = 0; j < F.size(); ++j) {
		const double xi = g.xi(j);
		if (std::abs(xi) < kmax)
			F[j] = cplx(nd(rng), nd(rng)) * std::exp(-2.0 * xi * xi / (kmax * kmax));
	}
	auto u = inverse_fourier(F);
	if (envelope > 0.0) {
		for (std::size_t j = 0; j < u.size(); ++j)
			u[j] *= std::exp(-0.5 * g.x(j) * g.x(j) / (envelope * envelope));
		// re-project onto the band so the field stays band-limited
		auto G = forward_fourier(u);
		for (std::size_t j = 0; j < G.size(); ++j)
			if (std::abs(g.xi(j)) > g.band_limit())
				G[j] = cplx{};
		u = inverse_fourier(G);
	}
	return cplx(1.0 / l2_norm(u)) * u;
}

inline double rel_l2(const Field& a, const Field& b)
{
	return l2_norm(a - b) / l2_norm(b);
}

inline Field plane_wave(const GridSpec& g, long k)
{
	const double xi = static_cast<double>(k) * g.dxi();
	return sample(g, [&](double x) { return std::polar(1.0, xi * x); });
}

inline Field unit(const Field& f)
{
	return cplx(1.0 / l2_norm(f)) * f;
}

/// Unit-norm Gaussian bubble placed by the symmetry (h, xi, x0).
inline Field planted_bubble(const GridSpec& g, double h, double xi, double x0)
{
	const auto phi = sample(g, [](double x) { return cplx(std::exp(-0.5 * x * x)); });
	SymmetryParams p;
	p.h = h;
	p.xi = xi;
	p.x0 = x0;
	return unit(apply_symmetry(phi, p));
}

/// Share of ||b||^2 captured by the piece f, measured as Re<f, b> / ||b||^2.
inline double captured_fraction(const Field& f, const Field& b)
{
	return inner_product(f, b).real() / (l2_norm(b) * l2_norm(b));
}

} // namespace testing_support

#endif
