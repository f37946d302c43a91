#ifndef AIRYLAB_FIELD_HPP
#define AIRYLAB_FIELD_HPP

#include "error.hpp"
#include "grid.hpp"

#include <cmath>
#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace airylab {

using cplx = std::complex<double>;

/// Physical-space samples u(x_j) on a grid.
struct Field {
	GridSpec grid;
	std::vector<cplx> samples;
	unsigned warnings = warn_none;

	Field() = default;
	explicit Field(const GridSpec& g) : grid(g), samples(g.n_points, cplx{}) {}
	Field(const GridSpec& g, std::vector<cplx> s, unsigned w = warn_none)
	    : grid(g), samples(std::move(s)), warnings(w)
	{
		if (samples.size() != grid.n_points)
			throw InvalidInput("Field: sample count does not match grid");
	}

	std::size_t size() const { return samples.size(); }
	cplx& operator[](std::size_t j) { return samples[j]; }
	const cplx& operator[](std::size_t j) const { return samples[j]; }
};

/// Samples of the unitary Fourier transform at xi_k, FFT order.
struct SpectralField {
	GridSpec grid;
	std::vector<cplx> coefficients;
	unsigned warnings = warn_none;

	SpectralField() = default;
	explicit SpectralField(const GridSpec& g) : grid(g), coefficients(g.n_points, cplx{}) {}
	SpectralField(const GridSpec& g, std::vector<cplx> c, unsigned w = warn_none)
	    : grid(g), coefficients(std::move(c)), warnings(w)
	{
		if (coefficients.size() != grid.n_points)
			throw InvalidInput("SpectralField: coefficient count does not match grid");
	}

	std::size_t size() const { return coefficients.size(); }
	cplx& operator[](std::size_t j) { return coefficients[j]; }
	const cplx& operator[](std::size_t j) const { return coefficients[j]; }
};

inline bool all_finite(std::span<const cplx> v)
{
	for (const auto& z : v)
		if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
			return false;
	return true;
}

inline void require_finite(std::span<const cplx> v, const char* what)
{
	if (!all_finite(v))
		throw InvalidInput(std::string(what) + ": non-finite samples");
}

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what)
{
	if (!(a == b))
		throw GridMismatch(std::string(what) + ": grids differ (" + a.describe() + " vs " +
		                   b.describe() + ")");
}

/// Sum of |v|^2 without the measure.
inline double sum_sq(std::span<const cplx> v)
{
	double s = 0.0;
	for (const auto& z : v)
		s += std::norm(z);
	return s;
}

/// L^2 inner product <f, g> = dx * sum f conj(g).
inline cplx inner_product(const Field& f, const Field& g)
{
	require_same_grid(f.grid, g.grid, "inner_product");
	cplx s{};
	for (std::size_t j = 0; j < f.size(); ++j)
		s += f[j] * std::conj(g[j]);
	return s * f.grid.dx();
}

/// Squared L^2 norm of a spectral field (dxi-weighted).
inline double spectral_mass(const SpectralField& F)
{
	return sum_sq(F.coefficients) * F.grid.dxi();
}

inline Field operator+(Field a, const Field& b)
{
	require_same_grid(a.grid, b.grid, "Field +");
	for (std::size_t j = 0; j < a.size(); ++j)
		a[j] += b[j];
	a.warnings |= b.warnings;
	return a;
}

inline Field operator-(Field a, const Field& b)
{
	require_same_grid(a.grid, b.grid, "Field -");
	for (std::size_t j = 0; j < a.size(); ++j)
		a[j] -= b[j];
	a.warnings |= b.warnings;
	return a;
}

inline Field operator*(cplx c, Field a)
{
	for (auto& z : a.samples)
		z *= c;
	return a;
}

/// Samples a callable u(x) on the grid nodes.
template <class F>
Field sample(const GridSpec& grid, F&& fn)
{
	grid.validate();
	Field out(grid);
	for (std::size_t j = 0; j < grid.n_points; ++j)
		out[j] = cplx(fn(grid.x(j)));
	return out;
}

/// Field with only the real part of each sample.
inline Field real_part(Field f)
{
	for (auto& z : f.samples)
		z = cplx(z.real(), 0.0);
	return f;
}

} // namespace airylab

#endif
