#ifndef AIRYLAB_BUBBLES_HPP
#define AIRYLAB_BUBBLES_HPP

#include "error.hpp"
#include "field.hpp"
#include "norms.hpp"
#include "refined.hpp"
#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace airylab {

struct ExtractionConfig {
	double delta = 0.1;           // stop once the residual Strichartz norm is <= delta
	double p = 4.0 / 3.0;         // exponent of the concentration functional
	double c_thresh = 4.0;        // carve threshold c_thresh * delta^-6 * rho^-1/2
	std::size_t max_pieces = 64;
	double scale_ratio_max = 10.0; // regrouping: rho_j/rho_k + rho_k/rho_j <= this ...
	double freq_offset_max = 10.0; // ... and |xi_j - xi_k| / rho_j <= this
	ConcentrationOptions concentration{};

	void validate() const
	{
		if (!(delta > 0.0) || !std::isfinite(delta))
			throw InvalidParameter("ExtractionConfig: delta must be positive");
		if (!(p > 1.0))
			throw InvalidExponent("ExtractionConfig: p must exceed 1");
		if (!(c_thresh > 0.0))
			throw InvalidParameter("ExtractionConfig: c_thresh must be positive");
		if (max_pieces < 1)
			throw InvalidParameter("ExtractionConfig: max_pieces must be >= 1");
		if (!(scale_ratio_max > 0.0) || !(freq_offset_max >= 0.0))
			throw InvalidParameter("ExtractionConfig: regrouping thresholds must be positive");
	}

	/// |F| above this is left in the residual for an interval of half-width rho.
	double carve_threshold(double rho) const { return c_thresh * std::pow(delta, -6.0) / std::sqrt(rho); }
};

/// One carved piece. params.h = 1/rho, params.xi = center of the carving interval.
struct Bubble {
	SymmetryParams params;
	Field profile;  // carved piece v (complex mode) or its positive-frequency half f+ (real mode)
	Field physical; // profile itself, or 2 Re f+ in real mode
	SpectralField spectrum; // spectrum of profile
	IntervalValue support;  // carving interval (positive side in real mode)
	double mass = 0.0;      // ||physical||_2^2
	bool low_band = false;  // real mode: symmetric band around xi = 0

	double rho() const { return 1.0 / params.h; }
};

enum class Termination { converged, budget, stalled };

inline const char* to_string(Termination t)
{
	switch (t) {
	case Termination::converged:
		return "converged";
	case Termination::budget:
		return "budget";
	case Termination::stalled:
		return "stalled";
	}
	return "unknown";
}

struct ExtractionReport {
	std::vector<Bubble> pieces;
	Field remainder;
	double parseval_defect = 0.0;
	double strichartz_of_input = 0.0;
	double strichartz_of_remainder = 0.0;
	std::size_t iterations = 0;
	Termination termination = Termination::converged;
	bool real_mode = false;
};

namespace detail {

inline double l2_sq(const Field& f)
{
	return sum_sq(f.samples) * f.grid.dx();
}

inline void finish_report(ExtractionReport& rep, const Field& u)
{
	double acc = l2_sq(rep.remainder);
	for (const auto& b : rep.pieces)
		acc += b.mass;
	rep.parseval_defect = std::abs(l2_sq(u) - acc);
}

inline void check_unit_ball(const Field& u)
{
	if (l2_norm(u) > 1.0 + 1e-9)
		throw InvalidInput("extract_bubbles: input must satisfy ||u||_2 <= 1 (normalize first)");
}

} // namespace detail

/// Iterative extraction of (rho, xi) pieces: while the residual Strichartz
/// norm exceeds delta, carve the residual spectrum on the interval that
/// maximizes the concentration functional, keeping only values below the
/// carve threshold. Carved supports are pairwise disjoint.
inline ExtractionReport extract_bubbles(const Field& u, const ExtractionConfig& cfg)
{
	cfg.validate();
	require_finite(u.samples, "extract_bubbles");
	detail::check_unit_ball(u);
	const auto& g = u.grid;
	const std::size_t n = g.n_points;

	ExtractionReport rep;
	SpectralField R = forward_fourier(u);
	std::vector<char> carved(n, 0);
	Field residual = u;
	rep.strichartz_of_input = strichartz_functional(residual);
	double s = rep.strichartz_of_input;

	while (true) {
		if (s <= cfg.delta) {
			rep.termination = Termination::converged;
			break;
		}
		if (rep.pieces.size() >= cfg.max_pieces) {
			rep.termination = Termination::budget;
			break;
		}
		++rep.iterations;
		const auto I = concentration_functional(R, cfg.p, cfg.concentration);
		const double rho = 0.5 * I.length();
		const double cap = cfg.carve_threshold(rho);
		SpectralField piece(g);
		bool any = false;
		for (std::size_t m = I.begin; m < I.end; ++m) {
			const auto j = g.slot(static_cast<long>(m) - static_cast<long>(n / 2));
			if (carved[j] || std::abs(R[j]) > cap || R[j] == cplx{})
				continue;
			piece[j] = R[j];
			R[j] = cplx{};
			carved[j] = 1;
			any = true;
		}
		if (!any) {
			rep.termination = Termination::stalled;
			break;
		}
		Bubble b;
		b.params.h = 1.0 / rho;
		b.params.xi = I.center();
		b.support = I;
		b.spectrum = piece;
		b.profile = inverse_fourier(piece);
		b.physical = b.profile;
		b.mass = detail::l2_sq(b.profile);
		rep.pieces.push_back(std::move(b));
		residual = inverse_fourier(R);
		s = strichartz_functional(residual);
	}
	rep.remainder = inverse_fourier(R);
	rep.remainder.warnings = u.warnings;
	rep.strichartz_of_remainder = s;
	detail::finish_report(rep, u);
	return rep;
}

/// Real-data variant. Pieces carry f+ supported on tau in (0, inf); the
/// physical piece 2 Re f+ has spectrum on tau and -tau. A winning interval
/// that contains xi = 0 is replaced by the symmetric band around 0, whose
/// piece v is real and stored as f+ = v / 2.
inline ExtractionReport extract_bubbles_real(const Field& u, const ExtractionConfig& cfg)
{
	cfg.validate();
	require_finite(u.samples, "extract_bubbles_real");
	{
		double im = 0.0, tot = 0.0;
		for (const auto& z : u.samples) {
			im += z.imag() * z.imag();
			tot += std::norm(z);
		}
		if (im > 1e-12 * tot)
			throw InvalidInput("extract_bubbles_real: input is not real");
	}
	detail::check_unit_ball(u);
	const auto& g = u.grid;
	const std::size_t n = g.n_points;
	const long half = static_cast<long>(n / 2);

	ExtractionReport rep;
	rep.real_mode = true;
	const Field ureal = real_part(u);
	SpectralField R = forward_fourier(ureal);
	// Exact conjugate symmetry of the stored spectrum.
	R[g.slot(-half)] = cplx(R[g.slot(-half)].real(), 0.0);
	R[0] = cplx(R[0].real(), 0.0);
	for (long k = 1; k < half; ++k) {
		const auto jp = g.slot(k), jm = g.slot(-k);
		const cplx avg = 0.5 * (R[jp] + std::conj(R[jm]));
		R[jp] = avg;
		R[jm] = std::conj(avg);
	}
	std::vector<char> carved(n, 0);
	carved[g.slot(-half)] = 1; // the Nyquist bin has no mirror partner

	auto residual_field = [&] { return real_part(inverse_fourier(R)); };
	rep.strichartz_of_input = strichartz_functional(residual_field());
	double s = rep.strichartz_of_input;

	while (true) {
		if (s <= cfg.delta) {
			rep.termination = Termination::converged;
			break;
		}
		if (rep.pieces.size() >= cfg.max_pieces) {
			rep.termination = Termination::budget;
			break;
		}
		++rep.iterations;
		const auto I = concentration_functional(R, cfg.p, cfg.concentration);
		long ka = static_cast<long>(I.begin) - half;
		long kb = static_cast<long>(I.end) - 1 - half; // inclusive
		if (kb < 0) {
			// mirror onto the positive side
			const long a2 = -kb, b2 = -ka;
			ka = a2;
			kb = b2;
		}
		const bool low = ka <= 0;
		if (low) {
			const long r = std::max(std::abs(ka), std::abs(kb));
			ka = -r;
			kb = r;
		}
		const double dxi = g.dxi();
		IntervalValue tau = I;
		tau.lo = static_cast<double>(ka) * dxi;
		tau.hi = static_cast<double>(kb + 1) * dxi;
		tau.begin = static_cast<std::size_t>(ka + half);
		tau.end = static_cast<std::size_t>(kb + 1 + half);
		const double rho = 0.5 * tau.length();
		const double cap = cfg.carve_threshold(rho);

		SpectralField plus(g); // spectrum of f+
		double carved_mass = 0.0;
		for (long k = ka; k <= kb; ++k) {
			if (k <= -half || k >= half)
				continue;
			const auto j = g.slot(k);
			if (carved[j] || std::abs(R[j]) > cap || R[j] == cplx{})
				continue;
			carved_mass += std::norm(R[j]);
			if (low) {
				plus[j] = 0.5 * R[j];
				R[j] = cplx{};
				carved[j] = 1;
			} else {
				const auto jm = g.slot(-k);
				plus[j] = R[j];
				R[j] = cplx{};
				R[jm] = cplx{};
				carved[j] = 1;
				carved[jm] = 1;
			}
		}
		if (carved_mass == 0.0) {
			rep.termination = Termination::stalled;
			break;
		}
		Bubble b;
		b.low_band = low;
		b.params.h = 1.0 / rho;
		b.params.xi = low ? 0.0 : tau.center();
		b.support = tau;
		b.spectrum = plus;
		b.profile = inverse_fourier(plus);
		b.physical = 2.0 * real_part(b.profile);
		b.mass = detail::l2_sq(b.physical);
		rep.pieces.push_back(std::move(b));
		s = strichartz_functional(residual_field());
	}
	rep.remainder = residual_field();
	rep.remainder.warnings = u.warnings;
	rep.strichartz_of_remainder = s;
	detail::finish_report(rep, ureal);
	return rep;
}

/// Finite-n regrouping: pieces j < k are linked when
///   rho_j/rho_k + rho_k/rho_j <= scale_ratio_max  and  |xi_j - xi_k| / rho_j <= freq_offset_max.
/// Groups are the connected components, in order of first appearance.
inline std::vector<std::vector<Bubble>> group_by_scale_orthogonality(const std::vector<Bubble>& pieces,
                                                                     const ExtractionConfig& cfg)
{
	const std::size_t m = pieces.size();
	std::vector<std::size_t> parent(m);
	std::iota(parent.begin(), parent.end(), std::size_t{0});
	auto find = [&](std::size_t x) {
		while (parent[x] != x) {
			parent[x] = parent[parent[x]];
			x = parent[x];
		}
		return x;
	};
	for (std::size_t j = 0; j < m; ++j) {
		for (std::size_t k = j + 1; k < m; ++k) {
			const double rj = pieces[j].rho(), rk = pieces[k].rho();
			const bool scale_close = rj / rk + rk / rj <= cfg.scale_ratio_max;
			const bool freq_close = std::abs(pieces[j].params.xi - pieces[k].params.xi) / rj <= cfg.freq_offset_max;
			if (scale_close && freq_close) {
				const auto a = find(j), b = find(k);
				if (a != b)
					parent[std::max(a, b)] = std::min(a, b);
			}
		}
	}
	std::vector<std::vector<Bubble>> groups;
	std::vector<std::size_t> root_of_group;
	for (std::size_t j = 0; j < m; ++j) {
		const auto r = find(j);
		auto it = std::find(root_of_group.begin(), root_of_group.end(), r);
		if (it == root_of_group.end()) {
			root_of_group.push_back(r);
			groups.emplace_back();
			groups.back().push_back(pieces[j]);
		} else {
			groups[static_cast<std::size_t>(it - root_of_group.begin())].push_back(pieces[j]);
		}
	}
	return groups;
}

/// Physical sum of the pieces in a group (the regrouped profile f^j).
inline Field group_field(const std::vector<Bubble>& group)
{
	if (group.empty())
		throw InvalidInput("group_field: empty group");
	Field out = group.front().physical;
	for (std::size_t i = 1; i < group.size(); ++i)
		out = out + group[i].physical;
	return out;
}

} // namespace airylab

#endif
