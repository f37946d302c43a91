#ifndef AIRYLAB_EXTREMAL_HPP
#define AIRYLAB_EXTREMAL_HPP

#include "error.hpp"
#include "field.hpp"
#include "fft.hpp"
#include "norms.hpp"
#include "spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace airylab {

/// Which L^6_{t,x} functional is maximized: D^{1/6} e^{-t d^3} over complex
/// or real fields, or e^{-i t d^2} over complex fields.
enum class Functional { airy, airy_real, schrodinger };

inline const char* to_string(Functional m)
{
	switch (m) {
	case Functional::airy:
		return "airy";
	case Functional::airy_real:
		return "airy_real";
	case Functional::schrodinger:
		return "schrodinger";
	}
	return "unknown";
}

namespace detail {

inline Dispersion dispersion_of(Functional m)
{
	return m == Functional::schrodinger ? Dispersion::schrodinger : Dispersion::airy;
}

inline double alpha_of(Functional m)
{
	return m == Functional::schrodinger ? 0.0 : 1.0 / 6.0;
}

inline double require_nonzero(const Field& u, const char* what)
{
	require_finite(u.samples, what);
	const double n = l2_norm(u);
	if (!(n > 0.0))
		throw DegenerateInput(std::string(what) + ": zero field");
	return n;
}

inline Field prepare(const Field& u, Functional m)
{
	return m == Functional::airy_real ? real_part(u) : u;
}

} // namespace detail

/// J(u) = sum_t w_t dx sum_x |A_t u|^6 with A_t = D^alpha e^{i t omega}.
inline double sixth_power_integral(const Field& u, Functional m = Functional::airy)
{
	const auto F = forward_fourier(u);
	double acc = 0.0;
	const double dx = u.grid.dx();
	for_each_slice(F, detail::dispersion_of(m), detail::alpha_of(m),
	               [&](std::size_t i, double, std::span<const cplx> s) {
		               double v = 0.0;
		               for (const auto& z : s) {
			               const double a = std::norm(z);
			               v += a * a * a;
		               }
		               acc += u.grid.t_weight(i) * dx * v;
	               });
	return acc;
}

/// ||A u||_{L^6_{t,x}} / ||u||_2.
inline double objective(const Field& u, Functional m = Functional::airy)
{
	const auto v = detail::prepare(u, m);
	const double n = detail::require_nonzero(v, "objective");
	return std::pow(sixth_power_integral(v, m), 1.0 / 6.0) / n;
}

/// First variation of J: 6 sum_t w_t A_t^* (|A_t u|^4 A_t u), so that
/// dJ(u)[v] = Re <grad, v>. Real mode returns the real part.
inline Field gradient(const Field& u_in, Functional m = Functional::airy)
{
	const auto u = detail::prepare(u_in, m);
	detail::require_nonzero(u, "gradient");
	const auto& g = u.grid;
	const std::size_t n = g.n_points;
	const auto F = forward_fourier(u);
	const double alpha = detail::alpha_of(m);
	check_fractional_order(F, alpha);
	const auto d = detail::dispersion_of(m);
	const double inv_scale = g.dxi() / std::sqrt(2.0 * std::numbers::pi);
	const double fwd_scale = g.dx() / std::sqrt(2.0 * std::numbers::pi);

	std::vector<double> amp(n), omega(n);
	std::vector<cplx> base(n);
	for (std::size_t j = 0; j < n; ++j) {
		const double xi = g.xi(j);
		amp[j] = abs_power(xi, alpha);
		omega[j] = dispersion_phase(d, xi, 1.0);
		base[j] = F[j] * amp[j] * ((j % 2 == 0) ? inv_scale : -inv_scale);
	}
	SpectralField acc(g);
	std::vector<cplx> slice(n);
	for (std::size_t i = 0; i < g.t_count; ++i) {
		const double t = g.t(i), w = g.t_weight(i);
		for (std::size_t j = 0; j < n; ++j)
			slice[j] = base[j] * std::polar(1.0, t * omega[j]);
		detail::dft_inplace(slice, FFTW_BACKWARD);
		for (auto& z : slice) {
			const double a = std::norm(z);
			z *= a * a;
		}
		detail::dft_inplace(slice, FFTW_FORWARD);
		for (std::size_t j = 0; j < n; ++j) {
			const double s = (j % 2 == 0) ? fwd_scale : -fwd_scale;
			acc[j] += (6.0 * w * s * amp[j]) * slice[j] * std::polar(1.0, -t * omega[j]);
		}
	}
	auto out = inverse_fourier(acc);
	return m == Functional::airy_real ? real_part(std::move(out)) : out;
}

/// Mean frequency of |F|^2 (mean |xi| for real fields).
inline double spectral_centroid(const Field& u, bool absolute = false)
{
	const auto F = forward_fourier(u);
	double num = 0.0, den = 0.0;
	for (std::size_t j = 0; j < F.size(); ++j) {
		const double w = std::norm(F[j]);
		const double xi = F.grid.xi(j);
		num += w * (absolute ? std::abs(xi) : xi);
		den += w;
	}
	return den > 0.0 ? num / den : 0.0;
}

// ---------------------------------------------------------------------------
// Projected ascent
// ---------------------------------------------------------------------------

struct AscentOptions {
	Functional mode = Functional::airy;
	std::size_t max_iterations = 200;
	double initial_step = 1.0; // in units of |tangent| / <grad, u>; 1 is the step to grad/|grad|
	double max_step = 16.0;
	double backtrack = 0.5;
	double armijo = 1e-4;
	double min_step = 1e-12;
	std::size_t stall_window = 20;
	double stall_gain = 1e-8;
	double critical_tol = 1e-9;  // tangent gradient / raw gradient below this: critical point
	double escape_fraction = 0.25; // of the usable band, over the last third of iterates
	bool restrict_to_band = true;  // project iterates and gradients onto the usable band
};

struct Iterate {
	double objective = 0.0;
	double step = 0.0;
	double centroid = 0.0;
};

enum class Classification { attained, escaping_modulation, budget };

inline const char* to_string(Classification c)
{
	switch (c) {
	case Classification::attained:
		return "attained";
	case Classification::escaping_modulation:
		return "escaping_modulation";
	case Classification::budget:
		return "budget";
	}
	return "unknown";
}

struct MaximizerTrace {
	std::vector<Iterate> iterates; // iterates[0] is the initial field
	Field final_field;
	Classification classification = Classification::budget;
	Functional mode = Functional::airy;
	std::size_t accepted_steps = 0;
	bool converged = false;
	unsigned warnings = warn_none;

	double best_objective() const
	{
		double b = 0.0;
		for (const auto& it : iterates)
			b = std::max(b, it.objective);
		return b;
	}
};

namespace detail {

inline Field normalized(const Field& u)
{
	return cplx(1.0 / l2_norm(u)) * u;
}

/// Zeroes the spectrum outside the usable band. Beyond it the sampled
/// sixth-power sum no longer approximates the integral and the ascent
/// would climb on quadrature error.
inline Field band_project(const Field& u)
{
	auto F = forward_fourier(u);
	const double band = u.grid.band_limit();
	for (std::size_t j = 0; j < F.size(); ++j)
		if (std::abs(F.grid.xi(j)) > band)
			F[j] = cplx{};
	auto out = inverse_fourier(F);
	out.warnings = u.warnings;
	return out;
}

/// Sustained monotone drift of the centroid over the last third of the run.
inline bool escaping(const std::vector<Iterate>& its, double band, double fraction)
{
	if (its.size() < 6)
		return false;
	const std::size_t start = its.size() - its.size() / 3 - 1;
	const double drift = its.back().centroid - its[start].centroid;
	if (std::abs(drift) <= fraction * band)
		return false;
	const double sign = drift > 0 ? 1.0 : -1.0;
	const double slack = 1e-9 * band;
	for (std::size_t i = start + 1; i < its.size(); ++i)
		if (sign * (its[i].centroid - its[i - 1].centroid) < -slack)
			return false;
	return true;
}

} // namespace detail

/// Projected gradient ascent of J on the unit L^2 sphere with Armijo
/// backtracking. Non-normalized input is normalized and flagged.
inline MaximizerTrace maximize(const Field& init, const AscentOptions& opt = {})
{
	MaximizerTrace tr;
	tr.mode = opt.mode;
	const bool real = opt.mode == Functional::airy_real;
	auto u = detail::prepare(init, opt.mode);
	if (opt.restrict_to_band)
		u = detail::prepare(detail::band_project(u), opt.mode);
	const double n0 = detail::require_nonzero(u, "maximize");
	if (std::abs(n0 - 1.0) > 1e-9) {
		u = detail::normalized(u);
		tr.warnings |= warn_renormalized;
	}
	const double band = u.grid.band_limit();
	double J = sixth_power_integral(u, opt.mode);
	double step = opt.initial_step;
	tr.iterates.push_back({std::pow(J, 1.0 / 6.0), 0.0, spectral_centroid(u, real)});

	for (std::size_t it = 0; it < opt.max_iterations; ++it) {
		const auto g = opt.restrict_to_band ? detail::prepare(detail::band_project(gradient(u, opt.mode)), opt.mode)
		                                    : gradient(u, opt.mode);
		const double gn = l2_norm(g);
		const cplx radial = inner_product(g, u);
		const Field tangent = g - cplx(radial.real()) * u;
		const double tn = l2_norm(tangent);
		if (!(gn > 0.0) || tn <= opt.critical_tol * gn) {
			tr.converged = true;
			break;
		}
		// Tangent direction scaled by 1/<grad, u> = 1/(6J): unit step lands on
		// grad/|grad|, an ascent step for any convex functional.
		const double lambda = radial.real();
		const Field dir = cplx(1.0 / lambda) * tangent;
		const double slope = tn * tn / lambda;
		bool accepted = false;
		while (step >= opt.min_step) {
			const auto cand = detail::normalized(u + cplx(step) * dir);
			const double Jc = sixth_power_integral(cand, opt.mode);
			if (Jc >= J + opt.armijo * step * slope && Jc > J) {
				u = cand;
				J = Jc;
				accepted = true;
				break;
			}
			step *= opt.backtrack;
		}
		if (!accepted) {
			tr.converged = true;
			break;
		}
		++tr.accepted_steps;
		tr.iterates.push_back({std::pow(J, 1.0 / 6.0), step, spectral_centroid(u, real)});
		step = std::min(2.0 * step, opt.max_step);
		const auto& its = tr.iterates;
		if (its.size() > opt.stall_window) {
			const double old = its[its.size() - 1 - opt.stall_window].objective;
			if (its.back().objective - old <= opt.stall_gain * old) {
				tr.converged = true;
				break;
			}
		}
	}
	tr.final_field = u;
	if (detail::escaping(tr.iterates, band, opt.escape_fraction))
		tr.classification = Classification::escaping_modulation;
	else if (tr.converged)
		tr.classification = Classification::attained;
	else
		tr.classification = Classification::budget;
	return tr;
}

// ---------------------------------------------------------------------------
// Gaussian fit
// ---------------------------------------------------------------------------

struct GaussianFit {
	std::array<double, 3> log_amplitude{}; // c0 + c1 x + c2 x^2
	std::array<double, 3> phase{};         // b0 + b1 x + b2 x^2
	Field fitted;
	double relative_distance = 0.0; // ||u - fit|| / ||u||
};

namespace detail {

/// Weighted least squares for y ~ a0 + a1 x + a2 x^2.
inline std::array<double, 3> quadratic_fit(const std::vector<double>& x, const std::vector<double>& y,
                                           const std::vector<double>& w)
{
	std::array<std::array<double, 4>, 3> M{};
	for (std::size_t i = 0; i < x.size(); ++i) {
		const double p[3] = {1.0, x[i], x[i] * x[i]};
		for (int r = 0; r < 3; ++r) {
			for (int c = 0; c < 3; ++c)
				M[r][c] += w[i] * p[r] * p[c];
			M[r][3] += w[i] * p[r] * y[i];
		}
	}
	for (int c = 0; c < 3; ++c) {
		int piv = c;
		for (int r = c + 1; r < 3; ++r)
			if (std::abs(M[r][c]) > std::abs(M[piv][c]))
				piv = r;
		std::swap(M[c], M[piv]);
		if (M[c][c] == 0.0)
			throw DegenerateInput("quadratic_fit: singular system");
		for (int r = 0; r < 3; ++r) {
			if (r == c)
				continue;
			const double f = M[r][c] / M[c][c];
			for (int k = c; k < 4; ++k)
				M[r][k] -= f * M[c][k];
		}
	}
	return {M[0][3] / M[0][0], M[1][3] / M[1][1], M[2][3] / M[2][2]};
}

} // namespace detail

/// Fits exp((c0 + c1 x + c2 x^2) + i (b0 + b1 x + b2 x^2)) to u on the
/// core where |u| exceeds 5% of its maximum, weighted by |u|^2.
inline GaussianFit fit_gaussian(const Field& u)
{
	detail::require_nonzero(u, "fit_gaussian");
	const auto& g = u.grid;
	double peak = 0.0;
	std::size_t ipeak = 0;
	for (std::size_t j = 0; j < u.size(); ++j)
		if (std::abs(u[j]) > peak) {
			peak = std::abs(u[j]);
			ipeak = j;
		}
	const double floor = 0.05 * peak;
	std::size_t lo = ipeak, hi = ipeak;
	while (lo > 0 && std::abs(u[lo - 1]) > floor)
		--lo;
	while (hi + 1 < u.size() && std::abs(u[hi + 1]) > floor)
		++hi;
	std::vector<double> xs, la, ph, w;
	double prev = std::arg(u[lo]), unwrapped = prev;
	for (std::size_t j = lo; j <= hi; ++j) {
		const double a = std::arg(u[j]);
		double d = a - prev;
		d -= 2.0 * std::numbers::pi * std::round(d / (2.0 * std::numbers::pi));
		unwrapped = j == lo ? a : unwrapped + d;
		prev = a;
		xs.push_back(g.x(j) - g.x(ipeak));
		la.push_back(std::log(std::abs(u[j])));
		ph.push_back(unwrapped);
		w.push_back(std::norm(u[j]));
	}
	if (xs.size() < 3)
		throw DegenerateInput("fit_gaussian: support too small");
	GaussianFit fit;
	fit.log_amplitude = detail::quadratic_fit(xs, la, w);
	fit.phase = detail::quadratic_fit(xs, ph, w);
	fit.fitted = Field(g);
	const double xp = g.x(ipeak);
	for (std::size_t j = 0; j < u.size(); ++j) {
		const double y = g.x(j) - xp;
		const auto& c = fit.log_amplitude;
		const auto& b = fit.phase;
		const double lg = c[0] + c[1] * y + c[2] * y * y;
		fit.fitted[j] = lg < -700.0 ? cplx{} : std::exp(cplx(lg, b[0] + b[1] * y + b[2] * y * y));
	}
	fit.relative_distance = l2_norm(u - fit.fitted) / l2_norm(u);
	return fit;
}

// ---------------------------------------------------------------------------
// Schrodinger baseline
// ---------------------------------------------------------------------------

struct BaselineResult {
	double s_schr_estimate = 0.0;
	Field gaussian_profile; // unit-norm optimal Gaussian
	double sigma = 0.0;
	double sigma_lo = 0.0, sigma_hi = 0.0;
	unsigned warnings = warn_none;
};

/// Unit-norm Gaussian exp(-x^2 / (2 sigma^2)) centered at 0.
inline Field gaussian(const GridSpec& g, double sigma, double center = 0.0)
{
	if (!(sigma > 0.0))
		throw InvalidParameter("gaussian: sigma must be positive");
	Field f = sample(g, [&](double x) {
		const double y = (x - center) / sigma;
		return cplx(std::exp(-0.5 * y * y));
	});
	return cplx(1.0 / l2_norm(f)) * f;
}

/// ||e^{-i t d^2} g_sigma||_{L^6} / ||g_sigma|| over the grid window.
inline double gaussian_schrodinger_ratio(const GridSpec& g, double sigma)
{
	return schrodinger_l6(gaussian(g, sigma));
}

/// Feasible widths: the spectrum exp(-sigma^2 xi^2 / 2) fits the band with
/// relative tail below 1e-8, the evolved Gaussian, of width about 2T/sigma at
/// |t| = T, and the initial one both stay inside the box, and the time
/// profile (1 + 4t^2/sigma^4)^{-1} is resolved by the trapezoid rule
/// (sigma^2 >= 4 dt).
inline std::pair<double, double> baseline_bracket(const GridSpec& g)
{
	const double band = g.band_limit();
	const double L = g.domain_length, T = g.t_span;
	const double lo = std::max({4.05 / band, 15.4 * T / L, 2.0 * std::sqrt(g.dt())});
	const double hi = L / 15.4;
	if (!(lo < hi))
		throw InvalidInput("schrodinger_baseline: grid too small for Gaussian decay");
	return {lo, hi};
}

/// Numerical S_schr: Schrodinger ratio of a Gaussian, maximized over the
/// width by golden-section search in log(sigma) on the feasible bracket.
inline BaselineResult schrodinger_baseline(const GridSpec& g)
{
	g.validate();
	auto [lo, hi] = baseline_bracket(g);
	BaselineResult r;
	r.sigma_lo = lo;
	r.sigma_hi = hi;
	const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
	double a = std::log(lo), b = std::log(hi);
	auto f = [&](double ls) { return gaussian_schrodinger_ratio(g, std::exp(ls)); };
	double c = b - phi * (b - a), d = a + phi * (b - a);
	double fc = f(c), fd = f(d);
	while (b - a > 1e-4) {
		if (fc >= fd) {
			b = d;
			d = c;
			fd = fc;
			c = b - phi * (b - a);
			fc = f(c);
		} else {
			a = c;
			c = d;
			fc = fd;
			d = a + phi * (b - a);
			fd = f(d);
		}
	}
	// the bracket ends are candidates too, the windowed ratio is monotone in sigma
	double best_ls = fc >= fd ? c : d, best = std::max(fc, fd);
	for (double e : {std::log(lo), std::log(hi)}) {
		const double v = f(e);
		if (v > best) {
			best = v;
			best_ls = e;
		}
	}
	r.sigma = std::exp(best_ls);
	r.s_schr_estimate = best;
	r.gaussian_profile = gaussian(g, r.sigma);
	const auto edge = schrodinger_propagate(r.gaussian_profile, g.t_span);
	if (boundary_fraction(edge) > truncation_tolerance || boundary_fraction(r.gaussian_profile) > truncation_tolerance)
		r.warnings |= warn_truncation;
	return r;
}

// ---------------------------------------------------------------------------
// Embedding of Schrodinger into Airy
// ---------------------------------------------------------------------------

enum class EmbeddingMode { complex, real };

struct EmbeddingRow {
	double N = 0.0;
	double l2 = 0.0;          // ||phi_N||_2
	double airy_norm = 0.0;   // ||D^{1/6} e^{-t d^3} phi_N||_{L^6}
	double ratio = 0.0;       // airy_norm / l2
	double mass_factor = 0.0; // ||phi_N||^2 / ||u0||^2
	unsigned warnings = warn_none;
};

struct EmbeddingTable {
	EmbeddingMode mode = EmbeddingMode::complex;
	double schrodinger_ratio = 0.0; // ||e^{-i t d^2} u0||_6 / ||u0||_2 on the grid window
	double limit = 0.0;             // 3^{-1/6} * schrodinger_ratio
	double max_admissible_N = 0.0;
	std::vector<EmbeddingRow> rows;
};

inline const double cube_root_factor = std::pow(3.0, -1.0 / 6.0);

/// phi_N = (3N)^{-1/4} e^{i x N} u0(x / sqrt(3N)), or its real part.
inline Field embedding_field(const Field& u0, double N, EmbeddingMode mode)
{
	if (!(N > 0.0) || !std::isfinite(N))
		throw InvalidParameter("embedding: N must be positive");
	SymmetryParams p;
	p.h = std::sqrt(3.0 * N);
	p.xi = N;
	auto f = apply_symmetry(u0, p);
	return mode == EmbeddingMode::real ? real_part(std::move(f)) : f;
}

/// Largest N for which phi_N stays inside the usable band: N + eta / sqrt(3N) <= band,
/// eta the frequency beyond which u0 carries relative spectral mass <= aliasing_tolerance.
inline double max_admissible_embedding(const Field& u0)
{
	const auto F = forward_fourier(u0);
	const auto& g = u0.grid;
	const double total = sum_sq(F.coefficients);
	std::vector<std::pair<double, double>> w;
	for (std::size_t j = 0; j < F.size(); ++j)
		w.emplace_back(std::abs(g.xi(j)), std::norm(F[j]));
	std::sort(w.begin(), w.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
	double tail = 0.0, eta = 0.0;
	for (const auto& [xi, m] : w) {
		if (tail + m > aliasing_tolerance * total) {
			eta = xi;
			break;
		}
		tail += m;
	}
	const double band = g.band_limit();
	double lo = 0.0, hi = band;
	if (hi + eta / std::sqrt(3.0 * hi) <= band)
		return hi;
	for (int k = 0; k < 200; ++k) {
		const double mid = 0.5 * (lo + hi);
		if (mid > 0.0 && mid + eta / std::sqrt(3.0 * mid) <= band)
			lo = mid;
		else
			hi = mid;
	}
	return lo;
}

inline EmbeddingTable embedding_experiment(const Field& u0, const std::vector<double>& N_list,
                                           EmbeddingMode mode = EmbeddingMode::complex)
{
	const double m0 = detail::require_nonzero(u0, "embedding_experiment");
	EmbeddingTable tab;
	tab.mode = mode;
	tab.max_admissible_N = max_admissible_embedding(u0);
	for (double N : N_list) {
		if (!(N > 0.0) || !std::isfinite(N))
			throw InvalidParameter("embedding_experiment: N must be positive");
		if (N > tab.max_admissible_N)
			throw InvalidInput("embedding_experiment: N = " + std::to_string(N) +
			                   " aliases; max admissible N = " + std::to_string(tab.max_admissible_N));
	}
	tab.schrodinger_ratio = schrodinger_l6(u0) / m0;
	tab.limit = cube_root_factor * tab.schrodinger_ratio;
	for (double N : N_list) {
		EmbeddingRow row;
		row.N = N;
		const auto f = embedding_field(u0, N, mode);
		row.warnings = f.warnings;
		row.l2 = l2_norm(f);
		row.airy_norm = strichartz_functional(f);
		row.ratio = row.airy_norm / row.l2;
		row.mass_factor = (row.l2 * row.l2) / (m0 * m0);
		tab.rows.push_back(row);
	}
	return tab;
}

// ---------------------------------------------------------------------------
// Dichotomy
// ---------------------------------------------------------------------------

struct DichotomyReport {
	bool real_mode = false;
	double s_airy = 0.0;       // best observed Airy ratio
	double s_schr = 0.0;       // baseline estimate
	double factor = 0.0;       // 3^{-1/6} or 2^{-1/2} 3^{-1/6}
	double ratio = 0.0;        // s_airy / (factor * s_schr)
	double tolerance = 0.02;
	bool bound_holds = false;  // s_airy >= factor * s_schr - tolerance (relative)
	Classification classification = Classification::budget;
	std::string verdict;
};

inline DichotomyReport dichotomy_report(const MaximizerTrace& trace, const BaselineResult& base,
                                        double tolerance = 0.02)
{
	require_same_grid(trace.final_field.grid, base.gaussian_profile.grid, "dichotomy_report");
	if (trace.iterates.empty())
		throw InvalidInput("dichotomy_report: empty trace");
	DichotomyReport r;
	r.real_mode = trace.mode == Functional::airy_real;
	r.tolerance = tolerance;
	r.s_airy = trace.best_objective();
	r.s_schr = base.s_schr_estimate;
	r.factor = cube_root_factor * (r.real_mode ? 1.0 / std::numbers::sqrt2 : 1.0);
	r.ratio = r.s_airy / (r.factor * r.s_schr);
	r.bound_holds = r.ratio >= 1.0 - tolerance;
	r.classification = trace.classification;
	if (!r.bound_holds)
		r.verdict = "bound violated: observed Airy ratio below the embedding bound";
	else if (trace.classification == Classification::escaping_modulation && std::abs(r.ratio - 1.0) <= tolerance)
		r.verdict = "dichotomy: Schrödinger-limit branch";
	else if (trace.classification == Classification::attained && r.ratio > 1.0 + tolerance)
		r.verdict = "dichotomy: attained-candidate branch (evidence only)";
	else
		r.verdict = "dichotomy: inconclusive";
	return r;
}

} // namespace airylab

#endif
