#ifndef AIRYLAB_REFINED_HPP
#define AIRYLAB_REFINED_HPP

#include "error.hpp"
#include "field.hpp"
#include "norms.hpp"
#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace airylab {

// ---------------------------------------------------------------------------
// Frequency-side layout helpers. Bins are sorted by frequency: sorted index m
// holds wavenumber m - n/2 and represents the cell [xi_m, xi_m + dxi).
// ---------------------------------------------------------------------------

inline std::vector<cplx> sorted_spectrum(const SpectralField& F)
{
	const std::size_t n = F.size();
	std::vector<cplx> out(n);
	for (std::size_t m = 0; m < n; ++m)
		out[m] = F[F.grid.slot(static_cast<long>(m) - static_cast<long>(n / 2))];
	return out;
}

inline double sorted_xi(const GridSpec& g, std::size_t m)
{
	return (static_cast<double>(m) - static_cast<double>(g.n_points / 2)) * g.dxi();
}

/// Frequency interval tau = [lo, hi) with the functional value on it.
/// begin/end are the sorted bin range [begin, end).
struct IntervalValue {
	double lo = 0.0;
	double hi = 0.0;
	double value = 0.0;
	std::size_t begin = 0;
	std::size_t end = 0;

	double length() const { return hi - lo; }
	double center() const { return 0.5 * (lo + hi); }
};

struct ConcentrationOptions {
	/// Grids with at most this many bins get an exhaustive certification pass
	/// after the dyadic sweep and endpoint refinement.
	std::size_t exhaustive_limit = 4096;
};

namespace detail {

class IntervalScorer {
public:
	IntervalScorer(std::span<const double> magnitude, double dxi, double p)
	    : dxi_(dxi), p_(p), e_(0.5 - 1.0 / p), prefix_(magnitude.size() + 1, 0.0)
	{
		for (std::size_t m = 0; m < magnitude.size(); ++m) {
			const double w = magnitude[m] == 0.0 ? 0.0 : std::pow(magnitude[m], p) * dxi;
			weight_.push_back(w);
			prefix_[m + 1] = prefix_[m] + w;
		}
	}

	std::size_t size() const { return weight_.size(); }
	double weight(std::size_t m) const { return weight_[m]; }
	double mass(std::size_t a, std::size_t b) const { return std::max(0.0, prefix_[b] - prefix_[a]); }
	double exponent() const { return e_; }

	double value(std::size_t a, std::size_t b) const
	{
		const double s = mass(a, b);
		if (s <= 0.0)
			return 0.0;
		return std::pow(static_cast<double>(b - a) * dxi_, e_) * std::pow(s, 1.0 / p_);
	}

	double length_factor(std::size_t len) const { return std::pow(static_cast<double>(len) * dxi_, e_); }
	double root(double s) const { return std::pow(s, 1.0 / p_); }

private:
	double dxi_, p_, e_;
	std::vector<double> weight_;
	std::vector<double> prefix_;
};

struct Best {
	double value = -1.0;
	std::size_t a = 0, b = 1;

	// Larger value wins; near-ties go to the leftmost interval.
	void offer(double v, std::size_t na, std::size_t nb)
	{
		constexpr double rel = 1e-13;
		if (v > value * (1.0 + rel) + 1e-300 ||
		    (v >= value * (1.0 - rel) && (na < a || (na == a && nb < b)))) {
			value = v;
			a = na;
			b = nb;
		}
	}
};

inline void dyadic_sweep(const IntervalScorer& sc, Best& best)
{
	const std::size_t n = sc.size();
	const std::size_t zero = n / 2; // sorted index of xi = 0
	for (std::size_t len = 1; len <= n; len *= 2) {
		// Dyadic cells in grid units, anchored at xi = 0.
		const std::size_t first = zero % len;
		if (first > 0)
			best.offer(sc.value(0, first), 0, first);
		for (std::size_t a = first; a < n; a += len) {
			const std::size_t b = std::min(n, a + len);
			best.offer(sc.value(a, b), a, b);
		}
	}
}

inline void refine_endpoints(const IntervalScorer& sc, Best& best)
{
	const auto n = static_cast<long>(sc.size());
	long step = 1;
	while (step * 2 <= n)
		step *= 2;
	for (; step >= 1; step /= 2) {
		bool improved = true;
		while (improved) {
			improved = false;
			const long a = static_cast<long>(best.a), b = static_cast<long>(best.b);
			const long cand[8][2] = {{a - step, b}, {a + step, b}, {a, b - step}, {a, b + step},
			                         {a - step, b - step}, {a + step, b + step},
			                         {a - step, b + step}, {a + step, b - step}};
			for (const auto& c : cand) {
				if (c[0] < 0 || c[1] > n || c[0] >= c[1])
					continue;
				const double v = sc.value(static_cast<std::size_t>(c[0]), static_cast<std::size_t>(c[1]));
				if (v > best.value * (1.0 + 1e-13)) {
					best.offer(v, static_cast<std::size_t>(c[0]), static_cast<std::size_t>(c[1]));
					improved = true;
				}
			}
		}
	}
}

// Exhaustive search over all bin-aligned intervals, pruned by the bound
// value(a, b') <= |len(a,b)|^e * mass(a, n)^{1/p} for b' >= b when e < 0.
inline void certify(const IntervalScorer& sc, Best& best)
{
	const std::size_t n = sc.size();
	const bool prune = sc.exponent() < 0.0;
	for (std::size_t a = 0; a < n; ++a) {
		if (prune && sc.weight(a) == 0.0)
			continue; // a shorter interval starting at a+1 dominates
		const double tail = sc.root(sc.mass(a, n));
		if (prune && sc.length_factor(1) * tail < best.value * (1.0 - 1e-12))
			continue;
		for (std::size_t b = a + 1; b <= n; ++b) {
			best.offer(sc.value(a, b), a, b);
			if (prune && b < n && sc.length_factor(b + 1 - a) * tail < best.value * (1.0 - 1e-12))
				break;
		}
	}
}

} // namespace detail

/// sup over intervals tau of |tau|^{1/2 - 1/p} ||F||_{L^p(tau)} on a sorted
/// magnitude profile. Dyadic sweep, endpoint refinement, then (small grids)
/// exhaustive certification.
inline IntervalValue concentration_on_profile(std::span<const double> magnitude, double xi_first, double dxi,
                                              double p, const ConcentrationOptions& opt = {})
{
	if (!(p > 1.0) || !std::isfinite(p))
		throw InvalidExponent("concentration_functional: p must exceed 1");
	if (magnitude.empty())
		throw InvalidInput("concentration_functional: empty spectrum");
	detail::IntervalScorer sc(magnitude, dxi, p);
	detail::Best best;
	detail::dyadic_sweep(sc, best);
	detail::refine_endpoints(sc, best);
	if (magnitude.size() <= opt.exhaustive_limit)
		detail::certify(sc, best);
	IntervalValue out;
	out.begin = best.a;
	out.end = best.b;
	out.lo = xi_first + static_cast<double>(best.a) * dxi;
	out.hi = xi_first + static_cast<double>(best.b) * dxi;
	out.value = std::max(0.0, best.value);
	return out;
}

inline IntervalValue concentration_functional(const SpectralField& F, double p, const ConcentrationOptions& opt = {})
{
	require_finite(F.coefficients, "concentration_functional");
	const auto s = sorted_spectrum(F);
	std::vector<double> mag(s.size());
	for (std::size_t m = 0; m < s.size(); ++m)
		mag[m] = std::abs(s[m]);
	return concentration_on_profile(mag, sorted_xi(F.grid, 0), F.grid.dxi(), p, opt);
}

inline IntervalValue concentration_functional(const Field& f, double p, const ConcentrationOptions& opt = {})
{
	if (!(p > 1.0) || !std::isfinite(p))
		throw InvalidExponent("concentration_functional: p must exceed 1");
	return concentration_functional(forward_fourier(f), p, opt);
}

// ---------------------------------------------------------------------------
// Refined Strichartz ratio and the level-set split of the spectrum
// ---------------------------------------------------------------------------

/// Piece of the spectrum where 2^n |I|^{-1/2} <= |F| < 2^{n+1} |I|^{-1/2}.
struct LevelPiece {
	int level = 0;
	double mass = 0.0;
	SpectralField piece;
};

inline std::vector<LevelPiece> level_set_split(const SpectralField& F, double interval_length)
{
	if (!(interval_length > 0.0))
		throw InvalidParameter("level_set_split: interval length must be positive");
	const double unit = 1.0 / std::sqrt(interval_length);
	std::vector<LevelPiece> out;
	auto find = [&](int level) -> LevelPiece& {
		for (auto& lp : out)
			if (lp.level == level)
				return lp;
		out.push_back(LevelPiece{level, 0.0, SpectralField(F.grid)});
		return out.back();
	};
	for (std::size_t j = 0; j < F.size(); ++j) {
		const double a = std::abs(F[j]);
		if (a == 0.0)
			continue;
		int level = static_cast<int>(std::floor(std::log2(a / unit)));
		// Guard the half-open boundaries against log2 rounding.
		while (a < std::ldexp(unit, level))
			--level;
		while (a >= std::ldexp(unit, level + 1))
			++level;
		auto& lp = find(level);
		lp.piece[j] = F[j];
		lp.mass += std::norm(F[j]) * F.grid.dxi();
	}
	std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.level < y.level; });
	return out;
}

struct RefinedDiagnostics {
	double ratio = 0.0;
	double strichartz = 0.0;
	double l2 = 0.0;
	IntervalValue concentration;
	std::vector<LevelPiece> levels;    // filled in verbose mode
	double reconstruction_defect = 0.0; // max |F - sum of level pieces|
};

inline RefinedDiagnostics refined_ratio_verbose(const Field& f, double p, bool verbose = true,
                                                const ConcentrationOptions& opt = {})
{
	RefinedDiagnostics d;
	const auto F = forward_fourier(f);
	d.l2 = l2_norm(f);
	d.concentration = concentration_functional(F, p, opt);
	if (!(d.l2 > 0.0) || !(d.concentration.value > 0.0))
		throw DegenerateInput("refined_ratio: zero norm or zero concentration");
	d.strichartz = strichartz_functional(f, symmetric_exponents);
	d.ratio = d.strichartz / (std::cbrt(d.concentration.value) * std::pow(d.l2, 2.0 / 3.0));
	if (verbose) {
		d.levels = level_set_split(F, d.concentration.length());
		std::vector<cplx> sum(F.size(), cplx{});
		for (const auto& lp : d.levels)
			for (std::size_t j = 0; j < F.size(); ++j)
				sum[j] += lp.piece[j];
		for (std::size_t j = 0; j < F.size(); ++j)
			d.reconstruction_defect = std::max(d.reconstruction_defect, std::abs(sum[j] - F[j]));
	}
	return d;
}

/// ||D^{1/6} e^{-t d^3} f||_6 / (concentration^{1/3} ||f||_2^{2/3}).
inline double refined_ratio(const Field& f, double p, const ConcentrationOptions& opt = {})
{
	return refined_ratio_verbose(f, p, false, opt).ratio;
}

// ---------------------------------------------------------------------------
// Whitney pairing of dyadic intervals
// ---------------------------------------------------------------------------

/// 2^scale [index, index + 1).
struct DyadicInterval {
	int scale = 0;
	std::int64_t index = 0;

	double length() const { return std::ldexp(1.0, scale); }
	double lo() const { return std::ldexp(static_cast<double>(index), scale); }
	double hi() const { return std::ldexp(static_cast<double>(index + 1), scale); }
	bool contains(double x) const { return lo() <= x && x < hi(); }

	DyadicInterval parent() const
	{
		return {scale + 1, index >= 0 ? index / 2 : -((-index + 1) / 2)};
	}

	/// Gap between the two intervals (0 if they touch or overlap); same scale only.
	double dist(const DyadicInterval& o) const
	{
		const auto d = index > o.index ? index - o.index : o.index - index;
		return d <= 1 ? 0.0 : static_cast<double>(d - 1) * length();
	}

	bool operator==(const DyadicInterval&) const = default;

	/// Validates [lo, hi) as a dyadic interval.
	static DyadicInterval from_bounds(double lo, double hi)
	{
		const double len = hi - lo;
		int e = 0;
		if (!(len > 0.0) || std::frexp(len, &e) != 0.5)
			throw InvalidInput("DyadicInterval: length is not a power of two");
		const int scale = e - 1;
		const double k = std::ldexp(lo, -scale);
		if (k != std::floor(k))
			throw InvalidInput("DyadicInterval: left endpoint is not a multiple of the length");
		return {scale, static_cast<std::int64_t>(k)};
	}
};

struct WhitneyPair {
	DyadicInterval I;
	DyadicInterval Iprime;

	bool contains(double xi, double xi2) const { return I.contains(xi) && Iprime.contains(xi2); }
};

/// A same-scale pair is maximal when dist(I, I') >= 4|I| and the parents
/// fail that test, dist(P, P') < 4|P|.
inline bool is_maximal_pair(const DyadicInterval& a, const DyadicInterval& b)
{
	if (a.scale != b.scale || a == b)
		return false;
	if (a.dist(b) < 4.0 * a.length())
		return false;
	const auto pa = a.parent(), pb = b.parent();
	return pa.dist(pb) < 4.0 * pa.length();
}

/// Maximal pair containing (xi, xi2), searched downward from scale `top`.
inline WhitneyPair maximal_pair(double xi, double xi2, int top)
{
	if (!(xi != xi2) || !std::isfinite(xi) || !std::isfinite(xi2))
		throw InvalidInput("maximal_pair: points must be distinct and finite");
	for (int j = top; j > top - 1100; --j) {
		const DyadicInterval a{j, static_cast<std::int64_t>(std::floor(std::ldexp(xi, -j)))};
		const DyadicInterval b{j, static_cast<std::int64_t>(std::floor(std::ldexp(xi2, -j)))};
		if (a.dist(b) >= 4.0 * a.length())
			return {a, b};
	}
	throw InvalidInput("maximal_pair: points too close");
}

/// All maximal pairs (I, I') with I, I' inside `region` and scale >= min_scale.
inline std::vector<WhitneyPair> whitney_pairs(const DyadicInterval& region, int min_scale)
{
	if (min_scale < region.scale - 40)
		throw InvalidParameter("whitney_pairs: min_scale below region scale - 40");
	if (region.scale - min_scale > 22)
		throw InvalidParameter("whitney_pairs: enumeration too large for this region");
	std::vector<WhitneyPair> out;
	for (int j = region.scale - 1; j >= min_scale; --j) {
		const std::int64_t count = std::int64_t{1} << (region.scale - j);
		const std::int64_t first = region.index * count;
		for (std::int64_t k = first; k < first + count; ++k) {
			for (std::int64_t k2 = std::max(first, k - 9); k2 <= std::min(first + count - 1, k + 9); ++k2) {
				const DyadicInterval a{j, k}, b{j, k2};
				if (is_maximal_pair(a, b))
					out.push_back({a, b});
			}
		}
	}
	return out;
}

inline std::vector<WhitneyPair> whitney_pairs(double region_lo, double region_hi, int min_scale)
{
	return whitney_pairs(DyadicInterval::from_bounds(region_lo, region_hi), min_scale);
}

// ---------------------------------------------------------------------------
// Localized restriction estimate for modulated band-limited data
// ---------------------------------------------------------------------------

/// ||e^{-t d^3}(e^{i x xi0} G)||_{L^q_{t,x}} |xi0|^{1/q} / ||G^||_inf,
/// for G with spectrum in [-R, R], |xi0| >= 10 R and 4 <= q < 6.
inline double restriction_decay_check(const Field& G, double R, double xi0, double q)
{
	if (!(q >= 4.0 && q < 6.0))
		throw InvalidExponent("restriction_decay_check: requires 4 <= q < 6");
	if (!(R > 0.0))
		throw InvalidParameter("restriction_decay_check: R must be positive");
	if (!(std::abs(xi0) >= 10.0 * R))
		throw InvalidParameter("restriction_decay_check: requires |xi0| >= 10 R");
	const auto F = forward_fourier(G);
	double total = 0.0, outside = 0.0, sup = 0.0;
	for (std::size_t j = 0; j < F.size(); ++j) {
		const double m = std::norm(F[j]);
		total += m;
		sup = std::max(sup, std::abs(F[j]));
		if (std::abs(F.grid.xi(j)) > R)
			outside += m;
	}
	if (total == 0.0)
		return 0.0;
	if (outside > 1e-12 * total)
		throw InvalidInput("restriction_decay_check: spectrum not supported in [-R, R]");
	const auto H = modulate(G, xi0);
	const double norm = dispersive_norm(H, 0.0, q, q, Dispersion::airy);
	return norm * std::pow(std::abs(xi0), 1.0 / q) / sup;
}

} // namespace airylab

#endif
