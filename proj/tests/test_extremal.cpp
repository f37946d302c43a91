#include "support.hpp"

#include <gtest/gtest.h>

using namespace airylab;
using namespace testing_support;

namespace {

const Functional all_modes[] = {Functional::airy, Functional::airy_real, Functional::schrodinger};

Field prepared(const Field& u, Functional m)
{
	return m == Functional::airy_real ? real_part(u) : u;
}

double tangent_fraction(const Field& u, Functional m)
{
	const auto g = gradient(u, m);
	const double r = inner_product(g, u).real();
	return l2_norm(g - cplx(r) * u) / l2_norm(g);
}

/// Schrodinger sharp constant on the line, 12^{-1/12}.
const double schrodinger_sharp = std::pow(12.0, -1.0 / 12.0);

TEST(Objective, HomogeneousAndPhaseInvariant)
{
	const auto g = grid(512, 64.0, 65, 0.5);
	std::mt19937_64 rng(1);
	for (auto m : all_modes) {
		const auto u = prepared(random_field(g, rng, 4.0, 3.0), m);
		const double J = sixth_power_integral(u, m);
		EXPECT_NEAR(sixth_power_integral(cplx(2.0) * u, m), 64.0 * J, 1e-11 * J);
		EXPECT_NEAR(objective(cplx(3.0) * u, m), objective(u, m), 1e-13);
		if (m != Functional::airy_real)
			EXPECT_NEAR(objective(std::polar(1.0, 1.1) * u, m), objective(u, m), 1e-13);
	}
}

TEST(Objective, TranslationInvariant)
{
	const auto g = grid(512, 64.0, 65, 0.5);
	std::mt19937_64 rng(2);
	const auto u = random_field(g, rng, 4.0, 3.0);
	for (auto m : {Functional::airy, Functional::schrodinger})
		EXPECT_NEAR(objective(translate(u, 3.7), m), objective(u, m), 1e-12);
}

TEST(Objective, ZeroFieldIsDegenerate)
{
	const auto g = grid(64, 8.0, 9, 0.1);
	EXPECT_THROW(objective(Field(g)), DegenerateInput);
	EXPECT_THROW(gradient(Field(g)), DegenerateInput);
	EXPECT_THROW(maximize(Field(g)), DegenerateInput);
}

TEST(Gradient, HomogeneousOfDegreeFive)
{
	const auto g = grid(256, 32.0, 33, 0.2);
	std::mt19937_64 rng(3);
	const auto u = random_field(g, rng, 4.0, 2.0);
	EXPECT_LT(rel_l2(gradient(cplx(2.0) * u), cplx(32.0) * gradient(u)), 1e-12);
}

TEST(Gradient, MatchesCentralDifferences)
{
	const auto g = grid(256, 32.0, 33, 0.2);
	std::mt19937_64 rng(4);
	for (auto m : all_modes) {
		for (int i = 0; i < 20; ++i) {
			const auto u = prepared(random_field(g, rng, 4.0, 2.0), m);
			const auto v = prepared(random_field(g, rng, 4.0, 2.0), m);
			const double eps = 1e-5;
			const double fd = (sixth_power_integral(u + cplx(eps) * v, m) - sixth_power_integral(u - cplx(eps) * v, m))
			                  / (2.0 * eps);
			const double an = inner_product(gradient(u, m), v).real();
			EXPECT_LT(std::abs(fd - an) / std::abs(an), 1e-5) << to_string(m) << " pair " << i;
		}
	}
}

TEST(Gradient, RadialPartIsSixTimesJ)
{
	const auto g = grid(256, 32.0, 33, 0.2);
	std::mt19937_64 rng(5);
	const auto u = random_field(g, rng, 4.0, 2.0);
	EXPECT_NEAR(inner_product(gradient(u), u).real(), 6.0 * sixth_power_integral(u), 1e-10);
}

TEST(Stationarity, GaussianIsNearlyCriticalForSchrodinger)
{
	const auto g = grid(1024, 256.0, 2001, 5.0);
	// the window looks longer to narrower Gaussians (T / sigma^2 grows)
	double prev = 1.0;
	for (double s : {2.0, 1.0, 0.5}) {
		const double f = tangent_fraction(gaussian(g, s), Functional::schrodinger);
		EXPECT_LT(f, prev) << "sigma = " << s;
		prev = f;
	}
	EXPECT_LT(prev, 0.02);
	std::mt19937_64 rng(6);
	EXPECT_GT(tangent_fraction(random_field(g, rng, 2.0, 2.0), Functional::schrodinger), 0.1);
}

TEST(Ascent, PlaneWaveIsCritical)
{
	const auto g = grid(256, 32.0, 33, 0.2);
	for (auto m : {Functional::airy, Functional::schrodinger}) {
		const auto tr = maximize(unit(plane_wave(g, 5)), {.mode = m, .max_iterations = 10});
		EXPECT_EQ(tr.accepted_steps, 0u);
		EXPECT_TRUE(tr.converged);
		EXPECT_EQ(tr.classification, Classification::attained);
	}
}

TEST(Ascent, ObjectiveNeverDecreases)
{
	const auto g = grid(512, 64.0, 129, 0.25);
	std::mt19937_64 rng(7);
	for (auto m : all_modes) {
		const auto tr = maximize(random_field(g, rng, 3.0, 3.0), {.mode = m, .max_iterations = 15});
		for (std::size_t i = 1; i < tr.iterates.size(); ++i)
			EXPECT_GE(tr.iterates[i].objective, tr.iterates[i - 1].objective);
		EXPECT_NEAR(l2_norm(tr.final_field), 1.0, 1e-12);
		if (m == Functional::airy_real)
			for (const auto& z : tr.final_field.samples)
				EXPECT_EQ(z.imag(), 0.0);
	}
}

TEST(Ascent, RenormalizesInput)
{
	const auto g = grid(256, 32.0, 33, 0.2);
	std::mt19937_64 rng(8);
	const auto tr = maximize(cplx(3.0) * random_field(g, rng, 3.0, 2.0), {.max_iterations = 2});
	EXPECT_TRUE(tr.warnings & warn_renormalized);
}

Field schrodinger_init(const GridSpec& g, std::uint64_t seed)
{
	std::mt19937_64 rng(seed);
	std::normal_distribution<double> nd;
	SpectralField F(g);
	for (std::size_t j = 0; j < F.size(); ++j) {
		const double xi = g.xi(j);
		if (std::abs(xi) < 2.0)
			F[j] = cplx(nd(rng), nd(rng)) * std::exp(-4.0 * xi * xi);
	}
	auto u = inverse_fourier(F);
	for (std::size_t j = 0; j < u.size(); ++j)
		u[j] *= std::exp(-0.5 * g.x(j) * g.x(j) / 4.0);
	return unit(u);
}

TEST(Ascent, SchrodingerClimbsTowardAGaussian)
{
	const auto g = grid(1024, 256.0, 2001, 5.0);
	AscentOptions opt;
	opt.mode = Functional::schrodinger;
	opt.max_iterations = 50;
	for (std::uint64_t seed : {1u, 7u}) {
		const auto init = schrodinger_init(g, seed);
		const auto tr = maximize(init, opt);
		EXPECT_GT(tr.best_objective(), tr.iterates.front().objective);
		EXPECT_LE(tr.best_objective(), schrodinger_sharp * (1.0 + 1e-3));
		EXPECT_LT(fit_gaussian(tr.final_field).relative_distance, 5e-2) << "seed " << seed;
	}
}

TEST(Ascent, GaussianBasinIsStable)
{
	const auto g = grid(1024, 256.0, 2001, 5.0);
	const auto base = gaussian(g, 1.0);
	std::mt19937_64 rng(9);
	const auto start = unit(base + cplx(0.02) * random_field(g, rng, 2.0, 2.0));
	AscentOptions opt;
	opt.mode = Functional::schrodinger;
	opt.max_iterations = 20;
	const auto tr = maximize(start, opt);
	// the windowed optimum is not exactly Gaussian; the iterate stays in the Gaussian basin
	EXPECT_LT(fit_gaussian(tr.final_field).relative_distance, 5e-2);
	EXPECT_GE(tr.best_objective(), objective(start, Functional::schrodinger));
}

TEST(GaussianFit, RecoversChirpedGaussian)
{
	const auto g = grid(1024, 64.0);
	const auto u = sample(g, [](double x) { return std::exp(cplx(-0.3 * (x - 2.0) * (x - 2.0), 0.8 * x + 0.1 * x * x)); });
	const auto fit = fit_gaussian(u);
	EXPECT_LT(fit.relative_distance, 1e-8);
	EXPECT_NEAR(fit.log_amplitude[2], -0.3, 1e-8);
	EXPECT_NEAR(fit.phase[2], 0.1, 1e-8);
}

TEST(GaussianFit, FlagsNonGaussians)
{
	const auto g = grid(1024, 64.0);
	const auto u = sample(g, [](double x) { return cplx(std::exp(-0.5 * (x - 4) * (x - 4)) + std::exp(-0.5 * (x + 4) * (x + 4))); });
	EXPECT_GT(fit_gaussian(u).relative_distance, 0.3);
}

// Schrodinger baseline

double closed_form_ratio(double T, double sigma)
{
	return std::pow(std::pow(12.0, -0.5) * 2.0 / std::numbers::pi * std::atan(2.0 * T / (sigma * sigma)), 1.0 / 6.0);
}

TEST(Baseline, MatchesClosedFormAtChosenWidth)
{
	const auto g = grid(8192, 1400.0, 257, 40.0);
	const auto b = schrodinger_baseline(g);
	EXPECT_GT(b.s_schr_estimate, 0.0);
	EXPECT_NEAR(b.s_schr_estimate / closed_form_ratio(g.t_span, b.sigma), 1.0, 1e-4);
	EXPECT_LE(b.s_schr_estimate, schrodinger_sharp * (1.0 + 1e-4));
	EXPECT_GE(b.sigma, b.sigma_lo);
	EXPECT_LE(b.sigma, b.sigma_hi);
	EXPECT_EQ(b.warnings & warn_truncation, 0u);
	EXPECT_NEAR(l2_norm(b.gaussian_profile), 1.0, 1e-12);
}

TEST(Baseline, FlatNearOptimumAndStableInWindow)
{
	auto g = grid(8192, 1400.0, 257, 40.0);
	const auto b = schrodinger_baseline(g);
	for (double f : {0.9, 1.1}) {
		const double v = gaussian_schrodinger_ratio(g, b.sigma * f);
		EXPECT_LT(std::abs(v - b.s_schr_estimate) / b.s_schr_estimate, 1e-3);
	}
	g.t_span = 80.0;
	const auto b2 = schrodinger_baseline(g);
	EXPECT_LT(std::abs(b2.s_schr_estimate - b.s_schr_estimate) / b.s_schr_estimate, 1e-2);
}

TEST(Baseline, TinyGridIsRejected)
{
	EXPECT_THROW(schrodinger_baseline(grid(16, 4.0, 9, 5.0)), InvalidInput);
	EXPECT_THROW(gaussian(grid(16, 4.0), 0.0), InvalidParameter);
}

// Embedding

TEST(Embedding, ComplexRatioApproachesScaledSchrodinger)
{
	const auto g = grid(8192, 750.0, 201, 10.0);
	const auto tab = embedding_experiment(gaussian(g, 1.0), {2.0, 4.0, 8.0});
	EXPECT_NEAR(tab.limit, cube_root_factor * schrodinger_l6(gaussian(g, 1.0)), 1e-14);
	double prev = 1.0;
	for (const auto& r : tab.rows) {
		const double err = std::abs(r.ratio / tab.limit - 1.0);
		EXPECT_LT(err, prev);
		prev = err;
		EXPECT_NEAR(r.mass_factor, 1.0, 1e-10);
		EXPECT_EQ(r.warnings & warn_aliasing, 0u);
	}
	EXPECT_LT(prev, 2e-2);
}

TEST(Embedding, RealModeHalvesTheMass)
{
	const auto g = grid(8192, 750.0, 201, 10.0);
	const auto tab = embedding_experiment(gaussian(g, 1.0), {4.0, 8.0}, EmbeddingMode::real);
	for (const auto& r : tab.rows)
		EXPECT_NEAR(r.mass_factor, 0.5, 0.02);
}

TEST(Embedding, FieldMatchesDefinition)
{
	const auto g = grid(4096, 400.0);
	const auto u0 = gaussian(g, 1.0);
	const double N = 5.0, h = std::sqrt(15.0);
	// (3N)^{-1/4} e^{i N x} u0(x / sqrt(3N)) with u0 = pi^{-1/4} e^{-x^2/2}
	const double amp = std::pow(3.0 * N, -0.25) * std::pow(std::numbers::pi, -0.25);
	const auto expect = sample(g, [&](double x) { return std::polar(amp * std::exp(-0.5 * x * x / (h * h)), N * x); });
	EXPECT_LT(rel_l2(embedding_field(u0, N, EmbeddingMode::complex), expect), 1e-10);
	EXPECT_LT(rel_l2(embedding_field(u0, N, EmbeddingMode::real), real_part(expect)), 1e-10);
}

TEST(Embedding, RejectsBadParameters)
{
	const auto g = grid(1024, 200.0, 9, 1.0);
	const auto u0 = gaussian(g, 1.0);
	EXPECT_THROW(embedding_experiment(u0, {0.0}), InvalidParameter);
	EXPECT_THROW(embedding_experiment(u0, {-1.0}), InvalidParameter);
	const double top = max_admissible_embedding(u0);
	EXPECT_GT(top, 0.0);
	EXPECT_LT(top, g.band_limit());
	try {
		embedding_experiment(u0, {top * 1.5});
		ADD_FAILURE() << "aliasing N accepted";
	} catch (const InvalidInput& e) {
		EXPECT_NE(std::string(e.what()).find("max admissible"), std::string::npos);
	}
}

// Dichotomy

MaximizerTrace synthetic_trace(const GridSpec& g, double best, Classification c, Functional m = Functional::airy)
{
	MaximizerTrace tr;
	tr.mode = m;
	tr.final_field = Field(g);
	tr.iterates.push_back({0.5 * best, 0.0, 0.0});
	tr.iterates.push_back({best, 1.0, 0.0});
	tr.classification = c;
	return tr;
}

BaselineResult synthetic_baseline(const GridSpec& g, double s)
{
	BaselineResult b;
	b.s_schr_estimate = s;
	b.gaussian_profile = Field(g);
	return b;
}

TEST(Dichotomy, Verdicts)
{
	const auto g = grid(64, 8.0, 9, 0.1);
	const auto base = synthetic_baseline(g, 0.8);
	const double bound = cube_root_factor * 0.8;

	auto r = dichotomy_report(synthetic_trace(g, 0.9 * bound, Classification::attained), base);
	EXPECT_FALSE(r.bound_holds);
	EXPECT_EQ(r.verdict.rfind("bound violated", 0), 0u);

	r = dichotomy_report(synthetic_trace(g, 1.005 * bound, Classification::escaping_modulation), base);
	EXPECT_TRUE(r.bound_holds);
	EXPECT_EQ(r.verdict, "dichotomy: Schrödinger-limit branch");

	r = dichotomy_report(synthetic_trace(g, 1.1 * bound, Classification::attained), base);
	EXPECT_EQ(r.verdict, "dichotomy: attained-candidate branch (evidence only)");

	r = dichotomy_report(synthetic_trace(g, 1.1 * bound, Classification::budget), base);
	EXPECT_EQ(r.verdict, "dichotomy: inconclusive");
	EXPECT_NEAR(r.ratio, 1.1, 1e-12);
}

TEST(Dichotomy, RealModeUsesTheSmallerFactor)
{
	const auto g = grid(64, 8.0, 9, 0.1);
	const auto r = dichotomy_report(synthetic_trace(g, 0.5, Classification::budget, Functional::airy_real),
	                                synthetic_baseline(g, 0.8));
	EXPECT_TRUE(r.real_mode);
	EXPECT_NEAR(r.factor, cube_root_factor / std::numbers::sqrt2, 1e-15);
}

TEST(Dichotomy, GridMismatchIsRejected)
{
	const auto tr = synthetic_trace(grid(64, 8.0, 9, 0.1), 0.7, Classification::budget);
	EXPECT_THROW(dichotomy_report(tr, synthetic_baseline(grid(128, 8.0, 9, 0.1), 0.8)), GridMismatch);
	MaximizerTrace empty;
	empty.final_field = Field(grid(64, 8.0, 9, 0.1));
	EXPECT_THROW(dichotomy_report(empty, synthetic_baseline(grid(64, 8.0, 9, 0.1), 0.8)), InvalidInput);
}

} // namespace
