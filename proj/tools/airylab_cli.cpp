// Command-line experiment runner for the airylab library.
//
//   airylab --config run.ini [--seed N] [--out DIR] <subcommand>
//
// The config is flat key=value text with [sections]. Every subcommand writes
// its artifacts into --out through write-then-rename.

#include "airylab/airylab.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace airylab;

namespace {

struct UsageError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

class Config {
public:
	static Config load(const fs::path& path)
	{
		std::ifstream is(path);
		if (!is)
			throw UsageError("cannot open config " + path.string());
		Config c;
		for (const auto& item : CLI::ConfigINI().from_config(is)) {
			if (item.name == "++" || item.name == "--")
				continue; // section markers emitted by the parser
			std::string value;
			for (std::size_t i = 0; i < item.inputs.size(); ++i)
				value += (i ? "," : "") + item.inputs[i];
			c.values_[item.fullname()] = value;
		}
		if (c.values_.empty())
			throw UsageError("config " + path.string() + " is empty");
		return c;
	}

	bool has(const std::string& key) const { return values_.count(key) != 0; }

	std::string str(const std::string& key, const std::string& def) const
	{
		auto it = values_.find(key);
		return it == values_.end() ? def : it->second;
	}

	double num(const std::string& key, double def) const
	{
		auto it = values_.find(key);
		if (it == values_.end())
			return def;
		try {
			std::size_t used = 0;
			const double v = std::stod(it->second, &used);
			if (used != it->second.size())
				throw std::invalid_argument(it->second);
			return v;
		} catch (const std::exception&) {
			throw UsageError("config key " + key + ": not a number: " + it->second);
		}
	}

	std::size_t count(const std::string& key, std::size_t def) const
	{
		const double v = num(key, static_cast<double>(def));
		if (v < 0 || v != std::floor(v))
			throw UsageError("config key " + key + ": expected a non-negative integer");
		return static_cast<std::size_t>(v);
	}

	bool flag(const std::string& key, bool def) const
	{
		const auto s = str(key, def ? "true" : "false");
		if (s == "true" || s == "1" || s == "yes" || s == "on")
			return true;
		if (s == "false" || s == "0" || s == "no" || s == "off")
			return false;
		throw UsageError("config key " + key + ": expected a boolean");
	}

	/// Comma or space separated numbers.
	std::vector<double> list(const std::string& key, std::vector<double> def) const
	{
		if (!has(key))
			return def;
		auto s = str(key, "");
		for (auto& ch : s)
			if (ch == ',' || ch == ';')
				ch = ' ';
		std::istringstream is(s);
		std::vector<double> out;
		std::string tok;
		while (is >> tok) {
			try {
				out.push_back(std::stod(tok));
			} catch (const std::exception&) {
				throw UsageError("config key " + key + ": not a number list");
			}
		}
		return out;
	}

	GridSpec grid() const
	{
		GridSpec g;
		g.n_points = count("grid.n_points", g.n_points);
		g.domain_length = num("grid.domain_length", g.domain_length);
		g.t_count = count("grid.t_count", g.t_count);
		g.t_span = num("grid.t_span", g.t_span);
		g.band_fraction = num("grid.band_fraction", g.band_fraction);
		g.validate();
		return g;
	}

private:
	std::map<std::string, std::string> values_;
};

struct Context {
	Config cfg;
	std::uint64_t seed = 0;
	fs::path out;

	void write(const std::string& name, const std::string& content) const { atomic_write(out / name, content); }
	void write(const std::string& name, const json& j) const { write(name, j.dump(2) + "\n"); }
};

Field input_field(const Context& c)
{
	if (!c.cfg.has("io.input"))
		throw UsageError("this subcommand needs io.input = <field file>");
	return read_field(c.cfg.str("io.input", ""), c.cfg.grid());
}

template <class E>
E choose(const std::string& key, const std::string& value, const std::map<std::string, E>& options)
{
	auto it = options.find(value);
	if (it == options.end())
		throw UsageError("config key " + key + ": unknown value " + value);
	return it->second;
}

Dispersion dispersion_of(const Config& cfg, const std::string& key)
{
	return choose<Dispersion>(key, cfg.str(key, "airy"),
	                          {{"airy", Dispersion::airy}, {"schrodinger", Dispersion::schrodinger}});
}

/// Unit-norm Gaussian pi^{-1/4} exp(-x^2/2) scaled by width.
Field profile(const GridSpec& g, double sigma)
{
	return gaussian(g, sigma);
}

// Planted bubbles: "h xi x0 t0 theta mass" groups separated by ';'.
struct Planted {
	SymmetryParams params;
	double mass = 1.0;
};

std::vector<Planted> planted_bubbles(const Config& cfg)
{
	const std::vector<double> def = {8.0, -60.0, -20.0, 0.0, 0.0, 1.0, //
	                                  2.0, 0.0,   0.0,   0.0, 0.0, 1.0, //
	                                  0.5, 60.0,  20.0,  0.0, 0.0, 1.0};
	const auto v = cfg.list("synth.bubbles", def);
	if (v.empty() || v.size() % 6 != 0)
		throw UsageError("synth.bubbles: expected groups of six numbers h xi x0 t0 theta mass");
	std::vector<Planted> out;
	for (std::size_t i = 0; i < v.size(); i += 6) {
		Planted p;
		p.params = {v[i], v[i + 1], v[i + 2], v[i + 3], v[i + 4]};
		p.mass = v[i + 5];
		if (!(p.mass > 0.0))
			throw UsageError("synth.bubbles: mass must be positive");
		p.params.validate();
		out.push_back(p);
	}
	return out;
}

ExtractionConfig extraction_config(const Config& cfg)
{
	ExtractionConfig e;
	e.p = cfg.num("extract.p", e.p);
	e.c_thresh = cfg.num("extract.c_thresh", e.c_thresh);
	e.max_pieces = cfg.count("extract.max_pieces", e.max_pieces);
	e.scale_ratio_max = cfg.num("extract.scale_ratio_max", e.scale_ratio_max);
	e.freq_offset_max = cfg.num("extract.freq_offset_max", e.freq_offset_max);
	return e;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

void cmd_synth(const Context& c)
{
	const auto g = c.cfg.grid();
	const double sigma = c.cfg.num("synth.sigma", 1.0);
	const double noise = c.cfg.num("synth.noise", 0.0);
	if (noise < 0.0)
		throw UsageError("synth.noise must be >= 0");
	const auto bubbles = planted_bubbles(c.cfg);
	const auto phi = profile(g, sigma);
	Field u(g);
	json planted = json::array();
	for (const auto& b : bubbles) {
		const auto f = apply_symmetry(phi, b.params);
		u = u + cplx(std::sqrt(b.mass)) * f;
		u.warnings |= f.warnings;
		planted.push_back({{"params", to_json(b.params)}, {"mass", b.mass}});
	}
	if (noise > 0.0) {
		std::mt19937_64 rng(c.seed);
		std::normal_distribution<double> nd;
		SpectralField N(g);
		const double band = g.band_limit();
		for (std::size_t j = 0; j < N.size(); ++j)
			if (std::abs(g.xi(j)) <= band)
				N[j] = cplx(nd(rng), nd(rng));
		auto w = inverse_fourier(N);
		w = cplx(noise * l2_norm(u) / l2_norm(w)) * w;
		u = u + w;
	}
	if (c.cfg.flag("synth.normalize", true))
		u = cplx(1.0 / l2_norm(u)) * u;
	c.write("synth.fld", encode_field(u));
	c.write("synth.json", json{{"grid", g.describe()},
	                           {"sigma", sigma},
	                           {"noise_fraction", noise},
	                           {"seed", c.seed},
	                           {"l2", l2_norm(u)},
	                           {"warnings", describe_warnings(u.warnings)},
	                           {"planted", planted}});
}

void cmd_propagate(const Context& c)
{
	const auto u = input_field(c);
	const double t = c.cfg.num("propagate.time", 1.0);
	const auto d = dispersion_of(c.cfg, "propagate.dispersion");
	const auto v = evolve(u, t, d);
	c.write("propagated.fld", encode_field(v));
	c.write("propagate.json", json{{"time", t},
	                               {"dispersion", d == Dispersion::airy ? "airy" : "schrodinger"},
	                               {"l2_before", l2_norm(u)},
	                               {"l2_after", l2_norm(v)},
	                               {"warnings", describe_warnings(v.warnings)}});
}

void cmd_norm(const Context& c)
{
	const auto u = input_field(c);
	StrichartzExponents e;
	e.alpha = c.cfg.num("norm.alpha", e.alpha);
	e.q = c.cfg.num("norm.q", e.q);
	e.r = c.cfg.num("norm.r", e.r);
	const auto d = dispersion_of(c.cfg, "norm.dispersion");
	const double value = dispersive_norm(u, e.alpha, e.q, e.r, d);
	c.write("norm.json", json{{"alpha", e.alpha},
	                          {"q", e.q},
	                          {"r", e.r},
	                          {"admissible", check_admissible(e)},
	                          {"value", value},
	                          {"l2", l2_norm(u)}});
}

void cmd_concentrate(const Context& c)
{
	const auto u = input_field(c);
	const double p = c.cfg.num("concentrate.p", 4.0 / 3.0);
	const auto iv = concentration_functional(u, p);
	auto j = to_json(iv);
	j["p"] = p;
	j["refined_ratio"] = refined_ratio(u, p);
	c.write("concentrate.json", j);
}

void cmd_whitney(const Context& c)
{
	const double lo = c.cfg.num("whitney.lo", 0.0);
	const double hi = c.cfg.num("whitney.hi", 1.0);
	const int min_scale = static_cast<int>(c.cfg.num("whitney.min_scale", -5));
	const std::size_t samples = c.cfg.count("whitney.samples", 10000);
	const auto pairs = whitney_pairs(lo, hi, min_scale);
	std::ostringstream csv;
	csv << std::setprecision(17) << "scale,I_lo,I_hi,Ip_lo,Ip_hi,dist_over_length\n";
	bool bounds_ok = true;
	for (const auto& p : pairs) {
		const double r = p.I.dist(p.Iprime) / p.I.length();
		bounds_ok = bounds_ok && r >= 4.0 && r <= 10.0;
		csv << p.I.scale << ',' << p.I.lo() << ',' << p.I.hi() << ',' << p.Iprime.lo() << ',' << p.Iprime.hi()
		    << ',' << r << '\n';
	}
	// coverage: separated pairs drawn from the region are covered exactly once
	std::mt19937_64 rng(c.seed);
	std::uniform_real_distribution<double> U(lo, hi);
	const double finest = std::ldexp(1.0, min_scale);
	std::size_t drawn = 0, once = 0;
	while (drawn < samples) {
		const double a = U(rng), b = U(rng);
		if (std::abs(a - b) < 6.0 * finest)
			continue;
		++drawn;
		std::size_t hits = 0;
		for (const auto& p : pairs)
			hits += p.contains(a, b) ? 1 : 0;
		once += hits == 1 ? 1 : 0;
	}
	c.write("whitney.csv", csv.str());
	c.write("whitney.json", json{{"pairs", pairs.size()},
	                             {"bounds_ok", bounds_ok},
	                             {"samples", drawn},
	                             {"covered_exactly_once", once}});
}

void cmd_extract(const Context& c)
{
	const auto u = input_field(c);
	auto e = extraction_config(c.cfg);
	const bool real = c.cfg.flag("extract.real", false);
	const double s = strichartz_functional(real ? real_part(u) : u);
	e.delta = c.cfg.has("extract.delta") ? c.cfg.num("extract.delta", 0.1)
	                                     : c.cfg.num("extract.delta_fraction", 0.1) * s;
	const auto rep = real ? extract_bubbles_real(u, e) : extract_bubbles(u, e);
	const auto groups = group_by_scale_orthogonality(rep.pieces, e);
	json profiles = json::array();
	for (const auto& grp : groups) {
		const auto f = group_field(grp);
		json members = json::array();
		for (const auto& b : grp)
			members.push_back(b.rho());
		profiles.push_back({{"l2_mass", l2_norm(f) * l2_norm(f)},
		                    {"xi0", grp.front().params.xi},
		                    {"rho", grp.front().rho()},
		                    {"member_rhos", members}});
	}
	c.write("extraction.jsonl", extraction_jsonl(rep));
	c.write("extract.json", json{{"delta", e.delta},
	                             {"strichartz_of_input", rep.strichartz_of_input},
	                             {"pieces", rep.pieces.size()},
	                             {"profiles", profiles.size()},
	                             {"termination", to_string(rep.termination)},
	                             {"parseval_defect", rep.parseval_defect},
	                             {"regrouped", profiles}});
}

void cmd_separation(const Context& c)
{
	const auto g = c.cfg.grid();
	const double sigma = c.cfg.num("separation.sigma", 1.0);
	const double tol = c.cfg.num("separation.tol", default_separation_tol);
	const auto phi = profile(g, sigma);
	const auto bubbles = planted_bubbles(c.cfg);
	std::ostringstream csv;
	csv << std::setprecision(17) << "pair_id,branch,score,abs_inner_product,l6_defect\n";
	for (std::size_t a = 0; a < bubbles.size(); ++a) {
		for (std::size_t b = a + 1; b < bubbles.size(); ++b) {
			const PlacedProfile A{bubbles[a].params, phi}, B{bubbles[b].params, phi};
			const auto s = separation_score(A.params, B.params, tol);
			const auto ip = profile_inner_product(A, B);
			const auto d = l6_additivity_defect({A, B});
			csv << a << '-' << b << ',' << to_string(s.branch) << ',' << s.value << ',' << std::abs(ip.value) << ','
			    << d.defect << '\n';
		}
	}
	c.write("separation.csv", csv.str());
}

Field initial_field(const Context& c, const GridSpec& g)
{
	const auto kind = c.cfg.str("maximize.init", "gaussian");
	const double sigma = c.cfg.num("maximize.sigma", 1.0);
	const double xi = c.cfg.num("maximize.xi", 0.0);
	if (kind == "gaussian") {
		SymmetryParams p;
		p.xi = xi;
		return apply_symmetry(gaussian(g, sigma), p);
	}
	if (kind == "random") {
		std::mt19937_64 rng(c.seed);
		std::normal_distribution<double> nd;
		SpectralField F(g);
		for (std::size_t j = 0; j < F.size(); ++j) {
			const double k = g.xi(j) - xi;
			F[j] = cplx(nd(rng), nd(rng)) * std::exp(-0.5 * k * k * sigma * sigma);
		}
		auto u = inverse_fourier(F);
		for (std::size_t j = 0; j < u.size(); ++j)
			u[j] *= std::exp(-0.125 * g.x(j) * g.x(j) / (sigma * sigma));
		return cplx(1.0 / l2_norm(u)) * u;
	}
	if (kind == "file")
		return input_field(c);
	throw UsageError("maximize.init: expected gaussian, random or file");
}

AscentOptions ascent_options(const Config& cfg)
{
	AscentOptions o;
	o.mode = choose<Functional>("maximize.mode", cfg.str("maximize.mode", "airy"),
	                            {{"airy", Functional::airy},
	                             {"airy_real", Functional::airy_real},
	                             {"schrodinger", Functional::schrodinger}});
	o.max_iterations = cfg.count("maximize.max_iterations", o.max_iterations);
	return o;
}

json trace_summary(const MaximizerTrace& tr)
{
	return json{{"mode", to_string(tr.mode)},
	            {"classification", to_string(tr.classification)},
	            {"best_objective", tr.best_objective()},
	            {"initial_objective", tr.iterates.front().objective},
	            {"accepted_steps", tr.accepted_steps},
	            {"converged", tr.converged},
	            {"warnings", describe_warnings(tr.warnings)}};
}

void cmd_maximize(const Context& c)
{
	const auto g = c.cfg.grid();
	const auto tr = maximize(initial_field(c, g), ascent_options(c.cfg));
	c.write("trace.jsonl", trace_jsonl(tr));
	c.write("maximizer.fld", encode_field(tr.final_field));
	c.write("maximize.json", trace_summary(tr));
}

json baseline_json(const BaselineResult& b)
{
	return json{{"s_schr_estimate", b.s_schr_estimate},
	            {"sigma", b.sigma},
	            {"sigma_lo", b.sigma_lo},
	            {"sigma_hi", b.sigma_hi},
	            {"warnings", describe_warnings(b.warnings)}};
}

void cmd_baseline(const Context& c)
{
	const auto b = schrodinger_baseline(c.cfg.grid());
	c.write("baseline.fld", encode_field(b.gaussian_profile));
	c.write("baseline.json", baseline_json(b));
}

void cmd_embed(const Context& c)
{
	const auto g = c.cfg.grid();
	const auto Ns = c.cfg.list("embed.N_list", {4, 8, 16, 32});
	const auto mode = choose<EmbeddingMode>("embed.mode", c.cfg.str("embed.mode", "complex"),
	                                        {{"complex", EmbeddingMode::complex}, {"real", EmbeddingMode::real}});
	const auto u0 = gaussian(g, c.cfg.num("embed.sigma", 1.0));
	const auto tab = embedding_experiment(u0, Ns, mode);
	bool monotone = true;
	for (std::size_t i = 1; i < tab.rows.size(); ++i)
		monotone = monotone && std::abs(tab.rows[i].ratio - tab.limit) <= std::abs(tab.rows[i - 1].ratio - tab.limit);
	c.write("embedding.csv", embedding_csv(tab));
	c.write("embed.json", json{{"mode", mode == EmbeddingMode::complex ? "complex" : "real"},
	                           {"schrodinger_ratio", tab.schrodinger_ratio},
	                           {"limit", tab.limit},
	                           {"max_admissible_N", tab.max_admissible_N},
	                           {"monotone_error", monotone}});
}

void cmd_dichotomy(const Context& c)
{
	const auto g = c.cfg.grid();
	const auto base = schrodinger_baseline(g);
	const auto tr = maximize(initial_field(c, g), ascent_options(c.cfg));
	const auto rep = dichotomy_report(tr, base, c.cfg.num("dichotomy.tolerance", 0.02));
	c.write("trace.jsonl", trace_jsonl(tr));
	c.write("dichotomy.json", json{{"report", to_json(rep)}, {"baseline", baseline_json(base)}, {"trace", trace_summary(tr)}});
}

void print_error(const char* kind, const std::string& msg)
{
	std::cerr << json{{"error", kind}, {"message", msg}}.dump() << "\n";
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"airylab: Airy/Schrodinger Strichartz experiments"};
	app.require_subcommand(1);
	std::string config_path, out_dir = ".";
	std::uint64_t seed = 0;
	bool seed_given = false;
	app.add_option("--config", config_path, "INI config file")->required();
	app.add_option_function<std::uint64_t>(
	    "--seed", [&](const std::uint64_t& s) { seed = s, seed_given = true; }, "RNG seed");
	app.add_option("--out", out_dir, "output directory");

	struct Command {
		const char* name;
		const char* help;
		std::function<void(const Context&)> run;
	};
	const std::vector<Command> commands = {
	    {"propagate", "evolve io.input by the Airy or Schrodinger flow", cmd_propagate},
	    {"norm", "space-time norm of io.input", cmd_norm},
	    {"concentrate", "maximizing frequency interval of io.input", cmd_concentrate},
	    {"whitney-check", "enumerate maximal dyadic pairs and check coverage", cmd_whitney},
	    {"extract", "carve io.input into frequency-localized pieces", cmd_extract},
	    {"separation", "orthogonality scores and decoupling of planted profiles", cmd_separation},
	    {"maximize", "projected gradient ascent of the Strichartz ratio", cmd_maximize},
	    {"baseline", "Gaussian estimate of the Schrodinger constant", cmd_baseline},
	    {"embed", "Schrodinger-to-Airy embedding sweep", cmd_embed},
	    {"dichotomy", "baseline, ascent and bound check in one run", cmd_dichotomy},
	    {"synth", "plant symmetry-transformed bubbles plus optional noise", cmd_synth}};
	std::map<std::string, CLI::App*> subs;
	for (const auto& cmd : commands)
		subs[cmd.name] = app.add_subcommand(cmd.name, cmd.help);

	try {
		app.parse(argc, argv);
	} catch (const CLI::CallForHelp& e) {
		return app.exit(e);
	} catch (const CLI::ParseError& e) {
		std::cerr << app.help() << "\n";
		print_error("usage", e.what());
		return 2;
	}

	try {
		Context ctx{Config::load(config_path), 0, out_dir};
		ctx.seed = seed_given ? seed : static_cast<std::uint64_t>(ctx.cfg.num("run.seed", 0));
		for (const auto& cmd : commands)
			if (subs[cmd.name]->parsed())
				cmd.run(ctx);
	} catch (const UsageError& e) {
		print_error("usage", e.what());
		return 2;
	} catch (const Error& e) {
		print_error("numeric", e.what());
		return 1;
	} catch (const std::exception& e) {
		print_error("failure", e.what());
		return 1;
	}
	return 0;
}
