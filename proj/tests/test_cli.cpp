#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <unistd.h>

namespace fs = std::filesystem;
using namespace airylab;

namespace {

class Cli : public ::testing::Test {
protected:
	void SetUp() override
	{
		const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
		dir_ = fs::temp_directory_path() / ("airylab_cli_" + std::to_string(::getpid()) + "_" + info->name());
		fs::remove_all(dir_);
		fs::create_directories(dir_);
	}

	void TearDown() override { fs::remove_all(dir_); }

	void config(const std::string& name, const std::string& text) const
	{
		std::ofstream(dir_ / name) << text;
	}

	/// Runs the CLI inside the test directory; returns the exit code.
	int run(const std::string& args) const
	{
		const std::string cmd = "cd '" + dir_.string() + "' && '" AIRYLAB_CLI_PATH "' " + args + " >stdout.txt 2>stderr.txt";
		const int status = std::system(cmd.c_str());
		return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
	}

	json load(const fs::path& rel) const { return json::parse(read_file(dir_ / rel)); }

	fs::path dir_;
};

const char* three_bubble_grid = R"([run]
seed = 7

[grid]
n_points = 16384
domain_length = 256
t_count = 65
t_span = 1
)";

TEST_F(Cli, SynthThenExtractGivesThreeProfiles)
{
	config("synth.ini", three_bubble_grid);
	ASSERT_EQ(run("--config synth.ini --out a synth"), 0);
	config("extract.ini", std::string(three_bubble_grid) + "\n[io]\ninput = a/synth.fld\n");
	ASSERT_EQ(run("--config extract.ini --out b extract"), 0);
	const auto j = load("b/extract.json");
	EXPECT_EQ(j["profiles"].get<int>(), 3);
	EXPECT_LT(j["parseval_defect"].get<double>(), 1e-10);
	for (const auto& p : j["regrouped"])
		EXPECT_GT(p["l2_mass"].get<double>(), 0.85 / 3.0);
	// one line per piece plus the remainder line
	const auto lines = read_file(dir_ / "b/extraction.jsonl");
	EXPECT_EQ(static_cast<int>(std::count(lines.begin(), lines.end(), '\n')), j["pieces"].get<int>() + 1);
}

TEST_F(Cli, EmbeddingTableIsMonotone)
{
	config("embed.ini", "[grid]\nn_points = 8192\ndomain_length = 750\nt_count = 201\nt_span = 10\n"
	                    "[embed]\nN_list = 2, 4, 8\n");
	ASSERT_EQ(run("--config embed.ini --out e embed"), 0);
	std::istringstream csv(read_file(dir_ / "e/embedding.csv"));
	std::string line;
	std::getline(csv, line);
	EXPECT_EQ(line, "N,l2,airy_norm,ratio,limit,mass_factor,warnings");
	double prev = 1.0;
	int rows = 0;
	while (std::getline(csv, line)) {
		std::vector<double> v;
		std::istringstream ls(line);
		std::string cell;
		while (std::getline(ls, cell, ','))
			v.push_back(std::stod(cell));
		ASSERT_EQ(v.size(), 7u);
		const double err = std::abs(v[3] / v[4] - 1.0);
		EXPECT_LT(err, prev);
		prev = err;
		++rows;
	}
	EXPECT_EQ(rows, 3);
}

TEST_F(Cli, EmptyConfigIsAUsageError)
{
	config("empty.ini", "");
	EXPECT_EQ(run("--config empty.ini --out o norm"), 2);
	EXPECT_FALSE(fs::exists(dir_ / "o"));
	const auto err = json::parse(read_file(dir_ / "stderr.txt"));
	EXPECT_EQ(err["error"], "usage");
}

TEST_F(Cli, MissingSubcommandAndBadValuesAreUsageErrors)
{
	config("c.ini", "[grid]\nn_points = many\n");
	EXPECT_EQ(run("--config c.ini"), 2);
	EXPECT_EQ(run("--config c.ini baseline"), 2);
	EXPECT_EQ(run("--config missing.ini norm"), 2);
}

TEST_F(Cli, NumericFailureReportsJsonAndWritesNothing)
{
	config("alias.ini", "[grid]\nn_points = 1024\ndomain_length = 200\nt_count = 9\nt_span = 1\n"
	                    "[embed]\nN_list = 1000\n");
	EXPECT_EQ(run("--config alias.ini --out o embed"), 1);
	EXPECT_FALSE(fs::exists(dir_ / "o/embedding.csv"));
	const auto err = json::parse(read_file(dir_ / "stderr.txt"));
	EXPECT_EQ(err["error"], "numeric");
	EXPECT_NE(err["message"].get<std::string>().find("max admissible"), std::string::npos);
}

TEST_F(Cli, SeededRunsAreByteIdentical)
{
	config("noise.ini", "[grid]\nn_points = 2048\ndomain_length = 128\nt_count = 17\nt_span = 0.5\n"
	                    "[synth]\nbubbles = 2 -10 0 0 0 1; 1 10 5 0 0 1\nnoise = 0.1\n");
	ASSERT_EQ(run("--config noise.ini --seed 11 --out r1 synth"), 0);
	ASSERT_EQ(run("--config noise.ini --seed 11 --out r2 synth"), 0);
	ASSERT_EQ(run("--config noise.ini --seed 12 --out r3 synth"), 0);
	EXPECT_EQ(read_file(dir_ / "r1/synth.fld"), read_file(dir_ / "r2/synth.fld"));
	EXPECT_EQ(read_file(dir_ / "r1/synth.json"), read_file(dir_ / "r2/synth.json"));
	EXPECT_NE(read_file(dir_ / "r1/synth.fld"), read_file(dir_ / "r3/synth.fld"));
}

TEST_F(Cli, OutputsReplaceAtomically)
{
	config("w.ini", "[whitney]\nmin_scale = -4\nsamples = 200\n");
	fs::create_directories(dir_ / "w");
	std::ofstream(dir_ / "w/whitney.json") << "stale";
	ASSERT_EQ(run("--config w.ini --out w whitney-check"), 0);
	const auto j = load("w/whitney.json");
	EXPECT_GT(j["pairs"].get<int>(), 0);
	for (const auto& entry : fs::recursive_directory_iterator(dir_))
		EXPECT_NE(entry.path().extension(), ".tmp") << entry.path();
}

TEST_F(Cli, PropagateAndNormRoundTrip)
{
	config("p.ini", "[grid]\nn_points = 512\ndomain_length = 64\nt_count = 33\nt_span = 0.5\n"
	                "[synth]\nbubbles = 1 0 0 0 0 1\n");
	ASSERT_EQ(run("--config p.ini --out s synth"), 0);
	config("q.ini", "[grid]\nn_points = 512\ndomain_length = 64\nt_count = 33\nt_span = 0.5\n"
	                "[io]\ninput = s/synth.fld\n[propagate]\ntime = 0.3\n");
	ASSERT_EQ(run("--config q.ini --out s propagate"), 0);
	ASSERT_EQ(run("--config q.ini --out s norm"), 0);
	const auto u = read_field(dir_ / "s/synth.fld");
	const auto v = read_field(dir_ / "s/propagated.fld");
	EXPECT_LT(testing_support::rel_l2(v, airy_propagate(u, 0.3)), 1e-14);
	EXPECT_NEAR(load("s/norm.json")["value"].get<double>(), strichartz_functional(Field(testing_support::grid(512, 64.0, 33, 0.5), u.samples)), 1e-12);
}

} // namespace
