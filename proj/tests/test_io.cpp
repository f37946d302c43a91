#include "support.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace airylab;
using namespace testing_support;

namespace {

TEST(FieldFile, RoundTripIsBitExact)
{
	std::mt19937_64 rng(1);
	const auto g = grid(512, 48.0, 17, 0.75);
	const auto u = random_field(g, rng, 6.0);
	const auto back = decode_field(encode_field(u), g);
	EXPECT_EQ(back.samples, u.samples);
	EXPECT_EQ(back.grid.n_points, 512u);
	EXPECT_EQ(back.grid.domain_length, 48.0);
	EXPECT_EQ(back.grid.t_count, 17u);
}

TEST(FieldFile, LayoutIsHeaderPlusPairs)
{
	const auto g = grid(8, 2.0);
	const auto bytes = encode_field(Field(g));
	EXPECT_EQ(bytes.size(), 8u + 8u + 8u + 8u * 16u);
	EXPECT_EQ(bytes.substr(0, 8), "AIRYFLD1");
}

TEST(FieldFile, CorruptInputIsRejected)
{
	const auto g = grid(8, 2.0);
	auto bytes = encode_field(plane_wave(g, 1));
	EXPECT_THROW(decode_field(bytes.substr(0, bytes.size() - 1)), InvalidInput);
	auto bad = bytes;
	bad[0] = 'X';
	EXPECT_THROW(decode_field(bad), InvalidInput);
	auto nan = bytes;
	const double q = std::numeric_limits<double>::quiet_NaN();
	std::memcpy(nan.data() + 24, &q, sizeof q);
	EXPECT_THROW(decode_field(nan), InvalidInput);
}

TEST(FieldFile, WriteAndReadThroughDisk)
{
	namespace fs = std::filesystem;
	const auto dir = fs::temp_directory_path() / ("airylab_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
	const auto g = grid(64, 8.0);
	const auto u = plane_wave(g, 3);
	write_field(dir / "nested" / "u.fld", u);
	EXPECT_EQ(read_field(dir / "nested" / "u.fld").samples, u.samples);
	EXPECT_FALSE(fs::exists(dir / "nested" / "u.fld.tmp"));
	fs::remove_all(dir);
	EXPECT_THROW(read_field(dir / "missing.fld"), InvalidInput);
}

TEST(Records, ExtractionLinesEndWithRemainder)
{
	ExtractionReport rep;
	rep.remainder = Field(grid(16, 4.0));
	rep.pieces.resize(2);
	for (auto& b : rep.pieces)
		b.physical = b.profile = Field(grid(16, 4.0));
	const auto text = extraction_jsonl(rep);
	std::istringstream is(text);
	std::string line;
	std::vector<json> lines;
	while (std::getline(is, line))
		lines.push_back(json::parse(line));
	ASSERT_EQ(lines.size(), 3u);
	EXPECT_EQ(lines[0]["piece"], 0);
	EXPECT_TRUE(lines[2].contains("remainder"));
	EXPECT_EQ(lines[2]["remainder"]["termination"], "converged");
}

} // namespace
