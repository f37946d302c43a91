#ifndef AIRYLAB_IO_HPP
#define AIRYLAB_IO_HPP

#include "bubbles.hpp"
#include "error.hpp"
#include "extremal.hpp"
#include "field.hpp"
#include "grid.hpp"
#include "refined.hpp"

#include <json.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace airylab {

// Binary field layout, little-endian:
//   8 bytes  magic "AIRYFLD1"
//   u64      n_points
//   f64      domain_length
//   n x (f64 re, f64 im)
inline constexpr char field_magic[8] = {'A', 'I', 'R', 'Y', 'F', 'L', 'D', '1'};

namespace detail {

static_assert(std::endian::native == std::endian::little, "binary field I/O assumes a little-endian host");

template <class T>
void put(std::string& out, T v)
{
	char buf[sizeof(T)];
	std::memcpy(buf, &v, sizeof(T));
	out.append(buf, sizeof(T));
}

template <class T>
T get(const std::string& in, std::size_t& pos)
{
	if (pos + sizeof(T) > in.size())
		throw InvalidInput("field file: truncated");
	T v;
	std::memcpy(&v, in.data() + pos, sizeof(T));
	pos += sizeof(T);
	return v;
}

} // namespace detail

/// Writes content to path through a temporary file in the same directory
/// and a rename, so readers never observe a partial file.
inline void atomic_write(const std::filesystem::path& path, const std::string& content)
{
	namespace fs = std::filesystem;
	if (path.has_parent_path())
		fs::create_directories(path.parent_path());
	fs::path tmp = path;
	tmp += ".tmp";
	{
		std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
		if (!os)
			throw Error("cannot open " + tmp.string() + " for writing");
		os.write(content.data(), static_cast<std::streamsize>(content.size()));
		os.flush();
		if (!os)
			throw Error("write failed: " + tmp.string());
	}
	fs::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path)
{
	std::ifstream is(path, std::ios::binary);
	if (!is)
		throw InvalidInput("cannot open " + path.string());
	std::ostringstream ss;
	ss << is.rdbuf();
	return ss.str();
}

inline std::string encode_field(const Field& f)
{
	std::string out(field_magic, sizeof(field_magic));
	detail::put<std::uint64_t>(out, f.grid.n_points);
	detail::put<double>(out, f.grid.domain_length);
	for (const auto& z : f.samples) {
		detail::put<double>(out, z.real());
		detail::put<double>(out, z.imag());
	}
	return out;
}

/// Decodes a field; time parameters come from base, space from the file.
inline Field decode_field(const std::string& bytes, GridSpec base = {})
{
	if (bytes.size() < sizeof(field_magic) || std::memcmp(bytes.data(), field_magic, sizeof(field_magic)) != 0)
		throw InvalidInput("field file: bad magic");
	std::size_t pos = sizeof(field_magic);
	const auto n = detail::get<std::uint64_t>(bytes, pos);
	const auto L = detail::get<double>(bytes, pos);
	if (bytes.size() != pos + n * 16)
		throw InvalidInput("field file: size does not match n_points");
	base.n_points = static_cast<std::size_t>(n);
	base.domain_length = L;
	base.validate();
	std::vector<cplx> s(base.n_points);
	for (auto& z : s) {
		const double re = detail::get<double>(bytes, pos);
		const double im = detail::get<double>(bytes, pos);
		z = cplx(re, im);
	}
	require_finite(s, "field file");
	return Field(base, std::move(s));
}

inline void write_field(const std::filesystem::path& path, const Field& f)
{
	atomic_write(path, encode_field(f));
}

inline Field read_field(const std::filesystem::path& path, const GridSpec& base = {})
{
	return decode_field(read_file(path), base);
}

// ---------------------------------------------------------------------------
// Text records
// ---------------------------------------------------------------------------

using json = nlohmann::ordered_json;

inline json to_json(const IntervalValue& v)
{
	return json{{"lo", v.lo}, {"hi", v.hi}, {"value", v.value}};
}

inline json to_json(const SymmetryParams& p)
{
	return json{{"h", p.h}, {"xi", p.xi}, {"x0", p.x0}, {"t0", p.t0}, {"theta", p.theta}};
}

/// One line per piece, then one remainder line.
inline std::string extraction_jsonl(const ExtractionReport& rep)
{
	std::string out;
	for (std::size_t j = 0; j < rep.pieces.size(); ++j) {
		const auto& b = rep.pieces[j];
		json line{{"piece", j},
		          {"rho", b.rho()},
		          {"xi0", b.params.xi},
		          {"support_lo", b.support.lo},
		          {"support_hi", b.support.hi},
		          {"l2_mass", b.mass},
		          {"low_band", b.low_band}};
		out += line.dump() + "\n";
	}
	json tail{{"remainder",
	           {{"l2_mass", l2_norm(rep.remainder) * l2_norm(rep.remainder)},
	            {"strichartz", rep.strichartz_of_remainder},
	            {"parseval_defect", rep.parseval_defect},
	            {"iterations", rep.iterations},
	            {"termination", to_string(rep.termination)},
	            {"real_mode", rep.real_mode}}}};
	out += tail.dump() + "\n";
	return out;
}

inline std::string trace_jsonl(const MaximizerTrace& tr)
{
	std::string out;
	for (std::size_t i = 0; i < tr.iterates.size(); ++i) {
		const auto& it = tr.iterates[i];
		json line{{"iter", i}, {"objective", it.objective}, {"step", it.step}, {"centroid", it.centroid}};
		out += line.dump() + "\n";
	}
	return out;
}

inline json to_json(const DichotomyReport& r)
{
	return json{{"mode", r.real_mode ? "real" : "complex"},
	            {"s_airy", r.s_airy},
	            {"s_schr", r.s_schr},
	            {"factor", r.factor},
	            {"ratio", r.ratio},
	            {"tolerance", r.tolerance},
	            {"bound_holds", r.bound_holds},
	            {"classification", to_string(r.classification)},
	            {"verdict", r.verdict}};
}

inline std::string embedding_csv(const EmbeddingTable& tab)
{
	std::ostringstream os;
	os << std::setprecision(17);
	os << "N,l2,airy_norm,ratio,limit,mass_factor,warnings\n";
	for (const auto& r : tab.rows)
		os << r.N << ',' << r.l2 << ',' << r.airy_norm << ',' << r.ratio << ',' << tab.limit << ','
		   << r.mass_factor << ',' << r.warnings << '\n';
	return os.str();
}

} // namespace airylab

#endif
