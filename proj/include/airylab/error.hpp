#ifndef AIRYLAB_ERROR_HPP
#define AIRYLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace airylab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// Non-finite samples, wrong lengths, non-real data where real is required.
class InvalidInput : public Error {
public:
	using Error::Error;
};

/// Out-of-domain parameters (h <= 0, delta <= 0, N <= 0, ...).
class InvalidParameter : public Error {
public:
	using Error::Error;
};

/// Lebesgue or Strichartz exponents outside their admissible range.
class InvalidExponent : public Error {
public:
	using Error::Error;
};

/// |xi|^alpha with alpha < 0 applied to data with mass at xi = 0.
class SingularMultiplier : public Error {
public:
	using Error::Error;
};

/// Zero denominators in normalized functionals.
class DegenerateInput : public Error {
public:
	using Error::Error;
};

/// Fields or reports built on different grids.
class GridMismatch : public InvalidInput {
public:
	using InvalidInput::InvalidInput;
};

/// Soft diagnostics attached to results. Bit flags, merged with |.
enum Warning : unsigned {
	warn_none = 0u,
	warn_aliasing = 1u << 0,    // spectral mass outside the usable band
	warn_truncation = 1u << 1,  // mass near the periodic boundary
	warn_renormalized = 1u << 2 // input was rescaled onto the unit sphere
};

inline std::string describe_warnings(unsigned w)
{
	std::string out;
	auto add = [&](const char* s) {
		if (!out.empty())
			out += ',';
		out += s;
	};
	if (w & warn_aliasing)
		add("aliasing");
	if (w & warn_truncation)
		add("truncation");
	if (w & warn_renormalized)
		add("renormalized");
	return out.empty() ? "none" : out;
}

} // namespace airylab

#endif
