#ifndef AIRYLAB_FFT_HPP
#define AIRYLAB_FFT_HPP

#include "field.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <span>
#include <utility>

namespace airylab::detail {

// FFTW planning is not thread safe, execution with new arrays is. Plans are
// created once per (size, sign), in place and alignment-agnostic, and kept
// until exit.
class PlanCache {
public:
	static PlanCache& instance()
	{
		static PlanCache cache;
		return cache;
	}

	fftw_plan get(std::size_t n, int sign)
	{
		std::lock_guard lock(mutex_);
		const auto key = std::make_pair(n, sign);
		if (auto it = plans_.find(key); it != plans_.end())
			return it->second;
		auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
		fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
		                               FFTW_ESTIMATE | FFTW_UNALIGNED);
		fftw_free(buf);
		plans_.emplace(key, p);
		return p;
	}

	PlanCache(const PlanCache&) = delete;
	PlanCache& operator=(const PlanCache&) = delete;

private:
	PlanCache() = default;
	~PlanCache()
	{
		for (auto& [key, p] : plans_)
			fftw_destroy_plan(p);
	}

	std::mutex mutex_;
	std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

/// Unnormalized in-place DFT, sign -1 (forward) or +1 (backward).
inline void dft_inplace(std::span<cplx> data, int sign)
{
	static_assert(sizeof(cplx) == sizeof(fftw_complex));
	fftw_plan p = PlanCache::instance().get(data.size(), sign);
	auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
	fftw_execute_dft(p, ptr, ptr);
}

} // namespace airylab::detail

#endif
