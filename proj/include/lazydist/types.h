#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace lazydist {

using index_t = std::int64_t;
using rank_t = int;
using op_id = std::uint64_t;

using coords = std::vector<index_t>;

enum class dtype { i64, f64 };

/// Every supported element kind is 8 bytes wide.
inline constexpr std::size_t element_width = 8;

using scalar = std::variant<std::int64_t, double>;

const char* to_string(dtype t);

/// A strided range [start, stop) with step >= 1. Ranges are kept "tight": stop is one past the last
/// selected index, or equal to start when empty.
struct slice {
	index_t start = 0;
	index_t stop = 0;
	index_t step = 1;

	index_t count() const { return stop <= start ? 0 : (stop - start + step - 1) / step; }
	index_t last() const { return start + (count() - 1) * step; }
	bool contains(index_t i) const { return i >= start && i < stop && (i - start) % step == 0; }

	friend bool operator==(const slice&, const slice&) = default;
};

/// Builds a tight slice from a start, element count and step.
inline slice make_slice(index_t start, index_t count, index_t step = 1) {
	if(count <= 0) return slice{start, start, step};
	return slice{start, start + (count - 1) * step + 1, step};
}

/// One strided slice per dimension.
using region = std::vector<slice>;

index_t region_size(const region& r);
coords region_counts(const region& r);
std::string to_string(const slice& s);
std::string to_string(const region& r);

/// True iff the two strided ranges share at least one index.
bool slices_intersect(const slice& a, const slice& b);
bool regions_intersect(const region& a, const region& b);

index_t product(const coords& c);
index_t ceil_div(index_t a, index_t b);

/// Row-major flattening of `c` in a grid of extents `grid`.
index_t flatten_row_major(const coords& c, const coords& grid);
coords unflatten_row_major(index_t flat, const coords& grid);

/// Visits every element of `r` inside a row-major buffer of shape `extents`, in row-major order of
/// `r`, passing the flat buffer offset.
template <typename Fn>
void for_each_offset(const coords& extents, const region& r, Fn&& fn) {
	const auto nd = r.size();
	if(nd == 0) return;
	for(const auto& s : r) {
		if(s.count() == 0) return;
	}
	coords stride(nd, 1);
	for(std::size_t d = nd - 1; d > 0; --d) {
		stride[d - 1] = stride[d] * extents[d];
	}
	coords idx(nd, 0);
	const auto counts = region_counts(r);
	while(true) {
		index_t off = 0;
		for(std::size_t d = 0; d < nd; ++d) {
			off += (r[d].start + idx[d] * r[d].step) * stride[d];
		}
		fn(off);
		std::size_t d = nd;
		while(d > 0) {
			--d;
			if(++idx[d] < counts[d]) break;
			idx[d] = 0;
			if(d == 0) return;
		}
	}
}

class deadlock_error : public std::runtime_error {
  public:
	using std::runtime_error::runtime_error;
};

class invariant_violation : public std::logic_error {
  public:
	using std::logic_error::logic_error;
};

class match_ambiguity_error : public std::runtime_error {
  public:
	using std::runtime_error::runtime_error;
};

} // namespace lazydist
