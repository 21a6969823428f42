#include "lazydist/types.h"

#include <algorithm>

#include <fmt/format.h>

namespace lazydist {

const char* to_string(dtype t) { return t == dtype::i64 ? "i64" : "f64"; }

index_t region_size(const region& r) {
	index_t n = 1;
	for(const auto& s : r) {
		n *= s.count();
	}
	return n;
}

coords region_counts(const region& r) {
	coords c(r.size());
	for(std::size_t d = 0; d < r.size(); ++d) {
		c[d] = r[d].count();
	}
	return c;
}

std::string to_string(const slice& s) { return fmt::format("{}:{}:{}", s.start, s.stop, s.step); }

std::string to_string(const region& r) {
	std::string out = "[";
	for(std::size_t d = 0; d < r.size(); ++d) {
		if(d > 0) out += ",";
		out += to_string(r[d]);
	}
	return out + "]";
}

bool slices_intersect(const slice& a, const slice& b) {
	if(a.count() == 0 || b.count() == 0) return false;
	const auto lo = std::max(a.start, b.start);
	const auto hi = std::min(a.last(), b.last()) + 1;
	if(lo >= hi) return false;
	if(a.step == 1 && b.step == 1) return true;
	// Walk the coarser progression; its residues modulo the finer step repeat after `fine.step` terms.
	const auto& coarse = a.step >= b.step ? a : b;
	const auto& fine = a.step >= b.step ? b : a;
	index_t x = coarse.start + ceil_div(std::max<index_t>(lo - coarse.start, 0), coarse.step) * coarse.step;
	for(index_t i = 0; i < fine.step && x < hi; ++i, x += coarse.step) {
		if((x - fine.start) % fine.step == 0) return true;
	}
	return false;
}

bool regions_intersect(const region& a, const region& b) {
	if(a.size() != b.size()) return false;
	for(std::size_t d = 0; d < a.size(); ++d) {
		if(!slices_intersect(a[d], b[d])) return false;
	}
	return true;
}

index_t product(const coords& c) {
	index_t n = 1;
	for(auto v : c) {
		n *= v;
	}
	return n;
}

index_t ceil_div(index_t a, index_t b) { return (a + b - 1) / b; }

index_t flatten_row_major(const coords& c, const coords& grid) {
	index_t flat = 0;
	for(std::size_t d = 0; d < c.size(); ++d) {
		flat = flat * grid[d] + c[d];
	}
	return flat;
}

coords unflatten_row_major(index_t flat, const coords& grid) {
	coords c(grid.size());
	for(std::size_t d = grid.size(); d > 0; --d) {
		c[d - 1] = flat % grid[d - 1];
		flat /= grid[d - 1];
	}
	return c;
}

} // namespace lazydist
