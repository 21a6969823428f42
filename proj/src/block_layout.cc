#include "lazydist/block_layout.h"

#include <algorithm>

#include <fmt/format.h>

namespace lazydist {

namespace {

constexpr std::size_t max_dims = 2;

void check_block_coords(const array_base& base, const coords& block) {
	if(block.size() != base.ndim()) throw std::invalid_argument("block coordinates have wrong dimensionality");
	for(std::size_t d = 0; d < block.size(); ++d) {
		if(block[d] < 0 || block[d] >= base.block_grid()[d]) {
			throw std::invalid_argument(fmt::format("block coordinate {} out of grid [0, {}) in dimension {}", block[d], base.block_grid()[d], d));
		}
	}
}

} // namespace

array_base::array_base(array_id id, coords shape, coords block_size, int nprocs, dtype type)
    : m_id(id), m_shape(std::move(shape)), m_block_size(std::move(block_size)), m_nprocs(nprocs), m_type(type) {
	if(m_shape.empty() || m_shape.size() > max_dims) throw std::invalid_argument("arrays must have 1 or 2 dimensions");
	if(m_block_size.size() != m_shape.size()) throw std::invalid_argument("block_size rank does not match shape rank");
	if(nprocs < 1) throw std::invalid_argument("nprocs must be >= 1");
	m_grid.resize(m_shape.size());
	for(std::size_t d = 0; d < m_shape.size(); ++d) {
		if(m_shape[d] < 1) throw std::invalid_argument(fmt::format("dimension {} has extent {}", d, m_shape[d]));
		if(m_block_size[d] < 1) throw std::invalid_argument(fmt::format("dimension {} has block size {}", d, m_block_size[d]));
		m_grid[d] = ceil_div(m_shape[d], m_block_size[d]);
	}
}

coords array_base::block_extent(const coords& block) const {
	coords ext(ndim());
	for(std::size_t d = 0; d < ndim(); ++d) {
		ext[d] = std::min(m_block_size[d], m_shape[d] - block[d] * m_block_size[d]);
	}
	return ext;
}

index_t array_base::block_index(const coords& block) const { return flatten_row_major(block, m_grid); }

coords array_base::block_coords(index_t block_index) const { return unflatten_row_major(block_index, m_grid); }

std::shared_ptr<const array_base> create_distributed_array(array_id id, coords shape, coords block_size, int nprocs, dtype type) {
	return std::make_shared<const array_base>(id, std::move(shape), std::move(block_size), nprocs, type);
}

rank_t owner_of(const array_base& base, const coords& block) {
	check_block_coords(base, block);
	return base.owner_of_index(base.block_index(block));
}

array_view::array_view(std::shared_ptr<const array_base> base) : m_base(std::move(base)) {
	for(auto n : m_base->shape()) {
		m_slices.push_back(slice{0, n, 1});
	}
}

array_view::array_view(std::shared_ptr<const array_base> base, region slices) : m_base(std::move(base)), m_slices(std::move(slices)) {
	if(m_slices.size() != m_base->ndim()) throw std::invalid_argument("view rank does not match base rank");
	for(std::size_t d = 0; d < m_slices.size(); ++d) {
		auto& s = m_slices[d];
		if(s.step < 1) throw std::invalid_argument("view steps must be >= 1");
		if(s.start < 0 || s.start > s.stop || s.stop > m_base->shape()[d]) {
			throw std::invalid_argument(fmt::format("slice {} out of bounds for extent {}", to_string(s), m_base->shape()[d]));
		}
		s = make_slice(s.start, s.count(), s.step);
	}
}

bool array_view::same_selection(const array_view& other) const {
	if(m_base != other.m_base) return false;
	for(std::size_t d = 0; d < m_slices.size(); ++d) {
		const auto &a = m_slices[d], &b = other.m_slices[d];
		if(a.count() != b.count()) return false;
		if(a.count() == 0) continue;
		if(a.start != b.start) return false;
		if(a.count() > 1 && a.step != b.step) return false;
	}
	return true;
}

array_view slice_view(const array_view& view, const region& spec) {
	if(spec.size() != view.ndim()) throw std::invalid_argument("slice rank does not match view rank");
	const auto ext = view.extent();
	region composed(spec.size());
	for(std::size_t d = 0; d < spec.size(); ++d) {
		const auto& s = spec[d];
		if(s.step < 1) throw std::invalid_argument("slice steps must be >= 1");
		if(s.start < 0 || s.start > s.stop || s.stop > ext[d]) {
			throw std::invalid_argument(fmt::format("slice {} out of bounds for view extent {}", to_string(s), ext[d]));
		}
		const auto& outer = view.slices()[d];
		composed[d] = make_slice(outer.start + s.start * outer.step, s.count(), outer.step * s.step);
	}
	return array_view(view.base_ptr(), std::move(composed));
}

std::vector<dim_piece> dim_pieces(const array_view& view, std::size_t d, index_t v0, index_t v1) {
	std::vector<dim_piece> pieces;
	const auto& s = view.slices()[d];
	const auto bs = view.base().block_size()[d];
	index_t i = v0;
	while(i < v1) {
		const auto b = s.start + i * s.step;
		const auto blk = b / bs;
		const auto blk_end = (blk + 1) * bs;
		const auto n = std::min(v1 - i, ceil_div(blk_end - b, s.step));
		const auto local = b - blk * bs;
		pieces.push_back(dim_piece{blk, make_slice(local, n, s.step), i, n});
		i += n;
	}
	return pieces;
}

std::vector<sub_view_block> decompose_region(const array_view& view, const coords& origin, const coords& extent) {
	const auto nd = view.ndim();
	std::vector<std::vector<dim_piece>> per_dim(nd);
	for(std::size_t d = 0; d < nd; ++d) {
		if(extent[d] <= 0) return {};
		per_dim[d] = dim_pieces(view, d, origin[d], origin[d] + extent[d]);
	}
	std::vector<sub_view_block> parts;
	std::vector<std::size_t> idx(nd, 0);
	while(true) {
		sub_view_block svb;
		svb.block.resize(nd);
		svb.local.resize(nd);
		svb.view_origin.resize(nd);
		svb.counts.resize(nd);
		for(std::size_t d = 0; d < nd; ++d) {
			const auto& p = per_dim[d][idx[d]];
			svb.block[d] = p.block;
			svb.local[d] = p.local;
			svb.view_origin[d] = p.view_offset;
			svb.counts[d] = p.count;
		}
		svb.block_index = view.base().block_index(svb.block);
		svb.owner = view.base().owner_of_index(svb.block_index);
		parts.push_back(std::move(svb));

		std::size_t d = nd;
		while(d > 0) {
			--d;
			if(++idx[d] < per_dim[d].size()) break;
			idx[d] = 0;
			if(d == 0) return parts;
		}
	}
}

std::vector<view_block> decompose(const array_view& view) {
	const auto nd = view.ndim();
	const auto ext = view.extent();
	const auto& bs = view.base().block_size();
	coords grid(nd);
	for(std::size_t d = 0; d < nd; ++d) {
		if(ext[d] == 0) return {};
		grid[d] = ceil_div(ext[d], bs[d]);
	}
	std::vector<view_block> blocks;
	const auto n = product(grid);
	blocks.reserve(static_cast<std::size_t>(n));
	for(index_t flat = 0; flat < n; ++flat) {
		view_block vb;
		vb.index = unflatten_row_major(flat, grid);
		vb.origin.resize(nd);
		vb.extent.resize(nd);
		for(std::size_t d = 0; d < nd; ++d) {
			vb.origin[d] = vb.index[d] * bs[d];
			vb.extent[d] = std::min(bs[d], ext[d] - vb.origin[d]);
		}
		vb.parts = decompose_region(view, vb.origin, vb.extent);
		blocks.push_back(std::move(vb));
	}
	return blocks;
}

bool is_aligned(const array_view& view) {
	for(const auto& vb : decompose(view)) {
		if(vb.parts.size() != 1) return false;
		const auto& svb = vb.parts.front();
		const auto full = view.base().block_extent(svb.block);
		for(std::size_t d = 0; d < view.ndim(); ++d) {
			if(svb.local[d].start != 0 || svb.local[d].step != 1 || svb.counts[d] != full[d]) return false;
		}
	}
	return true;
}

} // namespace lazydist
