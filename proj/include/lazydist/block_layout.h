#pragma once

#include "lazydist/types.h"

#include <memory>
#include <vector>

namespace lazydist {

using array_id = std::uint64_t;

/// The root of a distributed array: shape, element kind and the block-cyclic distribution over
/// `nprocs` ranks. Base-blocks are numbered in row-major order of their block coordinates.
class array_base {
  public:
	array_base(array_id id, coords shape, coords block_size, int nprocs, dtype type);

	array_id id() const { return m_id; }
	const coords& shape() const { return m_shape; }
	const coords& block_size() const { return m_block_size; }
	int nprocs() const { return m_nprocs; }
	dtype type() const { return m_type; }
	std::size_t ndim() const { return m_shape.size(); }

	/// Number of base-blocks per dimension.
	const coords& block_grid() const { return m_grid; }
	index_t num_blocks() const { return product(m_grid); }

	/// Actual extent of a base-block; edge blocks may be smaller than block_size.
	coords block_extent(const coords& block) const;
	index_t block_index(const coords& block) const;
	coords block_coords(index_t block_index) const;
	rank_t owner_of_index(index_t block_index) const { return static_cast<rank_t>(block_index % m_nprocs); }

  private:
	array_id m_id;
	coords m_shape;
	coords m_block_size;
	int m_nprocs;
	dtype m_type;
	coords m_grid;
};

/// Allocates the metadata of a distributed array. Throws std::invalid_argument on zero-sized
/// dimensions, zero block sizes, rank mismatch or nprocs < 1.
std::shared_ptr<const array_base> create_distributed_array(array_id id, coords shape, coords block_size, int nprocs, dtype type);

/// Block-cyclic owner: row-major flattening of the block coordinates modulo P.
rank_t owner_of(const array_base& base, const coords& block);

/// A (possibly strided) window onto an array_base. Views always refer to a base directly.
class array_view {
  public:
	array_view() = default;
	/// The identity view of a whole base.
	explicit array_view(std::shared_ptr<const array_base> base);
	array_view(std::shared_ptr<const array_base> base, region slices);

	const array_base& base() const { return *m_base; }
	const std::shared_ptr<const array_base>& base_ptr() const { return m_base; }
	/// Per-dimension selection in base coordinates.
	const region& slices() const { return m_slices; }
	coords extent() const { return region_counts(m_slices); }
	index_t size() const { return region_size(m_slices); }
	std::size_t ndim() const { return m_slices.size(); }
	bool valid() const { return m_base != nullptr; }

	/// True iff both views select the same elements of the same base.
	bool same_selection(const array_view& other) const;

  private:
	std::shared_ptr<const array_base> m_base;
	region m_slices;
};

/// Slices a view. `spec` is given in the view's own coordinates ([start, stop) with step >= 1,
/// stop not necessarily tight); the result references the same base with composed slices.
array_view slice_view(const array_view& view, const region& spec);

/// The piece of one dimension of a view range that falls into a single base-block.
struct dim_piece {
	index_t block = 0;       ///< base-block coordinate in this dimension
	slice local;             ///< range within the base-block
	index_t view_offset = 0; ///< first view index covered
	index_t count = 0;
};

/// Splits the view indices [v0, v1) of dimension `d` at base-block boundaries.
std::vector<dim_piece> dim_pieces(const array_view& view, std::size_t d, index_t v0, index_t v1);

/// The intersection of a view region with one base-block; resides on exactly one rank.
struct sub_view_block {
	coords block;            ///< base-block coordinates
	index_t block_index = 0; ///< row-major base-block number
	rank_t owner = 0;
	region local;            ///< range inside the base-block (block-local coordinates)
	coords view_origin;      ///< first covered element in view coordinates
	coords counts;           ///< elements per dimension
};

struct view_block {
	coords index;    ///< view-block coordinates
	coords origin;   ///< first element in view coordinates
	coords extent;
	std::vector<sub_view_block> parts;
};

/// Sub-view-blocks covering an arbitrary rectangle [origin, origin+extent) of a view.
std::vector<sub_view_block> decompose_region(const array_view& view, const coords& origin, const coords& extent);

/// Partitions a view into view-blocks of the base's block_size (measured in view coordinates, the
/// last ones possibly partial) and each view-block into sub-view-blocks at base-block boundaries.
std::vector<view_block> decompose(const array_view& view);

/// True iff every view-block is exactly one whole base-block accessed with step 1.
bool is_aligned(const array_view& view);

} // namespace lazydist
